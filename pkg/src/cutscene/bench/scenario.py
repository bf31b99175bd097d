"""Scenario bundles: a directory of storyboard, annotations and ground truth."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from ..errors import ScenarioError
from ..toolkit import TOOL_NAMES

TIERS = ("S1", "S2", "S3", "S4", "S5")
PRECEDENCE = "precedence"
INSTANCE = "instance"

BUNDLE_FILES = (
    "storyboard.md",
    "essential_ops.json",
    "dag.json",
    "gt_trajectory.json",
    "gt_snapshot.json",
    "expected_tracks.json",
)


class UnknownScenarioError(ScenarioError):
    code = "unknown-scenario"


class MalformedTrajectoryError(ScenarioError):
    code = "malformed-trajectory"


class MalformedBundleError(ScenarioError):
    code = "malformed-bundle"


@dataclass(frozen=True)
class EssentialOp:
    tool: str
    match_args: Mapping[str, Any] = field(default_factory=dict)
    multiplicity: int = 1

    def __post_init__(self) -> None:
        if self.multiplicity < 1:
            raise MalformedBundleError(f"{self.tool}: multiplicity must be at least 1")


@dataclass(frozen=True)
class Edge:
    """``bind_on`` names the argument on the ``to_tool`` call; ``bind_from``
    names the matching argument on the ``from_tool`` call (same name if unset)."""

    from_tool: str
    to_tool: str
    kind: str = PRECEDENCE
    bind_on: str | None = None
    bind_from: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in (PRECEDENCE, INSTANCE):
            raise MalformedBundleError(f"unknown edge kind {self.kind!r}")
        if self.kind == INSTANCE and not self.bind_on:
            raise MalformedBundleError(f"instance edge {self.from_tool}->{self.to_tool} needs bind_on")

    @property
    def from_arg(self) -> str | None:
        return self.bind_from or self.bind_on


@dataclass
class ScenarioBundle:
    id: str
    storyboard_text: str
    tier: str
    gt_essential_ops: list[EssentialOp]
    dependency_dag: list[Edge]
    gt_trajectory: list[dict[str, Any]]
    gt_snapshot: dict[str, Any]
    expected_tracks: dict[str, list[str]]
    allowed_tools: frozenset[str] = frozenset(TOOL_NAMES)

    @property
    def duration(self) -> float:
        return float(self.gt_snapshot.get("duration", 0.0))


def tier_of(scenario_id: str) -> str:
    m = re.match(r"(S[1-5])_", scenario_id)
    if not m:
        raise MalformedBundleError(f"scenario id {scenario_id!r} does not start with a tier prefix S1_ .. S5_")
    return m.group(1)


def parse_trajectory(obj: Any) -> list[dict[str, Any]]:
    """Normalize a trajectory document to ``[{"tool", "args"}, ...]``."""
    if isinstance(obj, dict) and "trajectory" in obj:
        obj = obj["trajectory"]
    if not isinstance(obj, list):
        raise MalformedTrajectoryError("a trajectory must be a JSON list of calls")
    calls = []
    for i, rec in enumerate(obj):
        if not isinstance(rec, dict) or not isinstance(rec.get("tool"), str):
            raise MalformedTrajectoryError(f"call {i} needs a string 'tool'", index=i)
        args = rec.get("args", {})
        if args is None:
            args = {}
        if not isinstance(args, dict):
            raise MalformedTrajectoryError(f"call {i}: 'args' must be an object", index=i)
        calls.append({"tool": rec["tool"], "args": args})
    return calls


def _acyclic(edges: list[Edge]) -> bool:
    graph: dict[str, set[str]] = {}
    for e in edges:
        graph.setdefault(e.from_tool, set()).add(e.to_tool)
        graph.setdefault(e.to_tool, set())
    state: dict[str, int] = {}

    def visit(n: str) -> bool:
        state[n] = 1
        for m in graph[n]:
            if state.get(m) == 1 or (m not in state and not visit(m)):
                return False
        state[n] = 2
        return True

    return all(n in state or visit(n) for n in list(graph))


def scenarios_root() -> Path:
    return Path(str(resources.files("cutscene") / "data" / "scenarios"))


def find_scenario(scenario_id: str, root: str | Path | None = None) -> Path:
    path = Path(root) if root is not None else scenarios_root()
    candidate = path if (path / "storyboard.md").is_file() and path.name == scenario_id else path / scenario_id
    if not (candidate / "storyboard.md").is_file():
        raise UnknownScenarioError(f"no scenario {scenario_id!r} under {path}", scenario=scenario_id)
    return candidate


def list_scenarios(root: str | Path | None = None) -> list[str]:
    path = Path(root) if root is not None else scenarios_root()
    return sorted(p.name for p in path.iterdir() if (p / "storyboard.md").is_file())


def _read_json(path: Path) -> Any:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise MalformedBundleError(f"missing bundle file {path.name}", path=str(path)) from exc
    except json.JSONDecodeError as exc:
        raise MalformedBundleError(f"{path.name}: {exc}", path=str(path)) from exc


def load_bundle(path_or_id: str | Path, root: str | Path | None = None) -> ScenarioBundle:
    path = Path(path_or_id)
    if not (path / "storyboard.md").is_file():
        path = find_scenario(str(path_or_id), root)
    sid = path.name
    ops_raw = _read_json(path / "essential_ops.json")
    dag_raw = _read_json(path / "dag.json")
    if isinstance(dag_raw, dict):
        dag_raw = dag_raw.get("edges", [])
    try:
        ops = [EssentialOp(o["tool"], dict(o.get("match_args", {})), int(o.get("multiplicity", 1))) for o in ops_raw]
        edges = [
            Edge(e["from_tool"], e["to_tool"], e.get("kind", PRECEDENCE), e.get("bind_on"), e.get("bind_from"))
            for e in dag_raw
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedBundleError(f"{sid}: bad annotation entry: {exc!r}") from exc
    unknown = sorted({o.tool for o in ops} - set(TOOL_NAMES))
    if unknown:
        raise MalformedBundleError(f"{sid}: essential ops name unknown tools {unknown}")
    if not _acyclic(edges):
        raise MalformedBundleError(f"{sid}: dependency graph has a cycle")
    allowed = frozenset(TOOL_NAMES)
    if (path / "allowed_tools.json").is_file():
        allowed = frozenset(_read_json(path / "allowed_tools.json"))
    return ScenarioBundle(
        id=sid,
        storyboard_text=(path / "storyboard.md").read_text(encoding="utf-8"),
        tier=tier_of(sid),
        gt_essential_ops=ops,
        dependency_dag=edges,
        gt_trajectory=parse_trajectory(_read_json(path / "gt_trajectory.json")),
        gt_snapshot=_read_json(path / "gt_snapshot.json"),
        expected_tracks={k: list(v) for k, v in _read_json(path / "expected_tracks.json").items()},
        allowed_tools=allowed,
    )
