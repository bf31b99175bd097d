"""Layer 1: trajectory-level tool-call metrics.

All five scores live in [0, 1].  Conventions on an empty trajectory: TSA,
PV, CE and DC are 1 (nothing wrong was done), CC is 0 (nothing required
was done).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Mapping, Sequence

from ..server import canonical_args
from ..toolkit import TOOL_NAMES, Toolkit
from .scenario import INSTANCE, PRECEDENCE, Edge, EssentialOp, ScenarioBundle, parse_trajectory
from .. import _json


@dataclass
class L1Report:
    tsa: float
    pv: float
    cc: float
    ce: float
    dc: float
    n_calls: int
    violations: dict[str, list[dict[str, Any]]] = field(default_factory=dict)

    def metrics(self) -> dict[str, float]:
        return {"tsa": self.tsa, "pv": self.pv, "cc": self.cc, "ce": self.ce, "dc": self.dc}

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _ratio(num: int, den: int, empty: float) -> float:
    return empty if den == 0 else num / den


def tool_selection(calls: Sequence[Mapping[str, Any]], allowed: frozenset[str]) -> tuple[float, list[dict]]:
    registered = set(TOOL_NAMES)
    bad = [
        {"index": i, "tool": c["tool"], "reason": "unregistered" if c["tool"] not in registered else "not-allowed"}
        for i, c in enumerate(calls)
        if c["tool"] not in registered or c["tool"] not in allowed
    ]
    return _ratio(len(calls) - len(bad), len(calls), 1.0), bad


def replay(calls: Sequence[Mapping[str, Any]], toolkit: Toolkit | None = None) -> list[dict[str, Any]]:
    """Run every call against one fresh toolkit; returns the envelopes."""
    tk = toolkit if toolkit is not None else Toolkit()
    return [tk.call(c["tool"], canonical_args(c["args"])) for c in calls]


def parameter_validity(
    calls: Sequence[Mapping[str, Any]], envelopes: Sequence[Mapping[str, Any]]
) -> tuple[float, list[dict]]:
    """Share of calls to real tools that the replayed toolkit accepted.

    Calls to unregistered tools have no schema and are left to TSA.
    """
    registered = set(TOOL_NAMES)
    scored = [i for i, c in enumerate(calls) if c["tool"] in registered]
    bad = [
        {"index": i, "tool": calls[i]["tool"], "error": (envelopes[i].get("data") or {}).get("error")}
        for i in scored
        if envelopes[i]["status"] != "ok"
    ]
    return _ratio(len(scored) - len(bad), len(scored), 1.0), bad


def _subset_match(expected: Mapping[str, Any], actual: Mapping[str, Any]) -> bool:
    exp, act = canonical_args(dict(expected)), canonical_args(dict(actual))
    return all(k in act and act[k] == v for k, v in exp.items())


def completeness(
    calls: Sequence[Mapping[str, Any]], succeeded: Sequence[bool], ops: Sequence[EssentialOp]
) -> tuple[float, list[dict]]:
    """Greedy in-order matching: each successful call consumes the first
    essential op it satisfies that still has multiplicity left."""
    remaining = [op.multiplicity for op in ops]
    for call, ok in zip(calls, succeeded):
        if not ok:
            continue
        for j, op in enumerate(ops):
            if remaining[j] and op.tool == call["tool"] and _subset_match(op.match_args, call["args"]):
                remaining[j] -= 1
                break
    required = sum(op.multiplicity for op in ops)
    missing = [
        {"tool": op.tool, "match_args": dict(op.match_args), "missing": r} for op, r in zip(ops, remaining) if r
    ]
    return _ratio(required - sum(remaining), required, 1.0), missing


def efficiency(calls: Sequence[Mapping[str, Any]]) -> tuple[float, list[dict]]:
    seen: set[tuple[str, str]] = set()
    dups = []
    for i, c in enumerate(calls):
        key = (c["tool"], _json.dumps(canonical_args(c["args"]), indent=None))
        if key in seen:
            dups.append({"index": i, "tool": c["tool"]})
        seen.add(key)
    return 1.0 - _ratio(len(dups), len(calls), 0.0), dups


def _bound_values(value: Any) -> list[Any]:
    return list(value) if isinstance(value, list) else [value]


def dependency_checks(calls: Sequence[Mapping[str, Any]], edges: Sequence[Edge]) -> tuple[int, list[dict]]:
    """(applicable checks, violations) over the dependency graph.

    A precedence edge is one check once its ``to_tool`` occurs: some
    ``from_tool`` call must come before the first ``to_tool`` call.  An
    instance edge is one check per bound value on each ``to_tool`` call
    (list values contribute one check per element): an earlier
    ``from_tool`` call must carry the same value.
    """
    applicable = 0
    violations: list[dict] = []
    for e in edges:
        if e.kind == PRECEDENCE:
            first = next((i for i, c in enumerate(calls) if c["tool"] == e.to_tool), None)
            if first is None:
                continue
            applicable += 1
            if not any(c["tool"] == e.from_tool for c in calls[:first]):
                violations.append({"edge": f"{e.from_tool}->{e.to_tool}", "kind": PRECEDENCE, "index": first})
            continue
        provided: list[Any] = []
        for i, c in enumerate(calls):
            if c["tool"] == e.to_tool and e.bind_on in c["args"]:
                for v in _bound_values(c["args"][e.bind_on]):
                    applicable += 1
                    if v not in provided:
                        violations.append(
                            {"edge": f"{e.from_tool}->{e.to_tool}", "kind": INSTANCE, "index": i, "value": v}
                        )
            if c["tool"] == e.from_tool and e.from_arg in c["args"]:
                provided.extend(_bound_values(c["args"][e.from_arg]))
    return applicable, violations


def dependency_compliance(calls: Sequence[Mapping[str, Any]], edges: Sequence[Edge]) -> tuple[float, list[dict]]:
    applicable, violations = dependency_checks(calls, edges)
    return 1.0 - _ratio(len(violations), applicable, 0.0), violations


def eval_l1(
    trajectory: Any, bundle: ScenarioBundle, toolkit_factory: Callable[[], Toolkit] | None = None
) -> L1Report:
    calls = parse_trajectory(trajectory)
    envelopes = replay(calls, (toolkit_factory or Toolkit)())
    succeeded = [e["status"] == "ok" for e in envelopes]
    tsa, tsa_v = tool_selection(calls, bundle.allowed_tools)
    pv, pv_v = parameter_validity(calls, envelopes)
    if calls:
        cc, cc_v = completeness(calls, succeeded, bundle.gt_essential_ops)
    else:
        cc, cc_v = 0.0, [{"tool": op.tool, "match_args": dict(op.match_args), "missing": op.multiplicity}
                         for op in bundle.gt_essential_ops]
    ce, ce_v = efficiency(calls)
    dc, dc_v = dependency_compliance(calls, bundle.dependency_dag)
    return L1Report(
        tsa, pv, cc, ce, dc, len(calls),
        {"tsa": tsa_v, "pv": pv_v, "cc": cc_v, "ce": ce_v, "dc": dc_v},
    )
