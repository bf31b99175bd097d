"""Command line: serve, replay, evaluate, report.

Exit codes: 0 success, 1 usage or input error, 2 a ``--gate`` threshold
was not met.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from . import _json
from .errors import CutsceneError

EXIT_OK, EXIT_USAGE, EXIT_GATE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2, which we reserve for gates
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    workbook_dir: Path | None = None
    scenario_dir: Path | None = None
    transport: str = "stdio"
    frame_rate: int = 30
    epsilon: float | None = None
    delta: float = 0.1
    keep_recent_n: int = 5
    token_budget: int = 8000
    output_dir: Path = Path(".")

    def validate(self) -> "RunConfig":
        for name in ("workbook_dir", "scenario_dir"):
            p = getattr(self, name)
            if p is not None and not Path(p).is_dir():
                raise UsageError(f"{name.replace('_', '-')} {p} is not a directory")
        for name in ("frame_rate", "delta", "keep_recent_n", "token_budget"):
            if getattr(self, name) <= 0:
                raise UsageError(f"{name.replace('_', '-')} must be positive")
        if self.epsilon is not None and self.epsilon <= 0:
            raise UsageError("epsilon must be positive")
        return self

    @property
    def effective_epsilon(self) -> float:
        return self.epsilon if self.epsilon is not None else 1.0 / self.frame_rate


def _config(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        workbook_dir=getattr(ns, "workbook", None),
        scenario_dir=getattr(ns, "scenarios", None),
        transport=getattr(ns, "transport", "stdio"),
        frame_rate=getattr(ns, "frame_rate", 30),
        epsilon=getattr(ns, "epsilon", None),
        delta=getattr(ns, "delta", 0.1),
        keep_recent_n=getattr(ns, "keep_recent_n", 5),
        token_budget=getattr(ns, "token_budget", 8000),
        output_dir=Path(getattr(ns, "output_dir", ".") or "."),
    ).validate()


def _server(cfg: RunConfig, project_context: str = ""):
    from .assets import default_registry
    from .server import CutsceneServer
    from .toolkit import Toolkit

    try:
        registry = default_registry(cfg.workbook_dir)
    except CutsceneError as exc:
        raise UsageError(f"cannot load workbook: {exc.message}") from exc
    return CutsceneServer(Toolkit(registry=registry), project_context=project_context)


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _read_json(path: Path, what: str) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise UsageError(f"{what} {path} does not exist") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} {path} is not valid JSON: {exc}") from exc


# -- serve ---------------------------------------------------------------------


def cmd_serve(ns: argparse.Namespace) -> int:
    from .server import HttpTransport, serve_stdio

    cfg = _config(ns)
    context = Path(ns.project_context).read_text(encoding="utf-8") if ns.project_context else ""
    server = _server(cfg, context)
    try:
        if cfg.transport == "stdio":
            serve_stdio(server)
            return EXIT_OK
        host, _, port = ns.listen.rpartition(":")
        if not host or not port.isdigit():
            raise UsageError(f"--listen expects HOST:PORT, got {ns.listen!r}")
        transport = HttpTransport(server, host, int(port))
        print(f"serving on {transport.url}/rpc (events at /events)", file=sys.stderr, flush=True)
        try:
            transport.serve_forever()
        except KeyboardInterrupt:
            pass
        finally:
            transport.stop()
        return EXIT_OK
    finally:
        server.close()


# -- replay --------------------------------------------------------------------


def _remote_client(spec: str, cfg: RunConfig):
    from .server import HttpClient, StdioClient

    if spec == "stdio":
        argv = [sys.executable, "-m", "cutscene", "serve", "--transport", "stdio"]
        if cfg.workbook_dir:
            argv += ["--workbook", str(cfg.workbook_dir)]
        return StdioClient(argv)
    if spec.startswith(("http://", "https://")):
        return HttpClient(spec)
    raise UsageError(f"--remote expects 'stdio' or an http(s) URL, got {spec!r}")


def cmd_replay(ns: argparse.Namespace) -> int:
    from .agent import DirectorConfig, replay_script
    from .bench import find_scenario, parse_trajectory
    from .server import InProcessClient

    cfg = _config(ns)
    try:
        scenario = find_scenario(ns.scenario, cfg.scenario_dir)
    except CutsceneError as exc:
        raise UsageError(exc.message) from exc
    script_path = Path(ns.script) if ns.script else scenario / "gt_trajectory.json"
    raw = _read_json(script_path, "script")
    try:
        items = raw if _is_script(raw) else parse_trajectory(raw)
    except CutsceneError as exc:
        raise UsageError(f"{script_path}: {exc.message}") from exc
    storyboard = (scenario / "storyboard.md").read_text(encoding="utf-8")
    director_cfg = DirectorConfig(keep_recent_n=cfg.keep_recent_n, token_budget=cfg.token_budget)

    server = client = None
    if ns.remote:
        client = _remote_client(ns.remote, cfg)
    else:
        server = _server(cfg)
        client = InProcessClient(server)
    try:
        result = replay_script(items, storyboard, client=client, config=director_cfg)
    finally:
        if server is not None:
            server.close()
        if hasattr(client, "close"):
            client.close()
    out = cfg.output_dir
    _write(out / "trajectory.json", _json.dumps(result.trajectory) + "\n")
    _write(out / "snapshot.json", result.snapshot)
    failed = sum(r["status"] != "ok" for r in result.trajectory)
    print(
        f"{scenario.name}: {len(result.trajectory)} calls ({failed} failed), status {result.outcome.status}; "
        f"wrote {out / 'trajectory.json'} and {out / 'snapshot.json'}"
    )
    return EXIT_OK


def _is_script(raw: Any) -> bool:
    return isinstance(raw, list) and all(isinstance(i, dict) and ("tool" in i or "final" in i) for i in raw) and any(
        "final" in i for i in raw
    )


# -- evaluate ------------------------------------------------------------------


def _gate_failures(metrics: dict[str, float], threshold: float | None) -> list[str]:
    if threshold is None:
        return []
    return [f"{k}={v:.4f}" for k, v in metrics.items() if v < threshold - 1e-12]


def cmd_evaluate(ns: argparse.Namespace) -> int:
    from .bench import eval_l1, eval_l2, load_bundle, parse_l3_response

    cfg = _config(ns)
    try:
        bundle = load_bundle(ns.scenario, cfg.scenario_dir)
    except CutsceneError as exc:
        raise UsageError(exc.message) from exc
    meta = {"scenario": bundle.id, "tier": bundle.tier, "model": ns.model}
    out = cfg.output_dir
    gate_metrics: dict[str, float] = {}

    trajectory = _read_json(Path(ns.trajectory), "trajectory")
    try:
        l1 = eval_l1(trajectory, bundle)
    except CutsceneError as exc:
        raise UsageError(f"{ns.trajectory}: {exc.message}") from exc
    _write(out / "l1_report.json", _json.dumps({**meta, "metrics": l1.metrics(), "report": l1.to_dict()}) + "\n")
    gate_metrics.update(l1.metrics())
    lines = ["L1 " + " ".join(f"{k.upper()}={v:.4f}" for k, v in l1.metrics().items())]

    snapshot_path = Path(ns.snapshot) if ns.snapshot else None
    if snapshot_path is not None and snapshot_path.is_file():
        try:
            l2 = eval_l2(snapshot_path.read_text(encoding="utf-8"), bundle, cfg.effective_epsilon, cfg.delta)
        except CutsceneError as exc:
            raise UsageError(f"{snapshot_path}: {exc.message}") from exc
        doc = {**meta, "epsilon": cfg.effective_epsilon, "delta": cfg.delta, "metrics": l2.metrics(), "report": l2.to_dict()}
        _write(out / "l2_report.json", _json.dumps(doc) + "\n")
        gate_metrics.update(l2.metrics())
        lines.append("L2 " + " ".join(f"{k.upper()}={v:.4f}" for k, v in l2.metrics().items()))
    else:
        lines.append(f"L2 skipped: no snapshot{'' if snapshot_path is None else f' at {snapshot_path}'}")

    if ns.l3_response:
        try:
            l3 = parse_l3_response(Path(ns.l3_response).read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise UsageError(f"judge response {ns.l3_response} does not exist") from exc
        except CutsceneError as exc:
            raise UsageError(f"{ns.l3_response}: {exc.message}") from exc
        _write(out / "l3_report.json", _json.dumps({**meta, "metrics": l3.metrics(), "report": l3.to_dict()}) + "\n")
        lines.append(f"L3 SF={l3.sf} ChC={l3.chc} CQ={l3.cq} TmpCoh={l3.tmpcoh} total={l3.total}")

    print(f"{bundle.id} ({bundle.tier}, model {ns.model})")
    print("\n".join(lines))
    failures = _gate_failures(gate_metrics, ns.gate)
    if failures:
        print(f"gate {ns.gate} not met: {', '.join(failures)}", file=sys.stderr)
        return EXIT_GATE
    return EXIT_OK


# -- report --------------------------------------------------------------------


def collect_reports(reports_dir: Path):
    from .bench import RunReport

    runs: dict[tuple[str, str], dict[str, Any]] = {}
    for path in sorted(reports_dir.rglob("l[123]_report.json")):
        doc = _read_json(path, "report")
        try:
            key = (doc["model"], doc["scenario"])
            run = runs.setdefault(key, {"tier": doc["tier"], "metrics": {}})
            run["metrics"].update({k: float(v) for k, v in doc["metrics"].items()})
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise UsageError(f"{path} is not a report file: {exc!r}") from exc
    return [RunReport(m, s, r["tier"], r["metrics"]) for (m, s), r in sorted(runs.items())]


def cmd_report(ns: argparse.Namespace) -> int:
    from .bench import ALL, aggregate_reports

    reports_dir = Path(ns.reports_dir)
    if not reports_dir.is_dir():
        raise UsageError(f"{reports_dir} is not a directory")
    runs = collect_reports(reports_dir)
    if not runs:
        raise UsageError(f"no l1/l2/l3 report files under {reports_dir}")
    summary = aggregate_reports(runs)
    out = Path(ns.output_dir) if ns.output_dir else reports_dir
    _write(out / "summary.csv", summary.to_csv())
    _write(out / "summary.json", _json.dumps(summary.to_json()) + "\n")
    table = summary.to_markdown()
    _write(out / "summary.md", table)
    print(table, end="")
    overall = {f"{m}:{k}": v for (m, t, k), v in summary.values.items() if t == ALL and k != "l3_total"}
    overall = {k: v for k, v in overall.items() if k.split(":")[1] not in ("sf", "chc", "cq", "tmpcoh")}
    failures = _gate_failures(overall, ns.gate)
    if failures:
        print(f"gate {ns.gate} not met: {', '.join(failures)}", file=sys.stderr)
        return EXIT_GATE
    return EXIT_OK


def cmd_judge_prompt(ns: argparse.Namespace) -> int:
    from .bench import build_l3_prompt, load_bundle

    try:
        bundle = load_bundle(ns.scenario, ns.scenarios)
    except CutsceneError as exc:
        raise UsageError(exc.message) from exc
    print(build_l3_prompt(bundle.storyboard_text), end="")
    return EXIT_OK


# -- wiring --------------------------------------------------------------------


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from exc
    if value <= 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from exc
    if value <= 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cutscene", description="Headless cutscene toolkit and benchmark.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, scenarios=True):
        sp.add_argument("--workbook", type=Path, default=os.environ.get("CUTSCENE_WORKBOOK") or None,
                        help="directory of asset sheets (default: bundled sample workbook)")
        if scenarios:
            sp.add_argument("--scenarios", type=Path, default=os.environ.get("CUTSCENE_SCENARIOS") or None,
                            help="directory of scenario bundles (default: bundled scenarios)")

    s = sub.add_parser("serve", help="run the tool server")
    common(s, scenarios=False)
    s.add_argument("--transport", choices=("stdio", "http"), default="stdio")
    s.add_argument("--listen", default="127.0.0.1:8731", help="HOST:PORT for --transport http")
    s.add_argument("--project-context", help="text file served via prompts/project_context")
    s.set_defaults(func=cmd_serve)

    r = sub.add_parser("replay", help="drive the director with a scripted backend")
    common(r)
    r.add_argument("scenario")
    r.add_argument("--script", help="script.json or trajectory (default: the scenario's ground truth)")
    r.add_argument("--output-dir", type=Path, default=Path("."))
    r.add_argument("--remote", help="'stdio' to spawn a server process, or the base URL of an HTTP server")
    r.add_argument("--keep-recent-n", type=_positive_int, default=5)
    r.add_argument("--token-budget", type=_positive_int, default=8000)
    r.set_defaults(func=cmd_replay)

    e = sub.add_parser("evaluate", help="score a trajectory and snapshot against a scenario")
    common(e)
    e.add_argument("--trajectory", required=True)
    e.add_argument("--snapshot")
    e.add_argument("--scenario", required=True)
    e.add_argument("--l3-response", help="raw judge reply to parse into l3_report.json")
    e.add_argument("--model", default="model")
    e.add_argument("--frame-rate", type=_positive_int, default=30)
    e.add_argument("--epsilon", type=_positive_float, default=None, help="overlap tolerance (default 1/frame-rate)")
    e.add_argument("--delta", type=_positive_float, default=0.1, help="audio/facial alignment tolerance")
    e.add_argument("--output-dir", type=Path, default=Path("."))
    e.add_argument("--gate", type=float, help="exit 2 if any L1/L2 metric falls below this value")
    e.set_defaults(func=cmd_evaluate)

    rep = sub.add_parser("report", help="aggregate report files into summary tables")
    rep.add_argument("reports_dir")
    rep.add_argument("--output-dir", type=Path)
    rep.add_argument("--gate", type=float, help="exit 2 if any overall L1/L2 mean falls below this value")
    rep.set_defaults(func=cmd_report)

    j = sub.add_parser("judge-prompt", help="print the layer-3 judge prompt for a scenario")
    j.add_argument("scenario")
    j.add_argument("--scenarios", type=Path, default=None)
    j.set_defaults(func=cmd_judge_prompt)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return ns.func(ns)
    except UsageError as exc:
        print(f"cutscene {ns.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
