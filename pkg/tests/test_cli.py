import json
import socket
import subprocess
import sys
import time
import urllib.request

import pytest

from cutscene.bench import find_scenario
from cutscene.cli import main
from cutscene.toolkit import TOOL_NAMES

from perturb import drop_cut


def run(*argv, cwd=None, stdin=None, timeout=60):
    return subprocess.run([sys.executable, "-m", "cutscene", *argv], capture_output=True, text=True,
                          input=stdin, cwd=cwd, timeout=timeout)


def free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


class TestServe:
    def test_stdio_lists_tools(self):
        req = json.dumps({"jsonrpc": "2.0", "id": 1, "method": "tools/list"}) + "\n"
        proc = run("serve", "--transport", "stdio", stdin=req)
        assert proc.returncode == 0
        names = [t["name"] for t in json.loads(proc.stdout.splitlines()[0])["result"]["tools"]]
        assert names == list(TOOL_NAMES)

    def test_http(self):
        port = free_port()
        proc = subprocess.Popen([sys.executable, "-m", "cutscene", "serve", "--transport", "http",
                                 "--listen", f"127.0.0.1:{port}"], stdout=subprocess.PIPE, stderr=subprocess.PIPE)
        try:
            body = json.dumps({"jsonrpc": "2.0", "id": 1, "method": "initialize"}).encode()
            deadline = time.monotonic() + 10
            while True:
                try:
                    req = urllib.request.Request(f"http://127.0.0.1:{port}/rpc", data=body,
                                                 headers={"Content-Type": "application/json"})
                    with urllib.request.urlopen(req, timeout=5) as resp:
                        reply = json.loads(resp.read())
                    break
                except OSError:
                    if time.monotonic() > deadline:
                        raise
                    time.sleep(0.1)
            assert reply["result"]["serverInfo"]["name"] == "cutscene-toolkit"
        finally:
            proc.terminate()
            proc.wait(timeout=10)


class TestPipeline:
    def test_replay_evaluate_report(self, tmp_path, capsys, bundle):
        run_dir = tmp_path / "runs" / "S2_001"
        assert main(["replay", "S2_001", "--output-dir", str(run_dir)]) == 0
        snapshot = (run_dir / "snapshot.json").read_text(encoding="utf-8")
        gt = (find_scenario("S2_001") / "gt_snapshot.json").read_text(encoding="utf-8")
        assert json.loads(snapshot) == json.loads(gt)

        code = main(["evaluate", "--trajectory", str(run_dir / "trajectory.json"), "--snapshot",
                     str(run_dir / "snapshot.json"), "--scenario", "S2_001", "--output-dir", str(run_dir),
                     "--gate", "1.0"])
        assert code == 0
        l1 = json.loads((run_dir / "l1_report.json").read_text())
        l2 = json.loads((run_dir / "l2_report.json").read_text())
        assert set(l1["metrics"].values()) == {1.0} and set(l2["metrics"].values()) == {1.0}

        assert main(["report", str(tmp_path / "runs")]) == 0
        csv = (tmp_path / "runs" / "summary.csv").read_text()
        assert csv.splitlines()[0] == "model,tier,metric,value"
        assert "model,all,camc,1.000000" in csv
        assert "| model |" in capsys.readouterr().out

    def test_gate_fails_with_exit_2(self, tmp_path, gt_snapshot, bundle):
        snap = tmp_path / "snap.json"
        snap.write_text(json.dumps(drop_cut(gt_snapshot, 11.0, 17.0)))
        traj = tmp_path / "traj.json"
        traj.write_text(json.dumps(bundle.gt_trajectory))
        argv = ["evaluate", "--trajectory", str(traj), "--snapshot", str(snap), "--scenario", "S2_001",
                "--output-dir", str(tmp_path)]
        assert main(argv + ["--gate", "0.9"]) == 2
        assert main(argv + ["--gate", "0.8"]) == 0

    def test_missing_snapshot_skips_l2(self, tmp_path, capsys, bundle):
        traj = tmp_path / "traj.json"
        traj.write_text(json.dumps(bundle.gt_trajectory))
        assert main(["evaluate", "--trajectory", str(traj), "--snapshot", str(tmp_path / "nope.json"),
                     "--scenario", "S2_001", "--output-dir", str(tmp_path)]) == 0
        assert "L2 skipped" in capsys.readouterr().out
        assert not (tmp_path / "l2_report.json").exists()

    def test_l3_response(self, tmp_path, bundle):
        traj = tmp_path / "traj.json"
        traj.write_text(json.dumps(bundle.gt_trajectory))
        reply = tmp_path / "judge.txt"
        reply.write_text(json.dumps({k: {"reasoning": "ok", "score": 10} for k in
                                     ("script_fidelity", "character_consistency", "cinematographic_quality",
                                      "temporal_coherence")}))
        assert main(["evaluate", "--trajectory", str(traj), "--scenario", "S2_001", "--l3-response", str(reply),
                     "--output-dir", str(tmp_path)]) == 0
        assert json.loads((tmp_path / "l3_report.json").read_text())["metrics"]["l3_total"] == 40

    def test_replay_over_stdio_remote(self, tmp_path):
        assert main(["replay", "S2_001", "--remote", "stdio", "--output-dir", str(tmp_path)]) == 0
        gt = json.loads((find_scenario("S2_001") / "gt_snapshot.json").read_text())
        assert json.loads((tmp_path / "snapshot.json").read_text()) == gt


class TestErrors:
    def test_usage_exit_1(self):
        proc = run("evaluate")
        assert proc.returncode == 1 and "error" in proc.stderr

    def test_unknown_command(self):
        assert run("frobnicate").returncode == 1

    def test_empty_reports_dir(self, tmp_path, capsys):
        assert main(["report", str(tmp_path)]) == 1
        assert "no l1/l2/l3 report files" in capsys.readouterr().err

    def test_unknown_scenario(self, tmp_path):
        traj = tmp_path / "t.json"
        traj.write_text("[]")
        assert main(["evaluate", "--trajectory", str(traj), "--scenario", "S9_404"]) == 1

    def test_bad_trajectory_file(self, tmp_path):
        traj = tmp_path / "t.json"
        traj.write_text("{oops")
        assert main(["evaluate", "--trajectory", str(traj), "--scenario", "S2_001", "--output-dir", str(tmp_path)]) == 1

    def test_non_positive_options(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["evaluate", "--trajectory", "x", "--scenario", "S2_001", "--delta", "0"])
        assert exc.value.code == 1

    def test_judge_prompt(self, capsys):
        assert main(["judge-prompt", "S2_001"]) == 0
        assert "script_fidelity" in capsys.readouterr().out
