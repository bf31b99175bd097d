"""Replay the bundled ground truth through the director, then break it.

The director loop runs with a scripted backend (no model needed).  The
result is scored, then three deliberate defects are introduced to show how
each metric reacts.

    python demos/03_director_and_scores.py
"""

import copy
import json

from cutscene.agent import replay_script
from cutscene.bench import eval_l1, eval_l2, load_bundle

bundle = load_bundle("S2_001")
result = replay_script(bundle.gt_trajectory, bundle.storyboard_text)
print(f"director finished: {result.outcome.status} after {result.outcome.turns} turns, "
      f"{len(result.trajectory)} tool calls")


def show(label, l1=None, l2=None):
    parts = []
    for rep in (l1, l2):
        if rep is not None:
            parts += [f"{k}={v:.3f}" for k, v in rep.metrics().items()]
    print(f"{label:28s} " + " ".join(parts))


show("ground truth", eval_l1(result.trajectory, bundle), eval_l2(result.snapshot, bundle))

# 1. One camera cut disappears: six seconds go uncovered.
doc = json.loads(result.snapshot)
doc["camera_cuts"] = [c for c in doc["camera_cuts"] if c["camera_name"] != "Cam_OTS_Mira"]
show("without the OTS_Mira cut", l2=eval_l2(doc, bundle))

# 2. A face track drifts half a second away from its audio.
doc = json.loads(result.snapshot)
mira = next(b for b in doc["bindings"] if b["name"] == "MIRA")
mira["tracks"]["facial"][0]["start"] += 0.5
mira["tracks"]["facial"][0]["end"] += 0.5
report = eval_l2(doc, bundle)
show("face track drifted", l2=report)
print(f"{'':28s} -> {report.violations['tempc']}")

# 3. The agent forgets to spawn one character; every later call that names her fails.
calls = [c for c in copy.deepcopy(bundle.gt_trajectory)
         if not (c["tool"] == "add_character" and c["args"]["name"] == "MIRA")]
report = eval_l1(calls, bundle)
show("MIRA never added", l1=report)
print(f"{'':28s} -> {len(report.violations['pv'])} rejected calls, "
      f"{len(report.violations['dc'])} dependency violations")
