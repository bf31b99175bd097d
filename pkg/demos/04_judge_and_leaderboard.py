"""Judge-side plumbing and the summary table, with made-up numbers.

Prints the head of the judge prompt, parses a typical judge reply (wrapped
in chatter, as models tend to do), then aggregates a small synthetic set of
runs into the per-tier table.

    python demos/04_judge_and_leaderboard.py
"""

import json

from cutscene.bench import RunReport, aggregate_reports, build_l3_prompt, load_bundle, parse_l3_response
from cutscene.errors import L3ParseError

bundle = load_bundle("S2_001")
prompt = build_l3_prompt(bundle.storyboard_text)
print("\n".join(prompt.splitlines()[:12]))
print(f"... ({len(prompt)} characters)\n")

reply = "Happy to help. Here is my assessment:\n" + json.dumps({
    "script_fidelity": {"reasoning": "All six lines are present and attributed correctly.", "score": 21},
    "character_consistency": {"reasoning": "Positions hold; one idle loop looks stiff.", "score": 19},
    "cinematographic_quality": {"reasoning": "Shot grammar is sound but the side profile cut is abrupt.", "score": 16},
    "temporal_coherence": {"reasoning": "Lip sync is tight, pacing a touch slow at the end.", "score": 18},
}, indent=1) + "\nLet me know if you need more."
scores = parse_l3_response(reply)
print(f"judge: SF {scores.sf}, ChC {scores.chc}, CQ {scores.cq}, TmpCoh {scores.tmpcoh} -> {scores.total}/100")

try:
    parse_l3_response(reply.replace('"score": 21', '"score": 30'))
except L3ParseError as exc:
    print(f"rejected reply: {exc}\n")

runs = [
    RunReport("model-a", "S1_001", "S1", {"cc": 0.95, "camc": 1.0}),
    RunReport("model-a", "S5_001", "S5", {"cc": 0.70, "camc": 0.85}),
    RunReport("model-b", "S1_001", "S1", {"cc": 0.90, "camc": 0.95}),
    RunReport("model-b", "S5_001", "S5", {"cc": 0.80, "camc": 0.90}),
]
print(aggregate_reports(runs).to_markdown())
