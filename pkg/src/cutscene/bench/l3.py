"""Layer 3: judge prompt construction and score parsing."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Any

from ..errors import L3ParseError

MAX_SCORE = 25

# (output key, display name, short code, what to look at)
DIMENSIONS = (
    ("script_fidelity", "Script Fidelity", "SF",
     "Are the scripted lines spoken by the right characters, and are the scripted actions performed?"),
    ("character_consistency", "Character Consistency", "ChC",
     "Do characters keep their identity, placement and plausible behaviour from start to finish?"),
    ("cinematographic_quality", "Cinematographic Quality", "CQ",
     "Do shot choice, framing and cut timing support the story being told?"),
    ("temporal_coherence", "Temporal Coherence", "TmpCoh",
     "Is pacing natural, with speech, faces and bodies in sync and no dead air?"),
)
DIMENSION_KEYS = tuple(d[0] for d in DIMENSIONS)

_BANDS = (
    (0, 5, "fails outright"),
    (6, 10, "major problems dominate"),
    (11, 15, "usable with clear flaws"),
    (16, 20, "solid, small flaws only"),
    (21, 25, "excellent, nothing to fix"),
)

OUTPUT_SCHEMA = (
    '{"script_fidelity": {"reasoning": "...", "score": 0},\n'
    ' "character_consistency": {"reasoning": "...", "score": 0},\n'
    ' "cinematographic_quality": {"reasoning": "...", "score": 0},\n'
    ' "temporal_coherence": {"reasoning": "...", "score": 0}}'
)


class MissingDimensionError(L3ParseError):
    code = "missing-dimension"


class ScoreRangeError(L3ParseError):
    code = "out-of-range"


@dataclass(frozen=True)
class L3Report:
    sf: int
    chc: int
    cq: int
    tmpcoh: int
    total: int
    reasoning: dict[str, str]

    def metrics(self) -> dict[str, float]:
        return {"sf": self.sf, "chc": self.chc, "cq": self.cq, "tmpcoh": self.tmpcoh, "l3_total": self.total}

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def build_l3_prompt(storyboard_text: str) -> str:
    bands = "\n".join(f"  {lo}-{hi}: {label}" for lo, hi, label in _BANDS)
    dims = "\n".join(
        f"{n}. {name} ({code}) [key: {key}]\n   {question}"
        for n, (key, name, code, question) in enumerate(DIMENSIONS, 1)
    )
    return (
        "You are reviewing a game cutscene that an automated agent assembled from the storyboard below. "
        "Watch the attached video and grade it.\n\n"
        f"Grade four dimensions separately, each as an integer from 0 to {MAX_SCORE}; the total is out of 100.\n\n"
        f"{dims}\n\n"
        f"Score bands for every dimension:\n{bands}\n\n"
        "Ignore how the environment, props and lighting look; judge only what the dimensions ask about.\n\n"
        "Procedure, repeated per dimension:\n"
        "  1. Review the video with only that dimension in mind.\n"
        "  2. Compare what you saw with the storyboard and the bands.\n"
        "  3. Write two to four sentences of reasoning.\n"
        f"  4. Give one integer score between 0 and {MAX_SCORE}.\n\n"
        "Reply with nothing but one JSON object of exactly this shape:\n"
        f"{OUTPUT_SCHEMA}\n\n"
        "<storyboard>\n"
        f"{storyboard_text.rstrip()}\n"
        "</storyboard>\n"
    )


def _first_object(raw: str) -> dict[str, Any]:
    decoder = json.JSONDecoder()
    pos = raw.find("{")
    while pos != -1:
        try:
            obj, _ = decoder.raw_decode(raw, pos)
        except (ValueError, RecursionError):
            obj = None
        if isinstance(obj, dict):
            return obj
        pos = raw.find("{", pos + 1)
    raise L3ParseError("no JSON object found in judge response")


def _score(key: str, entry: Any) -> tuple[int, str]:
    if not isinstance(entry, dict) or "score" not in entry:
        raise MissingDimensionError(f"{key} lacks a score", dimension=key)
    score = entry["score"]
    if isinstance(score, bool) or not isinstance(score, (int, float)):
        raise ScoreRangeError(f"{key}: score must be an integer, got {score!r}", dimension=key)
    if isinstance(score, float) and not score.is_integer():
        raise ScoreRangeError(f"{key}: score must be an integer, got {score!r}", dimension=key)
    if not 0 <= score <= MAX_SCORE:
        raise ScoreRangeError(f"{key}: score {score} outside 0..{MAX_SCORE}", dimension=key)
    reasoning = entry.get("reasoning", "")
    if not isinstance(reasoning, str):
        reasoning = json.dumps(reasoning)
    return int(score), reasoning


def parse_l3_response(raw: Any) -> L3Report:
    if not isinstance(raw, str) or not raw.strip():
        raise L3ParseError("empty judge response")
    obj = _first_object(raw)
    missing = [k for k in DIMENSION_KEYS if k not in obj]
    if missing:
        raise MissingDimensionError(f"judge response lacks {missing}", missing=missing)
    parsed = {k: _score(k, obj[k]) for k in DIMENSION_KEYS}
    sf, chc, cq, tmp = (parsed[k][0] for k in DIMENSION_KEYS)
    return L3Report(sf, chc, cq, tmp, sf + chc + cq + tmp, {k: parsed[k][1] for k in DIMENSION_KEYS})
