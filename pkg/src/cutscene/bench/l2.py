"""Layer 2: structural checks on the final sequence document."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Mapping

from ..sequence import ANIMATION, AUDIO, FACIAL, LevelSequence, deserialize_state, merge_intervals
from .scenario import ScenarioBundle

DEFAULT_DELTA = 0.1
_TOL = 1e-9  # absorbs 6-decimal rounding of stored times


@dataclass
class L2Report:
    tc: float
    camc: float
    tempc: float
    temporal_checks: int
    violations: dict[str, list[dict[str, Any]]] = field(default_factory=dict)

    def metrics(self) -> dict[str, float]:
        return {"tc": self.tc, "camc": self.camc, "tempc": self.tempc}

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _as_sequence(doc: str | Mapping[str, Any] | LevelSequence) -> LevelSequence:
    return doc if isinstance(doc, LevelSequence) else deserialize_state(doc if isinstance(doc, str) else dict(doc))


def track_completeness(seq: LevelSequence, expected: Mapping[str, list[str]]) -> tuple[float, list[dict]]:
    pairs = [(name, kind) for name, kinds in expected.items() for kind in kinds]
    missing = []
    for name, kind in pairs:
        b = seq.find(name)
        if b is None or not b.is_character or not b.tracks.get(kind):
            missing.append({"character": name, "track": kind})
    return (1.0 if not pairs else (len(pairs) - len(missing)) / len(pairs)), missing


def camera_coverage(seq: LevelSequence, duration: float) -> tuple[float, list[dict]]:
    if duration <= 0:
        return 1.0, []
    merged, covered = merge_intervals([c.range for c in seq.camera_cuts], clip=(0.0, duration))
    gaps, cursor = [], 0.0
    for s, e in merged + [(duration, duration)]:
        if s > cursor:
            gaps.append({"start": cursor, "end": s})
        cursor = max(cursor, e)
    return min(covered / duration, 1.0), gaps


def temporal_checks(seq: LevelSequence, epsilon: float, delta: float) -> tuple[int, list[dict]]:
    """Consecutive same-track pairs on animation and audio tracks, plus one
    audio/facial alignment check per audio section."""
    checks = 0
    violations: list[dict] = []
    for b in seq.characters():
        for kind in (ANIMATION, AUDIO):
            sections = sorted(b.tracks.get(kind, []), key=lambda s: (s.range.start, s.range.end))
            for a, nxt in zip(sections, sections[1:]):
                checks += 1
                overlap = a.range.end - nxt.range.start
                if overlap > epsilon + _TOL:
                    violations.append(
                        {"character": b.name, "track": kind, "kind": "overlap", "first": a.asset_id,
                         "second": nxt.asset_id, "overlap": overlap}
                    )
        faces = b.tracks.get(FACIAL, [])
        for s in b.tracks.get(AUDIO, []):
            checks += 1
            aligned = any(
                abs(f.range.start - s.range.start) <= delta + _TOL and abs(f.range.end - s.range.end) <= delta + _TOL
                for f in faces
            )
            if not aligned:
                violations.append({"character": b.name, "track": AUDIO, "kind": "unaligned", "audio": s.asset_id})
    return checks, violations


def eval_l2(
    doc: str | Mapping[str, Any] | LevelSequence,
    bundle: ScenarioBundle,
    epsilon: float | None = None,
    delta: float = DEFAULT_DELTA,
) -> L2Report:
    seq = _as_sequence(doc)
    eps = 1.0 / seq.frame_rate if epsilon is None else epsilon
    tc, tc_v = track_completeness(seq, bundle.expected_tracks)
    duration = bundle.duration or seq.effective_duration()
    camc, cam_v = camera_coverage(seq, duration)
    checks, temp_v = temporal_checks(seq, eps, delta)
    tempc = 1.0 if checks == 0 else 1.0 - len(temp_v) / checks
    return L2Report(tc, camc, tempc, checks, {"tc": tc_v, "camc": cam_v, "tempc": temp_v})
