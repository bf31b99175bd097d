"""In-memory Level Sequence: bindings, timed sections, camera cuts, metadata.

Every tool mutates a :class:`LevelSequence` and every evaluator reads its
serialized form, so the document produced by :func:`serialize_state` is the
one contract shared by both sides.

Intervals are half-open ``[start, end)``: a cut ending at 4 s followed by a
cut starting at 4 s is continuous coverage.
"""

from __future__ import annotations

import bisect
import copy
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from . import _json
from .errors import (
    BindingKindError,
    DuplicateNameError,
    InvalidRangeError,
    SequenceError,
    UnknownBindingError,
    UnknownCameraError,
)
from .geometry import MovementKeyframe, rotator_list
from .vec import Rotator, Vec3

CHARACTER = "character"
CAMERA = "camera"
BINDING_KINDS = (CHARACTER, CAMERA)

ANIMATION = "animation"
AUDIO = "audio"
FACIAL = "facial"
SECTION_KINDS = (ANIMATION, AUDIO, FACIAL)

DEFAULT_FRAME_RATE = 30
CAPSULE_RADIUS = 35.0
CAPSULE_HEIGHT = 180.0


class MalformedDocumentError(SequenceError):
    code = "malformed-document"


@dataclass(frozen=True, order=True)
class TimeRange:
    start: float
    end: float

    def __post_init__(self):
        start, end = float(self.start), float(self.end)
        if not (math.isfinite(start) and math.isfinite(end)):
            raise InvalidRangeError(f"time range [{start}, {end}) must be finite")
        if start < 0.0:
            raise InvalidRangeError(f"time range start {start} is negative", start=start)
        if not start < end:
            raise InvalidRangeError(
                f"time range end {end} must be greater than start {start}", start=start, end=end
            )
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "end", end)

    @property
    def length(self) -> float:
        return self.end - self.start

    def as_dict(self) -> dict[str, float]:
        return {"start": self.start, "end": self.end}


@dataclass
class Section:
    asset_id: str
    range: TimeRange
    kind: str
    speech_text: str | None = None

    def __post_init__(self):
        if not self.asset_id:
            raise SequenceError("section asset_id must be non-empty")
        if self.kind not in SECTION_KINDS:
            raise SequenceError(f"unknown section kind {self.kind!r}")

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {"asset_id": self.asset_id, **self.range.as_dict()}
        if self.speech_text is not None:
            doc["speech_text"] = self.speech_text
        return doc


@dataclass
class Binding:
    name: str
    kind: str
    identifier: str
    location: Vec3 = field(default_factory=Vec3)
    rotation: Rotator = field(default_factory=Rotator)
    tracks: dict[str, list[Section]] = field(default_factory=dict)
    keyframes: list[MovementKeyframe] = field(default_factory=list)

    @property
    def is_character(self) -> bool:
        return self.kind == CHARACTER

    def sections(self, kind: str) -> list[Section]:
        return self.tracks.get(kind, [])

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "name": self.name,
            "kind": self.kind,
            "identifier": self.identifier,
            "location": _pos_list(self.location),
            "rotation": _rot_list(self.rotation),
        }
        if self.is_character:
            doc["tracks"] = {
                kind: [s.to_dict() for s in sections]
                for kind, sections in self.tracks.items()
                if sections
            }
        else:
            doc["keyframes"] = [k.to_dict() for k in self.keyframes]
        return doc


@dataclass
class CameraCutEntry:
    camera_name: str
    range: TimeRange

    def to_dict(self) -> dict[str, Any]:
        return {"camera_name": self.camera_name, **self.range.as_dict()}


@dataclass
class MetadataBlock:
    binding_name: str
    track: str
    range: TimeRange
    description: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "binding_name": self.binding_name,
            "track": self.track,
            "description": self.description,
            **self.range.as_dict(),
        }


def _pos_list(v: Vec3) -> list[float]:
    return v.as_list()


_rot_list = rotator_list


@dataclass
class LevelSequence:
    bindings: list[Binding] = field(default_factory=list)
    camera_cuts: list[CameraCutEntry] = field(default_factory=list)
    metadata: list[MetadataBlock] = field(default_factory=list)
    current_time: float = 0.0
    frame_rate: int = DEFAULT_FRAME_RATE

    # -- lookup -----------------------------------------------------------

    def find(self, name: str) -> Binding | None:
        for b in self.bindings:
            if b.name == name:
                return b
        return None

    def get(self, name: str) -> Binding:
        binding = self.find(name)
        if binding is None:
            raise UnknownBindingError(f"no binding named {name!r}", name=name, known=self.binding_names())
        return binding

    def binding_names(self, kind: str | None = None) -> list[str]:
        return [b.name for b in self.bindings if kind is None or b.kind == kind]

    def characters(self) -> list[Binding]:
        return [b for b in self.bindings if b.kind == CHARACTER]

    # -- mutation ---------------------------------------------------------

    def add_binding(self, name: str, kind: str, identifier: str, location: Vec3 | None = None) -> str:
        if not name:
            raise SequenceError("binding name must be non-empty")
        if kind not in BINDING_KINDS:
            raise SequenceError(f"unknown binding kind {kind!r}")
        if not identifier:
            raise SequenceError("binding identifier must be non-empty")
        if self.find(name) is not None:
            raise DuplicateNameError(f"binding {name!r} already exists", name=name)
        self.bindings.append(Binding(name, kind, identifier, location or Vec3()))
        return name

    def add_section(
        self,
        binding_name: str,
        kind: str,
        asset_id: str,
        time_range: TimeRange,
        speech_text: str | None = None,
    ) -> TimeRange:
        binding = self.get(binding_name)
        if not binding.is_character:
            raise BindingKindError(f"binding {binding_name!r} is a camera and has no character tracks")
        section = Section(asset_id, time_range, kind, speech_text)
        track = binding.tracks.setdefault(kind, [])
        starts = [s.range.start for s in track]
        track.insert(bisect.bisect_right(starts, time_range.start), section)
        return section.range

    def add_camera_cut(self, camera_name: str, time_range: TimeRange) -> None:
        binding = self.find(camera_name)
        if binding is None or binding.kind != CAMERA:
            raise UnknownCameraError(
                f"no camera named {camera_name!r}", name=camera_name, known=self.binding_names(CAMERA)
            )
        self.camera_cuts.append(CameraCutEntry(camera_name, time_range))

    def update_metadata(self, block: MetadataBlock) -> None:
        self.metadata.append(block)

    def clear(self) -> None:
        self.bindings.clear()
        self.camera_cuts.clear()
        self.metadata.clear()
        self.current_time = 0.0

    # -- derived ----------------------------------------------------------

    def effective_duration(self) -> float:
        ends = [s.range.end for b in self.bindings for t in b.tracks.values() for s in t]
        ends += [c.range.end for c in self.camera_cuts]
        return max(ends, default=0.0)

    def copy(self) -> "LevelSequence":
        return copy.deepcopy(self)

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        return {
            "bindings": [b.to_dict() for b in self.bindings],
            "camera_cuts": [c.to_dict() for c in self.camera_cuts],
            "metadata": [m.to_dict() for m in self.metadata],
            "current_time": self.current_time,
            "frame_rate": self.frame_rate,
            "duration": self.effective_duration(),
        }

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "LevelSequence":
        try:
            return _from_dict(doc)
        except SequenceError as exc:
            if isinstance(exc, MalformedDocumentError):
                raise
            raise MalformedDocumentError(f"invalid sequence document: {exc.message}") from exc
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise MalformedDocumentError(f"invalid sequence document: {exc!r}") from exc


def _from_dict(doc: dict[str, Any]) -> LevelSequence:
    if not isinstance(doc, dict):
        raise MalformedDocumentError("sequence document must be an object")
    frame_rate = doc.get("frame_rate", DEFAULT_FRAME_RATE)
    if not isinstance(frame_rate, int) or isinstance(frame_rate, bool) or frame_rate <= 0:
        raise MalformedDocumentError(f"frame_rate must be a positive integer, got {frame_rate!r}")
    seq = LevelSequence(frame_rate=frame_rate, current_time=float(doc.get("current_time", 0.0)))
    for raw in doc["bindings"]:
        seq.add_binding(raw["name"], raw["kind"], raw["identifier"], Vec3.of(raw["location"]))
        binding = seq.bindings[-1]
        binding.rotation = Rotator.of(raw["rotation"])
        if binding.is_character:
            for kind, sections in raw.get("tracks", {}).items():
                for s in sections:
                    seq.add_section(
                        binding.name, kind, s["asset_id"], TimeRange(s["start"], s["end"]), s.get("speech_text")
                    )
        else:
            binding.keyframes = [MovementKeyframe.from_dict(k) for k in raw.get("keyframes", [])]
    for raw in doc.get("camera_cuts", []):
        seq.add_camera_cut(raw["camera_name"], TimeRange(raw["start"], raw["end"]))
    for raw in doc.get("metadata", []):
        seq.update_metadata(
            MetadataBlock(raw["binding_name"], raw["track"], TimeRange(raw["start"], raw["end"]), raw["description"])
        )
    return seq


def serialize_state(seq: LevelSequence) -> str:
    """Canonical JSON text of the whole sequence."""
    return _json.dumps(seq.to_dict())


def deserialize_state(doc: str | dict[str, Any]) -> LevelSequence:
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise MalformedDocumentError(f"sequence document is not valid JSON: {exc}") from exc
    return LevelSequence.from_dict(doc)


def merge_intervals(
    ranges: Iterable[TimeRange | Sequence[float]], clip: TimeRange | Sequence[float] | None = None
) -> tuple[list[tuple[float, float]], float]:
    """Union of half-open intervals, optionally clipped; returns (merged, total length)."""
    spans = []
    for r in ranges:
        start, end = (r.start, r.end) if isinstance(r, TimeRange) else (float(r[0]), float(r[1]))
        if clip is not None:
            lo, hi = (clip.start, clip.end) if isinstance(clip, TimeRange) else (float(clip[0]), float(clip[1]))
            start, end = max(start, lo), min(end, hi)
        if end > start:
            spans.append((start, end))
    spans.sort()
    merged: list[tuple[float, float]] = []
    for start, end in spans:
        if merged and start <= merged[-1][1]:
            if end > merged[-1][1]:
                merged[-1] = (merged[-1][0], end)
        else:
            merged.append((start, end))
    return merged, sum(e - s for s, e in merged)


def check_character_overlap(seq: LevelSequence, time: float = 0.0) -> list[tuple[str, str]]:
    """Pairs of characters whose standing capsules interpenetrate.

    Sections carry no pose data, so a character's capsule sits at its binding
    location for the whole sequence and ``time`` only validates the query.
    """
    if not math.isfinite(time) or time < 0:
        raise InvalidRangeError(f"query time {time} must be a non-negative finite number")
    chars = seq.characters()
    pairs = []
    for i, a in enumerate(chars):
        for b in chars[i + 1 :]:
            horizontal = math.hypot(a.location.x - b.location.x, a.location.y - b.location.y)
            if horizontal < 2 * CAPSULE_RADIUS and abs(a.location.z - b.location.z) < CAPSULE_HEIGHT:
                pairs.append((a.name, b.name))
    return pairs
