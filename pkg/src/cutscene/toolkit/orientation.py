"""Semantic orientation descriptors resolved to yaw angles."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from ..errors import ToolError

COMPASS = {"face_north": 0.0, "face_east": 90.0, "face_south": 180.0, "face_west": -90.0}

_TURN = re.compile(r"^turn_(left|right)[_:]\s*([0-9]+(?:\.[0-9]+)?)$")
_FACE_CHAR = re.compile(r"^face_character:(.+)$")


@dataclass(frozen=True)
class Compass:
    yaw: float


@dataclass(frozen=True)
class FaceCharacter:
    name: str


@dataclass(frozen=True)
class Turn:
    degrees: float  # positive turns right


def parse_orientation(descriptor: str):
    text = descriptor.strip()
    if text.lower() in COMPASS:
        return Compass(COMPASS[text.lower()])
    m = _FACE_CHAR.match(text)
    if m and m.group(1).strip():
        return FaceCharacter(m.group(1).strip())
    m = _TURN.match(text.lower())
    if m:
        deg = float(m.group(2))
        return Turn(-deg if m.group(1) == "left" else deg)
    raise ToolError(
        "invalid-orientation",
        f"cannot parse orientation {descriptor!r}; use face_north|face_south|face_east|face_west, "
        "face_character:<name>, turn_left_<deg> or turn_right_<deg>",
        descriptor=descriptor,
    )


def yaw_towards(src_x: float, src_y: float, dst_x: float, dst_y: float) -> float | None:
    dx, dy = dst_x - src_x, dst_y - src_y
    if math.hypot(dx, dy) <= 1e-9:
        return None
    return math.degrees(math.atan2(dy, dx))
