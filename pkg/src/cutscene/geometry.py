"""Camera template math: position templates and keyframed movements.

All functions are pure.  Positions are centimeters and angles degrees in a
left-handed, Z-up world; rotation about an axis uses the Rodrigues formula.

Actors are duck-typed: anything with ``location`` (:class:`Vec3`) and
``rotation`` (:class:`Rotator`) works, and an optional ``skeleton``
(:class:`SkeletonProfile`) overrides the default bone heights.  Without
animation playback a bone sits at a fixed height above the actor root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

from . import _json
from .errors import CoincidentActorsError, CoincidentPointsError, GeometryError, UnknownBoneError
from .vec import UP, Rotator, Vec3

DEFAULT_BONE_HEIGHTS = {"head": 160.0, "spine_03": 120.0}
KEYFRAME_FPS = 30
LINEAR = "Linear"
CONSTANT = "Constant"

_EPS = 1e-9


@dataclass(frozen=True)
class SkeletonProfile:
    bone_heights: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_BONE_HEIGHTS))

    def __post_init__(self):
        for bone, h in self.bone_heights.items():
            if not (math.isfinite(h) and h > 0):
                raise GeometryError(f"bone height for {bone!r} must be positive, got {h!r}")

    def height(self, bone: str) -> float:
        try:
            return float(self.bone_heights[bone])
        except KeyError:
            raise UnknownBoneError(
                f"unknown bone {bone!r}", bone=bone, known=sorted(self.bone_heights)
            ) from None

    @classmethod
    def with_overrides(cls, overrides: Mapping[str, float]) -> "SkeletonProfile":
        return cls({**DEFAULT_BONE_HEIGHTS, **overrides})


DEFAULT_SKELETON = SkeletonProfile()


@dataclass(frozen=True)
class ActorPose:
    location: Vec3
    rotation: Rotator = Rotator()
    skeleton: SkeletonProfile = DEFAULT_SKELETON


def bone_world(actor: Any, bone: str) -> Vec3:
    skeleton = getattr(actor, "skeleton", None) or DEFAULT_SKELETON
    return actor.location + Vec3(0.0, 0.0, skeleton.height(bone))


def look_at_rotation(origin: Vec3, target: Vec3) -> Rotator:
    """Yaw/pitch that aim +X from ``origin`` at ``target``; roll is always 0."""
    d = target - origin
    if d.norm() <= _EPS:
        raise CoincidentPointsError("look-at origin and target coincide", origin=origin.as_list())
    yaw = math.degrees(math.atan2(d.y, d.x))
    pitch = math.degrees(math.atan2(d.z, math.hypot(d.x, d.y)))
    return Rotator(pitch, yaw, 0.0)


def rodrigues_rotate(v: Vec3, theta: float, axis: Vec3) -> Vec3:
    if abs(axis.norm() - 1.0) > 1e-9:
        raise GeometryError(f"rotation axis must be unit length, got |axis|={axis.norm()!r}")
    t = math.radians(theta)
    c, s = math.cos(t), math.sin(t)
    return v * c + axis.cross(v) * s + axis * (axis.dot(v) * (1.0 - c))


@dataclass(frozen=True)
class CameraPose:
    position: Vec3
    look_target: Vec3
    rotation: Rotator = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "rotation", look_at_rotation(self.position, self.look_target))

    def to_dict(self) -> dict[str, Any]:
        return {
            "position": self.position.as_list(),
            "rotation": rotator_list(self.rotation),
            "look_target": self.look_target.as_list(),
        }


@dataclass(frozen=True)
class OtsPreset:
    h_off: float
    d_side: float
    d_back: float


OTS_PRESETS = {
    "near": OtsPreset(40.0, 100.0, 140.0),
    "mid": OtsPreset(50.0, 230.0, 200.0),
    "high": OtsPreset(120.0, 200.0, 300.0),
}


def rotator_list(r: Rotator) -> list[float]:
    # Re-wrap after rounding so -179.9999996 does not serialize as -180.
    return Rotator(*(_json.round_float(a) for a in r.as_list())).as_list()


@dataclass(frozen=True)
class MovementKeyframe:
    time: float
    position: Vec3
    rotation: Rotator
    interp: str = LINEAR

    def to_dict(self) -> dict[str, Any]:
        return {
            "time": self.time,
            "position": self.position.as_list(),
            "rotation": rotator_list(self.rotation),
            "interp": self.interp,
        }

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "MovementKeyframe":
        interp = doc["interp"]
        if interp not in (LINEAR, CONSTANT):
            raise GeometryError(f"unknown interpolation {interp!r}")
        return cls(float(doc["time"]), Vec3.of(doc["position"]), Rotator.of(doc["rotation"]), interp)


def keyframes_to_json(keys: list[MovementKeyframe]) -> list[dict[str, Any]]:
    return [k.to_dict() for k in keys]


def _pair_basis(p_from: Vec3, p_to: Vec3) -> tuple[Vec3, Vec3]:
    """Forward (from -> to) and right (up x forward) unit vectors."""
    if math.hypot(p_to.x - p_from.x, p_to.y - p_from.y) <= _EPS:
        raise CoincidentActorsError("actors share the same horizontal position")
    forward = (p_to - p_from).normalized()
    return forward, UP.cross(forward).normalized()


# -- position templates -------------------------------------------------------


def compute_ots(
    from_actor: Any,
    to_actor: Any,
    preset: OtsPreset | str = "mid",
    shoulder_bone: str = "head",
    shoulder_height_offset: float | None = None,
    shoulder_side_offset: float | None = None,
    distance_back: float | None = None,
) -> CameraPose:
    """Over-the-shoulder: behind ``from_actor``, framing ``to_actor``.

    Explicit offsets override the corresponding preset values.
    """
    if isinstance(preset, str):
        try:
            preset = OTS_PRESETS[preset]
        except KeyError:
            raise GeometryError(f"unknown OTS variant {preset!r}", known=sorted(OTS_PRESETS)) from None
    h_off = preset.h_off if shoulder_height_offset is None else shoulder_height_offset
    d_side = preset.d_side if shoulder_side_offset is None else shoulder_side_offset
    d_back = preset.d_back if distance_back is None else distance_back

    p_f, p_t = from_actor.location, to_actor.location
    f, r = _pair_basis(p_f, p_t)
    h_f = bone_world(from_actor, shoulder_bone).z
    h_t = bone_world(to_actor, shoulder_bone).z
    position = p_f - f * d_back + r * d_side + Vec3(0.0, 0.0, h_f + h_off)
    target = ((p_f + Vec3(0.0, 0.0, h_f)) + (p_t + Vec3(0.0, 0.0, h_t))) * 0.5
    return CameraPose(position, target)


def compute_pov(
    from_actor: Any,
    to_actor: Any,
    head_bone: str = "head",
    forward_offset: float = -20.0,
    side_offset: float = 50.0,
) -> CameraPose:
    f, r = _pair_basis(from_actor.location, to_actor.location)
    position = bone_world(from_actor, head_bone) + f * forward_offset + r * side_offset
    return CameraPose(position, bone_world(to_actor, head_bone))


def compute_on_axis(from_actor: Any, to_actor: Any, head_bone: str = "head") -> CameraPose:
    b_f = bone_world(from_actor, head_bone)
    b_t = bone_world(to_actor, head_bone)
    return CameraPose((b_f + b_t) * 0.5, b_t)


def actor_right(actor: Any) -> Vec3:
    # The actor's local "right" is its rotation applied to (-1, 0, 0).
    return actor.rotation.rotate_vector(Vec3(-1.0, 0.0, 0.0))


def compute_side_profile(
    actor: Any, side: str = "left", side_distance: float = 300.0, bone: str = "spine_03"
) -> CameraPose:
    if side not in ("left", "right"):
        raise GeometryError(f"side must be 'left' or 'right', got {side!r}")
    right = actor_right(actor)
    offset = -right if side == "left" else right
    b = bone_world(actor, bone)
    return CameraPose(b + offset * side_distance, b)


def compute_establishing(
    actor1: Any,
    actor2: Any,
    side: str = "right",
    distance: float = 300.0,
    height_offset: float = 150.0,
) -> CameraPose:
    if side not in ("left", "right"):
        raise GeometryError(f"side must be 'left' or 'right', got {side!r}")
    p1, p2 = actor1.location, actor2.location
    _, r = _pair_basis(p1, p2)
    offset = -r if side == "left" else r
    lift = Vec3(0.0, 0.0, height_offset)
    mid = (p1 + p2) * 0.5
    return CameraPose(mid + offset * distance + lift, mid + lift)


def compute_generic_focus(
    actor: Any,
    distance: float = 300.0,
    pitch: float = 0.0,
    yaw: float = 0.0,
    bone: str | None = None,
) -> CameraPose:
    """Spherical placement around the actor, measured from its facing axis.

    yaw 0 puts the camera in front of the actor, 180 behind; positive pitch
    lifts it toward a bird's-eye view.
    """
    d0 = actor.rotation.forward()
    d1 = rodrigues_rotate(d0, yaw, UP)
    horizontal = UP.cross(d1)
    if horizontal.norm() <= _EPS:
        raise GeometryError("actor faces straight up or down; yaw axis is undefined")
    d2 = rodrigues_rotate(d1, -pitch, horizontal.normalized())
    target = actor.location if bone is None else bone_world(actor, bone)
    return CameraPose(target + d2 * distance, target)


# -- movement templates -------------------------------------------------------


def _check_timing(start: float, duration: float) -> None:
    if not (math.isfinite(start) and start >= 0):
        raise GeometryError(f"start time must be a non-negative number, got {start!r}")
    if not (math.isfinite(duration) and duration > 0):
        raise GeometryError(f"duration must be positive, got {duration!r}")


def gen_dolly_keyframes(
    pose: CameraPose, ratio: float = 0.8, start: float = 0.0, duration: float = 1.0
) -> list[MovementKeyframe]:
    _check_timing(start, duration)
    if not (math.isfinite(ratio) and ratio > 0):
        raise GeometryError(f"dolly ratio must be positive, got {ratio!r}")
    target = pose.look_target
    end = target + (pose.position - target) * ratio
    return [
        MovementKeyframe(start, pose.position, pose.rotation, LINEAR),
        MovementKeyframe(start + duration, end, look_at_rotation(end, target), CONSTANT),
    ]


def orbit_key_count(duration: float, fps: int = KEYFRAME_FPS) -> int:
    # The epsilon keeps decimal durations such as 3.3 s from flooring one frame short.
    return math.floor(duration * fps + 1e-9)


def gen_orbit_keyframes(
    pose: CameraPose,
    angle: float = 45.0,
    clockwise: bool = True,
    start: float = 0.0,
    duration: float = 1.0,
    fps: int = KEYFRAME_FPS,
) -> list[MovementKeyframe]:
    """Arc around the look target in the horizontal plane.

    Emits the initial pose plus one key per step, ``N + 1`` keys for
    ``N = floor(duration * fps)``; the last key holds with Constant.
    """
    _check_timing(start, duration)
    if not math.isfinite(angle):
        raise GeometryError(f"orbit angle must be finite, got {angle!r}")
    n = orbit_key_count(duration, fps)
    if n < 1:
        raise GeometryError(f"orbit duration {duration} s is shorter than one frame at {fps} fps")
    total = angle if clockwise else -angle
    target = pose.look_target
    radius = pose.position - target
    keys = [MovementKeyframe(start, pose.position, pose.rotation, LINEAR)]
    for i in range(1, n + 1):
        p = target + rodrigues_rotate(radius, total * i / n, UP)
        keys.append(
            MovementKeyframe(
                start + duration * i / n,
                p,
                look_at_rotation(p, target),
                CONSTANT if i == n else LINEAR,
            )
        )
    return keys
