"""World-space value types: centimeter vectors and degree rotators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class Vec3:
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        for name in ("x", "y", "z"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"Vec3.{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    @classmethod
    def of(cls, values: Iterable[float]) -> "Vec3":
        x, y, z = values
        return cls(x, y, z)

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __mul__(self, k: float) -> "Vec3":
        return Vec3(self.x * k, self.y * k, self.z * k)

    __rmul__ = __mul__

    def __neg__(self) -> "Vec3":
        return Vec3(-self.x, -self.y, -self.z)

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm(self) -> float:
        return math.sqrt(self.dot(self))

    def normalized(self) -> "Vec3":
        n = self.norm()
        if n == 0.0:
            raise ZeroDivisionError("cannot normalize a zero vector")
        return self * (1.0 / n)

    def as_list(self) -> list[float]:
        return [self.x, self.y, self.z]


UP = Vec3(0.0, 0.0, 1.0)


def normalize_angle(deg: float) -> float:
    """Wrap an angle into (-180, 180]."""
    a = math.fmod(float(deg), 360.0)
    if a <= -180.0:
        a += 360.0
    elif a > 180.0:
        a -= 360.0
    return a


@dataclass(frozen=True)
class Rotator:
    pitch: float = 0.0
    yaw: float = 0.0
    roll: float = 0.0

    def __post_init__(self):
        for name in ("pitch", "yaw", "roll"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"Rotator.{name} must be finite, got {value!r}")
            object.__setattr__(self, name, normalize_angle(value))

    @classmethod
    def of(cls, values: Iterable[float]) -> "Rotator":
        p, y, r = values
        return cls(p, y, r)

    def as_list(self) -> list[float]:
        return [self.pitch, self.yaw, self.roll]

    def rotate_vector(self, v: Vec3) -> Vec3:
        """Apply roll (about X), then pitch (about Y), then yaw (about Z).

        Positive pitch tilts +X toward +Z and positive yaw turns +X toward +Y,
        so ``Rotator(p, y, 0).rotate_vector((1,0,0))`` is the look direction.
        """
        cr, sr = math.cos(math.radians(self.roll)), math.sin(math.radians(self.roll))
        cp, sp = math.cos(math.radians(self.pitch)), math.sin(math.radians(self.pitch))
        cy, sy = math.cos(math.radians(self.yaw)), math.sin(math.radians(self.yaw))
        x, y, z = v.x, v.y * cr - v.z * sr, v.y * sr + v.z * cr
        x, z = x * cp - z * sp, x * sp + z * cp
        x, y = x * cy - y * sy, x * sy + y * cy
        return Vec3(x, y, z)

    def forward(self) -> Vec3:
        return self.rotate_vector(Vec3(1.0, 0.0, 0.0))
