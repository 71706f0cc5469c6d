"""Robot and object geometry for a holonomic base with a 2-link planar arm.

Joint ``psi1`` is measured in the world frame (the base has no heading),
``psi2`` relative to link 1. The carried object is rigidly attached at the
link-2 tip with its frame x-axis along link 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels

TWO_PI = 2.0 * math.pi


def wrap_angle(a: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    return a - TWO_PI * math.ceil((a - math.pi) / TWO_PI)


def wrap_positive(a: float) -> float:
    """Wrap an angle into [0, 2pi)."""
    r = a - TWO_PI * math.floor(a / TWO_PI)
    return 0.0 if r >= TWO_PI else r


@dataclass(frozen=True)
class Configuration:
    x_base: float
    y_base: float
    psi1: float
    psi2: float

    def __post_init__(self):
        if not (math.isfinite(self.x_base) and math.isfinite(self.y_base)):
            raise ValueError("base position must be finite")
        object.__setattr__(self, "x_base", float(self.x_base))
        object.__setattr__(self, "y_base", float(self.y_base))
        object.__setattr__(self, "psi1", wrap_positive(self.psi1))
        object.__setattr__(self, "psi2", wrap_positive(self.psi2))

    @property
    def base(self) -> tuple[float, float]:
        return (self.x_base, self.y_base)

    def as_array(self) -> np.ndarray:
        return np.array([self.x_base, self.y_base, self.psi1, self.psi2])

    @classmethod
    def from_array(cls, a) -> "Configuration":
        return cls(float(a[0]), float(a[1]), float(a[2]), float(a[3]))


@dataclass(frozen=True)
class RobotGeometry:
    base_radius: float = 0.3
    link1_length: float = 0.6
    link2_length: float = 0.5
    wheel_radius: float = 0.05
    # optional radius added around links and object segments for collision checks
    link_inflation: float = 0.0

    def __post_init__(self):
        for name in ("base_radius", "link1_length", "link2_length", "wheel_radius"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.link_inflation < 0:
            raise ValueError("link_inflation must be nonnegative")

    def as_array(self) -> np.ndarray:
        return np.array([self.link1_length, self.link2_length, self.base_radius, self.link_inflation])


@dataclass(frozen=True)
class ObjectGeometry:
    """Object polyline as offsets in the end-effector frame.

    The collision body of the object is the grasp segment from the link-2
    tip to the first offset, followed by the segments between consecutive
    offsets.
    """

    polyline: tuple[tuple[float, float], ...] = ((0.0, 0.0),)

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.polyline)
        if len(pts) < 1:
            raise ValueError("object polyline needs at least one offset")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x0 == x1 and y0 == y1:
                raise ValueError("object polyline segments must have nonzero length")
        object.__setattr__(self, "polyline", pts)

    def as_array(self) -> np.ndarray:
        return np.array(self.polyline, dtype=float).reshape(-1, 2)


def point_labels(obj: ObjectGeometry) -> list[str]:
    """Labels of every kinematic point, in kernel order."""
    return ["base", "link1_tip", "link2_tip"] + [f"object_{k}" for k in range(len(obj.polyline))]


@dataclass(frozen=True)
class InterestPointSet:
    """Weighted interest points. Labels not listed carry zero weight."""

    entries: tuple[tuple[str, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        entries = tuple((str(label), float(w)) for label, w in self.entries)
        if not entries:
            raise ValueError("interest point set needs at least one entry")
        labels = [label for label, _ in entries]
        if len(set(labels)) != len(labels):
            raise ValueError("interest point labels must be unique")
        for label, w in entries:
            if not w >= 0:
                raise ValueError(f"weight of {label!r} must be nonnegative")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def uniform(cls, obj: ObjectGeometry, weight: float = 1.0) -> "InterestPointSet":
        return cls(tuple((label, weight) for label in point_labels(obj)))

    def validate(self, obj: ObjectGeometry) -> None:
        known = set(point_labels(obj))
        for label, _ in self.entries:
            if label not in known:
                raise ValueError(
                    f"interest point {label!r} does not exist on an object with "
                    f"{len(obj.polyline)} polyline vertices"
                )

    def weight_vector(self, obj: ObjectGeometry) -> np.ndarray:
        self.validate(obj)
        index = {label: i for i, label in enumerate(point_labels(obj))}
        w = np.zeros(len(index))
        for label, weight in self.entries:
            w[index[label]] = weight
        return w

    def scaled(self, factor: float) -> "InterestPointSet":
        return InterestPointSet(tuple((label, w * factor) for label, w in self.entries))


def forward_points(q: Configuration, robot: RobotGeometry, obj: ObjectGeometry) -> dict[str, tuple[float, float]]:
    pts = kernels.forward_points(q.as_array()[None, :], robot.as_array(), obj.as_array())[0]
    return {label: (float(p[0]), float(p[1])) for label, p in zip(point_labels(obj), pts)}


def config_distance(a: Configuration, b: Configuration, w_ang: float = 1.0) -> float:
    return float(kernels.config_distance(a.as_array(), b.as_array(), w_ang))


def interpolate(a: Configuration, b: Configuration, n: int) -> list[Configuration]:
    """``n`` evenly spaced configurations from ``a`` to ``b``, angles along the shortest arc."""
    if n < 2:
        raise ValueError("interpolation needs at least 2 steps")
    rows = kernels.interpolate(a.as_array(), b.as_array(), n)
    out = [Configuration.from_array(r) for r in rows[1:-1]]
    return [a, *out, b]


def interpolation_steps(a: Configuration, b: Configuration, resolution: float, w_ang: float = 1.0) -> int:
    """Step count used for both social-cost integration and collision sweeps."""
    if not resolution > 0:
        raise ValueError("resolution must be positive")
    return int(kernels.n_steps(config_distance(a, b, w_ang), resolution))
