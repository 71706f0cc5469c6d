"""Static environment and whole-body collision checks.

The body at a configuration is the base disc plus zero-width segments
(optionally inflated) for both links and the carried object. Edges are
checked by sampling the same straight-line interpolation used for the
social cost, so soundness is bounded by the sweep resolution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .model import Configuration, ObjectGeometry, RobotGeometry
from .social import SocialField


@dataclass(frozen=True)
class Rect:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError(f"degenerate rectangle {self}")

    def as_row(self) -> list[float]:
        return [self.xmin, self.ymin, self.xmax, self.ymax]


@dataclass(frozen=True)
class Disc:
    x: float
    y: float
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"degenerate disc {self}")


@dataclass(frozen=True)
class WorldMap:
    bounds: Rect
    obstacles: tuple[Rect | Disc, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "obstacles", tuple(self.obstacles))

    def rect_array(self) -> np.ndarray:
        rows = [o.as_row() for o in self.obstacles if isinstance(o, Rect)]
        return np.array(rows, dtype=float).reshape(-1, 4)

    def disc_array(self) -> np.ndarray:
        rows = [[o.x, o.y, o.radius] for o in self.obstacles if isinstance(o, Disc)]
        return np.array(rows, dtype=float).reshape(-1, 3)

    def bounds_array(self) -> np.ndarray:
        return np.array(self.bounds.as_row(), dtype=float)

    def contains(self, x: float, y: float) -> bool:
        b = self.bounds
        return b.xmin <= x <= b.xmax and b.ymin <= y <= b.ymax


def body_segments(q: Configuration, robot: RobotGeometry, obj: ObjectGeometry) -> list[tuple[np.ndarray, np.ndarray]]:
    """Segments of the collision body: base->link1, link1->link2, link2->object_0, object polyline."""
    pts = kernels.forward_points(q.as_array()[None, :], robot.as_array(), obj.as_array())[0]
    return [(pts[i].copy(), pts[i + 1].copy()) for i in range(len(pts) - 1)]


def is_valid(
    q: Configuration,
    world: WorldMap,
    field: SocialField,
    robot: RobotGeometry,
    obj: ObjectGeometry,
) -> bool:
    return bool(
        kernels.valid_configs(
            q.as_array()[None, :],
            robot.as_array(),
            obj.as_array(),
            world.bounds_array(),
            world.rect_array(),
            world.disc_array(),
            field.as_array(),
        )[0]
    )


def collision_free(
    qa: Configuration,
    qb: Configuration,
    world: WorldMap,
    field: SocialField,
    robot: RobotGeometry,
    obj: ObjectGeometry,
    resolution: float = 0.05,
    w_ang: float = 1.0,
) -> bool:
    """True iff every configuration of the interpolated sweep ``qa -> qb`` is valid."""
    if not resolution > 0:
        raise ValueError("resolution must be positive")
    return bool(
        kernels.collision_free(
            qa.as_array(),
            qb.as_array(),
            w_ang,
            resolution,
            robot.as_array(),
            obj.as_array(),
            world.bounds_array(),
            world.rect_array(),
            world.disc_array(),
            field.as_array(),
        )
    )


__all__ = ["Rect", "Disc", "WorldMap", "body_segments", "is_valid", "collision_free"]
