"""Asymmetric Gaussian personal-space model and the costs built on it."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .model import Configuration, InterestPointSet, ObjectGeometry, RobotGeometry

SIGMA_H = 2.0
TAU = 0.2
BODY_RADIUS = 0.3


@dataclass(frozen=True)
class Person:
    """A static person: pose plus personal-space parameters.

    ``sigma_s`` and ``sigma_r`` default to 2/3 and 1/2 of ``sigma_h``.
    """

    x: float
    y: float
    theta: float = 0.0
    sigma_h: float = SIGMA_H
    sigma_s: float | None = None
    sigma_r: float | None = None
    tau: float = TAU
    body_radius: float = BODY_RADIUS

    def __post_init__(self):
        if self.sigma_s is None:
            object.__setattr__(self, "sigma_s", 2.0 / 3.0 * self.sigma_h)
        if self.sigma_r is None:
            object.__setattr__(self, "sigma_r", 0.5 * self.sigma_h)
        for name in ("sigma_h", "sigma_s", "sigma_r", "body_radius"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if not 0 <= self.tau < 1:
            raise ValueError("tau must lie in [0, 1)")

    def as_row(self) -> list[float]:
        return [self.x, self.y, self.theta, self.sigma_h, self.sigma_s, self.sigma_r, self.tau, self.body_radius]


@dataclass(frozen=True)
class SocialField:
    persons: tuple[Person, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "persons", tuple(self.persons))

    def as_array(self) -> np.ndarray:
        return np.array([p.as_row() for p in self.persons], dtype=float).reshape(-1, 8)


def agf_raw(person: Person, x, y):
    """Unthresholded AGF at ``(x, y)``. Scalars give a float, arrays an array of the broadcast shape."""
    xs, ys = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    v = kernels.agf_values(np.array([person.as_row()]), xs.ravel(), ys.ravel(), False)[0]
    return float(v[0]) if xs.ndim == 0 else v.reshape(xs.shape)


def agf(person: Person, x: float, y: float) -> float:
    """AGF with values at or below ``tau`` clamped to zero."""
    v = agf_raw(person, x, y)
    return 0.0 if v <= person.tau else v


def multi_point_cost(
    field: SocialField,
    q: Configuration,
    pts: InterestPointSet,
    robot: RobotGeometry,
    obj: ObjectGeometry,
) -> float:
    """Weighted sum of thresholded AGF over all persons and interest points."""
    return float(
        kernels.social_costs(
            q.as_array()[None, :], robot.as_array(), obj.as_array(), pts.weight_vector(obj), field.as_array()
        )[0]
    )


def motion_social_cost(
    field: SocialField,
    qa: Configuration,
    qb: Configuration,
    pts: InterestPointSet,
    robot: RobotGeometry,
    obj: ObjectGeometry,
    resolution: float = 0.05,
    w_ang: float = 1.0,
) -> float:
    """Trapezoidal line integral of the social cost along the straight segment ``qa -> qb``."""
    if not resolution > 0:
        raise ValueError("resolution must be positive")
    return float(
        kernels.motion_social_cost(
            qa.as_array(),
            qb.as_array(),
            w_ang,
            resolution,
            robot.as_array(),
            obj.as_array(),
            pts.weight_vector(obj),
            field.as_array(),
        )
    )


def _ray_decay(person: Person, phi: float) -> float:
    """Exponent coefficient k such that agf_raw = exp(-k r^2) along world bearing ``phi``."""
    dx, dy = math.cos(phi), math.sin(phi)
    # evaluate at unit distance; the exponent is quadratic in r along a ray
    return -math.log(agf_raw(Person(0.0, 0.0, person.theta, person.sigma_h, person.sigma_s, person.sigma_r), dx, dy))


def agf_contour(person: Person, level: float | None = None, n: int = 180) -> np.ndarray:
    """Closed polygon ``(n, 2)`` where ``agf_raw == level`` (default ``tau``)."""
    level = person.tau if level is None else level
    if not 0 < level < 1:
        raise ValueError("contour level must lie in (0, 1)")
    out = np.empty((n, 2))
    for i in range(n):
        phi = 2.0 * math.pi * i / n
        r = math.sqrt(-math.log(level) / _ray_decay(person, phi))
        out[i] = (person.x + r * math.cos(phi), person.y + r * math.sin(phi))
    return out


def frontal_extent(person: Person, level: float | None = None, tol: float = 1e-10) -> float:
    """Distance along the facing direction where ``agf_raw`` drops to ``level``, by bisection."""
    level = person.tau if level is None else level
    ux, uy = math.cos(person.theta), math.sin(person.theta)
    lo, hi = 0.0, 1.0
    while agf_raw(person, person.x + hi * ux, person.y + hi * uy) > level:
        hi *= 2.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if agf_raw(person, person.x + mid * ux, person.y + mid * uy) > level:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def agf_grid(field: SocialField, bounds, cell: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Summed thresholded AGF sampled at cell centres. Returns ``(xs, ys, grid[row=y, col=x])``."""
    xmin, ymin, xmax, ymax = bounds
    nx = max(1, int(round((xmax - xmin) / cell)))
    ny = max(1, int(round((ymax - ymin) / cell)))
    xs = xmin + (np.arange(nx) + 0.5) * cell
    ys = ymin + (np.arange(ny) + 0.5) * cell
    gx, gy = np.meshgrid(xs, ys)
    persons = field.as_array()
    if persons.shape[0] == 0:
        return xs, ys, np.zeros((ny, nx))
    v = kernels.agf_values(persons, gx.ravel(), gy.ravel(), True).sum(axis=0)
    return xs, ys, v.reshape(ny, nx)


def export_agf_grid(field: SocialField, bounds, cell: float, path) -> Path:
    """Write the summed thresholded AGF raster to CSV, row-major from ``ymin`` upward."""
    xs, ys, grid = agf_grid(field, bounds, cell)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as fh:
        fh.write(
            f"# xmin_m={bounds[0]!r} ymin_m={bounds[1]!r} xmax_m={bounds[2]!r} ymax_m={bounds[3]!r} "
            f"cell_m={cell!r} nx={len(xs)} ny={len(ys)} values=summed_thresholded_agf\n"
        )
        fh.write("row,y_m," + ",".join(f"x{i}" for i in range(len(xs))) + "\n")
        for r, y in enumerate(ys):
            fh.write(f"{r},{y!r}," + ",".join(repr(float(v)) for v in grid[r]) + "\n")
    return path


__all__ = [
    "Person",
    "SocialField",
    "agf_raw",
    "agf",
    "multi_point_cost",
    "motion_social_cost",
    "agf_contour",
    "frontal_extent",
    "agf_grid",
    "export_agf_grid",
]
