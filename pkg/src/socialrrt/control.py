"""Kinematic waypoint follower for the omnidirectional base and the arm joints."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

from .model import Configuration, wrap_angle, wrap_positive


@dataclass(frozen=True)
class ControlParams:
    Kp: float = 1.5
    dt: float = 0.02
    v_max: float = 1.0
    joint_v_max: float = 1.0
    joint_a_max: float = 2.0
    accept_pos: float = 0.05
    accept_ang: float = 0.02
    horizon: float = 600.0  # simulated seconds before giving up

    def __post_init__(self):
        for name in ("Kp", "dt", "v_max", "joint_v_max", "joint_a_max", "accept_pos", "accept_ang", "horizon"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class SimState:
    config: Configuration
    base_velocity: tuple[float, float] = (0.0, 0.0)
    joint_velocities: tuple[float, float] = (0.0, 0.0)
    time: float = 0.0
    waypoint_index: int = 0


def base_command(current, next_wp, Kp: float, v_max: float) -> tuple[float, float]:
    """Proportional velocity toward the next waypoint, clamped to ``v_max``."""
    vx = Kp * (next_wp[0] - current[0])
    vy = Kp * (next_wp[1] - current[1])
    speed = math.hypot(vx, vy)
    if speed > v_max:
        vx *= v_max / speed
        vy *= v_max / speed
    return vx, vy


def wheel_velocities(vx: float, vy: float, r: float) -> tuple[float, float, float, float]:
    if not r > 0:
        raise ValueError("wheel radius must be positive")
    return ((vx - vy) / r, (vx + vy) / r, (-vx + vy) / r, (-vx - vy) / r)


def joint_step(current: float, current_vel: float, target: float, v_max: float, a_max: float, dt: float) -> tuple[float, float]:
    """One step of a discrete trapezoidal profile toward ``target`` along the shortest arc.

    The commanded speed is the largest one from which the joint can still
    brake to rest at the target in whole steps of ``a_max * dt``.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    e = wrap_angle(target - current)
    if abs(e) < 1e-9 and abs(current_vel) <= a_max * dt:
        return wrap_positive(target), 0.0
    ae = abs(e)
    v_stop = a_max * (-0.5 * dt + math.sqrt(0.25 * dt * dt + 2.0 * ae / a_max))
    v_des = math.copysign(min(v_max, v_stop, ae / dt), e)
    dv = min(max(v_des - current_vel, -a_max * dt), a_max * dt)
    vel = current_vel + dv
    return wrap_positive(current + vel * dt), vel


LOG_COLUMNS = (
    "time_s", "x_m", "y_m", "psi1_rad", "psi2_rad", "vx_mps", "vy_mps",
    "v1_radps", "v2_radps", "v3_radps", "v4_radps", "waypoint_index",
)


@dataclass
class TrajectoryLog:
    rows: list[tuple] = field(default_factory=list)
    success: bool = True
    reason: str = ""

    def to_csv(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(LOG_COLUMNS)
            for row in self.rows:
                w.writerow([repr(float(v)) for v in row[:-1]] + [int(row[-1])])
        return path

    @property
    def final_config(self) -> Configuration:
        t, x, y, p1, p2 = self.rows[-1][:5]
        return Configuration(x, y, p1, p2)


def _reached(q: Configuration, wp: Configuration, params: ControlParams) -> bool:
    return (
        math.hypot(wp.x_base - q.x_base, wp.y_base - q.y_base) < params.accept_pos
        and abs(wrap_angle(wp.psi1 - q.psi1)) < params.accept_ang
        and abs(wrap_angle(wp.psi2 - q.psi2)) < params.accept_ang
    )


def follow_path(waypoints, params: ControlParams, wheel_radius: float = 0.05) -> TrajectoryLog:
    """Closed-loop kinematic simulation along ``waypoints`` (a list or a ``PlanResult``).

    A waypoint counts as reached once the base is within ``accept_pos`` and
    both joints within ``accept_ang``; only then does the target advance.
    """
    waypoints = list(getattr(waypoints, "waypoints", waypoints))
    if not waypoints:
        raise ValueError("cannot follow an empty path")
    state = SimState(config=waypoints[0])
    log = TrajectoryLog()
    n = len(waypoints)
    step = 0
    while True:
        q = state.config
        while state.waypoint_index < n and _reached(q, waypoints[state.waypoint_index], params):
            state.waypoint_index += 1
        if state.waypoint_index == n:
            log.rows.append((state.time, q.x_base, q.y_base, q.psi1, q.psi2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, n - 1))
            return log
        if state.time >= params.horizon:
            log.rows.append((state.time, q.x_base, q.y_base, q.psi1, q.psi2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, state.waypoint_index))
            log.success = False
            log.reason = f"timeout after {params.horizon} s at waypoint {state.waypoint_index}"
            return log
        wp = waypoints[state.waypoint_index]
        vx, vy = base_command(q.base, wp.base, params.Kp, params.v_max)
        wheels = wheel_velocities(vx, vy, wheel_radius)
        log.rows.append((state.time, q.x_base, q.y_base, q.psi1, q.psi2, vx, vy, *wheels, state.waypoint_index))
        p1, w1 = joint_step(q.psi1, state.joint_velocities[0], wp.psi1, params.joint_v_max, params.joint_a_max, params.dt)
        p2, w2 = joint_step(q.psi2, state.joint_velocities[1], wp.psi2, params.joint_v_max, params.joint_a_max, params.dt)
        step += 1
        state.config = Configuration(q.x_base + vx * params.dt, q.y_base + vy * params.dt, p1, p2)
        state.base_velocity = (vx, vy)
        state.joint_velocities = (w1, w2)
        state.time = step * params.dt
