import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from socialrrt.control import (
    LOG_COLUMNS,
    ControlParams,
    base_command,
    follow_path,
    joint_step,
    wheel_velocities,
)
from socialrrt.model import Configuration, wrap_angle


def test_params_positive():
    with pytest.raises(ValueError, match="Kp"):
        ControlParams(Kp=0)
    with pytest.raises(ValueError):
        ControlParams(dt=-0.1)


def test_base_command_examples():
    assert base_command((1, 1), (1, 1), 1.5, 1.0) == (0.0, 0.0)
    assert base_command((0, 0), (1, 0), 1.5, 10.0) == pytest.approx((1.5, 0.0))
    vx, vy = base_command((0, 0), (6, 8), 1.5, 2.0)
    assert math.hypot(vx, vy) == pytest.approx(2.0)
    assert (vx, vy) == pytest.approx((1.2, 1.6))


def test_wheel_velocities_examples():
    assert wheel_velocities(1, 0, 0.1) == pytest.approx((10, 10, -10, -10))
    assert wheel_velocities(0, 1, 0.1) == pytest.approx((-10, 10, 10, -10))
    assert wheel_velocities(0, 0, 0.1) == (0, 0, 0, 0)
    with pytest.raises(ValueError):
        wheel_velocities(1, 0, 0)


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-4, 4))
def test_wheel_velocities_linear(vx, vy, a):
    base = wheel_velocities(vx, vy, 0.05)
    scaled = wheel_velocities(a * vx, a * vy, 0.05)
    assert scaled == pytest.approx(tuple(a * v for v in base), abs=1e-9)


def test_joint_step_fixed_point():
    assert joint_step(1.0, 0.0, 1.0, 1.0, 2.0, 0.02) == (1.0, 0.0)
    with pytest.raises(ValueError):
        joint_step(0, 0, 1, 1, 2, 0)


def test_joint_step_saturates_and_respects_limits():
    angle, vel = 0.0, 0.0
    vels = []
    for _ in range(200):
        new_angle, new_vel = joint_step(angle, vel, 3.0, 1.0, 2.0, 0.02)
        assert abs(new_vel) <= 1.0 + 1e-12
        assert abs(new_vel - vel) <= 2.0 * 0.02 + 1e-12
        angle, vel = new_angle, new_vel
        vels.append(vel)
    assert max(vels) == pytest.approx(1.0)


@pytest.mark.parametrize("start, target", [(0.0, 3.0), (0.0, 0.4), (6.0, 0.5), (1.0, 5.5), (2.0, 2.0001)])
def test_joint_step_settles_in_trapezoid_time(start, target):
    vmax, amax, dt = 1.0, 2.0, 0.02
    err = abs(wrap_angle(target - start))
    bound = err / vmax + 2 * vmax / amax
    angle, vel, t = start, 0.0, 0.0
    while not (angle == target % (2 * math.pi) and vel == 0.0):
        angle, vel = joint_step(angle, vel, target, vmax, amax, dt)
        t += dt
        assert t <= bound + dt
    assert abs(wrap_angle(angle - target)) < 1e-9


def _line(n=2, dx=2.0):
    return [Configuration(1.0 + dx * i / (n - 1), 1.0, 0.5, 0.5) for i in range(n)]


def test_single_waypoint_terminates_immediately():
    log = follow_path([Configuration(1, 2, 0.3, 0.4)], ControlParams())
    assert log.success and len(log.rows) == 1 and log.rows[0][0] == 0.0


def test_empty_path_rejected():
    with pytest.raises(ValueError):
        follow_path([], ControlParams())


def test_straight_move_reaches_target():
    p = ControlParams()
    log = follow_path(_line(), p)
    q = log.final_config
    assert log.success
    assert math.hypot(q.x_base - 3.0, q.y_base - 1.0) < p.accept_pos


def test_base_error_strictly_decreasing_and_integrator_consistent():
    p = ControlParams()
    log = follow_path(_line(), p)
    rows = np.array([r[:-1] for r in log.rows])
    err = np.hypot(rows[:, 1] - 3.0, rows[:, 2] - 1.0)
    active = err > p.accept_pos
    assert np.all(np.diff(err)[active[:-1]] < 0)
    step = rows[1:, 1:3] - rows[:-1, 1:3]
    assert np.max(np.abs(step - p.dt * rows[:-1, 5:7])) < 1e-6


def test_waypoint_index_monotone_and_arm_follows():
    wps = [Configuration(1, 1, 0, 0), Configuration(1.5, 1.2, 1.0, 5.0), Configuration(2.5, 1.0, 3.0, 4.0)]
    p = ControlParams()
    log = follow_path(wps, p)
    idx = [r[-1] for r in log.rows]
    assert idx == sorted(idx) and idx[-1] == 2
    q = log.final_config
    assert abs(wrap_angle(q.psi1 - 3.0)) < p.accept_ang and abs(wrap_angle(q.psi2 - 4.0)) < p.accept_ang


def test_wheel_log_matches_mapping():
    log = follow_path(_line(3, 1.0), ControlParams(), wheel_radius=0.1)
    for r in log.rows:
        vx, vy = r[5], r[6]
        assert r[7:11] == ((vx - vy) / 0.1, (vx + vy) / 0.1, (-vx + vy) / 0.1, (-vx - vy) / 0.1)


def test_timeout_reports_failure(tmp_path):
    log = follow_path(_line(2, 50.0), ControlParams(horizon=1.0))
    assert not log.success and "timeout" in log.reason
    path = log.to_csv(tmp_path / "t.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(LOG_COLUMNS)
    assert len(lines) == len(log.rows) + 1
