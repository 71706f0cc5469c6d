import math
from dataclasses import replace

import numpy as np
import pytest

from oracles import dist, scan_nearest
from socialrrt.model import Configuration, InterestPointSet, ObjectGeometry, RobotGeometry, config_distance
from socialrrt.planner import (
    NoPathFound,
    Planner,
    PlannerParams,
    PlanResult,
    Problem,
    Tree,
    all_near,
    edge_cost,
    get_path,
    nearest_node,
    plan,
    sample_informed,
    sample_random_state,
    score_path,
    steer,
)
from socialrrt.scenario import Scenario
from socialrrt.social import Person, SocialField, motion_social_cost
from socialrrt.world import Rect, WorldMap, collision_free, is_valid

BAR = ObjectGeometry(((0.0, -0.3), (0.0, 0.3)))
ROBOT = RobotGeometry()


def open_scenario(persons=(), obstacles=(), goal=(5.0, 0.0)):
    return Scenario(
        world=WorldMap(Rect(-2, -3, 7, 3), tuple(obstacles)),
        start=Configuration(0, 0, 0, 0),
        goal_base=goal,
        persons=tuple(persons),
        robot=ROBOT,
        object=BAR,
    )


def test_params_validation():
    with pytest.raises(ValueError):
        PlannerParams(K=0)
    with pytest.raises(ValueError):
        PlannerParams(delta=0)
    with pytest.raises(ValueError):
        PlannerParams(lambda_len=-1)
    with pytest.raises(ValueError):
        PlannerParams(goal_radius=0)
    assert PlannerParams().goal_tolerance == 1.5
    assert PlannerParams(goal_radius=0.5).goal_tolerance == 0.5


# ---------------------------------------------------------------- sampling


def test_sampling_is_deterministic():
    w = WorldMap(Rect(0, 0, 10, 5))
    first = sample_random_state(w, np.random.default_rng(7))
    r1, r2 = np.random.default_rng(7), np.random.default_rng(7)
    s1 = [sample_random_state(w, r1) for _ in range(50)]
    s2 = [sample_random_state(w, r2) for _ in range(50)]
    assert s1 == s2 and first == s1[0]


def test_uniform_sampling_mean():
    rng = np.random.default_rng(0)
    xs = np.array([sample_random_state((0.0, 0.0, 10.0, 4.0), rng).x_base for _ in range(100_000)])
    se = 10.0 / math.sqrt(12) / math.sqrt(xs.size)
    assert abs(xs.mean() - 5.0) < 3 * se
    assert xs.min() >= 0 and xs.max() <= 10


def test_degenerate_bounds_share_y():
    rng = np.random.default_rng(3)
    ys = {sample_random_state((0.0, 2.0, 10.0, 2.0), rng).y_base for _ in range(100)}
    assert ys == {2.0}


def test_informed_degenerate_ellipse_is_segment():
    rng = np.random.default_rng(0)
    for _ in range(200):
        q = sample_informed((0.0, -5.0, 10.0, 5.0), rng, (1.0, 0.0), (9.0, 0.0), 8.0)
        assert 1.0 - 1e-9 <= q.x_base <= 9.0 + 1e-9
        assert abs(q.y_base) < 1e-9


def test_informed_membership_and_rejection():
    rng = np.random.default_rng(1)
    f1, f2 = (2.0, 1.0), (7.0, 4.0)
    c = 7.0
    for _ in range(2000):
        q = sample_informed((0.0, 0.0, 10.0, 6.0), rng, f1, f2, c)
        assert math.dist(q.base, f1) + math.dist(q.base, f2) <= c + 1e-9
    with pytest.raises(ValueError):
        sample_informed((0.0, 0.0, 10.0, 6.0), rng, f1, f2, 3.0)


def test_informed_infinite_cbest_is_uniform():
    a = sample_informed((0.0, 0.0, 10.0, 6.0), np.random.default_rng(5), (1, 1), (9, 5), math.inf)
    b = sample_random_state((0.0, 0.0, 10.0, 6.0), np.random.default_rng(5))
    assert a == b


def test_informed_area_ratio():
    """Samples are uniform in the ellipse: the half-scale ellipse gets a quarter of them."""
    rng = np.random.default_rng(2)
    f1, f2, c = np.array([3.0, 3.0]), np.array([7.0, 3.0]), 6.0
    inner = 0
    n = 100_000
    for _ in range(n):
        q = sample_informed((0.0, 0.0, 10.0, 6.0), rng, f1, f2, c)
        # scale the point toward the centre: inside the half ellipse iff 2(p-m)+m is inside the full one
        m = 0.5 * (f1 + f2)
        p = m + 2.0 * (np.array(q.base) - m)
        inner += np.linalg.norm(p - f1) + np.linalg.norm(p - f2) <= c
    assert abs(inner / n / 0.25 - 1.0) < 0.02


def test_informed_large_cbest_covers_bounds():
    rng = np.random.default_rng(4)
    xs = np.array([sample_informed((0.0, 0.0, 4.0, 4.0), rng, (1, 2), (3, 2), 500.0).base for _ in range(4000)])
    # acceptance region is the whole box: each quadrant receives a quarter of the samples
    frac = np.mean((xs[:, 0] < 2) & (xs[:, 1] < 2))
    assert abs(frac - 0.25) < 0.02


# ---------------------------------------------------------------- tree queries


def test_nearest_node_examples():
    t = Tree(np.zeros(4))
    assert nearest_node(t, Configuration(3, 3, 1, 1)).index == 0
    t.add(np.array([2.0, 0, 0, 0]), 0, 0.0, 2.0, 1.0)
    assert nearest_node(t, Configuration(0.9, 0, 0, 0)).index == 0
    assert nearest_node(t, Configuration(1.0, 0, 0, 0)).index == 0  # tie goes to the earlier node


def test_near_queries_match_scan():
    rng = np.random.default_rng(9)
    t = Tree(np.array([5.0, 5.0, 0.0, 0.0]))
    nodes = [t.configs[0].copy()]
    for _ in range(99):
        q = np.array([*rng.uniform(0, 10, 2), *rng.uniform(0, 2 * math.pi, 2)])
        t.add(q, int(rng.integers(t.size)), 0.0, 0.0, 0.0)
        nodes.append(q)
    for _ in range(20):
        q = Configuration(*rng.uniform(0, 10, 2), *rng.uniform(0, 6, 2))
        assert nearest_node(t, q).index == scan_nearest(nodes, q.as_array())
        near = [n.index for n in all_near(t, q, 3.0)]
        assert near == [i for i, n in enumerate(nodes) if dist(n, q.as_array()) <= 3.0]
    assert [n.index for n in all_near(t, Configuration.from_array(nodes[4]), 0.0)] == [4]
    assert len(all_near(t, Configuration(5, 5, 0, 0), 100.0)) == 100


def test_steer_examples():
    out = steer(Configuration(0, 0, 0, 0), Configuration(3, 4, 0, 0), 1.0)
    assert out.as_array() == pytest.approx([0.6, 0.8, 0, 0], abs=1e-12)
    near = Configuration(0.3, 0.2, 0.1, 6.2)
    assert steer(Configuration(0, 0, 0, 0), near, 1.0) is near
    exact = Configuration(1.0, 0, 0, 0)
    assert steer(Configuration(0, 0, 0, 0), exact, 1.0) is exact


def test_steer_wraps_joints():
    out = steer(Configuration(0, 0, 0.2, 0), Configuration(0, 0, 2 * math.pi - 2.0, 0), 1.0)
    assert config_distance(Configuration(0, 0, 0.2, 0), out) == pytest.approx(1.0)
    assert out.psi1 == pytest.approx(2 * math.pi - 0.8)


def test_edge_cost_examples():
    qa, qb = Configuration(0, 0, 0, 0), Configuration(1, 2, 0.5, 0.1)
    pts = InterestPointSet.uniform(BAR)
    empty = SocialField(())
    assert edge_cost(qa, qb, empty, pts, PlannerParams(lambda_len=1.0), ROBOT, BAR) == pytest.approx(config_distance(qa, qb))
    assert edge_cost(qa, qa, empty, pts, PlannerParams(), ROBOT, BAR) == 0.0
    field = SocialField((Person(0.5, 0.5, 1.0),))
    msc = motion_social_cost(field, qa, qb, pts, ROBOT, BAR, 0.05)
    assert msc > 0
    assert edge_cost(qa, qb, field, pts, PlannerParams(lambda_len=0.0), ROBOT, BAR) == msc


# ---------------------------------------------------------------- get_path


def test_get_path_root_within_goal():
    t = Tree(np.array([1.0, 1.0, 0, 0]))
    r = get_path(t, (1.2, 1.0), 0.5)
    assert r.success and len(r.waypoints) == 1 and r.total_F == 0.0


def test_get_path_picks_cheaper_leaf():
    t = Tree(np.zeros(4))
    a = t.add(np.array([1.0, 0, 0, 0]), 0, 0.0, 1.0, 0.0)
    t.add(np.array([5.0, 0.1, 0, 0]), a, 2.0, 1.0, 1.0)  # cost 3.0
    t.add(np.array([5.0, -0.1, 0, 0]), 0, 1.0, 1.0, 1.0)  # cost 2.0
    r = get_path(t, (5.0, 0.0), 0.5)
    assert r.total_F == 2.0
    assert [w.base for w in r.waypoints] == [(0.0, 0.0), (5.0, -0.1)]
    with pytest.raises(NoPathFound):
        get_path(t, (20.0, 0.0), 0.5)


def test_tree_reparent_propagates():
    t = Tree(np.zeros(4))
    a = t.add(np.array([1.0, 0, 0, 0]), 0, 5.0, 1.0, 0.0)
    b = t.add(np.array([2.0, 0, 0, 0]), a, 1.0, 1.0, 0.0)
    c = t.add(np.array([3.0, 0, 0, 0]), b, 1.0, 1.0, 0.0)
    t.reparent(a, 0, 1.0, 1.0, 0.0)
    assert t.cost[c] == 3.0 and t.consistency_error() == 0.0


def test_plan_result_roundtrip():
    r = PlanResult("social", 3, True, [Configuration(0, 0, 1, 2), Configuration(1, 0, 1, 2)], [(0.5, 1.0)], 0.501, 0.001, 10, 5, [(1, 2, 0.5)])
    back = PlanResult.from_dict(r.to_dict(with_trace=True))
    assert back == r


# ---------------------------------------------------------------- full planning runs


def test_free_space_path_is_near_straight():
    sc = open_scenario()
    r = plan(sc, PlannerParams(K=2000, seed=11), "rrt_star")
    assert r.success
    base = np.array([w.base for w in r.waypoints])
    length = np.hypot(*np.diff(base, axis=0).T).sum()
    assert length <= 1.2 * 5.0


def test_enclosed_goal_fails():
    box = (Rect(3.5, -1.5, 6.5, -1.2), Rect(3.5, 1.2, 6.5, 1.5), Rect(3.5, -1.5, 3.8, 1.5), Rect(6.2, -1.5, 6.5, 1.5))
    sc = open_scenario(obstacles=box, goal=(5.0, 0.0))
    r = plan(sc, PlannerParams(K=300, seed=0, goal_radius=0.5), "social")
    assert not r.success and r.waypoints == [] and r.iterations_used == 300


def test_plan_is_deterministic(office):
    p = replace(office.planner, K=400, seed=42)
    a, b = plan(office, p, "social_informed"), plan(office, p, "social_informed")
    assert a.to_dict(with_trace=True) == b.to_dict(with_trace=True)


def test_tree_consistency_and_anytime_trace(office):
    planner = Planner(office, replace(office.planner, K=600, seed=5), "social_informed")
    r = planner.run(check=True)
    best = [b for _, _, b in r.trace]
    assert all(x >= y for x, y in zip(best, best[1:]))
    rec = planner.tree.recomputed_costs(planner.problem, planner.lambda_len)
    assert np.max(np.abs(rec - planner.tree.cost[: planner.tree.size])) < 1e-9


def test_returned_path_is_feasible_and_consistent(office):
    r = plan(office, replace(office.planner, K=800, seed=3), "social")
    assert r.success
    for q in r.waypoints:
        assert is_valid(q, office.world, office.field, office.robot, office.object)
    for a, b in zip(r.waypoints, r.waypoints[1:]):
        assert collision_free(a, b, office.world, office.field, office.robot, office.object, 0.05)
    assert r.total_F == pytest.approx(sum(s + r.lambda_len * n for s, n in r.per_edge), abs=1e-9)
    prob = Problem.build(office.world, office.field, office.robot, office.object, office.interest_points)
    assert score_path(r.waypoints, prob) == pytest.approx([s for s, _ in r.per_edge], abs=1e-12)


def test_weight_scaling_leaves_path_unchanged(office):
    p = replace(office.planner, K=500, seed=8)
    a = plan(office, p, "social")
    scaled = office.with_weights({k: 4.0 * w for k, w in office.interest_points.entries})
    b = plan(scaled, replace(p, lambda_len=4.0 * p.lambda_len), "social")
    assert [w.as_array().tolist() for w in a.waypoints] == [w.as_array().tolist() for w in b.waypoints]
    assert b.total_F == pytest.approx(4.0 * a.total_F, rel=1e-12)


def test_variant_mapping(office):
    p = replace(office.planner, K=50)
    assert Planner(office, p, "rrt_star").lambda_len == 1.0
    assert not Planner(office, p, "rrt_star").problem.weights.any()
    assert Planner(office, p, "social_base_only").problem.weights.tolist() == [1, 0, 0, 0, 0]
    assert Planner(office, p, "social_informed").informed
    with pytest.raises(ValueError):
        Planner(office, p, "astar")


def test_person_midway_social_beats_baseline():
    sc = open_scenario(persons=(Person(2.5, 0.3, math.pi),))
    full = Problem.build(sc.world, sc.field, sc.robot, sc.object, sc.interest_points)
    soc, base = [], []
    for seed in range(10):
        p = PlannerParams(K=1000, seed=seed)
        soc.append(sum(score_path(plan(sc, p, "social").waypoints, full)))
        base.append(sum(score_path(plan(sc, p, "rrt_star").waypoints, full)))
    assert np.median(soc) < np.median(base)
