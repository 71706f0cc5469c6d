"""Social Risk-RRT* over the 4-D whole-body configuration space.

The tree lives in flat numpy arrays; nodes are referred to by insertion
index. Edge cost is the trapezoidal motion social cost plus a small
length term ``lambda_len * distance`` that keeps parent choice well posed
where the social field is zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .model import Configuration, InterestPointSet, ObjectGeometry, RobotGeometry, wrap_angle, wrap_positive
from .social import SocialField
from .world import WorldMap

TWO_PI = 2.0 * math.pi

VARIANTS = ("rrt_star", "social", "social_informed", "social_base_only")


class NoPathFound(Exception):
    """No tree node lies within the goal radius."""


@dataclass(frozen=True)
class PlannerParams:
    K: int = 2000
    delta: float = 1.0
    r_near: float = 1.5
    resolution: float = 0.05
    lambda_len: float = 0.001
    seed: int = 0
    goal_radius: float | None = None  # None -> r_near
    informed: bool = False
    w_ang: float = 1.0

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("K must be at least 1")
        for name in ("delta", "r_near", "resolution", "w_ang"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.goal_radius is not None and not self.goal_radius > 0:
            raise ValueError("goal_radius must be positive")
        if not self.lambda_len >= 0:
            raise ValueError("lambda_len must be nonnegative")

    @property
    def goal_tolerance(self) -> float:
        return self.r_near if self.goal_radius is None else self.goal_radius


@dataclass(frozen=True)
class Problem:
    """Packed arrays handed to the kernels for one planning run."""

    geom: np.ndarray
    offsets: np.ndarray
    weights: np.ndarray
    persons: np.ndarray
    bounds: np.ndarray
    rects: np.ndarray
    discs: np.ndarray
    resolution: float = 0.05
    w_ang: float = 1.0

    @classmethod
    def build(
        cls,
        world: WorldMap,
        field: SocialField,
        robot: RobotGeometry,
        obj: ObjectGeometry,
        pts: InterestPointSet,
        resolution: float = 0.05,
        w_ang: float = 1.0,
    ) -> "Problem":
        return cls(
            geom=robot.as_array(),
            offsets=obj.as_array(),
            weights=pts.weight_vector(obj),
            persons=field.as_array(),
            bounds=world.bounds_array(),
            rects=world.rect_array(),
            discs=world.disc_array(),
            resolution=resolution,
            w_ang=w_ang,
        )

    def with_weights(self, weights: np.ndarray) -> "Problem":
        return replace(self, weights=np.asarray(weights, dtype=float))

    def valid(self, q: np.ndarray) -> bool:
        return bool(
            kernels.valid_configs(q[None, :], self.geom, self.offsets, self.bounds, self.rects, self.discs, self.persons)[0]
        )

    def collision_free(self, qa: np.ndarray, qb: np.ndarray) -> bool:
        return bool(
            kernels.collision_free(
                qa, qb, self.w_ang, self.resolution, self.geom, self.offsets,
                self.bounds, self.rects, self.discs, self.persons,
            )
        )

    def msc(self, qa: np.ndarray, qb: np.ndarray) -> float:
        return float(
            kernels.motion_social_cost(
                qa, qb, self.w_ang, self.resolution, self.geom, self.offsets, self.weights, self.persons
            )
        )

    def msc_many(self, Q: np.ndarray, qb: np.ndarray) -> np.ndarray:
        return kernels.edge_social_costs(
            Q, qb, self.w_ang, self.resolution, self.geom, self.offsets, self.weights, self.persons
        )

    def distance(self, qa: np.ndarray, qb: np.ndarray) -> float:
        return float(kernels.config_distance(qa, qb, self.w_ang))


@dataclass(frozen=True)
class TreeNode:
    index: int
    config: Configuration
    parent: int | None
    cost_F: float


class Tree:
    """RRT* tree with eager cost propagation on rewiring."""

    def __init__(self, root: np.ndarray, capacity: int = 64):
        capacity = max(capacity, 1)
        self.configs = np.empty((capacity, 4))
        self.cost = np.empty(capacity)
        self.parent = np.full(capacity, -1, dtype=np.int64)
        self.edge_social = np.zeros(capacity)
        self.edge_length = np.zeros(capacity)
        self.edge_cost = np.zeros(capacity)
        self.children: list[list[int]] = [[]]
        self.configs[0] = root
        self.cost[0] = 0.0
        self.size = 1

    def __len__(self) -> int:
        return self.size

    def _grow(self) -> None:
        cap = 2 * self.configs.shape[0]
        for name in ("configs", "cost", "parent", "edge_social", "edge_length", "edge_cost"):
            old = getattr(self, name)
            new = np.zeros((cap,) + old.shape[1:], dtype=old.dtype)
            new[: self.size] = old[: self.size]
            setattr(self, name, new)

    def add(self, q: np.ndarray, parent: int, social: float, length: float, lambda_len: float) -> int:
        if self.size == self.configs.shape[0]:
            self._grow()
        i = self.size
        self.configs[i] = q
        self._set_edge(i, parent, social, length, lambda_len)
        self.cost[i] = self.cost[parent] + self.edge_cost[i]
        self.children.append([])
        self.children[parent].append(i)
        self.size += 1
        return i

    def _set_edge(self, i, parent, social, length, lambda_len):
        self.parent[i] = parent
        self.edge_social[i] = social
        self.edge_length[i] = length
        self.edge_cost[i] = social + lambda_len * length

    def reparent(self, i: int, parent: int, social: float, length: float, lambda_len: float) -> None:
        self.children[int(self.parent[i])].remove(i)
        self.children[parent].append(i)
        self._set_edge(i, parent, social, length, lambda_len)
        self.cost[i] = self.cost[parent] + self.edge_cost[i]
        stack = list(self.children[i])
        while stack:
            c = stack.pop()
            self.cost[c] = self.cost[self.parent[c]] + self.edge_cost[c]
            stack.extend(self.children[c])

    def node(self, i: int) -> TreeNode:
        p = int(self.parent[i])
        return TreeNode(i, Configuration.from_array(self.configs[i]), None if p < 0 else p, float(self.cost[i]))

    def path_indices(self, i: int) -> list[int]:
        out = [i]
        while self.parent[out[-1]] >= 0:
            out.append(int(self.parent[out[-1]]))
        return out[::-1]

    def consistency_error(self) -> float:
        """Largest ``|cost - (parent cost + stored edge cost)|`` over non-root nodes."""
        if self.size < 2:
            return abs(float(self.cost[0]))
        idx = np.arange(1, self.size)
        expect = self.cost[self.parent[idx]] + self.edge_cost[idx]
        return float(max(abs(self.cost[0]), np.max(np.abs(self.cost[idx] - expect))))

    def recomputed_costs(self, problem: Problem, lambda_len: float) -> np.ndarray:
        """Cost-from-root of every node, recomputing each edge from scratch."""
        out = np.zeros(self.size)
        edge = np.zeros(self.size)
        for i in range(1, self.size):
            a = self.configs[self.parent[i]]
            b = self.configs[i]
            edge[i] = problem.msc(a, b) + lambda_len * problem.distance(a, b)
        # parents always precede children in a root-first walk
        order = [0]
        for i in order:
            order.extend(self.children[i])
        for i in order[1:]:
            out[i] = out[self.parent[i]] + edge[i]
        return out


@dataclass
class PlanResult:
    variant: str
    seed: int
    success: bool
    waypoints: list[Configuration] = field(default_factory=list)
    per_edge: list[tuple[float, float]] = field(default_factory=list)
    total_F: float = math.inf
    lambda_len: float = 0.0
    iterations_used: int = 0
    tree_size: int = 0
    trace: list[tuple[int, int, float]] = field(default_factory=list)

    @property
    def path_length(self) -> float:
        return float(sum(length for _, length in self.per_edge))

    @property
    def social_total(self) -> float:
        return float(sum(s for s, _ in self.per_edge))

    def to_dict(self, with_trace: bool = False) -> dict:
        d = {
            "variant": self.variant,
            "seed": int(self.seed),
            "success": bool(self.success),
            "total_F": float(self.total_F),
            "lambda_len": float(self.lambda_len),
            "iterations_used": int(self.iterations_used),
            "tree_size": int(self.tree_size),
            "waypoints": [[w.x_base, w.y_base, w.psi1, w.psi2] for w in self.waypoints],
            "per_edge": [[float(s), float(n)] for s, n in self.per_edge],
        }
        if with_trace:
            d["trace"] = [[int(k), int(n), float(b)] for k, n, b in self.trace]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PlanResult":
        return cls(
            variant=str(d["variant"]),
            seed=int(d["seed"]),
            success=bool(d["success"]),
            waypoints=[Configuration(*w) for w in d.get("waypoints", [])],
            per_edge=[(float(s), float(n)) for s, n in d.get("per_edge", [])],
            total_F=float(d.get("total_F", math.inf)),
            lambda_len=float(d.get("lambda_len", 0.0)),
            iterations_used=int(d.get("iterations_used", 0)),
            tree_size=int(d.get("tree_size", 0)),
            trace=[(int(k), int(n), float(b)) for k, n, b in d.get("trace", [])],
        )


# ---------------------------------------------------------------- sampling


def _bounds_tuple(world) -> tuple[float, float, float, float]:
    if isinstance(world, WorldMap):
        b = world.bounds
        return (b.xmin, b.ymin, b.xmax, b.ymax)
    xmin, ymin, xmax, ymax = world
    return (float(xmin), float(ymin), float(xmax), float(ymax))


def _uniform_array(bounds, rng: np.random.Generator) -> np.ndarray:
    u = rng.random(4)
    xmin, ymin, xmax, ymax = bounds
    return np.array([xmin + u[0] * (xmax - xmin), ymin + u[1] * (ymax - ymin), TWO_PI * u[2], TWO_PI * u[3]])


def sample_random_state(world, rng: np.random.Generator) -> Configuration:
    """Uniform over the map bounds (``WorldMap`` or ``(xmin, ymin, xmax, ymax)``) and both joints."""
    return Configuration.from_array(_uniform_array(_bounds_tuple(world), rng))


def _ellipse_point(rng, start, goal, c_best):
    f1 = np.asarray(start, dtype=float)
    f2 = np.asarray(goal, dtype=float)
    c_min = float(np.hypot(*(f2 - f1)))
    a = 0.5 * c_best
    b = 0.5 * math.sqrt(max(c_best * c_best - c_min * c_min, 0.0))
    u = rng.random(2)
    r = math.sqrt(u[0])
    t = TWO_PI * u[1]
    ex, ey = a * r * math.cos(t), b * r * math.sin(t)
    heading = math.atan2(f2[1] - f1[1], f2[0] - f1[0])
    ch, sh = math.cos(heading), math.sin(heading)
    cx, cy = 0.5 * (f1 + f2)
    return cx + ch * ex - sh * ey, cy + sh * ex + ch * ey


def _informed_array(bounds, rng, start, goal, c_best, max_tries=100) -> np.ndarray:
    if not math.isfinite(c_best):
        return _uniform_array(bounds, rng)
    c_min = math.hypot(goal[0] - start[0], goal[1] - start[1])
    if c_best < c_min - 1e-12:
        raise ValueError(f"c_best_len {c_best} is shorter than the focal distance {c_min}")
    xmin, ymin, xmax, ymax = bounds
    for _ in range(max_tries):
        x, y = _ellipse_point(rng, start, goal, max(c_best, c_min))
        if xmin <= x <= xmax and ymin <= y <= ymax:
            break
    j = rng.random(2)
    return np.array([x, y, TWO_PI * j[0], TWO_PI * j[1]])


def sample_informed(world, rng, start_base, goal_base, c_best_len: float) -> Configuration:
    """Uniform base position inside the start/goal ellipse of major axis ``c_best_len``.

    An infinite ``c_best_len`` (no solution yet) falls back to uniform sampling.
    Points outside the map bounds are redrawn a bounded number of times.
    """
    return Configuration.from_array(_informed_array(_bounds_tuple(world), rng, start_base, goal_base, c_best_len))


# ---------------------------------------------------------------- tree queries


def nearest_node(tree: Tree, q: Configuration, w_ang: float = 1.0) -> TreeNode:
    d = kernels.config_distances(tree.configs[: tree.size], q.as_array(), w_ang)
    return tree.node(int(np.argmin(d)))


def all_near(tree: Tree, q: Configuration, r_near: float, w_ang: float = 1.0) -> list[TreeNode]:
    d = kernels.config_distances(tree.configs[: tree.size], q.as_array(), w_ang)
    return [tree.node(int(i)) for i in np.flatnonzero(d <= r_near)]


def _steer_array(q_from: np.ndarray, q_to: np.ndarray, delta: float, dist: float) -> np.ndarray:
    s = delta / dist
    out = np.empty(4)
    out[0] = q_from[0] + s * (q_to[0] - q_from[0])
    out[1] = q_from[1] + s * (q_to[1] - q_from[1])
    out[2] = wrap_positive(q_from[2] + s * wrap_angle(q_to[2] - q_from[2]))
    out[3] = wrap_positive(q_from[3] + s * wrap_angle(q_to[3] - q_from[3]))
    return out


def steer(q_from: Configuration, q_to: Configuration, delta: float, w_ang: float = 1.0) -> Configuration:
    """Move from ``q_from`` toward ``q_to`` by at most ``delta`` along the wrapped straight line."""
    a, b = q_from.as_array(), q_to.as_array()
    d = float(kernels.config_distance(a, b, w_ang))
    if d <= delta:
        return q_to
    return Configuration.from_array(_steer_array(a, b, delta, d))


def edge_cost(
    qa: Configuration,
    qb: Configuration,
    field: SocialField,
    pts: InterestPointSet,
    params: PlannerParams,
    robot: RobotGeometry,
    obj: ObjectGeometry,
) -> float:
    a, b = qa.as_array(), qb.as_array()
    social = kernels.motion_social_cost(
        a, b, params.w_ang, params.resolution, robot.as_array(), obj.as_array(), pts.weight_vector(obj), field.as_array()
    )
    return float(social + params.lambda_len * kernels.config_distance(a, b, params.w_ang))


# ---------------------------------------------------------------- path extraction


def _qualifying(tree: Tree, goal_base, goal_radius: float) -> np.ndarray:
    d = np.hypot(tree.configs[: tree.size, 0] - goal_base[0], tree.configs[: tree.size, 1] - goal_base[1])
    return np.flatnonzero(d <= goal_radius)


def get_path(tree: Tree, goal_base, goal_radius: float, variant: str = "", seed: int = 0, lambda_len: float = 0.0) -> PlanResult:
    """Cheapest node whose base lies within ``goal_radius`` of the goal, traced back to the root."""
    idx = _qualifying(tree, goal_base, goal_radius)
    if idx.size == 0:
        raise NoPathFound(f"no node within {goal_radius} m of goal {tuple(goal_base)}")
    end = int(idx[np.argmin(tree.cost[idx])])
    path = tree.path_indices(end)
    return PlanResult(
        variant=variant,
        seed=seed,
        success=True,
        waypoints=[Configuration.from_array(tree.configs[i]) for i in path],
        per_edge=[(float(tree.edge_social[i]), float(tree.edge_length[i])) for i in path[1:]],
        total_F=float(tree.cost[end]),
        lambda_len=lambda_len,
        tree_size=tree.size,
    )


# ---------------------------------------------------------------- planner


def variant_setup(variant: str, pts: InterestPointSet, params: PlannerParams) -> tuple[InterestPointSet, float, bool]:
    """Interest points, length weight and informed flag for a named variant."""
    if variant == "rrt_star":
        return InterestPointSet((("base", 0.0),)), 1.0, False
    if variant == "social":
        return pts, params.lambda_len, params.informed
    if variant == "social_informed":
        return pts, params.lambda_len, True
    if variant == "social_base_only":
        return InterestPointSet((("base", 1.0),)), params.lambda_len, params.informed
    raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def _base_path_length(tree: Tree, end: int, goal_base) -> float:
    path = tree.configs[tree.path_indices(end), :2]
    seg = np.hypot(*np.diff(path, axis=0).T).sum() if len(path) > 1 else 0.0
    return float(seg + math.hypot(path[-1, 0] - goal_base[0], path[-1, 1] - goal_base[1]))


class Planner:
    """One seeded planning run. Owns its tree; scenario data is read-only."""

    def __init__(self, scenario, params: PlannerParams, variant: str = "social"):
        self.scenario = scenario
        self.params = params
        self.variant = variant
        pts, self.lambda_len, self.informed = variant_setup(variant, scenario.interest_points, params)
        self.problem = Problem.build(
            scenario.world, scenario.field, scenario.robot, scenario.object, pts, params.resolution, params.w_ang
        )
        self.start = scenario.start.as_array()
        self.goal = np.asarray(scenario.goal_base, dtype=float)
        self.tree = Tree(self.start, params.K + 1)
        self.trace: list[tuple[int, int, float]] = []
        # (sample, c_best it was drawn under), filled when run(record_samples=True)
        self.informed_samples: list[tuple[np.ndarray, float]] = []
        self.c_best = math.inf

    def run(self, check: bool = False, record_samples: bool = False) -> PlanResult:
        p = self.params
        prob = self.problem
        tree = self.tree
        lam = self.lambda_len
        goal_r = p.goal_tolerance
        bounds = tuple(prob.bounds)
        rng = np.random.default_rng(p.seed)
        if not prob.valid(self.start):
            raise ValueError("start configuration is not valid")
        qualifying = list(_qualifying(tree, self.goal, goal_r))

        for k in range(1, p.K + 1):
            if self.informed and qualifying:
                q_rand = _informed_array(bounds, rng, self.start[:2], self.goal, self.c_best)
                if record_samples:
                    self.informed_samples.append((q_rand.copy(), self.c_best))
            else:
                q_rand = _uniform_array(bounds, rng)
            n = tree.size
            d = kernels.config_distances(tree.configs[:n], q_rand, p.w_ang)
            i_near = int(np.argmin(d))
            if d[i_near] > p.delta:
                q_new = _steer_array(tree.configs[i_near], q_rand, p.delta, float(d[i_near]))
            else:
                q_new = q_rand
            if prob.valid(q_new):
                self._extend(q_new, lam, qualifying, goal_r)
            if check:
                err = tree.consistency_error()
                if err > 1e-9:
                    raise AssertionError(f"tree cost inconsistency {err} at iteration {k}")
            best = float(np.min(tree.cost[qualifying])) if qualifying else math.inf
            if self.informed and qualifying:
                end = qualifying[int(np.argmin(tree.cost[qualifying]))]
                self.c_best = _base_path_length(tree, end, self.goal)
            self.trace.append((k, tree.size, best))

        try:
            result = get_path(tree, self.goal, goal_r, self.variant, p.seed, lam)
        except NoPathFound:
            result = PlanResult(self.variant, p.seed, False, lambda_len=lam, tree_size=tree.size)
        result.iterations_used = p.K
        result.trace = list(self.trace)
        return result

    def _extend(self, q_new, lam, qualifying, goal_r) -> None:
        tree = self.tree
        prob = self.problem
        n = tree.size
        dn = kernels.config_distances(tree.configs[:n], q_new, prob.w_ang)
        near = np.flatnonzero(dn <= self.params.r_near)
        if near.size == 0:
            return
        social = prob.msc_many(tree.configs[near], q_new)
        lengths = dn[near]
        cand = tree.cost[near] + social + lam * lengths
        # argmin over collision-free candidates, ties to the earliest node
        free: dict[int, bool] = {}
        chosen = -1
        for j in np.argsort(cand, kind="stable"):
            ok = prob.collision_free(tree.configs[near[j]], q_new)
            free[int(j)] = ok
            if ok:
                chosen = int(j)
                break
        if chosen < 0:
            return
        new = tree.add(q_new, int(near[chosen]), float(social[chosen]), float(lengths[chosen]), lam)
        for j in range(near.size):
            if j == chosen:
                continue
            m = int(near[j])
            c = social[j] + lam * lengths[j]
            if tree.cost[new] + c < tree.cost[m]:
                ok = free.get(j)
                if ok is None:
                    ok = prob.collision_free(q_new, tree.configs[m])
                if ok:
                    tree.reparent(m, new, float(social[j]), float(lengths[j]), lam)
        if math.hypot(q_new[0] - self.goal[0], q_new[1] - self.goal[1]) <= goal_r:
            qualifying.append(new)


def plan(scenario, params: PlannerParams, variant: str = "social", check: bool = False) -> PlanResult:
    """Run one planner variant. A result with ``success=False`` reports that no path was found."""
    return Planner(scenario, params, variant).run(check=check)


def score_path(waypoints: list[Configuration], problem: Problem) -> list[float]:
    """Motion social cost of each edge of a path under ``problem``'s weights."""
    arr = [w.as_array() for w in waypoints]
    return [problem.msc(a, b) for a, b in zip(arr, arr[1:])]
