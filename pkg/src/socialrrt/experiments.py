"""Seeded batch runs over planner variants, with metrics and CSV emission."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .model import point_labels
from .planner import PlannerParams, PlanResult, Problem, plan, score_path

QUARTILE_RULE = "linear interpolation between order statistics: value at rank (n-1)*p of the sorted sample"


def derive_seed(base_seed: int, run_index: int) -> int:
    """Deterministic 64-bit seed for run ``run_index``; shared by all variants (paired runs)."""
    ss = np.random.SeedSequence([int(base_seed) & 0xFFFFFFFFFFFFFFFF, int(run_index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass
class RunSummary:
    variant: str
    run_index: int
    seed: int
    success: bool
    total_F: float = math.nan
    path_length: float = math.nan
    lambda_len: float = 0.0
    social_total: float = math.nan  # planning metric, length term excluded
    full_social: float = math.nan  # path re-scored under the scenario's interest points
    full_F: float = math.nan  # full_social + scenario lambda_len * path_length
    cumulative: list[tuple[float, float, float]] = field(default_factory=list)  # (norm, social, full social)
    clearance: dict[str, float] = field(default_factory=dict)
    per_edge: list[tuple[float, float]] = field(default_factory=list)


def dense_path(waypoints, resolution: float, w_ang: float = 1.0) -> np.ndarray:
    """Every edge interpolated at ``resolution``, shared endpoints kept once."""
    arr = [w.as_array() for w in waypoints]
    if len(arr) == 1:
        return arr[0][None, :]
    rows = []
    for i, (a, b) in enumerate(zip(arr, arr[1:])):
        q = kernels.interpolate(a, b, kernels.n_steps(kernels.config_distance(a, b, w_ang), resolution))
        rows.append(q if i == 0 else q[1:])
    return np.vstack(rows)


def person_clearance(scenario, waypoints, resolution: float = 0.05) -> dict[str, float]:
    """Minimum distance from each kinematic point to any person centre along the path."""
    labels = point_labels(scenario.object)
    persons = scenario.field.as_array()
    if persons.shape[0] == 0 or not waypoints:
        return {label: math.inf for label in labels}
    pts = kernels.forward_points(dense_path(waypoints, resolution), scenario.robot.as_array(), scenario.object.as_array())
    d = np.linalg.norm(pts[:, :, None, :] - persons[None, None, :, :2], axis=-1).min(axis=(0, 2))
    return {label: float(v) for label, v in zip(labels, d)}


def summarize(scenario, result: PlanResult, run_index: int, params: PlannerParams) -> RunSummary:
    s = RunSummary(result.variant, run_index, result.seed, result.success, lambda_len=result.lambda_len)
    if not result.success:
        return s
    full = Problem.build(
        scenario.world, scenario.field, scenario.robot, scenario.object,
        scenario.interest_points, params.resolution, params.w_ang,
    )
    full_edges = score_path(result.waypoints, full)
    s.total_F = result.total_F
    s.per_edge = list(result.per_edge)
    s.path_length = result.path_length
    s.social_total = result.social_total
    s.full_social = float(sum(full_edges))
    s.full_F = s.full_social + params.lambda_len * s.path_length
    norm = social = fsocial = 0.0
    s.cumulative = [(0.0, 0.0, 0.0)]
    for (e_social, e_len), e_full in zip(result.per_edge, full_edges):
        norm += e_len
        social += e_social
        fsocial += e_full
        s.cumulative.append((norm, social, fsocial))
    s.clearance = person_clearance(scenario, result.waypoints, params.resolution)
    return s


def _run_one(job):
    scenario, params, variant, run_index = job
    p = PlannerParams(**{**params.__dict__, "seed": derive_seed(params.seed, run_index)})
    return summarize(scenario, plan(scenario, p, variant), run_index, p)


def run_batch(scenario, variants, seed: int = 0, runs: int = 10, params: PlannerParams | None = None, workers: int = 1) -> list[RunSummary]:
    """Every variant for ``runs`` paired seeds, ordered by (variant, run index).

    Failed runs are kept as unsuccessful summaries; the batch never aborts on one.
    """
    if runs < 1:
        raise ValueError("runs must be at least 1")
    params = params or scenario.planner
    params = PlannerParams(**{**params.__dict__, "seed": int(seed)})
    jobs = [(scenario, params, v, i) for v in variants for i in range(runs)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_one, jobs))
    return [_run_one(job) for job in jobs]


# ---------------------------------------------------------------- emission


def quartiles(values) -> tuple[float, float, float, float, float]:
    """min, Q1, median, Q3, max with linear interpolation between order statistics."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("no values")
    q = np.percentile(v, [0, 25, 50, 75, 100], method="linear")
    return tuple(float(x) for x in q)


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    return "" if math.isnan(x) else repr(x)


def _write(path: Path, header: list[str], rows, comment: str | None = None) -> None:
    try:
        with path.open("w") as fh:
            if comment:
                fh.write(f"# {comment}\n")
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) if not isinstance(v, str) else v for v in row) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def curve_name(s: RunSummary) -> str:
    return f"{s.variant}_run{s.run_index:03d}.csv"


def emit_metrics(summaries: list[RunSummary], out_dir) -> list[Path]:
    """Write per-run curve CSVs, boxplot summaries and a run index under ``out_dir``."""
    out = Path(out_dir)
    curves = out / "curves"
    try:
        curves.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create {curves}: {exc.strerror}") from exc
    written = []
    for s in summaries:
        if not s.success:
            continue
        p = curves / curve_name(s)
        _write(
            p,
            ["waypoint", "cumulative_norm_cspace", "cumulative_social_cost", "cumulative_social_cost_full"],
            [(i, *row) for i, row in enumerate(s.cumulative)],
            "cspace = config-space units (m for base, rad for joints); social costs integrate over cspace",
        )
        written.append(p)

    variants = list(dict.fromkeys(s.variant for s in summaries))
    for fname, attr in (("boxplot.csv", "total_F"), ("boxplot_full.csv", "full_F")):
        rows = []
        for v in variants:
            vals = [getattr(s, attr) for s in summaries if s.variant == v and s.success]
            if vals:
                rows.append((v, len(vals), *quartiles(vals), "0"))
            else:
                rows.append((v, 0, math.nan, math.nan, math.nan, math.nan, math.nan, "1"))
        p = out / fname
        _write(p, ["variant", "count", "min", "q1", "median", "q3", "max", "empty"], rows,
               f"{attr} per variant over successful runs; quartile rule: {QUARTILE_RULE}")
        written.append(p)

    labels = sorted({k for s in summaries for k in s.clearance})
    p = out / "index.csv"
    _write(
        p,
        ["variant", "run_index", "seed", "success", "total_F", "path_length_cspace", "social_total",
         "full_social", "full_F", "lambda_len", "curve_file"] + [f"clearance_{k}_m" for k in labels],
        [
            (s.variant, s.run_index, str(s.seed), s.success, s.total_F, s.path_length, s.social_total,
             s.full_social, s.full_F, s.lambda_len, f"curves/{curve_name(s)}" if s.success else "",
             *[s.clearance.get(k, math.nan) for k in labels])
            for s in summaries
        ],
    )
    written.append(p)
    return written
