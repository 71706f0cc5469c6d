"""Command line entry point: ``socialrrt {plan,simulate,batch,render,field}``.

Exit codes: 0 success, 1 no path found, 2 usage error, 3 scenario error,
4 I/O error, 5 simulation timeout.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .control import follow_path
from .experiments import emit_metrics, run_batch
from .planner import VARIANTS, PlanResult, plan
from .render import emit_svg
from .scenario import FIXTURES, ScenarioError, load_fixture, load_scenario
from .social import export_agf_grid

EXIT_OK, EXIT_NO_PATH, EXIT_USAGE, EXIT_SCENARIO, EXIT_IO, EXIT_TIMEOUT = 0, 1, 2, 3, 4, 5

CLI_VARIANTS = tuple(v.replace("_", "-") for v in VARIANTS)


class UsageError(Exception):
    pass


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _scenario(ref: str):
    """A scenario file path, or the name of a shipped fixture."""
    if ref in FIXTURES and not Path(ref).exists():
        return load_fixture(ref)
    return load_scenario(ref)


def _params(scenario, args):
    p = scenario.planner
    if getattr(args, "iterations", None) is not None:
        p = replace(p, K=args.iterations)
    if getattr(args, "seed", None) is not None:
        p = replace(p, seed=args.seed)
    return p


def _mkdir(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create {path}: {exc.strerror}") from exc
    return path


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def _write_result(result: PlanResult, out: Path, trace: bool) -> None:
    _write_text(out / "result.json", json.dumps(result.to_dict(), indent=1, sort_keys=True) + "\n")
    lines = ["waypoint,x_m,y_m,psi1_rad,psi2_rad,edge_social_cost,edge_length_cspace"]
    for i, w in enumerate(result.waypoints):
        s, n = result.per_edge[i - 1] if i else (0.0, 0.0)
        lines.append(",".join([str(i)] + [repr(float(v)) for v in (w.x_base, w.y_base, w.psi1, w.psi2, s, n)]))
    _write_text(out / "path.csv", "\n".join(lines) + "\n")
    if trace:
        rows = ["iteration,tree_size_nodes,best_cost_F"]
        rows += [f"{k},{n},{b!r}" for k, n, b in result.trace]
        _write_text(out / "trace.csv", "\n".join(rows) + "\n")


def _plan(args):
    sc = _scenario(args.scenario)
    result = plan(sc, _params(sc, args), args.variant.replace("-", "_"))
    out = _mkdir(Path(args.out))
    _write_result(result, out, args.trace)
    if not result.success:
        print(f"no path found after {result.iterations_used} iterations", file=sys.stderr)
        return EXIT_NO_PATH, sc, result
    print(f"{result.variant}: {len(result.waypoints)} waypoints, F={result.total_F!r}, "
          f"length={result.path_length!r}")
    return EXIT_OK, sc, result


def cmd_plan(args) -> int:
    return _plan(args)[0]


def cmd_simulate(args) -> int:
    code, sc, result = _plan(args)
    if code != EXIT_OK:
        return code
    log = follow_path(result, sc.control, sc.robot.wheel_radius)
    path = Path(args.out) / "trajectory.csv"
    try:
        log.to_csv(path)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    if not log.success:
        print(f"simulation failed: {log.reason}", file=sys.stderr)
        return EXIT_TIMEOUT
    print(f"reached final waypoint at t={log.rows[-1][0]!r} s")
    return EXIT_OK


def cmd_batch(args) -> int:
    sc = _scenario(args.scenario)
    variants = [v.replace("-", "_") for v in (args.variant or CLI_VARIANTS)]
    variants = list(dict.fromkeys(variants))
    params = _params(sc, args)
    summaries = run_batch(sc, variants, seed=params.seed, runs=args.runs, params=params, workers=args.workers)
    emit_metrics(summaries, Path(args.out))
    for v in variants:
        ok = sum(s.success for s in summaries if s.variant == v)
        print(f"{v}: {ok}/{args.runs} successful")
    return EXIT_OK


def cmd_render(args) -> int:
    sc = _scenario(args.scenario)
    try:
        data = json.loads(Path(args.result).read_text())
    except OSError as exc:
        raise OSError(f"cannot read {args.result}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.result} is not a result file: {exc}") from None
    out = Path(args.out)
    if out.suffix != ".svg":
        out = _mkdir(out) / "render.svg"
    emit_svg(sc, PlanResult.from_dict(data), out, args.pose_every)
    print(str(out))
    return EXIT_OK


def cmd_field(args) -> int:
    sc = _scenario(args.scenario)
    b = sc.world.bounds
    out = _mkdir(Path(args.out)) / "agf_grid.csv"
    export_agf_grid(sc.field, (b.xmin, b.ymin, b.xmax, b.ymax), args.cell, out)
    print(str(out))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="socialrrt", description="Socially aware whole-body RRT* planning.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, variant=True, multi=False):
        p.add_argument("--scenario", required=True, help=f"scenario YAML file or fixture name {FIXTURES}")
        p.add_argument("--out", default="out", help="output directory")
        if variant:
            if multi:
                p.add_argument("--variant", choices=CLI_VARIANTS, action="append",
                               help="planner variant (repeatable; default: all)")
            else:
                p.add_argument("--variant", choices=CLI_VARIANTS, default="social")
            p.add_argument("--seed", type=_u64, default=None, help="random seed (default: scenario planner.seed)")
            p.add_argument("--iterations", type=_positive, default=None, help="planner iterations K")

    for name, fn, text in (("plan", cmd_plan, "plan a single path"),
                           ("simulate", cmd_simulate, "plan, then follow the path in the kinematic simulator")):
        p = sub.add_parser(name, help=text)
        common(p)
        p.add_argument("--trace", action="store_true", help="write per-iteration trace.csv")
        p.set_defaults(func=fn)

    p = sub.add_parser("batch", help="paired seeded runs over variants, with metrics")
    common(p, multi=True)
    p.add_argument("--runs", type=_positive, default=10)
    p.add_argument("--workers", type=_positive, default=1)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("render", help="SVG of a stored result")
    common(p, variant=False)
    p.add_argument("--result", required=True, help="result.json written by plan or simulate")
    p.add_argument("--pose-every", type=_positive, default=3)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("field", help="export the thresholded social cost grid as CSV")
    common(p, variant=False)
    p.add_argument("--cell", type=float, default=0.1)
    p.set_defaults(func=cmd_field)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
