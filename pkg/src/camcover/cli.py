"""Command-line interface: ``camcover {solve,evaluate,features,compare,render}``.

Output directories default to ``$CAMCOVER_OUT`` (or ``./camcover-out``).
Scenario arguments accept a JSON path or a bundled name ("large", "desk").
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from . import __version__
from ._accel import backend_name
from .features import select_feature_points
from .optimizer import IWPA, WPA
from .results import (
    _csv_text,
    compare,
    coverage_report,
    load_deployment,
    save_result,
)
from .render import render_svg
from .scenario import ScenarioError, load_scenario

OUT_ENV = "CAMCOVER_OUT"


def default_out() -> Path:
    return Path(os.environ.get(OUT_ENV, "camcover-out"))


def parse_seed_range(text: str) -> list[int]:
    """``"3"`` -> [3]; ``"0..9"`` -> [0, ..., 9] (inclusive)."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed range {text!r}; expected N or A..B") from None
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty seed range {text!r}")
    return list(range(lo, hi + 1))


def _params(scenario, args):
    over = {}
    if getattr(args, "seed", None) is not None:
        over["seed"] = args.seed
    if getattr(args, "iterations", None) is not None:
        over["T"] = args.iterations
    return scenario.params.with_overrides(**over) if over else scenario.params


def cmd_solve(args):
    from .optimizer import run

    scen = load_scenario(args.scenario)
    params = _params(scen, args)
    t = time.perf_counter()
    result = run(scen, params, args.algo)
    elapsed = time.perf_counter() - t
    paths = save_result(args.out, result, scen)
    print(f"{args.algo} seed={params.seed}: cost {result.fitness}/{result.max_fitness} "
          f"after {result.iterations} iterations ({elapsed:.1f}s, {backend_name()} kernels)")
    for key, p in paths.items():
        print(f"  {key}: {p}")
    return 0


def cmd_evaluate(args):
    scen = load_scenario(args.scenario)
    dep = load_deployment(args.deployment)
    if dep.intrinsics != scen.intrinsics:
        print("camcover: warning: deployment intrinsics differ from the scenario's; using the deployment's",
              file=sys.stderr)
    sys.stdout.write(coverage_report(dep, scen.contour))
    return 0


def cmd_features(args):
    scen = load_scenario(args.scenario)
    rows = [(j, fp.source_index, fp.vertex_index, repr(fp.pose.x), repr(fp.pose.y), repr(fp.pose.rho))
            for j, fp in enumerate(select_feature_points(scen.contour), start=1)]
    text = _csv_text(["j", "k", "vertex", "x", "y", "rho"], rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_compare(args):
    scen = load_scenario(args.scenario)
    params = _params(scen, args)
    cmp = compare(scen, args.seeds, params)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "compare.csv").write_text(cmp.table_csv())
    (out / "compare_curves.csv").write_text(cmp.curves_csv())
    (out / "compare_summary.txt").write_text(cmp.summary())
    sys.stdout.write(cmp.summary())
    return 0


def cmd_render(args):
    scen = load_scenario(args.scenario)
    dep = load_deployment(args.deployment) if args.deployment else None
    svg = render_svg(scen, dep, args.t)
    if args.out:
        Path(args.out).write_text(svg)
    else:
        sys.stdout.write(svg)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="camcover", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="optimise a deployment")
    s.add_argument("scenario")
    s.add_argument("--algo", choices=(IWPA, WPA), default=IWPA)
    s.add_argument("--seed", type=int)
    s.add_argument("--iterations", "-T", type=int, help="override the iteration budget")
    s.add_argument("--out", type=Path, default=default_out())
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("evaluate", help="per-instant coverage of a saved deployment")
    s.add_argument("scenario")
    s.add_argument("deployment")
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("features", help="emit the 4K feature points as CSV")
    s.add_argument("scenario")
    s.add_argument("--out", type=Path)
    s.set_defaults(func=cmd_features)

    s = sub.add_parser("compare", help="paired iwpa/wpa runs over a seed range")
    s.add_argument("scenario")
    s.add_argument("--seeds", type=parse_seed_range, default=parse_seed_range("0..9"))
    s.add_argument("--iterations", "-T", type=int)
    s.add_argument("--out", type=Path, default=default_out())
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("render", help="SVG of contours, FOVs and coverage")
    s.add_argument("scenario")
    s.add_argument("deployment", nargs="?")
    s.add_argument("--t", type=int, default=1, help="sample index (1-based)")
    s.add_argument("--out", type=Path)
    s.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, ValueError, OSError) as exc:
        print(f"camcover: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
