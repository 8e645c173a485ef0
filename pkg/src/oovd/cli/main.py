"""``oovd`` command line.

Exit codes: 0 success, 1 partial failure (some bench instances failed, or a
runtime error), 2 bad arguments or unreadable input.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ..diagrams import TopologyError, build_refined_oovd
from ..steiner import solve_1steiner, tree_stats
from .instances import InstanceSpec, format_points, gen_points, read_points

log = logging.getLogger("oovd")

EXIT_OK, EXIT_PARTIAL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _sizes(text: str) -> list:
    try:
        sizes = [int(s) for s in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None
    if not sizes or min(sizes) < 2:
        raise argparse.ArgumentTypeError("sizes must be integers >= 2")
    return sizes


def _add_instance_args(p: argparse.ArgumentParser, need_input: bool = False) -> None:
    p.add_argument("--input", type=Path, help="point file (one 'x y' per line)")
    p.add_argument("--n", type=int, help="number of random terminals")
    p.add_argument("--seed", type=int, default=1, help="PCG64 seed (default 1)")
    p.add_argument("--grid", type=int, default=10000, help="coordinates drawn from [0, grid] (default 10000)")


def _points(args) -> list:
    if args.input is not None:
        try:
            return read_points(args.input)
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
    if args.n is None:
        raise UsageError("give --input or --n")
    return gen_points(InstanceSpec(args.n, args.seed, args.grid))


def cmd_gen(args) -> int:
    if args.n is None:
        raise UsageError("gen needs --n")
    pts = gen_points(InstanceSpec(args.n, args.seed, args.grid))
    text = format_points(pts, f"n={args.n} seed={args.seed} grid={args.grid} pcg64")
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_oovd(args) -> int:
    from .serialize import dump

    pts = _points(args)
    sub = build_refined_oovd(pts)
    print(f"faces {len(sub.faces)} (arrangement {sub.faces_premerge})")
    if args.out:
        dump(sub, args.out)
    if args.svg:
        from .render import render_svg

        render_svg(sub, args.svg, terminals=pts)
    return EXIT_OK


def cmd_solve(args) -> int:
    from .serialize import dump

    pts = _points(args)
    sol = solve_1steiner(pts)
    st = tree_stats(sol, sol.mst)
    where = "none" if sol.steiner is None else "({:.6f}, {:.6f})".format(*sol.steiner_float)
    print(f"mst {sol.mst_length:.6f} steiner-tree {sol.length:.6f} improvement {st.improvement_pct:.4f}%")
    print(f"steiner point {where} degree {st.steiner_degree}")
    if args.out:
        dump(sol, args.out)
    if args.svg:
        from .render import render_svg

        render_svg(sol, args.svg)
    return EXIT_OK


def cmd_bench(args) -> int:
    from .bench import run_bench

    def progress(row):
        log.info("n=%d seed=%d faces=%d improvement=%.3f%% %.0f ms", row.n, row.seed, row.faces, row.improvement_pct, row.wall_ms)

    report = run_bench(args.sizes, args.seeds, args.csv, grid=args.grid, figures=not args.no_figures, progress=progress)
    for n, s in report.summary().items():
        if s["instances"]:
            print(
                f"n={n}: {s['instances']} ok, {s['failed']} failed, faces/n {s['faces_per_n']:.2f}, "
                f"35*faces/pruned {s['naive_over_pruned']:.2f}, improvement {s['improvement_pct']:.3f}%"
            )
        else:
            print(f"n={n}: all {s['failed']} instances failed")
    return EXIT_PARTIAL if report.failures else EXIT_OK


def cmd_render(args) -> int:
    from .render import render_svg
    from .serialize import load

    if args.input is None or args.svg is None:
        raise UsageError("render needs --input (JSON) and --svg")
    try:
        obj = load(args.input)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
    terminals = read_points(args.points) if args.points else None
    render_svg(obj, args.svg, terminals=terminals)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="oovd", description="Overlaid oriented Voronoi diagrams and 1-Steiner trees.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a random point set")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--grid", type=int, default=10000)
    p.add_argument("--out", type=Path, help="output file (default stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oovd", help="build the refined OOVD")
    _add_instance_args(p)
    p.add_argument("--out", type=Path, help="subdivision JSON")
    p.add_argument("--svg", type=Path, help="SVG drawing")
    p.set_defaults(func=cmd_oovd)

    p = sub.add_parser("solve", help="optimal 1-Steiner tree")
    _add_instance_args(p)
    p.add_argument("--out", type=Path, help="solution JSON")
    p.add_argument("--svg", type=Path, help="SVG drawing")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="random-instance benchmark to CSV and PNG figures")
    p.add_argument("--sizes", type=_sizes, default=[10, 20, 50, 100], help="comma separated (default 10,20,50,100)")
    p.add_argument("--seeds", type=int, default=50, help="seeds 1..k per size (default 50)")
    p.add_argument("--grid", type=int, default=10000)
    p.add_argument("--csv", type=Path, required=True)
    p.add_argument("--no-figures", action="store_true", help="skip the PNG summary figures")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("render", help="draw a subdivision or solution JSON as SVG")
    p.add_argument("--input", type=Path, help="JSON written by 'oovd' or 'solve'")
    p.add_argument("--points", type=Path, help="terminal file, drawn over a subdivision")
    p.add_argument("--svg", type=Path)
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if getattr(args, "seeds", 1) < 1:
        print("oovd: error: --seeds must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"oovd: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TopologyError, OSError) as exc:
        print(f"oovd: failed: {exc}", file=sys.stderr)
        return EXIT_PARTIAL


if __name__ == "__main__":
    sys.exit(main())
