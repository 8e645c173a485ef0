"""Benchmark harness: one CSV row per random instance plus per-size means."""
from __future__ import annotations

import csv
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from ..diagrams import build_refined_oovd
from ..steiner import solve_1steiner, tree_stats
from .instances import InstanceSpec, gen_points

__all__ = ["COLUMNS", "BenchRow", "BenchReport", "bench_instance", "run_bench", "read_bench_csv"]

log = logging.getLogger(__name__)

COLUMNS = (
    "n",
    "seed",
    "faces_premerge",
    "faces",
    "buckets_naive35",
    "buckets_pruned",
    "buckets_bruteforce",
    "mst_length",
    "steiner_length",
    "improvement_pct",
    "add_delete_ratio",
    "same_triangle",
    "steiner_degree",
    "wall_ms",
)

SUMMARY_COLUMNS = (
    "n",
    "instances",
    "failed",
    "faces_premerge",
    "faces",
    "faces_per_n",
    "buckets_naive35",
    "buckets_pruned",
    "buckets_bruteforce",
    "naive_over_pruned",
    "improvement_pct",
    "add_delete_ratio",
    "same_triangle",
    "degree4_count",
    "wall_ms",
)


@dataclass
class BenchRow:
    n: int
    seed: int
    faces_premerge: int
    faces: int
    buckets_naive35: int
    buckets_pruned: int
    buckets_bruteforce: int
    mst_length: float
    steiner_length: float
    improvement_pct: float
    add_delete_ratio: float
    same_triangle: bool
    steiner_degree: int
    wall_ms: float
    max_buckets_per_face: int = field(default=0, compare=False)


@dataclass
class BenchReport:
    rows: list
    failures: list = field(default_factory=list)  # (n, seed, message)

    def summary(self) -> dict:
        out = {}
        for n in sorted({r.n for r in self.rows} | {f[0] for f in self.failures}):
            rows = [r for r in self.rows if r.n == n]
            failed = sum(1 for f in self.failures if f[0] == n)
            if not rows:
                out[n] = {"instances": 0, "failed": failed}
                continue
            mean = lambda key: sum(getattr(r, key) for r in rows) / len(rows)  # noqa: E731
            improving = [r for r in rows if r.steiner_degree > 0]
            out[n] = {
                "instances": len(rows),
                "failed": failed,
                "faces_premerge": mean("faces_premerge"),
                "faces": mean("faces"),
                "faces_per_n": mean("faces") / n,
                "buckets_naive35": mean("buckets_naive35"),
                "buckets_pruned": mean("buckets_pruned"),
                "buckets_bruteforce": mean("buckets_bruteforce"),
                "naive_over_pruned": mean("buckets_naive35") / mean("buckets_pruned"),
                "improvement_pct": mean("improvement_pct"),
                "add_delete_ratio": mean("add_delete_ratio"),
                # proportion among instances where a Steiner point helps
                "same_triangle": (sum(r.same_triangle for r in improving) / len(improving)) if improving else float("nan"),
                "degree4_count": sum(1 for r in rows if r.steiner_degree == 4),
                "wall_ms": mean("wall_ms"),
            }
        return out


def bench_instance(n: int, seed: int, grid: int = 10000) -> BenchRow:
    pts = gen_points(InstanceSpec(n, seed, grid))
    t0 = time.perf_counter()
    sub = build_refined_oovd(pts)
    sol = solve_1steiner(pts, subdivision=sub)
    wall = (time.perf_counter() - t0) * 1000.0
    stats = tree_stats(sol, sol.mst)
    return BenchRow(
        n=n,
        seed=seed,
        faces_premerge=sub.faces_premerge,
        faces=len(sub.faces),
        buckets_naive35=35 * len(sub.faces),
        buckets_pruned=sol.info["buckets_pruned"],
        buckets_bruteforce=math.comb(n, 4) + math.comb(n, 3),
        mst_length=sol.mst_length,
        steiner_length=sol.length,
        improvement_pct=stats.improvement_pct,
        add_delete_ratio=stats.add_delete_ratio,
        same_triangle=stats.same_triangle,
        steiner_degree=stats.steiner_degree,
        wall_ms=wall,
        max_buckets_per_face=sol.info["max_buckets_per_face"],
    )


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_bench_csv(report: BenchReport, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(COLUMNS)
        for r in sorted(report.rows, key=lambda r: (r.n, r.seed)):
            d = asdict(r)
            w.writerow([_fmt(d[c]) for c in COLUMNS])
        for n, seed, msg in sorted(report.failures):
            fh.write(f"# failed n={n} seed={seed}: {msg}\n")
        fh.write("\n# summary: per-size means\n")
        w.writerow(SUMMARY_COLUMNS)
        for n, s in report.summary().items():
            w.writerow([_fmt(n)] + [_fmt(s.get(c, "")) for c in SUMMARY_COLUMNS[1:]])


def read_bench_csv(path) -> tuple[list, list]:
    """Parse a bench CSV into (instance rows, summary rows) as dicts of strings."""
    rows, summary = [], []
    target = rows
    header = None
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                if line.startswith("# summary"):
                    target, header = summary, None
                continue
            cells = next(csv.reader([line]))
            if header is None:
                header = cells
                continue
            target.append(dict(zip(header, cells)))
    return rows, summary


def run_bench(sizes, seeds_per_size: int, out, grid: int = 10000, figures: bool = True, progress=None) -> BenchReport:
    """Run the full pipeline on seeds ``1..seeds_per_size`` for every size."""
    report = BenchReport([])
    for n in sizes:
        for seed in range(1, seeds_per_size + 1):
            try:
                row = bench_instance(n, seed, grid)
            except Exception as exc:  # recorded and skipped
                log.exception("instance n=%d seed=%d failed", n, seed)
                report.failures.append((n, seed, f"{type(exc).__name__}: {exc}"))
                continue
            report.rows.append(row)
            if progress:
                progress(row)
    out = Path(out)
    write_bench_csv(report, out)
    if figures:
        from .render import plot_bench

        plot_bench(report.summary(), str(out.with_suffix("")))
    return report
