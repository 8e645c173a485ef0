"""Acceptance suite: twelve criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python3 tests/test_acceptance.py`` (lines printed as they finish).
Random instances come from the package generator (PCG64, seeds 1..k) and the
n = 100 sweep is computed once and shared by every criterion that needs it.
"""
from __future__ import annotations

import functools
import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path


sys.path.insert(0, str(Path(__file__).parent))

from conftest import face_multiset, interior_samples  # noqa: E402
from oovd.cli.bench import bench_instance  # noqa: E402
from oovd.cli.instances import InstanceSpec, gen_points  # noqa: E402
from oovd.diagrams import build_refined_oovd, oracle_seven_tuple  # noqa: E402
from oovd.exactnum import ZERO, QS3, qs3  # noqa: E402
from oovd.geom import Point2, pt, signed_area2  # noqa: E402
from oovd.steiner import (  # noqa: E402
    brute_force_1steiner,
    build_mst,
    fermat_point,
    longest_edge_table,
    solve_1steiner,
    tree_stats,
    update_mst,
)
from test_steiner import prim_reference, tree_path  # noqa: E402

RESULTS: dict = {}


def record(num: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {num:2d}. {title}: {detail}"
    RESULTS[num] = line
    print(line, flush=True)
    assert ok, line


@functools.lru_cache(maxsize=None)
def sweep(n: int, seeds: int) -> tuple:
    if seeds < 50 and n == 100:
        return sweep(100, 50)[:seeds]
    return tuple(bench_instance(n, s) for s in range(1, seeds + 1))


def mean(xs) -> float:
    xs = list(xs)
    return math.fsum(xs) / len(xs)


# -- criteria ----------------------------------------------------------------------


def test_01_oracle_equivalence():
    rng = random.Random(1)
    worst = 0.0
    t0 = time.perf_counter()
    for k in range(100):
        pts = gen_points(InstanceSpec(rng.randint(5, 10), 1000 + k))
        a = solve_1steiner(pts).length
        b = brute_force_1steiner(pts).length
        worst = max(worst, abs(a - b) / b)
    dt = time.perf_counter() - t0
    record(1, "oracle equivalence", worst <= 1e-9 and dt < 120, f"100 instances, max rel diff {worst:.2e}, {dt:.1f} s")


def test_02_equilateral():
    pts = [pt(0, 0), pt(10, 0), Point2(qs3(5), qs3(0, 5))]
    sol = solve_1steiner(pts)
    got = tree_stats(sol, sol.mst).improvement_pct
    want = 100 * (1 - math.sqrt(3) / 2)
    record(2, "equilateral reduction", abs(got - want) <= 1e-6, f"{got:.9f}% vs {want:.9f}%")


def test_03_bucket_pruning():
    rows = sweep(100, 20)
    per_face = max(r.max_buckets_per_face for r in rows)
    ratio = mean(r.buckets_naive35 / r.buckets_pruned for r in rows)
    ok = per_face <= 3 and ratio >= 10
    record(3, "bucket pruning", ok, f"n=100, 20 seeds: max buckets/face {per_face}, mean 35*faces/pruned {ratio:.2f}")


def test_04_linear_face_counts():
    parts, ok = [], True
    for n in (50, 100):
        rows = sweep(n, 20)
        post = mean(r.faces for r in rows) / n
        pre = mean(r.faces_premerge for r in rows) / n
        ok &= 30 <= post <= 70
        parts.append(f"n={n} faces/n {post:.2f} (pre-merge {pre:.2f})")
    record(4, "linear face counts", ok, ", ".join(parts))


def test_05_exact_labels():
    rng = random.Random(5)
    failures = checked = 0
    sizes = (5, 10, 15, 20, 25, 30, 35, 40, 45, 50)
    for k, n in enumerate(sizes):
        pts = gen_points(InstanceSpec(n, 500 + k))
        for f in build_refined_oovd(pts).faces:
            for x in interior_samples(f.polygon, 5, rng):
                checked += 1
                failures += oracle_seven_tuple(pts, x) != f.data
    record(5, "exact labels", failures == 0, f"{checked} interior samples on 10 instances (n<=50), {failures} mismatches")


def test_06_no_spurious_faces():
    bad_area = bad_sum = bad_perm = 0
    rng = random.Random(6)
    cases = [gen_points(InstanceSpec(n, 600 + n)) for n in (10, 20, 40)]
    cases.append(gen_points(InstanceSpec(25, 7, grid=12)))  # crowded: many collinear triples
    faces = 0
    for pts in cases:
        sub = build_refined_oovd(pts)
        faces += len(sub.faces)
        total = ZERO
        for f in sub.faces:
            a = signed_area2(f.polygon)
            bad_area += a.sign() <= 0
            total = total + a
        bad_sum += total != 2 * QS3(sub.bbox.area)
        perm = list(range(len(pts)))
        rng.shuffle(perm)
        other = build_refined_oovd([pts[k] for k in perm], sub.bbox)
        relabel = {j + 1: perm[j] + 1 for j in range(len(pts))}
        bad_perm += face_multiset(sub) != face_multiset(other, relabel)
    ok = bad_area == bad_sum == bad_perm == 0
    record(
        6,
        "no spurious faces",
        ok,
        f"{faces} faces on {len(cases)} instances: {bad_area} non-positive, {bad_sum} area-sum, {bad_perm} permutation mismatches",
    )


def test_07_lattice_cross():
    pts = [pt(x, y) for x in range(4) for y in range(4)]
    sol = solve_1steiner(pts)
    ref = brute_force_1steiner(pts)
    deg = sol.tree.degree(len(pts) + 1) if sol.steiner is not None else 0
    s = sol.steiner
    # the Steiner point must be the crossing of its bucket's diagonals
    on_diag = s is not None and len(sol.bucket.members) == 4 and fermat_point(pts, sol.bucket.members) == s
    agree = abs(sol.length - ref.length) <= 1e-9 * ref.length and len(ref.bucket.members) == 4
    where = "none" if s is None else f"({s.x}, {s.y})"
    record(7, "lattice degree-4", deg == 4 and on_diag and agree, f"Steiner point {where} degree {deg}, length {sol.length:.6f} vs brute force {ref.length:.6f}")


def test_08_same_triangle():
    rows = sweep(100, 50)
    improving = [r for r in rows if r.steiner_degree > 0]
    prop = sum(r.same_triangle for r in improving) / len(improving)
    record(8, "same-triangle statistic", 0.60 <= prop <= 0.95, f"n=100, 50 seeds: {prop:.2f} ({sum(r.same_triangle for r in improving)}/{len(improving)})")


def test_09_degree4_rarity():
    rows = sweep(100, 50)
    count = sum(r.steiner_degree == 4 for r in rows)
    record(9, "degree-4 rarity", count <= 2, f"n=100, 50 seeds: {count} degree-4 solutions")


def test_10_improvement_trend():
    small = mean(r.improvement_pct for r in sweep(20, 20))
    large = mean(r.improvement_pct for r in sweep(100, 20))
    record(10, "improvement trend", large < small, f"mean improvement n=20 {small:.3f}%, n=100 {large:.3f}%")


def test_11_mst_and_h_table():
    rng = random.Random(11)
    mst_bad = h_bad = upd_bad = 0
    for k in range(50):
        pts = gen_points(InstanceSpec(rng.randint(10, 60), 1100 + k))
        t = build_mst(pts)
        ref = prim_reference({j + 1: p for j, p in enumerate(pts)})
        mst_bad += sorted(e.exact_sq for e in t.edges) != sorted(d for d, _, _ in ref)
    pairs = 0
    for n in (5, 12, 20, 30):
        t = build_mst(gen_points(InstanceSpec(n, 1200 + n)))
        H = longest_edge_table(t)
        for u in range(1, n + 1):
            for v in range(u + 1, n + 1):
                pairs += 1
                h_bad += H.get(u, v).exact_sq != max(e.exact_sq for e in tree_path(t, u, v))
    done = seed = 0
    while done < 500:
        seed += 1
        pts = gen_points(InstanceSpec(rng.randint(4, 20), 1300 + seed, grid=rng.choice([40, 10000])))
        n = len(pts)
        mst = build_mst(pts)
        H = longest_edge_table(mst)
        for _ in range(10):
            members = tuple(sorted(rng.sample(range(1, n + 1), rng.choice([3, 4]))))
            s = fermat_point(pts, members)
            if s is None:
                s = pt(Fraction(rng.randint(0, 30000), 3), Fraction(rng.randint(0, 30000), 3))
            if s in pts:
                continue
            tree = update_mst(mst, H, s, members, pts)
            nodes = {j + 1: p for j, p in enumerate(pts)}
            nodes[n + 1] = s
            ref = prim_reference(nodes, mst.pairs() | {(j, n + 1) for j in members})
            upd_bad += sorted(e.exact_sq for e in tree.edges) != sorted(d for d, _, _ in ref)
            done += 1
            if done == 500:
                break
    ok = mst_bad == h_bad == upd_bad == 0
    record(11, "MST / H table / update", ok, f"MST 50 instances {mst_bad} bad, H {pairs} pairs {h_bad} bad, update 500 buckets {upd_bad} bad")


def test_12_runtime():
    t100 = max(r.wall_ms for r in sweep(100, 50)) / 1000
    r200 = bench_instance(200, 1)
    t200 = r200.wall_ms / 1000
    record(12, "runtime budget", t100 <= 300 and t200 <= 1800, f"n=100 slowest of 50 {t100:.1f} s (<= 300), n=200 {t200:.1f} s (<= 1800)")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_")):
        try:
            fn()
        except AssertionError:
            failed += 1
        except Exception as exc:  # report and keep going
            failed += 1
            print(f"[FAIL] {name}: {type(exc).__name__}: {exc}", flush=True)
    sys.exit(1 if failed else 0)
