import heapq
import itertools
import math
import random
from fractions import Fraction

import pytest

from oovd.exactnum import SQRT3, QS3, qs3
from oovd.geom import Point2, orientation, pt, squared_distance
from oovd.steiner import (
    Bucket,
    Degenerate,
    Edge,
    Tree,
    brute_force_1steiner,
    build_mst,
    buckets_of,
    extract_buckets,
    fermat_point,
    fermat_point_3,
    fermat_point_4,
    longest_edge_table,
    make_edge,
    solve_1steiner,
    tree_stats,
    update_mst,
)

from conftest import random_points, rot60

EQUILATERAL = [pt(0, 0), pt(10, 0), Point2(qs3(5), qs3(0, 5))]


def prim_reference(nodes: dict, allowed=None) -> list:
    """Textbook O(V^2) Prim on exact squared lengths; returns sorted squared lengths.

    ``nodes`` maps id -> Point2; ``allowed`` restricts the usable pairs.
    """
    ids = sorted(nodes)
    ok = (lambda u, v: True) if allowed is None else (lambda u, v: (min(u, v), max(u, v)) in allowed)
    start = ids[0]
    heap = [(squared_distance(nodes[start], nodes[v]), start, v) for v in ids[1:] if ok(start, v)]
    heapq.heapify(heap)
    seen = {start}
    out = []
    while heap and len(seen) < len(ids):
        d, u, v = heapq.heappop(heap)
        if v in seen:
            continue
        seen.add(v)
        out.append((d, min(u, v), max(u, v)))
        for w in ids:
            if w not in seen and ok(v, w):
                heapq.heappush(heap, (squared_distance(nodes[v], nodes[w]), v, w))
    assert len(seen) == len(ids), "graph is disconnected"
    return out


def tree_path(tree: Tree, u: int, v: int) -> list:
    adj = {}
    for e in tree.edges:
        adj.setdefault(e.u, []).append((e.v, e))
        adj.setdefault(e.v, []).append((e.u, e))
    prev = {u: None}
    order = [u]
    for x in order:
        for y, e in adj[x]:
            if y not in prev:
                prev[y] = (x, e)
                order.append(y)
    path = []
    while v != u:
        x, e = prev[v]
        path.append(e)
        v = x
    return path


def weiszfeld(pts, iters=20000) -> tuple:
    x = sum(p[0] for p in pts) / len(pts)
    y = sum(p[1] for p in pts) / len(pts)
    for _ in range(iters):
        w = [1.0 / math.hypot(x - px, y - py) for px, py in pts]
        nx = sum(wi * p[0] for wi, p in zip(w, pts)) / sum(w)
        ny = sum(wi * p[1] for wi, p in zip(w, pts)) / sum(w)
        if math.hypot(nx - x, ny - y) < 1e-15:
            break
        x, y = nx, ny
    return x, y


class TestMST:
    def test_right_triangle(self):
        t = build_mst([pt(0, 0), pt(3, 0), pt(0, 4)])
        assert t.pairs() == {(1, 2), (1, 3)}
        assert t.length == 7

    def test_square_tie_break(self):
        t = build_mst([pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)])
        assert t.length == 3
        # equal lengths: lexicographic pairs decide
        assert t.pairs() == {(1, 2), (1, 4), (2, 3)}
        assert t.pairs() == build_mst([pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]).pairs()

    def test_duplicates(self):
        with pytest.raises(ValueError):
            build_mst([pt(0, 0), pt(0, 0), pt(1, 1)])

    def test_matches_reference(self, rng):
        for _ in range(20):
            pts = random_points(rng, 50)
            t = build_mst(pts)
            ref = prim_reference({k + 1: p for k, p in enumerate(pts)})
            assert sorted(e.exact_sq for e in t.edges) == sorted(d for d, _, _ in ref)
            assert t.is_spanning_tree(range(1, 51))


class TestLongestEdge:
    def test_path(self):
        t = Tree(3, [Edge(1, 2, 1.0, qs3(1)), Edge(2, 3, 5.0, qs3(25))])
        H = longest_edge_table(t)
        assert H.get(1, 3).pair == (2, 3) and H.get(1, 3).weight == 5.0
        assert H.get(1, 1) is None

    def test_star(self):
        t = Tree(4, [Edge(1, 2, 2.0, qs3(4)), Edge(1, 3, 3.0, qs3(9)), Edge(1, 4, 4.0, qs3(16))])
        H = longest_edge_table(t)
        assert H.get(2, 4).weight == 4.0
        assert H.get(2, 3).weight == 3.0

    def test_path_enumeration(self, rng):
        for n in (2, 7, 18, 30):
            t = build_mst(random_points(rng, n))
            H = longest_edge_table(t)
            for u in range(1, n + 1):
                for v in range(1, n + 1):
                    if u == v:
                        assert H.get(u, v) is None
                        continue
                    path = tree_path(t, u, v)
                    assert H.get(u, v).exact_sq == max(e.exact_sq for e in path)
                    assert H.get(u, v) == H.get(v, u)


class TestBuckets:
    def test_all_slots(self):
        got = [b.members for b in buckets_of((1, 2, 3, 4, 5, 6, 1))]
        assert sorted(got) == sorted([(1, 3, 5), (1, 2, 4, 5), (1, 3, 4, 6)])

    def test_zero_slots(self):
        assert [b.members for b in buckets_of((1, 0, 3, 0, 5, 0, 3))] == [(1, 3, 5)]

    def test_nearest_two(self):
        got = [b.members for b in buckets_of((1, 2, 3, 4, 5, 6, 2))]
        assert sorted(got) == sorted([(2, 4, 6), (1, 2, 4, 5), (2, 3, 5, 6)])

    def test_kinds(self):
        kinds = {b.members: b.source_kind for b in buckets_of((1, 2, 3, 4, 5, 6, 1))}
        assert kinds == {(1, 3, 5): "triple-odd", (1, 2, 4, 5): "quad-14", (1, 3, 4, 6): "quad-25"}

    def test_dedup_keeps_first(self):
        out = extract_buckets([(1, 2, 3, 4, 5, 6, 1), (6, 1, 5, 4, 3, 2, 1)])
        members = [b.members for b in out]
        assert len(members) == len(set(members))
        assert out[0] == Bucket((1, 3, 5), "triple-odd")

    def test_at_most_three(self, rng):
        for _ in range(2000):
            # nonzero entries are distinct: a terminal lies in one cone only
            t = rng.sample(range(1, 9), 6)
            t = [v if rng.random() < 0.7 else 0 for v in t]
            if not any(t):
                continue
            t.append(rng.choice([v for v in t if v]))
            bs = buckets_of(tuple(t))
            assert len(bs) <= 3
            for b in bs:
                assert len(set(b.members)) == len(b.members)
                assert t[6] in b.members and 0 not in b.members


class TestFermat:
    def test_equilateral_centroid(self):
        s = fermat_point_3(pt(0, 0), pt(4, 0), Point2(qs3(2), qs3(0, 2)))
        assert s == Point2(qs3(2), qs3(0, Fraction(2, 3)))

    def test_collinear(self):
        assert fermat_point_3(pt(0, 0), pt(1, 0), pt(-2, 0)) == Degenerate(pt(0, 0), 0)

    def test_obtuse(self):
        r = fermat_point_3(pt(0, 0), pt(10, 1), pt(-10, 1))
        assert isinstance(r, Degenerate) and r.index == 0

    def test_exactly_120(self):
        # angle at the origin is exactly 120 degrees
        r = fermat_point_3(pt(0, 0), pt(2, 0), Point2(qs3(-1), SQRT3))
        assert r == Degenerate(pt(0, 0), 0)

    def test_right_triangle_numeric(self):
        s = fermat_point_3(pt(0, 0), pt(1, 0), pt(0, 1))
        w = weiszfeld([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])
        assert s.to_float() == pytest.approx(w, abs=1e-9)

    def test_angles_and_local_minimum(self, rng):
        checked = 0
        while checked < 60:
            a, b, c = random_points(rng, 3, 1000)
            if orientation(a, b, c) == 0:
                continue
            s = fermat_point_3(a, b, c)
            if isinstance(s, Degenerate):
                continue
            checked += 1
            for p, q in itertools.combinations((a, b, c), 2):
                u, v = p - s, q - s
                dot = u.x * v.x + u.y * v.y
                # 120 degrees exactly: dot < 0 and 4 dot^2 = |u|^2 |v|^2
                assert dot.sign() < 0
                assert 4 * dot * dot == (u.x * u.x + u.y * u.y) * (v.x * v.x + v.y * v.y)
            f = [p.to_float() for p in (a, b, c)]
            sx, sy = s.to_float()
            cost = lambda x, y: sum(math.hypot(x - px, y - py) for px, py in f)  # noqa: E731
            base = cost(sx, sy)
            for _ in range(100):
                dx, dy = rng.uniform(-1, 1), rng.uniform(-1, 1)
                assert base <= cost(sx + dx, sy + dy) + 1e-9
            assert (sx, sy) == pytest.approx(weiszfeld(f), abs=1e-6)

    def test_square(self):
        assert fermat_point_4(pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)) == pt(Fraction(1, 2), Fraction(1, 2))

    def test_kite(self):
        assert fermat_point_4(pt(0, 0), pt(2, 0), pt(1, 1), pt(1, -1)) == pt(1, 0)

    def test_not_convex(self):
        assert fermat_point_4(pt(0, 0), pt(3, 0), pt(1, 1), pt(0, 3)) is None

    def test_three_collinear(self):
        assert fermat_point_4(pt(0, 0), pt(1, 0), pt(2, 0), pt(1, 5)) is None

    def test_on_both_diagonals(self, rng):
        for _ in range(100):
            q = random_points(rng, 4, 100)
            s = fermat_point_4(*q)
            if s is None:
                continue
            on = [(i, j) for i, j in itertools.combinations(range(4), 2) if orientation(q[i], q[j], s) == 0]
            assert len(on) == 2 and not set(on[0]) & set(on[1])

    def test_dispatch(self):
        pts = [pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1), pt(5, 5)]
        assert fermat_point(pts, (1, 2, 3, 4)) == pt(Fraction(1, 2), Fraction(1, 2))
        assert fermat_point(pts, (1, 3, 5)) is None


class TestUpdateMST:
    def test_equilateral(self):
        mst = build_mst(EQUILATERAL)
        H = longest_edge_table(mst)
        s = fermat_point_3(*EQUILATERAL)
        t = update_mst(mst, H, s, Bucket((1, 2, 3), "triple-odd"), EQUILATERAL)
        assert t.degree(4) == 3 and len(t.edges) == 3
        assert t.length == pytest.approx(10 * math.sqrt(3), rel=1e-12)

    def test_collinear_non_improving(self):
        pts = [pt(0, 0), pt(10, 0), pt(20, 0)]
        mst = build_mst(pts)
        t = update_mst(mst, longest_edge_table(mst), pt(10, 5), (1, 2, 3), pts)
        assert {(1, 2), (2, 3)} <= t.pairs()
        assert t.degree(4) == 1
        assert t.length > mst.length

    def test_terminal_rejected(self):
        pts = [pt(0, 0), pt(10, 0), pt(20, 0)]
        mst = build_mst(pts)
        with pytest.raises(ValueError):
            update_mst(mst, longest_edge_table(mst), pt(10, 0), (1, 2, 3), pts)

    def test_matches_mst_of_gb(self, rng):
        done = 0
        while done < 150:
            n = rng.randint(4, 20)
            pts = random_points(rng, n, rng.choice([30, 10000]))
            mst = build_mst(pts)
            H = longest_edge_table(mst)
            for _ in range(5):
                members = tuple(sorted(rng.sample(range(1, n + 1), rng.choice([3, 4]))))
                s = fermat_point(pts, members)
                if s is None:
                    s = pt(Fraction(rng.randint(0, 30000), 3), Fraction(rng.randint(0, 30000), 3))
                if s in pts:
                    continue
                t = update_mst(mst, H, s, members, pts)
                nodes = {k + 1: p for k, p in enumerate(pts)}
                nodes[n + 1] = s
                allowed = mst.pairs() | {(k, n + 1) for k in members}
                ref = prim_reference(nodes, allowed)
                assert sorted(e.exact_sq for e in t.edges) == sorted(d for d, _, _ in ref)
                assert t.is_spanning_tree(range(1, n + 2))
                done += 1


class TestSolve:
    def test_equilateral(self):
        sol = solve_1steiner(EQUILATERAL)
        assert sol.steiner == Point2(qs3(5), qs3(0, Fraction(5, 3)))
        assert sol.length == pytest.approx(10 * math.sqrt(3), rel=1e-12)
        assert sol.mst_length == 20
        assert brute_force_1steiner(EQUILATERAL).length == pytest.approx(sol.length, rel=1e-12)

    def test_collinear(self):
        pts = [pt(k * 7, k * 3) for k in range(6)]
        sol = solve_1steiner(pts)
        assert sol.steiner is None and sol.bucket is None
        assert sol.length == sol.mst_length
        assert sol.tree.pairs() == sol.mst.pairs()

    def test_lattice_cross(self):
        pts = [pt(x, y) for x in range(4) for y in range(4)]
        sol = solve_1steiner(pts)
        assert len(sol.bucket.members) == 4
        assert sol.tree.degree(17) == 4
        assert sol.steiner.x.is_rational() and sol.steiner.y.is_rational()
        ref = brute_force_1steiner(pts)
        assert sol.length == pytest.approx(ref.length, rel=1e-9)
        assert len(ref.bucket.members) == 4

    def test_square(self):
        pts = [pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]
        sol = solve_1steiner(pts)
        ref = brute_force_1steiner(pts)
        assert sol.length == pytest.approx(ref.length, rel=1e-12)
        assert sol.length == pytest.approx(2 * math.sqrt(2), rel=1e-12)
        # every candidate subset of the square, listed by hand
        assert ref.info["buckets_bruteforce"] == 4 + 1

    def test_too_few(self):
        with pytest.raises(ValueError):
            solve_1steiner([pt(0, 0), pt(1, 1)])
        with pytest.raises(ValueError):
            brute_force_1steiner([pt(0, 0), pt(1, 1)])

    def test_oracle_equivalence(self, rng):
        for _ in range(25):
            pts = random_points(rng, rng.randint(5, 10), rng.choice([10000, 12]))
            sol = solve_1steiner(pts)
            ref = brute_force_1steiner(pts)
            assert sol.length == pytest.approx(ref.length, rel=1e-9)
            assert sol.length <= sol.mst_length
            assert (sol.steiner is None) == (sol.bucket is None) == (not sol.length < sol.mst_length)

    def test_translation_and_rotation(self, rng):
        for _ in range(4):
            pts = random_points(rng, 9)
            base = solve_1steiner(pts).length
            moved = [pt(p.x + 123, p.y - 77) for p in pts]
            assert solve_1steiner(moved).length == pytest.approx(base, rel=1e-9)
            turned = pts
            for _ in range(2):
                turned = [rot60(p) for p in turned]
                assert solve_1steiner(turned).length == pytest.approx(base, rel=1e-9)

    def test_pruning_info(self, rng):
        sol = solve_1steiner(random_points(rng, 30))
        info = sol.info
        assert info["max_buckets_per_face"] <= 3
        assert info["buckets_pruned"] <= info["buckets_prededup"] <= 3 * info["faces"]
        assert info["buckets_naive35"] == 35 * info["faces"]


class TestStats:
    def test_equilateral(self):
        sol = solve_1steiner(EQUILATERAL)
        st = tree_stats(sol, sol.mst)
        assert st.improvement_pct == pytest.approx(100 * (1 - math.sqrt(3) / 2), abs=1e-9)
        assert st.add_delete_ratio == pytest.approx(10 * math.sqrt(3) / 20, rel=1e-12)
        assert st.same_triangle is True
        assert st.steiner_degree == 3

    def test_mst_only(self):
        pts = [pt(0, 0), pt(10, 0), pt(20, 0)]
        sol = solve_1steiner(pts)
        st = tree_stats(sol, sol.mst)
        assert (st.improvement_pct, st.add_delete_ratio, st.same_triangle, st.steiner_degree) == (0.0, 1.0, False, 0)

    def test_edge_lengths(self):
        e = make_edge(3, 1, pt(0, 0), pt(3, 4))
        assert (e.u, e.v, e.weight, e.exact_sq) == (1, 3, 5.0, QS3(25))
