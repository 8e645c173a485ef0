"""Optimal Euclidean 1-Steiner trees driven by refined-OOVD face labels.

Terminals are numbered 1..n; a Steiner point, when present, is node n+1.
Edge order is the exact squared length, then the (min, max) index pair, so
every minimum spanning tree below is unique and reproducible.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence, Union

from .exactnum import QS3
from .geom import Point2, line_intersection, line_through, orientation, squared_distance

__all__ = [
    "Edge",
    "Tree",
    "LongestEdgeTable",
    "Bucket",
    "Degenerate",
    "SteinerSolution",
    "StatsRecord",
    "build_mst",
    "longest_edge_table",
    "extract_buckets",
    "fermat_point_3",
    "fermat_point_4",
    "update_mst",
    "solve_1steiner",
    "brute_force_1steiner",
    "tree_stats",
]


class Edge(NamedTuple):
    u: int
    v: int
    weight: float
    exact_sq: QS3

    @property
    def key(self):
        return (self.exact_sq, min(self.u, self.v), max(self.u, self.v))

    @property
    def pair(self) -> tuple[int, int]:
        return (self.u, self.v) if self.u < self.v else (self.v, self.u)


def make_edge(u: int, v: int, a: Point2, b: Point2) -> Edge:
    if u > v:
        u, v, a, b = v, u, b, a
    sq = squared_distance(a, b)
    return Edge(u, v, math.sqrt(float(sq)), sq)


@dataclass
class Tree:
    n: int  # node count
    edges: list

    @property
    def length(self) -> float:
        return math.fsum(e.weight for e in self.edges)

    def degree(self, node: int) -> int:
        return sum(1 for e in self.edges if node in (e.u, e.v))

    def pairs(self) -> set:
        return {e.pair for e in self.edges}

    def is_spanning_tree(self, nodes) -> bool:
        nodes = set(nodes)
        if len(self.edges) != len(nodes) - 1:
            return False
        parent = {x: x for x in nodes}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            if e.u not in nodes or e.v not in nodes:
                return False
            ru, rv = find(e.u), find(e.v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True


class _UF:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def _kruskal(nodes, edges) -> list:
    uf = _UF(nodes)
    out = []
    for e in sorted(edges, key=lambda e: e.key):
        if uf.union(e.u, e.v):
            out.append(e)
    return out


def build_mst(points: Sequence[Point2]) -> Tree:
    """Euclidean MST of the terminals (Kruskal on exact squared lengths)."""
    n = len(points)
    if n < 2:
        raise ValueError("need at least two terminals")
    if len(set(points)) != n:
        raise ValueError("duplicate terminals")
    edges = [make_edge(i + 1, j + 1, points[i], points[j]) for i in range(n) for j in range(i + 1, n)]
    return Tree(n, _kruskal(range(1, n + 1), edges))


class LongestEdgeTable:
    """``H[u][v]``: heaviest edge on the tree path from ``u`` to ``v``."""

    def __init__(self, tree: Tree):
        adj = {}
        for e in tree.edges:
            adj.setdefault(e.u, []).append((e.v, e))
            adj.setdefault(e.v, []).append((e.u, e))
        self.nodes = sorted(adj)
        self.table = {}
        for root in self.nodes:
            row = {root: None}
            stack = [root]
            while stack:
                x = stack.pop()
                best = row[x]
                for y, e in adj[x]:
                    if y in row:
                        continue
                    row[y] = e if best is None or e.key > best.key else best
                    stack.append(y)
            self.table[root] = row
        # rooted view for O(1) subtree tests in update_mst
        self.root = self.nodes[0] if self.nodes else None
        self.tin, self.tout, self.depth, self.parent = {}, {}, {}, {}
        if self.root is not None:
            clock = 0
            self.depth[self.root] = 0
            self.parent[self.root] = None
            stack = [(self.root, iter(adj[self.root]))]
            self.tin[self.root] = clock
            while stack:
                x, it = stack[-1]
                advanced = False
                for y, _ in it:
                    if y == self.parent[x]:
                        continue
                    self.parent[y] = x
                    self.depth[y] = self.depth[x] + 1
                    clock += 1
                    self.tin[y] = clock
                    stack.append((y, iter(adj[y])))
                    advanced = True
                    break
                if not advanced:
                    self.tout[x] = clock
                    stack.pop()

    def __getitem__(self, u):
        return self.table[u]

    def get(self, u: int, v: int) -> Optional[Edge]:
        return self.table[u][v]

    def child_of(self, e: Edge) -> int:
        return e.u if self.parent.get(e.u) == e.v else e.v

    def in_subtree(self, node: int, top: int) -> bool:
        return self.tin[top] <= self.tin[node] <= self.tout[top]


def longest_edge_table(tree: Tree) -> LongestEdgeTable:
    return LongestEdgeTable(tree)


# -- buckets -------------------------------------------------------------------


class Bucket(NamedTuple):
    members: tuple
    source_kind: str


_FEASIBLE = (
    ("triple-odd", (0, 2, 4)),
    ("triple-even", (1, 3, 5)),
    ("quad-14", (0, 1, 3, 4)),
    ("quad-25", (0, 2, 3, 5)),
    ("quad-36", (1, 2, 4, 5)),
)


def buckets_of(t) -> list:
    """Feasible buckets from one seven-tuple, before deduplication."""
    out = []
    nearest = t[6]
    for kind, slots in _FEASIBLE:
        members = [t[k] for k in slots]
        if 0 in members or nearest not in members or len(set(members)) < len(members):
            continue
        out.append(Bucket(tuple(sorted(members)), kind))
    return out


def extract_buckets(tuples) -> list:
    """Pruned, deduplicated buckets over all face labels (first occurrence wins)."""
    seen = {}
    for t in tuples:
        for b in buckets_of(t):
            if b.members not in seen:
                seen[b.members] = b
    return list(seen.values())


# -- Fermat points ---------------------------------------------------------------


class Degenerate(NamedTuple):
    """The optimal junction of three points is one of them."""

    vertex: Point2
    index: int  # 0, 1 or 2: position in the argument list


_HALF = QS3(1) / 2


def _rot60(center: Point2, p: Point2, sign: int) -> Point2:
    dx = p.x - center.x
    dy = p.y - center.y
    s3dx = dx.mul_sqrt3()
    s3dy = dy.mul_sqrt3()
    if sign > 0:
        return Point2(center.x + (dx - s3dy) * _HALF, center.y + (s3dx + dy) * _HALF)
    return Point2(center.x + (dx + s3dy) * _HALF, center.y + (dy - s3dx) * _HALF)


def _wide_angle(a: Point2, b: Point2, c: Point2) -> bool:
    """True if the angle at ``a`` in triangle abc is at least 120 degrees."""
    ux, uy = b.x - a.x, b.y - a.y
    wx, wy = c.x - a.x, c.y - a.y
    dot = ux * wx + uy * wy
    if dot.sign() >= 0:
        return False
    # cos <= -1/2  <=>  4 dot^2 >= |u|^2 |w|^2 when dot < 0
    return (4 * dot * dot - (ux * ux + uy * uy) * (wx * wx + wy * wy)).sign() >= 0


def fermat_point_3(a: Point2, b: Point2, c: Point2) -> Union[Point2, Degenerate]:
    """Torricelli point of a triangle, or the vertex with an angle of 120 degrees or more."""
    if a == b or b == c or a == c:
        raise ValueError("points must be distinct")
    pts = (a, b, c)
    for k in range(3):
        if _wide_angle(pts[k], pts[(k + 1) % 3], pts[(k + 2) % 3]):
            return Degenerate(pts[k], k)
    side = orientation(a, b, c)
    # apex of the equilateral triangle erected outward on bc (away from a), likewise on ca
    apex_bc = _rot60(b, c, -side)
    apex_ca = _rot60(c, a, -side)
    l1 = line_through(a, apex_bc - a)
    l2 = line_through(b, apex_ca - b)
    s = line_intersection(l1, l2)
    if s is None:  # pragma: no cover - excluded by the angle test
        raise ArithmeticError("Simpson lines are parallel")
    return s


def _proper_cross(p1, p2, q1, q2) -> bool:
    o1 = orientation(p1, p2, q1)
    o2 = orientation(p1, p2, q2)
    o3 = orientation(q1, q2, p1)
    o4 = orientation(q1, q2, p2)
    return o1 * o2 < 0 and o3 * o4 < 0


def fermat_point_4(a: Point2, b: Point2, c: Point2, d: Point2) -> Optional[Point2]:
    """Diagonal intersection if the four points are in strictly convex position, else None."""
    pts = (a, b, c, d)
    if len(set(pts)) != 4:
        return None
    for (i, j), (k, m) in (((0, 2), (1, 3)), ((0, 1), (2, 3)), ((0, 3), (1, 2))):
        p1, p2, q1, q2 = pts[i], pts[j], pts[k], pts[m]
        if _proper_cross(p1, p2, q1, q2):
            return line_intersection(line_through(p1, p2 - p1), line_through(q1, q2 - q1))
    return None


def fermat_point(points: Sequence[Point2], members) -> Optional[Point2]:
    """Fermat point for a bucket's terminals, or None when it is degenerate."""
    pts = [points[k - 1] for k in members]
    if len(pts) == 3:
        s = fermat_point_3(*pts)
        return None if isinstance(s, Degenerate) else s
    return fermat_point_4(*pts)


# -- MST update ----------------------------------------------------------------


def update_mst(tp: Tree, H: LongestEdgeTable, s: Point2, bucket, points: Sequence[Point2]) -> Tree:
    """MST of the tree ``tp`` plus Steiner node ``s`` joined to each bucket member.

    ``bucket`` is a :class:`Bucket` or a plain tuple of member indices.  Only
    the heaviest path edges between bucket members can leave the tree, so the
    update is a Kruskal run on at most ten edges.
    """
    members = bucket.members if isinstance(bucket, Bucket) else tuple(bucket)
    n = len(points)
    if any(s == p for p in points):
        raise ValueError("Steiner point coincides with a terminal")
    sid = n + 1
    s_edges = [make_edge(k, sid, points[k - 1], s) for k in members]
    doomed = {}
    for x, y in itertools.combinations(members, 2):
        e = H.get(x, y)
        if e is not None:
            doomed[e.pair] = e
    cut = sorted(doomed.values(), key=lambda e: -H.depth[H.child_of(e)])
    tops = [H.child_of(e) for e in cut]

    def comp(node):
        # deepest removed edge whose lower side holds node; -1 is the root side
        for k, top in enumerate(tops):
            if H.in_subtree(node, top):
                return k
        return -1

    small = []
    for k, e in enumerate(cut):
        small.append((e.key, e, comp(H.parent[tops[k]]), k))
    for e in s_edges:
        small.append((e.key, e, comp(e.u), "s"))
    uf = _UF(list(range(-1, len(cut))) + ["s"])
    kept_cut, kept_s = set(), []
    for _, e, x, y in sorted(small, key=lambda r: r[0]):
        if uf.union(x, y):
            if y == "s":
                kept_s.append(e)
            else:
                kept_cut.add(e.pair)
    removed = set(doomed) - kept_cut
    edges = [e for e in tp.edges if e.pair not in removed] + kept_s
    return Tree(n + 1, edges)


# -- solutions ---------------------------------------------------------------------


@dataclass
class StatsRecord:
    improvement_pct: float
    add_delete_ratio: float
    same_triangle: bool
    steiner_degree: int


@dataclass
class SteinerSolution:
    tree: Tree
    steiner: Optional[Point2]
    bucket: Optional[Bucket]
    length: float
    mst_length: float
    mst: Optional[Tree] = field(default=None, repr=False)
    info: dict = field(default_factory=dict, repr=False)
    terminals: tuple = field(default=(), repr=False)

    @property
    def steiner_float(self) -> Optional[tuple[float, float]]:
        return None if self.steiner is None else self.steiner.to_float()


REL_TOL = 1e-12


def _better(length, members, best_length, best_members) -> bool:
    if best_length is None:
        return True
    if length < best_length * (1 - REL_TOL):
        return True
    if length <= best_length * (1 + REL_TOL):
        return tuple(members) < tuple(best_members)
    return False


def _finish(points, mst, best_tree, best_s, best_bucket, best_len, info) -> SteinerSolution:
    mst_len = mst.length
    if best_tree is None or not best_len < mst_len * (1 - REL_TOL):
        return SteinerSolution(mst, None, None, mst_len, mst_len, mst, info, tuple(points))
    return SteinerSolution(best_tree, best_s, best_bucket, best_len, mst_len, mst, info, tuple(points))


def solve_1steiner(points: Sequence[Point2], subdivision=None, bbox=None) -> SteinerSolution:
    """Shortest tree on the terminals using at most one extra junction."""
    from .diagrams import build_refined_oovd

    n = len(points)
    if n < 3:
        raise ValueError("need at least three terminals")
    sub = subdivision if subdivision is not None else build_refined_oovd(points, bbox)
    tuples = [f.data for f in sub.faces]
    per_face = [len(buckets_of(t)) for t in tuples]
    buckets = extract_buckets(tuples)
    mst = build_mst(points)
    H = longest_edge_table(mst)
    best = (None, None, None, None)  # tree, s, bucket, length
    evaluated = 0
    for b in sorted(buckets, key=lambda b: b.members):
        s = fermat_point(points, b.members)
        if s is None or s in points:
            continue
        evaluated += 1
        tree = update_mst(mst, H, s, b.members, points)
        length = tree.length
        if _better(length, b.members, best[3], best[2].members if best[2] else None):
            best = (tree, s, b, length)
    info = {
        "faces": len(sub.faces),
        "faces_premerge": sub.faces_premerge,
        "buckets_naive35": 35 * len(sub.faces),
        "buckets_prededup": sum(per_face),
        "max_buckets_per_face": max(per_face) if per_face else 0,
        "buckets_pruned": len(buckets),
        "buckets_evaluated": evaluated,
    }
    return _finish(points, mst, best[0], best[1], best[2], best[3], info)


def _prim_length(points: Sequence[Point2], s: Point2) -> float:
    pts = [p.to_float() for p in points] + [s.to_float()]
    m = len(pts)
    dist = [math.inf] * m
    used = [False] * m
    dist[0] = 0.0
    total = 0.0
    for _ in range(m):
        k = min((d, j) for j, d in enumerate(dist) if not used[j])[1]
        used[k] = True
        total += dist[k]
        xk, yk = pts[k]
        for j in range(m):
            if not used[j]:
                d = math.hypot(pts[j][0] - xk, pts[j][1] - yk)
                if d < dist[j]:
                    dist[j] = d
    return total


def brute_force_1steiner(points: Sequence[Point2]) -> SteinerSolution:
    """Reference solver: every 3- and 4-subset, full MST from scratch each time."""
    n = len(points)
    if n < 3:
        raise ValueError("need at least three terminals")
    mst = build_mst(points)
    best_len, best_members, best_s = None, None, None
    count = 0
    for size in (3, 4):
        for members in itertools.combinations(range(1, n + 1), size):
            count += 1
            s = fermat_point(points, members)
            if s is None or s in points:
                continue
            length = _prim_length(points, s)
            if _better(length, members, best_len, best_members):
                best_len, best_members, best_s = length, members, s
    info = {"buckets_bruteforce": count}
    if best_s is None or not best_len < mst.length * (1 - REL_TOL):
        return _finish(points, mst, None, None, None, None, info)
    nodes = list(points) + [best_s]
    edges = [make_edge(i + 1, j + 1, nodes[i], nodes[j]) for i in range(n + 1) for j in range(i + 1, n + 1)]
    tree = Tree(n + 1, _kruskal(range(1, n + 2), edges))
    kind = "brute-%d" % len(best_members)
    return _finish(points, mst, tree, best_s, Bucket(tuple(best_members), kind), tree.length, info)


def tree_stats(sol: SteinerSolution, tp: Tree) -> StatsRecord:
    """Length improvement and local edge statistics of a solution relative to the MST."""
    if sol.steiner is None:
        return StatsRecord(0.0, 1.0, False, 0)
    sid = tp.n + 1
    added = [e for e in sol.tree.edges if sid in (e.u, e.v)]
    kept = sol.tree.pairs()
    deleted = [e for e in tp.edges if e.pair not in kept]
    add_len = math.fsum(e.weight for e in added)
    del_len = math.fsum(e.weight for e in deleted)
    improvement = 100.0 * (sol.mst_length - sol.length) / sol.mst_length
    ratio = add_len / del_len if del_len > 0 else 1.0
    return StatsRecord(improvement, ratio, _connected(deleted), len(added))


def _connected(edges) -> bool:
    """Deleted edges form one connected piece (two edges: they share a terminal)."""
    if len(edges) < 2:
        return False
    nodes = {x for e in edges for x in e.pair}
    uf = _UF(nodes)
    comps = len(nodes)
    for e in edges:
        if uf.union(e.u, e.v):
            comps -= 1
    return comps == 1
