"""Exact arrangement of segments inside a bounding box.

The pipeline is: merge collinear overlaps per supporting line, find crossings
(float prefilter, exact confirmation), split segments at crossings, drop
dangling edges, sort the edges around each vertex, then walk faces.
All vertex coordinates are exact Q[sqrt3] points; floats only pick which exact
tests to run and order things that are far apart.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Optional, Sequence

import numpy as np

from ..exactnum import QS3, ZERO
from ..geom import Line2, Point2, Segment2, line_intersection, orientation, signed_area2

__all__ = ["PlanarGraph", "TopologyError", "arrange_segments", "walk_faces"]


class TopologyError(RuntimeError):
    """The segment graph does not split the box into simply connected faces."""


def _canonical_line(p: Point2, q: Point2) -> Line2:
    a = p.y - q.y
    b = q.x - p.x
    if a:
        inv = a.inverse()
        b = b * inv
        c = -(p.x + b * p.y)
        return Line2(QS3.raw(1, 0, 1), b, c)
    return Line2(ZERO, QS3.raw(1, 0, 1), -(p.y))


@dataclass
class PlanarGraph:
    """Plane straight-line graph with CCW-sorted adjacency."""

    points: list  # vertex id -> Point2
    fpoints: np.ndarray  # vertex id -> (x, y) floats
    adj: dict  # vertex id -> neighbour ids in counter-clockwise order
    edges: set = field(default_factory=set)

    def pos(self, u: int, v: int) -> int:
        return self.adj[u].index(v)


def _param(line_vertical: bool, p: Point2) -> QS3:
    return p.y if line_vertical else p.x


def _merge_collinear(segments: Sequence[Segment2]):
    groups = defaultdict(list)
    for s in segments:
        if s.p == s.q:
            continue
        line = _canonical_line(s.p, s.q)
        vertical = not line.b
        a, b = s.p, s.q
        if _param(vertical, b) < _param(vertical, a):
            a, b = b, a
        groups[line].append((a, b))
    merged = []
    for line, items in groups.items():
        vertical = not line.b
        items.sort(key=lambda ab: (float(_param(vertical, ab[0])), float(_param(vertical, ab[1]))))
        # float order is only a hint; merge with exact comparisons
        items.sort(key=cmp_to_key(lambda u, v: (_param(vertical, u[0]) - _param(vertical, v[0])).sign()))
        cur_a, cur_b = items[0]
        for a, b in items[1:]:
            if _param(vertical, a) <= _param(vertical, cur_b):
                if _param(vertical, b) > _param(vertical, cur_b):
                    cur_b = b
            else:
                merged.append((line, cur_a, cur_b))
                cur_a, cur_b = a, b
        merged.append((line, cur_a, cur_b))
    return merged


def _candidate_pairs(F: np.ndarray, line_id: np.ndarray, scale: float):
    """Index pairs of segments whose float images come within tolerance."""
    m = len(F)
    tol = 1e-9 * scale * scale
    btol = 1e-9 * scale
    x0, y0, x1, y1 = F[:, 0], F[:, 1], F[:, 2], F[:, 3]
    bx0 = np.minimum(x0, x1) - btol
    bx1 = np.maximum(x0, x1) + btol
    by0 = np.minimum(y0, y1) - btol
    by1 = np.maximum(y0, y1) + btol
    out = []
    chunk = max(1, 2_000_000 // max(m, 1))
    for s in range(0, m, chunk):
        e = min(m, s + chunk)
        I = np.arange(s, e)[:, None]
        J = np.arange(m)[None, :]
        ok = J > I
        ok &= (bx0[s:e, None] <= bx1[None, :]) & (bx0[None, :] <= bx1[s:e, None])
        ok &= (by0[s:e, None] <= by1[None, :]) & (by0[None, :] <= by1[s:e, None])
        ok &= line_id[s:e, None] != line_id[None, :]
        ii, jj = np.nonzero(ok)
        if len(ii) == 0:
            continue
        ii = ii + s
        ax, ay, bx, by = x0[ii], y0[ii], x1[ii], y1[ii]
        cx, cy, dx, dy = x0[jj], y0[jj], x1[jj], y1[jj]
        o1 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        o2 = (bx - ax) * (dy - ay) - (by - ay) * (dx - ax)
        o3 = (dx - cx) * (ay - cy) - (dy - cy) * (ax - cx)
        o4 = (dx - cx) * (by - cy) - (dy - cy) * (bx - cx)
        sep = ((o1 > tol) & (o2 > tol)) | ((o1 < -tol) & (o2 < -tol))
        sep |= ((o3 > tol) & (o4 > tol)) | ((o3 < -tol) & (o4 < -tol))
        keep = ~sep
        out.append(np.stack([ii[keep], jj[keep]], axis=1))
    if not out:
        return np.zeros((0, 2), dtype=int)
    return np.concatenate(out)


def _within(vertical: bool, a: Point2, b: Point2, x: Point2) -> bool:
    t = _param(vertical, x)
    return _param(vertical, a) <= t <= _param(vertical, b)


def _angle_cmp(v: Point2):
    def half(d: Point2) -> int:
        ys = d.y.sign()
        return 0 if ys > 0 or (ys == 0 and d.x.sign() > 0) else 1

    def cmp(u: Point2, w: Point2) -> int:
        du = Point2(u.x - v.x, u.y - v.y)
        dw = Point2(w.x - v.x, w.y - v.y)
        hu, hw = half(du), half(dw)
        if hu != hw:
            return hu - hw
        return -((du.x * dw.y - du.y * dw.x).sign())

    return cmp


def _sort_ccw(v: int, nbrs: list, points, fpoints) -> list:
    x0, y0 = fpoints[v]
    angs = []
    for w in nbrs:
        x, y = fpoints[w]
        a = math.atan2(y - y0, x - x0)
        if a < 0:
            a += 2 * math.pi
        angs.append(a)
    order = sorted(range(len(nbrs)), key=lambda k: angs[k])
    srt = [nbrs[k] for k in order]
    sa = [angs[k] for k in order]
    close = any(sa[k + 1] - sa[k] < 1e-9 for k in range(len(sa) - 1))
    close = close or (len(sa) > 1 and (sa[0] + 2 * math.pi - sa[-1]) < 1e-9) or any(a < 1e-9 or a > 2 * math.pi - 1e-9 for a in sa)
    if close:
        cmp = _angle_cmp(points[v])
        srt = sorted(nbrs, key=cmp_to_key(lambda a, b: cmp(points[a], points[b])))
    return srt


def arrange_segments(segments: Sequence[Segment2], scale: float) -> PlanarGraph:
    """Split segments at all mutual intersections; returns the planar graph.

    Dangling edges (vertices of degree one, repeatedly) are removed since they
    never separate two faces.
    """
    merged = _merge_collinear(segments)
    line_index = {}
    line_id = np.array([line_index.setdefault(line, len(line_index)) for line, _, _ in merged], dtype=int)
    F = np.array([[*a.to_float(), *b.to_float()] for _, a, b in merged], dtype=float)
    pairs = _candidate_pairs(F, line_id, scale)

    on_seg = [[a, b] for _, a, b in merged]
    verticals = [not line.b for line, _, _ in merged]
    cache = {}
    for i, j in pairs:
        li, a1, b1 = merged[i]
        lj, a2, b2 = merged[j]
        key = (line_id[i], line_id[j])
        if key in cache:
            x = cache[key]
        else:
            x = line_intersection(li, lj)
            cache[key] = x
        if x is None:
            continue
        if _within(verticals[i], a1, b1, x) and _within(verticals[j], a2, b2, x):
            on_seg[i].append(x)
            on_seg[j].append(x)

    vid: dict = {}
    points: list = []
    edges = set()
    for k, pts in enumerate(on_seg):
        vert = verticals[k]
        uniq = list(dict.fromkeys(pts))
        uniq.sort(key=lambda p: float(_param(vert, p)))
        fl = [float(_param(vert, p)) for p in uniq]
        if any(fl[t + 1] - fl[t] < 1e-9 * scale for t in range(len(fl) - 1)):
            uniq.sort(key=cmp_to_key(lambda p, q: (_param(vert, p) - _param(vert, q)).sign()))
        ids = []
        for p in uniq:
            if p not in vid:
                vid[p] = len(points)
                points.append(p)
            ids.append(vid[p])
        for u, v in zip(ids, ids[1:]):
            edges.add((u, v) if u < v else (v, u))

    nbr = defaultdict(set)
    for u, v in edges:
        nbr[u].add(v)
        nbr[v].add(u)
    stack = [u for u in nbr if len(nbr[u]) == 1]
    while stack:
        u = stack.pop()
        if len(nbr[u]) != 1:
            continue
        (w,) = nbr[u]
        nbr[u].clear()
        nbr[w].discard(u)
        edges.discard((u, w) if u < w else (w, u))
        if len(nbr[w]) == 1:
            stack.append(w)

    fpoints = np.array([p.to_float() for p in points], dtype=float) if points else np.zeros((0, 2))
    adj = {}
    for u, ns in nbr.items():
        if ns:
            adj[u] = _sort_ccw(u, list(ns), points, fpoints)
    return PlanarGraph(points, fpoints, adj, edges)


def walk_faces(graph: PlanarGraph):
    """Trace every face cycle.

    Returns ``(cycles, face_of)`` where ``cycles`` lists vertex-id cycles
    and ``face_of`` maps a directed edge ``(u, v)`` to the index of the cycle
    having it on its left.  The last entry is the unbounded face; a
    TopologyError is raised if the graph has more than one outer boundary.
    """
    adj = graph.adj
    pos = {u: {w: k for k, w in enumerate(ns)} for u, ns in adj.items()}
    face_of = {}
    cycles = []
    for u, ns in adj.items():
        for v in ns:
            if (u, v) in face_of:
                continue
            cyc = []
            a, b = u, v
            fid = len(cycles)
            while (a, b) not in face_of:
                face_of[(a, b)] = fid
                cyc.append(a)
                nb = adj[b]
                k = pos[b][a]
                a, b = b, nb[k - 1]
            cycles.append(cyc)

    fp = graph.fpoints
    areas = []
    for cyc in cycles:
        xs = fp[cyc, 0]
        ys = fp[cyc, 1]
        terms = xs * np.roll(ys, -1) - np.roll(xs, -1) * ys
        a = float(terms.sum())
        if abs(a) <= 1e-9 * float(np.abs(terms).sum()) + 1e-300:
            exact = signed_area2([graph.points[k] for k in cyc])
            a = exact.sign() * max(abs(float(exact)), 1e-300)
        areas.append(a)
    outer = [k for k, a in enumerate(areas) if a < 0]
    if len(outer) != 1:
        raise TopologyError(f"expected one outer boundary, found {len(outer)}")
    zero = [k for k, a in enumerate(areas) if a == 0]
    if zero:
        raise TopologyError("zero-area face")
    o = outer[0]
    if o != len(cycles) - 1:
        order = [k for k in range(len(cycles)) if k != o] + [o]
        remap = {old: new for new, old in enumerate(order)}
        cycles = [cycles[k] for k in order]
        face_of = {e: remap[f] for e, f in face_of.items()}
    for cyc in cycles[:-1]:
        if len(set(cyc)) != len(cyc):
            raise TopologyError("face boundary is not a simple cycle")
    return cycles, face_of
