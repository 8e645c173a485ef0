"""Candidate edges for the six oriented Voronoi diagrams and the Voronoi diagram.

Every edge of every diagram lies on a boundary ray of some wedge ``p - C_i`` or
on a perpendicular bisector.  :func:`candidate_segments` lists all such
pieces (quadratic in ``n``).  :func:`relevant_segments` lists only the pieces
along which the owning terminals can actually be nearest; it is decided with a
float filter whose blocking regions are shrunk by a tolerance and whose kept
intervals are widened by a margin, so it can only err towards keeping too much.
Kept pieces are cut at exact points, so everything downstream stays exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ..exactnum import QS3, ZERO
from ..geom import CONE_DIRS, CONE_DIRS_F, Line2, Point2, Segment2, pt

__all__ = [
    "BBox",
    "default_bbox",
    "wedge_halfplanes",
    "clip_line",
    "candidate_segments",
    "relevant_segments",
]


@dataclass(frozen=True)
class BBox:
    xmin: Fraction
    ymin: Fraction
    xmax: Fraction
    ymax: Fraction

    def __post_init__(self):
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError("degenerate bounding box")

    @property
    def corners(self) -> list[Point2]:
        return [
            pt(self.xmin, self.ymin),
            pt(self.xmax, self.ymin),
            pt(self.xmax, self.ymax),
            pt(self.xmin, self.ymax),
        ]

    @property
    def area(self) -> Fraction:
        return (self.xmax - self.xmin) * (self.ymax - self.ymin)

    @property
    def extent(self) -> float:
        return float(max(self.xmax - self.xmin, self.ymax - self.ymin))

    def halfplanes(self) -> list[Line2]:
        one, zero = QS3(1), ZERO
        return [
            Line2(one, zero, QS3(-self.xmin)),
            Line2(-one, zero, QS3(self.xmax)),
            Line2(zero, one, QS3(-self.ymin)),
            Line2(zero, -one, QS3(self.ymax)),
        ]

    def sides(self) -> list[Segment2]:
        c = self.corners
        return [Segment2(c[k], c[(k + 1) % 4]) for k in range(4)]

    def strictly_contains(self, p: Point2) -> bool:
        return self.xmin < p.x < self.xmax and self.ymin < p.y < self.ymax


def default_bbox(points: Sequence[Point2] = (), grid: int = 10000) -> BBox:
    """The domain ``[0, grid]^2`` (grown to cover ``points``) plus a 1% margin."""
    xs = [float(p.x) for p in points]
    ys = [float(p.y) for p in points]
    lo_x = min([0.0] + xs)
    hi_x = max([float(grid)] + xs)
    lo_y = min([0.0] + ys)
    hi_y = max([float(grid)] + ys)
    lo_x, hi_x = Fraction(math.floor(lo_x)), Fraction(math.ceil(hi_x))
    lo_y, hi_y = Fraction(math.floor(lo_y)), Fraction(math.ceil(hi_y))
    margin = max(hi_x - lo_x, hi_y - lo_y) / 100
    margin = max(margin, Fraction(1))
    return BBox(lo_x - margin, lo_y - margin, hi_x + margin, hi_y + margin)


def wedge_halfplanes(p: Point2, i: int) -> list[Line2]:
    """Closed halfplanes whose intersection is the wedge ``p - C_i``.

    ``x`` is in the wedge iff ``p - x`` is in cone ``i`` (closure).
    """
    lo = CONE_DIRS[i]
    hi = CONE_DIRS[i % 6 + 1]
    # cross(d, p - x) = d.y*x.x - d.x*x.y + (d.x*p.y - d.y*p.x)
    first = Line2(lo.y, -lo.x, lo.x * p.y - lo.y * p.x)
    second = Line2(-hi.y, hi.x, hi.y * p.x - hi.x * p.y)
    return [first, second]


def clip_line(m: Point2, d: Point2, halfplanes, t_lo=None, t_hi=None) -> Optional[tuple[QS3, QS3]]:
    """Exact parameter range ``[t0, t1]`` of ``m + t*d`` inside closed halfplanes."""
    for h in halfplanes:
        k = h.a * d.x + h.b * d.y
        v = h.a * m.x + h.b * m.y + h.c
        ks = k.sign()
        if ks == 0:
            if v.sign() < 0:
                return None
            continue
        t = -v / k
        if ks > 0:
            if t_lo is None or t > t_lo:
                t_lo = t
        else:
            if t_hi is None or t < t_hi:
                t_hi = t
        if t_lo is not None and t_hi is not None and t_lo > t_hi:
            return None
    if t_lo is None or t_hi is None:
        raise ValueError("unbounded clip; include the bounding box halfplanes")
    return t_lo, t_hi


def _piece(m: Point2, d: Point2, t0, t1) -> Optional[Segment2]:
    if t0 >= t1:
        return None
    return Segment2(Point2(m.x + d.x * t0, m.y + d.y * t0), Point2(m.x + d.x * t1, m.y + d.y * t1))


def _ray_dirs(k: int) -> Point2:
    d = CONE_DIRS[k]
    return Point2(-d.x, -d.y)


def _midpoint_dir(p: Point2, q: Point2) -> tuple[Point2, Point2]:
    half = QS3(Fraction(1, 2))
    m = Point2((p.x + q.x) * half, (p.y + q.y) * half)
    d = Point2(p.y - q.y, q.x - p.x)
    return m, d


def candidate_segments(points: Sequence[Point2], bbox: BBox) -> list[Segment2]:
    """All cone-boundary rays, cone-restricted bisectors, full bisectors and box sides.

    Quadratic in the number of terminals; intended for small inputs and as the
    reference that :func:`relevant_segments` is checked against.
    """
    box = bbox.halfplanes()
    segs: list[Segment2] = []
    for p in points:
        for k in range(1, 7):
            d = _ray_dirs(k)
            rng = clip_line(p, d, box, t_lo=ZERO)
            if rng is not None:
                s = _piece(p, d, *rng)
                if s is not None:
                    segs.append(s)
    n = len(points)
    for a in range(n):
        for b in range(a + 1, n):
            p, q = points[a], points[b]
            m, d = _midpoint_dir(p, q)
            for i in range(1, 7):
                rng = clip_line(m, d, wedge_halfplanes(p, i) + wedge_halfplanes(q, i) + box)
                if rng is not None:
                    s = _piece(m, d, *rng)
                    if s is not None:
                        segs.append(s)
            rng = clip_line(m, d, box)
            if rng is not None:
                s = _piece(m, d, *rng)
                if s is not None:
                    segs.append(s)
    segs.extend(bbox.sides())
    return segs


# -- float relevance filter ----------------------------------------------------

_ROW_CHUNK = 2048


def _halfline(g0, g1, tol):
    """Interval {t : g0 + t*g1 > tol} as (lo, hi) arrays."""
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (tol - g0) / g1
    lo = np.where(g1 > 0, t, -np.inf)
    hi = np.where(g1 < 0, t, np.inf)
    flat = g1 == 0
    lo = np.where(flat, np.where(g0 > tol, -np.inf, np.inf), lo)
    hi = np.where(flat, np.where(g0 > tol, np.inf, -np.inf), hi)
    return lo, hi


def _free_intervals(M, D, lo, hi, owner, other, cone, P, scale):
    """Sub-intervals of ``[lo, hi]`` on which no terminal beats ``owner``.

    ``cone[k] == 0`` means plain distance (Voronoi); otherwise a blocker must
    also lie in that cone as seen from the point.
    """
    n = len(P)
    tol_c = 1e-9 * scale
    tol_d = 1e-11 * scale * scale
    out = []
    for s in range(0, len(M), _ROW_CHUNK):
        e = min(len(M), s + _ROW_CHUNK)
        m = M[s:e, None, :]
        d = D[s:e, None, :]
        p = P[owner[s:e]][:, None, :]
        r = P[None, :, :]
        # r closer than p: 2 x.(r - p) + |p|^2 - |r|^2 > 0
        rp = r - p
        base = (p * p).sum(-1) - (r * r).sum(-1)
        g0 = 2 * (m * rp).sum(-1) + base
        g1 = 2 * (d * rp).sum(-1)
        blo, bhi = _halfline(g0, g1, tol_d)
        c = cone[s:e]
        conic = c > 0
        if conic.any():
            lo_dir = np.array([CONE_DIRS_F[k] if k else (0.0, 0.0) for k in c])
            hi_dir = np.array([CONE_DIRS_F[k % 6 + 1] if k else (0.0, 0.0) for k in c])
            rm = r - m
            for dd, sgn in ((lo_dir, 1.0), (hi_dir, -1.0)):
                dx = dd[:, None, 0]
                dy = dd[:, None, 1]
                # sgn * cross(dir, r - x(t))
                h0 = sgn * (dx * rm[..., 1] - dy * rm[..., 0])
                h1 = -sgn * (dx * d[..., 1] - dy * d[..., 0])
                clo, chi = _halfline(h0, h1, tol_c)
                clo = np.where(conic[:, None], clo, -np.inf)
                chi = np.where(conic[:, None], chi, np.inf)
                blo = np.maximum(blo, clo)
                bhi = np.minimum(bhi, chi)
        rows = np.arange(e - s)
        blo[rows, owner[s:e]] = np.inf
        bhi[rows, owner[s:e]] = -np.inf
        oth = other[s:e]
        has = oth >= 0
        blo[rows[has], oth[has]] = np.inf
        bhi[rows[has], oth[has]] = -np.inf
        lo_c = lo[s:e, None]
        hi_c = hi[s:e, None]
        blo = np.maximum(blo, lo_c)
        bhi = np.minimum(bhi, hi_c)
        empty = blo >= bhi
        blo = np.where(empty, np.inf, blo)
        bhi = np.where(empty, -np.inf, bhi)
        order = np.argsort(blo, axis=1)
        blo = np.take_along_axis(blo, order, 1)
        bhi = np.take_along_axis(bhi, order, 1)
        reach = np.maximum.accumulate(np.concatenate([lo_c, bhi], axis=1), axis=1)
        # a free gap opens before blocker k when it starts past everything so far
        starts = np.concatenate([blo, hi_c], axis=1)
        gap = starts > reach
        for k in range(e - s):
            idx = np.nonzero(gap[k])[0]
            if len(idx) == 0:
                out.append([])
                continue
            out.append([(float(reach[k, j]), float(starts[k, j])) for j in idx if j == n or np.isfinite(starts[k, j])])
    return out


def _float_clip(M, D, planes):
    """Float parameter ranges of lines M + t D inside halfplanes (a, b, c) arrays."""
    lo = np.full(len(M), -np.inf)
    hi = np.full(len(M), np.inf)
    for a, b, c in planes:
        k = a * D[:, 0] + b * D[:, 1]
        v = a * M[:, 0] + b * M[:, 1] + c
        with np.errstate(divide="ignore", invalid="ignore"):
            t = -v / k
        lo = np.where(k > 0, np.maximum(lo, t), lo)
        hi = np.where(k < 0, np.minimum(hi, t), hi)
        bad = (k == 0) & (v < 0)
        lo = np.where(bad, np.inf, lo)
    return lo, hi


def _wedge_planes_f(P, idx, i):
    lo = CONE_DIRS_F[i]
    hi = CONE_DIRS_F[i % 6 + 1]
    px = P[idx, 0]
    py = P[idx, 1]
    return [
        (lo[1], -lo[0], lo[0] * py - lo[1] * px),
        (-hi[1], hi[0], hi[1] * px - hi[0] * py),
    ]


def _rat(t: float, scale: int, up: bool) -> Fraction:
    v = t * scale
    return Fraction(math.ceil(v) if up else math.floor(v), scale)


def relevant_segments(points: Sequence[Point2], bbox: BBox) -> list[Segment2]:
    """Pruned candidate set covering every edge of the seven diagrams."""
    n = len(points)
    P = np.array([p.to_float() for p in points], dtype=float)
    S = bbox.extent
    box = bbox.halfplanes()
    box_f = [(float(h.a), float(h.b), float(h.c)) for h in box]
    segs: list[Segment2] = list(bbox.sides())
    pos_margin = 1e-7 * S

    rows_M, rows_D, rows_lo, rows_hi, rows_owner, rows_other, rows_cone, rows_key = [], [], [], [], [], [], [], []

    # boundary rays: ray -d_k from p bounds cones k and k-1
    for a in range(n):
        for k in range(1, 7):
            dx, dy = CONE_DIRS_F[k]
            D = np.array([[-dx, -dy]])
            lo, hi = _float_clip(P[a:a + 1], D, box_f)
            for c in (k, (k - 2) % 6 + 1):
                rows_M.append(P[a])
                rows_D.append(D[0])
                rows_lo.append(0.0)
                rows_hi.append(hi[0])
                rows_owner.append(a)
                rows_other.append(-1)
                rows_cone.append(c)
                rows_key.append(("ray", a, k))

    if n >= 2:
        ia, ib = np.triu_indices(n, 1)
        M = (P[ia] + P[ib]) / 2
        D = np.stack([P[ia, 1] - P[ib, 1], P[ib, 0] - P[ia, 0]], axis=1)
        for i in range(0, 7):
            planes = list(box_f)
            if i:
                planes += _wedge_planes_f(P, ia, i) + _wedge_planes_f(P, ib, i)
            lo, hi = _float_clip(M, D, planes)
            dlen = np.hypot(D[:, 0], D[:, 1])
            slack = pos_margin / dlen
            lo = lo - slack
            hi = hi + slack
            keep = np.nonzero(lo < hi)[0]
            for j in keep:
                rows_M.append(M[j])
                rows_D.append(D[j])
                rows_lo.append(lo[j])
                rows_hi.append(hi[j])
                rows_owner.append(ia[j])
                rows_other.append(ib[j])
                rows_cone.append(i)
                rows_key.append(("bis", ia[j], ib[j], i))

    if not rows_M:
        return segs
    free = _free_intervals(
        np.array(rows_M),
        np.array(rows_D),
        np.array(rows_lo, dtype=float),
        np.array(rows_hi, dtype=float),
        np.array(rows_owner),
        np.array(rows_other),
        np.array(rows_cone),
        P,
        S,
    )

    for key, gaps, Df in zip(rows_key, free, rows_D):
        if not gaps:
            continue
        if key[0] == "ray":
            _, a, k = key
            m = points[a]
            d = _ray_dirs(k)
            exact = clip_line(m, d, box, t_lo=ZERO)
        else:
            _, a, b, i = key
            m, d = _midpoint_dir(points[a], points[b])
            planes = list(box)
            if i:
                planes += wedge_halfplanes(points[a], i) + wedge_halfplanes(points[b], i)
            exact = clip_line(m, d, planes)
        if exact is None:
            continue
        t_lo, t_hi = exact
        dlen = math.hypot(Df[0], Df[1])
        tm = pos_margin / dlen
        grid = 1 << max(8, int(math.ceil(math.log2(4.0 / tm))))
        for g0, g1 in gaps:
            u0 = _rat(g0 - tm, grid, up=False)
            u1 = _rat(g1 + tm, grid, up=True)
            t0 = t_lo if t_lo >= u0 else QS3(u0)
            t1 = t_hi if t_hi <= u1 else QS3(u1)
            s = _piece(m, d, t0, t1)
            if s is not None:
                segs.append(s)
    return segs
