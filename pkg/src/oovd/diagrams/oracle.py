"""Seven-tuple labels: nearest terminal in each cone plus the overall nearest.

``oracle_seven_tuple`` evaluates the definition directly with exact numbers.
``label_points`` gives the same answer for many query points at once: it
decides in floating point wherever the margin is comfortable and falls back to
exact integer arithmetic (common-denominator Q[sqrt3] pairs) otherwise.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..exactnum import sign_ab
from ..geom import CONE_DIRS_F, Point2, in_cone, squared_distance

__all__ = ["SevenTuple", "oracle_seven_tuple", "label_points", "check_seven_tuple"]

SevenTuple = tuple  # (v1, ..., v6, v7) of 1-based terminal indices, 0 = none


def oracle_seven_tuple(points: Sequence[Point2], x: Point2) -> SevenTuple:
    """Nearest terminal (1-based) in each of the six cones seen from ``x``, then overall.

    Ties go to the lowest index.  Raises ValueError if ``x`` is a terminal.
    """
    best = [0] * 7
    dist = [None] * 7
    for k, p in enumerate(points, start=1):
        if p == x:
            raise ValueError("query point coincides with a terminal")
        d = squared_distance(x, p)
        for i in range(1, 7):
            if in_cone(x, i, p):
                if dist[i - 1] is None or d < dist[i - 1]:
                    best[i - 1], dist[i - 1] = k, d
                break
        if dist[6] is None or d < dist[6]:
            best[6], dist[6] = k, d
    return tuple(best)


def check_seven_tuple(t: SevenTuple) -> bool:
    """Structural invariants of a face label."""
    return len(t) == 7 and t[6] != 0 and t[6] in t[:6]


# -- batched evaluation ----------------------------------------------------------


class _IntFrame:
    """Terminals as integer pairs over one common denominator."""

    def __init__(self, points: Sequence[Point2]):
        den = 1
        for p in points:
            for c in (p.x, p.y):
                d = c.triple[2]
                den = den * d // math.gcd(den, d)
        self.den = den
        self.coords = []
        for p in points:
            row = []
            for c in (p.x, p.y):
                a, b, d = c.triple
                f = den // d
                row.append((a * f, b * f))
            self.coords.append(row)

    def offsets(self, x: Point2):
        """Return vec(k): p_k - x scaled to integers, as (xa, xb, ya, yb) coefficient pairs."""
        (xa, xb, xd), (ya, yb, yd) = x.x.triple, x.y.triple
        qd = xd * yd // math.gcd(xd, yd)
        fx, fy = qd // xd, qd // yd
        X = (xa * fx * self.den, xb * fx * self.den)
        Y = (ya * fy * self.den, yb * fy * self.den)
        coords = self.coords

        def vec(k):
            (pxa, pxb), (pya, pyb) = coords[k]
            return (pxa * qd - X[0], pxb * qd - X[1], pya * qd - Y[0], pyb * qd - Y[1])

        return vec


def _cone_sign(i, v):
    # sign of cross(CONE_DIRS[i], v) for v = (xa, xb, ya, yb) meaning (xa + xb r3, ya + yb r3)
    xa, xb, ya, yb = v
    if i == 1:
        return sign_ab(ya, yb)
    if i == 4:
        return -sign_ab(ya, yb)
    # sqrt3 * (xa + xb r3) = 3 xb + xa r3
    if i == 2:
        return sign_ab(ya - 3 * xb, yb - xa)
    if i == 3:
        return sign_ab(-ya - 3 * xb, -yb - xa)
    if i == 5:
        return sign_ab(3 * xb - ya, xa - yb)
    return sign_ab(ya + 3 * xb, yb + xa)


def _exact_cone(v):
    if not any(v):
        return 0
    for i in range(1, 7):
        if _cone_sign(i, v) >= 0 and _cone_sign(i % 6 + 1, v) < 0:
            return i
    raise AssertionError("cone partition failed")  # pragma: no cover


def _sqlen(v):
    xa, xb, ya, yb = v
    return (xa * xa + 3 * xb * xb + ya * ya + 3 * yb * yb, 2 * (xa * xb + ya * yb))


def _less(d1, d2):
    return sign_ab(d1[0] - d2[0], d1[1] - d2[1]) < 0


def label_points(points: Sequence[Point2], queries: Sequence[Point2], frame=None) -> list[SevenTuple]:
    """``oracle_seven_tuple`` for every query point, float-filtered."""
    frame = frame or _IntFrame(points)
    out = []
    for s in range(0, len(queries), 1024):
        out.extend(_label_chunk(points, queries[s:s + 1024], frame))
    return out


def _label_chunk(points, queries, frame):
    P = np.array([p.to_float() for p in points])
    Q = np.array([q.to_float() for q in queries])
    scale = max(1.0, float(np.abs(P).max()), float(np.abs(Q).max()))
    eps_c = 1e-9 * scale
    rel = 1e-9

    V = P[None, :, :] - Q[:, None, :]
    d2 = (V * V).sum(-1)
    crosses = []
    for i in range(1, 7):
        dx, dy = CONE_DIRS_F[i]
        crosses.append(dx * V[..., 1] - dy * V[..., 0])
    cone = np.zeros(d2.shape, dtype=np.int8)
    unsure = np.zeros(d2.shape, dtype=bool)
    for i in range(1, 7):
        c_lo = crosses[i - 1]
        c_hi = crosses[i % 6]
        cone[(c_lo > eps_c) & (c_hi < -eps_c)] = i
        unsure |= (np.abs(c_lo) <= eps_c)
    unsure |= d2 <= (eps_c * eps_c)

    n = len(points)
    out = []
    for row in range(len(queries)):
        vec = None
        x = queries[row]
        crow = cone[row]
        drow = d2[row]
        for k in np.nonzero(unsure[row])[0]:
            if vec is None:
                vec = frame.offsets(x)
            v = vec(k)
            if not any(v):
                raise ValueError("query point coincides with a terminal")
            crow[k] = _exact_cone(v)
        result = []
        for i in list(range(1, 8)):
            members = np.nonzero(crow == i)[0] if i < 7 else np.arange(n)
            if len(members) == 0:
                result.append(0)
                continue
            dm = drow[members]
            j = int(np.argmin(dm))
            lim = dm[j] * (1 + rel) + eps_c
            close = members[dm <= lim]
            if len(close) == 1:
                result.append(int(close[0]) + 1)
                continue
            if vec is None:
                vec = frame.offsets(x)
            best = None
            bd = None
            for k in sorted(close):
                dk = _sqlen(vec(k))
                if best is None or _less(dk, bd):
                    best, bd = k, dk
            result.append(int(best) + 1)
        out.append(tuple(result))
    return out
