"""Exact planar primitives over Q[sqrt(3)].

Cones are numbered 1..6; cone ``i`` holds the directions with polar angle in
``[(i-1)*60deg, i*60deg)``.  Boundary directions are kept unnormalised, with
entries in {0, +-1, +-sqrt3}, so membership tests need no division.
"""
from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Optional

from .exactnum import QS3, ZERO, qs3

__all__ = [
    "Point2",
    "Line2",
    "Segment2",
    "CONE_DIRS",
    "pt",
    "orientation",
    "cross",
    "cone_of",
    "in_cone",
    "bisector",
    "line_through",
    "line_side",
    "line_intersection",
    "squared_distance",
    "tangent_plane_gap",
    "signed_area2",
    "point_in_polygon",
    "first_ear",
    "triangulate",
    "representative_point",
]


class Point2(NamedTuple):
    x: QS3
    y: QS3

    def __sub__(self, other):  # type: ignore[override]
        return Point2(self.x - other.x, self.y - other.y)

    def __add__(self, other):  # type: ignore[override]
        return Point2(self.x + other.x, self.y + other.y)

    def scale(self, k) -> "Point2":
        return Point2(self.x * k, self.y * k)

    def to_float(self) -> tuple[float, float]:
        return float(self.x), float(self.y)

    def to_json(self) -> dict:
        return {"x": self.x.to_json(), "y": self.y.to_json()}

    @classmethod
    def from_json(cls, obj) -> "Point2":
        return cls(QS3.from_json(obj["x"]), QS3.from_json(obj["y"]))


class Line2(NamedTuple):
    """Locus ``a*x + b*y + c = 0``; ``(a, b)`` points to the positive side."""

    a: QS3
    b: QS3
    c: QS3

    def value(self, p: Point2) -> QS3:
        return self.a * p.x + self.b * p.y + self.c


class Segment2(NamedTuple):
    p: Point2
    q: Point2


def pt(x, y) -> Point2:
    """Point from rationals (int, Fraction, ``"p/q"``) or QS3 values."""
    return Point2(x if isinstance(x, QS3) else qs3(x), y if isinstance(y, QS3) else qs3(y))


_S = QS3.raw(0, 1, 1)
_ONE = QS3.raw(1, 0, 1)

# index 0 unused so that CONE_DIRS[i] is the lower boundary of cone i
CONE_DIRS = (
    None,
    Point2(_ONE, ZERO),
    Point2(_ONE, _S),
    Point2(-_ONE, _S),
    Point2(-_ONE, ZERO),
    Point2(-_ONE, -_S),
    Point2(_ONE, -_S),
)

# the same directions as (x, y) float pairs
CONE_DIRS_F = tuple(None if d is None else (float(d.x), float(d.y)) for d in CONE_DIRS)


def cross(u: Point2, v: Point2) -> QS3:
    return u.x * v.y - u.y * v.x


def orientation(p: Point2, q: Point2, r: Point2) -> int:
    """+1 if ``p, q, r`` turn counter-clockwise, -1 if clockwise, 0 if collinear."""
    return ((q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)).sign()


def _dir_cross_sign(i: int, vx: QS3, vy: QS3) -> int:
    # cross(CONE_DIRS[i], v) using the small direction entries directly
    if i == 1:
        return vy.sign()
    if i == 4:
        return -vy.sign()
    s3x = vx.mul_sqrt3()
    if i == 2:
        return (vy - s3x).sign()
    if i == 3:
        return (-vy - s3x).sign()
    if i == 5:
        return (s3x - vy).sign()
    return (vy + s3x).sign()  # i == 6


def cone_of(v: Point2) -> int:
    """Index of the cone holding the nonzero direction ``v``."""
    if not v.x and not v.y:
        raise ValueError("zero vector lies in no cone")
    for i in range(1, 7):
        if _dir_cross_sign(i, v.x, v.y) >= 0 and _dir_cross_sign(i % 6 + 1, v.x, v.y) < 0:
            return i
    raise AssertionError("cones do not partition the plane")  # pragma: no cover


def in_cone(apex: Point2, i: int, x: Point2) -> bool:
    vx = x.x - apex.x
    vy = x.y - apex.y
    if not vx and not vy:
        return False
    return _dir_cross_sign(i, vx, vy) >= 0 and _dir_cross_sign(i % 6 + 1, vx, vy) < 0


def bisector(p: Point2, q: Point2) -> Line2:
    """Perpendicular bisector of ``pq``, positive on the side strictly closer to ``q``."""
    if p == q:
        raise ValueError("bisector of coincident points")
    a = 2 * (q.x - p.x)
    b = 2 * (q.y - p.y)
    c = p.x * p.x + p.y * p.y - q.x * q.x - q.y * q.y
    return Line2(a, b, c)


def line_through(p: Point2, d: Point2) -> Line2:
    """Line through ``p`` with direction ``d``; positive side is left of ``d``."""
    a = -d.y
    b = d.x
    return Line2(a, b, -(a * p.x + b * p.y))


def line_side(line: Line2, p: Point2) -> int:
    return line.value(p).sign()


def line_intersection(l1: Line2, l2: Line2) -> Optional[Point2]:
    det = l1.a * l2.b - l2.a * l1.b
    if not det:
        return None
    inv = det.inverse()
    return Point2((l1.b * l2.c - l2.b * l1.c) * inv, (l2.a * l1.c - l1.a * l2.c) * inv)


def squared_distance(p: Point2, q: Point2) -> QS3:
    dx = q.x - p.x
    dy = q.y - p.y
    return dx * dx + dy * dy


def tangent_plane_gap(p: Point2, q: Point2) -> QS3:
    """Height of the paraboloid ``x^2 + y^2`` above its tangent plane at ``p``, at ``q``."""
    f = q.x * q.x + q.y * q.y
    h = 2 * p.x * q.x + 2 * p.y * q.y - p.x * p.x - p.y * p.y
    return f - h


# -- polygons ------------------------------------------------------------------


def signed_area2(poly) -> QS3:
    """Twice the signed area (positive for counter-clockwise)."""
    total = ZERO
    n = len(poly)
    for k in range(n):
        p = poly[k]
        q = poly[(k + 1) % n]
        total = total + (p.x * q.y - q.x * p.y)
    return total


def point_in_polygon(poly, x: Point2) -> int:
    """1 strictly inside, 0 on the boundary, -1 outside (any simple polygon)."""
    inside = False
    n = len(poly)
    for k in range(n):
        a = poly[k]
        b = poly[(k + 1) % n]
        o = orientation(a, b, x)
        if o == 0 and min(a.x, b.x) <= x.x <= max(a.x, b.x) and min(a.y, b.y) <= x.y <= max(a.y, b.y):
            return 0
        # crossing number with the horizontal ray to +x
        if (a.y > x.y) != (b.y > x.y):
            if (o > 0) == (b.y > a.y):
                inside = not inside
    return 1 if inside else -1


def _is_ear(poly, idx, k) -> bool:
    n = len(idx)
    i0, i1, i2 = idx[(k - 1) % n], idx[k], idx[(k + 1) % n]
    a, b, c = poly[i0], poly[i1], poly[i2]
    if orientation(a, b, c) <= 0:
        return False
    for j in idx:
        if j in (i0, i1, i2):
            continue
        p = poly[j]
        if p == a or p == b or p == c:
            continue
        # closed triangle test: a reflex vertex on the triangle's boundary blocks the ear
        if orientation(a, b, p) >= 0 and orientation(b, c, p) >= 0 and orientation(c, a, p) >= 0:
            return False
    return True


def triangulate(poly) -> list[tuple[Point2, Point2, Point2]]:
    """Ear-clipping triangulation of a simple counter-clockwise polygon."""
    idx = list(range(len(poly)))
    tris = []
    while len(idx) > 3:
        n = len(idx)
        for k in range(n):
            if _is_ear(poly, idx, k):
                tris.append((poly[idx[(k - 1) % n]], poly[idx[k]], poly[idx[(k + 1) % n]]))
                del idx[k]
                break
        else:
            # only collinear spikes remain; drop a degenerate vertex
            for k in range(n):
                a, b, c = poly[idx[(k - 1) % n]], poly[idx[k]], poly[idx[(k + 1) % n]]
                if orientation(a, b, c) == 0:
                    del idx[k]
                    break
            else:
                raise ValueError("polygon is not simple")
    if orientation(poly[idx[0]], poly[idx[1]], poly[idx[2]]) > 0:
        tris.append((poly[idx[0]], poly[idx[1]], poly[idx[2]]))
    return tris


def first_ear(poly) -> tuple[Point2, Point2, Point2]:
    n = len(poly)
    idx = list(range(n))
    for k in range(n):
        if _is_ear(poly, idx, k):
            return poly[(k - 1) % n], poly[k], poly[(k + 1) % n]
    raise ValueError("polygon has no ear (not simple or not counter-clockwise)")


_THIRD = QS3(Fraction(1, 3))


def representative_point(poly, avoid=()) -> Point2:
    """Strictly interior point: centroid of the first usable ear.

    Points listed in ``avoid`` are never returned; the next triangle of the
    triangulation is tried instead.
    """
    a, b, c = first_ear(poly)
    r = Point2((a.x + b.x + c.x) * _THIRD, (a.y + b.y + c.y) * _THIRD)
    if r not in avoid:
        return r
    for a, b, c in triangulate(poly):
        r = Point2((a.x + b.x + c.x) * _THIRD, (a.y + b.y + c.y) * _THIRD)
        if r not in avoid:
            return r
    raise ValueError("no admissible representative point")
