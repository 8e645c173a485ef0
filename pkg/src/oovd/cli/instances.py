"""Random instances and the plain-text point format.

Points are drawn with numpy's PCG64 generator seeded by the instance seed.
Each round draws ``k`` more ``(x, y)`` pairs (``k`` = points still missing) as
one ``integers(0, grid + 1, size=(k, 2))`` call; pairs are appended in order and
repeats of an already accepted point are skipped.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from ..geom import Point2, pt

__all__ = ["InstanceSpec", "gen_points", "read_points", "write_points", "format_points"]


@dataclass(frozen=True)
class InstanceSpec:
    n: int
    seed: int
    grid: int = 10000

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.n > (self.grid + 1) ** 2:
            raise ValueError("grid too small for n distinct points")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def gen_points(spec: InstanceSpec) -> list[Point2]:
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    seen = set()
    out = []
    while len(out) < spec.n:
        draw = rng.integers(0, spec.grid + 1, size=(spec.n - len(out), 2))
        for x, y in draw.tolist():
            if (x, y) in seen:
                continue
            seen.add((x, y))
            out.append(pt(x, y))
    return out


def read_points(path) -> list[Point2]:
    """Parse ``x y`` lines; ``#`` starts a comment.  Coordinates may be ``p/q``."""
    pts = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'x y', got {line!r}")
        try:
            pts.append(pt(Fraction(parts[0]), Fraction(parts[1])))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"{path}:{lineno}: bad coordinate ({exc})") from None
    if len(set(pts)) != len(pts):
        raise ValueError(f"{path}: duplicate points")
    return pts


def _coord(c) -> str:
    if not c.is_rational():
        raise ValueError("point file coordinates must be rational")
    a = c.a
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


def format_points(points, header: str = "") -> str:
    lines = [f"# {h}" for h in header.splitlines()] if header else []
    lines += [f"{_coord(p.x)} {_coord(p.y)}" for p in points]
    return "\n".join(lines) + "\n"


def write_points(points, path, header: str = "") -> None:
    Path(path).write_text(format_points(points, header), encoding="utf-8")
