import random
import sys
from fractions import Fraction

import pytest

from oovd.exactnum import QS3, SQRT3
from oovd.geom import Point2, pt

HALF = QS3(Fraction(1, 2))


def random_points(rng: random.Random, n: int, grid: int = 10000) -> list:
    seen = set()
    while len(seen) < n:
        seen.add((rng.randint(0, grid), rng.randint(0, grid)))
    return [pt(x, y) for x, y in sorted(seen, key=lambda _: rng.random())]


def rot60(p: Point2) -> Point2:
    return Point2(p.x * HALF - p.y * HALF * SQRT3, p.x * HALF * SQRT3 + p.y * HALF)


@pytest.fixture
def rng():
    return random.Random(20240917)


def interior_samples(poly, k: int, rng: random.Random) -> list:
    """``k`` exact points strictly inside the simple CCW polygon ``poly``."""
    from oovd.geom import triangulate

    tris = triangulate(list(poly))
    out = []
    for _ in range(k):
        a, b, c = rng.choice(tris)
        w = [Fraction(rng.randint(1, 997)) for _ in range(3)]
        s = sum(w)
        w = [QS3(x / s) for x in w]
        out.append(Point2(a.x * w[0] + b.x * w[1] + c.x * w[2], a.y * w[0] + b.y * w[1] + c.y * w[2]))
    return out


def face_multiset(sub, relabel=None) -> list:
    """Sortable face signature: canonical polygon plus label (optionally relabelled)."""
    from oovd.diagrams import canonical_polygon

    out = []
    for f in sub.faces:
        data = f.data
        if relabel is not None and data is not None:
            data = tuple(relabel[v] if v else 0 for v in data)
        out.append((tuple(p.x.triple + p.y.triple for p in canonical_polygon(f.polygon)), data))
    return sorted(out)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS and not terminalreporter.stats:
        return
    ran = {int(r.nodeid.split("::test_")[1][:2]) for key in ("passed", "failed", "error") for r in terminalreporter.stats.get(key, []) if "test_acceptance.py::test_" in r.nodeid}
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ran):
        terminalreporter.write_line(mod.RESULTS.get(num, f"[FAIL] {num:2d}. raised before reporting (see traceback)"))
