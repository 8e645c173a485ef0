"""Labelled subdivisions: arrangement faces, seven-tuple labels and merging."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..geom import Point2, Segment2, orientation, representative_point
from .arrangement import PlanarGraph, TopologyError, arrange_segments, walk_faces
from .candidates import BBox, default_bbox, relevant_segments
from .oracle import SevenTuple, _IntFrame, label_points

__all__ = [
    "FaceRecord",
    "Subdivision",
    "build_arrangement",
    "label_and_merge",
    "build_refined_oovd",
    "canonical_polygon",
]


@dataclass(frozen=True)
class FaceRecord:
    polygon: tuple  # counter-clockwise Point2 tuple
    rep: Point2
    data: Optional[SevenTuple] = None


@dataclass
class Subdivision:
    faces: list
    provenance: str
    bbox: Optional[BBox] = None
    faces_premerge: Optional[int] = None
    # planar graph and per-face boundary cycles of the unmerged arrangement
    graph: Optional[PlanarGraph] = field(default=None, repr=False)
    cycles: Optional[list] = field(default=None, repr=False)
    face_of: Optional[dict] = field(default=None, repr=False)
    timings: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.faces)


def _drop_collinear(poly: list) -> list:
    out = list(poly)
    k = 0
    while k < len(out) and len(out) > 3:
        a, b, c = out[k - 1], out[k], out[(k + 1) % len(out)]
        if orientation(a, b, c) == 0:
            del out[k]
            k = max(k - 1, 0)
        else:
            k += 1
    return out


def _order_key(p: Point2):
    return (p.x.triple, p.y.triple)


def canonical_polygon(poly) -> tuple:
    """Rotation of ``poly`` starting at a fixed vertex, collinear vertices dropped."""
    pts = _drop_collinear(list(poly))
    k = min(range(len(pts)), key=lambda j: _order_key(pts[j]))
    return tuple(pts[k:] + pts[:k])


def _faces_from_cycles(graph: PlanarGraph, cycles, avoid=()) -> list:
    faces = []
    for cyc in cycles[:-1]:
        poly = _drop_collinear([graph.points[k] for k in cyc])
        faces.append(FaceRecord(tuple(poly), representative_point(poly, avoid)))
    return faces


def build_arrangement(segments: Sequence[Segment2], bbox: BBox, avoid=()) -> Subdivision:
    """Faces of the arrangement of ``segments`` (which must include the box sides)."""
    graph = arrange_segments(segments, bbox.extent)
    cycles, face_of = walk_faces(graph)
    faces = _faces_from_cycles(graph, cycles, avoid)
    sub = Subdivision(faces, "arrangement", bbox, len(faces), graph, cycles, face_of)
    return sub


class _DSU:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, a):
        p = self.p
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.p[rb] = ra
            else:
                self.p[ra] = rb


def label_and_merge(arr: Subdivision, points: Sequence[Point2], provenance: str = "refined-oovd") -> Subdivision:
    """Label every arrangement face, then merge edge-adjacent faces with equal labels."""
    frame = _IntFrame(points)
    labels = label_points(points, [f.rep for f in arr.faces], frame)
    graph, cycles, face_of = arr.graph, arr.cycles, arr.face_of
    nf = len(arr.faces)
    outer = nf
    dsu = _DSU(nf + 1)
    for u, v in graph.edges:
        f, g = face_of[(u, v)], face_of[(v, u)]
        if f != outer and g != outer and labels[f] == labels[g]:
            dsu.union(f, g)

    keep_adj = {}
    for u, ns in graph.adj.items():
        kept = [w for w in ns if dsu.find(face_of[(u, w)]) != dsu.find(face_of[(w, u)])]
        if kept:
            keep_adj[u] = kept
    kept_edges = {(u, w) for u, ns in keep_adj.items() for w in ns if u < w}
    merged = PlanarGraph(graph.points, graph.fpoints, keep_adj, kept_edges)
    mcycles, mface_of = walk_faces(merged)

    group_cycles = {}
    for k, cyc in enumerate(mcycles[:-1]):
        u, v = cyc[0], cyc[1]
        grp = dsu.find(face_of[(u, v)])
        if grp in group_cycles:
            raise TopologyError("merged face is not simply connected")
        group_cycles[grp] = cyc
    faces = []
    for grp in sorted(group_cycles):
        poly = _drop_collinear([graph.points[k] for k in group_cycles[grp]])
        faces.append(FaceRecord(tuple(poly), representative_point(poly, points), labels[grp]))
    return Subdivision(faces, provenance, arr.bbox, nf, merged, mcycles, mface_of)


def build_refined_oovd(points: Sequence[Point2], bbox: Optional[BBox] = None) -> Subdivision:
    """Refined OOVD: common refinement of the six oriented diagrams and the Voronoi diagram."""
    if len(points) < 2:
        raise ValueError("need at least two terminals")
    if len(set(points)) != len(points):
        raise ValueError("terminals must be distinct")
    bbox = bbox or default_bbox(points)
    if not all(bbox.strictly_contains(p) for p in points):
        raise ValueError("terminals must lie strictly inside the bounding box")
    t0 = time.perf_counter()
    segs = relevant_segments(points, bbox)
    t1 = time.perf_counter()
    arr = build_arrangement(segs, bbox, avoid=points)
    t2 = time.perf_counter()
    sub = label_and_merge(arr, points)
    t3 = time.perf_counter()
    sub.timings = {"segments": t1 - t0, "arrangement": t2 - t1, "label_merge": t3 - t2, "n_segments": len(segs)}
    return sub
