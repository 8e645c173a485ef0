"""JSON forms of subdivisions and Steiner solutions.

Exact numbers are written as ``{"a": "p/q", "b": "p/q", "float": x}`` meaning
``a + b*sqrt(3)``; the rational strings round-trip bit for bit.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from ..diagrams import BBox, FaceRecord, Subdivision
from ..exactnum import QS3
from ..geom import Point2
from ..steiner import Bucket, Edge, SteinerSolution, Tree, tree_stats

__all__ = [
    "subdivision_to_json",
    "subdivision_from_json",
    "solution_to_json",
    "solution_from_json",
    "dump",
    "load",
]


def _bbox_json(b: BBox) -> dict:
    return {k: str(getattr(b, k)) for k in ("xmin", "ymin", "xmax", "ymax")}


def subdivision_to_json(sub: Subdivision) -> dict:
    return {
        "kind": "subdivision",
        "provenance": sub.provenance,
        "bbox": _bbox_json(sub.bbox) if sub.bbox else None,
        "faces_premerge": sub.faces_premerge,
        "faces": [
            {
                "polygon": [p.to_json() for p in f.polygon],
                "rep": f.rep.to_json(),
                "data": list(f.data) if f.data is not None else None,
            }
            for f in sub.faces
        ],
    }


def subdivision_from_json(obj: dict) -> Subdivision:
    faces = [
        FaceRecord(
            tuple(Point2.from_json(p) for p in f["polygon"]),
            Point2.from_json(f["rep"]),
            tuple(f["data"]) if f["data"] is not None else None,
        )
        for f in obj["faces"]
    ]
    bbox = obj.get("bbox")
    bbox = BBox(*(Fraction(bbox[k]) for k in ("xmin", "ymin", "xmax", "ymax"))) if bbox else None
    return Subdivision(faces, obj.get("provenance", ""), bbox, obj.get("faces_premerge"))


def _edge_json(e: Edge) -> dict:
    return {"u": e.u, "v": e.v, "weight": e.weight, "exact_sq": e.exact_sq.to_json()}


def _edge_from(obj) -> Edge:
    return Edge(obj["u"], obj["v"], obj["weight"], QS3.from_json(obj["exact_sq"]))


def solution_to_json(sol: SteinerSolution) -> dict:
    stats = tree_stats(sol, sol.mst) if sol.mst is not None else None
    return {
        "kind": "steiner-solution",
        "terminals": [p.to_json() for p in sol.terminals],
        "steiner": sol.steiner.to_json() if sol.steiner is not None else None,
        "steiner_float": list(sol.steiner_float) if sol.steiner is not None else None,
        "bucket": {"members": list(sol.bucket.members), "source_kind": sol.bucket.source_kind} if sol.bucket else None,
        "edges": [_edge_json(e) for e in sol.tree.edges],
        "mst_edges": [_edge_json(e) for e in sol.mst.edges] if sol.mst is not None else None,
        "length": sol.length,
        "mst_length": sol.mst_length,
        "stats": vars(stats) if stats is not None else None,
        "info": sol.info,
    }


def solution_from_json(obj: dict) -> SteinerSolution:
    terminals = tuple(Point2.from_json(p) for p in obj["terminals"])
    n = len(terminals)
    steiner = Point2.from_json(obj["steiner"]) if obj.get("steiner") else None
    tree = Tree(n + (1 if steiner is not None else 0), [_edge_from(e) for e in obj["edges"]])
    mst = Tree(n, [_edge_from(e) for e in obj["mst_edges"]]) if obj.get("mst_edges") else None
    bucket = Bucket(tuple(obj["bucket"]["members"]), obj["bucket"]["source_kind"]) if obj.get("bucket") else None
    return SteinerSolution(tree, steiner, bucket, obj["length"], obj["mst_length"], mst, obj.get("info", {}), terminals)


def dump(obj, path) -> None:
    if isinstance(obj, Subdivision):
        data = subdivision_to_json(obj)
    elif isinstance(obj, SteinerSolution):
        data = solution_to_json(obj)
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")
    Path(path).write_text(json.dumps(data, indent=1), encoding="utf-8")


def load(path):
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    kind = data.get("kind")
    if kind == "subdivision":
        return subdivision_from_json(data)
    if kind == "steiner-solution":
        return solution_from_json(data)
    raise ValueError(f"{path}: unknown JSON kind {kind!r}")
