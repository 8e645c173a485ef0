"""Oriented Voronoi diagrams, their overlay and the refined OOVD."""
from .arrangement import PlanarGraph, TopologyError, arrange_segments, walk_faces
from .candidates import BBox, candidate_segments, clip_line, default_bbox, relevant_segments, wedge_halfplanes
from .oracle import SevenTuple, check_seven_tuple, label_points, oracle_seven_tuple
from .refine import FaceRecord, Subdivision, build_arrangement, build_refined_oovd, canonical_polygon, label_and_merge

__all__ = [
    "BBox",
    "FaceRecord",
    "PlanarGraph",
    "SevenTuple",
    "Subdivision",
    "TopologyError",
    "arrange_segments",
    "build_arrangement",
    "build_refined_oovd",
    "candidate_segments",
    "canonical_polygon",
    "check_seven_tuple",
    "clip_line",
    "default_bbox",
    "label_and_merge",
    "label_points",
    "oracle_seven_tuple",
    "relevant_segments",
    "walk_faces",
    "wedge_halfplanes",
]
