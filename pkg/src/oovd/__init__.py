"""Overlaid oriented Voronoi diagrams and optimal 1-Steiner trees."""
__version__ = "0.1.0"
