"""Command line, instance files, JSON/CSV output and drawings."""
from .instances import InstanceSpec, format_points, gen_points, read_points, write_points

__all__ = ["InstanceSpec", "gen_points", "read_points", "write_points", "format_points"]
