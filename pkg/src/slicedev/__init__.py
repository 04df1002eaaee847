"""Chain reconfiguration under turn-angle constraints, convex polytope slicing,
and planar development of slice curves."""

__version__ = "0.1.0"
