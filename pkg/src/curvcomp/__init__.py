"""Numerical verification of comparison estimates on weighted rotationally
symmetric spaces: curvature integrals, model-space constants, theorem checkers
and a sweep CLI."""

__version__ = "0.1.0"
