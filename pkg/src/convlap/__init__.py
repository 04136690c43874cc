"""Desk-scale numerical toolkit for Laplace-type contour transforms over
convex sets in the plane, with the convex-duality bookkeeping needed to
state and check their growth classes.

Submodules:
    convexgeom  -- convex bodies, regions, cones, support functions
    legendre    -- piecewise-linear convex functions and conjugation
    contour     -- oriented contours and adaptive path integration
    transforms  -- Polya and Meril contour transforms, residue oracle
    growth      -- exponential growth-class sampling and verdicts
    dolbeault   -- cutoff-based area-integral oracle
    cli         -- scenario runner
"""

from . import convexgeom, legendre, contour, transforms, growth, dolbeault, cli

__all__ = [
    "convexgeom",
    "legendre",
    "contour",
    "transforms",
    "growth",
    "dolbeault",
    "cli",
]

__version__ = "0.1.0"
