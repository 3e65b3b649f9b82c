"""Geometry of a pair of points: separation, connecting direction, midpoint.

Every d-dimensional coupling in this package works in the coordinate system
defined by the unit vector e pointing from x to y and its orthogonal
complement.  Only rank-1 projections are needed, so everything here is plain
vector arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePairError, DimensionMismatchError, DomainError

__all__ = ["PairGeometry", "as_point", "pair_geometry", "project", "reflect"]


def as_point(z, name: str = "point") -> np.ndarray:
    """Validate and return z as a 1-d float64 array."""
    arr = np.asarray(z, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise DimensionMismatchError(f"{name} must be a 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite coordinates")
    return arr


@dataclass(frozen=True)
class PairGeometry:
    """Decomposition of a state pair (x, y) with x != y.

    r is the Euclidean separation, e the unit vector from x to y, m the
    midpoint, m1 its e-component, and m_perp its component orthogonal to e.
    """

    r: float
    e: np.ndarray
    m: np.ndarray
    m1: float
    m_perp: np.ndarray


def pair_geometry(x: np.ndarray, y: np.ndarray) -> PairGeometry:
    """Compute (r, e, m) for the pair.  Raises DegeneratePairError if x == y."""
    if x.shape != y.shape:
        raise DimensionMismatchError(f"shapes {x.shape} and {y.shape} differ")
    diff = y - x
    r = math.sqrt(np.dot(diff, diff))
    if r == 0.0:
        raise DegeneratePairError("pair has zero separation; take the sticky branch instead")
    e = diff / r
    m = 0.5 * (x + y)
    m1 = float(np.dot(e, m))
    m_perp = m - m1 * e
    return PairGeometry(r=r, e=e, m=m, m1=m1, m_perp=m_perp)


def project(z: np.ndarray, e: np.ndarray) -> tuple[float, np.ndarray]:
    """Split z into its e-component z1 and the remainder orthogonal to e."""
    if z.shape != e.shape:
        raise DimensionMismatchError(f"shapes {z.shape} and {e.shape} differ")
    z1 = float(np.dot(e, z))
    return z1, z - z1 * e


def reflect(xi: np.ndarray, e: np.ndarray) -> np.ndarray:
    """Reflect xi across the hyperplane orthogonal to e (negates the
    e-component, fixes the rest)."""
    if xi.shape != e.shape:
        raise DimensionMismatchError(f"shapes {xi.shape} and {e.shape} differ")
    return xi - (2.0 * np.dot(e, xi)) * e
