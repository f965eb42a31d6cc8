"""Closed-form Caratheodory quantities at the origin of a model domain.

Only ``c* = tanh c`` is returned, never ``c`` itself: ``c*`` stays in
``[0, 1)`` inside the domain, so nothing here touches the singularity of
``atanh`` at 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .domains import DomainError, DomainSpec, Point, contains
from .gauge import DEFAULT_TOL, coerce_d, d_minkowski_gauge

__all__ = [
    "DistanceBound",
    "poincare",
    "poincare_star",
    "ball_caratheodory_star",
    "caratheodory_star_origin",
    "caratheodory_star_sandwich",
]


@dataclass(frozen=True)
class DistanceBound:
    lower: float
    upper: float
    exact: bool = False

    def __post_init__(self):
        if not (0.0 <= self.lower <= self.upper):
            raise ValueError(f"need 0 <= lower <= upper, got [{self.lower!r}, {self.upper!r}]")
        if self.exact and self.lower != self.upper:
            raise ValueError("an exact bound must have lower == upper")

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "exact": self.exact}


def poincare_star(mu1: complex, mu2: complex) -> float:
    """``|mu1 - mu2| / |1 - conj(mu1) mu2|``, the tanh of the Poincare distance."""
    mu1, mu2 = complex(mu1), complex(mu2)
    if not (abs(mu1) < 1.0 and abs(mu2) < 1.0):
        raise DomainError(f"arguments must lie in the open unit disk, got {mu1!r}, {mu2!r}")
    return abs(mu1 - mu2) / abs(1.0 - mu1.conjugate() * mu2)


def poincare(mu1: complex, mu2: complex) -> float:
    """Poincare distance on the unit disk."""
    return math.atanh(poincare_star(mu1, mu2))


def ball_caratheodory_star(radius: float, z: Point) -> float:
    """``c*`` from the origin to ``z`` in the ball of the given radius."""
    return math.sqrt(sum(abs(c) ** 2 for c in z.coords)) / radius


def _require_inside(spec: DomainSpec, z: Point) -> Point:
    if not isinstance(z, Point):
        z = Point(tuple(z))
    if not contains(spec, z):
        raise DomainError("point lies outside the domain")
    return z


def caratheodory_star_origin(spec: DomainSpec, z: Point, *, tol: float = DEFAULT_TOL) -> DistanceBound:
    """``c*(0, z) = h(z)`` on a bounded balanced convex domain."""
    z = _require_inside(spec, z)
    h = d_minkowski_gauge(spec, None, z, tol=tol).value
    return DistanceBound(h, h, exact=True)


def caratheodory_star_sandwich(
    spec: DomainSpec, d, z: Point, *, tol: float = DEFAULT_TOL
) -> DistanceBound:
    """Bounds ``h^L <= c*(0, z) <= h`` on a bounded d-balanced convex domain."""
    z = _require_inside(spec, z)
    d = coerce_d(d, spec.dim)
    h = d_minkowski_gauge(spec, d, z, tol=tol).value
    if d.L == 1:
        return DistanceBound(h, h, exact=True)
    return DistanceBound(h**d.L, h, exact=False)

