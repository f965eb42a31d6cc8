"""Gauge functions, model-domain constants and certified squeezing bounds."""

from .domains import (
    Ball,
    DomainError,
    DVector,
    GeneralizedEllipsoid,
    Point,
    Polydisk,
    Product,
    Sublevel,
    WeightedPowerDomain,
    contains,
    sample_points,
    validate,
)
from .gauge import GaugeResult, d_minkowski_gauge, gauge_of_sublevel, minkowski_gauge, sublevel
from .geometry import GeometricConstants, constants, extremal_radii_oracle
from .invariants import DistanceBound, caratheodory_star_origin, caratheodory_star_sandwich, poincare
from .squeezing import BoundInterval, ellipsoid_example, product_squeezing

__all__ = [
    "Ball",
    "BoundInterval",
    "DistanceBound",
    "DomainError",
    "DVector",
    "GaugeResult",
    "GeneralizedEllipsoid",
    "GeometricConstants",
    "Point",
    "Polydisk",
    "Product",
    "Sublevel",
    "WeightedPowerDomain",
    "caratheodory_star_origin",
    "caratheodory_star_sandwich",
    "constants",
    "contains",
    "d_minkowski_gauge",
    "ellipsoid_example",
    "extremal_radii_oracle",
    "gauge_of_sublevel",
    "minkowski_gauge",
    "poincare",
    "product_squeezing",
    "sample_points",
    "sublevel",
    "validate",
]

__version__ = "0.1.0"
