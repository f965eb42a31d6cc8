"""Minkowski and d-Minkowski gauge functions.

``h_{d,Omega}(z) = inf{t > 0 : (z_1 / t**d_1, ..., z_n / t**d_n) in Omega}``;
with ``d = (1, ..., 1)`` this is the ordinary Minkowski function.

All evaluation is vectorized over rows of an ``(m, n)`` complex array.  Each
family has an ``auto`` route (closed form where one exists, otherwise
bisection on its scalar defining function) and a ``bisection`` route that
only ever queries membership of the scaled point.  The second route is the
independent check for the first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domains import (
    Ball,
    DomainError,
    DomainSpec,
    DVector,
    GeneralizedEllipsoid,
    Point,
    Polydisk,
    Product,
    Sublevel,
    WeightedPowerDomain,
    as_array,
    contains_many,
)

__all__ = [
    "GaugeError",
    "NotDBalancedError",
    "GaugeResult",
    "DEFAULT_TOL",
    "MAX_ITER",
    "minkowski_gauge",
    "d_minkowski_gauge",
    "gauge_array",
    "sublevel",
    "gauge_of_sublevel",
    "coerce_d",
]

DEFAULT_TOL = 1e-12
MAX_ITER = 200
MAX_DOUBLINGS = 1100
EPS = np.finfo(float).eps

CLOSED_FORM = "closed_form"
BISECTION = "bisection"


class GaugeError(ArithmeticError):
    """Root finding failed to reach the requested tolerance."""


class NotDBalancedError(DomainError):
    """Membership of the scaled point is not monotone in the scale."""


@dataclass(frozen=True)
class GaugeResult:
    value: float
    method: str
    residual: float

    def to_dict(self) -> dict:
        return {"value": self.value, "method": self.method, "residual": self.residual}


def coerce_d(d, n: int) -> DVector:
    if d is None:
        return DVector.ones(n)
    if not isinstance(d, DVector):
        d = DVector(tuple(d))
    if d.dim != n:
        raise DomainError(f"exponent tuple has length {d.dim}, domain has dimension {n}")
    return d


# ---------------------------------------------------------------------------
# bracketed bisection
# ---------------------------------------------------------------------------


def _bisect(member, m: int, tol: float, check_monotone: bool = False):
    """Vectorized bisection for ``inf{t > 0 : member(t)}`` per row.

    ``member`` maps an ``(m,)`` array of scales to an ``(m,)`` boolean mask and
    must be monotone (false below the threshold, true above).  Returns the
    bracket midpoints and widths.
    """
    lo = np.full(m, EPS)
    hi = np.ones(m)
    inside = member(hi)
    for _ in range(MAX_DOUBLINGS):
        if inside.all():
            break
        hi = np.where(inside, hi, 2.0 * hi)
        inside = inside | member(hi)
    else:
        raise GaugeError("could not bracket the gauge: scaled point never entered the domain")
    if check_monotone and not (member(2.0 * hi) & member(4.0 * hi)).all():
        raise NotDBalancedError("membership is not monotone along the scaling orbit")

    tiny = member(lo)
    hi = np.where(tiny, lo, hi)
    lo = np.where(tiny, 0.0, lo)
    for _ in range(MAX_ITER):
        active = (hi - lo) > tol * (1.0 + hi)
        if not active.any():
            break
        mid = 0.5 * (lo + hi)
        inm = member(mid)
        hi = np.where(active & inm, mid, hi)
        lo = np.where(active & ~inm, mid, lo)
    else:
        if ((hi - lo) > tol * (1.0 + hi)).any():
            raise GaugeError(
                f"bisection did not reach tolerance {tol:g} within {MAX_ITER} iterations"
            )
    return 0.5 * (lo + hi), hi - lo


def _root_of_decreasing(terms, m: int, tol: float):
    """Solve ``terms(t) = 1`` where ``terms`` decreases from +inf to 0."""
    return _bisect(lambda t: terms(t) < 1.0, m, tol)


# ---------------------------------------------------------------------------
# per-family evaluation
# ---------------------------------------------------------------------------


def _roots(mods: np.ndarray, d: np.ndarray) -> np.ndarray:
    # |z_i|**(1/d_i): every term below is then a power of (root / t)
    return mods ** (1.0 / d)


def _ball(spec: Ball, d: np.ndarray, Z: np.ndarray, tol: float):
    mods = np.abs(Z) / spec.radius
    if np.all(d == 1.0):
        return np.linalg.norm(mods, axis=1), np.zeros(len(Z)), CLOSED_FORM
    u = _roots(mods, d)
    val, res = _root_of_decreasing(
        lambda t: ((u / t[:, None]) ** (2.0 * d)).sum(axis=1), len(Z), tol
    )
    return val, res, BISECTION


def _polydisk(spec: Polydisk, d: np.ndarray, Z: np.ndarray, tol: float):
    u = _roots(np.abs(Z) / np.asarray(spec.radii), d)
    return u.max(axis=1), np.zeros(len(Z)), CLOSED_FORM


def _ellipsoid(spec: GeneralizedEllipsoid, d: np.ndarray, Z: np.ndarray, tol: float):
    m = len(Z)
    u = _roots(np.abs(Z), d)
    value = np.zeros(m)
    residual = np.zeros(m)
    method = CLOSED_FORM

    finite = [(sl, mj) for sl, mj in zip(spec.block_slices, spec.m) if not math.isinf(mj)]
    boxes = [sl for sl, mj in zip(spec.block_slices, spec.m) if math.isinf(mj)]

    for sl in boxes:
        dj = d[sl]
        if np.all(dj == dj[0]):
            v = np.linalg.norm(np.abs(Z[:, sl]), axis=1) ** (1.0 / dj[0])
            r = np.zeros(m)
        else:
            v, r = _root_of_decreasing(
                lambda t, sl=sl, dj=dj: ((u[:, sl] / t[:, None]) ** (2.0 * dj)).sum(axis=1),
                m,
                tol,
            )
            method = BISECTION
        value = np.maximum(value, v)
        residual = np.maximum(residual, r)

    if finite:
        uniform = all(np.all(d[sl] == d[sl][0]) for sl, _ in finite)
        degrees = {d[sl][0] * mj for sl, mj in finite} if uniform else set()
        if uniform and len(degrees) == 1:
            q = degrees.pop()
            total = sum(np.linalg.norm(np.abs(Z[:, sl]), axis=1) ** (2.0 * mj) for sl, mj in finite)
            v = total ** (1.0 / (2.0 * q))
            r = np.zeros(m)
        else:

            def terms(t):
                total = np.zeros(m)
                for sl, mj in finite:
                    block = ((u[:, sl] / t[:, None]) ** (2.0 * d[sl])).sum(axis=1)
                    total += block**mj
                return total

            v, r = _root_of_decreasing(terms, m, tol)
            method = BISECTION
        value = np.maximum(value, v)
        residual = np.maximum(residual, r)
    return value, residual, method


def _weighted(spec: WeightedPowerDomain, d: np.ndarray, Z: np.ndarray, tol: float):
    c = np.asarray(spec.c)
    s = np.asarray(spec.s)
    degree = s * d
    if np.all(degree == degree[0]):
        total = (c * np.abs(Z) ** (2.0 * s)).sum(axis=1)
        return total ** (1.0 / (2.0 * degree[0])), np.zeros(len(Z)), CLOSED_FORM
    u = _roots(np.abs(Z), d)
    val, res = _root_of_decreasing(
        lambda t: (c * (u / t[:, None]) ** (2.0 * degree)).sum(axis=1), len(Z), tol
    )
    return val, res, BISECTION


def _by_membership(spec: DomainSpec, d: np.ndarray, Z: np.ndarray, tol: float):
    val, res = _bisect(
        lambda t: contains_many(spec, Z / t[:, None] ** d), len(Z), tol, check_monotone=True
    )
    return val, res, BISECTION


def _evaluate(spec: DomainSpec, d: np.ndarray, Z: np.ndarray, tol: float, method: str):
    if method == BISECTION or isinstance(spec, Sublevel):
        return _by_membership(spec, d, Z, tol)
    if isinstance(spec, Ball):
        return _ball(spec, d, Z, tol)
    if isinstance(spec, Polydisk):
        return _polydisk(spec, d, Z, tol)
    if isinstance(spec, GeneralizedEllipsoid):
        return _ellipsoid(spec, d, Z, tol)
    if isinstance(spec, WeightedPowerDomain):
        return _weighted(spec, d, Z, tol)
    if isinstance(spec, Product):
        value = np.zeros(len(Z))
        residual = np.zeros(len(Z))
        kinds = set()
        start = 0
        for f in spec.factors:
            sl = slice(start, start + f.dim)
            v, r, k = _evaluate(f, d[sl], Z[:, sl], tol, method)
            value = np.maximum(value, v)
            residual = np.maximum(residual, r)
            kinds.add(k)
            start += f.dim
        return value, residual, BISECTION if BISECTION in kinds else CLOSED_FORM
    raise DomainError(f"not a domain spec: {spec!r}")


def gauge_array(
    spec: DomainSpec,
    d,
    Z,
    *,
    tol: float = DEFAULT_TOL,
    method: str = "auto",
) -> tuple[np.ndarray, np.ndarray, str]:
    """Evaluate ``h_{d,spec}`` on every row of ``Z``.

    Returns ``(values, residuals, method)`` where a residual is the final
    bisection bracket width (0 for closed forms).  ``method="bisection"``
    forces the membership-only route.
    """
    if method not in ("auto", BISECTION):
        raise ValueError(f"method must be 'auto' or 'bisection', got {method!r}")
    if not tol > 0:
        raise GaugeError(f"tolerance must be positive, got {tol!r}")
    Z = as_array(Z, spec.dim)
    d = coerce_d(d, spec.dim).as_array()
    values = np.zeros(len(Z))
    residuals = np.zeros(len(Z))
    nonzero = np.any(Z != 0, axis=1)
    kind = CLOSED_FORM
    if nonzero.any():
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            v, r, kind = _evaluate(spec, d, Z[nonzero], tol, method)
        values[nonzero] = v
        residuals[nonzero] = r
    return values, residuals, kind


def d_minkowski_gauge(
    spec: DomainSpec,
    d,
    z: Point,
    *,
    tol: float = DEFAULT_TOL,
    method: str = "auto",
) -> GaugeResult:
    """``h_{d,spec}(z)``; ``d=None`` means all ones."""
    if not isinstance(z, Point):
        z = Point(tuple(z))
    if z.dim != spec.dim:
        raise DomainError(f"point dimension {z.dim} does not match domain dimension {spec.dim}")
    if not any(z.coords):
        return GaugeResult(0.0, CLOSED_FORM, 0.0)
    values, residuals, kind = gauge_array(spec, d, z.to_array(), tol=tol, method=method)
    return GaugeResult(float(values[0]), kind, float(residuals[0]))


def minkowski_gauge(
    spec: DomainSpec, z: Point, *, tol: float = DEFAULT_TOL, method: str = "auto"
) -> GaugeResult:
    """``h_spec(z) = inf{t > 0 : z / t in spec}``."""
    return d_minkowski_gauge(spec, None, z, tol=tol, method=method)


def sublevel(spec: DomainSpec, d, r: float) -> Sublevel:
    """The set ``{z : h_{d,spec}(z) < r}`` as a domain spec."""
    return Sublevel(spec, r, coerce_d(d, spec.dim))


def gauge_of_sublevel(
    spec: DomainSpec,
    d,
    r: float,
    z: Point,
    *,
    tol: float = DEFAULT_TOL,
    cross_check: bool = True,
    check_tol: float = 1e-8,
) -> GaugeResult:
    """Gauge of the sublevel set ``spec^d(r)`` at ``z``, computed as ``h/r``.

    With ``cross_check`` the value is compared against bisection directly on
    the sublevel domain and a :class:`GaugeError` is raised on mismatch.
    """
    target = sublevel(spec, d, r)
    base = d_minkowski_gauge(spec, d, z, tol=tol)
    result = GaugeResult(base.value / r, base.method, base.residual / r)
    if cross_check:
        direct = d_minkowski_gauge(target, d, z, tol=tol)
        if abs(direct.value - result.value) > check_tol * max(1.0, result.value):
            raise GaugeError(
                f"sublevel gauge {result.value!r} disagrees with direct bisection {direct.value!r}"
            )
    return result
