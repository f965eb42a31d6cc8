"""Inradius, half-diameter and the derived constants of a model domain.

For a balanced domain the boundary point in the unit direction ``u`` is
``u / h(u)``, so

    alpha = min_{|u|=1} 1 / h(u),     R = max_{|u|=1} 1 / h(u).

The second identity uses central symmetry: a balanced domain contains
``-z`` with ``z``, so its diameter is twice its largest norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domains import (
    Ball,
    DomainError,
    DomainSpec,
    GeneralizedEllipsoid,
    Polydisk,
    Product,
    Sublevel,
    WeightedPowerDomain,
)
from .gauge import coerce_d, gauge_array

__all__ = [
    "GeometricConstants",
    "constants",
    "analytic_radii",
    "bounding_radius",
    "extremal_radii_oracle",
    "DEFAULT_DIRECTIONS",
]

DEFAULT_DIRECTIONS = 100_000
ANALYTIC = "analytic"
SAMPLED = "sampled"

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_CHUNK = 20_000


@dataclass(frozen=True)
class GeometricConstants:
    alpha: float
    R: float
    P: float
    L: int
    method: str

    def __post_init__(self):
        if not (0 < self.alpha <= self.R * (1 + 1e-12)):
            raise DomainError(f"need 0 < alpha <= R, got alpha={self.alpha!r}, R={self.R!r}")
        if self.L < 1:
            raise DomainError(f"L must be at least 1, got {self.L!r}")

    @classmethod
    def build(cls, alpha: float, R: float, L: int = 1, method: str = ANALYTIC):
        return cls(float(alpha), float(R), float(R) + 1.0, int(L), method)

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "R": self.R, "P": self.P, "L": self.L, "method": self.method}


def analytic_radii(spec: DomainSpec) -> tuple[float, float] | None:
    """Closed-form ``(alpha, R)`` where known, else ``None``."""
    if isinstance(spec, Ball):
        return spec.radius, spec.radius
    if isinstance(spec, Polydisk):
        return min(spec.radii), math.hypot(*spec.radii)
    if isinstance(spec, GeneralizedEllipsoid):
        m = spec.m
        if all(math.isinf(x) for x in m):
            return 1.0, math.sqrt(spec.k)
        if len(set(m)) == 1 and m[0] >= 1.0:
            # power mean inequality: max of sum x_j^2 on sum x_j^(2m) = 1
            return 1.0, spec.k ** ((m[0] - 1.0) / (2.0 * m[0]))
        return None
    if isinstance(spec, WeightedPowerDomain):
        if all(s == 1.0 for s in spec.s):
            return 1.0 / math.sqrt(max(spec.c)), 1.0 / math.sqrt(min(spec.c))
        return None
    if isinstance(spec, Product):
        parts = [analytic_radii(f) for f in spec.factors]
        if any(p is None for p in parts):
            return None
        return min(a for a, _ in parts), math.hypot(*(r for _, r in parts))
    if isinstance(spec, Sublevel):
        if not spec.d.is_balanced:
            return None
        base = analytic_radii(spec.base)
        if base is None:
            return None
        return spec.level * base[0], spec.level * base[1]
    raise DomainError(f"not a domain spec: {spec!r}")


def bounding_radius(spec: DomainSpec) -> float:
    """Radius of a centred ball containing ``spec`` (not necessarily tight)."""
    exact = analytic_radii(spec)
    if exact is not None:
        return exact[1]
    if isinstance(spec, GeneralizedEllipsoid):
        # every block, finite exponent or not, satisfies ||z_j|| < 1
        return math.sqrt(spec.k)
    if isinstance(spec, WeightedPowerDomain):
        return math.hypot(*(c ** (-1.0 / (2.0 * s)) for c, s in zip(spec.c, spec.s)))
    if isinstance(spec, Product):
        return math.hypot(*(bounding_radius(f) for f in spec.factors))
    if isinstance(spec, Sublevel):
        # z_i = level**d_i w_i with w in base, and level**d_i <= level
        return spec.level * bounding_radius(spec.base)
    raise DomainError(f"not a domain spec: {spec!r}")


# ---------------------------------------------------------------------------
# sampling oracle
# ---------------------------------------------------------------------------


def _unit_directions(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    g = rng.standard_normal((count, 2 * n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g[:, :n] + 1j * g[:, n:]


def _radial(spec: DomainSpec, U: np.ndarray) -> np.ndarray:
    """Distance from 0 to the boundary along each unit row of ``U``."""
    h, _, _ = gauge_array(spec, None, U)
    return 1.0 / h


def _tangents(u: np.ndarray) -> np.ndarray:
    """Unit tangent vectors at ``u`` pointing towards each rotated axis."""
    phase = np.where(np.abs(u) > 0, u / np.where(u == 0, 1, np.abs(u)), 1.0)
    cands = np.concatenate([np.diag(phase), 1j * np.diag(phase)])
    cands = cands - np.outer(cands @ u.conj(), u)
    norms = np.linalg.norm(cands, axis=1)
    keep = norms > 1e-9
    return cands[keep] / norms[keep, None]


def _refine(spec: DomainSpec, u: np.ndarray, best: float, sign: float,
            sweeps: int = 60, iters: int = 60) -> float:
    """Coordinate-wise golden-section search along great circles.

    ``sign=+1`` minimizes the radial function, ``-1`` maximizes it.  Only
    values actually evaluated are returned, so the result stays on the
    feasible side of the true extremum.
    """
    f_best = sign * best
    for _ in range(sweeps):
        V = _tangents(u)
        if len(V) == 0:
            break
        m = len(V)
        a = np.full(m, -math.pi / 2)
        b = np.full(m, math.pi / 2)

        def f(theta):
            pts = np.cos(theta)[:, None] * u[None, :] + np.sin(theta)[:, None] * V
            return sign * _radial(spec, pts), pts

        x1 = b - _GOLDEN * (b - a)
        x2 = a + _GOLDEN * (b - a)
        f1, p1 = f(x1)
        f2, p2 = f(x2)
        cand_val = np.minimum(f1, f2)
        cand_pts = np.where((f1 <= f2)[:, None], p1, p2)
        for _ in range(iters):
            left = f1 <= f2
            b = np.where(left, x2, b)
            a = np.where(left, a, x1)
            nx1 = np.where(left, b - _GOLDEN * (b - a), x2)
            nx2 = np.where(left, x1, a + _GOLDEN * (b - a))
            fnew, pnew = f(np.where(left, nx1, nx2))
            f1, f2 = np.where(left, fnew, f2), np.where(left, f1, fnew)
            x1, x2 = nx1, nx2
            better = fnew < cand_val
            cand_val = np.where(better, fnew, cand_val)
            cand_pts = np.where(better[:, None], pnew, cand_pts)
        i = int(np.argmin(cand_val))
        if cand_val[i] >= f_best - 1e-15 * abs(f_best):
            break
        f_best = float(cand_val[i])
        u = cand_pts[i] / np.linalg.norm(cand_pts[i])
    return sign * f_best


def extremal_radii_oracle(
    spec: DomainSpec, directions: int = DEFAULT_DIRECTIONS, seed: int = 0, *, refine: bool = True
) -> tuple[float, float]:
    """Estimate ``(alpha, R)`` from random unit directions.

    The minimum and maximum of ``1 / h(u)`` over evaluated directions bound
    the true values from the inside: ``alpha_est >= alpha`` and
    ``R_est <= R``.
    """
    directions = int(directions)
    if directions < 1:
        raise ValueError("need at least one direction")
    rng = np.random.default_rng(seed)
    n = spec.dim
    lo = (math.inf, None)
    hi = (-math.inf, None)
    remaining = directions
    while remaining:
        size = min(_CHUNK, remaining)
        U = _unit_directions(rng, size, n)
        rho = _radial(spec, U)
        i, j = int(np.argmin(rho)), int(np.argmax(rho))
        if rho[i] < lo[0]:
            lo = (float(rho[i]), U[i])
        if rho[j] > hi[0]:
            hi = (float(rho[j]), U[j])
        remaining -= size
    alpha_est, R_est = lo[0], hi[0]
    if refine and n > 1:
        alpha_est = _refine(spec, lo[1], alpha_est, +1.0)
        R_est = _refine(spec, hi[1], R_est, -1.0)
    return alpha_est, R_est


def constants(
    spec: DomainSpec,
    d=None,
    *,
    oracle_directions: int = DEFAULT_DIRECTIONS,
    seed: int = 0,
    force_oracle: bool = False,
) -> GeometricConstants:
    """``alpha``, ``R``, ``P = R + 1`` and ``L = max d_i`` for a model domain.

    Analytic values are used when available; otherwise (or with
    ``force_oracle``) the direction-sampling oracle supplies them and the
    result is flagged ``method="sampled"``.
    """
    d = coerce_d(d, spec.dim)
    exact = None if force_oracle else analytic_radii(spec)
    if exact is not None:
        return GeometricConstants.build(exact[0], exact[1], d.L, ANALYTIC)
    alpha, R = extremal_radii_oracle(spec, oracle_directions, seed)
    return GeometricConstants.build(alpha, R, d.L, SAMPLED)
