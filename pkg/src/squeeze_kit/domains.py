"""Declarative bounded domains in C^n: specs, validation, membership, sampling.

Every family here is a complete Reinhardt domain: membership depends only on
the coordinate moduli and is monotone in each of them.  Such a domain is
balanced and d-balanced for every exponent tuple d, and all variants below
are convex under their parameter constraints.

Infinite exponents in a generalized ellipsoid are stored as ``math.inf``.
Those blocks do not enter the defining sum; each one instead contributes
the box constraint ``||z_j|| < 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

__all__ = [
    "DomainError",
    "SamplingError",
    "Point",
    "DVector",
    "Ball",
    "Polydisk",
    "GeneralizedEllipsoid",
    "WeightedPowerDomain",
    "Product",
    "Sublevel",
    "DomainSpec",
    "validate",
    "contains",
    "contains_many",
    "sample_points",
    "sample_array",
    "as_array",
    "is_homogeneous",
    "is_product_of_balls",
    "ball_blocks",
]

# per requested point
MAX_ATTEMPTS_PER_POINT = 10**6


class DomainError(ValueError):
    """Malformed domain spec, point or exponent tuple."""


class SamplingError(RuntimeError):
    """Rejection sampler exhausted its attempt budget."""


def _finite_positive(values: Iterable[float], what: str) -> tuple[float, ...]:
    out = tuple(float(v) for v in values)
    for v in out:
        if not (math.isfinite(v) and v > 0):
            raise DomainError(f"{what} must be finite and positive, got {v!r}")
    return out


# ---------------------------------------------------------------------------
# points and exponent tuples
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Point:
    """A point of C^n, optionally split into coordinate blocks."""

    coords: tuple[complex, ...]
    block_sizes: tuple[int, ...] | None = None

    def __post_init__(self):
        coords = tuple(complex(c) for c in self.coords)
        if not coords:
            raise DomainError("a point needs at least one coordinate")
        for c in coords:
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise DomainError(f"non-finite coordinate {c!r}")
        object.__setattr__(self, "coords", coords)
        if self.block_sizes is not None:
            blocks = tuple(int(b) for b in self.block_sizes)
            if any(b < 1 for b in blocks) or sum(blocks) != len(coords):
                raise DomainError(
                    f"block sizes {blocks} do not partition {len(coords)} coordinates"
                )
            object.__setattr__(self, "block_sizes", blocks)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def to_array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=complex)

    @classmethod
    def origin(cls, n: int) -> Point:
        return cls((0j,) * n)

    def scaled(self, lam: complex, d: DVector | None = None) -> Point:
        """Return ``(lam**d_1 z_1, ..., lam**d_n z_n)``."""
        exps = (1,) * self.dim if d is None else d.exponents
        return Point(
            tuple(lam**e * c for e, c in zip(exps, self.coords)), self.block_sizes
        )


@dataclass(frozen=True)
class DVector:
    """Positive integer exponents ``d = (d_1, ..., d_n)``."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(self.exponents)
        if not exps:
            raise DomainError("exponent tuple must be nonempty")
        for e in exps:
            if isinstance(e, bool) or int(e) != e or int(e) < 1:
                raise DomainError(f"exponents must be positive integers, got {e!r}")
        object.__setattr__(self, "exponents", tuple(int(e) for e in exps))

    @classmethod
    def ones(cls, n: int) -> DVector:
        return cls((1,) * n)

    @property
    def L(self) -> int:
        return max(self.exponents)

    @property
    def dim(self) -> int:
        return len(self.exponents)

    @property
    def is_balanced(self) -> bool:
        return all(e == 1 for e in self.exponents)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.exponents, dtype=float)

    def split(self, sizes: Sequence[int]) -> list[DVector]:
        out, start = [], 0
        for s in sizes:
            out.append(DVector(self.exponents[start : start + s]))
            start += s
        return out


# ---------------------------------------------------------------------------
# domain variants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ball:
    """Euclidean ball of radius ``radius`` about the origin of C^n."""

    n: int
    radius: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"ball dimension must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "radius", _finite_positive([self.radius], "radius")[0])

    @property
    def dim(self) -> int:
        return self.n


@dataclass(frozen=True)
class Polydisk:
    radii: tuple[float, ...]

    def __post_init__(self):
        if len(self.radii) == 0:
            raise DomainError("polydisk needs at least one radius")
        object.__setattr__(self, "radii", _finite_positive(self.radii, "radius"))

    @property
    def dim(self) -> int:
        return len(self.radii)


@dataclass(frozen=True)
class GeneralizedEllipsoid:
    """``E(p, m) = {sum_j ||z_j||^(2 m_j) < 1}`` over blocks of sizes ``p``.

    Blocks with ``m_j = inf`` are box constraints ``||z_j|| < 1``.
    """

    p: tuple[int, ...]
    m: tuple[float, ...]

    def __post_init__(self):
        p = tuple(self.p)
        m = tuple(float(x) for x in self.m)
        if not p or len(p) != len(m):
            raise DomainError(f"block sizes {p} and exponents {m} must have equal nonzero length")
        for b in p:
            if isinstance(b, bool) or int(b) != b or b < 1:
                raise DomainError(f"block sizes must be positive integers, got {b!r}")
        for x in m:
            if math.isnan(x) or x < 0.5:
                raise DomainError(f"ellipsoid exponents must lie in [1/2, inf], got {x!r}")
        object.__setattr__(self, "p", tuple(int(b) for b in p))
        object.__setattr__(self, "m", m)

    @property
    def dim(self) -> int:
        return sum(self.p)

    @property
    def k(self) -> int:
        return len(self.p)

    @property
    def block_slices(self) -> list[slice]:
        out, start = [], 0
        for b in self.p:
            out.append(slice(start, start + b))
            start += b
        return out


@dataclass(frozen=True)
class WeightedPowerDomain:
    """``{sum_i c_i |z_i|^(2 s_i) < 1}``."""

    c: tuple[float, ...]
    s: tuple[float, ...]

    def __post_init__(self):
        if not self.c or len(self.c) != len(self.s):
            raise DomainError("weights and powers must have equal nonzero length")
        object.__setattr__(self, "c", _finite_positive(self.c, "weight"))
        s = tuple(float(x) for x in self.s)
        for x in s:
            if not math.isfinite(x) or x < 0.5:
                raise DomainError(f"powers must be finite and at least 1/2, got {x!r}")
        object.__setattr__(self, "s", s)

    @property
    def dim(self) -> int:
        return len(self.c)


@dataclass(frozen=True)
class Product:
    """Cartesian product; factors occupy consecutive coordinate blocks."""

    factors: tuple[DomainSpec, ...]

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise DomainError("product needs at least one factor")
        for f in factors:
            if not isinstance(f, _VARIANTS):
                raise DomainError(f"product factor is not a domain spec: {f!r}")
        object.__setattr__(self, "factors", factors)

    @property
    def dim(self) -> int:
        return sum(f.dim for f in self.factors)

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(f.dim for f in self.factors)


@dataclass(frozen=True)
class Sublevel:
    """``{z : h_{d,base}(z) < level}``."""

    base: DomainSpec
    level: float
    d: DVector

    def __post_init__(self):
        if not isinstance(self.base, _VARIANTS):
            raise DomainError(f"sublevel base is not a domain spec: {self.base!r}")
        level = float(self.level)
        if not (0.0 < level <= 1.0):
            raise DomainError(f"sublevel level must lie in (0, 1], got {self.level!r}")
        object.__setattr__(self, "level", level)
        d = self.d if isinstance(self.d, DVector) else DVector(tuple(self.d))
        if d.dim != self.base.dim:
            raise DomainError(
                f"exponent tuple has length {d.dim}, base domain has dimension {self.base.dim}"
            )
        object.__setattr__(self, "d", d)

    @property
    def dim(self) -> int:
        return self.base.dim


_VARIANTS = (Ball, Polydisk, GeneralizedEllipsoid, WeightedPowerDomain, Product, Sublevel)
DomainSpec = Union[Ball, Polydisk, GeneralizedEllipsoid, WeightedPowerDomain, Product, Sublevel]


# ---------------------------------------------------------------------------
# validation / normalization
# ---------------------------------------------------------------------------


def validate(spec: DomainSpec) -> DomainSpec:
    """Return ``spec`` in normal form, raising :class:`DomainError` if malformed.

    Field constraints are enforced when a spec is constructed; this pass
    recurses into composite specs and rewrites generalized ellipsoids that
    are really a ball (all exponents 1) or a unit polydisk (all exponents
    infinite, all blocks of size 1).
    """
    if not isinstance(spec, _VARIANTS):
        raise DomainError(f"not a domain spec: {spec!r}")
    if isinstance(spec, GeneralizedEllipsoid):
        if all(x == 1.0 for x in spec.m):
            return Ball(spec.dim, 1.0)
        if all(math.isinf(x) for x in spec.m) and all(b == 1 for b in spec.p):
            return Polydisk((1.0,) * spec.dim)
        return spec
    if isinstance(spec, Product):
        return Product(tuple(validate(f) for f in spec.factors))
    if isinstance(spec, Sublevel):
        return Sublevel(validate(spec.base), spec.level, spec.d)
    return spec


def is_homogeneous(spec: DomainSpec) -> bool:
    """Whether ``spec`` is declared homogeneous (automorphism group transitive).

    Declared for balls, polydisks, ``E(p, inf)`` and products of these.
    Unknown cases report ``False``.
    """
    if isinstance(spec, (Ball, Polydisk)):
        return True
    if isinstance(spec, GeneralizedEllipsoid):
        return all(math.isinf(x) for x in spec.m) or all(x == 1.0 for x in spec.m)
    if isinstance(spec, Product):
        return all(is_homogeneous(f) for f in spec.factors)
    if isinstance(spec, Sublevel):
        # Omega(r) of a balanced domain is a dilate of it
        return spec.d.is_balanced and is_homogeneous(spec.base)
    return False


def ball_blocks(spec: DomainSpec) -> tuple[int, ...] | None:
    """Block sizes if ``spec`` is a product of Euclidean balls, else ``None``.

    A single ball counts as a product with one factor.
    """
    if isinstance(spec, Ball):
        return (spec.n,)
    if isinstance(spec, Polydisk):
        return (1,) * spec.dim
    if isinstance(spec, GeneralizedEllipsoid):
        if all(math.isinf(x) for x in spec.m):
            return spec.p
        if all(x == 1.0 for x in spec.m):
            return (spec.dim,)
        return None
    if isinstance(spec, Product):
        out: list[int] = []
        for f in spec.factors:
            sub = ball_blocks(f)
            if sub is None:
                return None
            out.extend(sub)
        return tuple(out)
    return None


def is_product_of_balls(spec: DomainSpec) -> bool:
    return ball_blocks(spec) is not None


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------


def as_array(z, n: int | None = None) -> np.ndarray:
    """Coerce a point, a sequence of points or an array to shape ``(m, n)``."""
    if isinstance(z, Point):
        arr = z.to_array()[None, :]
    elif isinstance(z, (list, tuple)) and z and isinstance(z[0], Point):
        arr = np.stack([p.to_array() for p in z])
    else:
        arr = np.asarray(z, dtype=complex)
        if arr.ndim == 1:
            arr = arr[None, :]
    if arr.ndim != 2:
        raise DomainError(f"points must form a 2-d array, got shape {arr.shape}")
    if n is not None and arr.shape[1] != n:
        raise DomainError(f"point dimension {arr.shape[1]} does not match domain dimension {n}")
    return arr


def _check_blocks(spec: DomainSpec, z: Point) -> None:
    if z.block_sizes is None:
        return
    expected = None
    if isinstance(spec, Product):
        expected = spec.block_sizes
    elif isinstance(spec, GeneralizedEllipsoid):
        expected = spec.p
    if expected is not None and tuple(z.block_sizes) != tuple(expected):
        raise DomainError(f"point blocks {z.block_sizes} do not match domain blocks {expected}")


def contains_many(spec: DomainSpec, Z) -> np.ndarray:
    """Vectorized open-domain membership for the rows of ``Z``."""
    Z = as_array(Z, spec.dim)
    with np.errstate(over="ignore", invalid="ignore"):
        return _contains(spec, Z)


def _contains(spec: DomainSpec, Z: np.ndarray) -> np.ndarray:
    mod2 = Z.real**2 + Z.imag**2
    if isinstance(spec, Ball):
        return mod2.sum(axis=1) < spec.radius**2
    if isinstance(spec, Polydisk):
        return np.all(np.abs(Z) < np.asarray(spec.radii), axis=1)
    if isinstance(spec, GeneralizedEllipsoid):
        inside = np.ones(Z.shape[0], dtype=bool)
        total = np.zeros(Z.shape[0])
        finite = False
        for sl, m in zip(spec.block_slices, spec.m):
            block = mod2[:, sl].sum(axis=1)
            if math.isinf(m):
                inside &= block < 1.0
            else:
                finite = True
                total += block**m
        if finite:
            inside &= total < 1.0
        return inside
    if isinstance(spec, WeightedPowerDomain):
        c = np.asarray(spec.c)
        s = np.asarray(spec.s)
        return (c * mod2**s).sum(axis=1) < 1.0
    if isinstance(spec, Product):
        inside = np.ones(Z.shape[0], dtype=bool)
        start = 0
        for f in spec.factors:
            inside &= _contains(f, Z[:, start : start + f.dim])
            start += f.dim
        return inside
    if isinstance(spec, Sublevel):
        from .gauge import gauge_array

        values, _, _ = gauge_array(spec.base, spec.d, Z)
        return values < spec.level
    raise DomainError(f"not a domain spec: {spec!r}")


def contains(spec: DomainSpec, z: Point) -> bool:
    """True iff ``z`` lies in the open domain."""
    if not isinstance(z, Point):
        z = Point(tuple(z))
    if z.dim != spec.dim:
        raise DomainError(f"point dimension {z.dim} does not match domain dimension {spec.dim}")
    _check_blocks(spec, z)
    return bool(contains_many(spec, z.to_array()[None, :])[0])


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def _uniform_ball(rng: np.random.Generator, count: int, n: int, radius: float) -> np.ndarray:
    g = rng.standard_normal((count, 2 * n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    g *= radius * rng.random((count, 1)) ** (1.0 / (2 * n))
    return g[:, :n] + 1j * g[:, n:]


def sample_array(spec: DomainSpec, count: int, seed: int) -> np.ndarray:
    """Rejection-sample ``count`` points of ``spec`` as a ``(count, n)`` array.

    Proposals are uniform in the bounding ball centred at the origin, so the
    accepted points are uniform in the domain.
    """
    from .geometry import bounding_radius

    count = int(count)
    if count < 0:
        raise DomainError(f"sample count must be nonnegative, got {count}")
    n = spec.dim
    if count == 0:
        return np.zeros((0, n), dtype=complex)
    rng = np.random.default_rng(seed)
    radius = bounding_radius(spec)
    budget = MAX_ATTEMPTS_PER_POINT * count
    batch = max(64, 2 * count)
    chunks: list[np.ndarray] = []
    have = attempts = 0
    while have < count:
        if attempts >= budget:
            rate = have / attempts
            raise SamplingError(
                f"accepted {have} of {attempts} proposals (rate {rate:.3g}); "
                f"cannot produce {count} points within the attempt cap"
            )
        size = min(batch, budget - attempts)
        proposal = _uniform_ball(rng, size, n, radius)
        attempts += size
        accepted = proposal[contains_many(spec, proposal)]
        chunks.append(accepted)
        have += accepted.shape[0]
        if accepted.shape[0] < size // 4:
            batch = min(batch * 4, 1 << 20)
    return np.concatenate(chunks)[:count]


def sample_points(spec: DomainSpec, count: int, seed: int) -> list[Point]:
    """``count`` points drawn uniformly from ``spec``; deterministic in ``seed``."""
    blocks = None
    if isinstance(spec, Product):
        blocks = spec.block_sizes
    elif isinstance(spec, GeneralizedEllipsoid):
        blocks = spec.p
    return [Point(tuple(row), blocks) for row in sample_array(spec, count, seed)]
