"""Certified interval bounds for squeezing functions.

A :class:`BoundInterval` is what is known about one squeezing value: a
lower and an upper end in ``[0, 1]`` plus the ordered list of rules that
produced them.  The transfer rules are one-sided inequalities, so they only
ever raise lower ends.  Upper ends come exclusively from exact values (the
ball, the product formula, the extremal bound for products of balls).

Rule names form a closed vocabulary (:data:`RULES`) and are written into
every serialized result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .domains import (
    Ball,
    DomainError,
    DomainSpec,
    GeneralizedEllipsoid,
    Point,
    Product,
    ball_blocks,
    is_homogeneous,
    validate,
)
from .geometry import GeometricConstants, constants
from .gauge import coerce_d

__all__ = [
    "RULES",
    "Step",
    "BoundInterval",
    "exact_ball_squeezing",
    "product_squeezing",
    "known_squeezing",
    "prop21_forward",
    "prop21_backward",
    "cor23_transfer",
    "prop32_forward",
    "prop32_backward",
    "cor33_transfer",
    "thm35_transfer",
    "lemma41_upper",
    "ellipsoid_example",
    "derive_bounds",
]

RULES = (
    "Prop2.1(1)",
    "Prop2.1(2)",
    "Cor2.3(1)",
    "Cor2.3(2)",
    "Prop3.2(1)",
    "Prop3.2(2)",
    "Cor3.3(1)",
    "Cor3.3(2)",
    "Thm3.5(1)",
    "Thm3.5(2)",
    "exact_ball",
    "product_formula",
    "lemma4.1_upper",
    "paper_example",
)


@dataclass(frozen=True)
class Step:
    rule: str
    inputs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}")

    def to_dict(self) -> dict:
        return {"rule": self.rule, "inputs": dict(self.inputs)}


@dataclass(frozen=True)
class BoundInterval:
    lower: float = 0.0
    upper: float = 1.0
    provenance: tuple[Step, ...] = ()

    def __post_init__(self):
        if not (0.0 <= self.lower <= self.upper <= 1.0):
            raise ValueError(
                f"squeezing interval must satisfy 0 <= lower <= upper <= 1, "
                f"got [{self.lower!r}, {self.upper!r}]"
            )
        object.__setattr__(self, "provenance", tuple(self.provenance))

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def meet(self, other: BoundInterval) -> BoundInterval:
        """Intersection of two certified intervals for the same quantity."""
        lower = max(self.lower, other.lower)
        upper = min(self.upper, other.upper)
        if lower > upper:
            raise ValueError(f"inconsistent bounds: [{lower!r}, {upper!r}]")
        return BoundInterval(lower, upper, self.provenance + other.provenance)

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "provenance": [s.to_dict() for s in self.provenance],
        }


def _const_inputs(k: GeometricConstants) -> dict:
    return {"alpha": k.alpha, "R": k.R, "P": k.P, "L": k.L}


def _scaled(num: float, den: float, s: float) -> float:
    # one place for the arithmetic so compositions agree bit for bit
    return (num / den) * s


def _raise_lower(source: BoundInterval, value: float, prior: BoundInterval | None, step: Step):
    prior = prior if prior is not None else BoundInterval()
    # raises if the new lower end crosses a certified upper end
    provenance = prior.provenance + source.provenance + (step,)
    return BoundInterval(max(prior.lower, value), prior.upper, provenance)


# ---------------------------------------------------------------------------
# exact values
# ---------------------------------------------------------------------------


def exact_ball_squeezing(z: Point | None = None) -> BoundInterval:
    """The unit ball is homogeneous with squeezing function identically 1."""
    inputs = {}
    if z is not None:
        if not isinstance(z, Point):
            z = Point(tuple(z))
        if sum(abs(c) ** 2 for c in z.coords) >= 1.0:
            raise DomainError("point lies outside the unit ball")
        inputs["n"] = z.dim
    return BoundInterval(1.0, 1.0, (Step("exact_ball", inputs),))


def _product_value(values: Sequence[float]) -> float:
    if any(v == 0.0 for v in values):
        return 0.0
    return 1.0 / math.sqrt(sum(v**-2 for v in values))


def product_squeezing(values: Sequence[BoundInterval]) -> BoundInterval:
    """``(sum_i S_i^-2)^(-1/2)`` for a product domain, applied endpoint-wise."""
    values = list(values)
    if not values:
        raise ValueError("product formula needs at least one factor")
    lower = _product_value([v.lower for v in values])
    upper = _product_value([v.upper for v in values])
    prov: tuple[Step, ...] = ()
    for v in values:
        prov += v.provenance
    step = Step("product_formula", {"k": len(values)})
    return BoundInterval(lower, upper, prov + (step,))


def known_squeezing(target: DomainSpec) -> BoundInterval:
    """Exact standard squeezing value where one is known, else ``[0, 1]``.

    Balls give 1; products of balls give ``1/sqrt(k)`` through the product
    formula.  Both are invariant under dilation of the factors.
    """
    blocks = ball_blocks(validate(target))
    if blocks is None:
        return BoundInterval()
    if len(blocks) == 1:
        return exact_ball_squeezing()
    return product_squeezing([exact_ball_squeezing() for _ in blocks])


def lemma41_upper(k: int) -> BoundInterval:
    """Upper bound ``1/sqrt(k)`` for the ball squeezed into ``E(p, inf)``.

    Numerically this is the product formula over ``k`` unit-ball factors.
    """
    if k < 1:
        raise ValueError("need at least one block")
    value = product_squeezing([exact_ball_squeezing() for _ in range(k)])
    return BoundInterval(0.0, value.upper, value.provenance + (Step("lemma4.1_upper", {"k": k}),))


# ---------------------------------------------------------------------------
# transfer rules (lower ends only)
# ---------------------------------------------------------------------------


def prop21_forward(S_gen: BoundInterval, k: GeometricConstants, prior: BoundInterval | None = None):
    """Bound ``S_D >= (alpha/R) S_D^Omega``."""
    value = _scaled(k.alpha, k.R, S_gen.lower)
    return _raise_lower(S_gen, value, prior, Step("Prop2.1(1)", _const_inputs(k)))


def prop21_backward(S_std: BoundInterval, k: GeometricConstants, prior: BoundInterval | None = None):
    """Bound ``S_D^Omega >= (alpha/R) S_D``."""
    value = _scaled(k.alpha, k.R, S_std.lower)
    return _raise_lower(S_std, value, prior, Step("Prop2.1(2)", _const_inputs(k)))


def cor23_transfer(
    S_1: BoundInterval,
    k1: GeometricConstants,
    k2: GeometricConstants,
    direction: int = 1,
    prior: BoundInterval | None = None,
) -> BoundInterval:
    """Move a lower bound between two balanced model domains.

    ``direction=1`` takes ``S_D^{Omega_1}`` to ``S_D^{Omega_2}``, ``2`` the
    reverse (then ``S_1`` is the bound for ``Omega_2``).  The factor is
    ``alpha_1 alpha_2 / (R_1 R_2)``, evaluated as the two one-step rules.
    """
    src, dst = _order(k1, k2, direction)
    value = _scaled(dst.alpha, dst.R, _scaled(src.alpha, src.R, S_1.lower))
    inputs = {"k1": _const_inputs(k1), "k2": _const_inputs(k2)}
    return _raise_lower(S_1, value, prior, Step(f"Cor2.3({direction})", inputs))


def prop32_forward(S_dbal: BoundInterval, k: GeometricConstants, prior: BoundInterval | None = None):
    """Bound ``S_D >= (alpha/P) (S_{d,D}^Omega)^L``."""
    value = _scaled(k.alpha, k.P, S_dbal.lower**k.L)
    return _raise_lower(S_dbal, value, prior, Step("Prop3.2(1)", _const_inputs(k)))


def prop32_backward(S_std: BoundInterval, k: GeometricConstants, prior: BoundInterval | None = None):
    """Bound ``S_{d,D}^Omega >= (alpha/R) S_D``."""
    value = _scaled(k.alpha, k.R, S_std.lower)
    return _raise_lower(S_std, value, prior, Step("Prop3.2(2)", _const_inputs(k)))


def cor33_transfer(
    S_1: BoundInterval,
    k1: GeometricConstants,
    k2: GeometricConstants,
    direction: int = 1,
    prior: BoundInterval | None = None,
) -> BoundInterval:
    """Move a lower bound between two d-balanced model domains.

    Direction 1: ``alpha_1 alpha_2 S^L / (P_1 R_2)`` with ``L`` from ``k1``;
    direction 2 swaps the roles.
    """
    src, dst = _order(k1, k2, direction)
    value = _scaled(dst.alpha, dst.R, _scaled(src.alpha, src.P, S_1.lower**src.L))
    inputs = {"k1": _const_inputs(k1), "k2": _const_inputs(k2)}
    return _raise_lower(S_1, value, prior, Step(f"Cor3.3({direction})", inputs))


def _order(k1, k2, direction):
    if direction == 1:
        return k1, k2
    if direction == 2:
        return k2, k1
    raise ValueError(f"direction must be 1 or 2, got {direction!r}")


def thm35_transfer(
    S_1: BoundInterval,
    transfer_const: BoundInterval,
    L: int,
    *,
    omega1: DomainSpec,
    omega2: DomainSpec,
    direction: int = 1,
    prior: BoundInterval | None = None,
) -> BoundInterval:
    """Bound ``S_{d',D}^{Omega_2} >= S_{d,Omega_1}^{Omega_2}(0) (S_{d,D}^{Omega_1})^L``.

    ``transfer_const`` certifies the squeezing value of ``Omega_1`` in
    ``Omega_2`` at the origin and is never estimated here.  Both model
    domains must be declared homogeneous.
    """
    if int(L) != L or L < 1:
        raise ValueError(f"L must be a positive integer, got {L!r}")
    _order(None, None, direction)
    for name, spec in (("omega1", omega1), ("omega2", omega2)):
        if not is_homogeneous(spec):
            raise DomainError(f"{name} is not declared homogeneous; the transfer does not apply")
    value = transfer_const.lower * S_1.lower ** int(L)
    step = Step(f"Thm3.5({direction})", {"transfer_lower": transfer_const.lower, "L": int(L)})
    source = BoundInterval(S_1.lower, S_1.upper, S_1.provenance + transfer_const.provenance)
    return _raise_lower(source, value, prior, step)


# ---------------------------------------------------------------------------
# the unit ball squeezed into a product of balls
# ---------------------------------------------------------------------------


def _check_partition(n: int, p: Sequence[int]) -> tuple[int, ...]:
    p = tuple(p)
    if int(n) != n or n < 1:
        raise DomainError(f"dimension must be a positive integer, got {n!r}")
    if not p or any(int(b) != b or b < 1 for b in p) or sum(p) != n:
        raise DomainError(f"{p} is not a partition of {n} into positive blocks")
    return tuple(int(b) for b in p)


def ellipsoid_example(n: int, p: Sequence[int]) -> BoundInterval:
    """``S_{B^n}^{E(p, inf)} = 1/sqrt(k)`` with both ends certified.

    The lower end transfers the ball's squeezing value through the model's
    constants ``alpha = 1``, ``R = sqrt(k)``; the upper end is the extremal
    bound for products of ``k`` balls.
    """
    p = _check_partition(n, p)
    model = GeneralizedEllipsoid(p, (math.inf,) * len(p))
    k = constants(model)
    lower = prop21_backward(exact_ball_squeezing(Point.origin(n)), k)
    upper = lemma41_upper(len(p))
    out = lower.meet(upper)
    step = Step("paper_example", {"n": int(n), "p": list(p), "k": len(p)})
    return BoundInterval(out.lower, out.upper, out.provenance + (step,))


def _unit_ball_blocks(spec: DomainSpec) -> tuple[int, ...] | None:
    spec = validate(spec)
    blocks = ball_blocks(spec)
    if blocks is None:
        return None

    def unit(s) -> bool:
        if isinstance(s, Ball):
            return s.radius == 1.0
        if isinstance(s, Product):
            return all(unit(f) for f in s.factors)
        if hasattr(s, "radii"):
            return all(r == 1.0 for r in s.radii)
        return True

    return blocks if unit(spec) else None


def derive_bounds(
    target: DomainSpec,
    model: DomainSpec,
    d=None,
    *,
    model2: DomainSpec | None = None,
    d2=None,
    rules: Iterable[str] | None = None,
    point: Point | None = None,
    oracle_directions: int | None = None,
    seed: int = 0,
) -> BoundInterval:
    """Best certified interval for ``S_{d,D}^{model}`` (or for ``model2``).

    Starts from the exact standard squeezing value of ``target`` when known,
    applies every rule that fits the inputs and intersects the results.
    ``rules`` restricts the rules that may contribute.
    """
    allowed = set(RULES if rules is None else rules)
    unknown = allowed - set(RULES)
    if unknown:
        raise ValueError(f"unknown rules: {sorted(unknown)}")
    target = validate(target)
    model = validate(model)
    if model.dim != target.dim:
        raise DomainError("model and target dimensions differ")
    if point is not None:
        from .domains import contains

        if not contains(target, point):
            raise DomainError("point lies outside the target domain")
    d = coerce_d(d, model.dim)
    kw = {} if oracle_directions is None else {"oracle_directions": oracle_directions}
    k1 = constants(model, d, seed=seed, **kw)

    S_std = known_squeezing(target)
    if "exact_ball" not in allowed:
        S_std = BoundInterval()

    first = BoundInterval()
    if d.is_balanced and "Prop2.1(2)" in allowed:
        first = prop21_backward(S_std, k1, first)
    if "Prop3.2(2)" in allowed:
        first = prop32_backward(S_std, k1, first)
    blocks = _unit_ball_blocks(model)
    if (
        d.is_balanced
        and "lemma4.1_upper" in allowed
        and isinstance(target, Ball)
        and blocks is not None
    ):
        first = first.meet(lemma41_upper(len(blocks)))
    if model2 is None:
        return first

    model2 = validate(model2)
    if model2.dim != target.dim:
        raise DomainError("second model and target dimensions differ")
    d2 = coerce_d(d2, model2.dim)
    k2 = constants(model2, d2, seed=seed, **kw)
    second = BoundInterval()
    if d2.is_balanced and "Prop2.1(2)" in allowed:
        second = prop21_backward(S_std, k2, second)
    if "Prop3.2(2)" in allowed:
        second = prop32_backward(S_std, k2, second)
    if d.is_balanced and d2.is_balanced and "Cor2.3(1)" in allowed:
        second = cor23_transfer(first, k1, k2, 1, second)
    if "Cor3.3(1)" in allowed:
        second = cor33_transfer(first, k1, k2, 1, second)
    if "Thm3.5(1)" in allowed and is_homogeneous(model) and is_homogeneous(model2):
        transfer = prop32_backward(known_squeezing(model), k2)
        second = thm35_transfer(first, transfer, d.L, omega1=model, omega2=model2, prior=second)
    blocks2 = _unit_ball_blocks(model2)
    if (
        d2.is_balanced
        and "lemma4.1_upper" in allowed
        and isinstance(target, Ball)
        and blocks2 is not None
    ):
        second = second.meet(lemma41_upper(len(blocks2)))
    return second
