"""Property-based verification suites and their machine-readable reports.

Each suite draws its inputs from a seeded generator, checks one family of
invariants and returns a :class:`VerificationReport`.  A suite that executed
no checks is vacuous and never passes.
"""

from __future__ import annotations

import itertools
import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .domains import (
    Ball,
    DomainSpec,
    DVector,
    GeneralizedEllipsoid,
    Point,
    Polydisk,
    Product,
    Sublevel,
    WeightedPowerDomain,
    sample_array,
)
from .gauge import gauge_array
from .geometry import GeometricConstants, analytic_radii, constants, extremal_radii_oracle
from .invariants import caratheodory_star_sandwich
from .squeezing import (
    RULES,
    BoundInterval,
    cor23_transfer,
    cor33_transfer,
    ellipsoid_example,
    exact_ball_squeezing,
    prop21_backward,
    prop21_forward,
    prop32_backward,
    prop32_forward,
)

__all__ = [
    "SUITES",
    "SuiteConfig",
    "VerificationReport",
    "UnknownSuiteError",
    "run_suite",
    "run_all",
    "write_jsonl",
]

INF = math.inf

# C^2 families used wherever exponent tuples vary
D_FAMILIES: dict[str, DomainSpec] = {
    "ball": Ball(2, 1.0),
    "polydisk": Polydisk((1.0, 0.5)),
    "ellipsoid": GeneralizedEllipsoid((1, 1), (1.0, 2.0)),
    "weighted": WeightedPowerDomain((1.0, 2.0), (1.0, 1.5)),
}
D_VECTORS = [DVector((1, 1)), DVector((1, 2)), DVector((2, 3))]
LEVELS = (0.1, 0.5, 0.9, 1.0)

BALANCED_FAMILIES: dict[str, DomainSpec] = {
    **D_FAMILIES,
    "ellipsoid_mixed": GeneralizedEllipsoid((2, 1), (INF, 3.0)),
    "l1_ball": GeneralizedEllipsoid((1, 1), (0.5, 0.5)),
    "product": Product((Ball(2, 0.8), WeightedPowerDomain((1.0,), (2.0,)))),
    "e_p_inf": GeneralizedEllipsoid((1, 2, 1), (INF, INF, INF)),
}

# families whose auto gauge is a closed form with all-ones exponents
CLOSED_FAMILIES: dict[str, DomainSpec] = {
    "ball": Ball(3, 1.5),
    "polydisk": Polydisk((1.0, 0.5, 2.0)),
    "e_p_inf": GeneralizedEllipsoid((2, 1, 2), (INF, INF, INF)),
    "ellipsoid_equal": GeneralizedEllipsoid((1, 2), (3.0, 3.0)),
    "ellipsoid_half": GeneralizedEllipsoid((1, 1), (0.5, 0.5)),
    "weighted_uniform": WeightedPowerDomain((1.0, 3.0), (2.0, 2.0)),
    "product": Product((Ball(2), Polydisk((0.5,)))),
}

# families with analytic inradius and half-diameter
ANALYTIC_FAMILIES: dict[str, DomainSpec] = {
    "ball": Ball(3, 1.0),
    "ball_r2": Ball(2, 2.0),
    "polydisk": Polydisk((1.0, 1.0)),
    "polydisk_uneven": Polydisk((1.0, 0.5, 2.0)),
    "e_p_inf": GeneralizedEllipsoid((1, 2, 1), (INF, INF, INF)),
    "ellipsoid_m2": GeneralizedEllipsoid((1, 1, 1), (2.0, 2.0, 2.0)),
    "ellipse": WeightedPowerDomain((1.0, 4.0), (1.0, 1.0)),
    "product": Product((Ball(2), Polydisk((1.0,)))),
}

ORACLE_SPECS: dict[str, DomainSpec] = {
    "ball_2": Ball(2),
    "ball_5": Ball(5),
    "ball_8": Ball(8),
    "polydisk_2": Polydisk((1.0, 1.0)),
    "polydisk_3_uneven": Polydisk((1.0, 0.5, 2.0)),
    "polydisk_8": Polydisk((1.0,) * 8),
    "e_p_inf_111": GeneralizedEllipsoid((1, 1, 1), (INF,) * 3),
    "e_p_inf_2312": GeneralizedEllipsoid((2, 3, 1, 2), (INF,) * 4),
    "e_p_inf_2222": GeneralizedEllipsoid((2, 2, 2, 2), (INF,) * 4),
}

DEFAULT_TOLERANCES = {
    "gauge_homogeneity": 1e-9,
    "gauge_unit_level": 1e-11,
    "gauge_closed_vs_bisection": 1e-9,
    "lemma36": 1e-8,
    "sandwich_ordering": 0.0,
    "caratheodory_domination": 1e-11,
    "constants_oracle": 1e-3,
    "interval_sanity": 0.0,
    "corollary_composition": 0.0,
    "ellipsoid_tightness": 1e-12,
    "prop_collapse_d1": 0.0,
}


class UnknownSuiteError(KeyError):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    samples: int = 1000
    seed: int = 42
    tolerance: float | None = None
    directions: int = 100_000


@dataclass
class VerificationReport:
    suite: str
    cases_run: int
    failures: list
    max_violation: float
    tolerance: float
    seed: int
    wall_time: float = 0.0

    @property
    def vacuous(self) -> bool:
        return self.cases_run == 0

    @property
    def passed(self) -> bool:
        return not self.vacuous and not self.failures and self.max_violation <= self.tolerance

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "suite": self.suite,
            "passed": self.passed,
            "vacuous": self.vacuous,
            "cases_run": self.cases_run,
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "failures": self.failures,
        }
        if timing:
            out["wall_time"] = self.wall_time
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True)


def _jsonable(x):
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer, int)) and not isinstance(x, bool):
        return int(x)
    if isinstance(x, (DVector,)):
        return list(x.exponents)
    return x if isinstance(x, (str, bool)) or x is None else repr(x)


@dataclass
class _Recorder:
    tolerance: float
    cases: int = 0
    worst: float = 0.0
    failures: list = field(default_factory=list)

    def check(self, violation: float, inputs=None, expected=None, actual=None) -> None:
        self.cases += 1
        violation = float(violation)
        if violation > self.worst or math.isnan(violation):
            self.worst = violation if not math.isnan(violation) else math.inf
        if not violation <= self.tolerance:
            self.failures.append(
                {
                    "inputs": _jsonable(inputs),
                    "expected": _jsonable(expected),
                    "actual": _jsonable(actual),
                    "tolerance": self.tolerance,
                    "violation": violation if math.isfinite(violation) else None,
                }
            )

    def check_many(self, violations: np.ndarray, inputs: Callable[[int], object],
                   expected: np.ndarray, actual: np.ndarray) -> None:
        violations = np.asarray(violations, dtype=float)
        self.cases += violations.size
        if violations.size == 0:
            return
        bad = ~(violations <= self.tolerance)
        worst = np.where(np.isnan(violations), np.inf, violations).max()
        self.worst = max(self.worst, float(worst))
        for i in np.flatnonzero(bad.ravel()):
            v = float(violations.ravel()[i])
            self.failures.append(
                {
                    "inputs": _jsonable(inputs(int(i))),
                    "expected": _jsonable(np.ravel(expected)[i]),
                    "actual": _jsonable(np.ravel(actual)[i]),
                    "tolerance": self.tolerance,
                    "violation": v if math.isfinite(v) else None,
                }
            )


def _split(total: int, parts: int) -> list[int]:
    base, extra = divmod(total, parts)
    return [base + (1 if i < extra else 0) for i in range(parts)]


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def _lambda_grid() -> np.ndarray:
    moduli = np.arange(1, 17) / 8.0
    phases = np.exp(2j * np.pi * np.arange(16) / 16)
    return (moduli[:, None] * phases[None, :]).ravel()


def _suite_gauge_homogeneity(cfg: SuiteConfig, rec: _Recorder) -> None:
    lam = _lambda_grid()
    combos = list(itertools.product(D_FAMILIES.items(), D_VECTORS))
    for idx, (((name, spec), d), count) in enumerate(zip(combos, _split(cfg.samples, len(combos)))):
        if count == 0:
            continue
        Z = sample_array(spec, count, cfg.seed + idx)
        h, _, _ = gauge_array(spec, d, Z)
        scaled = lam[None, :, None] ** d.as_array()[None, None, :] * Z[:, None, :]
        hs, _, _ = gauge_array(spec, d, scaled.reshape(-1, spec.dim))
        expected = (np.abs(lam)[None, :] * h[:, None]).ravel()
        norm = np.repeat(np.maximum(1.0, h), len(lam))
        viol = np.abs(hs - expected) / norm
        rec.check_many(
            viol,
            lambda i, Z=Z, name=name, d=d: {
                "family": name,
                "d": d,
                "z": Z[i // len(lam)],
                "lambda": lam[i % len(lam)],
            },
            expected,
            hs,
        )


def _suite_gauge_unit_level(cfg: SuiteConfig, rec: _Recorder) -> None:
    from .domains import _uniform_ball, contains_many
    from .geometry import bounding_radius

    fams = list(BALANCED_FAMILIES.items())
    for idx, ((name, spec), count) in enumerate(zip(fams, _split(cfg.samples, len(fams)))):
        if count == 0:
            continue
        rng = np.random.default_rng(cfg.seed + idx)
        Z = _uniform_ball(rng, count, spec.dim, 1.25 * bounding_radius(spec))
        inside = contains_many(spec, Z)
        h, res, _ = gauge_array(spec, None, Z)
        agree = inside == (h < 1.0)
        viol = np.where(agree, 0.0, np.maximum(0.0, np.abs(h - 1.0) - res))
        rec.check_many(
            viol,
            lambda i, Z=Z, name=name: {"family": name, "z": Z[i]},
            inside,
            h,
        )


def _suite_gauge_closed_vs_bisection(cfg: SuiteConfig, rec: _Recorder) -> None:
    from .domains import _uniform_ball
    from .geometry import bounding_radius

    fams = list(CLOSED_FAMILIES.items())
    for idx, ((name, spec), count) in enumerate(zip(fams, _split(cfg.samples, len(fams)))):
        if count == 0:
            continue
        rng = np.random.default_rng(cfg.seed + idx)
        Z = _uniform_ball(rng, count, spec.dim, 1.5 * bounding_radius(spec))
        closed, _, kind = gauge_array(spec, None, Z)
        if kind != "closed_form":
            rec.check(math.inf, {"family": name}, "closed_form", kind)
            continue
        bis, _, _ = gauge_array(spec, None, Z, method="bisection")
        rec.check_many(
            np.abs(closed - bis),
            lambda i, Z=Z, name=name: {"family": name, "z": Z[i]},
            bis,
            closed,
        )


def _suite_lemma36(cfg: SuiteConfig, rec: _Recorder) -> None:
    combos = list(itertools.product(D_FAMILIES.items(), D_VECTORS))
    for idx, (((name, spec), d), count) in enumerate(zip(combos, _split(cfg.samples, len(combos)))):
        if count == 0:
            continue
        Z = sample_array(spec, count, cfg.seed + idx)
        h, _, _ = gauge_array(spec, d, Z)
        for r in LEVELS:
            direct, _, _ = gauge_array(Sublevel(spec, r, d), d, Z)
            expected = h / r
            rec.check_many(
                np.abs(direct - expected),
                lambda i, Z=Z, name=name, d=d, r=r: {"family": name, "d": d, "r": r, "z": Z[i]},
                expected,
                direct,
            )


def _suite_sandwich_ordering(cfg: SuiteConfig, rec: _Recorder) -> None:
    combos = list(itertools.product(D_FAMILIES.items(), D_VECTORS))
    for idx, (((name, spec), d), count) in enumerate(zip(combos, _split(cfg.samples, len(combos)))):
        for row in sample_array(spec, count, cfg.seed + idx):
            z = Point(tuple(row))
            b = caratheodory_star_sandwich(spec, d, z)
            viol = max(0.0, b.lower - b.upper)
            if b.exact and b.lower != b.upper:
                viol = math.inf
            rec.check(viol, {"family": name, "d": d, "z": row}, "lower <= upper", [b.lower, b.upper])


def _suite_caratheodory_domination(cfg: SuiteConfig, rec: _Recorder) -> None:
    from .domains import _uniform_ball

    specs = [(n, s, DVector.ones(s.dim)) for n, s in ANALYTIC_FAMILIES.items()]
    specs += [(n, s, d) for (n, s), d in itertools.product(D_FAMILIES.items(), D_VECTORS)
              if analytic_radii(s) is not None and not d.is_balanced]
    for idx, ((name, spec, d), count) in enumerate(zip(specs, _split(cfg.samples, len(specs)))):
        if count == 0:
            continue
        alpha, R = analytic_radii(spec)
        L = d.L
        # outer ball: |z|/R <= c*_Omega(0,z) <= h_d(z) on Omega
        Z = sample_array(spec, count, cfg.seed + idx)
        h, _, _ = gauge_array(spec, d, Z)
        outer = np.linalg.norm(Z, axis=1) / R
        rec.check_many(
            np.maximum(0.0, outer - h) / (1.0 + h),
            lambda i, Z=Z, name=name, d=d: {"family": name, "d": d, "z": Z[i], "check": "outer"},
            outer,
            h,
        )
        # inner ball: h_d(z)^L <= c*_Omega(0,z) <= |z|/alpha on B(0, alpha)
        rng = np.random.default_rng(cfg.seed + 1000 + idx)
        W = _uniform_ball(rng, count, spec.dim, alpha)
        hw, _, _ = gauge_array(spec, d, W)
        inner = np.linalg.norm(W, axis=1) / alpha
        rec.check_many(
            np.maximum(0.0, hw**L - inner) / (1.0 + inner),
            lambda i, W=W, name=name, d=d: {"family": name, "d": d, "z": W[i], "check": "inner"},
            inner,
            hw**L,
        )


def _suite_constants_oracle(cfg: SuiteConfig, rec: _Recorder) -> None:
    for idx, (name, spec) in enumerate(ORACLE_SPECS.items()):
        alpha, R = analytic_radii(spec)
        a_est, r_est = extremal_radii_oracle(spec, cfg.directions, cfg.seed + idx)
        rel = max(abs(a_est - alpha) / alpha, abs(r_est - R) / R)
        one_sided = a_est >= alpha - 1e-9 and r_est <= R + 1e-9
        rec.check(
            rel if one_sided else math.inf,
            {"spec": name, "directions": cfg.directions},
            [alpha, R],
            [a_est, r_est],
        )


def _random_interval(rng: np.random.Generator) -> BoundInterval:
    a, b = sorted(rng.random(2))
    if rng.random() < 0.1:
        a = 0.0
    return BoundInterval(float(a), float(b))


def _random_constants(rng: np.random.Generator) -> GeometricConstants:
    alpha = float(rng.uniform(0.05, 3.0))
    R = alpha * float(rng.uniform(1.0, 4.0)) if rng.random() < 0.9 else alpha
    return GeometricConstants.build(alpha, R, int(rng.integers(1, 5)), "analytic")


def _suite_interval_sanity(cfg: SuiteConfig, rec: _Recorder) -> None:
    rng = np.random.default_rng(cfg.seed)
    one = [
        ("Prop2.1(1)", prop21_forward),
        ("Prop2.1(2)", prop21_backward),
        ("Prop3.2(1)", prop32_forward),
        ("Prop3.2(2)", prop32_backward),
    ]
    for _ in range(cfg.samples):
        S = _random_interval(rng)
        # a certified prior: random lower end, no upper knowledge
        prior = BoundInterval(float(rng.random()) * S.lower, 1.0)
        k1, k2 = _random_constants(rng), _random_constants(rng)
        outputs = [(name, fn(S, k1, prior)) for name, fn in one]
        outputs += [
            ("Cor2.3(1)", cor23_transfer(S, k1, k2, 1, prior)),
            ("Cor2.3(2)", cor23_transfer(S, k1, k2, 2, prior)),
            ("Cor3.3(1)", cor33_transfer(S, k1, k2, 1, prior)),
            ("Cor3.3(2)", cor33_transfer(S, k1, k2, 2, prior)),
        ]
        for name, out in outputs:
            ok = (
                0.0 <= out.lower <= out.upper <= 1.0
                and out.lower >= prior.lower
                and out.upper == prior.upper
                and all(step.rule in RULES for step in out.provenance)
                and out.provenance[-1].rule == name
            )
            rec.check(
                0.0 if ok else 1.0,
                {"rule": name, "S": [S.lower, S.upper], "prior": [prior.lower, prior.upper],
                 "k1": [k1.alpha, k1.R, k1.L], "k2": [k2.alpha, k2.R, k2.L]},
                "0 <= lower <= upper <= 1, lower not decreased",
                [out.lower, out.upper],
            )


def _suite_corollary_composition(cfg: SuiteConfig, rec: _Recorder) -> None:
    rng = np.random.default_rng(cfg.seed)
    for _ in range(cfg.samples):
        S = _random_interval(rng)
        k1, k2 = _random_constants(rng), _random_constants(rng)
        inputs = {"S": [S.lower, S.upper], "k1": [k1.alpha, k1.R, k1.L], "k2": [k2.alpha, k2.R, k2.L]}
        pairs = [
            ("Cor2.3(1)", cor23_transfer(S, k1, k2, 1), prop21_backward(prop21_forward(S, k1), k2)),
            ("Cor2.3(2)", cor23_transfer(S, k1, k2, 2), prop21_backward(prop21_forward(S, k2), k1)),
            ("Cor3.3(1)", cor33_transfer(S, k1, k2, 1), prop32_backward(prop32_forward(S, k1), k2)),
            ("Cor3.3(2)", cor33_transfer(S, k1, k2, 2), prop32_backward(prop32_forward(S, k2), k1)),
        ]
        for name, direct, composed in pairs:
            same = direct.lower == composed.lower and direct.upper == composed.upper
            rec.check(
                0.0 if same else max(abs(direct.lower - composed.lower), 1e-300),
                {**inputs, "rule": name},
                [composed.lower, composed.upper],
                [direct.lower, direct.upper],
            )


def compositions(n: int):
    """All ordered block partitions of ``n``."""
    for cuts in itertools.product((False, True), repeat=n - 1):
        blocks, size = [], 1
        for cut in cuts:
            if cut:
                blocks.append(size)
                size = 1
            else:
                size += 1
        blocks.append(size)
        yield tuple(blocks)


def _suite_ellipsoid_tightness(cfg: SuiteConfig, rec: _Recorder) -> None:
    for n in range(1, 7):
        for p in compositions(n):
            out = ellipsoid_example(n, p)
            target = 1.0 / math.sqrt(len(p))
            viol = max(out.upper - out.lower, abs(out.lower - target), abs(out.upper - target))
            rec.check(viol, {"n": n, "p": list(p)}, target, [out.lower, out.upper])


def _suite_prop_collapse_d1(cfg: SuiteConfig, rec: _Recorder) -> None:
    unit = exact_ball_squeezing()
    for name, spec in ANALYTIC_FAMILIES.items():
        k = constants(spec)
        ratio = k.alpha / k.R
        b21 = prop21_backward(unit, k).lower
        b32 = prop32_backward(unit, k).lower
        f21 = prop21_forward(unit, k).lower
        f32 = prop32_forward(unit, k).lower
        rec.check(0.0 if b21 == b32 else 1.0, {"family": name, "check": "backward factors"}, b21, b32)
        expected = k.alpha / (k.R + 1.0)
        rec.check(0.0 if f32 == expected else 1.0, {"family": name, "check": "alpha/(R+1)"}, expected, f32)
        rec.check(0.0 if f32 < f21 else 1.0, {"family": name, "check": "strictly weaker"}, f21, f32)
        round_trip = prop21_forward(prop21_backward(unit, k), k).lower
        rec.check(
            0.0 if round_trip == ratio * ratio else 1.0,
            {"family": name, "check": "round trip (alpha/R)^2"},
            ratio * ratio,
            round_trip,
        )
        is_ball = isinstance(spec, Ball)
        rec.check(
            0.0 if (round_trip == 1.0) == is_ball else 1.0,
            {"family": name, "check": "factor 1 iff ball"},
            is_ball,
            round_trip,
        )


SUITES: dict[str, Callable[[SuiteConfig, _Recorder], None]] = {
    "gauge_homogeneity": _suite_gauge_homogeneity,
    "gauge_unit_level": _suite_gauge_unit_level,
    "gauge_closed_vs_bisection": _suite_gauge_closed_vs_bisection,
    "lemma36": _suite_lemma36,
    "sandwich_ordering": _suite_sandwich_ordering,
    "caratheodory_domination": _suite_caratheodory_domination,
    "constants_oracle": _suite_constants_oracle,
    "interval_sanity": _suite_interval_sanity,
    "corollary_composition": _suite_corollary_composition,
    "ellipsoid_tightness": _suite_ellipsoid_tightness,
    "prop_collapse_d1": _suite_prop_collapse_d1,
}


def run_suite(name: str, config: SuiteConfig | None = None) -> VerificationReport:
    """Run one named suite; deterministic for a fixed ``config``."""
    if name not in SUITES:
        raise UnknownSuiteError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    config = config or SuiteConfig()
    tol = DEFAULT_TOLERANCES[name] if config.tolerance is None else float(config.tolerance)
    rec = _Recorder(tol)
    start = time.perf_counter()
    if config.samples > 0:
        SUITES[name](config, rec)
    return VerificationReport(
        suite=name,
        cases_run=rec.cases,
        failures=rec.failures,
        max_violation=rec.worst,
        tolerance=tol,
        seed=config.seed,
        wall_time=time.perf_counter() - start,
    )


def run_all(config: SuiteConfig | None = None) -> list[VerificationReport]:
    return [run_suite(name, config) for name in SUITES]


def write_jsonl(reports, path) -> None:
    with open(path, "w") as fh:
        for r in reports:
            fh.write(r.to_json() + "\n")
