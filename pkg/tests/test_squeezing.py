import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from squeeze_kit.domains import (
    Ball,
    DomainError,
    GeneralizedEllipsoid,
    Point,
    Polydisk,
    WeightedPowerDomain,
)
from squeeze_kit.geometry import GeometricConstants, constants
from squeeze_kit.harness import compositions
from squeeze_kit.squeezing import (
    RULES,
    BoundInterval,
    Step,
    cor23_transfer,
    cor33_transfer,
    derive_bounds,
    ellipsoid_example,
    exact_ball_squeezing,
    known_squeezing,
    lemma41_upper,
    product_squeezing,
    prop21_backward,
    prop21_forward,
    prop32_backward,
    prop32_forward,
    thm35_transfer,
)

INF = math.inf
BALL = GeometricConstants.build(1.0, 1.0)
VACUOUS = BoundInterval()


def point(a, b):
    return BoundInterval(a, b)


def rules_of(interval):
    return [s.rule for s in interval.provenance]


def p_inf(p):
    return GeneralizedEllipsoid(tuple(p), (INF,) * len(p))


class TestExact:
    @pytest.mark.parametrize("z", [(0, 0), (0.9, 0, 0), (0.5,)])
    def test_ball(self, z):
        out = exact_ball_squeezing(Point(z))
        assert (out.lower, out.upper) == (1.0, 1.0)
        assert rules_of(out) == ["exact_ball"]

    def test_outside(self):
        with pytest.raises(DomainError):
            exact_ball_squeezing(Point((1.0, 0)))

    def test_known_products(self):
        out = known_squeezing(p_inf((1, 2, 3)))
        assert out.lower == out.upper == pytest.approx(1 / math.sqrt(3), abs=1e-15)
        assert known_squeezing(Ball(3, 2.0)).lower == 1.0
        unknown = known_squeezing(WeightedPowerDomain((1, 1), (1, 2)))
        assert (unknown.lower, unknown.upper) == (0.0, 1.0)


class TestProduct:
    @pytest.mark.parametrize("k", range(1, 7))
    def test_identical(self, k):
        out = product_squeezing([exact_ball_squeezing()] * k)
        assert out.lower == out.upper == pytest.approx(1 / math.sqrt(k), abs=1e-15)
        assert rules_of(out)[-1] == "product_formula"

    def test_single(self):
        out = product_squeezing([point(0.25, 0.75)])
        assert (out.lower, out.upper) == (0.25, 0.75)

    def test_mixed(self):
        v = 1 / math.sqrt(2)
        out = product_squeezing([point(1, 1), point(v, v)])
        assert out.lower == pytest.approx(1 / math.sqrt(3), abs=1e-15)

    def test_zero_lower(self):
        assert product_squeezing([point(0, 1), point(1, 1)]).lower == 0.0

    def test_empty(self):
        with pytest.raises(ValueError):
            product_squeezing([])

    @given(st.lists(st.tuples(st.floats(0.01, 1), st.floats(0.01, 1)), min_size=1, max_size=6))
    def test_monotone_endpoints(self, pairs):
        out = product_squeezing([point(min(p), max(p)) for p in pairs])
        assert 0 <= out.lower <= out.upper <= min(max(p) for p in pairs) + 1e-15


class TestTransfers:
    def test_prop21_forward_polydisk(self):
        n = 4
        k = constants(Polydisk((1.0,) * n))
        s = 1 / math.sqrt(n)
        assert prop21_forward(point(s, s), k).lower == pytest.approx(1 / n, abs=1e-15)

    @pytest.mark.parametrize("rule", [prop21_forward, prop21_backward, prop32_backward])
    def test_vacuous(self, rule):
        out = rule(VACUOUS, constants(Polydisk((1.0, 1.0))))
        assert (out.lower, out.upper) == (0.0, 1.0)

    @pytest.mark.parametrize("rule", [prop21_forward, prop21_backward, prop32_backward])
    def test_ball_identity(self, rule):
        assert rule(point(0.3, 0.8), BALL).lower == 0.3

    def test_upper_not_transferred(self):
        assert prop21_forward(point(0.3, 0.4), BALL).upper == 1.0

    def test_prop21_backward_example(self):
        for p in [(1, 1), (2, 3, 1)]:
            out = prop21_backward(exact_ball_squeezing(), constants(p_inf(p)))
            assert out.lower == pytest.approx(1 / math.sqrt(len(p)), abs=1e-15)
            assert rules_of(out) == ["exact_ball", "Prop2.1(2)"]

    def test_prop32_forward_ball(self):
        assert prop32_forward(point(1, 1), BALL).lower == 0.5

    def test_prop32_weaker_than_prop21(self):
        k = constants(Polydisk((1.0, 1.0)))
        assert prop32_forward(point(1, 1), k).lower < prop21_forward(point(1, 1), k).lower

    def test_prop32_power(self):
        k = GeometricConstants.build(1.0, 1.0, L=3)
        assert prop32_forward(point(0.5, 1), k).lower == 0.5 * 0.125

    def test_cor23_factors(self):
        assert cor23_transfer(point(0.6, 1), BALL, BALL).lower == 0.6
        k1, k2 = constants(Polydisk((1.0,) * 6)), constants(p_inf((2, 3, 1)))
        assert cor23_transfer(point(1, 1), k1, k2).lower == pytest.approx(
            1 / (math.sqrt(6) * math.sqrt(3)), abs=1e-15
        )
        assert rules_of(cor23_transfer(point(1, 1), k1, k2, 2))[-1] == "Cor2.3(2)"

    def test_cor33_ball(self):
        for direction in (1, 2):
            assert cor33_transfer(point(1, 1), BALL, BALL, direction).lower == 0.5
        assert cor33_transfer(VACUOUS, BALL, BALL).lower == 0.0

    def test_cor33_weighted_substitution(self):
        k1 = constants(WeightedPowerDomain((1.0, 4.0), (1.0, 1.0)), (1, 2))
        assert (k1.alpha, k1.R, k1.P, k1.L) == (0.5, 1.0, 2.0, 2)
        k2 = constants(Polydisk((1.0, 1.0)))
        expected = 0.5 * 1.0 * 0.8**2 / (2.0 * math.sqrt(2))
        assert cor33_transfer(point(0.8, 1), k1, k2).lower == pytest.approx(expected, abs=1e-15)

    def test_bad_direction(self):
        with pytest.raises(ValueError):
            cor23_transfer(point(1, 1), BALL, BALL, 3)

    def test_prior_kept(self):
        prior = point(0.9, 0.95)
        out = prop21_backward(point(0.2, 1), BALL, prior)
        assert (out.lower, out.upper) == (0.9, 0.95)

    def test_prior_crossed(self):
        with pytest.raises(ValueError):
            prop21_backward(point(0.9, 1), BALL, point(0.1, 0.5))


class TestThm35:
    def test_identity_transfer(self):
        out = thm35_transfer(point(0.7, 1), point(1, 1), 2, omega1=Ball(2), omega2=Ball(2))
        assert out.lower == 0.7**2
        assert rules_of(out)[-1] == "Thm3.5(1)"

    def test_ball_to_product(self):
        transfer = ellipsoid_example(3, (1, 2))
        out = thm35_transfer(point(0.6, 1), transfer, 1, omega1=Ball(3), omega2=p_inf((1, 2)))
        assert out.lower == pytest.approx(0.6 / math.sqrt(2), abs=1e-15)

    def test_vacuous(self):
        out = thm35_transfer(VACUOUS, point(1, 1), 1, omega1=Ball(2), omega2=Ball(2))
        assert out.lower == 0.0

    def test_refuses_non_homogeneous(self):
        with pytest.raises(DomainError):
            thm35_transfer(
                point(1, 1), point(1, 1), 1,
                omega1=Ball(2), omega2=GeneralizedEllipsoid((1, 1), (1.0, 2.0)),
            )

    def test_bad_l(self):
        with pytest.raises(ValueError):
            thm35_transfer(point(1, 1), point(1, 1), 0, omega1=Ball(2), omega2=Ball(2))


class TestEllipsoidExample:
    def test_two_discs(self):
        out = ellipsoid_example(2, (1, 1))
        assert out.lower == out.upper == pytest.approx(0.70710678, abs=1e-8)

    def test_single_block(self):
        out = ellipsoid_example(5, (5,))
        assert (out.lower, out.upper) == (1.0, 1.0)

    def test_three_blocks(self):
        oracle = product_squeezing([exact_ball_squeezing()] * 3)
        out = ellipsoid_example(6, (2, 3, 1))
        assert out.lower == pytest.approx(oracle.lower, abs=1e-15)
        assert out.upper == pytest.approx(oracle.upper, abs=1e-15)

    def test_provenance(self):
        names = rules_of(ellipsoid_example(4, (2, 2)))
        for rule in ("exact_ball", "Prop2.1(2)", "product_formula", "lemma4.1_upper"):
            assert rule in names
        assert names[-1] == "paper_example"

    @pytest.mark.parametrize("n, p", [(3, (1, 1)), (2, (0, 2)), (0, ())])
    def test_invalid_partition(self, n, p):
        with pytest.raises(DomainError):
            ellipsoid_example(n, p)

    def test_all_partitions_collapse(self):
        for n in range(1, 7):
            for p in compositions(n):
                out = ellipsoid_example(n, p)
                assert out.width <= 1e-12


def test_lemma41_upper():
    out = lemma41_upper(4)
    assert (out.lower, out.upper) == (0.0, 0.5)
    with pytest.raises(ValueError):
        lemma41_upper(0)


def test_compositions_count():
    assert [len(list(compositions(n))) for n in range(1, 7)] == [1, 2, 4, 8, 16, 32]


@given(
    lo=st.floats(0, 1),
    hi=st.floats(0, 1),
    a1=st.floats(0.05, 3),
    s1=st.floats(1, 4),
    a2=st.floats(0.05, 3),
    s2=st.floats(1, 4),
    L1=st.integers(1, 4),
    L2=st.integers(1, 4),
)
def test_transfers_are_compositions(lo, hi, a1, s1, a2, s2, L1, L2):
    S = point(min(lo, hi), max(lo, hi))
    k1 = GeometricConstants.build(a1, a1 * s1, L1)
    k2 = GeometricConstants.build(a2, a2 * s2, L2)
    assert cor23_transfer(S, k1, k2, 1).lower == prop21_backward(prop21_forward(S, k1), k2).lower
    assert cor23_transfer(S, k1, k2, 2).lower == prop21_backward(prop21_forward(S, k2), k1).lower
    assert cor33_transfer(S, k1, k2, 1).lower == prop32_backward(prop32_forward(S, k1), k2).lower
    assert cor33_transfer(S, k1, k2, 2).lower == prop32_backward(prop32_forward(S, k2), k1).lower


@given(lo=st.floats(0, 1), prior=st.floats(0, 1), a=st.floats(0.05, 3), s=st.floats(1, 4))
def test_rules_never_lower_prior(lo, prior, a, s):
    k = GeometricConstants.build(a, a * s, 2)
    base = point(prior * lo, 1)
    for rule in (prop21_forward, prop21_backward, prop32_forward, prop32_backward):
        out = rule(point(lo, 1), k, base)
        assert base.lower <= out.lower <= out.upper <= 1


@pytest.mark.parametrize(
    "spec",
    [Ball(3), Polydisk((1.0, 0.5)), p_inf((1, 2)), GeneralizedEllipsoid((1, 1, 1), (2.0,) * 3)],
)
def test_round_trip_contraction(spec):
    k = constants(spec)
    ratio = k.alpha / k.R
    out = prop21_forward(prop21_backward(exact_ball_squeezing(), k), k).lower
    assert out == ratio * ratio
    assert (out == 1.0) == isinstance(spec, Ball)


def test_degenerate_d_collapse():
    k = constants(p_inf((1, 2)), (1, 1, 1))
    one = exact_ball_squeezing()
    assert prop32_backward(one, k).lower == prop21_backward(one, k).lower
    assert prop32_forward(one, k).lower == k.alpha / (k.R + 1)


def test_step_rejects_unknown_rule():
    with pytest.raises(ValueError):
        Step("made_up")
    assert len(RULES) == 14


def test_interval_invariants():
    with pytest.raises(ValueError):
        BoundInterval(0.6, 0.5)
    with pytest.raises(ValueError):
        BoundInterval(0.5, 1.5)
    with pytest.raises(ValueError):
        point(0.1, 0.2).meet(point(0.3, 0.4))


class TestDeriveBounds:
    def test_ball_into_product(self):
        out = derive_bounds(Ball(3), p_inf((1, 2)))
        assert out.lower == out.upper == pytest.approx(1 / math.sqrt(2), abs=1e-15)

    def test_rule_restriction(self):
        out = derive_bounds(Ball(3), p_inf((1, 2)), rules=["exact_ball", "Prop2.1(2)"])
        assert out.upper == 1.0 and out.lower == pytest.approx(1 / math.sqrt(2))

    def test_no_exact_input(self):
        out = derive_bounds(WeightedPowerDomain((1, 1), (1, 2)), Ball(2))
        assert (out.lower, out.upper) == (0.0, 1.0)

    def test_second_model(self):
        out = derive_bounds(Ball(2), Polydisk((1.0, 1.0)), model2=Ball(2))
        assert out.lower == 1.0
        assert "Prop2.1(2)" in rules_of(out)

    def test_unknown_rule(self):
        with pytest.raises(ValueError):
            derive_bounds(Ball(2), Ball(2), rules=["nope"])

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            derive_bounds(Ball(2), Ball(3))

    def test_point_outside(self):
        with pytest.raises(DomainError):
            derive_bounds(Ball(2), Ball(2), point=Point((1.0, 1.0)))
