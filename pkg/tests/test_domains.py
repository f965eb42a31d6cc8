import math

import numpy as np
import pytest

from squeeze_kit.domains import (
    Ball,
    DomainError,
    DVector,
    GeneralizedEllipsoid,
    Point,
    Polydisk,
    Product,
    SamplingError,
    Sublevel,
    WeightedPowerDomain,
    contains,
    contains_many,
    is_homogeneous,
    sample_array,
    sample_points,
    validate,
)


INF = math.inf


class TestValidate:
    def test_ball_is_fixed_point(self):
        assert validate(Ball(2, 1)) == Ball(2, 1.0)

    def test_e_p_inf_with_unit_blocks_is_polydisk(self):
        assert validate(GeneralizedEllipsoid((1, 1), (INF, INF))) == Polydisk((1.0, 1.0))

    def test_all_ones_exponents_is_ball(self):
        assert validate(GeneralizedEllipsoid((3,), (1.0,))) == Ball(3)
        assert validate(GeneralizedEllipsoid((1, 2), (1.0, 1.0))) == Ball(3)

    def test_exponent_below_half_rejected(self):
        with pytest.raises(DomainError):
            validate(GeneralizedEllipsoid((2, 1), (1.0, 0.3)))

    def test_product_recurses(self):
        spec = Product((GeneralizedEllipsoid((1,), (INF,)), Ball(2)))
        assert validate(spec) == Product((Polydisk((1.0,)), Ball(2)))

    @pytest.mark.parametrize(
        "build",
        [
            lambda: Ball(2, 0.0),
            lambda: Ball(0),
            lambda: Polydisk((1.0, -1.0)),
            lambda: Polydisk(()),
            lambda: GeneralizedEllipsoid((1, 1), (1.0,)),
            lambda: GeneralizedEllipsoid((0, 2), (1.0, 1.0)),
            lambda: WeightedPowerDomain((1.0, 0.0), (1.0, 1.0)),
            lambda: WeightedPowerDomain((1.0,), (0.4,)),
            lambda: Product(()),
            lambda: Sublevel(Ball(2), 0.0, DVector((1, 1))),
            lambda: Sublevel(Ball(2), 1.5, DVector((1, 1))),
            lambda: Sublevel(Ball(2), 0.5, DVector((1, 1, 1))),
            lambda: DVector((1, 0)),
            lambda: Point((1.0, math.nan)),
            lambda: Point((1.0, 2.0), (1, 2)),
        ],
    )
    def test_malformed(self, build):
        with pytest.raises(DomainError):
            build()

    def test_dvector(self):
        d = DVector((1, 3, 2))
        assert d.L == 3 and not d.is_balanced
        assert DVector.ones(4).is_balanced

    def test_homogeneity_declarations(self):
        assert is_homogeneous(Ball(3))
        assert is_homogeneous(Polydisk((1.0, 2.0)))
        assert is_homogeneous(GeneralizedEllipsoid((2, 1), (INF, INF)))
        assert not is_homogeneous(GeneralizedEllipsoid((1, 1), (1.0, 2.0)))
        assert not is_homogeneous(WeightedPowerDomain((1.0,), (1.0,)))


class TestContains:
    def test_origin(self):
        assert contains(Ball(2, 1), Point((0, 0)))

    def test_ball_example(self):
        # 0.8**2 + 0.7**2 = 1.13 >= 1
        assert not contains(GeneralizedEllipsoid((1, 1), (1.0, 1.0)), Point((0.8, 0.7)))

    def test_polydisk_example(self):
        assert contains(Polydisk((1.0, 1.0)), Point((0.99, 0.5j)))

    def test_open_boundary(self):
        assert not contains(Ball(1), Point((1.0,)))
        assert not contains(Polydisk((1.0, 1.0)), Point((0.0, 1.0)))

    def test_infinite_block_is_a_box(self):
        spec = GeneralizedEllipsoid((1, 1), (1.0, INF))
        assert contains(spec, Point((0.9, 0.99)))
        assert not contains(spec, Point((0.5, 1.0)))

    def test_weighted(self):
        spec = WeightedPowerDomain((1.0, 4.0), (1.0, 1.0))
        assert contains(spec, Point((0.5, 0.4)))  # 0.25 + 0.64
        assert not contains(spec, Point((0.5, 0.45)))  # 0.25 + 0.81

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            contains(Ball(2), Point((0.0,)))

    def test_block_mismatch(self):
        with pytest.raises(DomainError):
            contains(Product((Ball(2), Ball(1))), Point((0, 0, 0), (1, 2)))

    def test_balanced_grid(self, family):
        _, spec = family
        Z = sample_array(spec, 50, 3)
        lam = (np.arange(1, 17) / 16)[:, None] * np.exp(2j * np.pi * np.arange(16) / 16)[None, :]
        scaled = lam.ravel()[None, :, None] * Z[:, None, :]
        assert contains_many(spec, scaled.reshape(-1, spec.dim)).all()

    @pytest.mark.parametrize("d", [(1, 2), (2, 3), (3, 1)])
    def test_weighted_d_balanced(self, d):
        spec = WeightedPowerDomain((1.0, 2.0), (1.0, 1.5))
        Z = sample_array(spec, 100, 5)
        lam = (np.arange(1, 17) / 16)[:, None] * np.exp(2j * np.pi * np.arange(16) / 16)[None, :]
        scaled = lam.ravel()[None, :, None] ** np.asarray(d)[None, None, :] * Z[:, None, :]
        assert contains_many(spec, scaled.reshape(-1, 2)).all()


class TestSampling:
    def test_ball_points_inside(self):
        pts = sample_points(Ball(1, 1), 3, 7)
        assert len(pts) == 3
        assert all(abs(p.coords[0]) < 1 for p in pts)

    def test_empty(self, family):
        assert sample_points(family[1], 0, 1) == []

    def test_mixed_ellipsoid_membership(self):
        spec = GeneralizedEllipsoid((2, 2), (2.0, INF))
        pts = sample_points(spec, 100, 1)
        assert len(pts) == 100
        assert all(contains(spec, p) for p in pts)
        assert all(p.block_sizes == (2, 2) for p in pts)

    def test_deterministic(self, family):
        a = sample_array(family[1], 20, 11)
        b = sample_array(family[1], 20, 11)
        assert np.array_equal(a, b)

    def test_sublevel_sampling(self):
        spec = Sublevel(Ball(2), 0.3, DVector((1, 2)))
        Z = sample_array(spec, 50, 2)
        assert contains_many(spec, Z).all()

    def test_cap_exhaustion(self, monkeypatch):
        import squeeze_kit.domains as dom

        monkeypatch.setattr(dom, "MAX_ATTEMPTS_PER_POINT", 1)
        spec = Sublevel(Ball(8), 0.05, DVector((3,) * 8))
        with pytest.raises(SamplingError, match="rate"):
            sample_array(spec, 10, 0)

    def test_uniform_in_disk(self):
        # radial cdf of a uniform disk is r**2
        Z = sample_array(Ball(1), 20000, 4)[:, 0]
        assert abs(np.mean(np.abs(Z) ** 2 < 0.25) - 0.25) < 0.015
