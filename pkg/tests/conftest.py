import math

import pytest

from squeeze_kit.domains import (
    Ball,
    GeneralizedEllipsoid,
    Polydisk,
    Product,
    WeightedPowerDomain,
)

INF = math.inf

FAMILIES = {
    "ball": Ball(2, 1.0),
    "ball_r": Ball(3, 0.7),
    "polydisk": Polydisk((1.0, 0.5)),
    "ellipsoid": GeneralizedEllipsoid((1, 1), (1.0, 2.0)),
    "ellipsoid_mixed": GeneralizedEllipsoid((2, 1), (INF, 3.0)),
    "l1_ball": GeneralizedEllipsoid((1, 1), (0.5, 0.5)),
    "e_p_inf": GeneralizedEllipsoid((1, 2), (INF, INF)),
    "weighted": WeightedPowerDomain((1.0, 2.0), (1.0, 1.5)),
    "product": Product((Ball(2, 0.8), Polydisk((0.5,)))),
}


def brute_root(f, lo=1e-12, hi=64.0, iters=400):
    """Scalar bisection for f(t) = 1 with f decreasing; independent of the package."""
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if f(mid) >= 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@pytest.fixture(params=sorted(FAMILIES))
def family(request):
    return request.param, FAMILIES[request.param]
