"""Monte-Carlo estimators: determinism, accuracy bands, coverage sanity."""

from fractions import Fraction

import pytest

from valgebra.density import PolyDensity
from valgebra.errors import NotFullDimensional
from valgebra.oracle import RngSpec, mc_integrate, mc_solid_angle, mc_volume
from valgebra.polytope import NormalCone, box, convex_hull, segment, simplex
from valgebra.ring import MultiPoly


def test_determinism_bit_for_bit():
    p = simplex(2)
    a = mc_volume(p, 20_000, RngSpec(99))
    b = mc_volume(p, 20_000, RngSpec(99))
    assert a == b
    c = mc_volume(p, 20_000, RngSpec(100))
    assert a != c


def test_derive_is_stable():
    r = RngSpec(7)
    assert r.derive("x", 1) == r.derive("x", 1)
    assert r.derive("x", 1) != r.derive("x", 2)


def test_volume_square_within_4_sigma():
    est, se = mc_volume(box([1, 1]), 100_000, RngSpec(5))
    assert est == 1.0 and se == 0.0  # the bounding box itself: every point accepted


def test_volume_simplex_within_4_sigma():
    est, se = mc_volume(simplex(2), 100_000, RngSpec(6))
    assert abs(est - 0.5) <= 4 * se


def test_volume_rejects_lower_dim():
    with pytest.raises(NotFullDimensional):
        mc_volume(segment((0, 0), (1, 1)), 100, RngSpec(1))


def test_integrate_x1x2_square():
    mu = PolyDensity(2, MultiPoly(2, {(1, 1): 1}))
    est, se = mc_integrate(mu, box([1, 1]), 100_000, RngSpec(8))
    assert abs(est - 0.25) <= 4 * se


def test_integrate_constant_matches_volume_behavior():
    mu = PolyDensity.lebesgue(2)
    est, se = mc_integrate(mu, simplex(2), 50_000, RngSpec(9))
    assert abs(est - 0.5) <= 4 * se


def test_integrate_x1_simplex():
    mu = PolyDensity(2, MultiPoly(2, {(1, 0): 1}))
    est, se = mc_integrate(mu, simplex(2), 100_000, RngSpec(10))
    assert abs(est - 1.0 / 6.0) <= 4 * se


def test_solid_angle_octant_3d():
    cone = NormalCone(3, ((Fraction(1), Fraction(0), Fraction(0)),
                          (Fraction(0), Fraction(1), Fraction(0)),
                          (Fraction(0), Fraction(0), Fraction(1))))
    est, se = mc_solid_angle(cone, 100_000, RngSpec(11))
    assert abs(est - 0.125) <= 4 * se


def test_solid_angle_halfplane_2d():
    # cone spanning a closed half-plane boundary: generators e1, -e1 ... not pointed;
    # use a near-half cone instead: generators e1 and -e1 + tiny e2 is pointed
    cone = NormalCone(2, ((Fraction(1), Fraction(0)),
                          (Fraction(-1), Fraction(1, 1000))))
    est, se = mc_solid_angle(cone, 200_000, RngSpec(12))
    assert abs(est - 0.5) <= 4 * se + 1e-3


def test_solid_angle_4d_two_seeds_agree():
    cone = NormalCone(4, tuple(
        tuple(Fraction(1 if i == j else 0) for j in range(4)) for i in range(4)))
    a, sa = mc_solid_angle(cone, 120_000, RngSpec(13))
    b, sb = mc_solid_angle(cone, 120_000, RngSpec(14))
    assert abs(a - b) <= 4 * (sa ** 2 + sb ** 2) ** 0.5
    assert abs(a - 1 / 16) <= 4 * sa


def test_coverage_over_20_seeds():
    # 95% interval should capture the exact value at least 17 times out of 20
    p = simplex(2)
    exact = 0.5
    hits = 0
    for seed in range(20):
        est, se = mc_volume(p, 20_000, RngSpec(seed))
        if abs(est - exact) <= 2 * se:
            hits += 1
    assert hits >= 17
