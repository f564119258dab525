"""Mixed-derivative valuations: evaluation, curves, filtration, decomposition."""

import random
from fractions import Fraction

import pytest

from valgebra.density import PolyDensity, integrate
from valgebra.errors import DegenerateInput, DimensionMismatch
from valgebra.polytope import box, convex_hull, minkowski_sum, segment, simplex
from valgebra.ring import MultiPoly
from valgebra.valuation import (MixedTerm, MixedValuation, default_probes,
                                density_valuation, euler_characteristic,
                                homogeneous_decomposition, lebesgue_valuation,
                                lower_dim_probes, mixed_volume, probe_bodies,
                                scaling_component, scaling_curve,
                                vanishes_below_dim, vanishing_order)

SQ = box([1, 1])
LEB2 = PolyDensity.lebesgue(2)


def leb(n):
    return lebesgue_valuation(n)


def rand_polytope(rng, n):
    while True:
        pts = [tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 2)) for _ in range(n))
               for _ in range(rng.randint(n + 2, 2 * n + 3))]
        p = convex_hull(pts, n)
        if p.affine_dim == n:
            return p


def rand_valuation(rng, n, max_bodies=2):
    terms = []
    for _ in range(rng.randint(1, 2)):
        coeff = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
        if coeff == 0:
            coeff = Fraction(1)
        exps = tuple(rng.randint(0, 1) for _ in range(n))
        dens = PolyDensity(n, MultiPoly(n, {exps: 1, (0,) * n: Fraction(1, 2)}))
        bodies = tuple(rand_polytope(rng, n) for _ in range(rng.randint(0, max_bodies)))
        terms.append(MixedTerm(coeff, dens, bodies))
    return MixedValuation(n, terms)


# -- term evaluation ----------------------------------------------------------

def test_segment_term_on_square():
    phi = MixedValuation(2, [MixedTerm(Fraction(1), LEB2, (segment((0, 0), (1, 0)),))])
    assert phi.evaluate(SQ) == 1  # vol(K + t seg) = 1 + t


def test_two_square_bodies_term():
    phi = MixedValuation(2, [MixedTerm(Fraction(1), LEB2, (SQ, SQ))])
    assert phi.evaluate(SQ) == 2  # multilinear coefficient of (1+a+b)^2


def test_no_bodies_is_plain_integral():
    cube = box([1, 1, 1])
    assert leb(3).evaluate(cube) == 1


def test_more_bodies_than_degree_gives_zero():
    seg = segment((0, 0), (1, 0))
    phi = MixedValuation(2, [MixedTerm(Fraction(1), LEB2, (seg, seg, seg))])
    assert phi.evaluate(SQ) == 0


def test_evaluation_linear_in_terms():
    rng = random.Random(51)
    a, b = rand_valuation(rng, 2), rand_valuation(rng, 2)
    k = rand_polytope(rng, 2)
    assert (a + b).evaluate(k) == a.evaluate(k) + b.evaluate(k)
    assert a.scale(Fraction(3, 2)).evaluate(k) == Fraction(3, 2) * a.evaluate(k)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        leb(2).evaluate(box([1, 1, 1]))


def test_valuation_identity_on_splits():
    rng = random.Random(53)
    for _ in range(6):
        phi = rand_valuation(rng, 2, max_bodies=1)
        p = rand_polytope(rng, 2)
        lo, hi = p.bounding_box()
        axis = rng.randrange(2)
        c = (lo[axis] + hi[axis]) / 2
        normal = tuple(Fraction(1 if i == axis else 0) for i in range(2))
        a, b = p.split_by_hyperplane(normal, c)
        shared = p.hyperplane_section(normal, c)
        assert phi.evaluate(p) == phi.evaluate(a) + phi.evaluate(b) - phi.evaluate(shared)


# -- scaling curves -----------------------------------------------------------

def test_lebesgue_curve_is_t_squared():
    curve = scaling_curve(leb(2), SQ, (0, 0))
    assert curve == MultiPoly(1, {(2,): 1})


def test_euler_curve_is_constant_one():
    chi = euler_characteristic(2)
    curve = scaling_curve(chi, SQ, (Fraction(1, 3), Fraction(-2, 5)))
    assert curve == MultiPoly.constant(1, 1)


def test_density_curve_with_base_point():
    phi = density_valuation(PolyDensity(2, MultiPoly(2, {(1, 0): 1})))
    curve = scaling_curve(phi, SQ, (1, 0))
    assert curve == MultiPoly(1, {(2,): 1, (3,): Fraction(1, 2)})


def test_curve_at_one_is_translate_value():
    rng = random.Random(57)
    phi = rand_valuation(rng, 2, max_bodies=1)
    k = rand_polytope(rng, 2)
    x = (Fraction(1, 3), Fraction(-1, 2))
    curve = scaling_curve(phi, k, x)
    assert curve.eval_at([1]) == phi.evaluate(k.translate(x))


# -- homogeneous components ---------------------------------------------------

def test_component_of_lebesgue():
    comp = scaling_component(leb(2), 2, (Fraction(2), Fraction(-1)))
    assert comp.evaluate(SQ) == 1


def test_component_zero_of_euler():
    comp = scaling_component(euler_characteristic(2), 0, (0, 0))
    assert comp.evaluate(SQ) == 1
    assert comp.evaluate(convex_hull([(4, 5)])) == 1


def test_density_recovery_leading_component():
    # top component of K -> integral of F recovers F(x) vol(K)
    f = MultiPoly(2, {(1, 0): 1})
    phi = density_valuation(PolyDensity(2, f))
    comp = scaling_component(phi, 2, (1, 0))
    assert comp.evaluate(SQ) == 1 * SQ.volume()


def test_component_translation_invariance_and_homogeneity():
    rng = random.Random(61)
    n = 2
    for _ in range(4):
        bodies = tuple(rand_polytope(rng, n) for _ in range(1))
        phi = MixedValuation(n, [MixedTerm(Fraction(1), LEB2, bodies)])
        k = n - len(bodies)
        x = (Fraction(rng.randint(-2, 2)), Fraction(rng.randint(-2, 2)))
        comp = scaling_component(phi, k, x)
        p = rand_polytope(rng, n)
        base = comp.evaluate(p)
        for shift in [(1, 0), (Fraction(-1, 2), Fraction(1, 3))]:
            assert comp.evaluate(p.translate(shift)) == base
        for t in (2, 3):
            assert comp.evaluate(p.scale(t)) == Fraction(t) ** k * base


# -- vanishing order ----------------------------------------------------------

def test_vanishing_orders_of_basic_valuations():
    probes = default_probes(2, random_count=3)
    assert vanishing_order(leb(2), probes) == 2
    assert vanishing_order(euler_characteristic(2), probes) == 0


def test_theta_term_order_lower_bound():
    rng = random.Random(63)
    probes = default_probes(2, random_count=2)
    for s in (1, 2):
        bodies = tuple(rand_polytope(rng, 2) for _ in range(s))
        dens = PolyDensity(2, MultiPoly(2, {(1, 0): 1, (0, 0): 1}))
        phi = MixedValuation(2, [MixedTerm(Fraction(1), dens, bodies)])
        assert vanishing_order(phi, probes) >= 2 - s


def test_all_vanishing_returns_bound_plus_one():
    zero = MixedValuation(2, [])
    probes = default_probes(2, random_count=1)
    assert vanishing_order(zero, probes) == zero.t_degree_bound + 1


def test_bounded_curve_degree_implies_zero():
    # constant-density valuation whose curve coefficients all vanish on a probe
    # set evaluates to zero there
    zero = leb(2).scale(0)
    probes = default_probes(2, random_count=2)
    assert vanishing_order(zero, probes) == zero.t_degree_bound + 1
    for k, x in probes:
        assert zero.evaluate(k.translate(x)) == 0


# -- dimension filtration -------------------------------------------------------

def test_lebesgue_vanishes_below_two():
    assert vanishes_below_dim(leb(2), 2, lower_dim_probes(2, 2))


def test_euler_does_not_vanish_on_points():
    assert not vanishes_below_dim(euler_characteristic(2), 1, lower_dim_probes(2, 1))


def test_one_body_terms_vanish_on_points():
    # valuations whose terms carry n-1 bodies kill points
    rng = random.Random(67)
    for _ in range(3):
        phi = MixedValuation(2, [MixedTerm(Fraction(2, 3), LEB2, (rand_polytope(rng, 2),))])
        assert vanishes_below_dim(phi, 1, lower_dim_probes(2, 1))


def test_missing_probe_dimension_raises():
    with pytest.raises(Exception):
        vanishes_below_dim(leb(2), 2, [convex_hull([(0, 0)])])


# -- mixed volume ---------------------------------------------------------------

def test_mixed_volume_diagonal_is_volume():
    assert mixed_volume([SQ, SQ]) == 1


def test_mixed_volume_square_segment():
    assert mixed_volume([SQ, segment((0, 0), (0, 1))]) == Fraction(1, 2)


def test_mixed_volume_two_segments():
    e1, e2 = segment((0, 0), (1, 0)), segment((0, 0), (0, 1))
    assert mixed_volume([e1, e2]) == Fraction(1, 2)


def test_mixed_volume_symmetry():
    rng = random.Random(71)
    p, q, r = (rand_polytope(rng, 3) for _ in range(3))
    v = mixed_volume([p, q, r])
    assert v == mixed_volume([q, p, r]) == mixed_volume([r, q, p])


def test_mixed_volume_wrong_count():
    with pytest.raises(DimensionMismatch):
        mixed_volume([SQ])


# -- Euler characteristic --------------------------------------------------------

def test_euler_on_all_shapes():
    chi = euler_characteristic(2)
    assert chi.evaluate(SQ) == 1
    assert chi.evaluate(convex_hull([(7, -2)])) == 1
    assert chi.evaluate(segment((0, 0), (1, 2))) == 1


def test_euler_body_independence():
    rng = random.Random(73)
    probes = [SQ, segment((0, 0), (1, 1)), convex_hull([(2, 2)]), rand_polytope(rng, 2)]
    a = euler_characteristic(2)                      # default unit-cube body
    b = euler_characteristic(2, rand_polytope(rng, 2))
    for p in probes:
        assert a.evaluate(p) == b.evaluate(p) == 1


def test_euler_degenerate_body_rejected():
    with pytest.raises(DegenerateInput):
        euler_characteristic(2, segment((0, 0), (1, 0)))


# -- homogeneous decomposition -----------------------------------------------------

def test_decompose_vol_plus_chi():
    phi = leb(2) + euler_characteristic(2)
    assert homogeneous_decomposition(phi, SQ) == [1, 0, 1]


def test_decompose_mixed_volume_valuation():
    # K -> coefficient of t in vol(K + t SQ) equals 2 V(K, SQ)
    phi = MixedValuation(2, [MixedTerm(Fraction(1), LEB2, (SQ,))])
    assert homogeneous_decomposition(phi, SQ) == [0, 2, 0]


def test_decompose_chi():
    assert homogeneous_decomposition(euler_characteristic(2), SQ) == [1, 0, 0]


def test_decompose_sums_to_value():
    rng = random.Random(77)
    phi = leb(2).scale(Fraction(2, 3)) + euler_characteristic(2)
    for _ in range(3):
        k = rand_polytope(rng, 2)
        comps = homogeneous_decomposition(phi, k)
        assert sum(comps) == phi.evaluate(k)


def test_decompose_component_homogeneity():
    phi = leb(2) + euler_characteristic(2)
    comps = homogeneous_decomposition(phi, SQ)
    for t in (2, 3):
        scaled = homogeneous_decomposition(phi, SQ.scale(t))
        for k in range(3):
            assert scaled[k] == Fraction(t) ** k * comps[k]


def test_decompose_rejects_non_invariant():
    phi = density_valuation(PolyDensity(2, MultiPoly(2, {(1, 0): 1})))
    with pytest.raises(DegenerateInput):
        homogeneous_decomposition(phi, SQ)


# -- probes -------------------------------------------------------------------

def test_probe_bodies_are_unique_and_full_dim():
    bodies = probe_bodies(2, random_count=4)
    assert len(bodies) == len(set(bodies))
    assert all(b.affine_dim == 2 for b in bodies)


def test_lower_dim_probes_cover_dimensions():
    probes = lower_dim_probes(3, 3)
    assert {p.affine_dim for p in probes} == {0, 1, 2}
