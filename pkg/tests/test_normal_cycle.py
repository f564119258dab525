"""Normal cycles: external angles, intrinsic volumes, curvature valuations."""

import random
from fractions import Fraction
from itertools import combinations

import pytest

from valgebra.approx import error_of, is_exact, to_float, val_close
from valgebra.errors import DegenerateInput, NotFullDimensional
from valgebra.normal_cycle import (build_normal_cycle, curvature_measure,
                                   curvature_valuation, external_angle,
                                   intrinsic_volumes)
from valgebra.oracle import RngSpec, mc_solid_angle
from valgebra.polytope import (NormalCone, box, convex_hull, segment, simplex)
from valgebra.ring import MultiPoly

SQ = box([1, 1])


def rand_polytope(rng, n, span=3):
    while True:
        pts = [tuple(Fraction(rng.randint(-span, span), rng.randint(1, 2))
                     for _ in range(n)) for _ in range(rng.randint(n + 2, 2 * n + 3))]
        p = convex_hull(pts, n)
        if p.affine_dim == n:
            return p


def e_k(sides, k):
    total = Fraction(0)
    for combo in combinations(sides, k):
        term = Fraction(1)
        for s in combo:
            term *= s
        total += term
    return total


# -- external angles -----------------------------------------------------------

def test_orthant_angles():
    c2 = NormalCone(2, ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))))
    assert external_angle(c2) == Fraction(1, 4)
    c3 = NormalCone(3, tuple(tuple(Fraction(1 if i == j else 0) for j in range(3))
                             for i in range(3)))
    assert external_angle(c3) == Fraction(1, 8)


def test_ray_angle_is_half():
    ray = NormalCone(2, ((Fraction(0), Fraction(1)),))
    assert external_angle(ray) == Fraction(1, 2)


def test_cone_of_origin_is_one():
    assert external_angle(NormalCone(2, ())) == Fraction(1)


def test_non_pointed_rejected():
    line = NormalCone(2, ((Fraction(1), Fraction(0)), (Fraction(-1), Fraction(0))))
    with pytest.raises(DegenerateInput):
        external_angle(line)


def test_2d_closed_form():
    # cone spanned by e1 and the diagonal: 45 degrees -> 1/8
    cone = NormalCone(2, ((Fraction(1), Fraction(0)), (Fraction(1), Fraction(1))))
    a = external_angle(cone)
    assert a.method == "closed_form_2d"
    assert abs(a.value - 0.125) < 1e-12


def test_girard_matches_monte_carlo():
    rng = random.Random(91)
    for _ in range(4):
        p = rand_polytope(rng, 3)
        f = p.faces(0)[0]
        cone = p.normal_cone(f)
        exact_or_g = external_angle(cone)
        est, se = mc_solid_angle(cone, 200_000, RngSpec(400))
        assert abs(to_float(exact_or_g) - est) <= 4 * se + 1e-9


def test_angle_dilation_invariant():
    rng = random.Random(93)
    p = rand_polytope(rng, 2)
    for f in p.faces(0):
        a = external_angle(p.normal_cone(f))
        b = external_angle(p.scale(3).normal_cone(
            next(g for g in p.scale(3).faces(0)
                 if g.vertices[0] == tuple(3 * c for c in f.vertices[0]))))
        assert val_close(a, b, slack=1e-12)


# -- normal cycles ---------------------------------------------------------------

def test_square_cycle_components():
    nc = build_normal_cycle(SQ)
    assert len(nc.components) == 9
    vertex_angles = [c.angle for c in nc.components if c.face.dim == 0]
    assert vertex_angles == [Fraction(1, 4)] * 4
    assert nc.vertex_angle_sum() == 1


def test_cube_cycle_components():
    nc = build_normal_cycle(box([1, 1, 1]))
    assert len(nc.components) == 27
    assert nc.vertex_angle_sum() == 1


def test_cycle_needs_full_dim():
    with pytest.raises(NotFullDimensional):
        build_normal_cycle(segment((0, 0), (1, 1)))


def test_vertex_angle_sum_boxes_exact():
    rng = random.Random(97)
    for n in (2, 3):
        sides = [Fraction(rng.randint(1, 5), rng.randint(1, 3)) for _ in range(n)]
        nc = build_normal_cycle(box(sides))
        assert nc.vertex_angle_sum() == 1


def test_vertex_angle_sum_simplices_3d():
    rng = random.Random(101)
    for _ in range(3):
        p = rand_polytope(rng, 3)
        total = build_normal_cycle(p).vertex_angle_sum()
        assert abs(to_float(total) - 1.0) <= 1e-9


def test_vertex_angle_sum_4d_monte_carlo():
    nc = build_normal_cycle(simplex(4), rng=RngSpec(4040), mc_samples=60_000)
    total = nc.vertex_angle_sum()
    assert abs(to_float(total) - 1.0) <= 4 * error_of(total)


# -- intrinsic volumes ------------------------------------------------------------

def test_unit_cube_intrinsic():
    assert intrinsic_volumes(box([1, 1, 1])) == [1, 3, 3, 1]


def test_unit_square_intrinsic():
    assert intrinsic_volumes(SQ) == [1, 2, 1]


def test_box_intrinsic_elementary_symmetric():
    rng = random.Random(103)
    for n in (2, 3):
        sides = [Fraction(rng.randint(1, 6), rng.randint(1, 4)) for _ in range(n)]
        vols = intrinsic_volumes(box(sides))
        for k in range(n + 1):
            assert vols[k] == e_k(sides, k)


def test_simplex_intrinsic_top_and_bottom():
    vols = intrinsic_volumes(simplex(3))
    assert vols[3] == Fraction(1, 6)
    assert abs(to_float(vols[0]) - 1.0) <= 1e-9


def test_intrinsic_dilation_covariance():
    rng = random.Random(107)
    p = rand_polytope(rng, 2)
    vols = intrinsic_volumes(p)
    for t in (2, 3):
        scaled = intrinsic_volumes(p.scale(t))
        for k in range(3):
            expect = to_float(vols[k]) * t ** k
            assert abs(to_float(scaled[k]) - expect) <= 1e-9 * max(1.0, abs(expect))


def test_perimeter_consistency_2d():
    rng = random.Random(109)
    for _ in range(3):
        p = rand_polytope(rng, 2)
        vols = intrinsic_volumes(p)
        perimeter = 0.0
        ring = p.ring_order()
        for i in range(len(ring)):
            u = p.vertices[ring[i]]
            v = p.vertices[ring[(i + 1) % len(ring)]]
            perimeter += sum((float(a) - float(b)) ** 2 for a, b in zip(u, v)) ** 0.5
        assert abs(2 * to_float(vols[1]) - perimeter) <= 1e-9 * max(1.0, perimeter)


# -- curvature measures ------------------------------------------------------------

def test_curvature_weight_one_is_intrinsic():
    cube = box([1, 1, 1])
    one = MultiPoly.constant(3, 1)
    for k in range(4):
        assert curvature_measure(cube, k, one) == intrinsic_volumes(cube)[k]


def test_curvature_x1_on_square():
    assert curvature_measure(SQ, 1, MultiPoly(2, {(1, 0): 1})) == 1


def test_curvature_top_is_density_integral():
    from valgebra.density import PolyDensity, integrate
    w = MultiPoly(2, {(1, 1): 1})
    assert curvature_measure(SQ, 2, w) == integrate(PolyDensity(2, w), SQ)


def test_curvature_linear_in_weight():
    w1 = MultiPoly(2, {(1, 0): 1})
    w2 = MultiPoly(2, {(0, 1): 2, (0, 0): 1})
    lhs = curvature_measure(SQ, 1, w1 + w2)
    assert lhs == curvature_measure(SQ, 1, w1) + curvature_measure(SQ, 1, w2)


# -- curvature valuations ------------------------------------------------------------

def test_cycle_euler_on_probes():
    rng = random.Random(113)
    chi = curvature_valuation(2, [(0, 1)])
    for p in [SQ, convex_hull([(3, 4)]), segment((0, 0), (1, 2)), rand_polytope(rng, 2)]:
        v = chi.evaluate(p)
        assert val_close(v, Fraction(1), slack=1e-9)


def test_cycle_volume_valuation():
    vol = curvature_valuation(2, [(2, 1)])
    assert vol.evaluate(SQ) == 1
    assert vol.evaluate(segment((0, 0), (1, 1))) == 0


def test_cycle_split_example_from_halves():
    v1 = curvature_valuation(2, [(1, 1)])
    assert v1.evaluate(SQ) == 2
    lo, hi = SQ.split_by_hyperplane((1, 0), Fraction(1, 2))
    shared = SQ.hyperplane_section((1, 0), Fraction(1, 2))
    assert v1.evaluate(lo) == Fraction(3, 2)
    assert v1.evaluate(hi) == Fraction(3, 2)
    assert v1.evaluate(shared) == 1
    assert v1.evaluate(lo) + v1.evaluate(hi) - v1.evaluate(shared) == v1.evaluate(SQ)


def test_cycle_valuation_identity_box_splits_exact():
    rng = random.Random(127)
    phi = curvature_valuation(2, [(0, 1), (1, MultiPoly(2, {(1, 0): 1, (0, 0): 1}))])
    for _ in range(3):
        sides = [Fraction(rng.randint(1, 4), rng.randint(1, 2)) for _ in range(2)]
        b = box(sides)
        c = sides[0] / 2
        lo, hi = b.split_by_hyperplane((1, 0), c)
        shared = b.hyperplane_section((1, 0), c)
        lhs = phi.evaluate(b)
        rhs = phi.evaluate(lo) + phi.evaluate(hi) - phi.evaluate(shared)
        assert lhs == rhs  # everything orthant-equivalent: exact


def test_cycle_valuation_identity_general_splits():
    rng = random.Random(131)
    phi = curvature_valuation(2, [(1, 1)])
    for _ in range(4):
        p = rand_polytope(rng, 2)
        lo_box, hi_box = p.bounding_box()
        normal = (Fraction(1), Fraction(rng.randint(-1, 1)))
        c = (p.support(normal) + min(sum(a * b for a, b in zip(normal, v))
                                     for v in p.vertices)) / 2
        lo, hi = p.split_by_hyperplane(normal, c)
        shared = p.hyperplane_section(normal, c)
        lhs = phi.evaluate(p)
        rhs_parts = [phi.evaluate(lo), phi.evaluate(hi), phi.evaluate(shared)]
        rhs = to_float(rhs_parts[0]) + to_float(rhs_parts[1]) - to_float(rhs_parts[2])
        assert abs(to_float(lhs) - rhs) <= 1e-9


def test_cycle_valuation_on_point():
    phi = curvature_valuation(2, [(0, MultiPoly(2, {(1, 0): 1})), (1, 1)])
    p = convex_hull([(Fraction(3), Fraction(7))])
    assert phi.evaluate(p) == 3  # weight x1 at the point, no 1-faces
