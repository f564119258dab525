"""Valuations built from mixed derivatives of density integrals.

A `MixedValuation` is a finite sum of terms (coefficient, polynomial density,
tuple of reference bodies).  A term with bodies A_1..A_s evaluates on K as the
coefficient of the multilinear monomial in the polynomial

    (t_1, ..., t_s)  ->  integral of the density over  K + t_1 A_1 + ... + t_s A_s,

recovered exactly by sampling on an integer grid and interpolating.  The same
grid trick yields scaling curves t -> phi(tK + x), whose coefficients drive
homogeneous components, vanishing-order certificates and mixed volumes.
"""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .density import PolyDensity, integrate
from .errors import DegenerateInput, DimensionMismatch, EmptyInput
from .polytope import Point, Polytope, as_point, box, convex_hull, minkowski_sum
from .ring import MultiPoly, interpolate_from_grid


class Valuation(ABC):
    """Contract: evaluate on a polytope, with a declared scaling-degree bound.

    Every implementation satisfies the valuation identity
    phi(P1 u P2) = phi(P1) + phi(P2) - phi(P1 n P2) on convex splits, which the
    test-suite checks rather than assumes.
    """

    ambient_dim: int
    t_degree_bound: int

    @abstractmethod
    def evaluate(self, p: Polytope) -> Fraction:
        ...

    def _check_arg(self, p: Polytope) -> None:
        if p.ambient_dim != self.ambient_dim:
            raise DimensionMismatch(
                f"valuation lives in dim {self.ambient_dim}, argument in {p.ambient_dim}")


@dataclass(frozen=True)
class MixedTerm:
    coeff: Fraction
    density: PolyDensity
    bodies: tuple[Polytope, ...]

    def __post_init__(self):
        for b in self.bodies:
            if b.ambient_dim != self.density.ambient_dim:
                raise DimensionMismatch("term bodies must share the density's dimension")


def _term_value(term: MixedTerm, k: Polytope) -> Fraction:
    if term.coeff == 0 or term.density.poly.is_zero():
        return Fraction(0)
    s = len(term.bodies)
    if s == 0:
        return term.coeff * integrate(term.density, k)
    n = term.density.ambient_dim
    grid_bound = n + max(term.density.degree, 0)
    if s > grid_bound:
        # the sample polynomial has total degree <= grid_bound, so the
        # multilinear coefficient in more variables than that is zero
        return Fraction(0)
    scaled = [[None] + [b.scale(t) for t in range(1, grid_bound + 1)]
              for b in term.bodies]
    samples: dict[tuple[int, ...], Fraction] = {}

    def walk(j: int, current: Polytope, idx: tuple[int, ...]) -> None:
        if j == s:
            samples[idx] = integrate(term.density, current)
            return
        walk(j + 1, current, idx + (0,))
        for t in range(1, grid_bound + 1):
            walk(j + 1, minkowski_sum(current, scaled[j][t]), idx + (t,))

    walk(0, k, ())
    poly = interpolate_from_grid(samples, s, grid_bound)
    return term.coeff * poly.coeff((1,) * s)


class MixedValuation(Valuation):
    """Finite sum of mixed-derivative terms; linear in the term list."""

    def __init__(self, ambient_dim: int, terms=()):
        self.ambient_dim = ambient_dim
        clean = []
        for t in terms:
            if t.density.ambient_dim != ambient_dim:
                raise DimensionMismatch("term dimension differs from the valuation's")
            if t.coeff != 0:
                clean.append(t)
        self.terms: tuple[MixedTerm, ...] = tuple(clean)

    @property
    def t_degree_bound(self) -> int:
        degs = [max(t.density.degree, 0) for t in self.terms]
        return self.ambient_dim + (max(degs) if degs else 0)

    def evaluate(self, p: Polytope) -> Fraction:
        self._check_arg(p)
        return sum((_term_value(t, p) for t in self.terms), Fraction(0))

    def __add__(self, other: "MixedValuation") -> "MixedValuation":
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("cannot add valuations in different dimensions")
        return MixedValuation(self.ambient_dim, self.terms + other.terms)

    def scale(self, c) -> "MixedValuation":
        c = Fraction(c)
        return MixedValuation(
            self.ambient_dim,
            tuple(MixedTerm(c * t.coeff, t.density, t.bodies) for t in self.terms))

    def __repr__(self):
        return f"MixedValuation(dim={self.ambient_dim}, {len(self.terms)} terms)"


def lebesgue_valuation(n: int) -> MixedValuation:
    """K -> vol(K)."""
    return MixedValuation(n, [MixedTerm(Fraction(1), PolyDensity.lebesgue(n), ())])


def density_valuation(mu: PolyDensity) -> MixedValuation:
    """K -> integral of the density over K."""
    return MixedValuation(mu.ambient_dim, [MixedTerm(Fraction(1), mu, ())])


def euler_characteristic(n: int, body: Polytope | None = None) -> MixedValuation:
    """The constant-1 valuation, realized with a reference body of positive volume.

    The mixed derivative of vol(K + sum t_i A) in all n parameters equals
    n! vol(A) for every nonempty K, so the normalized term evaluates to 1
    everywhere; the result does not depend on the chosen body (tested).
    """
    if body is None:
        body = box([1] * n)
    if body.ambient_dim != n:
        raise DimensionMismatch("reference body has the wrong dimension")
    v = body.volume()
    if v <= 0:
        raise DegenerateInput("reference body must have positive volume")
    coeff = Fraction(1, factorial(n)) / v
    return MixedValuation(n, [MixedTerm(coeff, PolyDensity.lebesgue(n), (body,) * n)])


# ---------------------------------------------------------------------------
# scaling curves and everything derived from them
# ---------------------------------------------------------------------------

def scaling_curve(phi: Valuation, k: Polytope, base_point) -> MultiPoly:
    """Exact univariate polynomial t -> phi(tK + x), degree <= phi.t_degree_bound."""
    phi._check_arg(k)
    x = as_point(base_point)
    if len(x) != phi.ambient_dim:
        raise DimensionMismatch("base point has the wrong dimension")
    bound = phi.t_degree_bound
    samples = {}
    for t in range(bound + 1):
        value = phi.evaluate(k.scale(t).translate(x))
        if not isinstance(value, Fraction):
            raise TypeError("scaling curves need an exact (rational-valued) valuation")
        samples[(t,)] = value
    return interpolate_from_grid(samples, 1, bound)


class ScalingComponent(Valuation):
    """K -> coefficient of t^k in phi(tK + x): the degree-k part at base point x.

    When phi has vanishing order >= k this is translation invariant and
    k-homogeneous (property-tested, not assumed).
    """

    def __init__(self, source: Valuation, k: int, base_point):
        if k < 0:
            raise ValueError("component degree must be non-negative")
        self.source = source
        self.k = k
        self.base_point = as_point(base_point)
        self.ambient_dim = source.ambient_dim
        self.t_degree_bound = source.t_degree_bound

    def evaluate(self, p: Polytope) -> Fraction:
        curve = scaling_curve(self.source, p, self.base_point)
        return curve.coeff((self.k,))


def scaling_component(phi: Valuation, k: int, base_point) -> ScalingComponent:
    return ScalingComponent(phi, k, base_point)


def vanishing_order(phi: Valuation, probes) -> int:
    """Largest i such that the t^0..t^{i-1} curve coefficients vanish on every probe.

    This certifies filtration membership relative to the probe family only;
    when every probe curve is identically zero the returned order is
    phi.t_degree_bound + 1.
    """
    probes = list(probes)
    if not probes:
        raise EmptyInput("need at least one probe")
    best = phi.t_degree_bound + 1
    for k, x in probes:
        curve = scaling_curve(phi, k, x)
        if curve.terms:
            best = min(best, min(idx[0] for idx in curve.terms))
            if best == 0:
                break
    return best


def vanishes_below_dim(phi: Valuation, i: int, probes) -> bool:
    """True iff phi evaluates to 0 on every probe of dimension < i.

    The probe list must contain polytopes of every dimension below i.
    """
    probes = list(probes)
    seen = {p.affine_dim for p in probes}
    missing = [d for d in range(i) if d not in seen]
    if missing:
        raise EmptyInput(f"probe family lacks dimensions {missing}")
    for p in probes:
        if p.affine_dim < i and phi.evaluate(p) != 0:
            return False
    return True


def mixed_volume(bodies) -> Fraction:
    """Symmetric mixed volume of n bodies in R^n, exact.

    Equals 1/n! times the multilinear coefficient of vol(sum t_i K_i),
    so V(K, ..., K) = vol(K).
    """
    bodies = list(bodies)
    if not bodies:
        raise EmptyInput("mixed volume of no bodies")
    n = bodies[0].ambient_dim
    if len(bodies) != n:
        raise DimensionMismatch(f"need exactly {n} bodies in dimension {n}")
    for b in bodies:
        if b.ambient_dim != n:
            raise DimensionMismatch("all bodies must share the ambient dimension")
    scaled = [[None] + [b.scale(t) for t in range(1, n + 1)] for b in bodies]
    samples: dict[tuple[int, ...], Fraction] = {}

    def walk(j: int, current: Polytope | None, idx: tuple[int, ...]) -> None:
        if j == n:
            samples[idx] = current.volume() if current is not None else Fraction(0)
            return
        walk(j + 1, current, idx + (0,))
        for t in range(1, n + 1):
            nxt = scaled[j][t] if current is None else minkowski_sum(current, scaled[j][t])
            walk(j + 1, nxt, idx + (t,))

    walk(0, None, ())
    poly = interpolate_from_grid(samples, n, n)
    return poly.coeff((1,) * n) / factorial(n)


def homogeneous_decomposition(phi: Valuation, k: Polytope) -> list[Fraction]:
    """Coefficients of t^0..t^n of phi(tK) for a translation-invariant valuation.

    Translation invariance is checked on shifted copies and through the curve
    degree; violations raise instead of returning garbage.
    """
    phi._check_arg(k)
    n = phi.ambient_dim
    base = phi.evaluate(k)
    shifts = [tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)]
    shifts.append((Fraction(1, 2),) * n)
    for a in shifts:
        if phi.evaluate(k.translate(a)) != base:
            raise DegenerateInput("valuation is not translation invariant on probes")
    curve = scaling_curve(phi, k, (Fraction(0),) * n)
    if any(idx[0] > n for idx in curve.terms):
        raise DegenerateInput(
            "scaling curve exceeds degree n; valuation is not translation invariant")
    return [curve.coeff((j,)) for j in range(n + 1)]


# ---------------------------------------------------------------------------
# probe families
# ---------------------------------------------------------------------------

DEFAULT_PROBE_SEED = 987123


def _random_polytope(n: int, rng: random.Random) -> Polytope:
    while True:
        count = rng.randint(n + 2, 2 * n + 3)
        pts = [tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(n))
               for _ in range(count)]
        p = convex_hull(pts, n)
        if p.affine_dim == n:
            return p


def probe_bodies(n: int, seed: int = DEFAULT_PROBE_SEED, random_count: int = 8):
    """Coordinate boxes, corner simplices (sides 1/2 or 1) and seeded random hulls."""
    out: list[Polytope] = []
    halves = [Fraction(1), Fraction(1, 2)]
    for mask in range(1 << n):
        sides = [halves[mask >> i & 1] for i in range(n)]
        out.append(box(sides))
    for mask in range(1 << n):
        pts = [(Fraction(0),) * n]
        for i in range(n):
            v = [Fraction(0)] * n
            v[i] = halves[mask >> i & 1]
            pts.append(tuple(v))
        out.append(convex_hull(pts, n))
    seen = set()
    unique = []
    for p in out:
        if p not in seen:
            seen.add(p)
            unique.append(p)
    rng = random.Random(seed)
    for _ in range(random_count):
        unique.append(_random_polytope(n, rng))
    return unique


def default_probes(n: int, seed: int = DEFAULT_PROBE_SEED, random_count: int = 8,
                   base_points=None) -> list[tuple[Polytope, Point]]:
    """(body, base point) pairs used by vanishing-order certificates."""
    if base_points is None:
        offsets = [Fraction(1, 3), Fraction(-1, 2), Fraction(1, 4),
                   Fraction(2, 3), Fraction(-1, 5), Fraction(1, 7)]
        base_points = [(Fraction(0),) * n, tuple(offsets[i % len(offsets)] for i in range(n))]
    bodies = probe_bodies(n, seed, random_count)
    return [(b, as_point(x)) for b in bodies for x in base_points]


def lower_dim_probes(n: int, below: int) -> list[Polytope]:
    """Polytopes of every dimension < below, embedded in R^n."""
    if below > n + 1:
        raise ValueError("no polytopes of dimension above the ambient space")
    out = []
    zero = Fraction(0)
    for d in range(below):
        if d == 0:
            out.append(convex_hull([(zero,) * n]))
            out.append(convex_hull([tuple(Fraction(1, i + 2) for i in range(n))]))
        else:
            axis_box = box([1] * d)
            pts = [v + (zero,) * (n - d) for v in axis_box.vertices]
            out.append(convex_hull(pts, n))
            # a lower-dim simplex with non-axis orientation
            spts = [(zero,) * n]
            for i in range(d):
                v = [Fraction(1, 2)] * n
                v[i] += 1
                spts.append(tuple(v))
            out.append(convex_hull(spts, n))
    return out
