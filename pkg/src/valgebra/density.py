"""Exact integration of polynomial densities over polytopes and their faces.

The full-dimensional integral maps each triangulation simplex onto the
standard simplex, pulls the polynomial back (exact composition) and applies
the closed monomial formula

    integral over the standard simplex of y^beta  =  (prod beta_i!) / (|beta| + n)!

so no quadrature is involved anywhere.  Face integrals use the k-dimensional
Euclidean measure on the face's affine hull; the Gram normalizer is an exact
square root when it is a perfect square (axis-aligned faces) and a tagged
high-precision approximation otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .approx import Value, sqrt_value, val_mul
from .errors import DimensionMismatch
from .linalg import det, dot
from .polytope import Face, Polytope
from .ring import MultiPoly


@dataclass(frozen=True)
class PolyDensity:
    """Polynomial density F(y) dy with respect to standard Lebesgue measure."""
    ambient_dim: int
    poly: MultiPoly

    def __post_init__(self):
        if self.poly.nvars != self.ambient_dim:
            raise DimensionMismatch(
                f"density polynomial has {self.poly.nvars} variables, "
                f"expected {self.ambient_dim}")

    @property
    def degree(self) -> int:
        return self.poly.degree()

    @staticmethod
    def lebesgue(n: int) -> "PolyDensity":
        return PolyDensity(n, MultiPoly.constant(n, 1))

    def to_record(self) -> dict:
        return {"monomials": self.poly.to_records()}

    @staticmethod
    def from_record(n: int, record: dict) -> "PolyDensity":
        return PolyDensity(n, MultiPoly.from_records(n, record["monomials"]))


def _standard_simplex_integral(poly: MultiPoly) -> Fraction:
    """Exact integral of a polynomial over {y >= 0, sum y <= 1} in R^nvars."""
    n = poly.nvars
    total = Fraction(0)
    for beta, coeff in poly.terms.items():
        num = 1
        for e in beta:
            num *= factorial(e)
        total += coeff * Fraction(num, factorial(sum(beta) + n))
    return total


def integrate(mu: PolyDensity, p: Polytope) -> Fraction:
    """Exact integral of the density over the polytope; 0 when lower-dimensional."""
    n = p.ambient_dim
    if mu.ambient_dim != n:
        raise DimensionMismatch(
            f"density lives in dim {mu.ambient_dim}, polytope in dim {n}")
    if mu.poly.is_zero() or p.affine_dim < n:
        return Fraction(0)
    if mu.poly.degree() == 0:
        return mu.poly.coeff((0,) * n) * p.volume()
    total = Fraction(0)
    for simplex in p.triangulate():
        v0 = simplex.vertices[0]
        cols = [tuple(x - y for x, y in zip(v, v0)) for v in simplex.vertices[1:]]
        jac = abs(det([[cols[j][i] for j in range(n)] for i in range(n)]))
        if jac == 0:
            continue
        matrix = [[cols[j][i] for j in range(n)] for i in range(n)]
        pulled = mu.poly.compose_affine(v0, matrix)
        total += jac * _standard_simplex_integral(pulled)
    return total


def _gram_det(cols: Sequence[Sequence[Fraction]],
              metric: Sequence[Sequence[Fraction]] | None) -> Fraction:
    k = len(cols)
    if metric is None:
        gram = [[dot(cols[i], cols[j]) for j in range(k)] for i in range(k)]
    else:
        mc = [[dot(row, c) for row in metric] for c in cols]  # mc[j] = M @ cols[j]
        gram = [[dot(cols[i], mc[j]) for j in range(k)] for i in range(k)]
    return det(gram)


def integrate_over_face(weight: MultiPoly, face: Face,
                        metric: Sequence[Sequence[Fraction]] | None = None) -> Value:
    """Integral of an ambient polynomial over a k-face, against k-dim measure.

    With weight 1 this is the k-volume of the face.  The result is exact
    whenever the Gram determinant of the face frame is a perfect square;
    otherwise it carries a "sqrt" approximation tag.  An optional rational
    metric replaces the standard inner product (used when a lower-dimensional
    polytope is handled inside its affine hull).
    """
    sub = face.polytope
    n = sub.ambient_dim
    if weight.nvars != n:
        raise DimensionMismatch("weight polynomial has the wrong variable count")
    k = sub.affine_dim
    if k == 0:
        return weight.eval_at(sub.vertices[0])
    if k == n:
        base = integrate(PolyDensity(n, weight), sub)
        if metric is None:
            return base
        return val_mul(base, sqrt_value(det(metric)))
    p0, cols, _, _ = sub.affine_frame()
    coords = sub.coordinate_polytope()
    matrix = [[cols[j][i] for j in range(k)] for i in range(n)]
    pulled = weight.compose_affine(p0, matrix)
    flat = integrate(PolyDensity(k, pulled), coords)
    return val_mul(flat, sqrt_value(_gram_det(cols, metric)))


def face_volume(face: Face, metric: Sequence[Sequence[Fraction]] | None = None) -> Value:
    """k-dimensional volume of a face (0-faces have volume 1 by convention)."""
    sub = face.polytope
    if sub.affine_dim == 0:
        return Fraction(1)
    one = MultiPoly.constant(sub.ambient_dim, 1)
    return integrate_over_face(one, face, metric)
