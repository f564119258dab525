"""Normal cycles of polytopes: external angles, intrinsic volumes, curvature measures.

For a full-dimensional polytope every face contributes one component
(face, outer normal cone, external angle).  External angles use the cheapest
sound method per codimension: exact dyadic rationals for orthant-equivalent
cones, a closed form in codimension 2, spherical excess in codimension 3 and
seeded Monte-Carlo above that.  Exact and approximate values never mix
silently; see :mod:`valgebra.approx`.

Lower-dimensional arguments of curvature valuations are handled intrinsically
in their affine hull, with the induced Gram metric.  Face measures transform
with the metric itself; cone normals transform with its inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import acos, pi, sqrt

import numpy as np

from .approx import Approx, Value, val_add, val_mul
from .density import integrate_over_face
from .errors import DegenerateInput, DimensionMismatch, NotFullDimensional
from .linalg import dot, matrix_inverse
from .oracle import RngSpec, mc_solid_angle
from .polytope import Face, NormalCone, Polytope
from .ring import MultiPoly
from .valuation import Valuation

DEFAULT_ANGLE_SAMPLES = 120_000
DEFAULT_ANGLE_SEED = 20260810


@dataclass(frozen=True)
class CycleComponent:
    face: Face
    cone: NormalCone
    angle: Value


@dataclass(frozen=True)
class NormalCycle:
    polytope: Polytope
    components: tuple[CycleComponent, ...]

    def vertex_angle_sum(self) -> Value:
        total: Value = Fraction(0)
        for c in self.components:
            if c.face.dim == 0:
                total = val_add(total, c.angle)
        return total


def _metric_dot(a, b, metric) -> Fraction:
    if metric is None:
        return dot(a, b)
    return dot(a, [dot(row, b) for row in metric])


def _det3(a, b, c) -> Fraction:
    return (a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def _cyclic_ray_order(rays) -> list[int]:
    """Exact cyclic order of the extreme rays of a pointed 3D cone.

    Rotation order around the interior axis w = sum of rays is decided purely
    by determinant signs, so it is independent of any metric.
    """
    w = tuple(sum(r[i] for r in rays) for i in range(3))
    ref = rays[0]

    def half(i: int) -> int:
        d = _det3(ref, rays[i], w)
        if d > 0:
            return 0
        if d < 0:
            return 1
        return 0 if i == 0 else 1  # parallel would duplicate a ray; antiparallel sits at pi

    def cmp(i: int, j: int) -> int:
        if i == j:
            return 0
        hi, hj = half(i), half(j)
        if hi != hj:
            return -1 if hi < hj else 1
        d = _det3(rays[i], rays[j], w)
        return -1 if d > 0 else 1

    return sorted(range(len(rays)), key=cmp_to_key(cmp))


def _girard_fraction(rays, metric) -> float:
    """Spherical-excess area fraction of a pointed full-dimensional 3D cone."""
    order = _cyclic_ray_order(rays)
    if metric is None:
        mapped = [np.array([float(x) for x in rays[i]]) for i in order]
    else:
        m = np.array([[float(x) for x in row] for row in metric])
        chol = np.linalg.cholesky(m)  # metric = L L^T, map r -> L^T r
        mapped = [chol.T @ np.array([float(x) for x in rays[i]]) for i in order]
    units = [v / np.linalg.norm(v) for v in mapped]
    k = len(units)
    total = 0.0
    for i in range(k):
        a, b, c = units[i - 1], units[i], units[(i + 1) % k]
        t1 = a - np.dot(a, b) * b
        t2 = c - np.dot(c, b) * b
        n1, n2 = np.linalg.norm(t1), np.linalg.norm(t2)
        if n1 == 0.0 or n2 == 0.0:
            raise DegenerateInput("coincident rays in spherical-excess computation")
        cosang = float(np.dot(t1, t2) / (n1 * n2))
        total += acos(max(-1.0, min(1.0, cosang)))
    area = total - (k - 2) * pi
    return area / (4.0 * pi)


def external_angle(cone: NormalCone, metric=None,
                   rng: RngSpec | None = None,
                   mc_samples: int = DEFAULT_ANGLE_SAMPLES) -> Value:
    """Fraction of the unit sphere of span(cone) covered by the cone.

    metric, when given, is the Gram matrix of the coordinate frame the cone's
    *normal vectors* live in; angles then refer to the geometry whose normals
    these are (the inverse Gram is applied internally).
    """
    c = cone.dim()
    if c == 0:
        return Fraction(1)
    if not cone.is_pointed():
        raise DegenerateInput("external angle of a non-pointed cone")
    cone_metric = matrix_inverse(metric) if metric is not None else None
    rays = cone.extreme_rays()
    if len(rays) == c and all(
            _metric_dot(rays[i], rays[j], cone_metric) == 0
            for i in range(c) for j in range(i + 1, c)):
        return Fraction(1, 2 ** c)
    if c == 1:
        return Fraction(1, 2)
    if c == 2:
        u, v = rays[0], rays[1]
        num = float(_metric_dot(u, v, cone_metric))
        den = sqrt(float(_metric_dot(u, u, cone_metric))
                   * float(_metric_dot(v, v, cone_metric)))
        theta = acos(max(-1.0, min(1.0, num / den)))
        return Approx(theta / (2.0 * pi), 1e-12, "closed_form_2d")
    if c == 3 and cone.ambient_dim == 3:
        frac = _girard_fraction(rays, cone_metric)
        return Approx(frac, 1e-11 * len(rays), "girard_3d")
    spec = rng if rng is not None else RngSpec(DEFAULT_ANGLE_SEED)
    est, se = mc_solid_angle(cone, mc_samples, spec, metric=cone_metric)
    return Approx(est, se, "monte_carlo",
                  {"seed": spec.seed, "samples": mc_samples, "sigma": 1})


def _face_rng(base: RngSpec, face: Face) -> RngSpec:
    token = tuple(face.vertex_indices)
    return base.derive("external_angle", face.dim, token)


def build_normal_cycle(p: Polytope, rng: RngSpec | None = None,
                       mc_samples: int = DEFAULT_ANGLE_SAMPLES) -> NormalCycle:
    """One component per face of every dimension, angles tagged by method."""
    if not p.is_full_dimensional():
        raise NotFullDimensional("normal cycles require a full-dimensional polytope")
    base = rng if rng is not None else RngSpec(DEFAULT_ANGLE_SEED)
    comps = []
    for face in p.all_faces():
        cone = p.normal_cone(face)
        if face.dim == p.ambient_dim:
            angle: Value = Fraction(1)
        else:
            angle = external_angle(cone, rng=_face_rng(base, face), mc_samples=mc_samples)
        comps.append(CycleComponent(face, cone, angle))
    return NormalCycle(p, tuple(comps))


def curvature_measure(p: Polytope, k: int, weight: MultiPoly, metric=None,
                      rng: RngSpec | None = None,
                      mc_samples: int = DEFAULT_ANGLE_SAMPLES) -> Value:
    """Sum over k-faces of external angle times the face integral of the weight."""
    n = p.ambient_dim
    if not 0 <= k <= n:
        raise ValueError(f"face dimension {k} out of range")
    if not p.is_full_dimensional():
        raise NotFullDimensional("curvature measures require a full-dimensional polytope")
    base = rng if rng is not None else RngSpec(DEFAULT_ANGLE_SEED)
    total: Value = Fraction(0)
    for face in p.faces(k):
        if face.dim == n:
            angle: Value = Fraction(1)
        else:
            angle = external_angle(p.normal_cone(face), metric=metric,
                                   rng=_face_rng(base, face), mc_samples=mc_samples)
        part = integrate_over_face(weight, face, metric=metric)
        total = val_add(total, val_mul(angle, part))
    return total


def intrinsic_volumes(p: Polytope, rng: RngSpec | None = None,
                      mc_samples: int = DEFAULT_ANGLE_SAMPLES) -> list[Value]:
    """[V_0, ..., V_n]; V_n is the volume, V_0 is 1 up to angle precision."""
    one = MultiPoly.constant(p.ambient_dim, 1)
    return [curvature_measure(p, k, one, rng=rng, mc_samples=mc_samples)
            for k in range(p.ambient_dim + 1)]


class CurvatureValuation(Valuation):
    """K -> sum over (k, weight) pairs of the k-th curvature measure of K.

    Lower-dimensional arguments are evaluated inside their affine hull with
    the induced metric, which is what makes the valuation identity hold across
    hyperplane splits.
    """

    def __init__(self, ambient_dim: int, pairs, rng: RngSpec | None = None,
                 mc_samples: int = DEFAULT_ANGLE_SAMPLES):
        self.ambient_dim = ambient_dim
        checked = []
        for k, weight in pairs:
            if not 0 <= k <= ambient_dim:
                raise ValueError(f"face dimension {k} out of range")
            if isinstance(weight, (int, Fraction)):
                weight = MultiPoly.constant(ambient_dim, weight)
            if weight.nvars != ambient_dim:
                raise DimensionMismatch("weight polynomial has the wrong variable count")
            checked.append((k, weight))
        self.pairs = tuple(checked)
        self.rng = rng if rng is not None else RngSpec(DEFAULT_ANGLE_SEED)
        self.mc_samples = mc_samples

    @property
    def t_degree_bound(self) -> int:
        degs = [max(w.degree(), 0) for _, w in self.pairs]
        return self.ambient_dim + (max(degs) if degs else 0)

    def evaluate(self, p: Polytope) -> Value:
        self._check_arg(p)
        m = p.affine_dim
        if m == 0:
            point = p.vertices[0]
            total: Value = Fraction(0)
            for k, w in self.pairs:
                if k == 0:
                    total = val_add(total, w.eval_at(point))
            return total
        if m == p.ambient_dim:
            total = Fraction(0)
            for k, w in self.pairs:
                total = val_add(total, curvature_measure(
                    p, k, w, rng=self.rng, mc_samples=self.mc_samples))
            return total
        # intrinsic evaluation in the affine hull
        coords = p.coordinate_polytope()
        p0, cols, _, _ = p.affine_frame()
        gram = [[dot(ci, cj) for cj in cols] for ci in cols]
        matrix = [[cols[j][i] for j in range(m)] for i in range(p.ambient_dim)]
        total = Fraction(0)
        for k, w in self.pairs:
            if k > m:
                continue
            pulled = w.compose_affine(p0, matrix)
            total = val_add(total, curvature_measure(
                coords, k, pulled, metric=gram, rng=self.rng,
                mc_samples=self.mc_samples))
        return total


def curvature_valuation(ambient_dim: int, pairs, rng: RngSpec | None = None,
                        mc_samples: int = DEFAULT_ANGLE_SAMPLES) -> CurvatureValuation:
    return CurvatureValuation(ambient_dim, pairs, rng, mc_samples)
