"""Independent Monte-Carlo estimators used to cross-check the exact routines.

One fixed, named generator (PCG64) drives everything: identical RngSpec means
a bit-identical stream, which the test suite relies on.  Estimates are floats
by design; they certify the exact kernel, never feed back into it.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from math import sqrt

import numpy as np

from .density import PolyDensity
from .errors import DegenerateInput, NotFullDimensional
from .polytope import NormalCone, Polytope

GENERATOR = "pcg64"
DEFAULT_SAMPLES = 100_000


@dataclass(frozen=True)
class RngSpec:
    """Seed plus generator id; the only source of randomness in the package."""
    seed: int
    algorithm: str = GENERATOR

    def make(self) -> np.random.Generator:
        if self.algorithm != GENERATOR:
            raise ValueError(f"unknown generator {self.algorithm!r}")
        return np.random.Generator(np.random.PCG64(self.seed))

    def derive(self, *tokens) -> "RngSpec":
        """Deterministic sub-stream: hash the tokens into a fresh seed."""
        blob = repr((self.seed,) + tokens).encode()
        digest = hashlib.sha256(blob).digest()
        return RngSpec(int.from_bytes(digest[:8], "big"), self.algorithm)


def _facet_arrays(p: Polytope) -> tuple[np.ndarray, np.ndarray]:
    facets = p.facets()
    a = np.array([[float(x) for x in f.normal] for f in facets])
    b = np.array([float(f.offset) for f in facets])
    return a, b


def _box_samples(p: Polytope, samples: int, gen: np.random.Generator):
    lo, hi = p.bounding_box()
    lo = np.array([float(x) for x in lo])
    hi = np.array([float(x) for x in hi])
    pts = gen.random((samples, p.ambient_dim)) * (hi - lo) + lo
    box_vol = float(np.prod(hi - lo))
    return pts, box_vol


def mc_volume(p: Polytope, samples: int, rng: RngSpec) -> tuple[float, float]:
    """Rejection-sampling volume estimate: (estimate, standard error)."""
    if not p.is_full_dimensional():
        raise NotFullDimensional("Monte-Carlo volume needs a full-dimensional polytope")
    a, b = _facet_arrays(p)
    pts, box_vol = _box_samples(p, samples, rng.make())
    inside = np.all(pts @ a.T <= b, axis=1)
    frac = inside.mean()
    est = box_vol * frac
    se = box_vol * sqrt(max(frac * (1.0 - frac), 0.0) / samples)
    return float(est), float(se)


def _poly_floats(poly, pts: np.ndarray) -> np.ndarray:
    vals = np.zeros(len(pts))
    for idx, coeff in poly.terms.items():
        term = np.full(len(pts), float(coeff))
        for i, e in enumerate(idx):
            if e:
                term *= pts[:, i] ** e
        vals += term
    return vals


def mc_integrate(mu: PolyDensity, p: Polytope, samples: int,
                 rng: RngSpec) -> tuple[float, float]:
    """Monte-Carlo estimate of the density integral over the polytope."""
    if not p.is_full_dimensional():
        raise NotFullDimensional("Monte-Carlo integration needs a full-dimensional polytope")
    if mu.ambient_dim != p.ambient_dim:
        raise DegenerateInput("density and polytope dimensions differ")
    a, b = _facet_arrays(p)
    pts, box_vol = _box_samples(p, samples, rng.make())
    inside = np.all(pts @ a.T <= b, axis=1)
    vals = _poly_floats(mu.poly, pts) * inside
    est = box_vol * vals.mean()
    se = box_vol * vals.std(ddof=1) / sqrt(samples)
    return float(est), float(se)


def mc_solid_angle(cone: NormalCone, samples: int, rng: RngSpec,
                   metric=None) -> tuple[float, float]:
    """Fraction of the unit sphere of span(cone) covered by a pointed cone.

    With a rational `metric` the sphere is taken with respect to that inner
    product (used for cones living in affine-hull coordinates).
    """
    basis, halfspaces = cone.halfspaces_in_span()
    c = len(basis)
    if c == 0:
        return 1.0, 0.0
    if not halfspaces:
        raise DegenerateInput("cone has no facets; not pointed")
    # Gram matrix of the span basis under the ambient (or given) metric
    bmat = np.array([[float(x) for x in v] for v in basis], dtype=float).T  # n x c
    if metric is None:
        gram = bmat.T @ bmat
    else:
        m = np.array([[float(x) for x in row] for row in metric])
        gram = bmat.T @ m @ bmat
    chol = np.linalg.cholesky(gram)
    h = np.array([[float(x) for x in row] for row in halfspaces])
    gen = rng.make()
    z = gen.standard_normal((samples, c))
    # u = chol^-T z gives uniform directions in span coordinates
    u = np.linalg.solve(chol.T, z.T).T
    inside = np.all(u @ h.T >= 0.0, axis=1)
    frac = inside.mean()
    se = sqrt(max(frac * (1.0 - frac), 0.0) / samples)
    return float(frac), float(se)
