"""Exact valuation algebra on convex polytopes.

Rational-arithmetic polytope kernel, polynomial densities, valuations built
from mixed derivatives of Minkowski-sum integrals, exterior and diagonal
products, and normal-cycle intrinsic volumes, with Monte-Carlo oracles on the
side for verification.
"""

from .approx import Approx, Value, is_exact, to_float
from .density import PolyDensity, face_volume, integrate, integrate_over_face
from .errors import (DegenerateInput, DimensionMismatch, EmptyInput, NotAFace,
                     NotFullDimensional, ValgebraError)
from .normal_cycle import (CurvatureValuation, CycleComponent, NormalCycle,
                           build_normal_cycle, curvature_measure,
                           curvature_valuation, external_angle,
                           intrinsic_volumes)
from .oracle import RngSpec, mc_integrate, mc_solid_angle, mc_volume
from .polytope import (Face, NormalCone, Polytope, affine_image, box,
                       convex_hull, diagonal_embedding, embed_in_product,
                       minkowski_sum, segment, simplex)
from .product import (ProductValuation, exterior_product,
                      fubini_slice_estimate, valuation_product)
from .ring import MultiPoly, format_rational, interpolate_from_grid, parse_rational
from .valuation import (MixedTerm, MixedValuation, Valuation, default_probes,
                        density_valuation, euler_characteristic,
                        homogeneous_decomposition, lebesgue_valuation,
                        lower_dim_probes, mixed_volume, probe_bodies,
                        scaling_component, scaling_curve, vanishes_below_dim,
                        vanishing_order)

__version__ = "0.1.0"

__all__ = [
    "Approx", "Value", "is_exact", "to_float",
    "PolyDensity", "face_volume", "integrate", "integrate_over_face",
    "ValgebraError", "DimensionMismatch", "NotFullDimensional", "NotAFace",
    "EmptyInput", "DegenerateInput",
    "CurvatureValuation", "CycleComponent", "NormalCycle", "build_normal_cycle",
    "curvature_measure", "curvature_valuation", "external_angle", "intrinsic_volumes",
    "RngSpec", "mc_integrate", "mc_solid_angle", "mc_volume",
    "Face", "NormalCone", "Polytope", "affine_image", "box", "convex_hull",
    "diagonal_embedding", "embed_in_product", "minkowski_sum", "segment", "simplex",
    "ProductValuation", "exterior_product", "fubini_slice_estimate", "valuation_product",
    "MultiPoly", "format_rational", "interpolate_from_grid", "parse_rational",
    "MixedTerm", "MixedValuation", "Valuation", "default_probes", "density_valuation",
    "euler_characteristic", "homogeneous_decomposition", "lebesgue_valuation",
    "lower_dim_probes", "mixed_volume", "probe_bodies", "scaling_component",
    "scaling_curve", "vanishes_below_dim", "vanishing_order",
]
