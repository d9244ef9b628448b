"""Canal hypersurfaces along parallel-framed non-null curves in Minkowski 4-space."""

from .canal import CanalSurface, RadiusProfile, TypeTables, shape_functions
from .diffgeo import curvatures, fundamental_forms, jet, surface_invariants
from .closedform import (gaussian_closed, identity_residual, invariants_closed,
                         mean_closed, principal_closed, weingarten_residuals)
from .minkowski import (CausalCharacter, ParallelFrame, Vec4, causal_character,
                        inner, lorentz_orthonormalize, norm, triple_product)
from .spine import (CurvatureFunctions, FrameKind, SpineCurve,
                    bishop_derivative, kappa, standard_frame)

__all__ = [
    "CanalSurface", "RadiusProfile", "TypeTables", "shape_functions",
    "curvatures", "fundamental_forms", "jet", "surface_invariants",
    "gaussian_closed", "identity_residual", "invariants_closed",
    "mean_closed", "principal_closed", "weingarten_residuals",
    "CausalCharacter", "ParallelFrame", "Vec4", "causal_character",
    "inner", "lorentz_orthonormalize", "norm", "triple_product",
    "CurvatureFunctions", "FrameKind", "SpineCurve",
    "bishop_derivative", "kappa", "standard_frame",
]
