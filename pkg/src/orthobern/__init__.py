"""Orthonormal Bernstein polynomials with exact verification and curve/surface fitting."""

from .approx import (
    BasisKind,
    ControlGrid,
    ControlVector,
    FitReport,
    SampleGrid,
    bezier_curve_recover,
    bezier_surface_recover,
    degree_sweep,
    fit_curve,
    fit_curve_onb,
    fit_surface,
    fit_surface_onb,
    mse_curve,
    mse_surface,
    reconstruct_curve,
    reconstruct_surface,
)
from .basis import (
    BasisSpec,
    Interval,
    OrthoCoeffs,
    bernstein_eval,
    bernstein_eval_all,
    onb_coeffs,
    onb_eval,
    onb_eval_all,
)
from .errors import (
    BasisIndexError,
    CapabilityError,
    ConfigError,
    DomainError,
    EvaluationError,
    OrthoBernError,
    SingularityError,
)
from .exact import (
    RationalPoly,
    bernstein_pair_integral,
    gram_schmidt_oracle,
    ortho_double_sum,
    phi_bern_integral,
    sturm_residual,
)
from .quadrature import (
    QuadratureRule,
    gauss_nodes,
    integrate,
    integrate2d,
)

__version__ = "0.1.0"

__all__ = [
    "BasisKind",
    "ControlGrid",
    "ControlVector",
    "FitReport",
    "SampleGrid",
    "bezier_curve_recover",
    "bezier_surface_recover",
    "degree_sweep",
    "fit_curve",
    "fit_curve_onb",
    "fit_surface",
    "fit_surface_onb",
    "mse_curve",
    "mse_surface",
    "reconstruct_curve",
    "reconstruct_surface",
    "BasisSpec",
    "Interval",
    "OrthoCoeffs",
    "bernstein_eval",
    "bernstein_eval_all",
    "onb_coeffs",
    "onb_eval",
    "onb_eval_all",
    "BasisIndexError",
    "CapabilityError",
    "ConfigError",
    "DomainError",
    "EvaluationError",
    "OrthoBernError",
    "SingularityError",
    "RationalPoly",
    "bernstein_pair_integral",
    "gram_schmidt_oracle",
    "ortho_double_sum",
    "phi_bern_integral",
    "sturm_residual",
    "QuadratureRule",
    "gauss_nodes",
    "integrate",
    "integrate2d",
]
