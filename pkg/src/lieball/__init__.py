"""Harmonic analysis on the Lie ball: spherical functions, the Plancherel
transform of weighted Bergman spaces and boundary intertwining operators."""
from .errors import (
    BranchError,
    ConvergenceError,
    DomainError,
    LieBallError,
    ParameterError,
)
from .geometry import (
    HElement,
    LorentzElement,
    ModelParams,
    MoebiusMap,
    Point,
    bergman_B,
    bergman_kernel,
    cayley,
    cayley_inverse,
    h_kernel,
    hua_inverse,
    hua_transform,
    spectral_decomposition,
)
from .intertwiners import (
    BoundaryFunction,
    CAlphaSpace,
    boundary_jacobian,
    c_alpha_inner,
    discrete_embedding_check,
    minimal_rep_check,
    sigma_alpha_apply,
    t_nu,
    tau_lambda_apply,
)
from .polynomials import MultiPoly, RadialPolynomial, fock_inner, harmonic_decompose, hnu_inner
from .quadrature import QuadratureRule, gauss_legendre, half_line_rule, sphere_rule, zonal_rule
from .specfun import dual_hahn, gauss_2f1, ln_gamma, pochhammer
from .spherical import PlancherelMeasure, SpectralPoint, p_coeff, phi_hyp, phi_quad, phi_series, plancherel_measure
from .transform import fh_general, fh_inverse_general, fh_inverse_radial, fh_radial, plancherel_check

__version__ = "0.1.0"

__all__ = [
    "BranchError",
    "ConvergenceError",
    "DomainError",
    "LieBallError",
    "ParameterError",
    "HElement",
    "LorentzElement",
    "ModelParams",
    "MoebiusMap",
    "Point",
    "bergman_B",
    "bergman_kernel",
    "cayley",
    "cayley_inverse",
    "h_kernel",
    "hua_inverse",
    "hua_transform",
    "spectral_decomposition",
    "BoundaryFunction",
    "CAlphaSpace",
    "boundary_jacobian",
    "c_alpha_inner",
    "discrete_embedding_check",
    "minimal_rep_check",
    "sigma_alpha_apply",
    "t_nu",
    "tau_lambda_apply",
    "MultiPoly",
    "RadialPolynomial",
    "fock_inner",
    "harmonic_decompose",
    "hnu_inner",
    "QuadratureRule",
    "gauss_legendre",
    "half_line_rule",
    "sphere_rule",
    "zonal_rule",
    "dual_hahn",
    "gauss_2f1",
    "ln_gamma",
    "pochhammer",
    "PlancherelMeasure",
    "SpectralPoint",
    "p_coeff",
    "phi_hyp",
    "phi_quad",
    "phi_series",
    "plancherel_measure",
    "fh_general",
    "fh_inverse_general",
    "fh_inverse_radial",
    "fh_radial",
    "plancherel_check",
]
