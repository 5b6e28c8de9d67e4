"""stokes-unfold: Stokes matrices of a rank-1 system and their unfolding.

The initial system has irregular singular points of Poincare rank 1 at 0
and infinity. This library computes its Stokes matrices from one Bessel
number S, sums its divergent series by Borel-Laplace integration, and
follows the unfolding into four Fuchsian points, where the Stokes data
reappear as the logarithmic part of the monodromy in double resonance.

Quick Start:
    >>> from stokes_unfold import Params, stokes_origin, stokes_infinity
    >>> p = Params(beta1=0, beta2=1, gamma1=0, gamma2=1)
    >>> abs(stokes_origin(p).mu + stokes_infinity(p).mu) < 1e-13
    True

Modules:
    - specfun: Gamma ratios and the Bessel kernel phi_1
    - model: Equations, resonance and four-singular-point checks
    - stokes: Formal series and exact Stokes matrices
    - borel: Borel-Laplace 1-sums and the Stokes jump
    - unfold: Closed-form residues, monodromy and the limit eps -> 0
    - oracle: Contour residues and ODE monodromy for cross-checks

Design Principles:
    - 100% type coverage (mypy --strict)
    - Every closed form has an independent numerical route
    - Clear error messages with recovery suggestions
"""

__version__ = "0.1.0"

from .borel import (
    JumpReport,
    actual_fundamental_entry,
    fundamental_solution_12,
    laplace_ray,
    phi_sum,
    psi_sum,
    stokes_jump_origin,
)
from .config import RunConfig, load_run_config

# Exceptions
from .exceptions import (
    AtomicWriteError,
    ConfigurationError,
    ConvergenceError,
    DegenerateDirectionError,
    DegenerateParametersError,
    DomainError,
    IncompatibleParametersError,
    IntegrationStepError,
    InvalidParametersError,
    MultivaluedIntegrandError,
    NonIntegrableEndpointError,
    PathError,
    PoleError,
    QuadratureError,
    ResonanceMismatchError,
    SingularDirectionError,
    SingularPointError,
    StokesUnfoldError,
    UndefinedRatioError,
)
from .model import (
    InitialEquation,
    PerturbedEquation,
    char_exponents,
    classify_resonance,
    heun_case_check,
    initial_coefficients,
    is_resonance,
    perturbed_coefficients,
    resonant_params,
)
from .oracle import Loop, fundamental_frame, monodromy_ode, phi12_quadrature, residue_contour

# Special functions
from .specfun import bessel_kernel_phi1, gamma_ratio, log_gamma, phi1
from .stokes import (
    a_k_recursion,
    bessel_sum_S,
    partial_sums,
    phi_coefficients,
    psi_coefficients,
    singular_direction_infinity,
    singular_direction_origin,
    stokes_infinity,
    stokes_origin,
)

# Core types
from .types import (
    CharExponents,
    Epsilon,
    Frame,
    GeneralParams,
    HeunCase,
    OneSum,
    Params,
    Ray,
    Resonance,
    ResonanceKind,
    SeriesCoefficients,
    SingularPoint,
    SingularPoints,
    StokesMatrix,
)
from .unfold import (
    ConvergenceTable,
    MonodromyDecomp,
    d_coefficient,
    limit_experiment,
    monodromy_decomp,
    unfolded_stokes,
)

__all__ = [
    # Version
    "__version__",
    # Core Types
    "Params",
    "GeneralParams",
    "Epsilon",
    "SingularPoint",
    "SingularPoints",
    "CharExponents",
    "Resonance",
    "ResonanceKind",
    "HeunCase",
    "Frame",
    "StokesMatrix",
    "SeriesCoefficients",
    "Ray",
    "OneSum",
    # Exceptions
    "StokesUnfoldError",
    "PoleError",
    "UndefinedRatioError",
    "ConvergenceError",
    "QuadratureError",
    "IntegrationStepError",
    "InvalidParametersError",
    "DegenerateParametersError",
    "DegenerateDirectionError",
    "ResonanceMismatchError",
    "IncompatibleParametersError",
    "SingularPointError",
    "SingularDirectionError",
    "DomainError",
    "PathError",
    "MultivaluedIntegrandError",
    "NonIntegrableEndpointError",
    "ConfigurationError",
    "AtomicWriteError",
    # Special functions
    "log_gamma",
    "gamma_ratio",
    "bessel_kernel_phi1",
    "phi1",
    # Model
    "InitialEquation",
    "PerturbedEquation",
    "initial_coefficients",
    "perturbed_coefficients",
    "char_exponents",
    "classify_resonance",
    "is_resonance",
    "resonant_params",
    "heun_case_check",
    # Stokes data
    "bessel_sum_S",
    "partial_sums",
    "psi_coefficients",
    "phi_coefficients",
    "a_k_recursion",
    "singular_direction_origin",
    "singular_direction_infinity",
    "stokes_origin",
    "stokes_infinity",
    # Borel summation
    "laplace_ray",
    "psi_sum",
    "phi_sum",
    "actual_fundamental_entry",
    "fundamental_solution_12",
    "stokes_jump_origin",
    "JumpReport",
    # Unfolding
    "d_coefficient",
    "monodromy_decomp",
    "unfolded_stokes",
    "limit_experiment",
    "MonodromyDecomp",
    "ConvergenceTable",
    # Oracles
    "residue_contour",
    "phi12_quadrature",
    "monodromy_ode",
    "fundamental_frame",
    "Loop",
    # Configuration
    "RunConfig",
    "load_run_config",
]
