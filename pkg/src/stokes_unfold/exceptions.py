"""Custom exceptions for stokes-unfold.

This module defines the exception hierarchy shared by the numerical layers
(special functions, quadrature, ODE continuation) and the command line.

Design Philosophy:
- Base exception for all library errors
- Specific exceptions for different failure modes
- Clear error messages with actionable recovery suggestions
- Preserve exception chaining for debugging
"""


class StokesUnfoldError(Exception):
    """Base exception for all stokes-unfold errors.

    All custom exceptions in this library inherit from this base class,
    making it easy to catch all library-specific errors.

    Attributes:
        message: Error description
        recovery_suggestion: Suggested action to resolve the error
    """

    def __init__(self, message: str, recovery_suggestion: str = "") -> None:
        """Initialize exception with message and optional recovery suggestion.

        Args:
            message: Error description
            recovery_suggestion: How user can resolve this error
        """
        self.message = message
        self.recovery_suggestion = recovery_suggestion
        super().__init__(message)

    def __str__(self) -> str:
        """Format error message with recovery suggestion if available."""
        if self.recovery_suggestion:
            return f"{self.message}\n\nSuggestion: {self.recovery_suggestion}"
        return self.message


# ============================================================================
# Special functions
# ============================================================================


class PoleError(StokesUnfoldError):
    """Gamma function evaluated at a pole.

    Example:
        >>> raise PoleError(-2)
    """

    def __init__(self, z: complex) -> None:
        """Initialize with the offending argument."""
        super().__init__(
            f"Gamma has a pole at z={z}",
            recovery_suggestion="Shift the argument off the non-positive integers",
        )


class UndefinedRatioError(StokesUnfoldError):
    """Gamma ratio is a genuine pole (numerator pole not cancelled)."""

    def __init__(self, numerator: complex, denominator: complex) -> None:
        """Initialize with both Gamma arguments."""
        super().__init__(
            f"Gamma({numerator})/Gamma({denominator}) is infinite",
            recovery_suggestion="Only the denominator may sit on a pole of Gamma",
        )


# ============================================================================
# Numerical convergence
# ============================================================================


class ConvergenceError(StokesUnfoldError):
    """Series or iteration failed to reach the requested tolerance.

    Raised when:
    - A kernel series overflows before its tail drops below tol
    - A root bracket does not contain a sign change
    """

    pass


class QuadratureError(ConvergenceError):
    """Adaptive quadrature stalled above the requested tolerance."""

    def __init__(self, message: str) -> None:
        """Initialize with default recovery suggestion."""
        super().__init__(
            message,
            recovery_suggestion=(
                "Loosen the tolerance, raise the working precision, "
                "or move the evaluation point deeper into its domain"
            ),
        )


class IntegrationStepError(ConvergenceError):
    """ODE continuation failed along a path segment."""

    def __init__(self, message: str) -> None:
        """Initialize with default recovery suggestion."""
        super().__init__(
            message,
            recovery_suggestion="Keep the loop further away from the singular points",
        )


# ============================================================================
# Parameters
# ============================================================================


class InvalidParametersError(StokesUnfoldError):
    """Equation parameters violate a standing assumption.

    Raised when:
    - beta1 == beta2 (resonant irregular case)
    - sqrt_eps == 0
    - eps**2 == 1 (singular points collide)

    Example:
        >>> raise InvalidParametersError("beta1 must differ from beta2")
    """

    pass


class DegenerateParametersError(InvalidParametersError):
    """Operation undefined for gamma1 == gamma2."""

    def __init__(self, message: str) -> None:
        """Initialize with default recovery suggestion."""
        super().__init__(
            message,
            recovery_suggestion=(
                "With gamma1 == gamma2 use the closed-form entries "
                "instead of the series at infinity"
            ),
        )


class DegenerateDirectionError(DegenerateParametersError):
    """Singular direction arg(gamma2 - gamma1) is undefined."""

    pass


class ResonanceMismatchError(InvalidParametersError):
    """Parameters do not satisfy the requested double resonance."""

    pass


class IncompatibleParametersError(InvalidParametersError):
    """Parameters cannot drive the requested convergence experiment."""

    pass


# ============================================================================
# Geometry and domains
# ============================================================================


class SingularPointError(StokesUnfoldError):
    """Evaluation requested at a singular point of the equation."""

    def __init__(self, x: complex, where: str = "") -> None:
        """Initialize with the evaluation point.

        Args:
            x: Offending evaluation point
            where: Name of the singular point, if known
        """
        label = f" ({where})" if where else ""
        super().__init__(
            f"Cannot evaluate at singular point x={x}{label}",
            recovery_suggestion="Pick an evaluation point away from the singularities",
        )


class SingularDirectionError(StokesUnfoldError):
    """Laplace ray points along a singular direction."""

    def __init__(self, theta: float, singular: float) -> None:
        """Initialize with the requested and the singular direction."""
        super().__init__(
            f"Direction theta={theta:.15g} is singular (arg={singular:.15g})",
            recovery_suggestion="Rotate the ray slightly to either side of the singular direction",
        )


class DomainError(StokesUnfoldError):
    """Evaluation point outside the convergence region of a Laplace integral."""

    def __init__(self, message: str) -> None:
        """Initialize with default recovery suggestion."""
        super().__init__(
            message,
            recovery_suggestion=(
                "Move x closer to 0 along the ray (origin) or farther out (infinity)"
            ),
        )


class PathError(StokesUnfoldError):
    """Integration path or loop passes through or too close to a singular point."""

    pass


class MultivaluedIntegrandError(StokesUnfoldError):
    """Contour integrand does not return to its starting value."""

    def __init__(self, mismatch: float) -> None:
        """Initialize with the endpoint mismatch."""
        super().__init__(
            f"Integrand is multivalued on the contour (endpoint mismatch {mismatch:.3e})",
            recovery_suggestion="Residues are only defined at resonant points",
        )


class NonIntegrableEndpointError(StokesUnfoldError):
    """Path integrand is not integrable at its base point."""

    def __init__(self, exponent: complex) -> None:
        """Initialize with the local exponent at the base point."""
        super().__init__(
            f"Local exponent {exponent} at the base point is not > -1",
            recovery_suggestion="Start the path at the other finite point of the same pair",
        )


# ============================================================================
# Configuration and output
# ============================================================================


class ConfigurationError(StokesUnfoldError):
    """Run configuration is invalid or its file cannot be read.

    Example:
        >>> raise ConfigurationError("tol must be positive", config_path="run.toml")
    """

    def __init__(self, message: str, config_path: str = "") -> None:
        """Initialize with config file path for recovery suggestion.

        Args:
            message: Error description
            config_path: Path to problematic config file
        """
        recovery = ""
        if config_path:
            recovery = f"Fix the config file: {config_path}"
        super().__init__(message, recovery_suggestion=recovery)


class AtomicWriteError(StokesUnfoldError):
    """Atomic file write operation failed."""

    def __init__(self, message: str, target_path: str = "") -> None:
        """Initialize with target file path."""
        recovery = "Check file permissions and disk space"
        if target_path:
            recovery += f"\nTarget file: {target_path}"
        super().__init__(message, recovery_suggestion=recovery)
