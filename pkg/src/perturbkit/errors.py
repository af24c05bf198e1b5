"""Exception taxonomy shared by all perturbkit modules."""


class PerturbkitError(Exception):
    """Base class for all library errors."""


class NonIntegrable(PerturbkitError):
    """A pairing integrand diverges (decided by exponent arithmetic)."""


class PoleOnSpectrum(PerturbkitError):
    """A weight or resolvent point sits on the spectrum of A."""


class QuadratureFailure(PerturbkitError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class UnrepresentableConvolution(PerturbkitError):
    """Kernel backend asked to resolve a primitive it has no closed form for."""


class Undecidable(PerturbkitError):
    """Regularity class cannot be decided (ambiguous tabulated tails)."""


class PerturbedEigenvalue(PerturbkitError):
    """z is an eigenvalue of the perturbed operator (b_z infinite)."""


class NoConvergence(PerturbkitError):
    """Root iteration failed to converge from the given seeds."""


class RegionTouchesSpectrum(PerturbkitError):
    """Search region intersects the spectrum of A."""


class RegularityViolation(PerturbkitError):
    """Vector regularity class outside what the operation admits."""


class EigenvectorOfA(PerturbkitError):
    """Input vector is an eigenvector of the unperturbed operator."""


class DegenerateDenominator(PerturbkitError):
    """A defining quotient has a vanishing denominator."""


class WindowNotFound(PerturbkitError):
    """No admissible spectral window at this truncation level."""


class ComplexTauUnsupported(PerturbkitError):
    """The matching-sequence construction only handles real tau."""


class UnsupportedBackend(PerturbkitError):
    """Operation not available for this operator backend."""


class OnSpectrumEdge(PerturbkitError):
    """Energy not in the interior of the absolutely continuous spectrum."""


class DensityNondifferentiable(PerturbkitError):
    """Spectral density too rough at this energy for the direct method."""


class ExtrapolationNotCauchy(PerturbkitError):
    """Boundary-value extrapolation ladder failed its Cauchy check."""


class SpectralSingularity(PerturbkitError):
    """Scattering denominator vanishes at a real energy."""

    def __init__(self, message, lam=None):
        super().__init__(message)
        self.lam = lam


class ConfigError(PerturbkitError):
    """Problem configuration failed validation."""

    def __init__(self, message, field=None):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field
