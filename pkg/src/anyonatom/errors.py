"""Exception types shared across the solvers."""


class DomainError(ValueError):
    """Inputs leave the supported physical regime (e.g. lambda^2 <= 0)."""


class NoClassicalRegion(RuntimeError):
    """The turning-point equation has no classically allowed interval.

    Raised when the cubic has fewer than three real roots, or the two
    positive roots coincide, meaning the trial energy lies outside the
    bound-spectrum window for the given angular momentum.
    """


class QuadratureFailure(RuntimeError):
    """The phase quadrature could not certify the requested accuracy,
    or the integrand went negative inside the classical region."""


class BracketFailure(RuntimeError):
    """No sign change of the quantization residual was found while
    scanning the bound-energy window (quantum numbers out of range)."""


class IntegrationOverflow(RuntimeError):
    """Per-step renormalization failed during wavefunction integration;
    usually means the integration domain is far too wide."""


class EigenvalueNotFound(RuntimeError):
    """No eigenvalue with the requested node count exists in (0, m)."""
