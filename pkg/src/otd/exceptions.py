"""Error taxonomy shared across the package."""


class OtdError(Exception):
    """Base class for all package-specific failures."""


class SvdNonConvergence(OtdError):
    """The SVD iteration hit its cap without converging."""


class EigNonConvergence(OtdError):
    """The eigenvalue iteration hit its cap without converging."""


class SingularPencil(OtdError):
    """The projected slice pencil is too ill conditioned to invert."""


class ComplexSpectrum(OtdError):
    """A slice ratio matrix has genuinely complex eigenvalues.

    Signals a bad random probe; callers are expected to retry with
    fresh probes rather than treat this as fatal.
    """


class RankDeficientComponents(OtdError):
    """The recovered component matrix is numerically rank deficient."""


class ProbeDegenerate(OtdError):
    """A probe vector is nearly orthogonal to a recovered component."""


class AttemptsExhausted(OtdError):
    """The randomized decomposition loop ran out of attempts.

    Carries best-so-far diagnostics so callers can report how close
    the search got.
    """

    def __init__(self, message, attempts=0, best_residual=None,
                 best_scale_bound=None, failure_counts=None):
        super().__init__(message)
        self.attempts = attempts
        self.best_residual = best_residual
        self.best_scale_bound = best_scale_bound
        self.failure_counts = dict(failure_counts or {})


class RankTooLow(OtdError):
    """The scaled component matrix has numerical rank below d - 1."""


class NonPositiveSingularVector(OtdError):
    """The minimum singular vector has non-positive entries after the
    global sign fix, so weights cannot be recovered."""


class InfeasibleParameters(OtdError):
    """Requested synthetic instance parameters cannot be satisfied."""


class FileFormatError(OtdError):
    """An input file does not match the documented schema."""
