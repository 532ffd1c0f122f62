"""Exception hierarchy shared across the toolkit.

Every error carries a stable machine-parsable token (the class name) which the
CLI prints as the first word on stderr.
"""


class SignedMeasuresError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1

    def token(self) -> str:
        return type(self).__name__


class NonAtomicInput(SignedMeasuresError):
    """A purely-atomic operation received a measure with a diffuse part."""


class DuplicateLocation(SignedMeasuresError):
    """Two atoms / marked points share the same location."""


class SpecValidationError(SignedMeasuresError):
    """An input spec file failed parsing or an integrability check."""

    exit_code = 2


class QuadratureFailure(SignedMeasuresError):
    """Adaptive integration did not converge within its budget."""

    exit_code = 2


class SupportViolation(SignedMeasuresError):
    """A weight measure carries mass outside its required support."""

    exit_code = 2


class TruncationTooCoarse(SignedMeasuresError):
    """Jump truncation drops more than the allowed share of the mean mass."""

    exit_code = 3


class NotPSD(SignedMeasuresError):
    """Covariance factorization failed beyond the ridge tolerance."""

    exit_code = 2


class AssumptionViolated(SignedMeasuresError):
    """A posterior-update assumption (A0/A1/A2/A2') does not hold."""

    exit_code = 4

    def __init__(self, assumption: str, detail: str = ""):
        self.assumption = assumption
        msg = assumption if not detail else f"{assumption}: {detail}"
        super().__init__(msg)


class UnmatchedLikelihood(SignedMeasuresError):
    """A likelihood evaluation returned NaN for a needed (x, theta)."""

    exit_code = 4


class InvalidAlpha(SignedMeasuresError):
    """Stability index outside (0, 1)."""

    exit_code = 2


class InsufficientWindows(SignedMeasuresError):
    """A sparsity scan needs at least three window sizes."""

    exit_code = 5


class DegenerateScan(SignedMeasuresError):
    """Some scan window produced zero nodes in every replicate."""

    exit_code = 5


class BlockMismatch(SignedMeasuresError):
    """Window size is not an integer multiple of the block width."""

    exit_code = 5
