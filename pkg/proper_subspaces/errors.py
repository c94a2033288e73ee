class ProperSubspacesError(Exception):
    """Base class for every error raised by ``proper_subspaces``."""


class NotPositiveDefinite(ProperSubspacesError):
    """Raised when a weight operator has an eigenvalue that is not positive."""


class NormCapViolated(ProperSubspacesError):
    """Raised when a weight breaks the dominance ``||f||_L <= ||f||_E``."""


class DimMismatch(ProperSubspacesError):
    """Raised when shapes of vectors, matrices or spaces do not agree."""


class NonIdentityWeightForTrace(ProperSubspacesError):
    """Raised when a trace-normed space is given a weight other than the identity."""


class DependentInput(ProperSubspacesError):
    """Raised when vectors expected to be linearly independent are not."""


class BiorthogonalityViolated(ProperSubspacesError):
    """Raised when ``<f_i, h_j>_L = delta_ij`` fails for a finite-rank system."""


class NotComplementary(ProperSubspacesError):
    """Raised when two subspaces do not form a direct sum equal to the space.

    The attribute ``gap`` holds the measured direct-sum gap.
    """

    def __init__(self, msg: str, gap: float = 0.0) -> None:
        super(NotComplementary, self).__init__(msg)
        self.gap = gap


class NotIdempotent(ProperSubspacesError):
    """Raised when an operator expected to be a projection is not idempotent."""


class RangeOverlap(ProperSubspacesError):
    """Raised when two ranges expected to intersect trivially overlap.

    The attribute ``overlap`` holds the dimension of the intersection.
    """

    def __init__(self, msg: str, overlap: int = 0) -> None:
        super(RangeOverlap, self).__init__(msg)
        self.overlap = overlap


class ContourTooClose(ProperSubspacesError):
    """Raised when an eigenvalue lies too close to an integration contour."""


class NotIsolated(ProperSubspacesError):
    """Raised when a spectral point is not isolated inside twice the radius."""


class SingularSystem(ProperSubspacesError):
    """Raised when a solve is requested for a non-invertible linear system."""


class BadExponent(ProperSubspacesError):
    """Raised when a study exponent lies outside its admissible range."""


class IoFailure(ProperSubspacesError):
    """Raised when results cannot be written to their sink."""


class MatrixFormatError(ProperSubspacesError):
    """Raised when matrix text or a matrix literal cannot be parsed."""


class IdentityViolation(ProperSubspacesError):
    """Raised when a numerical identity that must hold is violated."""


class IllConditioned(UserWarning):
    """Warned when a computation path is skipped because of conditioning."""
