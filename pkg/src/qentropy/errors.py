"""Exception hierarchy for state validation and entropy evaluation."""


class QentropyError(Exception):
    """Base class for all library errors."""


class NonHermitianError(QentropyError):
    """Matrix asymmetry exceeds the Hermiticity tolerance."""


class TraceDeviationError(QentropyError):
    """Trace differs from 1 beyond tolerance."""


class NegativeEigenvalueError(QentropyError):
    """An eigenvalue lies below the PSD clamping window."""


class ConvergenceFailureError(QentropyError):
    """The Hermitian eigensolver did not converge."""


class DimensionMismatchError(QentropyError):
    """Operands have incompatible dimensions."""


class IncompleteProjectorSetError(QentropyError):
    """Projectors are not a complete orthogonal set."""


class InvalidDistributionError(QentropyError):
    """Probabilities are negative or do not sum to 1."""


class DegenerateSpectrumError(QentropyError):
    """A nonzero eigenvalue has multiplicity > 1; the pole expansion of the
    outcome-weight density is singular.  Use the divided-difference closed
    form, the Monte-Carlo path, or perturb_spectrum."""


class InsufficientSamplesError(QentropyError):
    """Monte-Carlo sample count below the required minimum."""
