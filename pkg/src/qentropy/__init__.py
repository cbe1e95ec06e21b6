"""Basis-averaged information entropy of quantum mechanical states."""

from .entropy import (
    EULER_GAMMA,
    EXCESS_BOUND,
    DensityCurve,
    EntropyReport,
    absolute_entropy,
    conditional_entropy,
    density_curve,
    density_p,
    entropy_by_quadrature,
    entropy_report_for_density,
    excess_entropy,
    excess_entropy_dd,
    identity_residuals,
    kernel_integral,
    perturb_spectrum,
    s0_asymptotic,
    s0_exact,
    shannon,
    two_state_excess,
    uniform_mixture_excess,
    von_neumann,
)
from .errors import (
    ConvergenceFailureError,
    DegenerateSpectrumError,
    DimensionMismatchError,
    IncompleteProjectorSetError,
    InsufficientSamplesError,
    InvalidDistributionError,
    NegativeEigenvalueError,
    NonHermitianError,
    QentropyError,
    TraceDeviationError,
)
from .montecarlo import Histogram, McEstimate, mc_density_histogram, mc_entropy_estimate
from .rng import DEFAULT_SEED, RngStream
from .states import (
    DensityMatrix,
    MeasurementBasis,
    PureState,
    Spectrum,
    basis_projectors,
    eig_hermitian,
    haar_unitary,
    partial_trace,
    projective_update,
    pure_density,
    random_pure_state,
    spectrum_from_values,
    tensor,
    validate_density,
)

__version__ = "0.1.0"
