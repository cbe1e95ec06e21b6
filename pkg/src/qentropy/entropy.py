"""Closed-form entropy computations.

The absolute (basis-averaged) entropy of a state splits into an
N-dependent minimum-uncertainty part s0 plus an excess part F that
depends only on the nonzero eigenvalues.  F is evaluated as the negative
(N-1)-order Newton divided difference of g(x) = x^N ln(x) over the
eigenvalues; repeated eigenvalues use confluent (derivative-seeded)
table entries, so degeneracies are exact limits rather than perturbed.
"""

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import (
    DegenerateSpectrumError,
    DimensionMismatchError,
    InvalidDistributionError,
)
from .states import MeasurementBasis, DensityMatrix, Spectrum, eig_hermitian, spectrum_from_values

EULER_GAMMA = 0.5772156649015329
EXCESS_BOUND = 1.0 - EULER_GAMMA

# below this relative gap between distinct eigenvalues, or above this
# divided-difference order, the table is evaluated at 50 significant digits
_MP_GAP_THRESHOLD = 1e-3
_MP_ORDER_THRESHOLD = 25
_MP_DPS = 50


def shannon(probs) -> float:
    """-sum p ln p in nats, with 0 ln 0 = 0."""
    p = np.asarray(probs, dtype=float)
    if np.any(p < -1e-12):
        raise InvalidDistributionError(f"negative probability {p.min():g}")
    if abs(p.sum() - 1.0) > 1e-10:
        raise InvalidDistributionError(f"probabilities sum to {p.sum():.15g}")
    p = p[p > 0.0]
    return float(-np.sum(p * np.log(p)))


def von_neumann(rho: DensityMatrix) -> float:
    """Entropy of the eigenvalue spectrum, -trace(rho ln rho)."""
    spec, _ = eig_hermitian(rho)
    return shannon(spec.values)


def conditional_entropy(rho: DensityMatrix, basis: MeasurementBasis) -> float:
    """Shannon entropy of the outcome probabilities <a|rho|a> in `basis`."""
    if rho.dim != basis.dim:
        raise DimensionMismatchError(f"state dim {rho.dim} != basis dim {basis.dim}")
    u = basis.columns
    probs = np.einsum("ia,ij,ja->a", u.conj(), rho.matrix, u).real
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    return shannon(probs)


def s0_exact(dim: int) -> float:
    """Minimum uncertainty entropy: the harmonic sum 1/2 + ... + 1/N."""
    return math.fsum(1.0 / k for k in range(2, dim + 1))


def s0_asymptotic(dim: int) -> float:
    """Large-N approximation ln N - (1-gamma) + 1/(2N)."""
    return math.log(dim) - (1.0 - EULER_GAMMA) + 0.5 / dim


def _dd_scaled_derivative(x: float, order: int, n: int) -> float:
    """g^(order)(x) / order! for g(x) = x^n ln x; zero at x = 0."""
    if x == 0.0:
        return 0.0
    binom = math.comb(n, order)
    harm = math.fsum(1.0 / j for j in range(n - order + 1, n + 1))
    return binom * x ** (n - order) * (math.log(x) + harm)


def _dd_scaled_derivative_mp(x, order: int, n: int):
    if x == 0:
        return mpmath.mpf(0)
    binom = mpmath.binomial(n, order)
    harm = mpmath.fsum(mpmath.mpf(1) / j for j in range(n - order + 1, n + 1))
    return binom * x ** (n - order) * (mpmath.log(x) + harm)


def _confluent_nodes(spectrum: Spectrum) -> np.ndarray:
    """Descending node list with each cluster collapsed to its mean value."""
    reps, mults = spectrum.clustered_values()
    return np.repeat(reps, mults)


def _min_relative_gap(reps: np.ndarray, dim: int) -> float:
    if len(reps) < 2:
        return np.inf
    gaps = reps[:-1] - reps[1:]
    scale = np.maximum(reps[:-1], 1.0 / dim)
    return float(np.min(gaps / scale))


def excess_entropy_dd(spectrum: Spectrum) -> float:
    """Excess entropy via the confluent divided-difference table.

    Works for any spectrum, degenerate or not; switches to extended
    precision when the order is high or eigenvalue gaps are tight.
    """
    nodes = _confluent_nodes(spectrum)
    n = len(nodes)
    if n == 1:
        return 0.0
    reps, _ = spectrum.clustered_values()
    use_mp = (n - 1 > _MP_ORDER_THRESHOLD
              or _min_relative_gap(reps, n) < _MP_GAP_THRESHOLD)
    if use_mp:
        f = -_dd_table_mp(nodes, n)
    else:
        f = -_dd_table(nodes, n)
    return f if f > 0.0 else 0.0


def _dd_table(nodes: np.ndarray, n: int) -> float:
    col = [0.0 if z == 0.0 else z**n * math.log(z) for z in nodes]
    for order in range(1, n):
        nxt = []
        for i in range(n - order):
            if nodes[i] == nodes[i + order]:
                nxt.append(_dd_scaled_derivative(nodes[i], order, n))
            else:
                nxt.append((col[i + 1] - col[i]) / (nodes[i + order] - nodes[i]))
        col = nxt
    return col[0]


def _dd_dps(nodes: np.ndarray, n: int) -> int:
    """Working precision for the extended-precision table.

    Each table level subtracts near-equal entries and divides by a node
    span, amplifying absolute roundoff by about 2/span; spans at level j
    are at least j times the smallest distinct adjacent gap.  Confluent
    (derivative-seeded) entries do not amplify, so the estimate from the
    distinct gaps alone is conservative.
    """
    distinct_gaps = np.diff(np.unique(nodes))
    if len(distinct_gaps) == 0:
        return _MP_DPS
    delta = float(np.min(distinct_gaps))
    amp = sum(max(0.0, math.log10(2.0 / (j * delta))) for j in range(1, n))
    return max(_MP_DPS, 25 + math.ceil(amp))


def _dd_table_mp(nodes: np.ndarray, n: int) -> float:
    with mpmath.workdps(_dd_dps(nodes, n)):
        zs = [mpmath.mpf(repr(float(z))) for z in nodes]
        col = [mpmath.mpf(0) if z == 0 else z**n * mpmath.log(z) for z in zs]
        for order in range(1, n):
            nxt = []
            for i in range(n - order):
                if zs[i] == zs[i + order]:
                    nxt.append(_dd_scaled_derivative_mp(zs[i], order, n))
                else:
                    nxt.append((col[i + 1] - col[i]) / (zs[i + order] - zs[i]))
            col = nxt
        return float(col[0])


def uniform_mixture_excess(n: int) -> float:
    """Closed form ln n - (1/2 + ... + 1/n) for n equally likely states."""
    return math.log(n) - s0_exact(n)


def two_state_excess(p1: float, p2: float) -> float:
    """Closed form for a mixture of two states with distinct weights."""
    return -(p1 * p1 * math.log(p1) - p2 * p2 * math.log(p2)) / (p1 - p2)


def excess_entropy(spectrum: Spectrum) -> float:
    """Excess statistical entropy F of a spectrum, in [0, 1-gamma).

    Zero eigenvalues never affect the result.  Dispatches to the
    two-state and uniform-mixture closed forms where they apply,
    otherwise evaluates the confluent divided difference.
    """
    reps, mults = spectrum.clustered_values()
    nz = reps > 0.0
    nz_reps, nz_mults = reps[nz], mults[nz]
    if len(nz_reps) == 1:
        if nz_mults[0] == 1:
            return 0.0
        return uniform_mixture_excess(int(nz_mults[0]))
    if len(nz_reps) == 2 and nz_mults[0] == 1 and nz_mults[1] == 1:
        return two_state_excess(float(nz_reps[0]), float(nz_reps[1]))
    # zeros are dropped here: F is independent of padding, and the smaller
    # table is both cheaper and better conditioned
    trimmed = Spectrum(np.repeat(nz_reps, nz_mults), spectrum.cluster_tolerance)
    return excess_entropy_dd(trimmed)


@dataclass(frozen=True)
class EntropyReport:
    """Bundle of the entropy measures of one state."""

    dim: int
    s_h: float
    s0: float
    s_f: float
    s_total: float
    method: str = "closed_form"


def absolute_entropy(spectrum: Spectrum, dim: int) -> EntropyReport:
    """Basis-averaged entropy s0(N) + F and its components."""
    if spectrum.dim != dim:
        raise DimensionMismatchError(f"spectrum has {spectrum.dim} entries, expected {dim}")
    s0 = s0_exact(dim)
    s_f = excess_entropy(spectrum)
    return EntropyReport(dim=dim, s_h=shannon(spectrum.values), s0=s0,
                         s_f=s_f, s_total=s0 + s_f)


def entropy_report_for_density(rho: DensityMatrix) -> EntropyReport:
    spec, _ = eig_hermitian(rho)
    return absolute_entropy(spec, rho.dim)


def _distinct_nodes_or_raise(spectrum: Spectrum, allow_zero_cluster: bool = True) -> np.ndarray:
    """All eigenvalues as nodes; rejects nonzero values with multiplicity > 1.

    A degenerate cluster at zero is tolerated where its terms drop out of
    the sum anyway (density, quadrature), but not where every node enters.
    """
    reps, mults = spectrum.clustered_values()
    for v, m in zip(reps, mults):
        if m > 1 and (v > 0.0 or not allow_zero_cluster):
            raise DegenerateSpectrumError(
                f"eigenvalue {v:g} has multiplicity {m}; pole expansion is singular")
    return np.repeat(reps, mults)


def density_p(spectrum: Spectrum, dim: int, s: float) -> float:
    """Probability density of the outcome weight s = sum p_r |psi_r|^2.

    Closed form: (N-1) * sum over p_r > s of (p_r - s)^(N-2) divided by
    the gap product prod_{r' != r} (p_r - p_{r'}).  Requires distinct
    nonzero eigenvalues; zero for s above the largest eigenvalue.
    """
    if spectrum.dim != dim:
        raise DimensionMismatchError(f"spectrum has {spectrum.dim} entries, expected {dim}")
    if dim < 2:
        raise DimensionMismatchError("density requires dim >= 2")
    if not 0.0 <= s <= 1.0:
        raise InvalidDistributionError(f"s = {s:g} outside [0, 1]")
    nodes = _distinct_nodes_or_raise(spectrum)
    top = nodes[0]
    terms = []
    for r, p in enumerate(nodes):
        # left-continuous at the top eigenvalue so the pure-state density
        # is flat on the whole closed interval
        if not (p > s or (p == s == top)):
            continue
        prod = 1.0
        for rp, q in enumerate(nodes):
            if rp != r:
                prod *= p - q
        terms.append((p - s) ** (dim - 2) / prod)
    val = (dim - 1) * math.fsum(terms)
    # below the smallest eigenvalue the terms cancel exactly in theory;
    # clamp the float residue
    return val if val > 0.0 else 0.0


def kernel_integral(p: float, dim: int) -> float:
    """Closed form of the moment integral of (p-s)^(N-2) s ln s on [0, p]."""
    if not 0.0 < p <= 1.0:
        raise InvalidDistributionError(f"p = {p:g} outside (0, 1]")
    if dim < 2:
        raise DimensionMismatchError("kernel integral requires dim >= 2")
    return p**dim / (dim * (dim - 1)) * (math.log(p) - s0_exact(dim))


def entropy_by_quadrature(spectrum: Spectrum, dim: int) -> float:
    """Absolute entropy via exact piecewise integration of N f(s) P(s).

    Independent route from the divided-difference closed form: each
    eigenvalue contributes its gap-product weight times the analytic
    kernel integral.  Falls back to extended precision when the pole
    expansion is badly conditioned.
    """
    if spectrum.dim != dim:
        raise DimensionMismatchError(f"spectrum has {spectrum.dim} entries, expected {dim}")
    if dim == 1:
        return 0.0
    nodes = _distinct_nodes_or_raise(spectrum)
    reps, _ = spectrum.clustered_values()
    if _min_relative_gap(reps, dim) < _MP_GAP_THRESHOLD:
        return _quadrature_mp(nodes, dim)
    terms = []
    for r, p in enumerate(nodes):
        if p == 0.0:
            continue
        prod = 1.0
        for rp, q in enumerate(nodes):
            if rp != r:
                prod *= p - q
        terms.append(-dim * (dim - 1) * kernel_integral(p, dim) / prod)
    total = math.fsum(terms)
    if math.fsum(abs(t) for t in terms) > 1e4:
        return _quadrature_mp(nodes, dim)
    return total


def _quadrature_mp(nodes: np.ndarray, dim: int) -> float:
    with mpmath.workdps(_MP_DPS):
        zs = [mpmath.mpf(repr(float(z))) for z in nodes]
        s0 = mpmath.fsum(mpmath.mpf(1) / k for k in range(2, dim + 1))
        total = mpmath.mpf(0)
        for r, p in enumerate(zs):
            if p == 0:
                continue
            prod = mpmath.mpf(1)
            for rp, q in enumerate(zs):
                if rp != r:
                    prod *= p - q
            kern = p**dim / (dim * (dim - 1)) * (mpmath.log(p) - s0)
            total += -dim * (dim - 1) * kern / prod
        return float(total)


def identity_residuals(spectrum: Spectrum, dim: int, s: float = 0.5):
    """Residuals of the two partial-fraction identities behind the density.

    Returns (|sum_r p_r^N / gap product - 1|, [moment residuals for
    n = 0..N-2 at the probe point s]).  Evaluated at 40 digits so the
    result reflects the identities, not float cancellation.
    """
    if spectrum.dim != dim:
        raise DimensionMismatchError(f"spectrum has {spectrum.dim} entries, expected {dim}")
    nodes = _distinct_nodes_or_raise(spectrum, allow_zero_cluster=False)
    with mpmath.workdps(40):
        zs = [mpmath.mpf(repr(float(z))) for z in nodes]
        sp = mpmath.mpf(repr(float(s)))
        weights = []
        for r, p in enumerate(zs):
            prod = mpmath.mpf(1)
            for rp, q in enumerate(zs):
                if rp != r:
                    prod *= p - q
            weights.append(1 / prod)
        eid1 = abs(mpmath.fsum(w * p**dim for w, p in zip(weights, zs)) - 1)
        moments = [
            abs(mpmath.fsum(w * (sp - p)**n for w, p in zip(weights, zs)))
            for n in range(0, dim - 1)
        ]
        return float(eid1), [float(m) for m in moments]


def perturb_spectrum(spectrum: Spectrum, epsilon: float) -> Spectrum:
    """Spread each degenerate cluster symmetrically by multiples of epsilon.

    Preserves the total probability; a cluster at zero is shifted upward
    and compensated on the largest eigenvalue.  The induced entropy error
    is O(epsilon ln epsilon) -- callers opt in explicitly.
    """
    if epsilon <= 0:
        raise InvalidDistributionError("epsilon must be positive")
    reps, mults = spectrum.clustered_values()
    out = []
    debt = 0.0
    for v, m in zip(reps, mults):
        if m == 1:
            out.append(float(v))
        elif v > 0.0:
            out.extend(float(v) + epsilon * (i - (m - 1) / 2.0) for i in range(m))
        else:
            out.extend(epsilon * i for i in range(m))
            debt += epsilon * m * (m - 1) / 2.0
    out.sort(reverse=True)
    out[0] -= debt
    return spectrum_from_values(out, spectrum.cluster_tolerance)


@dataclass(frozen=True)
class DensityCurve:
    """density_p evaluated on a grid."""

    spectrum: Spectrum
    grid: np.ndarray
    densities: np.ndarray


def density_curve(spectrum: Spectrum, dim: int, points: int) -> DensityCurve:
    """Evaluate the outcome-weight density on a uniform grid over [0, 1]."""
    grid = np.linspace(0.0, 1.0, points)
    dens = np.array([density_p(spectrum, dim, float(x)) for x in grid])
    return DensityCurve(spectrum, grid, dens)
