"""Haar-measure Monte-Carlo oracle for the basis-averaged entropy.

Samples are partitioned into fixed-size chunks; chunk i always draws
from substream i of the supplied RngStream, and chunk statistics are
pooled in chunk order.  Results are therefore identical whether the
chunks run on one worker or many.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientSamplesError
from .rng import RngStream
from .states import DensityMatrix, Spectrum, eig_hermitian

CHUNK_SAMPLES = 25_000


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int


@dataclass(frozen=True)
class Histogram:
    """Empirical density of the outcome weight s on [0, 1]."""

    edges: np.ndarray
    counts: np.ndarray
    densities: np.ndarray
    samples: int


def _f(s: np.ndarray) -> np.ndarray:
    """-s ln s elementwise, with f(0) = 0."""
    out = np.zeros_like(s)
    mask = s > 0.0
    out[mask] = -s[mask] * np.log(s[mask])
    return out


def _chunk_sizes(samples: int) -> list[int]:
    sizes = [CHUNK_SAMPLES] * (samples // CHUNK_SAMPLES)
    if samples % CHUNK_SAMPLES:
        sizes.append(samples % CHUNK_SAMPLES)
    return sizes


def _sphere_weights(p: np.ndarray, count: int, gen: np.random.Generator) -> np.ndarray:
    """Outcome weights s = sum p_r |psi_r|^2 for `count` random pure states."""
    n = len(p)
    z = gen.standard_normal((count, n)) + 1j * gen.standard_normal((count, n))
    mag = np.abs(z) ** 2
    return (mag @ p) / mag.sum(axis=1)


def _chunk_values(p: np.ndarray, count: int, gen: np.random.Generator, mode: str) -> np.ndarray:
    n = len(p)
    if mode == "sphere":
        return n * _f(_sphere_weights(p, count, gen))
    if mode == "basis":
        z = (gen.standard_normal((count, n, n))
             + 1j * gen.standard_normal((count, n, n))) / np.sqrt(2)
        q, r = np.linalg.qr(z)
        d = np.einsum("kii->ki", r)
        q = q * (d / np.abs(d))[:, None, :]
        probs = np.einsum("r,kra->ka", p, np.abs(q) ** 2)
        return _f(probs).sum(axis=1)
    raise ValueError(f"unknown mode {mode!r}")


def _pool(stats: list[tuple[int, float, float]]) -> tuple[int, float, float]:
    """Combine per-chunk (count, mean, M2) in fixed order (Chan's update)."""
    n, mean, m2 = stats[0]
    for nb, mb, m2b in stats[1:]:
        delta = mb - mean
        tot = n + nb
        mean = mean + delta * nb / tot
        m2 = m2 + m2b + delta * delta * n * nb / tot
        n = tot
    return n, mean, m2


def mc_entropy_estimate(rho: DensityMatrix, samples: int, rng: RngStream,
                        mode: str = "sphere", workers: int = 1) -> McEstimate:
    """Monte-Carlo estimate of the basis-averaged entropy of rho.

    mode="sphere" averages N f(s) over random pure states; mode="basis"
    averages the outcome entropy over Haar-random measurement bases.
    Both estimate the same quantity.
    """
    if samples < 100:
        raise InsufficientSamplesError(f"need >= 100 samples, got {samples}")
    spec, _ = eig_hermitian(rho)
    p = spec.values

    def run(args):
        index, count = args
        vals = _chunk_values(p, count, rng.child(index), mode)
        mean = vals.mean()
        return count, float(mean), float(np.sum((vals - mean) ** 2))

    jobs = list(enumerate(_chunk_sizes(samples)))
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(run, jobs))
    else:
        stats = [run(j) for j in jobs]
    n, mean, m2 = _pool(stats)
    std = math.sqrt(m2 / (n - 1))
    return McEstimate(mean=mean, stderr=std / math.sqrt(n), samples=n, seed=rng.seed)


def mc_density_histogram(spectrum: Spectrum, dim: int, samples: int, bins: int,
                         rng: RngStream, workers: int = 1) -> Histogram:
    """Empirical histogram of the outcome weight s over random pure states."""
    if samples < 10_000:
        raise InsufficientSamplesError(f"need >= 10^4 samples, got {samples}")
    if bins < 10:
        raise InsufficientSamplesError(f"need >= 10 bins, got {bins}")
    if spectrum.dim != dim:
        raise InsufficientSamplesError(f"spectrum has {spectrum.dim} entries, expected {dim}")
    p = spectrum.values
    edges = np.linspace(0.0, 1.0, bins + 1)

    def run(args):
        index, count = args
        s = _sphere_weights(p, count, rng.child(index))
        counts, _ = np.histogram(s, bins=edges)
        return counts

    jobs = list(enumerate(_chunk_sizes(samples)))
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_chunk = list(pool.map(run, jobs))
    else:
        per_chunk = [run(j) for j in jobs]
    counts = np.sum(per_chunk, axis=0)
    widths = np.diff(edges)
    densities = counts / (samples * widths)
    return Histogram(edges=edges, counts=counts, densities=densities, samples=samples)
