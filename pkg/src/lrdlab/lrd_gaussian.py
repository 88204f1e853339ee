"""Autocovariance models and exact sampling of stationary Gaussian series.

Sampling uses circulant embedding (Davies-Harte): the covariance sequence is
mirrored into a circulant vector, diagonalized by the FFT, and the resulting
nonnegative spectrum drives an exact Gaussian draw.  Small negative
eigenvalues (roundoff) are clipped; genuinely indefinite embeddings trigger
doubling of the embedding size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Relative eigenvalue tolerance for the circulant embedding.
TOL_EIG = 1e-10
MAX_EMBED_DOUBLINGS = 3


class EmbeddingError(RuntimeError):
    """Circulant embedding stayed indefinite after the doubling budget."""


class CovarianceModel:
    """Base class for autocovariance models with gamma(0) = 1."""

    def gamma(self, lags):
        """Autocovariance at integer lags (vectorized, symmetric in lag)."""
        raise NotImplementedError

    @property
    def max_lag(self):
        """Largest queryable lag, or None if unbounded."""
        return None


@dataclass(frozen=True)
class PowerLaw(CovarianceModel):
    """gamma(n) = (1 + |n|)^(2d-1), regularly varying with memory parameter d.

    The +1 shift avoids the n=0 singularity while keeping the asymptotics;
    the slowly varying part is constant, so gamma(0) = 1.
    """

    d: float

    def __post_init__(self):
        if not 0.0 < self.d < 0.5:
            raise ValueError(f"memory parameter d must lie in (0, 1/2), got {self.d}")

    def gamma(self, lags):
        n = np.abs(np.asarray(lags, dtype=float))
        return (1.0 + n) ** (2.0 * self.d - 1.0)


@dataclass(frozen=True)
class Geometric(CovarianceModel):
    """AR(1)-type autocovariance gamma(n) = rho^|n|."""

    rho: float

    def __post_init__(self):
        if not -1.0 < self.rho < 1.0:
            raise ValueError(f"lag-1 correlation rho must lie in (-1, 1), got {self.rho}")

    def gamma(self, lags):
        n = np.abs(np.asarray(lags, dtype=float))
        if self.rho == 0.0:
            return np.where(n == 0, 1.0, 0.0)
        return np.sign(self.rho) ** (n.astype(int) % 2) * np.abs(self.rho) ** n


@dataclass(frozen=True)
class Tabulated(CovarianceModel):
    """Finite symmetric covariance table values = (gamma(0), gamma(1), ...)."""

    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals or abs(vals[0] - 1.0) > 1e-12:
            raise ValueError("tabulated covariance must start with gamma(0) = 1")

    def gamma(self, lags):
        n = np.abs(np.asarray(lags, dtype=int))
        if np.any(n >= len(self.values)):
            missing = int(np.max(n))
            raise KeyError(f"covariance table has no lag {missing} (max {len(self.values) - 1})")
        return np.asarray(self.values)[n].astype(float)

    @property
    def max_lag(self):
        return len(self.values) - 1


def fgn_covariance(hurst, max_lag):
    """Tabulated exact fractional Gaussian noise covariance for H in (0, 1)."""
    if not 0.0 < hurst < 1.0:
        raise ValueError(f"hurst must lie in (0, 1), got {hurst}")
    n = np.arange(max_lag + 1, dtype=float)
    two_h = 2.0 * hurst
    vals = 0.5 * ((n + 1.0) ** two_h - 2.0 * n**two_h + np.abs(n - 1.0) ** two_h)
    return Tabulated(tuple(vals))


@dataclass(frozen=True)
class GaussianPath:
    """One exact draw of the stationary series, tagged with its provenance."""

    values: np.ndarray
    model: CovarianceModel
    seed: int

    def __len__(self):
        return len(self.values)


def autocovariance(model, lag):
    """gamma(|lag|) for the given model."""
    return float(model.gamma(abs(int(lag))))


def spectral_density_grid(model, M):
    """Eigenvalues of the size-M circulant embedding of (gamma(0), ..., gamma(M-1)).

    These approximate 2*pi*f(omega_j) on the Fourier grid omega_j = 2*pi*j/M.
    Negative values are reported as-is; the sampler handles them downstream.
    """
    if M < 2:
        raise ValueError("grid size M must be at least 2")
    j = np.arange(M)
    c = model.gamma(np.minimum(j, M - j))
    lam = np.fft.fft(c).real
    return lam


def derive_rng(seed, index=0):
    """Counter-based per-replication generator from (master seed, index)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(index)])))


def _embedding_eigenvalues(model, m):
    j = np.arange(m)
    c = model.gamma(np.minimum(j, m - j))
    return np.fft.fft(c).real


def sample_path(model, N, seed, index=0):
    """Exact stationary Gaussian sample of length N; deterministic in (seed, index)."""
    if N < 1:
        raise ValueError("path length N must be at least 1")
    m = 2 * int(N)
    lam = None
    for _ in range(MAX_EMBED_DOUBLINGS + 1):
        lam = _embedding_eigenvalues(model, m)
        if lam.min() >= -TOL_EIG * lam.max():
            break
        if model.max_lag is not None and m // 2 >= model.max_lag:
            break  # table exhausted; no point doubling further
        m *= 2
    if lam.min() < -TOL_EIG * lam.max():
        raise EmbeddingError(
            f"circulant embedding indefinite: min eigenvalue {lam.min():.3e} "
            f"(max {lam.max():.3e}) at embedding size {m}"
        )
    lam = np.clip(lam, 0.0, None)
    rng = derive_rng(seed, index)
    z = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    x = np.fft.fft(np.sqrt(lam) * z).real / np.sqrt(m)
    # Re(fft(sqrt(lam) z))/sqrt(m) has covariance equal to the circulant row,
    # which matches gamma on lags 0..N-1.
    return GaussianPath(values=x[:N], model=model, seed=int(seed))


def exact_partial_sum_variance(model, N):
    """Var(X_1 + ... + X_N) computed exactly from gamma."""
    h = np.arange(1, N)
    g = model.gamma(h) if N > 1 else np.zeros(0)
    return float(N + 2.0 * np.sum((N - h) * g))
