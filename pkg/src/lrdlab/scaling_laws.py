"""Regime classification, normalizations, and exact variance/covariance laws."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.special import factorial, gamma as gamma_fn

from .hermite_algebra import HermiteExpansion
from .lrd_gaussian import Geometric, PowerLaw, Tabulated

LAG_SUM_RTOL = 1e-10
_BLOCK = 4096


class Regime(enum.Enum):
    SRD = "SRD"
    BOUNDARY = "BOUNDARY"
    LRD = "LRD"


@dataclass(frozen=True)
class ComponentSpec:
    """A nonlinear function of the series, given by its Hermite expansion."""

    expansion: HermiteExpansion
    label: str = ""

    @property
    def rank(self):
        return self.expansion.rank


def classify(d, k):
    """SRD / BOUNDARY / LRD according to d versus (1 - 1/k)/2."""
    if not 0.0 < d < 0.5:
        raise ValueError(f"memory parameter d must lie in (0, 1/2), got {d}")
    if k < 1:
        raise ValueError("Hermite rank k must be at least 1")
    threshold = 0.5 * (1.0 - 1.0 / k)
    if abs(d - threshold) <= 1e-12:
        return Regime.BOUNDARY
    return Regime.SRD if d < threshold else Regime.LRD


class DivergentLagSum(ValueError):
    """sum_n gamma(n)^m diverges: the component is not SRD at this power."""


def lag_sum(model, m, rtol=LAG_SUM_RTOL):
    """sum over all integers n of gamma(n)^m, with a certified tail bound.

    Returns (value, tail_bound).  Raises DivergentLagSum when the series
    provably diverges (PowerLaw with (1-2d)m <= 1).
    """
    if isinstance(model, Tabulated):
        g = np.asarray(model.values)
        return float(g[0] ** m + 2.0 * np.sum(g[1:] ** m)), 0.0
    if isinstance(model, PowerLaw):
        a = (1.0 - 2.0 * model.d) * m
        if a <= 1.0 + 1e-12:
            raise DivergentLagSum(
                f"sum gamma^{m} diverges for PowerLaw d={model.d} ((1-2d)m = {a:.4f} <= 1)"
            )

    if isinstance(model, PowerLaw):
        # Direct sum to T, then an Euler-Maclaurin tail for sum_{n>=T} (1+n)^-a.
        a = (1.0 - 2.0 * model.d) * m
        T = 1 << 16
        n = np.arange(1, T)
        total = 1.0 + 2.0 * np.sum((1.0 + n) ** (-a))
        base = (1.0 + T) ** (-a)
        tail = base * (1.0 + T) / (a - 1.0) + 0.5 * base + a * base / (12.0 * (1.0 + T))
        err = 2.0 * a * (a + 1.0) * (a + 2.0) * base / (1.0 + T) ** 3
        return float(total + 2.0 * tail), float(err)

    total = 1.0  # gamma(0)^m = 1
    start = 1
    while True:
        n = np.arange(start, start + _BLOCK)
        total += 2.0 * np.sum(model.gamma(n) ** m)
        start += _BLOCK
        tail = _tail_bound(model, m, start)
        if tail <= rtol * abs(total):
            return float(total), float(tail)
        if start > 10**8:
            raise DivergentLagSum(f"lag sum did not converge by n = {start}")


def _tail_bound(model, m, start):
    """Upper bound on 2 * sum_{n >= start} |gamma(n)|^m."""
    if isinstance(model, Geometric):
        r = abs(model.rho) ** m
        if r == 0.0:
            return 0.0
        return 2.0 * r**start / (1.0 - r)
    return 0.0


def sigma_sq(exp, model, max_order=None):
    """Limit variance constant sigma^2 = sum_m g_m^2 m! sum_n gamma(n)^m.

    Returns (value, tail_bound) where the tail aggregates the certified lag-sum
    tails.  Raises DivergentLagSum if the rank-m lag sum diverges.
    """
    c = exp.coefficients
    rank = exp.rank
    M = exp.truncation if max_order is None else min(max_order, exp.truncation)
    total, tail = 0.0, 0.0
    for m in range(rank, M + 1):
        if c[m] == 0.0:
            continue
        s, t = lag_sum(model, m)
        w = c[m] ** 2 * float(factorial(m))
        total += w * s
        tail += w * t
    return total, tail


def limit_cov_srd(c1, c2, model, t1, t2):
    """Limit covariance of the standardized SRD components at times (t1, t2)."""
    g1, g2 = c1.expansion.coefficients, c2.expansion.coefficients
    s1 = np.sqrt(sigma_sq(c1.expansion, model)[0])
    s2 = np.sqrt(sigma_sq(c2.expansion, model)[0])
    lo = max(c1.rank, c2.rank)
    hi = min(g1.size, g2.size) - 1
    acc = 0.0
    for m in range(lo, hi + 1):
        if g1[m] == 0.0 or g2[m] == 0.0:
            continue
        acc += g1[m] * g2[m] * float(factorial(m)) * lag_sum(model, m)[0]
    return min(t1, t2) * acc / (s1 * s2)


def exact_variance(exp, model, N):
    """Var(sum_{n<=N} G(X_n)) = sum_m g_m^2 m! sum_{|h|<N} (N-|h|) gamma(h)^m."""
    if N < 1:
        raise ValueError("N must be at least 1")
    c = exp.coefficients
    h = np.arange(1, N)
    g = model.gamma(h) if N > 1 else np.zeros(0)
    total = 0.0
    for m in range(1, c.size):
        if c[m] == 0.0:
            continue
        inner = N + 2.0 * np.sum((N - h) * g**m)
        total += c[m] ** 2 * float(factorial(m)) * inner
    return float(total)


def normalization(exp, model, regime, N):
    """A(N) such that the standardized partial sum has variance -> 1.

    SRD uses sigma * sqrt(N) (the asymptotic constant); LRD and BOUNDARY use
    the exact finite-N standard deviation, which makes Var exactly 1 at t = 1.
    """
    if regime is Regime.SRD:
        s2, _ = sigma_sq(exp, model)
        return float(np.sqrt(s2 * N))
    return float(np.sqrt(exact_variance(exp, model, N)))


def d_memory_of_sum(d, k):
    """Memory parameter of {H_k(X_n)} under LRD: (d - 1/2) k + 1/2."""
    return (d - 0.5) * k + 0.5


def b_const(k, d):
    """Unit-variance normalization constant of the order-k Hermite process."""
    if k < 1:
        raise ValueError("order k must be at least 1")
    num = (k * (d - 0.5) + 1.0) * (2.0 * k * (d - 0.5) + 1.0)
    if 2.0 * k * (d - 0.5) + 1.0 <= 0.0:
        raise ValueError(
            f"b_const requires d > (1 - 1/k)/2; got d={d}, k={k} (LRD threshold violated)"
        )
    den = float(factorial(k)) * (2.0 * gamma_fn(1.0 - 2.0 * d) * np.sin(d * np.pi)) ** k
    return float(np.sqrt(num / den))


def cov_limit_lemma(model, m, t1, t2, N):
    """S_N = N^-1 sum_{n1 <= [N t1]} sum_{n2 <= [N t2]} gamma(n1 - n2)^m.

    Deterministic check that S_N -> (t1 ^ t2) * sum_n gamma(n)^m.
    """
    a, b = int(np.floor(N * t1)), int(np.floor(N * t2))
    if a > b:
        a, b = b, a
    if a < 1:
        raise ValueError("grid too coarse: [N t] < 1")
    h = np.arange(-(b - 1), a)
    counts = np.minimum(a, b + h) - np.maximum(1, 1 + h) + 1
    counts = np.clip(counts, 0, None)
    return float(np.sum(counts * model.gamma(h) ** m) / N)


@dataclass(frozen=True)
class LimitModel:
    """Per-component limit-law summary for a fixed d and component list."""

    specs: tuple
    model: PowerLaw
    regimes: tuple
    sigmas: tuple  # sqrt(sigma_j^2) for SRD components, None otherwise
    d_sums: tuple  # memory parameter of the component series (LRD), None for SRD
    b_consts: tuple  # b_{k,d} for LRD components, None otherwise

    def normalizations(self, N):
        return tuple(
            normalization(s.expansion, self.model, r, N)
            for s, r in zip(self.specs, self.regimes)
        )

    def limit_cov(self, j1, j2, t1, t2):
        if self.regimes[j1] is not Regime.SRD or self.regimes[j2] is not Regime.SRD:
            raise ValueError("limit covariance matrix applies to the SRD block only")
        return limit_cov_srd(self.specs[j1], self.specs[j2], self.model, t1, t2)

    def srd_cov_matrix(self, t_pairs):
        """Stacked SRD-block covariance matrices, one per (t1, t2) pair."""
        idx = [j for j, r in enumerate(self.regimes) if r is Regime.SRD]
        out = np.empty((len(t_pairs), len(idx), len(idx)))
        for p, (t1, t2) in enumerate(t_pairs):
            for a, ja in enumerate(idx):
                for b, jb in enumerate(idx):
                    out[p, a, b] = self.limit_cov(ja, jb, t1, t2)
        return idx, out


def build_limit_model(specs, model):
    """Classify every component of a PowerLaw model and collect its constants."""
    if not isinstance(model, PowerLaw):
        raise TypeError("limit-law classification needs a PowerLaw model (memory parameter d)")
    regimes, sigmas, dsums, bconsts = [], [], [], []
    for spec in specs:
        k = spec.rank
        regime = classify(model.d, k)
        regimes.append(regime)
        if regime is Regime.SRD:
            sigmas.append(float(np.sqrt(sigma_sq(spec.expansion, model)[0])))
            dsums.append(None)
            bconsts.append(None)
        else:
            sigmas.append(None)
            dsums.append(d_memory_of_sum(model.d, k))
            bconsts.append(b_const(k, model.d) if regime is Regime.LRD else None)
    return LimitModel(
        specs=tuple(specs),
        model=model,
        regimes=tuple(regimes),
        sigmas=tuple(sigmas),
        d_sums=tuple(dsums),
        b_consts=tuple(bconsts),
    )
