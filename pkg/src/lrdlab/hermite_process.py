"""Simulation of standard Hermite processes from their integral representations.

Chaos-based representations are discretized on a finite grid: the singular
time factor is integrated analytically over cells of an auxiliary s-grid,
the spatial variables use midpoint values, and the resulting coefficient
tensor drives an off-diagonal polynomial in iid Gaussians.  Every kernel is
rescaled so that the discrete Var(Z(1)) is exactly 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .chaos_contractions import zero_diagonals
from .hermite_algebra import HermiteExpansion
from .lrd_gaussian import PowerLaw, derive_rng, fgn_covariance, sample_path, Tabulated
from .partial_sums import build_vector
from .scaling_laws import ComponentSpec, exact_variance

_AXES = "abc"
MAX_CHAOS_ORDER = 3
_POS_AXIS_XMAX = 50.0
_POS_AXIS_XMIN = 1e-4
_TIME_DOM_XMIN = -50.0


class Representation(enum.Enum):
    EXACT_FGN = "exact-fgn"
    TIME_DOMAIN = "time-domain"
    FINITE_INTERVAL = "finite-interval"
    POSITIVE_HALF_AXIS = "positive-half-axis"
    PARTIAL_SUM_LIMIT = "partial-sum-limit"


_CHAOS_REPS = (
    Representation.TIME_DOMAIN,
    Representation.FINITE_INTERVAL,
    Representation.POSITIVE_HALF_AXIS,
)


@dataclass(frozen=True)
class HermiteProcessSpec:
    """Order k, memory parameter d (LRD range for k), representation, grid size."""

    k: int
    d: float
    representation: Representation = Representation.FINITE_INTERVAL
    M: int = 128

    def __post_init__(self):
        lo = 0.5 * (1.0 - 1.0 / self.k)
        if not lo < self.d < 0.5:
            raise ValueError(
                f"order-{self.k} Hermite process needs d in ({lo}, 0.5), got {self.d}"
            )
        if self.representation in _CHAOS_REPS and self.k > MAX_CHAOS_ORDER:
            raise ValueError(f"chaos discretization capped at order {MAX_CHAOS_ORDER}")

    @property
    def hurst_driver(self):
        """H0 = d + 1/2, the exponent appearing in the integral kernels."""
        return self.d + 0.5

    @property
    def self_similarity(self):
        """Hurst index of the process itself: k (d - 1/2) + 1."""
        return self.k * (self.d - 0.5) + 1.0


def fbm_cov(H, s, t):
    """Fractional Brownian motion covariance (the k=1 oracle)."""
    return 0.5 * (abs(s) ** (2 * H) + abs(t) ** (2 * H) - abs(t - s) ** (2 * H))


# ---------------------------------------------------------------------------
# Grids and per-factor cell averages
# ---------------------------------------------------------------------------

def _space_grid(rep, M):
    if rep is Representation.FINITE_INTERVAL:
        edges = np.linspace(0.0, 1.0, M + 1)
    elif rep is Representation.POSITIVE_HALF_AXIS:
        edges = np.concatenate([[0.0], np.geomspace(_POS_AXIS_XMIN, _POS_AXIS_XMAX, M)])
    elif rep is Representation.TIME_DOMAIN:
        m_neg = M // 2
        edges = np.concatenate(
            [-np.geomspace(-_TIME_DOM_XMIN, _POS_AXIS_XMIN, m_neg), np.linspace(0.0, 1.0, M - m_neg + 1)]
        )
    else:
        raise ValueError(f"no spatial grid for representation {rep}")
    mids = 0.5 * (edges[:-1] + edges[1:])
    weights = np.diff(edges)
    return mids, weights


def _cell_avg_s_minus_x(s_edges, x, d):
    """Cell averages over s of (s - x)_+^(d-1); exact antiderivative per cell."""
    a, b = s_edges[:-1, None], s_edges[1:, None]
    xa = np.clip(a - x[None, :], 0.0, None)
    xb = np.clip(b - x[None, :], 0.0, None)
    return (xb**d - xa**d) / (d * (b - a))


def _cell_avg_one_minus_sx(s_edges, x, d):
    """Cell averages over s of (1 - s x)_+^(d-1) for x > 0."""
    a, b = s_edges[:-1, None], s_edges[1:, None]
    ua = np.clip(1.0 - a * x[None, :], 0.0, None)
    ub = np.clip(1.0 - b * x[None, :], 0.0, None)
    return (ua**d - ub**d) / (d * x[None, :] * (b - a))


def _chaos_coefficients(spec, t, s_cells=None):
    """Amplitude tensor B with B(i1..ik) = kernel * prod sqrt(w); not yet scaled."""
    rep, k, d, M = spec.representation, spec.k, spec.d, spec.M
    mids, w = _space_grid(rep, M)
    Q = s_cells or max(2 * M, 256)
    s_edges = np.linspace(0.0, t, Q + 1)
    ds = np.diff(s_edges)
    s_mid = 0.5 * (s_edges[:-1] + s_edges[1:])

    if rep is Representation.POSITIVE_HALF_AXIS:
        fac = _cell_avg_one_minus_sx(s_edges, mids, d)
        smooth = np.ones(Q)
        prefactor = mids ** (-d)
    elif rep is Representation.FINITE_INTERVAL:
        fac = _cell_avg_s_minus_x(s_edges, mids, d)
        smooth = s_mid ** (k * d)
        prefactor = mids ** (-d)
    else:  # TIME_DOMAIN
        fac = _cell_avg_s_minus_x(s_edges, mids, d)
        smooth = np.ones(Q)
        prefactor = np.ones(M)

    coef = ds * smooth
    subs = ",".join("q" + a for a in _AXES[:k])
    kernel = np.einsum("q," + subs + "->" + _AXES[:k], coef, *([fac] * k), optimize=True)
    amp = kernel
    for axis in range(k):
        shape = [1] * k
        shape[axis] = M
        amp = amp * (prefactor * np.sqrt(w)).reshape(shape)
    return zero_diagonals(amp)


def _raw_variance(amp, k):
    return math.factorial(k) * float(np.sum(amp**2))


class ChaosSampler:
    """Precomputed amplitude tensors for a t-grid; one xi array per draw."""

    def __init__(self, spec, t_grid):
        self.spec = spec
        self.t_grid = np.asarray(t_grid, dtype=float)
        if np.any(self.t_grid <= 0):
            raise ValueError("time grid must be positive")
        amp1 = _chaos_coefficients(spec, 1.0)
        scale = 1.0 / np.sqrt(_raw_variance(amp1, spec.k))
        self.amplitudes = []
        for t in self.t_grid:
            amp = amp1 if t == 1.0 else _chaos_coefficients(spec, t)
            self.amplitudes.append(amp * scale)
        self.grid_size = spec.M

    def evaluate(self, xi):
        k = self.spec.k
        subs = _AXES[:k] + "," + ",".join(_AXES[:k]) + "->"
        return np.array([np.einsum(subs, amp, *([xi] * k)) for amp in self.amplitudes])

    def sample(self, seed, index=0):
        xi = derive_rng(seed, index).standard_normal(self.grid_size)
        return self.evaluate(xi)

    def sample_many(self, R, seed):
        return np.stack([self.sample(seed, r) for r in range(R)])


class FgnSampler:
    """Exact k=1 sampler: integrated fractional Gaussian noise."""

    def __init__(self, spec, t_grid, resolution=1024):
        self.spec = spec
        self.t_grid = np.asarray(t_grid, dtype=float)
        self.n = resolution
        self.H = spec.hurst_driver
        self.model = fgn_covariance(self.H, self.n + 1)
        self.idx = np.floor(self.n * self.t_grid).astype(int)
        if self.idx.min() < 1:
            raise ValueError("resolution too coarse for the smallest t")

    def sample(self, seed, index=0):
        path = sample_path(self.model, self.n, seed, index)
        csum = np.cumsum(path.values)
        return csum[self.idx - 1] / self.n**self.H

    def sample_many(self, R, seed):
        return np.stack([self.sample(seed, r) for r in range(R)])


class PartialSumSampler:
    """Cross-validation route: normalized partial sums of H_k at large N."""

    def __init__(self, spec, t_grid, N=2**13):
        self.spec = spec
        self.t_grid = np.asarray(t_grid, dtype=float)
        self.N = N
        self.model = PowerLaw(spec.d)
        self.component = ComponentSpec(HermiteExpansion.single(spec.k), f"H{spec.k}")
        self.norm = (np.sqrt(exact_variance(self.component.expansion, self.model, N)),)

    def sample(self, seed, index=0):
        path = sample_path(self.model, self.N, seed, index)
        return build_vector(path, [self.component], self.norm, self.t_grid).values[0]

    def sample_many(self, R, seed):
        return np.stack([self.sample(seed, r) for r in range(R)])


def make_sampler(spec, t_grid, **kwargs):
    if spec.representation is Representation.EXACT_FGN:
        if spec.k != 1:
            raise ValueError("exact fGn sampling applies to order k = 1 only")
        return FgnSampler(spec, t_grid, **kwargs)
    if spec.representation is Representation.PARTIAL_SUM_LIMIT:
        return PartialSumSampler(spec, t_grid, **kwargs)
    return ChaosSampler(spec, t_grid)


def simulate(spec, t_grid, seed, index=0):
    """One zero-mean path of the standard Hermite process at the grid times."""
    return make_sampler(spec, t_grid).sample(seed, index)


def joint_simulate(orders, d, t_grid, seed, R=1, representation=Representation.FINITE_INTERVAL, M=128):
    """Component processes of different orders built from one shared Gaussian array.

    Returns an array of shape (R, len(orders), len(t_grid)).
    """
    if representation not in _CHAOS_REPS:
        raise ValueError("joint simulation requires a chaos representation")
    samplers = [ChaosSampler(HermiteProcessSpec(k, d, representation, M), t_grid) for k in orders]
    out = np.empty((R, len(orders), len(np.atleast_1d(t_grid))))
    for r in range(R):
        xi = derive_rng(seed, r).standard_normal(M)
        for j, smp in enumerate(samplers):
            out[r, j] = smp.evaluate(xi)
    return out


# ---------------------------------------------------------------------------
# Kernel positivity (dependence of limit components)
# ---------------------------------------------------------------------------

def _pos_axis_kernel_values(points, d, n_s=256):
    """Positive half-axis kernel at t=1 evaluated at rows of `points` (n, k)."""
    points = np.atleast_2d(points)
    s_edges = np.linspace(0.0, 1.0, n_s + 1)
    for j in range(points.shape[1]):
        fac = _cell_avg_one_minus_sx(s_edges, points[:, j], d)  # (n_s, n)
        if j == 0:
            acc = fac
        else:
            acc = acc * fac
    inner = np.sum(acc * np.diff(s_edges)[:, None], axis=0)
    return inner * np.prod(points ** (-d), axis=1)


def contraction_positivity(p, q, d, n_points=40, n_u=200, seed=7):
    """Minimum of the discretized first contraction of order-p and order-q kernels.

    Evaluates (g_p ox_1 g_q)(x_1..x_{p+q-2}) at random positive sample points,
    integrating the shared coordinate over a truncated log grid.  The limit
    components are dependent precisely because this stays positive.
    """
    if p < 1 or q < 1:
        raise ValueError("orders must be at least 1")
    if n_points < 1 or n_u < 2:
        raise ValueError("degenerate evaluation grid")
    rng = np.random.default_rng(seed)
    u_edges = np.concatenate([[0.0], np.geomspace(_POS_AXIS_XMIN, _POS_AXIS_XMAX, n_u)])
    u_mid = 0.5 * (u_edges[:-1] + u_edges[1:])
    u_w = np.diff(u_edges)
    free = p + q - 2
    pts = np.exp(rng.uniform(np.log(1e-3), np.log(10.0), size=(max(n_points, 1), max(free, 1))))
    if free == 0:
        pts = pts[:1, :0]
    mins = np.inf
    for row in pts:
        x_free, y_free = row[: p - 1], row[p - 1 :]
        gp = _pos_axis_kernel_values(
            np.column_stack([np.tile(x_free, (n_u, 1)), u_mid]) if p > 1 else u_mid[:, None], d
        )
        gq = _pos_axis_kernel_values(
            np.column_stack([np.tile(y_free, (n_u, 1)), u_mid]) if q > 1 else u_mid[:, None], d
        )
        val = float(np.sum(gp * gq * u_w))
        mins = min(mins, val)
    return mins


# ---------------------------------------------------------------------------
# Representation equivalence report
# ---------------------------------------------------------------------------

def representation_equivalence(k, rep_a, rep_b, d, t_grid, R, seed, M=128):
    """Empirical covariance comparison between two representations.

    Returns a dict with the max covariance discrepancy, its size in combined
    Monte Carlo standard errors, and (for k = 2) the third-moment gap at the
    largest grid time.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    spec_a = HermiteProcessSpec(k, d, rep_a, M)
    spec_b = HermiteProcessSpec(k, d, rep_b, M)
    za = make_sampler(spec_a, t_grid).sample_many(R, seed)
    zb = make_sampler(spec_b, t_grid).sample_many(R, seed + 1 if rep_a is not rep_b else seed)
    if rep_a is rep_b:
        zb = za

    def cov_and_se(z):
        prod = z[:, :, None] * z[:, None, :]
        return prod.mean(axis=0), prod.std(axis=0, ddof=1) / np.sqrt(R)

    cov_a, se_a = cov_and_se(za)
    cov_b, se_b = cov_and_se(zb)
    disc = np.abs(cov_a - cov_b)
    se = np.sqrt(se_a**2 + se_b**2)
    report = {
        "max_discrepancy": float(disc.max()),
        "max_sigma": float((disc / np.maximum(se, 1e-300)).max()),
        "cov_a": cov_a,
        "cov_b": cov_b,
        "se": se,
    }
    if k == 2:
        m3a, m3b = za[:, -1] ** 3, zb[:, -1] ** 3
        gap = abs(m3a.mean() - m3b.mean())
        se3 = np.sqrt(m3a.var(ddof=1) / R + m3b.var(ddof=1) / R)
        report["third_moment_gap"] = float(gap)
        report["third_moment_sigma"] = float(gap / max(se3, 1e-300))
    return report
