"""Probabilists' Hermite polynomials, expansions, ranks, and tightness checks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import factorial, roots_hermitenorm

# Relative threshold below which an expansion coefficient counts as zero.
EPS_RANK = 1e-6
# Agreement required between the 200- and 400-node quadratures, per coefficient.
TOL_COEFF = 1e-8
QUAD_NODES = 200


class QuadratureError(RuntimeError):
    """Gauss-Hermite quadrature failed to stabilize for some coefficient."""


def hermite_poly(m, x):
    """H_m(x), probabilists' convention, via the three-term recurrence."""
    if m < 0:
        raise ValueError("order m must be nonnegative")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if m == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = x.copy()
    for k in range(1, m):
        h, h_prev = x * h - k * h_prev, h
    return h if h.ndim else float(h)


def hermite_matrix(x, max_order):
    """Array of shape (max_order+1, len(x)) with rows H_0(x)..H_max(x)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((max_order + 1, x.size))
    out[0] = 1.0
    if max_order >= 1:
        out[1] = x
    for k in range(1, max_order):
        out[k + 1] = x * out[k] - k * out[k - 1]
    return out


@dataclass(frozen=True)
class HermiteExpansion:
    """Coefficients g_0..g_M of G in the Hermite basis; g_0 = 0 once centered."""

    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=float)
        if coeffs.ndim != 1 or coeffs.size < 2:
            raise ValueError("need at least coefficients g_0, g_1")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_coefficients(cls, coeffs):
        c = np.asarray(coeffs, dtype=float)
        if c.size == 1:
            c = np.append(c, 0.0)
        return cls(c)

    @classmethod
    def single(cls, m, scale=1.0):
        """Expansion of scale * H_m."""
        c = np.zeros(max(m + 1, 2))
        c[m] = scale
        return cls(c)

    @property
    def truncation(self):
        return self.coefficients.size - 1

    @property
    def l2_norm_sq(self):
        m = np.arange(self.coefficients.size)
        return float(np.sum(factorial(m) * self.coefficients**2))

    @property
    def rank(self):
        return hermite_rank(self)

    def centered(self):
        c = self.coefficients.copy()
        c[0] = 0.0
        return HermiteExpansion(c)

    def evaluate(self, x):
        """Sum of g_m H_m(x) over the stored coefficients."""
        H = hermite_matrix(x, self.truncation)
        vals = self.coefficients @ H
        return vals if np.ndim(x) else float(vals[0])


def _gauss_hermite_nodes(n):
    """Nodes and standard-Gaussian weights (weights sum to 1)."""
    # numpy's hermegauss overflows past ~150 nodes; scipy's version is stable
    x, w = roots_hermitenorm(n)
    return x, w / np.sqrt(2.0 * np.pi)


def expand(G, M, centered=True, nodes=QUAD_NODES):
    """Hermite coefficients of G up to order M by Gauss-Hermite quadrature.

    g_m = E[G(X) H_m(X)] / m!  for standard Gaussian X.  The node count is
    doubled and the two estimates must agree within TOL_COEFF per coefficient.
    """
    if M < 1:
        raise ValueError("truncation M must be at least 1")

    def coeffs_at(n):
        x, w = _gauss_hermite_nodes(n)
        gx = np.asarray(G(x), dtype=float)
        H = hermite_matrix(x, M)
        raw = H @ (w * gx)
        return raw / factorial(np.arange(M + 1))

    c1 = coeffs_at(nodes)
    c2 = coeffs_at(2 * nodes)
    diff = np.abs(c1 - c2)
    if np.any(diff > TOL_COEFF):
        bad = int(np.argmax(diff))
        raise QuadratureError(
            f"coefficient g_{bad} did not stabilize: {c1[bad]:.6e} vs {c2[bad]:.6e}"
        )
    if centered:
        c2[0] = 0.0
    return HermiteExpansion(c2)


def hermite_rank(exp):
    """Smallest m >= 1 with |g_m| above the relative threshold."""
    c = exp.coefficients
    scale = np.sqrt(np.sum(factorial(np.arange(c.size)) * c**2))
    if scale == 0.0:
        raise ValueError("zero function: all Hermite coefficients vanish")
    for m in range(1, c.size):
        if abs(c[m]) > EPS_RANK * scale:
            return m
    raise ValueError("zero function: all Hermite coefficients below threshold")


def tightness_condition(exp):
    """Partial sums of sum_k 3^(k/2) sqrt(k!) |g_k| plus a ratio-test verdict.

    Returns (converges, partial_sums).  A short expansion (fewer than 6 nonzero
    terms) is a genuine finite polynomial and passes trivially; with a longer
    tail available, the ratio test on the last nonzero terms must show decay.
    """
    c = exp.coefficients
    k = np.arange(1, c.size)
    terms = 3.0 ** (k / 2.0) * np.sqrt(factorial(k)) * np.abs(c[1:])
    partial = np.cumsum(terms)
    nz = np.nonzero(terms)[0]
    if nz.size < 6:
        return True, partial
    tail = terms[nz[-6:]]
    ratios = tail[1:] / tail[:-1]
    converges = bool(np.all(ratios < 1.0 - 1e-12))
    return converges, partial
