"""Discrete Wiener-chaos algebra: contractions, products, independence checks.

Kernels live on a finite grid with a positive weight per grid point (a discrete
control measure).  Multiple stochastic integrals become sums over tuples of
distinct grid indices, so every identity here is exactly computable; Gaussian
moment bookkeeping is done by Isserlis enumeration on small grids.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz

from .lrd_gaussian import spectral_density_grid
from .scaling_laws import exact_variance
from .hermite_algebra import HermiteExpansion

MAX_SYMMETRIZE_ORDER = 6
_AXES = "abcdefgh"


@dataclass(frozen=True)
class ChaosKernel:
    """Order-p coefficient array on a weighted grid."""

    order: int
    weights: np.ndarray
    array: np.ndarray
    symmetric: bool = False

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        arr = np.asarray(self.array)
        if np.any(w <= 0):
            raise ValueError("grid weights must be positive")
        if arr.shape != (w.size,) * self.order:
            raise ValueError(f"array shape {arr.shape} incompatible with order {self.order}")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "array", arr)

    @property
    def grid_size(self):
        return self.weights.size

    def norm_sq(self):
        return float(_weighted_abs2_sum(self.array, self.weights, self.order))

    def norm(self):
        return float(np.sqrt(self.norm_sq()))


def _weighted_abs2_sum(arr, w, order):
    out = np.abs(arr) ** 2
    for axis in range(order):
        shape = [1] * order
        shape[axis] = w.size
        out = out * w.reshape(shape)
    return np.sum(out)


def _apply_weights(arr, w, axes):
    out = arr
    for ax in axes:
        shape = [1] * out.ndim
        shape[ax] = w.size
        out = out * w.reshape(shape)
    return out


def _check_same_grid(f, g):
    if f.grid_size != g.grid_size or not np.allclose(f.weights, g.weights):
        raise ValueError("kernels must share the same grid and weights")


def contract(f, g, r):
    """(f tensor_r g): integrate f against conj(g) over r shared coordinates.

    r = 0 is the tensor product; r = p = q gives the scalar inner product
    <f, g> (returned as an order-0 kernel).
    """
    _check_same_grid(f, g)
    p, q = f.order, g.order
    if not 0 <= r <= min(p, q):
        raise ValueError(f"contraction order r={r} out of range for orders ({p}, {q})")
    garr = np.conj(g.array) if np.iscomplexobj(g.array) else g.array
    if r == 0:
        arr = np.multiply.outer(f.array, garr)
    else:
        fw = _apply_weights(f.array, f.weights, axes=range(p - r, p))
        arr = np.tensordot(fw, garr, axes=(list(range(p - r, p)), list(range(q - r, q))))
    arr = np.asarray(arr)
    return ChaosKernel(order=p + q - 2 * r, weights=f.weights, array=arr)


def symmetrize(f):
    """Average over all coordinate permutations; idempotent."""
    if f.order > MAX_SYMMETRIZE_ORDER:
        raise ValueError(f"symmetrization capped at order {MAX_SYMMETRIZE_ORDER}")
    if f.order <= 1:
        return ChaosKernel(f.order, f.weights, f.array, symmetric=True)
    acc = np.zeros_like(np.asarray(f.array, dtype=np.result_type(f.array, float)))
    perms = list(itertools.permutations(range(f.order)))
    for perm in perms:
        acc = acc + np.transpose(f.array, perm)
    return ChaosKernel(f.order, f.weights, acc / len(perms), symmetric=True)


def zero_diagonals(arr):
    """Zero every cell with two equal indices (the off-diagonal convention)."""
    arr = np.array(arr, copy=True)
    p = arr.ndim
    if p <= 1:
        return arr
    M = arr.shape[0]
    ar = np.arange(M)
    for a, b in itertools.combinations(range(p), 2):
        view = np.moveaxis(arr, (a, b), (0, 1))
        view[ar, ar] = 0
    return arr


def discrete_ito(f, xi):
    """Sum over distinct index tuples of f(i) * prod xi_i * prod sqrt(w_i)."""
    if not f.symmetric and f.order > 1:
        raise ValueError("discrete stochastic integral requires a symmetric kernel")
    xi = np.asarray(xi, dtype=float)
    if xi.size != f.grid_size:
        raise ValueError("Gaussian array must align with the kernel grid")
    eta = xi * np.sqrt(f.weights)
    if f.order == 0:
        return complex(f.array) if np.iscomplexobj(f.array) else float(f.array)
    arr = zero_diagonals(f.array)
    out = np.einsum(_AXES[: f.order] + "," + ",".join(_AXES[: f.order]) + "->", arr, *([eta] * f.order))
    return float(out.real) if not np.iscomplexobj(f.array) else complex(out)


def ito_variance(f):
    """Var of the discrete integral: p! * sum over off-diagonal cells of |f|^2 w."""
    arr = zero_diagonals(f.array)
    return float(math.factorial(f.order) * _weighted_abs2_sum(arr, f.weights, f.order))


# ---------------------------------------------------------------------------
# Exact Gaussian moment bookkeeping (Isserlis / Wick on small grids)
# ---------------------------------------------------------------------------

def gaussian_product_moment(exponents):
    """E[prod xi_i^{m_i}] for iid standard normals: prod (m_i - 1)!! or 0."""
    out = 1.0
    for m in exponents:
        if m % 2:
            return 0.0
        out *= math.prod(range(m - 1, 0, -2)) if m else 1
    return float(out)


def ito_polynomial(f):
    """The discrete integral as a polynomial in xi: {exponent tuple: coeff}."""
    M = f.grid_size
    sw = np.sqrt(f.weights)
    if f.order == 0:
        return {(0,) * M: float(np.real(f.array))}
    poly = {}
    for idx in itertools.product(range(M), repeat=f.order):
        if len(set(idx)) != f.order:
            continue
        coeff = f.array[idx] * math.prod(sw[i] for i in idx)
        if coeff == 0:
            continue
        expo = [0] * M
        for i in idx:
            expo[i] += 1
        key = tuple(expo)
        poly[key] = poly.get(key, 0.0) + float(np.real(coeff))
    return poly


def poly_mul(p1, p2):
    out = {}
    for e1, c1 in p1.items():
        for e2, c2 in p2.items():
            key = tuple(a + b for a, b in zip(e1, e2))
            out[key] = out.get(key, 0.0) + c1 * c2
    return out


def poly_sub(p1, p2):
    out = dict(p1)
    for e, c in p2.items():
        out[e] = out.get(e, 0.0) - c
    return out


def poly_expect(poly):
    return sum(c * gaussian_product_moment(e) for e, c in poly.items())


def random_symmetric_kernel(order, weights, rng):
    """Random symmetric off-diagonal kernel for moment tests."""
    M = len(weights)
    arr = rng.standard_normal((M,) * order) if order else np.array(rng.standard_normal())
    k = ChaosKernel(order, weights, zero_diagonals(arr) if order > 1 else arr)
    return symmetrize(k)


def product_formula_check(f, g, rng=None, n_probe=3):
    """Max mixed-moment deviation between I_p(f) I_q(g) and its chaos expansion.

    Both sides are expanded as exact polynomials in the grid Gaussians; their
    moments against probe integrals I_s(h) of every order s <= p + q are
    compared via Isserlis enumeration.
    """
    _check_same_grid(f, g)
    p, q = f.order, g.order
    if p + q > 6:
        raise ValueError("exact product check capped at p + q <= 6")
    if f.grid_size > 6:
        raise ValueError("exact product check capped at 6 grid points")
    rng = np.random.default_rng(0) if rng is None else rng

    lhs = poly_mul(ito_polynomial(f), ito_polynomial(g))
    rhs = {}
    for r in range(0, min(p, q) + 1):
        coef = math.factorial(r) * math.comb(p, r) * math.comb(q, r)
        term = symmetrize(contract(f, g, r))
        for e, c in ito_polynomial(term).items():
            rhs[e] = rhs.get(e, 0.0) + coef * c
    diff = poly_sub(lhs, rhs)

    dev = abs(poly_expect(diff))
    for s in range(1, p + q + 1):
        for _ in range(n_probe):
            h = random_symmetric_kernel(s, f.weights, rng)
            dev = max(dev, abs(poly_expect(poly_mul(diff, ito_polynomial(h)))))
    return dev


def independence_criterion(f, g):
    """Norm of the first contraction; zero iff the grid-level criterion holds."""
    return contract(f, g, 1).norm()


# ---------------------------------------------------------------------------
# Partial-sum kernels in the discrete spectral basis
# ---------------------------------------------------------------------------

def partial_sum_kernel(m, N, t, model, normalization=None):
    """Kernel of A(N)^-1 sum_{n <= [Nt]} H_m(X_n) on the circulant Fourier grid.

    Grid points are the 2N Fourier frequencies of the length-N embedding;
    weights are the spectral masses lambda_l / (2N).  Dense construction, so
    keep m <= 3 and N small.
    """
    if m < 1:
        raise ValueError("Hermite order m must be at least 1")
    K = int(np.floor(N * t))
    two_n = 2 * N
    lam = np.clip(spectral_density_grid(model, two_n), 0.0, None)
    w = lam / two_n
    # Zero-mass cells break the positive-weight invariant; floor them.
    w = np.maximum(w, 1e-300)
    if normalization is None:
        normalization = np.sqrt(exact_variance(HermiteExpansion.single(m), model, N))
    omega = 2.0 * np.pi * np.arange(two_n) / two_n
    if K == 0:
        arr = np.zeros((two_n,) * m, dtype=complex)
        return ChaosKernel(m, w, arr, symmetric=True)
    phase = np.exp(1j * np.outer(np.arange(1, K + 1), omega))  # (K, 2N)
    subscripts = ",".join("n" + a for a in _AXES[:m]) + "->" + _AXES[:m]
    arr = np.einsum(subscripts, *([phase] * m)) / normalization
    return ChaosKernel(m, w, arr, symmetric=True)


def partial_sum_contraction_norm(model, p, q, r, N, t=1.0, norm_p=None, norm_q=None):
    """|| f_N tensor_r g_N || for partial-sum kernels, via Toeplitz identities.

    Equivalent to contracting the dense spectral kernels but costs three
    K x K matrix products, so it scales to the N used in decay tables.
    """
    if not 1 <= r <= min(p, q):
        raise ValueError("r must lie in 1..min(p, q)")
    K = int(np.floor(N * t))
    if norm_p is None:
        norm_p = np.sqrt(exact_variance(HermiteExpansion.single(p), model, N))
    if norm_q is None:
        norm_q = np.sqrt(exact_variance(HermiteExpansion.single(q), model, N))
    gam = model.gamma(np.arange(K, dtype=float))
    F = toeplitz(gam**r)
    G = toeplitz(gam ** (p - r)) if p > r else np.ones((K, K))
    H = toeplitz(gam ** (q - r)) if q > r else np.ones((K, K))
    s = float(np.sum(F * (G @ F @ H)))
    return float(np.sqrt(max(s, 0.0)) / (norm_p * norm_q))


def asymptotic_independence_decay(p, q, model, N_list, t=1.0, norms_p=None, norms_q=None):
    """Decay table of || f_N tensor_r g_N || over N, for r = 1..min(p, q).

    `norms_p` / `norms_q` may supply per-N normalizations (e.g. the SRD
    sigma*sqrt(N) form); the default is the exact finite-N standard deviation.
    Returns a list of dict rows (N, r, norm).
    """
    rows = []
    for i, N in enumerate(N_list):
        np_i = None if norms_p is None else norms_p[i]
        nq_i = None if norms_q is None else norms_q[i]
        for r in range(1, min(p, q) + 1):
            val = partial_sum_contraction_norm(model, p, q, r, N, t, np_i, nq_i)
            rows.append({"N": int(N), "r": int(r), "norm": val})
    return rows


def decay_table_to_csv(rows, file):
    arr = np.array([[row["N"], row["r"], row["norm"]] for row in rows])
    np.savetxt(file, arr, delimiter=",", header="N,r,norm", comments="",
               fmt=["%d", "%d", "%.12g"])
