"""Normalized multivariate partial-sum processes on a time grid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hermite_algebra import hermite_matrix
from .scaling_laws import LimitModel


@dataclass(frozen=True)
class PartialSumPath:
    """V_{N,j}(t) over a time grid; right-continuous piecewise constant in t."""

    t_grid: np.ndarray
    values: np.ndarray  # shape (J, len(t_grid))
    N: int
    labels: tuple
    normalizations: tuple


def _component_series(x, spec, use_expansion=True, func=None):
    """Centered series G_j(X_n) - E G_j(X_n) along one path."""
    exp = spec.expansion
    if use_expansion or func is None:
        H = hermite_matrix(x, exp.truncation)
        c = exp.coefficients.copy()
        c[0] = 0.0
        return c @ H
    return np.asarray(func(x), dtype=float) - exp.coefficients[0]


def build_vector(path, specs, limit, t_grid, funcs=None):
    """Assemble V_N(t) = (sum_{n <= [N t]} centered G_j(X_n)) / A_j(N).

    `limit` is a LimitModel or an explicit sequence of normalizations A_j(N).
    By default components are evaluated through their truncated Hermite
    expansions; passing `funcs` (one callable per component, or None entries)
    switches to direct evaluation minus the quadrature mean.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0:
        raise ValueError("empty time grid")
    if np.any(t_grid <= 0.0) or np.any(t_grid > 1.0):
        raise ValueError("time grid must lie in (0, 1]")
    x = path.values
    N = x.size
    idx = np.floor(N * t_grid).astype(int)
    if idx.min() < 1:
        raise ValueError(f"N = {N} too small for t = {t_grid.min()}")

    if isinstance(limit, LimitModel):
        norms = limit.normalizations(N)
    else:
        norms = tuple(float(a) for a in limit)
    if len(norms) != len(specs):
        raise ValueError("one normalization per component required")

    values = np.empty((len(specs), t_grid.size))
    for j, spec in enumerate(specs):
        func = None if funcs is None else funcs[j]
        series = _component_series(x, spec, use_expansion=funcs is None, func=func)
        csum = np.cumsum(series)
        values[j] = csum[idx - 1] / norms[j]
    return PartialSumPath(
        t_grid=t_grid,
        values=values,
        N=N,
        labels=tuple(s.label for s in specs),
        normalizations=norms,
    )


def to_csv(path_obj, file):
    """One row per t, one column per component; UTF-8, '.' decimals."""
    header = "t," + ",".join(lbl or f"component_{j}" for j, lbl in enumerate(path_obj.labels))
    data = np.column_stack([path_obj.t_grid, path_obj.values.T])
    np.savetxt(file, data, delimiter=",", header=header, comments="")
