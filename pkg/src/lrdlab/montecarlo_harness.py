"""Replication engine and statistical verdicts for the limit-law claims."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed
from scipy.spatial.distance import pdist, squareform
from scipy.stats import kstest, ks_2samp

from .lrd_gaussian import sample_path, derive_rng
from .partial_sums import build_vector
from .scaling_laws import LimitModel, Regime, exact_variance, cov_limit_lemma, lag_sum

KS_P_THRESHOLD = 0.01
SE_BAND = 3.0
DEFAULT_PERMUTATIONS = 200


@dataclass(frozen=True)
class ReplicationBatch:
    """Monte Carlo ensemble of partial-sum paths with full seed lineage."""

    master_seed: int
    R: int
    N: int
    t_grid: np.ndarray
    values: np.ndarray  # (R, J, T)
    specs: tuple
    model: object
    limit: object  # LimitModel or tuple of normalizations
    normalizations: tuple

    def component(self, j, t=None):
        """Replication values of component j, at time t (default: all times)."""
        if t is None:
            return self.values[:, j, :]
        ti = int(np.argmin(np.abs(self.t_grid - t)))
        if abs(self.t_grid[ti] - t) > 1e-12:
            raise ValueError(f"t={t} not on the batch grid")
        return self.values[:, j, ti]


@dataclass(frozen=True)
class TestReport:
    name: str
    statistic: float
    verdict: str  # pass / fail / inconclusive
    tolerance: str
    pvalue: float | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self):
        out = {
            "name": self.name,
            "statistic": self.statistic,
            "verdict": self.verdict,
            "tolerance": self.tolerance,
        }
        if self.pvalue is not None:
            out["pvalue"] = self.pvalue
        if self.details:
            out["details"] = self.details
        return out


def _one_replication(specs, model, N, t_grid, norms, seed, r, funcs):
    path = sample_path(model, N, seed, index=r)
    return build_vector(path, specs, norms, t_grid, funcs=funcs).values


def run_batch(specs, model, N, t_grid, R, seed, n_jobs=1, limit=None, funcs=None):
    """R independent normalized partial-sum paths; reproducible from (seed, r)."""
    if R < 2:
        raise ValueError("need at least two replications")
    t_grid = np.asarray(t_grid, dtype=float)
    if limit is None:
        from .scaling_laws import build_limit_model

        limit = build_limit_model(specs, model)
    norms = limit.normalizations(N) if isinstance(limit, LimitModel) else tuple(limit)
    if n_jobs == 1:
        vals = [_one_replication(specs, model, N, t_grid, norms, seed, r, funcs) for r in range(R)]
    else:
        vals = Parallel(n_jobs=n_jobs)(
            delayed(_one_replication)(specs, model, N, t_grid, norms, seed, r, funcs)
            for r in range(R)
        )
    return ReplicationBatch(
        master_seed=int(seed),
        R=R,
        N=N,
        t_grid=t_grid,
        values=np.stack(vals),
        specs=tuple(specs),
        model=model,
        limit=limit,
        normalizations=tuple(norms),
    )


def bootstrap_se(data, stat=np.mean, B=200, seed=0):
    """Bootstrap standard error of a statistic of a 1-d (or row-indexed) sample."""
    rng = derive_rng(seed, 0)
    n = len(data)
    stats = np.empty(B)
    for b in range(B):
        idx = rng.integers(0, n, n)
        stats[b] = stat(np.asarray(data)[idx])
    return float(stats.std(ddof=1))


# ---------------------------------------------------------------------------
# Distance correlation (independence statistic with power against any
# dependence; plain correlation is useless here by chaos orthogonality)
# ---------------------------------------------------------------------------

def _centered_distance(x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    D = squareform(pdist(x))
    return D - D.mean(axis=0, keepdims=True) - D.mean(axis=1, keepdims=True) + D.mean()


def distance_correlation(x, y):
    A = _centered_distance(x)
    B = _centered_distance(y)
    dcov2 = (A * B).mean()
    dvar_x = (A * A).mean()
    dvar_y = (B * B).mean()
    if dvar_x <= 0 or dvar_y <= 0:
        return 0.0
    return float(np.sqrt(max(dcov2, 0.0) / np.sqrt(dvar_x * dvar_y)))


def dcor_permutation_test(x, y, n_perm=DEFAULT_PERMUTATIONS, seed=0):
    """Permutation p-value for the null of independence."""
    A = _centered_distance(x)
    B = _centered_distance(y)
    n = A.shape[0]
    obs = (A * B).mean()
    rng = derive_rng(seed, 1)
    count = 0
    for _ in range(n_perm):
        perm = rng.permutation(n)
        if (A * B[np.ix_(perm, perm)]).mean() >= obs:
            count += 1
    pvalue = (count + 1) / (n_perm + 1)
    return distance_correlation(x, y), float(pvalue)


# ---------------------------------------------------------------------------
# Statistical verdicts
# ---------------------------------------------------------------------------

def test_srd_covariance(batch, t_pairs, name="srd-covariance", boot_B=200):
    """Empirical covariance of the SRD block against the limit law, 3-SE bands."""
    limit = batch.limit
    if not isinstance(limit, LimitModel):
        raise ValueError("batch must carry a LimitModel")
    J = len(batch.specs)
    worst = 0.0
    entries = []
    ok = True
    for t1, t2 in t_pairs:
        for j1 in range(J):
            for j2 in range(J):
                prod = batch.component(j1, t1) * batch.component(j2, t2)
                emp = float(prod.mean())
                theo = limit.limit_cov(j1, j2, t1, t2)
                se = bootstrap_se(prod, B=boot_B, seed=batch.master_seed + 13 * j1 + 7 * j2)
                z = abs(emp - theo) / max(se, 1e-300)
                worst = max(worst, z)
                ok = ok and z <= SE_BAND
                entries.append(
                    {"j1": j1, "j2": j2, "t1": t1, "t2": t2, "empirical": emp,
                     "theoretical": theo, "se": se, "z": z}
                )
    return TestReport(
        name=name,
        statistic=worst,
        verdict="pass" if ok else "fail",
        tolerance=f"|emp - theory| <= {SE_BAND} SE",
        details={"entries": entries},
    )


def test_marginal_normality(batch, j, t, name=None):
    """KS test of the standardized marginal against N(0,1)."""
    limit = batch.limit
    regime = limit.regimes[j] if isinstance(limit, LimitModel) else None
    K = int(np.floor(batch.N * t))
    var_t = exact_variance(batch.specs[j].expansion, batch.model, K) / batch.normalizations[j] ** 2
    z = batch.component(j, t) / np.sqrt(var_t)
    stat, pvalue = kstest(z, "norm")
    verdict = "pass" if pvalue > KS_P_THRESHOLD else "fail"
    details = {}
    if regime is Regime.LRD:
        details["regime_mismatch"] = "component is LRD; Gaussian marginal not expected"
    return TestReport(
        name=name or f"marginal-normality[j={j}, t={t}]",
        statistic=float(stat),
        pvalue=float(pvalue),
        verdict=verdict,
        tolerance=f"KS p > {KS_P_THRESHOLD}",
        details=details,
    )


def _moment_stats(x):
    m = x.mean()
    c = x - m
    v = np.mean(c**2)
    return np.array([v, np.mean(c**3) / v**1.5, np.mean(c**4) / v**2])


def test_lrd_limit(batch, j, reference, t=1.0, name=None, boot_B=200):
    """Two-sample match of an LRD marginal against a simulated Hermite process.

    `reference` is a 1-d array of reference draws at the same time t.
    Checks variance/skewness/kurtosis within 3 combined SE and two-sample KS.
    """
    x = batch.component(j, t)
    y = np.asarray(reference, dtype=float)
    mx, my = _moment_stats(x), _moment_stats(y)
    gaps = np.abs(mx - my)
    ses = np.empty(3)
    for i in range(3):
        se_x = bootstrap_se(x, stat=lambda a, i=i: _moment_stats(a)[i], B=boot_B, seed=batch.master_seed + i)
        se_y = bootstrap_se(y, stat=lambda a, i=i: _moment_stats(a)[i], B=boot_B, seed=batch.master_seed + 100 + i)
        ses[i] = np.sqrt(se_x**2 + se_y**2)
    zscores = gaps / np.maximum(ses, 1e-300)
    stat, pvalue = ks_2samp(x, y)
    ok = bool(np.all(zscores <= SE_BAND) and pvalue > KS_P_THRESHOLD)
    return TestReport(
        name=name or f"lrd-limit[j={j}, t={t}]",
        statistic=float(max(zscores.max(), stat)),
        pvalue=float(pvalue),
        verdict="pass" if ok else "fail",
        tolerance=f"moments <= {SE_BAND} SE and KS p > {KS_P_THRESHOLD}",
        details={
            "moment_z": zscores.tolist(),
            "moments_batch": mx.tolist(),
            "moments_reference": my.tolist(),
        },
    )


def test_mixed_independence(batch, srd_idx, lrd_idx, n_perm=DEFAULT_PERMUTATIONS, name=None, boot_B=200):
    """Distance-correlation permutation test plus cross-moment gaps for mixed regimes."""
    S = batch.values[:, srd_idx, :].reshape(batch.R, -1)
    L = batch.values[:, lrd_idx, :].reshape(batch.R, -1)
    dcor, pvalue = dcor_permutation_test(S, L, n_perm=n_perm, seed=batch.master_seed)

    s1 = batch.values[:, srd_idx[0], -1]
    l1 = batch.values[:, lrd_idx[0], -1]
    gap_stats = []
    for label, fy in (("E[S^2 L] - E[S^2]E[L]", lambda l: l), ("E[S^2 L^2] - E[S^2]E[L^2]", lambda l: l**2)):
        y = fy(l1)
        gap = float(np.mean(s1**2 * y) - np.mean(s1**2) * np.mean(y))

        def gap_stat(idx_data, fy=fy):
            s, l = idx_data[:, 0], idx_data[:, 1]
            yy = fy(l)
            return np.mean(s**2 * yy) - np.mean(s**2) * np.mean(yy)

        se = bootstrap_se(np.column_stack([s1, l1]), stat=gap_stat, B=boot_B, seed=batch.master_seed + 5)
        gap_stats.append({"moment": label, "gap": gap, "se": se, "z": abs(gap) / max(se, 1e-300)})

    plain_corr = float(np.corrcoef(s1, l1)[0, 1])
    ok = pvalue > KS_P_THRESHOLD and all(g["z"] <= SE_BAND for g in gap_stats)
    return TestReport(
        name=name or "mixed-independence",
        statistic=float(dcor),
        pvalue=float(pvalue),
        verdict="pass" if ok else "fail",
        tolerance=f"dcor permutation p > {KS_P_THRESHOLD}, moment gaps <= {SE_BAND} SE",
        details={"cross_moments": gap_stats, "plain_correlation": plain_corr},
    )


def convergence_sweep(specs, model, N_grid, t_grid, R, seed, t_pairs=None, n_jobs=1):
    """Run the covariance test across an increasing N grid; trend diagnostics."""
    if t_pairs is None:
        t_pairs = [(float(t_grid[-1]), float(t_grid[-1]))]
    reports = []
    for N in N_grid:
        batch = run_batch(specs, model, int(N), t_grid, R, seed, n_jobs=n_jobs)
        rep = test_srd_covariance(batch, t_pairs, name=f"srd-covariance[N={N}]")
        err = max(abs(e["empirical"] - e["theoretical"]) for e in rep.details["entries"])
        reports.append({"N": int(N), "report": rep, "max_abs_error": err})
    return reports


def lemma_cov_sweep(model, m, t1, t2, N_grid):
    """Deterministic |S_N - limit| trace for the covariance-limit lemma."""
    limit = min(t1, t2) * lag_sum(model, m)[0]
    rows = []
    for N in N_grid:
        s = cov_limit_lemma(model, m, t1, t2, int(N))
        rows.append({"N": int(N), "S_N": s, "limit": limit, "abs_error": abs(s - limit)})
    return rows
