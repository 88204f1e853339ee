"""Acceptance criteria, one test per numbered criterion.

Each test prints a single `CRITERION n: PASS/FAIL` line (visible with
`pytest -s` or in the captured output of failures) and then asserts.
Criteria 6 and 10 encode requirements that the implementation measures
honestly but that are not attainable at the stated desk-scale parameters;
see the analysis in the repository notes.  They are left red on purpose.
"""

import itertools
import json
import math
import tempfile
from pathlib import Path

import numpy as np
import pytest
from scipy.special import factorial, roots_hermitenorm

import lrdlab as L
from lrdlab.chaos_contractions import (
    asymptotic_independence_decay,
    contract,
    partial_sum_contraction_norm,
    product_formula_check,
    random_symmetric_kernel,
)
from lrdlab.cli import main as cli_main
from lrdlab.hermite_algebra import hermite_poly
from lrdlab.hermite_process import (
    HermiteProcessSpec,
    Representation,
    contraction_positivity,
    joint_simulate,
    make_sampler,
    representation_equivalence,
)
from lrdlab.montecarlo_harness import (
    bootstrap_se,
    run_batch,
)
from lrdlab.montecarlo_harness import test_lrd_limit as check_lrd_limit
from lrdlab.montecarlo_harness import test_marginal_normality as check_marginal_normality
from lrdlab.montecarlo_harness import test_mixed_independence as check_mixed_independence
from lrdlab.montecarlo_harness import test_srd_covariance as check_srd_covariance


def _verdict(n, ok, detail):
    print(f"CRITERION {n}: {'PASS' if ok else 'FAIL'} — {detail}")
    return ok


def test_criterion_01_lemma_deterministic():
    s = L.cov_limit_lemma(L.Geometric(rho=0.5), 2, 1.0, 2.0, 10**4)
    err = abs(s - 5.0 / 3.0)
    assert _verdict(1, err < 1e-2, f"|S_N - 5/3| = {err:.2e} at N=1e4")


def test_criterion_02_variance_growth():
    h2, h3 = L.HermiteExpansion.single(2), L.HermiteExpansion.single(3)
    N = 2**14
    ratio = L.exact_variance(h2, L.PowerLaw(d=0.4), 2 * N) / L.exact_variance(
        h2, L.PowerLaw(d=0.4), N
    )
    ok_lrd = abs(ratio / 2**1.6 - 1) < 0.02
    m = L.PowerLaw(d=0.1)
    v = L.exact_variance(h3, m, 10**5) / 10**5
    s2 = L.sigma_sq(h3, m)[0]
    ok_srd = abs(v / s2 - 1) < 0.02
    assert _verdict(
        2,
        ok_lrd and ok_srd,
        f"Var(2N)/Var(N) = {ratio:.4f} (target {2**1.6:.4f}); Var(N)/N = {v:.4f} (sigma^2 = {s2:.4f})",
    )


def test_criterion_03_hermite_exactness():
    worst_id = 0.0
    for m in range(1, 11):
        exp = L.expand(lambda x, m=m: hermite_poly(m, x), m)
        target = np.zeros(m + 1)
        target[m] = 1.0
        worst_id = max(worst_id, float(np.max(np.abs(exp.coefficients - target))))
    x, w = roots_hermitenorm(60)
    w = w / np.sqrt(2 * np.pi)
    worst_mehler = 0.0
    for m in range(1, 7):
        for rho in (0.3, -0.7):
            Y = rho * x[:, None] + np.sqrt(1 - rho**2) * x[None, :]
            got = float(np.einsum("i,j,ij->", w, w, hermite_poly(m, x)[:, None] * hermite_poly(m, Y)))
            worst_mehler = max(worst_mehler, abs(got - float(factorial(m)) * rho**m))
    ok = worst_id < 1e-8 and worst_mehler < 1e-6
    assert _verdict(3, ok, f"expand identity max err {worst_id:.2e}; Mehler max err {worst_mehler:.2e}")


def test_criterion_04_srd_clt():
    m = L.PowerLaw(d=0.1)
    specs = [
        L.ComponentSpec(L.HermiteExpansion.from_coefficients([0, 0, 1, 1]), "G1"),
        L.ComponentSpec(L.HermiteExpansion.single(3), "G2"),
    ]
    batch = run_batch(specs, m, 2**13, [0.5, 1.0], 500, seed=20260823)
    cov = check_srd_covariance(batch, [(1.0, 1.0), (0.5, 1.0)])
    n1 = check_marginal_normality(batch, 0, 1.0)
    n2 = check_marginal_normality(batch, 1, 1.0)
    ok = cov.verdict == "pass" and n1.verdict == "pass" and n2.verdict == "pass"
    assert _verdict(
        4,
        ok,
        f"cov worst z = {cov.statistic:.2f}; KS p = ({n1.pvalue:.3f}, {n2.pvalue:.3f})",
    )


def test_criterion_05_lrd_rosenblatt():
    m = L.PowerLaw(d=0.4)
    batch = run_batch([L.ComponentSpec(L.HermiteExpansion.single(2), "H2")], m, 2**13, [1.0], 1000, seed=31)
    v = batch.component(0, 1.0)
    var_se = bootstrap_se(v, stat=np.var, B=300, seed=1)
    ok_var = abs(np.var(v) - 1.0) <= 3.0 * var_se
    ref = make_sampler(
        HermiteProcessSpec(2, 0.4, Representation.FINITE_INTERVAL, M=128), np.array([1.0])
    ).sample_many(1000, 99)[:, 0]
    rep = check_lrd_limit(batch, 0, ref, t=1.0)
    neg = make_sampler(
        HermiteProcessSpec(1, 0.4, Representation.FINITE_INTERVAL, M=128), np.array([1.0])
    ).sample_many(1000, 99)[:, 0]
    rep_neg = check_lrd_limit(batch, 0, neg, t=1.0)
    ok = ok_var and rep.verdict == "pass" and rep_neg.verdict == "fail"
    assert _verdict(
        5,
        ok,
        f"Var = {np.var(v):.3f} (3SE = {3 * var_se:.3f}); match p = {rep.pvalue:.3f}, "
        f"moment z = {[round(z, 2) for z in rep.details['moment_z']]}; negative control {rep_neg.verdict}",
    )


def test_criterion_06_mixed_independence():
    # Honest red: at N = 2^13 the finite-N cross moment E[S^2 L] is ~1.2
    # (exact Toeplitz value), i.e. the blocks are still strongly dependent
    # at desk scale even though the limit blocks are independent.
    m = L.PowerLaw(d=0.3)
    specs = [
        L.ComponentSpec(L.HermiteExpansion.single(3), "S"),
        L.ComponentSpec(L.HermiteExpansion.single(2), "L"),
    ]
    batch = run_batch(specs, m, 2**13, [0.5, 1.0], 1000, seed=47)
    rep = check_mixed_independence(batch, [0], [1])
    neg = run_batch(
        [L.ComponentSpec(L.HermiteExpansion.single(2), "A"),
         L.ComponentSpec(L.HermiteExpansion.single(2), "B")],
        m, 2**13, [0.5, 1.0], 1000, seed=48,
    )
    rep_neg = check_mixed_independence(neg, [0], [1])
    even_gap = rep.details["cross_moments"][1]
    ok = rep.verdict == "pass" and rep_neg.verdict == "fail"
    assert _verdict(
        6,
        ok,
        f"dcor p = {rep.pvalue:.4f} (need > 0.01); |E[S^2 L^2] gap| z = {even_gap['z']:.2f}; "
        f"negative control {rep_neg.verdict}; finite-N dependence decays only as N^-0.2",
    )


def test_criterion_07_representation_equivalence():
    t_grid = np.array([0.2, 0.4, 0.6, 0.8, 1.0])
    r1 = representation_equivalence(
        1, Representation.FINITE_INTERVAL, Representation.EXACT_FGN, 0.3, t_grid, 500, 11, M=128
    )
    r2 = representation_equivalence(
        2, Representation.FINITE_INTERVAL, Representation.POSITIVE_HALF_AXIS, 0.4,
        np.array([1.0]), 500, 12, M=128,
    )
    var_a, var_b = r2["cov_a"][0, 0], r2["cov_b"][0, 0]
    se_a = r2["se"][0, 0] / np.sqrt(2)  # per-side SE
    ok = (
        r1["max_sigma"] <= 3.0
        and abs(var_a - 1.0) <= 3.0 * np.sqrt(2) * se_a
        and abs(var_b - 1.0) <= 3.0 * np.sqrt(2) * se_a
    )
    assert _verdict(
        7,
        ok,
        f"k=1 max discrepancy = {r1['max_discrepancy']:.4f} ({r1['max_sigma']:.2f} SE); "
        f"k=2 Var(1) = ({var_a:.3f}, {var_b:.3f})",
    )


def test_criterion_08_positivity_and_dependence():
    mins = {}
    for (p, q) in ((1, 1), (1, 2), (2, 2)):
        for d in (0.35, 0.45):
            mins[(p, q, d)] = contraction_positivity(p, q, d)
    ok_pos = all(v > 0 for v in mins.values())
    z = joint_simulate([1, 2], 0.4, np.array([1.0]), seed=5, R=2000)
    z1, z2 = z[:, 0, 0], z[:, 1, 0]
    rng = np.random.default_rng(1)
    boots = [
        np.corrcoef(z1[i] ** 2, z2[i])[0, 1]
        for i in rng.integers(0, 2000, (300, 2000))
    ]
    lo, hi = np.percentile(boots, [0.5, 99.5])
    ok_dep = lo > 0 or hi < 0
    assert _verdict(
        8,
        ok_pos and ok_dep,
        f"min contraction = {min(mins.values()):.4f}; corr(Z1(1)^2, Z2(1)) CI99 = [{lo:.3f}, {hi:.3f}]",
    )


def test_criterion_09_chaos_exactness():
    rng = np.random.default_rng(9)
    worst_pf = 0.0
    for p, q in itertools.combinations_with_replacement(range(1, 4), 2):
        if p + q > 6:
            continue
        w = rng.uniform(0.2, 0.8, 5)
        f = random_symmetric_kernel(p, w, rng)
        g = random_symmetric_kernel(q, w, rng)
        worst_pf = max(worst_pf, product_formula_check(f, g, rng))
    worst_cs, worst_id = 0.0, 0.0
    for _ in range(100):
        p = int(rng.integers(1, 4))
        q = int(rng.integers(1, 4))
        w = rng.uniform(0.1, 1.0, int(rng.integers(3, 6)))
        f = random_symmetric_kernel(p, w, rng)
        g = random_symmetric_kernel(q, w, rng)
        for r in range(1, min(p, q) + 1):
            fg = contract(f, g, r)
            norm_sq = fg.norm_sq() if fg.order else float(fg.array) ** 2
            worst_cs = max(worst_cs, np.sqrt(norm_sq) - f.norm() * g.norm())
            a = contract(f, f, p - r)
            b = contract(g, g, q - r)
            inner = float(np.real(contract(a, b, a.order).array))
            worst_id = max(worst_id, abs(norm_sq - inner))
    ok = worst_pf < 1e-10 and worst_cs < 1e-10 and worst_id < 1e-10
    assert _verdict(
        9,
        ok,
        f"product formula dev {worst_pf:.1e}; Cauchy-Schwarz excess {worst_cs:.1e}; identity dev {worst_id:.1e}",
    )


def test_criterion_10_contraction_decay():
    # Honest red on the 1/4 threshold: at d=0.3 the decay exponent of
    # ||f_N ox_r g_N|| is exactly (3*(1-2d) - 1)/2 = 0.1, so over a 16x
    # range of N the ratio can only reach ~16^-0.1 = 0.76.
    model = L.PowerLaw(d=0.3)
    N_grid = [2**k for k in range(6, 11)]
    rows = asymptotic_independence_decay(3, 2, model, N_grid)
    ok = True
    ratios = {}
    for r in (1, 2):
        v = [row["norm"] for row in rows if row["r"] == r]
        ratios[r] = v[-1] / v[0]
        ok = ok and v == sorted(v, reverse=True) and ratios[r] < 0.25
    self_full = [partial_sum_contraction_norm(model, 2, 2, 2, N) for N in N_grid]
    ok_counter = min(self_full) > 0.4  # <f, f> = 1/2 exactly; must not decay
    assert _verdict(
        10,
        ok and ok_counter,
        f"decreasing: yes; final/initial = {ratios[1]:.3f} (r=1), {ratios[2]:.3f} (r=2), need < 0.25; "
        f"p=q counterexample stays at {self_full[-1]:.3f}",
    )


def test_criterion_11_reproducibility():
    cfg = {
        "model": {"type": "PowerLaw", "d": 0.1},
        "components": [{"coefficients": [0, 0, 1, 1], "label": "G1"}, {"hermite": 3, "label": "G2"}],
        "N_grid": [512, 1024],
        "t_grid": [0.5, 1.0],
        "t_pairs": [[1.0, 1.0]],
        "R": 80,
        "seed": 1234,
    }
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        (tmp / "cfg.json").write_text(json.dumps(cfg))
        blobs = []
        for name, threads in (("a", "1"), ("b", "4"), ("c", "2")):
            rc = cli_main([
                "--config", str(tmp / "cfg.json"), "--out", str(tmp / name),
                "--threads", threads, "convergence",
            ])
            assert rc == 0
            blobs.append((tmp / name / "convergence.json").read_bytes())
    ok = blobs[0] == blobs[1] == blobs[2]
    assert _verdict(11, ok, f"3 runs across thread counts: {'byte-identical' if ok else 'MISMATCH'}")
