import mpmath
import numpy as np
import pytest

from lrdlab.hermite_algebra import HermiteExpansion
from lrdlab.lrd_gaussian import Geometric, PowerLaw, Tabulated
from lrdlab.scaling_laws import (
    ComponentSpec,
    DivergentLagSum,
    Regime,
    b_const,
    build_limit_model,
    classify,
    cov_limit_lemma,
    d_memory_of_sum,
    exact_variance,
    lag_sum,
    limit_cov_srd,
    normalization,
    sigma_sq,
)


def test_classify_regimes():
    assert classify(0.3, 1) is Regime.LRD
    assert classify(0.3, 2) is Regime.LRD
    assert classify(0.25, 2) is Regime.BOUNDARY
    assert classify(0.1, 2) is Regime.SRD
    assert classify(0.3, 3) is Regime.SRD
    with pytest.raises(ValueError):
        classify(0.6, 2)
    with pytest.raises(ValueError):
        classify(0.3, 0)


def test_lag_sum_geometric_closed_form():
    m = Geometric(rho=0.5)
    for p in (1, 2, 3):
        r = 0.5**p
        val, tail = lag_sum(m, p)
        assert val == pytest.approx(1 + 2 * r / (1 - r), rel=1e-10)
        assert tail <= 1e-10 * abs(val)


def test_lag_sum_powerlaw_zeta_oracle():
    # sum over Z of (1+|n|)^(-a) = 2 zeta(a) - 1, high-precision oracle
    for d, p in ((0.1, 2), (0.1, 3), (0.3, 3), (0.05, 2)):
        a = (1 - 2 * d) * p
        ref = float(2 * mpmath.zeta(a) - 1)
        val, tail = lag_sum(PowerLaw(d=d), p)
        assert val == pytest.approx(ref, rel=1e-9)
        assert tail < 1e-9 * val


def test_lag_sum_divergence():
    with pytest.raises(DivergentLagSum):
        lag_sum(PowerLaw(d=0.3), 2)  # (1-2d) m = 0.8 <= 1
    with pytest.raises(DivergentLagSum):
        lag_sum(PowerLaw(d=0.25), 2)  # boundary also diverges


def test_lag_sum_tabulated():
    m = Tabulated(values=(1.0, 0.4, 0.2))
    val, tail = lag_sum(m, 2)
    assert val == pytest.approx(1 + 2 * (0.16 + 0.04), rel=1e-12)
    assert tail == 0.0


def test_sigma_sq_weights_by_factorial():
    # sigma^2 = sum_m g_m^2 m! S_m
    m = Geometric(rho=0.5)
    exp = HermiteExpansion.from_coefficients([0, 0, 2.0, 1.0])
    s2, _ = sigma_sq(exp, m)
    ref = 4 * 2 * lag_sum(m, 2)[0] + 1 * 6 * lag_sum(m, 3)[0]
    assert s2 == pytest.approx(ref, rel=1e-10)


def test_exact_variance_brute_force():
    m = Geometric(rho=0.4)
    exp = HermiteExpansion.from_coefficients([0, 1.0, 0.5])
    N = 16
    idx = np.arange(N)
    g = m.gamma(idx[:, None] - idx[None, :])
    brute = np.sum(g) + 0.25 * 2 * np.sum(g**2)
    assert exact_variance(exp, m, N) == pytest.approx(brute, rel=1e-12)


def test_exact_variance_growth_lrd():
    # Var ~ N^{2 d_G + 1} with d_G = (d - 1/2) k + 1/2
    d, k = 0.4, 2
    exp = HermiteExpansion.single(k)
    m = PowerLaw(d=d)
    target = 2.0 ** (2 * d_memory_of_sum(d, k) + 1)
    N = 2**14
    ratio = exact_variance(exp, m, 2 * N) / exact_variance(exp, m, N)
    assert ratio == pytest.approx(target, rel=0.02)


def test_normalization_srd_vs_lrd():
    m = PowerLaw(d=0.1)
    exp = HermiteExpansion.single(2)
    a = normalization(exp, m, Regime.SRD, 4096)
    s2, _ = sigma_sq(exp, m)
    assert a == pytest.approx(np.sqrt(s2 * 4096), rel=1e-12)
    a_lrd = normalization(exp, m, Regime.LRD, 4096)
    assert a_lrd == pytest.approx(np.sqrt(exact_variance(exp, m, 4096)), rel=1e-12)


def test_d_memory_of_sum():
    assert d_memory_of_sum(0.3, 2) == pytest.approx(0.1)
    assert d_memory_of_sum(0.4, 1) == pytest.approx(0.4)


def test_b_const_high_precision():
    mpmath.mp.dps = 40
    for k, d in ((1, 0.3), (2, 0.4), (3, 0.45)):
        kd = k * (mpmath.mpf(d) - mpmath.mpf(1) / 2)
        num = (kd + 1) * (2 * kd + 1)
        den = mpmath.factorial(k) * (2 * mpmath.gamma(1 - 2 * mpmath.mpf(d)) * mpmath.sin(d * mpmath.pi)) ** k
        ref = float(mpmath.sqrt(num / den))
        assert b_const(k, d) == pytest.approx(ref, rel=1e-12)
    with pytest.raises(ValueError):
        b_const(2, 0.2)  # below the order-2 LRD threshold


def test_cov_limit_lemma_geometric_oracle():
    # limit is (t1 ^ t2) sum_n rho^{2|n|} = 1 * 5/3 for rho = 0.5, m = 2
    m = Geometric(rho=0.5)
    s = cov_limit_lemma(m, 2, 1.0, 2.0, 10**4)
    assert abs(s - 5.0 / 3.0) < 1e-2


def test_cov_limit_lemma_brute_force_small():
    m = Geometric(rho=0.3)
    N, t1, t2 = 37, 0.7, 1.0
    a, b = int(N * t1), int(N * t2)
    brute = sum(
        m.gamma(n1 - n2) ** 2 for n1 in range(1, a + 1) for n2 in range(1, b + 1)
    ) / N
    assert cov_limit_lemma(m, 2, t1, t2, N) == pytest.approx(float(brute), rel=1e-12)


def test_limit_cov_srd_example_constants():
    # G1 = a H2 + b H3, G2 = c H3: cross-cov = 6 b c (t1^t2) S3 / (sigma1 sigma2)
    a, b, c = 1.0, 0.5, 2.0
    m = PowerLaw(d=0.1)
    g1 = ComponentSpec(HermiteExpansion.from_coefficients([0, 0, a, b]), "G1")
    g2 = ComponentSpec(HermiteExpansion.from_coefficients([0, 0, 0, c]), "G2")
    s2, s3 = lag_sum(m, 2)[0], lag_sum(m, 3)[0]
    sigma1 = np.sqrt(2 * a**2 * s2 + 6 * b**2 * s3)
    sigma2 = np.sqrt(6 * c**2 * s3)
    ref = 6 * b * c * s3 / (sigma1 * sigma2)
    assert limit_cov_srd(g1, g2, m, 1.0, 1.0) == pytest.approx(ref, rel=1e-10)
    # independent when b = 0
    g1b = ComponentSpec(HermiteExpansion.from_coefficients([0, 0, a, 0.0]), "G1")
    assert limit_cov_srd(g1b, g2, m, 1.0, 1.0) == pytest.approx(0.0, abs=1e-14)


def test_limit_model_diagonal_is_min_t():
    m = PowerLaw(d=0.1)
    spec = ComponentSpec(HermiteExpansion.single(2), "H2")
    lm = build_limit_model([spec], m)
    assert lm.regimes == (Regime.SRD,)
    assert lm.limit_cov(0, 0, 0.5, 1.0) == pytest.approx(0.5, rel=1e-10)
    assert lm.limit_cov(0, 0, 1.0, 1.0) == pytest.approx(1.0, rel=1e-10)


def test_limit_model_rejects_lrd_cov_query():
    m = PowerLaw(d=0.4)
    spec = ComponentSpec(HermiteExpansion.single(2), "H2")
    lm = build_limit_model([spec], m)
    assert lm.regimes == (Regime.LRD,)
    with pytest.raises(ValueError):
        lm.limit_cov(0, 0, 1.0, 1.0)
