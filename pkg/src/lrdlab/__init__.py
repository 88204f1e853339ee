"""Simulation laboratory for limit theorems of nonlinear functions of LRD Gaussian series."""

from .lrd_gaussian import (
    CovarianceModel,
    EmbeddingError,
    GaussianPath,
    Geometric,
    PowerLaw,
    Tabulated,
    autocovariance,
    derive_rng,
    exact_partial_sum_variance,
    fgn_covariance,
    sample_path,
    spectral_density_grid,
)
from .hermite_algebra import (
    HermiteExpansion,
    QuadratureError,
    expand,
    hermite_matrix,
    hermite_poly,
    hermite_rank,
    tightness_condition,
)
from .scaling_laws import (
    ComponentSpec,
    DivergentLagSum,
    LimitModel,
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
from .partial_sums import PartialSumPath, build_vector
from .hermite_process import (
    HermiteProcessSpec,
    Representation,
    contraction_positivity,
    joint_simulate,
    make_sampler,
    representation_equivalence,
    simulate,
)
from .chaos_contractions import (
    ChaosKernel,
    asymptotic_independence_decay,
    contract,
    discrete_ito,
    independence_criterion,
    ito_variance,
    partial_sum_contraction_norm,
    partial_sum_kernel,
    product_formula_check,
    random_symmetric_kernel,
    symmetrize,
)
from .montecarlo_harness import (
    ReplicationBatch,
    TestReport,
    bootstrap_se,
    convergence_sweep,
    dcor_permutation_test,
    distance_correlation,
    lemma_cov_sweep,
    run_batch,
    test_lrd_limit,
    test_marginal_normality,
    test_mixed_independence,
    test_srd_covariance,
)

__version__ = "0.1.0"
