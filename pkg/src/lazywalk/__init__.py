"""Simulation and verification lab for the step-reinforced minimal random
walk and percolation on uniform random recursive trees."""

from .exact import (
    ExactPmf,
    GammaRatioSeq,
    MomentTable,
    cluster_moments_closed_form,
    exact_pmf,
    exact_pmf_rational,
    factorial_moment,
    gamma_ratio,
    gamma_ratio_loggamma,
    gamma_ratio_seq,
    mean_closed_form,
    moments_from_pmf,
    pgf_pmf,
    raw_moment,
    variance_asymptotic,
    variance_from_clusters,
)
from .harness import (
    ChiSquareResult,
    CltResult,
    KsResult,
    LilTrackerState,
    StreamMoments,
    chi_square_gof,
    clt_experiment,
    ks_normal,
    lil_tracker,
    merge_moments,
    q_positive_clt_experiment,
)
from .mittag import MLParams, half_normal_pdf, ml_function, ml_moment
from .params import WalkParams
from .percolation import (
    PercolationOutcome,
    RecursiveTree,
    divide_and_color_sum,
    enumerate_exact,
    grow_tree,
    percolate,
    sample_root_cluster_sizes,
    sample_spin_sums,
)
from .walk import (
    TrajectoryStat,
    dyadic_checkpoints,
    estimate_w,
    simulate_batch,
    simulate_counting,
    simulate_full_history,
    to_biased_position,
)

__version__ = "0.1.0"
