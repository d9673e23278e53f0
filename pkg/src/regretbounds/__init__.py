"""Numerical certification of expected-maximum, tail and expert-regret bounds."""
from .analytic import (
    FactorialBracket,
    MillsMode,
    RealGrid,
    factorial_bounds,
    kl_bernoulli,
    mills_ratio,
    psi,
    std_normal_pdf,
    std_normal_survival,
    sub_gaussian_mgf_margin,
)
from .errors import DomainError, HypothesisError
from .experts import (
    LearnerTrace,
    LossMatrix,
    RegretSummary,
    default_eta,
    estimate_expected_regret,
    hedge_run,
    regret_summary,
    sample_random_losses,
    simulate_regrets,
)
from .extremes import (
    BoundBracket,
    EnsembleSpec,
    ThresholdConstants,
    experts_regret_bounds,
    experts_regret_lower,
    experts_regret_upper,
    gaussian_max_lower,
    make_bracket,
    subgaussian_max_upper,
    threshold_constants,
    walk_max_lower,
)
from .oracles import (
    MonteCarloEstimate,
    WalkMaxDistribution,
    gaussian_max_exact,
    max_monte_carlo,
    walk_distribution,
    walk_max_exact,
)
from .tails import (
    BinomialTailQuery,
    GaussianTailQuery,
    TailResult,
    binomial_tail_corollary,
    binomial_tail_exact,
    binomial_tail_lower,
    gaussian_tail_exact,
    gaussian_tail_lower,
)

__version__ = "0.1.0"
