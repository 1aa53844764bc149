"""Solver for the symmetric locks-bombs-testing attack-defense game."""

__version__ = "0.1.0"

from slbt.combinatorics import (
    JointTx,
    ModelA,
    Pmf,
    binomial_pmf,
    conditional_n1_mean,
    convolve,
    joint_tx,
    minus_count_pmf,
    quality_c,
)
from slbt.errors import DomainError, GuardError, UnsupportedRegimeError
from slbt.planner import (
    AllocationTuple,
    ExplosionModel,
    GameTables,
    allocate_duap,
    solve,
    strategy_value,
    threshold_d,
    value_boundary,
    value_interior,
)
from slbt.posterior import (
    INFINITE,
    PosteriorRow,
    PosteriorTable,
    marginal_probs,
    posterior_from_counts,
    posterior_from_expectations,
    ratio_model_b,
    ratio_via_c,
)
