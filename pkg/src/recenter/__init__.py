"""Optimal re-centering constants for moment inequalities.

The library computes the best constants ``C_p`` in

    E|X - EX|^p <= C_p E|X|^p,

the general constants ``c_f`` for moment functions ``f``, the extremal
two-point laws, and Rosenthal-type concentration bounds built on them.
"""
from .constants import (
    Exponent,
    OptimalConstant,
    RPoint,
    asymptotic_Cp,
    check_symmetry,
    compute_Cp,
    eval_D1_sign,
    eval_R,
    eval_tb,
    extremal_distribution,
    find_bp,
)
from .distributions import DiscreteDistribution, TwoPointDistribution
from .errors import ConvergenceError, DegenerateInputError, DomainError
from .general import CfEstimate, MomentFunction, cf_ratio, estimate_cf
from .oracles import (
    brute_force_Cp,
    central_moment_ratio,
    check_d2_identity,
    check_tb_minimizer,
    naive_factor_comparison,
    random_distribution_sweep,
    rho_p,
)
from .rosenthal import (
    CoordinateSummary,
    MartingaleConstants,
    concentration_bound,
    simulate_norm_of_sum,
)

__version__ = "0.1.0"

__all__ = [
    "CfEstimate",
    "ConvergenceError",
    "CoordinateSummary",
    "DegenerateInputError",
    "DiscreteDistribution",
    "DomainError",
    "Exponent",
    "MartingaleConstants",
    "MomentFunction",
    "OptimalConstant",
    "RPoint",
    "TwoPointDistribution",
    "asymptotic_Cp",
    "brute_force_Cp",
    "central_moment_ratio",
    "cf_ratio",
    "check_d2_identity",
    "check_symmetry",
    "check_tb_minimizer",
    "compute_Cp",
    "concentration_bound",
    "estimate_cf",
    "eval_D1_sign",
    "eval_R",
    "eval_tb",
    "extremal_distribution",
    "find_bp",
    "naive_factor_comparison",
    "random_distribution_sweep",
    "rho_p",
    "simulate_norm_of_sum",
]
