"""Kamada-Kawai multidimensional scaling by Sherali-Adams relaxation and conditioning."""

from .core import Embedding, Instance, aspect_ratio, kk_stress, normalize
from .netting import EpsNet, build_net, discretize_embedding, snap
from .lp import LinearProgram, LpSolution, solve_lp
from .sa import PseudoDistribution, SubsetFamily, build_family, build_sa_lp, condition
from .rounding import SolverParams, pseudo_deviation, round_pd, solve_mds, tau_formula
from .oracle import brute_force_net_opt, chi_mean, gaussian_sketch, local_search_opt
from .diagnostics import quantile

__all__ = [
    "Embedding", "Instance", "aspect_ratio", "kk_stress", "normalize",
    "EpsNet", "build_net", "discretize_embedding", "snap",
    "LinearProgram", "LpSolution", "solve_lp",
    "PseudoDistribution", "SubsetFamily", "build_family", "build_sa_lp", "condition",
    "SolverParams", "pseudo_deviation", "round_pd", "solve_mds", "tau_formula",
    "brute_force_net_opt", "chi_mean", "gaussian_sketch", "local_search_opt",
    "quantile",
]
