"""Random-graph machinery for Hamiltonian paths and perfect matchings in
inhomogeneous random graphs."""

from .bounds import (BoundReport, Theorem1Params, chernoff, expected_nout_interval,
                     pivot_interval, theorem1_admissible, theorem2_failure)
from .channel_assign import (ChannelScenario, Exponential, PerPairTable, Uniform,
                             gains_to_probabilities, simulate_assignment, success_probability)
from .hamilton import (PathState, PivotGenerations, SearchBudget, exact_hamiltonian_path,
                       exclusion_experiment, extend, longest_path_search, path_to_matching,
                       pivot_generations, posa_rotate, run_search)
from .matching import (Matching, augment_with_pair, bootstrap_experiment, is_perfect,
                       maximum_matching)
from .prob_model import (BoundedPerturbation, ConditionReport, GoodnessParams, Homogeneous,
                         NicenessParams, ProbabilityAssignment, TwoBlock, WeightProduct,
                         build_assignment, check_good, check_nice, fit_good_constants,
                         validate_family)
from .rng import RngStream, derive_seed
from .sampler import (SampledGraph, expansion_statistics, neighborhood_out, sample_bipartite,
                      sample_graph)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "BoundedPerturbation",
    "ChannelScenario",
    "ConditionReport",
    "Exponential",
    "GoodnessParams",
    "Homogeneous",
    "Matching",
    "NicenessParams",
    "PathState",
    "PerPairTable",
    "PivotGenerations",
    "ProbabilityAssignment",
    "RngStream",
    "SampledGraph",
    "SearchBudget",
    "Theorem1Params",
    "TwoBlock",
    "Uniform",
    "WeightProduct",
    "augment_with_pair",
    "bootstrap_experiment",
    "build_assignment",
    "check_good",
    "check_nice",
    "chernoff",
    "derive_seed",
    "exact_hamiltonian_path",
    "exclusion_experiment",
    "expansion_statistics",
    "expected_nout_interval",
    "extend",
    "fit_good_constants",
    "gains_to_probabilities",
    "is_perfect",
    "longest_path_search",
    "maximum_matching",
    "neighborhood_out",
    "path_to_matching",
    "pivot_generations",
    "pivot_interval",
    "posa_rotate",
    "run_search",
    "sample_bipartite",
    "sample_graph",
    "simulate_assignment",
    "success_probability",
    "theorem1_admissible",
    "theorem2_failure",
    "validate_family",
]
