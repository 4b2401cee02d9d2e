"""Fair allocation of graph vertices under matching-valued utilities."""

from .core import (
    Allocation,
    Graph,
    Instance,
    Matching,
    WeightProfile,
    as_weight,
    induced_subgraph,
    social_welfare,
    utility,
)
from .ef1 import (
    EF1Graph,
    EF1Witness,
    EnvyGraph,
    alg3_ef1_heterogeneous,
    alg4_ef1_binary,
    alg5_ef1_two,
    alg6_ef1_homogeneous,
    ef1_graph,
    envy_cycle_elimination,
    envy_graph,
    is_ef1,
)
from .matching import GraphTooLargeError, MatchingResult, brute_force_matching, max_weight_matching
from .mms import alg1_mms_homogeneous, alg2_maxmin_two, greedy_partition, round_down_pow2
from .oracle import (
    AllocationEnumerator,
    InstanceTooLargeError,
    exact_max_ef1_welfare,
    exact_mms,
    max_social_welfare_exact,
    max_social_welfare_matching,
)

__all__ = [
    "Allocation",
    "AllocationEnumerator",
    "EF1Graph",
    "EF1Witness",
    "EnvyGraph",
    "Graph",
    "GraphTooLargeError",
    "Instance",
    "InstanceTooLargeError",
    "Matching",
    "MatchingResult",
    "WeightProfile",
    "alg1_mms_homogeneous",
    "alg2_maxmin_two",
    "alg3_ef1_heterogeneous",
    "alg4_ef1_binary",
    "alg5_ef1_two",
    "alg6_ef1_homogeneous",
    "as_weight",
    "brute_force_matching",
    "ef1_graph",
    "envy_cycle_elimination",
    "envy_graph",
    "exact_max_ef1_welfare",
    "exact_mms",
    "greedy_partition",
    "induced_subgraph",
    "is_ef1",
    "max_social_welfare_exact",
    "max_social_welfare_matching",
    "max_weight_matching",
    "round_down_pow2",
    "social_welfare",
    "utility",
]

__version__ = "0.1.0"
