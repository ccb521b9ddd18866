"""Consecutive patterns in random permutations: exact counts, simulation and Poisson bounds."""

__version__ = "0.1.0"

from .errors import ConsecPatError, DomainError, InvalidInputError, ResourceLimitError
from .perm_core import (
    PatternCode,
    Permutation,
    RandomStream,
    decode_compact,
    encode_compact,
    pattern_of,
    prefix_pattern,
    random_permutation,
    suffix_pattern,
    window_pattern,
)
from .pattern_stats import distinct_counts, multiplicity_profile, occurrences
from .overlap import (
    analyze_overlap,
    expected_Zk,
    joint_count,
    joint_probability,
    lemma21_bound,
    merge_witness,
    overlap_consistent,
    pair_iso_probability,
    shared_values,
)
from .stein_chen import (
    b_n,
    correlation_sum_bound,
    ex_lower_bound,
    exk_lower_bound,
    expected_occurrences,
    theorem_crossover,
    tv_bound,
)
from .exact_oracle import (
    enumerate_expectations,
    exact_tv_to_poisson,
    joint_window_bruteforce,
    u_distribution,
)
from .simulate import mc_expectation, mc_pattern_occurrence
