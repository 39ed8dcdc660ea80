"""Popular optimal common independent sets under matroid constraints.

Exact solvers for popular maximum-weight and maximum-utility common
independent sets (one-sided partial orders; two-sided total orders,
many-to-many), LP dual certificates with chain supports, matroid
kernels, brute-force oracles, and the exact-matching / special-edge
hardness gadgets.  All arithmetic is exact rational.
"""

from .errors import (
    BudgetExceededError,
    DomainError,
    InfeasibleError,
    NoBaseError,
    PopmatError,
    PreconditionError,
    SchemaError,
)
from .exhaustive import (
    DEFAULT_BUDGET,
    EnumerationBudget,
    brute_popular,
    enumerate_cis,
    enumerate_common_bases,
    enumerate_family,
)
from .matroids import (
    Contraction,
    DirectSum,
    ExplicitMatroid,
    FreeMatroid,
    GraphicMatroid,
    Matroid,
    PartitionMatroid,
    Restriction,
    Truncation,
    UniformMatroid,
    direct_sum,
    one_partition,
)
from .mnat import (
    ValuedFamily,
    base_family_from,
    is_mnat_concave,
    split_is_valid,
    weight_split,
)
from .nearopt import (
    ColoredBipartite,
    PrefBipartite,
    cycle_gadget,
    exact_matching_brute,
    exact_matching_via_reduction,
    reduce_exact_matching,
    solve_near_opt_brute,
    special_edge,
    verify_k_popular,
    verify_k_popular_lp,
)
from .onesided import (
    AgentOrder,
    OneSidedInstance,
    delta,
    reduce_mnat,
    reduce_weighted,
    solve_popular_common_base,
    solve_popular_max_utility,
    solve_popular_max_weight,
)
from .reports import PopularityReport
from .twosided import (
    ChainPair,
    OrderedMatroid,
    build_leveled,
    feasible_pairings,
    is_critical,
    is_kernel,
    matroid_kernel,
    reduce_weighted_two,
    solve_popular_critical,
    solve_popular_max_weight_two,
    transform_chains,
    vote,
    vote_min,
)
from .wmi import (
    OneSidedDual,
    TwoSidedDual,
    check_cs_one,
    check_cs_two,
    max_weight_cis,
    solve_dual_one,
    solve_dual_two,
    tight_elements,
    uncross,
)

__version__ = "0.1.0"
