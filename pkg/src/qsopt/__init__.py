"""Unconstrained quasi-submodular set-function optimization.

Lattice-reduction algorithms for minimization and maximization, exhaustive
property checkers and exact oracles, a zoo of benchmark function families,
maximization baselines, and an experiment harness with a CLI front end.
"""

from .baselines import (
    BaselineResult,
    double_greedy,
    random_permutation_greedy,
    randomized_bidirectional_greedy,
    randomized_local_search,
)
from .checkers import (
    PropertyVerdict,
    Witness,
    is_local_max,
    is_local_min,
    is_quasi_submodular,
    is_submodular,
    satisfies_ssbc,
    satisfies_weak_marginal,
)
from .errors import (
    CapacityMismatch,
    CapExceeded,
    ConfigError,
    InternalInvariantError,
    QsoptError,
)
from .exact import enumerate_local_optima, exact_opt, nested_argmin_check
from .functions import (
    FunctionSpec,
    cobb_value,
    com_value,
    facility_value,
    half_products_value,
    instantiate,
    iwata_value,
    load_spec,
    make_cobb_douglas,
    make_com,
    make_determinant,
    make_half_products,
    make_iwata,
    make_perturbed_facility,
    make_random_qsb,
    make_tabular,
    principal_determinant,
    save_spec,
    tabular_spec,
)
from .harness import (
    ExperimentConfig,
    RunReport,
    reduction_rate,
    run_ratio_experiment,
    run_reduction_experiment,
    run_timing_experiment,
)
from .maximize import MaxTrace, UPrefixResult, u_prefix, uqsfmax
from .minimize import MinTrace, min_lattice, uqsfmin
from .oracle import (
    CountingOracle,
    Cursor,
    SetFunctionOracle,
    drop_marginal,
    eval_table,
    marginal_gain,
    values_close,
)
from .sets import (
    GroundSet,
    IntervalLattice,
    SubsetBits,
    enumerate_lattice,
    format_set,
    lattice_contains,
    lattice_free_count,
    parse_set,
)

__version__ = "0.1.0"

__all__ = [
    "BaselineResult",
    "CapacityMismatch",
    "CapExceeded",
    "ConfigError",
    "CountingOracle",
    "Cursor",
    "ExperimentConfig",
    "FunctionSpec",
    "GroundSet",
    "IntervalLattice",
    "InternalInvariantError",
    "MaxTrace",
    "MinTrace",
    "PropertyVerdict",
    "QsoptError",
    "RunReport",
    "SetFunctionOracle",
    "SubsetBits",
    "UPrefixResult",
    "Witness",
    "cobb_value",
    "com_value",
    "double_greedy",
    "drop_marginal",
    "facility_value",
    "half_products_value",
    "iwata_value",
    "principal_determinant",
    "enumerate_lattice",
    "enumerate_local_optima",
    "eval_table",
    "exact_opt",
    "format_set",
    "instantiate",
    "is_local_max",
    "is_local_min",
    "is_quasi_submodular",
    "is_submodular",
    "lattice_contains",
    "lattice_free_count",
    "load_spec",
    "make_cobb_douglas",
    "make_com",
    "make_determinant",
    "make_half_products",
    "make_iwata",
    "make_perturbed_facility",
    "make_random_qsb",
    "make_tabular",
    "marginal_gain",
    "min_lattice",
    "nested_argmin_check",
    "parse_set",
    "random_permutation_greedy",
    "randomized_bidirectional_greedy",
    "randomized_local_search",
    "reduction_rate",
    "run_ratio_experiment",
    "run_reduction_experiment",
    "run_timing_experiment",
    "satisfies_ssbc",
    "satisfies_weak_marginal",
    "save_spec",
    "tabular_spec",
    "u_prefix",
    "uqsfmax",
    "uqsfmin",
    "values_close",
]
