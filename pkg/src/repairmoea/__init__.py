"""Repair operators for box-constrained multi-objective evolutionary search."""

__version__ = "0.1.0"

from .config import ConfigError, RunConfig  # noqa: E402
from .core import (CatalogError, ContractError, Evaluation, Individual, Ordering, Problem,  # noqa: E402
                   cdp_compare, evaluate, pareto_dominates)
from .metrics import build_reference_front, build_reference_point, hv, igd, load_reference_front  # noqa: E402
from .moead import moead_cdp_run  # noqa: E402
from .nsga2 import constrained_nondominated_sort, nsga2_cdp_run  # noqa: E402
from .problems import PROBLEM_NAMES, get_problem  # noqa: E402
from .repair import RepairKind, repair_component, repair_vector  # noqa: E402
from .stats import summarize, t_test  # noqa: E402

__all__ = [
    "CatalogError", "ConfigError", "ContractError", "Evaluation", "Individual", "Ordering", "PROBLEM_NAMES",
    "Problem", "RepairKind", "RunConfig", "build_reference_front", "build_reference_point", "cdp_compare",
    "constrained_nondominated_sort", "evaluate", "get_problem", "hv", "igd", "load_reference_front",
    "moead_cdp_run", "nsga2_cdp_run", "pareto_dominates", "repair_component", "repair_vector", "summarize",
    "t_test",
]
