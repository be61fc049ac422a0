"""BDD library with Shannon information measures and entropy-guided
variable reordering, verified against a brute-force truth-table oracle."""

from .manager import (
    AND, ONE, OR, XOR, ZERO,
    BddError, BddManager, InputError, ManagerMismatchError, NodeLimitError,
    OrderingError, UsageError, copy_function,
)
from .measures import (
    MeasureReport, ProbabilityProfile, VarProbabilities, WeightError,
    all_joint_probabilities, conditional_entropy_set, conditional_entropy_var,
    entropy, measure_report, mutual_information, reach_probabilities,
    weighted_sat_probability,
)
from .oracle import (
    TruthTable, bdd_size_for_order, best_order_exhaustive, enumerate_bdd,
    exact_measures,
)
from .reorder import ReorderTrace, TraceStep, info_reorder, sift, window_permute
from .netlist import (
    BuildLimitError, CycleError, Gate, Netlist, NetlistError, ParseError,
    UndefinedSignalError, build_circuit_bdds, format_blif, manager_for,
    parse_blif, parse_pla,
)

__version__ = "0.1.0"

__all__ = [
    "AND", "OR", "XOR", "ZERO", "ONE",
    "BddManager", "copy_function",
    "BddError", "OrderingError", "UsageError", "ManagerMismatchError",
    "NodeLimitError", "InputError", "WeightError",
    "VarProbabilities", "ProbabilityProfile", "MeasureReport",
    "weighted_sat_probability", "reach_probabilities",
    "all_joint_probabilities", "entropy", "conditional_entropy_var",
    "conditional_entropy_set", "mutual_information", "measure_report",
    "TruthTable", "enumerate_bdd", "exact_measures",
    "bdd_size_for_order", "best_order_exhaustive",
    "ReorderTrace", "TraceStep", "info_reorder", "sift", "window_permute",
    "Netlist", "Gate", "parse_blif", "parse_pla", "format_blif",
    "build_circuit_bdds", "manager_for",
    "NetlistError", "ParseError", "UndefinedSignalError", "CycleError",
    "BuildLimitError",
]
