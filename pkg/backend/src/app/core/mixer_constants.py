"""
Mixer Synthesis Constants

Centralizes default values, provenance tags and output column layouts used
across the synthesis pipeline, the validators and the command-line surface.
"""

from typing import List


class SelectionDefaults:
    """Defaults for candidate selection"""

    EXACT = "exact"
    GREEDY = "greedy"
    MODES = (EXACT, GREEDY)


class Provenance:
    """Origin of a (restricted) projector"""

    UNRESTRICTED = "unrestricted"
    SUBGROUP = "subgroup"
    KERNEL = "kernel"
    # Tie-break order in best_restriction
    ORDER = (UNRESTRICTED, SUBGROUP, KERNEL)


class CandidateKind:
    """How a candidate's target subspace was chosen"""

    ORBIT = "orbit"
    EDGE = "edge"
    PAIR = "pair"                # chain baseline
    XY = "xy"                    # multi-k-hot chain
    SINGLE_X = "single_x"        # multi-k-hot weight bridge


class SimulationDefaults:
    """Statevector simulation defaults"""

    PRESERVE_TRIALS = 8
    EVOLUTION_METHODS = ("pauli", "expm", "circuit")


class QaoaDefaults:
    """Constrained MAXCUT demo defaults"""

    DEPTHS: List[int] = [1, 3, 5]
    BLOCK_SIZE = 5               # Two blocks of B_{0,1} on 5 qubits each
    FEASIBILITY_TOLERANCE = 1e-9


class CsvColumns:
    """Fixed CSV layouts for every command"""

    COST_TABLE = ["pair", "state_a", "state_b", "logical_x",
                  "unrestricted_cost", "restricted_cost", "seed"]
    STATS_DETAIL = ["size", "trial", "chain_cost", "optimal_cost",
                    "restricted_cost", "seed"]
    STATS_AGGREGATE = ["size", "metric", "mean", "std", "min", "max",
                       "trials", "seed"]
    MAXCUT = ["depth", "ratio", "evaluations", "seed"]
    VALIDITY = ["size", "trial", "max_leakage", "transitions",
                "control_leakage", "error"]
