"""
Reference Feasible Sets

Hand-checked feasible sets with known mixer costs, stabilizer groups and
logical-X families, used across the mixer and service tests.
"""

from app.mixer.subspace import FeasibleSet, orbit_closure


def create_five_qubit_set() -> FeasibleSet:
    """
    Six states on five qubits with fifteen pairs C1..C15 (i < j, input order)

    C1 = {10010, 01110} has lX = XXXII and restricts from cost 96 to 10.
    """
    return FeasibleSet.from_bitstrings(["10010", "01110", "10011", "11101", "00110", "01010"])


def create_seven_state_set() -> FeasibleSet:
    """
    Seven states on four qubits

    Optimal mixer: 22 with restriction, 64 without.
    Ascending chain: 200 without restriction, 78 with each term restricted
    to its own pair (8 + 16 + 16 + 16 + 10 + 12).
    """
    return FeasibleSet.from_bitstrings(["1010", "0111", "1110", "1001", "0010", "0000", "1101"])


def create_five_state_set() -> FeasibleSet:
    """Five states on four qubits with seven nonempty logical-X graphs"""
    return FeasibleSet.from_bitstrings(["1110", "1100", "1001", "0100", "0011"])


def create_orbit_set() -> FeasibleSet:
    """The eight states ⟨X2X3X4, X1X2, X1X4⟩|1011⟩"""
    return FeasibleSet(4, tuple(orbit_closure(0b1011, ORBIT_GENERATORS)))


def create_one_hot_set(n: int = 3) -> FeasibleSet:
    return FeasibleSet.k_hot(n, 1)


ORBIT_GENERATORS = [0b0111, 0b1100, 0b1001]

EXPECTED_PAIR_COSTS = {
    "unrestricted": [96, 64, 112, 80, 80, 112, 96, 64, 64, 96, 96, 96, 112, 112, 80],
    "restricted": [10, 4, 14, 10, 10, 14, 12, 4, 4, 10, 10, 10, 12, 12, 4],
}

EXPECTED_SEVEN_STATE_COSTS = {
    "optimal_restricted": 22,
    "optimal_unrestricted": 64,
    "chain_sorted_unrestricted": 200,
    "chain_input_unrestricted": 216,
    "chain_sorted_restricted": 78,
    "family_size": 13,
}

EXPECTED_FIVE_STATE_FAMILY = {
    "family_size": 7,
    # IXXX graph: two edges in pair order
    "ixxx_edges": [(0b1110, 0b1001), (0b0100, 0b0011)],
}

EXPECTED_PAIR_STABILIZER = {
    "state": "10010",
    "logical_x": "XXIIX",
    "generators": ["+IIZII", "-IIIZI", "-ZZIII", "+IZIIZ"],
}

EXPECTED_ORBIT_STABILIZER = {
    "generators": ["+ZZIZ"],
    # ⟨-Z1, Z2, -Z3, -Z4⟩ after each error in turn
    "steps": [
        ("IXXX", ["-ZIII", "-IZZI", "+IIZZ"]),
        ("XXII", ["+ZZZI", "+IIZZ"]),
        ("XIIX", ["+ZZIZ"]),
    ],
}

EXPECTED_C1_RESTRICTION = {
    "x": "10010",
    "y": "01110",
    "logical_x": "XXXII",
    "unrestricted_cost": 96,
    "restricted_cost": 10,
    "outside": ["10011", "11101", "00110", "01010"],
    "subgroup": ["+IZZIZ"],
}

EXPECTED_MULTI_K_HOT = {
    # (n, k1, k2): total cost
    (5, 0, 1): 24,
    (5, 1, 4): 20,
    (4, 2, 2): 12,
}
