"""
Feasible Sets and Logical-X Graph Families

Represents explicit feasible sets B of basis states and derives:
- The family of logical-X graphs G_lX = (V_lX, E_lX), one per XOR mask
- Group-structured orbits inside each graph: affine X-type orbits
  ⟨lX, E_1, ..., E_k⟩|z⟩ fully contained in V_lX
- Feasible-set file parsing and standard constructors (full space, k-hot,
  weight ranges, random subsets, Cartesian products)
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations, product as cartesian
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.core.exceptions import DimensionMismatchError, FeasibleSetError
from app.mixer import gf2
from app.mixer.pauli import PauliString, bits_to_int, int_to_bits, popcount

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


@dataclass(frozen=True)
class FeasibleSet:
    """Ordered, duplicate-free list of n-bit basis states (stored as ints)."""

    n: int
    states: Tuple[int, ...]
    _index: Dict[int, int] = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.n < 1:
            raise FeasibleSetError(f"qubit count must be positive, got {self.n}")
        if not self.states:
            raise FeasibleSetError("feasible set is empty")
        limit = 1 << self.n
        for state in self.states:
            if not 0 <= state < limit:
                raise FeasibleSetError(f"state {state} does not fit in {self.n} bits")
        if len(set(self.states)) != len(self.states):
            raise FeasibleSetError("feasible set contains duplicate states")
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.states)})

    # Constructors

    @classmethod
    def from_bitstrings(cls, bitstrings: Sequence[str]) -> "FeasibleSet":
        if not bitstrings:
            raise FeasibleSetError("feasible set is empty")
        n = len(bitstrings[0])
        for bits in bitstrings:
            if len(bits) != n:
                raise FeasibleSetError(f"bitstring {bits!r} has length {len(bits)}, expected {n}")
        return cls(n, tuple(bits_to_int(bits) for bits in bitstrings))

    @classmethod
    def full_space(cls, n: int) -> "FeasibleSet":
        return cls(n, tuple(range(1 << n)))

    @classmethod
    def weight_range(cls, n: int, k1: int, k2: int) -> "FeasibleSet":
        """All states with Hamming weight in [k1, k2], ascending."""
        if not 0 <= k1 <= k2 <= n:
            raise FeasibleSetError(f"invalid weight range [{k1}, {k2}] for n={n}")
        return cls(n, tuple(s for s in range(1 << n) if k1 <= popcount(s) <= k2))

    @classmethod
    def k_hot(cls, n: int, k: int) -> "FeasibleSet":
        return cls.weight_range(n, k, k)

    @classmethod
    def random_subset(cls, n: int, size: int, rng: np.random.Generator) -> "FeasibleSet":
        if not 1 <= size <= 1 << n:
            raise FeasibleSetError(f"cannot draw {size} distinct states from {1 << n}")
        drawn = rng.choice(1 << n, size=size, replace=False)
        return cls(n, tuple(int(s) for s in drawn))

    @classmethod
    def product(cls, factors: Sequence["FeasibleSet"]) -> "FeasibleSet":
        """Cartesian product with factor 1 on the leftmost qubits."""
        total_n = sum(f.n for f in factors)
        states = []
        for combo in cartesian(*(f.states for f in factors)):
            value = 0
            for factor, state in zip(factors, combo):
                value = (value << factor.n) | state
            states.append(value)
        return cls(total_n, tuple(states))

    # Views

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self) -> Iterator[int]:
        return iter(self.states)

    def __contains__(self, state: object) -> bool:
        if isinstance(state, str):
            return len(state) == self.n and bits_to_int(state) in self._index
        return state in self._index

    def index_of(self, state: Union[int, str]) -> int:
        value = bits_to_int(state) if isinstance(state, str) else state
        try:
            return self._index[value]
        except KeyError:
            raise FeasibleSetError(f"state {self.bits(value)} is not feasible") from None

    def bits(self, state: int) -> str:
        return int_to_bits(state, self.n)

    @property
    def bitstrings(self) -> List[str]:
        return [self.bits(s) for s in self.states]

    def sorted(self) -> "FeasibleSet":
        return FeasibleSet(self.n, tuple(sorted(self.states)))

    def to_text(self) -> str:
        return "\n".join(self.bitstrings) + "\n"


def parse_feasible_text(text: str) -> FeasibleSet:
    """One bitstring per line; '#' starts a comment; blank lines ignored."""
    bitstrings = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if any(c not in "01" for c in line):
            raise FeasibleSetError(f"line {number}: invalid bitstring {line!r}")
        if bitstrings and len(line) != len(bitstrings[0]):
            raise FeasibleSetError(
                f"line {number}: length {len(line)} differs from {len(bitstrings[0])}"
            )
        if line in bitstrings:
            raise FeasibleSetError(f"line {number}: duplicate state {line}")
        bitstrings.append(line)
    if not bitstrings:
        raise FeasibleSetError("feasible-set file contains no states")
    return FeasibleSet.from_bitstrings(bitstrings)


def load_feasible_file(path: Union[str, Path]) -> FeasibleSet:
    path = Path(path)
    logger.debug(f"Loading feasible set from {path}")
    return parse_feasible_text(path.read_text(encoding="utf-8"))


# Logical-X family

def logical_x_of_pair(x: Union[str, int], y: Union[str, int], n: Optional[int] = None) -> int:
    """X-type mask flipping exactly the bits where x and y differ."""
    if isinstance(x, str) or isinstance(y, str):
        if not (isinstance(x, str) and isinstance(y, str)) or len(x) != len(y):
            raise DimensionMismatchError(len(str(x)), len(str(y)), "bitstring length")
        x, y = bits_to_int(x), bits_to_int(y)
    if x == y:
        raise FeasibleSetError("no logical X exists between a state and itself")
    return x ^ y


@dataclass(frozen=True)
class LogicalXGraph:
    """G_lX: pairs of feasible states related by the logical X mask."""

    lx: int
    vertices: Tuple[int, ...]
    edges: Tuple[Edge, ...]

    def pauli(self, n: int) -> PauliString:
        return PauliString.x_type(self.lx, n)


@dataclass(frozen=True)
class LogicalXFamily:
    """Nonempty logical-X graphs of a feasible set, ascending by mask."""

    feasible: FeasibleSet
    graphs: Tuple[LogicalXGraph, ...]

    def __len__(self) -> int:
        return len(self.graphs)

    def __iter__(self) -> Iterator[LogicalXGraph]:
        return iter(self.graphs)

    def __getitem__(self, lx: int) -> LogicalXGraph:
        for graph in self.graphs:
            if graph.lx == lx:
                return graph
        raise KeyError(lx)

    def masks(self) -> List[int]:
        return [g.lx for g in self.graphs]


def build_family(b: FeasibleSet) -> LogicalXFamily:
    """Group all J(J-1)/2 pairs of B by their XOR mask."""
    if len(b) < 2:
        raise FeasibleSetError("need at least two feasible states")
    edges_by_mask: Dict[int, List[Edge]] = {}
    # pairs in input order; each edge stores the earlier state first
    for x, y in combinations(b.states, 2):
        edges_by_mask.setdefault(x ^ y, []).append((x, y))
    graphs = []
    for lx in sorted(edges_by_mask):
        edges = edges_by_mask[lx]
        vertices = tuple(s for edge in edges for s in edge)
        graphs.append(LogicalXGraph(lx, vertices, tuple(edges)))
    logger.debug(f"Built family of {len(graphs)} logical-X graphs over {len(b)} states")
    return LogicalXFamily(b, tuple(graphs))


# Orbit discovery

@dataclass(frozen=True)
class Orbit:
    """Affine X-type orbit ⟨generators⟩|base⟩ with generators[0] == lX."""

    n: int
    base: int
    generators: Tuple[int, ...]
    states: Tuple[int, ...]
    edges: Tuple[Edge, ...]

    @property
    def lx(self) -> int:
        return self.generators[0]

    @property
    def extra_generators(self) -> Tuple[int, ...]:
        return self.generators[1:]

    def generator_paulis(self) -> List[PauliString]:
        return [PauliString.x_type(mask, self.n) for mask in self.generators]

    def __len__(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class OrbitDecomposition:
    lx: int
    orbits: Tuple[Orbit, ...]

    def __len__(self) -> int:
        return len(self.orbits)

    def __iter__(self) -> Iterator[Orbit]:
        return iter(self.orbits)


def find_group_orbits(graph: LogicalXGraph, n: int) -> OrbitDecomposition:
    """
    Partition V_lX into affine X-type orbits.

    Starting from the first unassigned pair, candidate masks (XORs of the
    base with other unassigned pair bases) are tried in ascending order and
    accepted while the doubled orbit stays inside the unassigned states.
    """
    unassigned: List[Edge] = list(graph.edges)
    orbits: List[Orbit] = []
    while unassigned:
        base, _ = unassigned[0]
        available = {s for edge in unassigned for s in edge}
        generators = [graph.lx]
        states = {base, base ^ graph.lx}
        candidates = sorted({u ^ base for u, _ in unassigned[1:]})
        for mask in candidates:
            if gf2.in_span(mask, generators):
                continue
            doubled = {s ^ mask for s in states}
            if doubled <= available:
                states |= doubled
                generators.append(mask)
        orbit_edges = tuple(e for e in unassigned if e[0] in states)
        unassigned = [e for e in unassigned if e[0] not in states]
        ordered_states = tuple(s for e in orbit_edges for s in e)
        orbits.append(Orbit(n, base, tuple(generators), ordered_states, orbit_edges))
    logger.debug(
        f"lX={int_to_bits(graph.lx, n)}: {len(orbits)} orbit(s), sizes {[len(o) for o in orbits]}"
    )
    return OrbitDecomposition(graph.lx, tuple(orbits))


def orbit_closure(base: int, generators: Iterable[int]) -> List[int]:
    """All states ⟨generators⟩|base⟩ (brute force)."""
    return sorted({base ^ element for element in gf2.span(list(generators))})
