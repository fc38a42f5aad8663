"""
Mixer Candidates, Selection and Synthesis

Turns logical-X graphs into priced mixer candidates and selects a cheapest
set whose union connects the feasible set:
- make_candidates: one candidate per (lX, orbit) plus single-edge fallbacks
- select_optimal: branch-and-bound under a merge-capacity lower bound for
  small pools, greedy cost-per-merge with reverse delete otherwise
- chain_mixer: the consecutive-pair baseline
- synthesize: end-to-end pipeline
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from joblib import Parallel, delayed
from networkx.utils import UnionFind

from app.core.config import settings
from app.core.exceptions import RestrictionError, SelectionError
from app.core.mixer_constants import CandidateKind, SelectionDefaults
from app.mixer.pauli import PauliString, PauliSum, cost, int_to_bits
from app.mixer.restrict import best_restriction
from app.mixer.stabilizer import GeneratorSet, minimal_generators, orbit_stabilizer
from app.mixer.subspace import Edge, FeasibleSet, LogicalXGraph, build_family, find_group_orbits

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MixerCandidate:
    """lX·P with the feasible edges it connects and its CX cost."""

    n: int
    lx: int
    projector: PauliSum
    mixer: PauliSum
    edges: Tuple[Edge, ...]
    cost: int
    provenance: str
    kind: str
    generators: Optional[GeneratorSet] = None
    bridges: Tuple[Tuple[int, int], ...] = ()

    @property
    def lx_pauli(self) -> PauliString:
        return PauliString.x_type(self.lx, self.n)

    def edge_key(self) -> Tuple[Edge, ...]:
        return tuple(sorted((min(e), max(e)) for e in self.edges))

    def sort_key(self) -> tuple:
        return (self.cost, self.lx, self.edge_key())

    def describe(self) -> str:
        label = self.lx_pauli.body()
        if self.generators is not None and len(self.generators):
            label += str(self.generators)
        return label


@dataclass(frozen=True)
class MixerPlan:
    """Selected candidates over a feasible set, applied in order."""

    feasible: FeasibleSet
    candidates: Tuple[MixerCandidate, ...]

    @property
    def n(self) -> int:
        return self.feasible.n

    @property
    def total_cost(self) -> int:
        return sum(c.cost for c in self.candidates)

    def edges(self) -> List[Edge]:
        return [e for c in self.candidates for e in c.edges]

    def is_valid(self) -> bool:
        return is_connected(self.feasible, [c.edges for c in self.candidates])

    def hamiltonian(self) -> PauliSum:
        total = PauliSum(self.n)
        for candidate in self.candidates:
            total = total + candidate.mixer
        return total

    def adjacency(self) -> np.ndarray:
        return edge_adjacency(self.feasible, self.edges())


@dataclass
class SynthesisOptions:
    """Knobs for make_candidates / select_optimal."""

    restrict: bool = True
    selection: str = SelectionDefaults.EXACT
    exact_limit: int = field(default_factory=lambda: settings.exact_selection_limit)
    n_jobs: int = field(default_factory=lambda: settings.n_jobs)
    max_edge_candidates: int = field(default_factory=lambda: settings.max_edge_candidates)
    kernel: bool = True

    def __post_init__(self):
        if self.selection not in SelectionDefaults.MODES:
            raise SelectionError(f"selection must be one of {SelectionDefaults.MODES}, got {self.selection!r}")
        if self.exact_limit < 0:
            raise SelectionError("exact_limit must be non-negative")


# Connectivity

def is_connected(b: FeasibleSet, edge_sets: Iterable[Iterable[Edge]]) -> bool:
    """True iff the union of the edge sets connects every state of B."""
    graph = nx.Graph()
    graph.add_nodes_from(b.states)
    for edges in edge_sets:
        graph.add_edges_from(edges)
    if graph.number_of_nodes() != len(b):
        return False
    return nx.is_connected(graph)


def edge_adjacency(b: FeasibleSet, edges: Iterable[Edge]) -> np.ndarray:
    """Σ(|x⟩⟨y| + |y⟩⟨x|) in the basis of B (input order)."""
    adjacency = np.zeros((len(b), len(b)))
    for x, y in edges:
        i, j = b.index_of(x), b.index_of(y)
        adjacency[i, j] += 1
        adjacency[j, i] += 1
    return adjacency


def restricted_mixer_matrix(mixer: PauliSum, b: FeasibleSet) -> np.ndarray:
    """Dense mixer matrix restricted to span(B) rows and columns."""
    idx = list(b.states)
    return mixer.to_matrix()[np.ix_(idx, idx)]


# Candidate construction

def graph_for_mask(b: FeasibleSet, lx: int) -> LogicalXGraph:
    """G_lX computed directly for one mask."""
    edges = []
    for x in b.states:
        y = x ^ lx
        if y in b and b.index_of(y) > b.index_of(x):
            edges.append((x, y))
    return LogicalXGraph(lx, tuple(s for e in edges for s in e), tuple(edges))


def covered_edges(projector: PauliSum, b: FeasibleSet, graph: LogicalXGraph) -> Tuple[Edge, ...]:
    """Edges of G_lX on which P acts as identity; P must be 0 on B \\ V_lX."""
    v_lx = set(graph.vertices)
    for state in b.states:
        if state not in v_lx and projector.diagonal_value(state) != 0:
            raise RestrictionError(f"projector does not annihilate outside state {b.bits(state)}")
    covered = []
    for x, y in graph.edges:
        value_x, value_y = projector.diagonal_value(x), projector.diagonal_value(y)
        if value_x not in (0, 1) or value_x != value_y:
            raise RestrictionError(
                f"projector value {value_x}/{value_y} on edge {b.bits(x)}-{b.bits(y)} is not 0 or 1"
            )
        if value_x == 1:
            covered.append((x, y))
    return tuple(covered)


def candidate_from_projector(
    b: FeasibleSet,
    lx: int,
    projector: PauliSum,
    provenance: str,
    kind: str,
    generators: Optional[GeneratorSet] = None,
    graph: Optional[LogicalXGraph] = None,
) -> MixerCandidate:
    graph = graph or graph_for_mask(b, lx)
    mixer = projector.left_multiply(PauliString.x_type(lx, b.n))
    return MixerCandidate(
        n=b.n,
        lx=lx,
        projector=projector,
        mixer=mixer,
        edges=covered_edges(projector, b, graph),
        cost=cost(mixer),
        provenance=provenance,
        kind=kind,
        generators=generators,
    )


def build_candidate(
    b: FeasibleSet,
    graph: LogicalXGraph,
    generators: GeneratorSet,
    target: Sequence[int],
    kind: str,
    restrict: bool = True,
    strict: bool = False,
    kernel: bool = True,
) -> MixerCandidate:
    """Best-restricted candidate for the code space of the given generators."""
    lx = PauliString.x_type(graph.lx, b.n)
    restricted = best_restriction(lx, generators, b, graph.vertices, target, restrict, strict, kernel)
    return candidate_from_projector(
        b, graph.lx, restricted.projector, restricted.provenance, kind,
        generators=restricted.subgroup, graph=graph,
    )


def graph_candidates(
    b: FeasibleSet, graph: LogicalXGraph, restrict: bool, max_edge_candidates: int, kernel: bool = True
) -> List[MixerCandidate]:
    decomposition = find_group_orbits(graph, b.n)
    candidates = [
        build_candidate(
            b, graph, orbit_stabilizer(orbit), orbit.states, CandidateKind.ORBIT, restrict, kernel=kernel
        )
        for orbit in decomposition
    ]
    if any(len(orbit.edges) > 1 for orbit in decomposition):
        for x, y in graph.edges[:max_edge_candidates]:
            generators = minimal_generators(x, [graph.lx], b.n)
            candidates.append(
                build_candidate(b, graph, generators, (x, y), CandidateKind.EDGE, restrict, kernel=kernel)
            )
    return candidates


def make_candidates(b: FeasibleSet, options: Optional[SynthesisOptions] = None) -> List[MixerCandidate]:
    """Deduplicated candidate pool, ascending by (cost, lX, edges)."""
    options = options or SynthesisOptions()
    family = build_family(b)
    if options.n_jobs == 1 or len(family) < 2:
        per_graph = [
            graph_candidates(b, graph, options.restrict, options.max_edge_candidates, options.kernel)
            for graph in family
        ]
    else:
        per_graph = Parallel(n_jobs=options.n_jobs)(
            delayed(graph_candidates)(b, graph, options.restrict, options.max_edge_candidates, options.kernel)
            for graph in family
        )
    pool: Dict[tuple, MixerCandidate] = {}
    for candidate in (c for group in per_graph for c in group):
        if not candidate.edges:
            continue
        key = (candidate.lx, candidate.edge_key())
        if key not in pool or candidate.cost < pool[key].cost:
            pool[key] = candidate
    candidates = sorted(pool.values(), key=MixerCandidate.sort_key)
    logger.info(f"Built {len(candidates)} candidates from {len(family)} logical-X graphs")
    return candidates


# Selection

class _Components:
    """Component labels of B under a growing edge set."""

    def __init__(self, b: FeasibleSet):
        self.index = {s: i for i, s in enumerate(b.states)}
        self.size = len(b)

    def initial(self) -> Tuple[int, ...]:
        return tuple(range(self.size))

    def merge(self, labels: Tuple[int, ...], edges: Iterable[Edge]) -> Tuple[Tuple[int, ...], int]:
        forest = UnionFind(range(self.size))
        for i, label in enumerate(labels):
            forest.union(i, label)
        for x, y in edges:
            forest.union(self.index[x], self.index[y])
        merged = tuple(forest[i] for i in range(self.size))
        return merged, len(set(merged))


def _prune(candidates: Sequence[MixerCandidate]) -> List[MixerCandidate]:
    """Drop candidates dominated by a cheaper-or-equal superset of edges."""
    kept: List[MixerCandidate] = []
    for candidate in sorted(candidates, key=MixerCandidate.sort_key):
        edges = set(candidate.edge_key())
        if not edges:
            continue
        if any(edges <= set(other.edge_key()) for other in kept):
            continue
        kept.append(candidate)
    return kept


def _greedy(
    pool: List[MixerCandidate], components: _Components, labels: Tuple[int, ...], count: int
) -> List[int]:
    chosen: List[int] = []
    while count > 1:
        best, best_key = None, None
        for i, candidate in enumerate(pool):
            if i in chosen:
                continue
            merged, after = components.merge(labels, candidate.edges)
            merges = count - after
            if merges == 0:
                continue
            key = (Fraction(candidate.cost, merges), candidate.cost, i)
            if best_key is None or key < best_key:
                best, best_key = i, key
        if best is None:
            raise SelectionError("candidates cannot connect the feasible set")
        chosen.append(best)
        labels, count = components.merge(labels, pool[best].edges)
    return chosen


def _reverse_delete(
    pool: List[MixerCandidate], chosen: List[int], components: _Components, base: Tuple[int, ...]
) -> List[int]:
    selection = list(chosen)
    for i in sorted(chosen, key=lambda j: (-pool[j].cost, -j)):
        trial = [j for j in selection if j != i]
        labels = base
        for j in trial:
            labels, count = components.merge(labels, pool[j].edges)
        if len(set(labels)) == 1:
            selection = trial
    return selection


def _branch_and_bound(
    pool: List[MixerCandidate],
    components: _Components,
    labels: Tuple[int, ...],
    count: int,
    incumbent: List[int],
) -> List[int]:
    best = list(incumbent)
    best_cost = sum(pool[i].cost for i in best)

    def lower_bound(start: int, labels: Tuple[int, ...], count: int) -> float:
        need = count - 1
        items = []
        for candidate in pool[start:]:
            merges = count - components.merge(labels, candidate.edges)[1]
            if merges > 0:
                items.append((candidate.cost / merges, merges))
        items.sort()
        bound = 0.0
        for ratio, merges in items:
            take = min(merges, need)
            bound += ratio * take
            need -= take
            if need == 0:
                return bound
        return float("inf")

    def search(position: int, labels: Tuple[int, ...], count: int, spent: int, chosen: List[int]) -> None:
        nonlocal best, best_cost
        if count == 1:
            if spent < best_cost:
                best, best_cost = list(chosen), spent
            return
        if position == len(pool):
            return
        if spent + lower_bound(position, labels, count) >= best_cost:
            return
        candidate = pool[position]
        merged, after = components.merge(labels, candidate.edges)
        if after < count:
            search(position + 1, merged, after, spent + candidate.cost, chosen + [position])
        search(position + 1, labels, count, spent, chosen)

    search(0, labels, count, 0, [])
    return best


def select_optimal(
    candidates: Sequence[MixerCandidate],
    b: FeasibleSet,
    selection: str = SelectionDefaults.EXACT,
    exact_limit: Optional[int] = None,
    required: Sequence[MixerCandidate] = (),
) -> MixerPlan:
    """Cheapest candidate subset (plus required ones) connecting B."""
    exact_limit = settings.exact_selection_limit if exact_limit is None else exact_limit
    components = _Components(b)
    labels, count = components.initial(), len(b)
    for candidate in required:
        labels, count = components.merge(labels, candidate.edges)
    if count == 1:
        return MixerPlan(b, tuple(required))

    pool = [c for c in _prune(candidates) if components.merge(labels, c.edges)[1] < count]
    chosen = _reverse_delete(pool, _greedy(pool, components, labels, count), components, labels)
    if selection == SelectionDefaults.EXACT:
        if len(pool) <= exact_limit:
            chosen = _branch_and_bound(pool, components, labels, count, chosen)
        else:
            logger.warning(
                f"{len(pool)} candidates exceed the exact selection limit {exact_limit}; using greedy selection"
            )
    selected = tuple(required) + tuple(pool[i] for i in sorted(chosen))
    plan = MixerPlan(b, selected)
    logger.debug(f"Selected {len(selected)} of {len(pool)} candidates, cost {plan.total_cost}")
    return plan


# Baselines and pipeline

def pair_candidate(
    b: FeasibleSet, x: int, y: int, restrict: bool = True, strict: bool = False
) -> MixerCandidate:
    """
    Candidate for the single pair {x, y} (pair stabilizer, optionally restricted).

    strict=True keeps the projector zero on every other feasible state, so the
    candidate covers exactly the edge x-y even when G_lX has further edges.
    """
    lx = x ^ y
    graph = graph_for_mask(b, lx)
    generators = minimal_generators(x, [lx], b.n)
    return build_candidate(b, graph, generators, (x, y), CandidateKind.PAIR, restrict, strict)


def chain_mixer(b: FeasibleSet, restrict: bool = True, sort_states: bool = True) -> MixerPlan:
    """
    One term per consecutive pair (ascending by default, else input order).

    Each term covers only its own pair: T has ones on the first off-diagonal.
    """
    if len(b) < 2:
        raise SelectionError("need at least two feasible states")
    order = sorted(b.states) if sort_states else list(b.states)
    candidates = tuple(pair_candidate(b, x, y, restrict, strict=True) for x, y in zip(order, order[1:]))
    return MixerPlan(b, candidates)


@dataclass(frozen=True)
class PairCost:
    index: int
    x: int
    y: int
    lx: int
    unrestricted_cost: int
    restricted_cost: int


def cost_table(b: FeasibleSet) -> List[PairCost]:
    """Unrestricted and best restricted cost of every pair (i < j, input order)."""
    rows = []
    for index, (x, y) in enumerate(
        ((b.states[i], b.states[j]) for i in range(len(b)) for j in range(i + 1, len(b))), start=1
    ):
        unrestricted = pair_candidate(b, x, y, restrict=False)
        restricted = pair_candidate(b, x, y, restrict=True)
        rows.append(PairCost(index, x, y, x ^ y, unrestricted.cost, restricted.cost))
    return rows


def synthesize(b: FeasibleSet, options: Optional[SynthesisOptions] = None) -> MixerPlan:
    """make_candidates → select_optimal."""
    options = options or SynthesisOptions()
    candidates = make_candidates(b, options)
    plan = select_optimal(candidates, b, options.selection, options.exact_limit)
    logger.info(
        f"Synthesized mixer over {len(b)} states: {len(plan.candidates)} candidates, "
        f"total cost {plan.total_cost} (restrict={options.restrict}, selection={options.selection})"
    )
    for candidate in plan.candidates:
        logger.debug(f"  {candidate.describe()} cost {candidate.cost} edges {len(candidate.edges)}")
    return plan


def format_candidate_table(plan: MixerPlan) -> str:
    """Plain-text per-candidate table for command output."""
    lines = [f"{'logical_x':<{plan.n + 2}} {'provenance':<13} {'edges':>5} {'cost':>5}"]
    for candidate in plan.candidates:
        lines.append(
            f"{int_to_bits(candidate.lx, plan.n):<{plan.n + 2}} {candidate.provenance:<13} "
            f"{len(candidate.edges):>5} {candidate.cost:>5}"
        )
    return "\n".join(lines)
