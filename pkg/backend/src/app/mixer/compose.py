"""
Structural Composition of Mixer Plans

- ProductSpec / tensor_plans: mixers for B = B^1 ⊗ ... ⊗ B^L are the sum of
  per-factor mixers re-indexed into their qubit blocks; the union graph is
  the box product of the factor graphs
- multi_k_hot_plan: XY chain within each Hamming weight plus cheapest
  restricted single-qubit X terms bridging neighbouring weights
- khot_plan: direct synthesis on a k-hot set
"""

import logging
from dataclasses import dataclass, replace
from itertools import product as cartesian
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
from joblib import Parallel, delayed

from app.core.exceptions import FeasibleSetError, LayoutMismatchError, PlanFormatError
from app.core.mixer_constants import CandidateKind, Provenance
from app.mixer.pauli import PauliString, PauliSum, popcount
from app.mixer.stabilizer import GeneratorSet, expand_projector
from app.mixer.subspace import Edge, FeasibleSet, load_feasible_file
from app.mixer.trotter import (
    MixerCandidate,
    MixerPlan,
    SynthesisOptions,
    candidate_from_projector,
    graph_candidates,
    graph_for_mask,
    is_connected,
    select_optimal,
    synthesize,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProductSpec:
    """Factors B^i with their qubit offsets (block i covers offset+1 .. offset+n_i)."""

    factors: Tuple[FeasibleSet, ...]
    offsets: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        object.__setattr__(self, "offsets", tuple(self.offsets))
        if not self.factors:
            raise LayoutMismatchError("product needs at least one factor")
        if len(self.offsets) != len(self.factors):
            raise LayoutMismatchError(f"{len(self.offsets)} offsets for {len(self.factors)} factors")
        covered = set()
        for factor, offset in zip(self.factors, self.offsets):
            if offset < 0:
                raise LayoutMismatchError(f"negative block offset {offset}")
            block = set(range(offset, offset + factor.n))
            if covered & block:
                raise LayoutMismatchError(f"block at offset {offset} overlaps another block")
            covered |= block
        if covered != set(range(self.n)):
            raise LayoutMismatchError("blocks must tile the register contiguously")

    @classmethod
    def from_factors(cls, factors: Sequence[FeasibleSet]) -> "ProductSpec":
        offsets, position = [], 0
        for factor in factors:
            offsets.append(position)
            position += factor.n
        return cls(tuple(factors), tuple(offsets))

    @property
    def n(self) -> int:
        return sum(f.n for f in self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def embed_state(self, index: int, state: int) -> int:
        """Place a factor state into its block of an otherwise zero register."""
        factor, offset = self.factors[index], self.offsets[index]
        return state << (self.n - offset - factor.n)

    def combine(self, states: Sequence[int]) -> int:
        value = 0
        for index, state in enumerate(states):
            value |= self.embed_state(index, state)
        return value

    def feasible(self) -> FeasibleSet:
        """Explicit product set, factor 1 varying slowest."""
        return FeasibleSet(self.n, tuple(self.combine(combo) for combo in cartesian(*(f.states for f in self.factors))))


def load_product_spec(path: Union[str, Path]) -> ProductSpec:
    """
    Product spec file: one factor per line, "<feasible-file> [n]".

    Paths are relative to the spec file; "#" starts a comment.
    """
    path = Path(path)
    factors = []
    for number, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) > 2:
            raise PlanFormatError(f"{path}:{number}: expected '<feasible-file> [n]'")
        factor = load_feasible_file(path.parent / fields[0])
        if len(fields) == 2:
            try:
                declared = int(fields[1])
            except ValueError:
                raise PlanFormatError(f"{path}:{number}: block size {fields[1]!r} is not an integer") from None
            if declared != factor.n:
                raise LayoutMismatchError(f"{path}:{number}: declared {declared} qubits, file has {factor.n}")
        factors.append(factor)
    if not factors:
        raise PlanFormatError(f"{path}: product spec lists no factors")
    logger.info(f"Loaded product spec with {len(factors)} factors from {path}")
    return ProductSpec.from_factors(factors)


# Box product

def edge_graph(b: FeasibleSet, edges: Iterable[Edge]) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(b.states)
    graph.add_edges_from(edges)
    return graph


def box_product(g: nx.Graph, h: nx.Graph) -> nx.Graph:
    """G □ H on vertex pairs (g, h)."""
    return nx.cartesian_product(g, h)


def _flatten(node) -> Tuple[int, ...]:
    if isinstance(node, tuple):
        return tuple(part for element in node for part in _flatten(element))
    return (node,)


def product_graph(graphs: Sequence[nx.Graph], spec: ProductSpec) -> nx.Graph:
    """Box product of per-factor graphs, relabelled to product basis states."""
    if len(graphs) != len(spec):
        raise LayoutMismatchError(f"{len(graphs)} graphs for {len(spec)} factors")
    result = graphs[0]
    for graph in graphs[1:]:
        result = box_product(result, graph)
    if len(graphs) == 1:
        return nx.relabel_nodes(result, {v: spec.combine((v,)) for v in result.nodes})
    return nx.relabel_nodes(result, {v: spec.combine(_flatten(v)) for v in result.nodes})


# Tensor composition

def _embed_candidate(candidate: MixerCandidate, spec: ProductSpec, index: int) -> MixerCandidate:
    offset = spec.offsets[index]
    others = [f.states for j, f in enumerate(spec.factors) if j != index]
    edges = []
    for x, y in candidate.edges:
        for rest in cartesian(*others):
            context = list(rest)
            edges.append((spec.combine(context[:index] + [x] + context[index:]),
                          spec.combine(context[:index] + [y] + context[index:])))
    generators = None
    if candidate.generators is not None:
        generators = GeneratorSet(spec.n, tuple(g.embed(spec.n, offset) for g in candidate.generators))
    return replace(
        candidate,
        n=spec.n,
        lx=spec.embed_state(index, candidate.lx),
        projector=candidate.projector.embed(spec.n, offset),
        mixer=candidate.mixer.embed(spec.n, offset),
        edges=tuple(edges),
        generators=generators,
    )


def tensor_plans(plans: Sequence[MixerPlan], spec: ProductSpec) -> MixerPlan:
    """H_M = Σ_i H_i with each factor mixer acting on its own block."""
    if len(plans) != len(spec):
        raise LayoutMismatchError(f"{len(plans)} plans for {len(spec)} factors")
    for index, (plan, factor) in enumerate(zip(plans, spec.factors)):
        if plan.n != factor.n or set(plan.feasible.states) != set(factor.states):
            raise LayoutMismatchError(f"plan {index} was not built for factor {index}")
    if len(plans) == 1:
        return plans[0]
    candidates = tuple(
        _embed_candidate(candidate, spec, index)
        for index, plan in enumerate(plans)
        for candidate in plan.candidates
    )
    plan = MixerPlan(spec.feasible(), candidates)
    logger.info(f"Composed {len(plans)} factor plans: {len(candidates)} candidates, cost {plan.total_cost}")
    return plan


def product_plan(spec: ProductSpec, options: Optional[SynthesisOptions] = None) -> MixerPlan:
    """Synthesize each factor (in parallel when n_jobs > 1) and compose."""
    options = options or SynthesisOptions()
    if options.n_jobs == 1 or len(spec) < 2:
        plans = [synthesize(factor, options) for factor in spec.factors]
    else:
        plans = Parallel(n_jobs=options.n_jobs)(delayed(synthesize)(factor, options) for factor in spec.factors)
    return tensor_plans(plans, spec)


# k-hot families

def khot_plan(n: int, k: int, options: Optional[SynthesisOptions] = None) -> MixerPlan:
    return synthesize(FeasibleSet.k_hot(n, k), options)


def xy_candidate(b: FeasibleSet, i: int, j: int) -> MixerCandidate:
    """X_iX_j⟨-Z_iZ_j⟩ = (X_iX_j + Y_iY_j)/2 on the given set."""
    n = b.n
    mask = (1 << (n - i)) | (1 << (n - j))
    generators = GeneratorSet(n, (PauliString.z_type(mask, n, -1),))
    return candidate_from_projector(
        b, mask, expand_projector(generators), Provenance.SUBGROUP, CandidateKind.XY, generators=generators
    )


def single_x_candidates(b: FeasibleSet, qubit: int) -> List[MixerCandidate]:
    """Restricted candidates for X_qubit, marked with the weight pairs they bridge."""
    graph = graph_for_mask(b, 1 << (b.n - qubit))
    if not graph.edges:
        return []
    candidates = []
    for candidate in graph_candidates(b, graph, restrict=True, max_edge_candidates=len(graph.edges)):
        if not candidate.edges:
            continue
        bridges = sorted({tuple(sorted((popcount(x), popcount(y)))) for x, y in candidate.edges})
        candidates.append(replace(candidate, kind=CandidateKind.SINGLE_X, bridges=tuple(bridges)))
    return candidates


def _x_mixer(b: FeasibleSet) -> MixerPlan:
    identity = PauliSum.identity(b.n)
    return MixerPlan(b, tuple(
        candidate_from_projector(b, 1 << (b.n - q), identity, Provenance.UNRESTRICTED, CandidateKind.SINGLE_X)
        for q in range(1, b.n + 1)
    ))


def multi_k_hot_plan(n: int, k1: int, k2: int, options: Optional[SynthesisOptions] = None) -> MixerPlan:
    """
    Mixer for B_{k1,k2} (Hamming weight in [k1, k2]).

    The XY chain X_iX_{i+1}⟨-Z_iZ_{i+1}⟩ connects each weight class. When
    k1 < k2 the cheapest single restricted X_i candidate that connects the
    whole set is added (lowest i on ties); if none connects alone, the
    single-X pool is selected optimally on top of the chain.
    """
    b = FeasibleSet.weight_range(n, k1, k2)
    if len(b) < 2:
        raise FeasibleSetError(f"B_{{{k1},{k2}}} on {n} qubits has fewer than two states")
    if (k1, k2) == (0, n):
        logger.info(f"B_{{0,{n}}} is the full space; using the X-mixer")
        return _x_mixer(b)

    chain = [c for c in (xy_candidate(b, i, i + 1) for i in range(1, n)) if c.edges]
    if k1 == k2:
        return MixerPlan(b, tuple(chain))

    pool = [c for q in range(1, n + 1) for c in single_x_candidates(b, q)]
    connecting = [c for c in pool if is_connected(b, [e.edges for e in chain] + [c.edges])]
    if connecting:
        best = min(connecting, key=lambda c: (c.cost, -c.lx, c.edge_key()))
        plan = MixerPlan(b, tuple(chain) + (best,))
    else:
        options = options or SynthesisOptions()
        plan = select_optimal(pool, b, options.selection, options.exact_limit, required=chain)
    bridged = sorted({pair for c in plan.candidates for pair in c.bridges})
    logger.info(f"B_{{{k1},{k2}}} on {n} qubits: cost {plan.total_cost}, weight bridges {bridged}")
    return plan


def bridged_weights(plan: MixerPlan) -> Dict[Tuple[int, int], List[int]]:
    """Weight pair -> indices of plan candidates bridging it."""
    result: Dict[Tuple[int, int], List[int]] = {}
    for index, candidate in enumerate(plan.candidates):
        for pair in candidate.bridges:
            result.setdefault(pair, []).append(index)
    return result
