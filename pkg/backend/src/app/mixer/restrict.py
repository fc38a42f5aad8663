"""
Projector Restriction to the Feasible Subspace

A projector only has to act correctly on span(B): identity on the target
orbit V and zero on the feasible states outside V_lX. Two searches trade
Pauli terms for that weaker requirement:
- Kernel method: sparse rational v with A·v = 0, Σv ≠ 0 over the full group
  (A_ij = eigenvalue of group element j on outside state i)
- Subgroup method: smallest subgroup H whose uniform sum annihilates every
  outside state (M_ij = eigenvalue of generator j on outside state i)
best_restriction runs both next to the unrestricted expansion and keeps the
cheapest final mixer term lX·P.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import RestrictionError
from app.core.mixer_constants import Provenance
from app.mixer import gf2
from app.mixer.pauli import PauliString, PauliSum, cost, eigenvalue_on_basis, multiply, term_cost
from app.mixer.rational import kernel_vector_with_nonzero_sum, to_fraction_matrix
from app.mixer.stabilizer import GeneratorSet, expand_projector, group_elements, subgroup_from_exponents
from app.mixer.subspace import FeasibleSet

logger = logging.getLogger(__name__)

KernelVector = Dict[int, Fraction]


@dataclass(frozen=True)
class SignMatrix:
    """±1 eigenvalues of diagonal columns on outside basis states."""

    rows: Tuple[int, ...]
    columns: Tuple[PauliString, ...]
    entries: np.ndarray

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.rows), len(self.columns))

    def minus_patterns(self) -> List[int]:
        """Per row, the bitmask (bit j = column j) of -1 entries."""
        return [
            sum(1 << j for j in range(len(self.columns)) if self.entries[i, j] < 0)
            for i in range(len(self.rows))
        ]


def _sign_entries(columns: Sequence[PauliString], rows: Sequence[int]) -> np.ndarray:
    entries = np.empty((len(rows), len(columns)), dtype=np.int8)
    for i, state in enumerate(rows):
        for j, column in enumerate(columns):
            entries[i, j] = eigenvalue_on_basis(column, state)
    return entries


def build_A(elements: Sequence[PauliString], outside: Sequence[int], require_balanced: bool = True) -> SignMatrix:
    """Sign matrix of a full stabilizer group on the outside states."""
    entries = _sign_entries(elements, outside)
    for i, state in enumerate(outside):
        if np.all(entries[i] == 1):
            raise RestrictionError(f"outside state {state} lies in the code space")
        if require_balanced and int(entries[i].sum()) != 0:
            raise RestrictionError(f"row for state {state} is not balanced; columns are not a full group")
    return SignMatrix(tuple(outside), tuple(elements), entries)


def build_M(g: GeneratorSet, outside: Sequence[int]) -> SignMatrix:
    """Sign matrix of the minimal generators on the outside states."""
    entries = _sign_entries(g.generators, outside)
    for i, state in enumerate(outside):
        if np.all(entries[i] == 1):
            raise RestrictionError(f"outside state {state} lies in the code space; no -1 entry in its row")
    return SignMatrix(tuple(outside), tuple(g.generators), entries)


@dataclass(frozen=True)
class RestrictedProjector:
    """Projector agreeing with Π_V on span(B), with its provenance."""

    projector: PauliSum
    provenance: str
    cost: int
    mixer: Optional[PauliSum] = None
    coefficients: Tuple[Tuple[PauliString, Fraction], ...] = ()
    subgroup: Optional[GeneratorSet] = None

    def sort_key(self) -> Tuple[int, int, int]:
        return (self.cost, len(self.projector), Provenance.ORDER.index(self.provenance))


def _mixer_cost(lx: Optional[PauliString], projector: PauliSum) -> Tuple[Optional[PauliSum], int]:
    if lx is None:
        return None, cost(projector)
    mixer = projector.left_multiply(lx)
    return mixer, cost(mixer)


def _solve_support(entries: np.ndarray, support: Sequence[int]) -> Optional[KernelVector]:
    """Kernel vector with nonzero sum restricted to the given columns."""
    sub = entries[:, list(support)]
    if sub.shape[0]:
        sub = np.unique(sub, axis=0)
    vector = kernel_vector_with_nonzero_sum(to_fraction_matrix(sub.tolist()), len(support))
    if vector is None:
        return None
    return {j: value for j, value in zip(support, vector) if value != 0}


def _kernel_projector(columns: Sequence[PauliString], vector: KernelVector, n: int) -> PauliSum:
    total = sum(vector.values(), Fraction(0))
    return PauliSum.from_terms(n, ((columns[j], value / total) for j, value in sorted(vector.items())))


def kernel_restrict(
    a: SignMatrix,
    term_costs: Sequence[int],
    lx: Optional[PauliString] = None,
    upper_bound: Optional[int] = None,
    admissible: Optional[Callable[[KernelVector], bool]] = None,
    max_support: Optional[int] = None,
    exhaustive_limit: Optional[int] = None,
) -> RestrictedProjector:
    """
    Sparse kernel vector of A with nonzero sum, cheapest by column cost.

    Supports of up to max_support columns are searched exhaustively
    (branch-and-bound, columns ordered by cost) when A has at most
    exhaustive_limit columns; wider matrices fall back to greedy column
    elimination starting from v = 1.
    """
    max_support = settings.kernel_max_support if max_support is None else max_support
    exhaustive_limit = settings.kernel_exhaustive_limit if exhaustive_limit is None else exhaustive_limit
    columns = a.columns
    if not columns:
        raise RestrictionError("kernel restriction needs at least one column")
    n = columns[0].n
    admissible = admissible or (lambda vector: True)

    def finish(vector: KernelVector) -> RestrictedProjector:
        projector = _kernel_projector(columns, vector, n)
        mixer, mixer_cost = _mixer_cost(lx, projector)
        return RestrictedProjector(
            projector=projector,
            provenance=Provenance.KERNEL,
            cost=mixer_cost,
            mixer=mixer,
            coefficients=tuple((columns[j], v) for j, v in sorted(vector.items())),
        )

    if a.shape[0] == 0:
        identity = next((j for j, c in enumerate(columns) if c.is_identity), None)
        if identity is not None:
            return finish({identity: Fraction(1)})

    ones = {j: Fraction(1) for j in range(len(columns))}
    if np.any(a.entries.sum(axis=1) != 0):
        raise RestrictionError("v = 1 is not in the kernel; columns are not a full group")
    best_vector, best_cost = ones, sum(term_costs)

    if len(columns) <= exhaustive_limit:
        order = sorted(range(len(columns)), key=lambda j: (term_costs[j], j))
        bound = best_cost if upper_bound is None else min(best_cost, upper_bound)

        def search(start: int, chosen: List[int], partial: int) -> None:
            nonlocal best_vector, best_cost, bound
            for position in range(start, len(order)):
                column = order[position]
                total = partial + term_costs[column]
                if total >= bound:
                    break
                support = chosen + [column]
                vector = _solve_support(a.entries, sorted(support))
                if vector is not None and admissible(vector):
                    actual = sum(term_costs[j] for j in vector)
                    if actual < bound:
                        best_vector, best_cost, bound = vector, actual, actual
                    continue
                if len(support) < max_support:
                    search(position + 1, support, total)

        search(0, [], 0)
    else:
        logger.debug(f"Kernel search over {len(columns)} columns: greedy column elimination")
        current = dict(ones)
        for column in sorted(range(len(columns)), key=lambda j: (-term_costs[j], j)):
            if column not in current or len(current) == 1:
                continue
            remaining = sorted(j for j in current if j != column)
            vector = _solve_support(a.entries, remaining)
            if vector is not None and admissible(vector):
                current = vector
        current_cost = sum(term_costs[j] for j in current)
        if current_cost < best_cost:
            best_vector, best_cost = current, current_cost

    return finish(best_vector)


def subgroup_restrict(
    m: SignMatrix,
    g: GeneratorSet,
    lx: Optional[PauliString] = None,
    exhaustive_limit: Optional[int] = None,
    budget: Optional[int] = None,
) -> RestrictedProjector:
    """
    Smallest subgroup H ≤ S whose uniform sum annihilates every outside row.

    Row i is annihilated iff some h ∈ H has eigenvalue -1 on it, i.e. the
    exponent vector of h has odd overlap with the row's -1 pattern.
    """
    exhaustive_limit = settings.subgroup_exhaustive_limit if exhaustive_limit is None else exhaustive_limit
    budget = settings.subgroup_search_budget if budget is None else budget

    def result(subgroup: GeneratorSet) -> RestrictedProjector:
        projector = expand_projector(subgroup)
        mixer, mixer_cost = _mixer_cost(lx, projector)
        return RestrictedProjector(
            projector=projector,
            provenance=Provenance.SUBGROUP,
            cost=mixer_cost,
            mixer=mixer,
            subgroup=subgroup,
        )

    patterns = m.minus_patterns()
    if not patterns:
        return result(GeneratorSet(g.n, ()))
    l = len(g)
    if l > exhaustive_limit:
        logger.warning(f"Subgroup search skipped for {l} generators (limit {exhaustive_limit})")
        return result(g)

    for dim in range(1, l + 1):
        best: Optional[RestrictedProjector] = None
        examined = 0
        for basis in gf2.enumerate_subspaces(l, dim):
            examined += 1
            if examined > budget:
                logger.warning(f"Subgroup search budget {budget} exhausted at dimension {dim}")
                break
            if all(any(gf2.odd_overlap(w, r) for w in basis) for r in patterns):
                candidate = result(subgroup_from_exponents(g, basis))
                if best is None or candidate.cost < best.cost:
                    best = candidate
        if best is not None:
            return best
    return result(g)


def projector_values(projector: PauliSum, states: Sequence[int]) -> List[Fraction]:
    """<x|P|x> for diagonal P on each state."""
    return [projector.diagonal_value(s) for s in states]


def best_restriction(
    lx: PauliString,
    generators: GeneratorSet,
    b: FeasibleSet,
    v_lx: Sequence[int],
    target: Optional[Sequence[int]] = None,
    restrict: bool = True,
    strict: bool = False,
    kernel: bool = True,
) -> RestrictedProjector:
    """
    Cheapest of {unrestricted, subgroup, kernel} for the mixer term lX·P.

    States of V_lX outside the target orbit must receive projector value
    0 or 1, so that lX·P still maps span(B) into itself. With strict=True
    they must receive 0, so the term connects the target states only.
    kernel=False skips the rational kernel search.
    """
    unrestricted_projector = expand_projector(generators)
    mixer, mixer_cost = _mixer_cost(lx, unrestricted_projector)
    unrestricted = RestrictedProjector(
        projector=unrestricted_projector,
        provenance=Provenance.UNRESTRICTED,
        cost=mixer_cost,
        mixer=mixer,
        subgroup=generators,
    )
    if not restrict:
        return unrestricted

    v_lx_set = set(v_lx)
    target_set = set(target) if target is not None else set(generators.code_space(v_lx))
    if strict:
        outside = [s for s in b.states if s not in target_set]
        others: List[int] = []
    else:
        outside = [s for s in b.states if s not in v_lx_set]
        others = [s for s in v_lx if s not in target_set]

    results = [unrestricted]
    results.append(subgroup_restrict(build_M(generators, outside), generators, lx))

    if kernel and (1 << len(generators)) <= settings.kernel_max_columns:
        elements = group_elements(generators)
        a = build_A(elements, outside)
        term_costs = [term_cost(multiply(lx, s)) for s in elements]
        other_entries = _sign_entries(elements, others)

        def admissible(vector: KernelVector) -> bool:
            if not others:
                return True
            total = sum(vector.values(), Fraction(0))
            for row in other_entries:
                value = sum((v * int(row[j]) for j, v in vector.items()), Fraction(0)) / total
                if value not in (0, 1):
                    return False
            return True

        incumbent = min(r.cost for r in results)
        results.append(kernel_restrict(a, term_costs, lx, upper_bound=incumbent, admissible=admissible))

    best = min(results, key=RestrictedProjector.sort_key)
    logger.debug(
        f"lX={lx.body()}: unrestricted {unrestricted.cost}, "
        f"best {best.cost} ({best.provenance})"
    )
    return best
