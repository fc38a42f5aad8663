"""
Diagonal Stabilizer Groups

Minimal generating sets of signed Z-type stabilizer groups whose code space
is the span of an X-type orbit of basis states:
- stabilizer_of_state: the n single-qubit generators fixing one basis state
- extend_by_error: merge the code space with its image under a detectable
  X-type error (fixed lowest-index pivot pairing)
- minimal_generators: fold a list of errors into the generating set
- group_elements / expand_projector: Gray-code enumeration of the group and
  the uniform group sum (1/2^l) Σ g, the projector onto the code space
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, List, Optional, Sequence, Union

from app.core.config import settings
from app.core.exceptions import DimensionMismatchError, EnumerationLimitError, InvalidPauliError
from app.mixer import gf2
from app.mixer.pauli import (
    BasisState,
    PauliString,
    PauliSum,
    as_state_int,
    commutes,
    eigenvalue_on_basis,
    multiply,
)
from app.mixer.subspace import Orbit

logger = logging.getLogger(__name__)


def _group_vector(p: PauliString) -> int:
    # z mask shifted up, sign in bit 0: products of diagonal strings XOR both
    return (p.z_mask << 1) | (p.phase_exp >> 1)


@dataclass(frozen=True)
class GeneratorSet:
    """Independent, Hermitian, diagonal generators of a stabilizer group."""

    n: int
    generators: tuple

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if g.n != self.n:
                raise DimensionMismatchError(self.n, g.n)
            if not g.is_diagonal or not g.is_hermitian:
                raise InvalidPauliError(f"generator {g} must be a signed Z-type string")
        if not gf2.is_independent([g.z_mask for g in self.generators]):
            raise InvalidPauliError("generators are not independent")

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self) -> Iterator[PauliString]:
        return iter(self.generators)

    def __getitem__(self, index: int) -> PauliString:
        return self.generators[index]

    def __str__(self) -> str:
        return "⟨" + ", ".join(str(g) for g in self.generators) + "⟩"

    @classmethod
    def from_labels(cls, labels: Sequence[str]) -> "GeneratorSet":
        paulis = [PauliString.from_label(label) for label in labels]
        if not paulis:
            raise InvalidPauliError("from_labels needs at least one label to fix n")
        return cls(paulis[0].n, tuple(paulis))

    def canonical_form(self) -> List[int]:
        return gf2.reduce_basis(_group_vector(g) for g in self.generators)

    def equivalent_to(self, other: "GeneratorSet") -> bool:
        """Group equality (generating sets are not unique)."""
        return self.n == other.n and self.canonical_form() == other.canonical_form()

    def contains(self, p: PauliString) -> bool:
        if p.n != self.n or not p.is_diagonal or not p.is_hermitian:
            return False
        return gf2.reduce_vector(_group_vector(p), self.canonical_form()) == 0

    def stabilizes(self, z: BasisState) -> bool:
        return all(eigenvalue_on_basis(g, z) == 1 for g in self.generators)

    def code_space(self, states: Iterable[int]) -> List[int]:
        return [s for s in states if self.stabilizes(s)]


def stabilizer_of_state(z: BasisState, n: Optional[int] = None) -> GeneratorSet:
    """Generators (-1)^{z_i} Z_i, i = 1..n."""
    if n is None:
        if not isinstance(z, str):
            raise DimensionMismatchError(0, 0, "qubit count (pass n for integer states)")
        n = len(z)
    state = as_state_int(z, n)
    generators = tuple(
        PauliString.z_type(1 << (n - q), n, -1 if state >> (n - q) & 1 else 1)
        for q in range(1, n + 1)
    )
    return GeneratorSet(n, generators)


def extend_by_error(g: GeneratorSet, e: PauliString) -> GeneratorSet:
    """Stabilizer of C(S) ⊕ E·C(S) for an X-type error E."""
    if e.n != g.n:
        raise DimensionMismatchError(g.n, e.n)
    if not e.is_x_type:
        raise InvalidPauliError(f"error {e} must be X-type")
    anticommuting = [i for i, gen in enumerate(g.generators) if not commutes(e, gen)]
    if not anticommuting:
        raise InvalidPauliError(f"{e} commutes with every generator; it is not a detectable error")
    pivot = anticommuting[0]
    result = []
    for i, gen in enumerate(g.generators):
        if i not in anticommuting:
            result.append(gen)
        elif i != pivot:
            result.append(multiply(g.generators[pivot], gen))
    return GeneratorSet(g.n, tuple(result))


def minimal_generators(
    z: BasisState,
    errors: Sequence[Union[PauliString, int]],
    n: Optional[int] = None,
) -> GeneratorSet:
    """n - k generators whose code space is span(⟨E_1..E_k⟩|z⟩)."""
    g = stabilizer_of_state(z, n)
    for error in errors:
        if isinstance(error, int):
            error = PauliString.x_type(error, g.n)
        g = extend_by_error(g, error)
    return g


def orbit_stabilizer(orbit: Orbit) -> GeneratorSet:
    return minimal_generators(orbit.base, orbit.generator_paulis(), orbit.n)


def group_elements(g: GeneratorSet, limit: Optional[int] = None) -> List[PauliString]:
    """All 2^l signed elements in Gray-code subset order, identity first."""
    limit = settings.group_enumeration_limit if limit is None else limit
    if len(g) > limit:
        raise EnumerationLimitError(len(g), limit)
    current = PauliString.identity(g.n)
    elements = [current]
    for i in range(1, 1 << len(g)):
        flipped = (i & -i).bit_length() - 1
        current = multiply(current, g.generators[flipped])
        elements.append(current)
    return elements


def expand_projector(g: GeneratorSet) -> PauliSum:
    """(1/2^l) Σ_{s ∈ S} s."""
    weight = Fraction(1, 1 << len(g))
    return PauliSum.from_terms(g.n, ((s, weight) for s in group_elements(g)))


def subgroup_from_exponents(g: GeneratorSet, exponent_basis: Sequence[int]) -> GeneratorSet:
    """Subgroup generated by products Π_{j ∈ w} g_j for each exponent vector w."""
    products = []
    for w in exponent_basis:
        element = PauliString.identity(g.n)
        for j, gen in enumerate(g.generators):
            if w >> j & 1:
                element = multiply(element, gen)
        products.append(element)
    return GeneratorSet(g.n, tuple(products))
