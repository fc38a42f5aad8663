"""
GF(2) linear algebra on integer bit vectors.

Vectors are Python ints; bit j is coordinate j. Used for stabilizer group
canonical forms, generator independence and subgroup enumeration.
"""

from itertools import combinations, product
from typing import Iterable, Iterator, List

from app.mixer.pauli import parity


def reduce_basis(vectors: Iterable[int]) -> List[int]:
    """Reduced echelon basis (leading bit = pivot), sorted by descending pivot."""
    basis: List[int] = []
    for vector in vectors:
        for row in basis:
            if vector & (1 << (row.bit_length() - 1)):
                vector ^= row
        if vector == 0:
            continue
        pivot = 1 << (vector.bit_length() - 1)
        basis = [row ^ vector if row & pivot else row for row in basis]
        basis.append(vector)
        basis.sort(reverse=True)
    return basis


def rank(vectors: Iterable[int]) -> int:
    return len(reduce_basis(vectors))


def reduce_vector(vector: int, basis: List[int]) -> int:
    """Remainder of vector against an echelon basis from reduce_basis."""
    for row in basis:
        if vector & (1 << (row.bit_length() - 1)):
            vector ^= row
    return vector


def in_span(vector: int, vectors: Iterable[int]) -> bool:
    return reduce_vector(vector, reduce_basis(vectors)) == 0


def is_independent(vectors: List[int]) -> bool:
    return rank(vectors) == len(vectors)


def span(vectors: List[int]) -> List[int]:
    """All 2^k combinations in Gray-code order, starting at 0."""
    elements = [0]
    current = 0
    for i in range(1, 1 << len(vectors)):
        flipped = (i & -i).bit_length() - 1
        current ^= vectors[flipped]
        elements.append(current)
    return elements


def odd_overlap(a: int, b: int) -> bool:
    return parity(a & b) == 1


def enumerate_subspaces(ambient: int, dim: int) -> Iterator[List[int]]:
    """
    Yield every dim-dimensional subspace of GF(2)^ambient exactly once, as
    its reduced echelon basis.

    Pivot sets are visited in lexicographic order of ascending pivot
    positions; within a pivot set, free entries count upward.
    """
    if dim == 0:
        yield []
        return
    for pivots in combinations(range(ambient), dim):
        pivot_set = set(pivots)
        # free coordinates of row i: non-pivot positions below its pivot
        free = [[c for c in range(p) if c not in pivot_set] for p in pivots]
        slots = [(i, c) for i, cols in enumerate(free) for c in cols]
        for bits in product((0, 1), repeat=len(slots)):
            rows = [1 << p for p in pivots]
            for (i, c), bit in zip(slots, bits):
                if bit:
                    rows[i] |= 1 << c
            yield rows
