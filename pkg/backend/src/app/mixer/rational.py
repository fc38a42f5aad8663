"""
Exact rational linear algebra (fractions.Fraction).

Small dense helpers for kernel computations on sign matrices: reduced row
echelon form, rank and nullspace bases. Entries are never converted to
floats.
"""

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[Fraction]]


def to_fraction_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    return [[Fraction(int(value)) for value in row] for row in rows]


def rref(matrix: Matrix) -> Tuple[Matrix, List[int]]:
    """Return (reduced row echelon form, pivot columns); input is not modified."""
    work = [list(row) for row in matrix]
    if not work:
        return work, []
    num_rows, num_cols = len(work), len(work[0])
    pivots: List[int] = []
    i = 0
    for j in range(num_cols):
        if i >= num_rows:
            break
        pivot_row = next((r for r in range(i, num_rows) if work[r][j] != 0), None)
        if pivot_row is None:
            continue
        work[i], work[pivot_row] = work[pivot_row], work[i]
        pivot = work[i][j]
        work[i] = [x / pivot for x in work[i]]
        for r in range(num_rows):
            if r != i and work[r][j] != 0:
                factor = work[r][j]
                work[r] = [y - factor * x for x, y in zip(work[i], work[r])]
        pivots.append(j)
        i += 1
    return work, pivots


def rank(matrix: Matrix) -> int:
    return len(rref(matrix)[1])


def nullspace(matrix: Matrix, num_cols: int) -> List[List[Fraction]]:
    """Basis of {v : matrix·v = 0}, one vector per free column."""
    if not matrix:
        return [[Fraction(int(i == j)) for i in range(num_cols)] for j in range(num_cols)]
    reduced, pivots = rref(matrix)
    free_cols = [j for j in range(num_cols) if j not in pivots]
    basis = []
    for free in free_cols:
        vector = [Fraction(0)] * num_cols
        vector[free] = Fraction(1)
        for row, pivot in enumerate(pivots):
            vector[pivot] = -reduced[row][free]
        basis.append(vector)
    return basis


def kernel_vector_with_nonzero_sum(matrix: Matrix, num_cols: int) -> Optional[List[Fraction]]:
    """
    A kernel vector whose entries do not sum to zero, or None.

    The sum is linear on the kernel, so checking the basis suffices.
    """
    for vector in nullspace(matrix, num_cols):
        if sum(vector) != 0:
            return vector
    return None


def admits_nonzero_sum_kernel(matrix: Matrix, num_cols: int) -> bool:
    """rank([A; 1ᵀ]) > rank(A)."""
    augmented = [list(row) for row in matrix] + [[Fraction(1)] * num_cols]
    return rank(augmented) > rank(matrix)
