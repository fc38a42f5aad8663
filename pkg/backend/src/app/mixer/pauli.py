"""
Pauli String Algebra

Exact signed Pauli strings in symplectic bitmask form and real-weighted
Pauli sums with:
- Group multiplication with exact phase tracking (Y = iXZ)
- Commutation, weight and diagonal eigenvalue evaluation
- Lossless text rendering/parsing ("-ZZIIZ", "+XYI", "+iZ")
- Dense and sparse matrix construction plus vectorized statevector action
- The CX cost function 2 * (weight - 1) summed over non-identity terms

Qubit 1 is the leftmost character of a printed string. Qubit i lives in bit
(n - i) of the masks, so a bitstring such as "10010" and its integer value
int("10010", 2) index the same basis state.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Tuple, Union

import numpy as np
from scipy import sparse

from app.core.exceptions import DimensionMismatchError, FeasibleSetError, InvalidPauliError

logger = logging.getLogger(__name__)

Coefficient = Union[int, Fraction]
BasisState = Union[str, int]

# (x bit, z bit) -> character
_CHAR_OF = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS_OF = {v: k for k, v in _CHAR_OF.items()}
_PREFIX_OF = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PHASE_OF_PREFIX = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "−": 2, "-i": 3, "−i": 3}

# Dense matrices above this size are refused
MAX_DENSE_QUBITS = 12


def popcount(value: int) -> int:
    return bin(value).count("1")


def parity(value: int) -> int:
    return popcount(value) & 1


def qubit_bit(qubit: int, n: int) -> int:
    """Bit mask of 1-based qubit index within an n-qubit register."""
    if not 1 <= qubit <= n:
        raise InvalidPauliError(f"qubit index {qubit} outside [1, {n}]")
    return 1 << (n - qubit)


def support(mask: int, n: int) -> List[int]:
    """1-based qubit indices set in mask, ascending."""
    return [q for q in range(1, n + 1) if mask >> (n - q) & 1]


def bits_to_int(bits: str) -> int:
    if not bits or any(c not in "01" for c in bits):
        raise FeasibleSetError(f"invalid bitstring {bits!r}")
    return int(bits, 2)


def int_to_bits(value: int, n: int) -> str:
    if value < 0 or value >> n:
        raise FeasibleSetError(f"state {value} does not fit in {n} bits")
    return format(value, f"0{n}b") if n > 0 else ""


def as_state_int(state: BasisState, n: int) -> int:
    if isinstance(state, str):
        if len(state) != n:
            raise DimensionMismatchError(n, len(state), "bitstring length")
        return bits_to_int(state)
    if state < 0 or state >> n:
        raise DimensionMismatchError(n, int(state).bit_length(), "bitstring length")
    return int(state)


@dataclass(frozen=True)
class PauliString:
    """
    Signed Pauli string i^phase_exp * (sigma_1 ⊗ ... ⊗ sigma_n).

    phase_exp is the display phase: 0 -> "+", 2 -> "-", 1/3 -> "+i"/"-i".
    """

    n: int
    x_mask: int = 0
    z_mask: int = 0
    phase_exp: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise InvalidPauliError(f"negative qubit count {self.n}")
        limit = 1 << self.n
        if not (0 <= self.x_mask < limit and 0 <= self.z_mask < limit):
            raise InvalidPauliError(f"masks exceed {self.n} qubits")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    # Constructors

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n)

    @classmethod
    def x_type(cls, mask: int, n: int) -> "PauliString":
        return cls(n, x_mask=mask)

    @classmethod
    def z_type(cls, mask: int, n: int, sign: int = 1) -> "PauliString":
        if sign not in (1, -1):
            raise InvalidPauliError(f"sign must be +1 or -1, got {sign}")
        return cls(n, z_mask=mask, phase_exp=0 if sign == 1 else 2)

    @classmethod
    def from_label(cls, text: str) -> "PauliString":
        return parse_pauli(text)

    # Properties

    @property
    def y_count(self) -> int:
        return popcount(self.x_mask & self.z_mask)

    @property
    def _xz_phase(self) -> int:
        # exponent of i when written as X^x Z^z
        return (self.phase_exp + self.y_count) % 4

    @property
    def is_hermitian(self) -> bool:
        return self.phase_exp in (0, 2)

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    @property
    def is_diagonal(self) -> bool:
        return self.x_mask == 0

    @property
    def is_x_type(self) -> bool:
        return self.z_mask == 0

    @property
    def sign(self) -> int:
        if not self.is_hermitian:
            raise InvalidPauliError(f"{self} is not Hermitian")
        return 1 if self.phase_exp == 0 else -1

    @property
    def key(self) -> Tuple[int, int]:
        return (self.x_mask, self.z_mask)

    def unsigned(self) -> "PauliString":
        return PauliString(self.n, self.x_mask, self.z_mask, 0)

    def negate(self) -> "PauliString":
        return PauliString(self.n, self.x_mask, self.z_mask, self.phase_exp + 2)

    def embed(self, total_n: int, offset: int) -> "PauliString":
        """Re-index into qubits offset+1 .. offset+n of a total_n register."""
        if offset < 0 or offset + self.n > total_n:
            raise DimensionMismatchError(total_n, offset + self.n, "block end")
        shift = total_n - offset - self.n
        return PauliString(total_n, self.x_mask << shift, self.z_mask << shift, self.phase_exp)

    def body(self) -> str:
        return "".join(
            _CHAR_OF[(self.x_mask >> (self.n - q) & 1, self.z_mask >> (self.n - q) & 1)]
            for q in range(1, self.n + 1)
        )

    def __str__(self) -> str:
        return _PREFIX_OF[self.phase_exp] + self.body()

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    # Matrix views

    def _action(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        dim = 1 << self.n
        cols = np.arange(dim, dtype=np.int64)
        rows = cols ^ self.x_mask
        signs = 1 - 2 * (np.bitwise_count(cols & self.z_mask) & 1).astype(np.int64)
        values = (1j ** self._xz_phase) * signs
        return rows, cols, values

    def to_matrix(self) -> np.ndarray:
        if self.n > MAX_DENSE_QUBITS:
            raise DimensionMismatchError(MAX_DENSE_QUBITS, self.n, "dense matrix qubit count")
        rows, cols, values = self._action()
        matrix = np.zeros((1 << self.n, 1 << self.n), dtype=complex)
        matrix[rows, cols] = values
        return matrix

    def to_sparse(self) -> sparse.csr_matrix:
        rows, cols, values = self._action()
        dim = 1 << self.n
        return sparse.csr_matrix((values, (rows, cols)), shape=(dim, dim))

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        """Return P|psi> for a length-2^n amplitude vector."""
        if amplitudes.shape[0] != 1 << self.n:
            raise DimensionMismatchError(1 << self.n, amplitudes.shape[0], "statevector length")
        rows, _, values = self._action()
        out = np.empty_like(amplitudes, dtype=complex)
        out[rows] = values * amplitudes
        return out


def parse_pauli(text: str) -> PauliString:
    """Parse "[sign]BODY" where BODY is over {I,X,Y,Z} and qubit 1 is leftmost."""
    stripped = text.strip()
    body_start = len(stripped) - len(stripped.lstrip("+-−i"))
    prefix, body = stripped[:body_start], stripped[body_start:]
    if prefix not in _PHASE_OF_PREFIX:
        raise InvalidPauliError(f"invalid phase prefix {prefix!r} in {text!r}")
    if not body or any(c not in _BITS_OF for c in body):
        raise InvalidPauliError(f"invalid Pauli string {text!r}")
    n = len(body)
    x_mask = z_mask = 0
    for q, char in enumerate(body, start=1):
        x_bit, z_bit = _BITS_OF[char]
        x_mask |= x_bit << (n - q)
        z_mask |= z_bit << (n - q)
    return PauliString(n, x_mask, z_mask, _PHASE_OF_PREFIX[prefix])


def _check_same_n(p: PauliString, q: PauliString) -> None:
    if p.n != q.n:
        raise DimensionMismatchError(p.n, q.n)


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Group product p·q with exact phase."""
    _check_same_n(p, q)
    xz_phase = p._xz_phase + q._xz_phase + 2 * popcount(p.z_mask & q.x_mask)
    x_mask = p.x_mask ^ q.x_mask
    z_mask = p.z_mask ^ q.z_mask
    return PauliString(p.n, x_mask, z_mask, xz_phase - popcount(x_mask & z_mask))


def commutes(p: PauliString, q: PauliString) -> bool:
    _check_same_n(p, q)
    return parity(p.x_mask & q.z_mask) == parity(q.x_mask & p.z_mask)


def weight(p: PauliString) -> int:
    return popcount(p.x_mask | p.z_mask)


def eigenvalue_on_basis(p: PauliString, z: BasisState) -> int:
    """Eigenvalue (+1/-1) of a diagonal Hermitian string on basis state |z>."""
    if not p.is_diagonal:
        raise InvalidPauliError(f"{p} is not diagonal")
    state = as_state_int(z, p.n)
    return p.sign * (1 - 2 * parity(p.z_mask & state))


def apply_x_type(p: PauliString, z: BasisState) -> BasisState:
    """Basis state reached by an X-type string; same type (str or int) as z."""
    if not p.is_x_type:
        raise InvalidPauliError(f"{p} is not X-type")
    state = as_state_int(z, p.n) ^ p.x_mask
    return int_to_bits(state, p.n) if isinstance(z, str) else state


class PauliSum:
    """
    Hermitian real-weighted sum of Pauli strings with exact coefficients.

    Each key (x_mask, z_mask) denotes the "+"-signed Hermitian string with
    those masks; signs are folded into the coefficient.
    """

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Dict[Tuple[int, int], Coefficient] = None):
        self.n = n
        self._terms: Dict[Tuple[int, int], Fraction] = {}
        for key, coefficient in (terms or {}).items():
            self._accumulate(key, Fraction(coefficient))

    @classmethod
    def identity(cls, n: int) -> "PauliSum":
        return cls(n, {(0, 0): 1})

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[Tuple[PauliString, Coefficient]]) -> "PauliSum":
        result = cls(n)
        for pauli, coefficient in terms:
            result._add_pauli(pauli, Fraction(coefficient))
        return result

    def _accumulate(self, key: Tuple[int, int], coefficient: Fraction) -> None:
        total = self._terms.get(key, Fraction(0)) + coefficient
        if total == 0:
            self._terms.pop(key, None)
        else:
            self._terms[key] = total

    def _add_pauli(self, pauli: PauliString, coefficient: Fraction) -> None:
        if pauli.n != self.n:
            raise DimensionMismatchError(self.n, pauli.n)
        if not pauli.is_hermitian:
            raise InvalidPauliError(f"non-Hermitian term {pauli} in a Hermitian sum")
        self._accumulate(pauli.key, coefficient * pauli.sign)

    # Views

    def terms(self) -> List[Tuple[PauliString, Fraction]]:
        """(unsigned string, signed coefficient) in ascending (x, z) order."""
        return [(PauliString(self.n, x, z), c) for (x, z), c in sorted(self._terms.items())]

    def signed_terms(self) -> List[Tuple[PauliString, Fraction]]:
        """(signed string, |coefficient|) pairs, the form printed as w·P."""
        return [
            (p if c > 0 else p.negate(), abs(c)) for p, c in self.terms()
        ]

    def coefficient(self, pauli: PauliString) -> Fraction:
        return self._terms.get(pauli.key, Fraction(0)) * pauli.sign

    def keys(self) -> List[Tuple[int, int]]:
        return sorted(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Tuple[PauliString, Fraction]]:
        return iter(self.terms())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.n, tuple(sorted(self._terms.items()))))

    def __repr__(self) -> str:
        return f"PauliSum({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " ".join(f"{c}*{p.body()}" if c < 0 else f"+{c}*{p.body()}" for p, c in self.terms())

    @property
    def is_diagonal(self) -> bool:
        return all(x == 0 for x, _ in self._terms)

    # Arithmetic

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if self.n != other.n:
            raise DimensionMismatchError(self.n, other.n)
        result = PauliSum(self.n, dict(self._terms))
        for key, coefficient in other._terms.items():
            result._accumulate(key, coefficient)
        return result

    def __neg__(self) -> "PauliSum":
        return self.scale(-1)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-other)

    def scale(self, factor: Coefficient) -> "PauliSum":
        factor = Fraction(factor)
        if factor == 0:
            return PauliSum(self.n)
        return PauliSum(self.n, {k: c * factor for k, c in self._terms.items()})

    def add_term(self, pauli: PauliString, coefficient: Coefficient = 1) -> "PauliSum":
        result = PauliSum(self.n, dict(self._terms))
        result._add_pauli(pauli, Fraction(coefficient))
        return result

    def left_multiply(self, pauli: PauliString) -> "PauliSum":
        """pauli · self; every product must stay Hermitian."""
        result = PauliSum(self.n)
        for term, coefficient in self.terms():
            product = multiply(pauli, term)
            if not product.is_hermitian:
                raise InvalidPauliError(f"{pauli} and {term} anticommute; product is not Hermitian")
            result._add_pauli(product, coefficient)
        return result

    def embed(self, total_n: int, offset: int) -> "PauliSum":
        result = PauliSum(total_n)
        for term, coefficient in self.terms():
            result._add_pauli(term.embed(total_n, offset), coefficient)
        return result

    def diagonal_value(self, z: BasisState) -> Fraction:
        """<z|H|z> for a diagonal sum."""
        if not self.is_diagonal:
            raise InvalidPauliError("diagonal_value requires a diagonal sum")
        state = as_state_int(z, self.n)
        return sum(
            (c if not parity(zm & state) else -c for (_, zm), c in self._terms.items()),
            Fraction(0),
        )

    # Matrix views

    def to_matrix(self) -> np.ndarray:
        matrix = np.zeros((1 << self.n, 1 << self.n), dtype=complex)
        for term, coefficient in self.terms():
            matrix += float(coefficient) * term.to_matrix()
        return matrix

    def to_sparse(self) -> sparse.csr_matrix:
        dim = 1 << self.n
        matrix = sparse.csr_matrix((dim, dim), dtype=complex)
        for term, coefficient in self.terms():
            matrix = matrix + float(coefficient) * term.to_sparse()
        return matrix

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        out = np.zeros_like(amplitudes, dtype=complex)
        for term, coefficient in self.terms():
            out += float(coefficient) * term.apply(amplitudes)
        return out


def term_cost(p: PauliString) -> int:
    """CX count of exp(-i t P): 2 * (weight - 1), zero for the identity."""
    w = weight(p)
    return 2 * (w - 1) if w > 1 else 0


def cost(h: PauliSum) -> int:
    """Total CX cost of a Pauli sum."""
    return sum(term_cost(p) for p, c in h.terms() if c != 0)


def all_commute(h: PauliSum) -> bool:
    terms = [p for p, _ in h.terms()]
    return all(commutes(a, b) for i, a in enumerate(terms) for b in terms[i + 1:])
