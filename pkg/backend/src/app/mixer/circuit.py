"""
Gate-Level Circuits for Pauli Exponentials

exp(-i t w P) is emitted as basis change (H for X, Sdg·H for Y), a CX ladder
from the lowest to the highest support qubit, RZ(2tw) on the highest
support qubit, and the mirrored ladder and basis restore. The CX count of
a term is 2·(weight - 1), which is the CX cost used everywhere else.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import DimensionMismatchError, InvalidPauliError, PlanFormatError
from app.mixer.pauli import PauliString, support

logger = logging.getLogger(__name__)

GATE_NAMES = ("h", "s", "sdg", "cx", "rz")
MAX_UNITARY_QUBITS = 10

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_S = np.array([[1, 0], [0, 1j]], dtype=complex)
_SDG = np.array([[1, 0], [0, -1j]], dtype=complex)


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: Tuple[int, ...]
    angle: Optional[float] = None

    def __post_init__(self):
        if self.name not in GATE_NAMES:
            raise PlanFormatError(f"unknown gate {self.name!r}")
        expected = 2 if self.name == "cx" else 1
        if len(self.qubits) != expected:
            raise PlanFormatError(f"gate {self.name} takes {expected} qubit(s), got {len(self.qubits)}")
        if (self.name == "rz") != (self.angle is not None):
            raise PlanFormatError(f"only rz carries an angle (gate {self.name})")
        if self.name == "cx" and self.qubits[0] == self.qubits[1]:
            raise PlanFormatError("cx control and target must differ")

    def to_text(self) -> str:
        qubits = " ".join(str(q) for q in self.qubits)
        if self.name == "rz":
            return f"rz {settings.float_format % self.angle} {qubits}"
        return f"{self.name} {qubits}"

    def matrix(self) -> np.ndarray:
        """2x2 matrix of a single-qubit gate."""
        if self.name == "h":
            return _H
        if self.name == "s":
            return _S
        if self.name == "sdg":
            return _SDG
        if self.name == "rz":
            half = self.angle / 2
            return np.array([[np.exp(-1j * half), 0], [0, np.exp(1j * half)]], dtype=complex)
        raise PlanFormatError("cx has no single-qubit matrix")


@dataclass
class GateList:
    """Gates on qubits 1..n in execution order."""

    n: int
    gates: List[Gate] = field(default_factory=list)

    def __post_init__(self):
        for gate in self.gates:
            self._check(gate)

    def _check(self, gate: Gate) -> None:
        for q in gate.qubits:
            if not 1 <= q <= self.n:
                raise DimensionMismatchError(self.n, q, "qubit index")

    def append(self, gate: Gate) -> None:
        self._check(gate)
        self.gates.append(gate)

    def extend(self, other: "GateList") -> None:
        if other.n != self.n:
            raise DimensionMismatchError(self.n, other.n)
        self.gates.extend(other.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def to_text(self) -> str:
        return "\n".join([f"qubits {self.n}"] + [g.to_text() for g in self.gates]) + "\n"


def parse_circuit_text(text: str) -> GateList:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines or not lines[0].startswith("qubits "):
        raise PlanFormatError("circuit text must start with 'qubits <n>'")
    try:
        gl = GateList(int(lines[0].split()[1]))
        for line in lines[1:]:
            fields = line.split()
            if fields[0] == "rz":
                gl.append(Gate("rz", (int(fields[2]),), float(fields[1])))
            else:
                gl.append(Gate(fields[0], tuple(int(q) for q in fields[1:])))
    except (IndexError, ValueError) as e:
        raise PlanFormatError(f"malformed circuit line: {e}") from e
    return gl


def term_circuit(p: PauliString, coefficient: float, t: float) -> GateList:
    """Gates for exp(-i t w P); the sign of P is folded into the angle."""
    if not p.is_hermitian:
        raise InvalidPauliError(f"{p} is not Hermitian")
    gl = GateList(p.n)
    if p.is_identity:
        logger.warning("Identity term contributes only a global phase; no gates emitted")
        return gl
    qubits = support(p.x_mask | p.z_mask, p.n)
    letters = p.body()
    for q in qubits:
        if letters[q - 1] == "X":
            gl.append(Gate("h", (q,)))
        elif letters[q - 1] == "Y":
            gl.append(Gate("sdg", (q,)))
            gl.append(Gate("h", (q,)))
    ladder = [Gate("cx", (a, b)) for a, b in zip(qubits, qubits[1:])]
    for gate in ladder:
        gl.append(gate)
    gl.append(Gate("rz", (qubits[-1],), 2 * t * float(coefficient) * p.sign))
    for gate in reversed(ladder):
        gl.append(gate)
    for q in qubits:
        if letters[q - 1] == "X":
            gl.append(Gate("h", (q,)))
        elif letters[q - 1] == "Y":
            gl.append(Gate("h", (q,)))
            gl.append(Gate("s", (q,)))
    return gl


def plan_circuit(plan, beta: float) -> GateList:
    """Concatenated term circuits, candidates in plan order."""
    gl = GateList(plan.n)
    for candidate in plan.candidates:
        for term, coefficient in candidate.mixer.terms():
            gl.extend(term_circuit(term, coefficient, beta))
    return gl


def cx_count(gl: GateList) -> int:
    return sum(1 for gate in gl if gate.name == "cx")


def apply_gates(amplitudes: np.ndarray, gl: GateList) -> np.ndarray:
    """Apply gates to a statevector (or to each column of a matrix)."""
    dim = 1 << gl.n
    if amplitudes.shape[0] != dim:
        raise DimensionMismatchError(dim, amplitudes.shape[0], "statevector length")
    out = np.array(amplitudes, dtype=complex)
    indices = np.arange(dim)
    for gate in gl:
        if gate.name == "cx":
            control = 1 << (gl.n - gate.qubits[0])
            target = 1 << (gl.n - gate.qubits[1])
            low = indices[((indices & control) != 0) & ((indices & target) == 0)]
            high = low | target
            out[low], out[high] = out[high].copy(), out[low].copy()
            continue
        bit = 1 << (gl.n - gate.qubits[0])
        low = indices[(indices & bit) == 0]
        high = low | bit
        u = gate.matrix()
        a0, a1 = out[low].copy(), out[high].copy()
        out[low] = u[0, 0] * a0 + u[0, 1] * a1
        out[high] = u[1, 0] * a0 + u[1, 1] * a1
    return out


def circuit_unitary(gl: GateList) -> np.ndarray:
    """Dense unitary of a gate list (n <= 10)."""
    if gl.n > MAX_UNITARY_QUBITS:
        raise DimensionMismatchError(MAX_UNITARY_QUBITS, gl.n, "dense unitary qubit count")
    return apply_gates(np.eye(1 << gl.n, dtype=complex), gl)
