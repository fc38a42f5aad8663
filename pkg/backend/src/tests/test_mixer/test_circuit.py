"""
Pauli Exponential Circuit Tests
"""

import logging

import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st
from scipy.linalg import expm

from app.core.exceptions import DimensionMismatchError, InvalidPauliError, PlanFormatError
from app.mixer.circuit import (
    Gate,
    GateList,
    circuit_unitary,
    cx_count,
    parse_circuit_text,
    plan_circuit,
    term_circuit,
)
from app.mixer.pauli import PauliString, parse_pauli, term_cost


class TestTermCircuit:
    """Basis change, CX ladder and RZ for a single term"""

    def test_zz_ladder(self):
        gl = term_circuit(parse_pauli("ZZ"), 1.0, 0.3)
        assert [g.name for g in gl] == ["cx", "rz", "cx"]
        assert gl.gates[0].qubits == (1, 2)
        assert gl.gates[1].qubits == (2,)
        assert gl.gates[1].angle == pytest.approx(0.6)

    def test_y_basis_change(self):
        gl = term_circuit(parse_pauli("Y"), 0.5, 1.0)
        assert [g.name for g in gl] == ["sdg", "h", "rz", "h", "s"]

    @pytest.mark.parametrize("label", ["XYZ", "-YIX", "IZI", "-XXXY", "ZIIZ"])
    def test_unitary_matches_exponential(self, label):
        p = parse_pauli(label)
        t, w = 0.37, 1.25
        expected = expm(-1j * t * w * p.to_matrix())
        assert np.allclose(circuit_unitary(term_circuit(p, w, t)), expected)

    @pytest.mark.parametrize("label", ["X", "ZZ", "XYZ", "YYXIZ"])
    def test_cx_count_is_term_cost(self, label):
        p = parse_pauli(label)
        assert cx_count(term_circuit(p, 1.0, 0.1)) == term_cost(p)

    def test_identity_term_emits_nothing(self, caplog):
        with caplog.at_level(logging.WARNING):
            gl = term_circuit(PauliString.identity(3), 1.0, 0.2)
        assert len(gl) == 0
        assert "global phase" in caplog.text

    def test_non_hermitian_rejected(self):
        with pytest.raises(InvalidPauliError):
            term_circuit(parse_pauli("+iZ"), 1.0, 0.1)


class TestPlanCircuit:
    def test_cx_count_matches_plan_cost(self, seven_state_plan):
        assert cx_count(plan_circuit(seven_state_plan, 0.3)) == seven_state_plan.total_cost

    def test_zero_angle_is_identity(self, one_hot_plan):
        unitary = circuit_unitary(plan_circuit(one_hot_plan, 0.0))
        assert np.allclose(unitary, np.eye(8))

    def test_plan_order_product(self, one_hot_plan):
        beta = 0.41
        expected = np.eye(8, dtype=complex)
        for candidate in one_hot_plan.candidates:
            for term, coefficient in candidate.mixer.terms():
                expected = expm(-1j * beta * float(coefficient) * term.to_matrix()) @ expected
        assert np.allclose(circuit_unitary(plan_circuit(one_hot_plan, beta)), expected)


class TestGateText:
    """Line-oriented gate list format"""

    def test_text_round_trip(self):
        gl = term_circuit(parse_pauli("-XYZ"), 0.5, 0.7)
        parsed = parse_circuit_text(gl.to_text())
        assert parsed.to_text() == gl.to_text()
        assert np.allclose(circuit_unitary(parsed), circuit_unitary(gl))

    def test_header_required(self):
        with pytest.raises(PlanFormatError):
            parse_circuit_text("h 1\n")

    @pytest.mark.parametrize("text", ["qubits 2\ncx 1 1\n", "qubits 2\nt 1\n", "qubits 2\nrz 1\n", "qubits 2\nh\n"])
    def test_malformed_lines(self, text):
        with pytest.raises(PlanFormatError):
            parse_circuit_text(text)

    def test_qubit_out_of_range(self):
        with pytest.raises(DimensionMismatchError):
            GateList(2, [Gate("h", (3,))])

    def test_only_rz_has_angle(self):
        with pytest.raises(PlanFormatError):
            Gate("h", (1,), 0.5)
        with pytest.raises(PlanFormatError):
            Gate("rz", (1,))


@st.composite
def hermitian_terms(draw):
    n = draw(st.integers(1, 5))
    p = PauliString(
        n,
        draw(st.integers(0, (1 << n) - 1)),
        draw(st.integers(0, (1 << n) - 1)),
        draw(st.sampled_from([0, 2])),
    )
    w = draw(st.floats(-2.0, 2.0, allow_nan=False))
    t = draw(st.floats(-np.pi, np.pi, allow_nan=False))
    return p, w, t


def _equal_up_to_phase(a: np.ndarray, b: np.ndarray, atol: float) -> bool:
    overlap = np.vdot(a.ravel(), b.ravel())
    phase = overlap / abs(overlap) if abs(overlap) > atol else 1.0
    return np.allclose(a * phase, b, atol=atol)


class TestRandomTerms:
    """Term circuits equal exp(-i t w P) for random Hermitian terms"""

    @hypothesis_settings(max_examples=200, deadline=None)
    @given(hermitian_terms())
    def test_matches_matrix_exponential(self, term):
        p, w, t = term
        expected = expm(-1j * t * w * p.to_matrix())
        assert _equal_up_to_phase(circuit_unitary(term_circuit(p, w, t)), expected, atol=1e-10)
