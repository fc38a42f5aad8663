"""
Pauli Algebra Tests

Exact signed Pauli strings and sums: multiplication phases, commutation,
eigenvalues, the CX cost function and dense-matrix oracles.
"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from app.core.exceptions import DimensionMismatchError, FeasibleSetError, InvalidPauliError
from app.mixer.pauli import (
    PauliString,
    PauliSum,
    all_commute,
    apply_x_type,
    bits_to_int,
    commutes,
    cost,
    eigenvalue_on_basis,
    int_to_bits,
    multiply,
    parse_pauli,
    support,
    term_cost,
    weight,
)

N = 3
pauli_strings = st.builds(
    PauliString,
    st.just(N),
    st.integers(0, (1 << N) - 1),
    st.integers(0, (1 << N) - 1),
    st.integers(0, 3),
)


class TestParsing:
    """Text form and bit conventions"""

    def test_qubit_one_is_leftmost(self):
        p = parse_pauli("XIIIZ")
        assert p.x_mask == 0b10000
        assert p.z_mask == 0b00001
        assert support(p.x_mask | p.z_mask, 5) == [1, 5]

    def test_signs_render_explicitly(self):
        assert str(parse_pauli("ZZ")) == "+ZZ"
        assert str(parse_pauli("-ZIZ")) == "-ZIZ"
        assert str(parse_pauli("+iY")) == "+iY"
        assert str(parse_pauli("-iX")) == "-iX"

    def test_invalid_labels_rejected(self):
        with pytest.raises(InvalidPauliError):
            parse_pauli("XQZ")
        with pytest.raises(InvalidPauliError):
            parse_pauli("-")

    def test_bitstring_helpers(self):
        assert bits_to_int("10010") == 18
        assert int_to_bits(18, 5) == "10010"
        with pytest.raises(FeasibleSetError):
            bits_to_int("10a")
        with pytest.raises(FeasibleSetError):
            int_to_bits(32, 5)

    def test_embed_into_block(self):
        assert str(parse_pauli("-XZ").embed(4, 1)) == "-IXZI"
        with pytest.raises(DimensionMismatchError):
            parse_pauli("XZ").embed(2, 1)

    def test_z_type_sign_validation(self):
        assert str(PauliString.z_type(0b01, 2, -1)) == "-IZ"
        with pytest.raises(InvalidPauliError):
            PauliString.z_type(0b01, 2, 0)


class TestMultiplication:
    """Group product with exact phase"""

    def test_x_times_z(self):
        assert str(parse_pauli("X") * parse_pauli("Z")) == "-iY"
        assert str(parse_pauli("Z") * parse_pauli("X")) == "+iY"

    def test_disjoint_supports(self):
        product = multiply(parse_pauli("-IIIZI"), parse_pauli("IZIIZ"))
        assert str(product) == "-IZIZZ"

    def test_logical_x_times_signed_stabilizer(self):
        product = parse_pauli("XXXII") * parse_pauli("-ZZIIZ")
        assert str(product) == "+YYXIZ"
        assert weight(product) == 4

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            multiply(parse_pauli("XX"), parse_pauli("X"))

    @given(pauli_strings, pauli_strings)
    @hypothesis_settings(max_examples=60, deadline=None)
    def test_product_matches_dense_matrices(self, p, q):
        expected = p.to_matrix() @ q.to_matrix()
        assert np.allclose(multiply(p, q).to_matrix(), expected)

    @given(pauli_strings, pauli_strings, pauli_strings)
    @hypothesis_settings(max_examples=40, deadline=None)
    def test_associative(self, p, q, r):
        assert multiply(multiply(p, q), r) == multiply(p, multiply(q, r))

    @given(pauli_strings)
    @hypothesis_settings(max_examples=40, deadline=None)
    def test_square_is_signed_identity(self, p):
        square = p * p
        assert square.is_identity
        assert square.phase_exp in (0, 2)
        assert PauliString.identity(N) * p == p

    @given(pauli_strings, pauli_strings)
    @hypothesis_settings(max_examples=60, deadline=None)
    def test_commutes_iff_products_agree(self, p, q):
        assert commutes(p, q) == (multiply(p, q) == multiply(q, p))

    @given(pauli_strings)
    @hypothesis_settings(max_examples=30, deadline=None)
    def test_text_form_is_lossless(self, p):
        assert parse_pauli(str(p)) == p


class TestCommutation:
    def test_single_qubit(self):
        assert not commutes(parse_pauli("X"), parse_pauli("Z"))

    def test_two_qubit_pairs_commute(self):
        assert commutes(parse_pauli("XX"), parse_pauli("ZZ"))

    def test_error_against_single_z(self):
        assert not commutes(parse_pauli("IXXX"), parse_pauli("IZII"))


class TestWeightAndEigenvalues:
    """Weight, diagonal eigenvalues and X-type action"""

    def test_weight(self):
        assert weight(parse_pauli("IIIII")) == 0
        assert weight(parse_pauli("XXXII")) == 3

    def test_state_stabilizer_signs(self):
        state = "10110"
        for q in range(1, 6):
            sign = -1 if state[q - 1] == "1" else 1
            generator = PauliString.z_type(1 << (5 - q), 5, sign)
            assert eigenvalue_on_basis(generator, state) == 1

    def test_eigenvalues(self):
        assert eigenvalue_on_basis(parse_pauli("Z"), "1") == -1
        assert eigenvalue_on_basis(parse_pauli("-ZZIII"), "10010") == 1

    def test_eigenvalue_requires_diagonal(self):
        with pytest.raises(InvalidPauliError):
            eigenvalue_on_basis(parse_pauli("XZ"), "00")

    def test_eigenvalue_length_check(self):
        with pytest.raises(DimensionMismatchError):
            eigenvalue_on_basis(parse_pauli("ZZ"), "101")

    def test_apply_x_type(self):
        assert apply_x_type(parse_pauli("IXXX"), "1110") == "1001"
        assert apply_x_type(parse_pauli("XXIIX"), "10010") == "01011"
        assert apply_x_type(parse_pauli("IIII"), "0110") == "0110"
        assert apply_x_type(parse_pauli("XIII"), 0b0110) == 0b1110

    def test_apply_x_type_rejects_z(self):
        with pytest.raises(InvalidPauliError):
            apply_x_type(parse_pauli("XZ"), "00")


class TestPauliSum:
    """Exact sums, projector expansion arithmetic and matrices"""

    def test_cancellation_removes_terms(self):
        h = PauliSum.from_terms(2, [(parse_pauli("ZZ"), 1), (parse_pauli("-ZZ"), 1)])
        assert len(h) == 0
        assert str(h) == "0"

    def test_signed_coefficients(self):
        h = PauliSum(2).add_term(parse_pauli("-ZI"), Fraction(1, 2))
        assert h.coefficient(parse_pauli("ZI")) == Fraction(-1, 2)
        assert h.coefficient(parse_pauli("-ZI")) == Fraction(1, 2)
        assert h.signed_terms() == [(parse_pauli("-ZI"), Fraction(1, 2))]

    def test_non_hermitian_term_rejected(self):
        with pytest.raises(InvalidPauliError):
            PauliSum(1).add_term(parse_pauli("+iZ"))

    def test_left_multiply_requires_commuting_terms(self):
        with pytest.raises(InvalidPauliError):
            PauliSum.from_terms(1, [(parse_pauli("Z"), 1)]).left_multiply(parse_pauli("X"))

    def test_diagonal_value(self):
        projector = PauliSum.from_terms(4, [(parse_pauli("IIII"), Fraction(1, 2)), (parse_pauli("ZZIZ"), Fraction(1, 2))])
        assert projector.diagonal_value("1011") == 1
        assert projector.diagonal_value("1000") == 0

    def test_projector_matrix_is_idempotent(self):
        projector = PauliSum.from_terms(4, [(parse_pauli("IIII"), Fraction(1, 2)), (parse_pauli("ZZIZ"), Fraction(1, 2))])
        matrix = projector.to_matrix()
        assert np.allclose(matrix @ matrix, matrix)
        assert np.isclose(np.trace(matrix).real, 8)

    def test_sparse_and_apply_agree_with_dense(self, rng):
        h = PauliSum.from_terms(3, [(parse_pauli("XYZ"), Fraction(1, 4)), (parse_pauli("-ZIZ"), 2)])
        psi = rng.normal(size=8) + 1j * rng.normal(size=8)
        assert np.allclose(h.to_sparse().toarray(), h.to_matrix())
        assert np.allclose(h.apply(psi), h.to_matrix() @ psi)

    def test_arithmetic(self):
        a = PauliSum.from_terms(2, [(parse_pauli("XX"), 1)])
        b = PauliSum.from_terms(2, [(parse_pauli("ZZ"), 1)])
        assert (a + b) - b == a
        assert (-a).coefficient(parse_pauli("XX")) == -1
        assert a.scale(Fraction(1, 2)).coefficient(parse_pauli("XX")) == Fraction(1, 2)
        assert len(a.scale(0)) == 0


class TestCost:
    """CX cost 2 * (weight - 1) per non-identity term"""

    def test_x_mixer_is_free(self):
        x_mixer = PauliSum.from_terms(4, [(PauliString.x_type(1 << q, 4), 1) for q in range(4)])
        assert cost(x_mixer) == 0

    def test_xy_term(self):
        xy = PauliSum.from_terms(2, [(parse_pauli("XX"), Fraction(1, 2)), (parse_pauli("YY"), Fraction(1, 2))])
        assert cost(xy) == 4
        assert all_commute(xy)

    def test_restricted_pair_mixer(self):
        projector = PauliSum.from_terms(5, [(parse_pauli("-ZZIIZ"), Fraction(1, 2)), (parse_pauli("-ZIZII"), Fraction(1, 2))])
        mixer = projector.left_multiply(parse_pauli("XXXII"))
        assert cost(mixer) == 10

    def test_identity_term_is_free(self):
        assert term_cost(PauliString.identity(3)) == 0
        assert term_cost(parse_pauli("IXI")) == 0
        assert term_cost(parse_pauli("XYZ")) == 4

    def test_cost_invariant_under_scaling(self):
        h = PauliSum.from_terms(3, [(parse_pauli("XXZ"), 1), (parse_pauli("IZZ"), 3)])
        assert cost(h.scale(Fraction(-5, 7))) == cost(h)
