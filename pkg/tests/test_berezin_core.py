# tests/test_berezin_core.py
import numpy as np
import pytest
from hypothesis import given
from hypothesis import settings as hypothesis_settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose

from core.errors import InvalidParameterError, NotInvertibleError, ShapeMismatchError
from core.settings import settings
from modules.berezin_core import (
    PairScanner, berezin_norm, berezin_number, berezin_set, berezin_symbol, check_t, equality_witness,
    find_double_attainer, min_t_berezin, minimize_convex, pair_objective, refine_supremum, t_berezin_norm,
    unitary_check,
)
from modules.kernel_models import shift_operator, standard_model
from modules.matrix_calculus import operator_norm
from modules.verification.generators import random_operator, random_unitary, random_upper_nonnormal
from tests.conftest import NILPOTENT, ginibre

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)


class TestSymbols:
    def test_standard_model_symbols_are_the_diagonal(self, rng, std3):
        A = ginibre(rng, 3)
        assert_allclose(berezin_set(std3, A), np.diag(A))
        assert berezin_symbol(std3, A, 2) == pytest.approx(A[2, 2])
        result = berezin_number(std3, A)
        assert result.value == pytest.approx(np.max(np.abs(np.diag(A))))
        assert result.witness[0] == result.witness[1]

    def test_operator_size_must_match(self, std2):
        with pytest.raises(ShapeMismatchError):
            berezin_set(std2, np.eye(3))


class TestTBerezinNorm:
    def test_nilpotent_curve(self, std2, nilpotent):
        for t in np.linspace(0.0, 1.0, 11):
            assert t_berezin_norm(std2, nilpotent, t).value == pytest.approx(max(t, 1.0 - t))
        assert berezin_norm(std2, nilpotent).value == 1.0
        assert berezin_number(std2, nilpotent).value == 0.0

    def test_witness_attains_the_value(self, std2, nilpotent):
        result = t_berezin_norm(std2, nilpotent, 0.3)
        assert result.witness == (0, 1)
        assert pair_objective(std2, nilpotent, *result.witness, 0.3) == pytest.approx(result.value)

    def test_endpoints_are_the_norm_of_A_and_A_star(self, rng, small_hardy):
        A = ginibre(rng, small_hardy.dim)
        assert t_berezin_norm(small_hardy, A, 1.0).value == pytest.approx(berezin_norm(small_hardy, A).value)
        assert t_berezin_norm(small_hardy, A, 0.0).value == pytest.approx(
            berezin_norm(small_hardy, A.conj().T).value)

    def test_ties_go_to_the_first_pair(self, std2, ones):
        assert t_berezin_norm(std2, ones, 0.4).witness == (0, 0)
        scanner = PairScanner(std2, ones, chunk_rows=1, workers=2)
        assert scanner.scan(0.4).witness == (0, 0)

    def test_chunking_and_workers_do_not_change_results(self, rng, small_hardy):
        A = ginibre(rng, small_hardy.dim)
        reference = PairScanner(small_hardy, A)
        chunked = PairScanner(small_hardy, A, chunk_rows=3, workers=4)
        for t in (0.0, 0.2, 0.5, 1.0):
            assert chunked.scan(t) == reference.scan(t)

    def test_invalid_t(self, std2, nilpotent):
        for t in (-0.1, 1.5, float("nan")):
            with pytest.raises(InvalidParameterError):
                t_berezin_norm(std2, nilpotent, t)
        assert check_t(1) == 1.0

    @hypothesis_settings(max_examples=60, deadline=None)
    @given(re=arrays(np.float64, (3, 3), elements=finite), im=arrays(np.float64, (3, 3), elements=finite),
           t=st.floats(min_value=0.0, max_value=1.0))
    def test_sandwich_property(self, re, im, t):
        model = standard_model(3)
        A = re + 1j * im
        norm = berezin_norm(model, A).value
        tber = t_berezin_norm(model, A, t).value
        tol = 1e-12 * (1.0 + norm)
        assert max(t, 1.0 - t) * norm <= tber + tol
        assert tber <= norm + tol
        assert berezin_number(model, A).value <= tber + tol

    def test_convex_in_t(self, rng, small_hardy):
        A = ginibre(rng, small_hardy.dim)
        scanner = PairScanner(small_hardy, A)
        ts = np.linspace(0.0, 1.0, 21)
        values = np.array([scanner.scan(t).value for t in ts])
        assert np.all(values[:-2] + values[2:] - 2.0 * values[1:-1] >= -1e-12)
        assert_allclose(values, values[::-1], rtol=1e-12)


class TestMinT:
    def test_nilpotent_minimum_at_half(self, std2, nilpotent):
        result = min_t_berezin(std2, nilpotent)
        assert result.t_star == 0.5
        assert result.value == pytest.approx(0.5)
        assert result.trace[0] == (0.5, pytest.approx(0.5))

    def test_ones(self, std2, ones):
        assert min_t_berezin(std2, ones).value == pytest.approx(1.0)

    def test_minimum_is_below_the_curve(self, rng, std3):
        A = ginibre(rng, 3)
        result = min_t_berezin(std3, A)
        for t in np.linspace(0.0, 1.0, 11):
            assert result.value <= t_berezin_norm(std3, A, t).value + 1e-12

    def test_golden_section_finds_a_parabola_minimum(self):
        result = minimize_convex(lambda x: (x - 0.3) ** 2, 0.0, 1.0, 1e-8)
        assert result.t_star == pytest.approx(0.3, abs=1e-6)

    def test_tolerance(self, std2, nilpotent):
        with pytest.raises(InvalidParameterError):
            min_t_berezin(std2, nilpotent, tol_t=0.0)


class TestCharacterizations:
    def test_equality_with_a_double_attainer(self, std2, ones):
        result = equality_witness(std2, ones, 0.3)
        assert result.equal and result.witness == (0, 0)
        assert find_double_attainer(std2, ones, 1e-9) == (0, 0)

    def test_strict_inequality(self, std2, nilpotent):
        result = equality_witness(std2, nilpotent, 0.3)
        assert not result.equal and result.witness is None
        assert result.t_berezin == pytest.approx(0.7)
        assert find_double_attainer(std2, nilpotent, 1e-9) is None

    def test_equality_needs_interior_t(self, std2, ones):
        with pytest.raises(InvalidParameterError):
            equality_witness(std2, ones, 1.0)

    def test_unitary(self, std3):
        rng = np.random.default_rng(5)
        result = unitary_check(std3, random_unitary(3, rng), 0.4)
        assert result.unitary and result.ber_verdict and result.iff_applies

    def test_non_unitary(self, std2):
        result = unitary_check(std2, np.diag([2.0, 1.0]), 0.5)
        assert not result.unitary
        assert result.tber_AstarA == pytest.approx(4.0)

    def test_singular(self, std2):
        with pytest.raises(NotInvertibleError):
            unitary_check(std2, NILPOTENT, 0.5)

    def test_one_directional_on_disk_models(self, small_hardy):
        result = unitary_check(small_hardy, np.eye(small_hardy.dim), 0.5)
        assert result.unitary and not result.iff_applies


class TestRefinement:
    def test_never_decreases(self, small_hardy):
        result = refine_supremum(small_hardy, shift_operator(8), 0.5)
        assert result.value >= result.sampled_value
        assert len(result.rounds) == 2
        assert all(abs(z) < 1.0 for z in result.witness_points)

    def test_needs_a_hardy_model(self, std2, nilpotent):
        with pytest.raises(InvalidParameterError):
            refine_supremum(std2, nilpotent, 0.5)


class TestHermitianOperators:
    def test_half_norm_equals_the_norm(self, rng, std3, small_hardy):
        for model in (std3, small_hardy):
            H = random_operator(model.dim, "hermitian", rng)
            norm = berezin_norm(model, H).value
            assert t_berezin_norm(model, H, 0.5).value == pytest.approx(norm, rel=1e-12)

    def test_curve_is_flat(self, rng, small_hardy):
        H = random_operator(small_hardy.dim, "hermitian", rng)
        norm = berezin_norm(small_hardy, H).value
        scanner = PairScanner(small_hardy, H)
        for t in np.linspace(0.0, 1.0, 6):
            assert scanner.scan(float(t)).value == pytest.approx(norm, rel=1e-12)
        assert min_t_berezin(small_hardy, H, scanner=scanner).value == pytest.approx(norm, rel=1e-12)

    def test_equality_with_the_argmax_witness(self, std3):
        rng = np.random.default_rng(11)
        for _ in range(50):
            H = random_operator(3, "hermitian", rng)
            result = equality_witness(std3, H, 0.3)
            assert result.equal and result.attained
            assert result.witness == t_berezin_norm(std3, H, 0.3).witness
            for t in (0.0, 1.0):
                assert pair_objective(std3, H, *result.witness, t) == pytest.approx(result.berezin_norm)


class TestEqualityCharacterization:
    def test_close_values_without_a_double_attainer(self, std2):
        A = np.array([[0.0, 1.0], [0.85, 0.0]])
        result = equality_witness(std2, A, 0.5, tol=0.1)
        assert result.t_berezin == pytest.approx(0.925) and result.berezin_norm == 1.0
        assert result.equal
        assert result.witness is None and not result.attained
        assert find_double_attainer(std2, A, 0.1) is None

    def test_equal_exactly_when_a_pair_attains_both_terms(self, std3):
        rng = np.random.default_rng(23)
        outcomes = set()
        for i in range(150):
            kind = ("hermitian", "general", "upper")[i % 3]
            A = random_upper_nonnormal(3, rng) if kind == "upper" else random_operator(3, kind, rng)
            result = equality_witness(std3, A, 0.3)
            attainer = find_double_attainer(std3, A, settings.equality_tol)
            assert result.equal == (attainer is not None)
            assert result.attained == result.equal and result.witness == attainer
            outcomes.add(result.equal)
        assert outcomes == {True, False}

    def test_zero_operator(self, std2):
        result = equality_witness(std2, np.zeros((2, 2)), 0.4)
        assert result.equal and result.attained and result.berezin_norm == 0.0


class TestBerezinNumberAxioms:
    def test_homogeneity(self, rng, small_hardy):
        for _ in range(10):
            A = ginibre(rng, small_hardy.dim)
            c = complex(*rng.standard_normal(2))
            assert berezin_number(small_hardy, c * A).value == pytest.approx(
                abs(c) * berezin_number(small_hardy, A).value, rel=1e-12)

    def test_triangle_inequality(self, rng, small_hardy):
        for _ in range(10):
            A, B = ginibre(rng, small_hardy.dim), ginibre(rng, small_hardy.dim)
            lhs = berezin_number(small_hardy, A + B).value
            assert lhs <= berezin_number(small_hardy, A).value + berezin_number(small_hardy, B).value + 1e-12

    def test_chain_below_the_operator_norm(self, rng, std3, small_hardy):
        for model in (std3, small_hardy):
            for _ in range(10):
                A = ginibre(rng, model.dim)
                ber, norm = berezin_number(model, A).value, berezin_norm(model, A).value
                tol = 1e-12 * (1.0 + norm)
                assert ber <= norm + tol
                assert norm <= operator_norm(A) + tol
