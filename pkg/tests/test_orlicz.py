# tests/test_orlicz.py
import numpy as np
import pytest
from numpy.testing import assert_allclose

from core.errors import ConfigurationError, InvalidParameterError, NotConvexOrliczError
from modules.matrix_calculus import HermitianMatrix
from modules.orlicz import (
    SubmultiplicativeFlag, WeightFn, check_submultiplicative, custom_orlicz, factor_pair, mark_checked,
    power_orlicz, validation_grid, weight_from_spec,
)


class TestOrliczFunctions:
    def test_power(self):
        phi = power_orlicz(2.5)
        assert phi.scalar(4.0) == pytest.approx(32.0)
        assert phi.is_submultiplicative
        assert phi.describe()["submultiplicative"] == "proved"

    def test_power_needs_r_at_least_one(self):
        with pytest.raises(NotConvexOrliczError):
            power_orlicz(0.5)

    def test_negative_arguments_are_clamped(self):
        assert power_orlicz(2.0).scalar(-1.0) == 0.0

    def test_validation_grid(self):
        grid = validation_grid()
        assert grid.size == 1024 and grid[0] == 0.0 and grid[-1] == pytest.approx(1e3)

    def test_custom_needs_acknowledgement(self):
        with pytest.raises(ConfigurationError):
            custom_orlicz(lambda x: x * x, "square")

    def test_custom_shape_checks(self):
        phi = custom_orlicz(lambda x: x * x + x, "x^2+x", acknowledge_grid_checks=True)
        assert phi.submultiplicative == SubmultiplicativeFlag.UNKNOWN
        assert not phi.is_submultiplicative
        with pytest.raises(NotConvexOrliczError, match="convex"):
            custom_orlicz(np.sqrt, "sqrt", acknowledge_grid_checks=True)
        with pytest.raises(NotConvexOrliczError, match="not 0"):
            custom_orlicz(lambda x: x + 1.0, "shifted", acknowledge_grid_checks=True)
        with pytest.raises(NotConvexOrliczError, match="nondecreasing"):
            custom_orlicz(lambda x: np.abs(x - 1.0) - 1.0, "dip", acknowledge_grid_checks=True)

    def test_submultiplicativity(self):
        phi = custom_orlicz(lambda x: x * x + x, "x^2+x", acknowledge_grid_checks=True)
        check = check_submultiplicative(phi)
        assert check.ok
        marked = mark_checked(phi, check)
        assert marked.submultiplicative == SubmultiplicativeFlag.CHECKED and marked.is_submultiplicative

    def test_submultiplicativity_failure(self):
        phi = custom_orlicz(lambda x: 0.5 * x, "half", acknowledge_grid_checks=True)
        check = check_submultiplicative(phi, [0.0, 1.0, 2.0])
        assert not check.ok
        assert check.worst[2] == pytest.approx(2.0)
        with pytest.raises(NotConvexOrliczError):
            mark_checked(phi, check)

    def test_proved_flag_is_kept(self):
        phi = power_orlicz(3.0)
        assert mark_checked(phi, check_submultiplicative(phi)) is phi


class TestPowerPair:
    def test_powers(self):
        H = HermitianMatrix(np.diag([4.0, 9.0]))
        pair = factor_pair(0.5)
        assert_allclose(pair.g2(H).entries, H.entries, atol=1e-12)
        assert_allclose(pair.h4(H).entries, np.diag([16.0, 81.0]), atol=1e-10)
        assert_allclose(pair.g_power(H, 2, power_orlicz(2.0)).entries, np.diag([16.0, 81.0]), atol=1e-10)
        assert_allclose(pair.g(np.array([4.0])), [2.0])

    def test_zero_to_the_zero_is_one(self):
        H = HermitianMatrix(np.diag([0.0, 2.0]))
        pair = factor_pair(0.0)
        assert_allclose(pair.g4(H).entries, np.eye(2), atol=1e-15)
        assert pair.triggers_zero_power(H)
        assert not factor_pair(0.5).triggers_zero_power(H)
        assert not pair.triggers_zero_power(HermitianMatrix(np.eye(2)))

    def test_range(self):
        with pytest.raises(InvalidParameterError):
            factor_pair(1.5)


class TestWeight:
    def test_coefficients(self):
        outer, inner = WeightFn(3.0).coefficients
        assert outer == pytest.approx(0.75) and inner == pytest.approx(0.25)
        assert WeightFn(0.0).coefficients == (0.0, 1.0)

    def test_shape(self):
        assert WeightFn.from_shape(0.75).value == pytest.approx(3.0)
        with pytest.raises(InvalidParameterError):
            WeightFn.from_shape(1.0)

    def test_spec(self):
        assert weight_from_spec(alpha=2.0).value == 2.0
        assert weight_from_spec(t=0.5).value == pytest.approx(1.0)
        with pytest.raises(InvalidParameterError):
            weight_from_spec()
        with pytest.raises(InvalidParameterError):
            WeightFn(-1.0)
        with pytest.raises(InvalidParameterError):
            WeightFn(float("inf"))
