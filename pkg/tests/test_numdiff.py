"""Tests for the finite-difference machinery."""

import math

import numpy as np
import pytest

from qmet.numdiff import CENTRAL, DiffSpec, central5, derivative


class TestDerivative:
    def test_richardson_on_sine(self):
        value, err = derivative(math.sin, 0.7)
        assert value == pytest.approx(math.cos(0.7), abs=1e-11)
        assert err >= 0

    def test_central_on_sine(self):
        value, err = derivative(math.sin, 0.7, DiffSpec(method=CENTRAL))
        assert value == pytest.approx(math.cos(0.7), abs=1e-7)

    def test_error_estimate_brackets_true_error(self):
        for x in np.linspace(-2.5, 2.5, 11):
            value, err = derivative(np.exp, float(x))
            assert abs(value - math.exp(x)) <= 100 * err + 1e-13

    def test_vector_valued_function(self):
        f = lambda x: np.array([math.sin(x), math.cos(x), x * x])
        value, _ = derivative(f, 0.3)
        assert np.allclose(value, [math.cos(0.3), -math.sin(0.3), 0.6], atol=1e-10)

    def test_richardson_beats_plain_central(self):
        f = lambda x: math.exp(2 * x)
        spec = DiffSpec(step=1e-3)
        rich, _ = derivative(f, 0.5, spec)
        plain, _ = derivative(f, 0.5, DiffSpec(method=CENTRAL, step=1e-3))
        truth = 2 * math.exp(1.0)
        assert abs(rich - truth) < abs(plain - truth)

    def test_analytic_method_rejected(self):
        with pytest.raises(ValueError):
            derivative(math.sin, 0.0, DiffSpec(method="analytic"))


class TestCentral5:
    def test_fourth_order_accuracy(self):
        value = central5(math.sin, 0.4, 1e-3)
        assert value == pytest.approx(math.cos(0.4), abs=1e-12)
