"""Tests for the Hamiltonian model registry and closed-form references."""

import math

import numpy as np
import pytest

from qmet.errors import InvalidParameter, UnknownReference
from qmet.linalg import eig_hermitian, require_hermitian
from qmet.models import (
    SIGMA_X,
    SIGMA_Z,
    SPIN1_X,
    SPIN1_Y,
    jc_coupling,
    make_jaynes_cummings,
    make_nv_spin1,
    make_qubit_direction,
    make_qubit_xcomponent,
    reference,
    reference_names,
)
from qmet.numdiff import central5


def assert_analytic_derivative(model, thetas, rtol=1e-7):
    for theta in thetas:
        numeric = central5(model.h_of, float(theta), 1e-3 * (1 + abs(theta)))
        analytic = model.dh_of(float(theta))
        scale = max(np.max(np.abs(analytic)), 1.0)
        assert np.max(np.abs(numeric - analytic)) <= rtol * scale


class TestQubitDirection:
    def test_axis_limits(self):
        m = make_qubit_direction(1.0)
        assert np.allclose(m.h_of(0.0), SIGMA_Z)
        assert np.allclose(m.h_of(math.pi / 2), SIGMA_X)

    def test_eigenvalues_are_plus_minus_omega(self):
        m = make_qubit_direction(2.0)
        es = eig_hermitian(m.h_of(math.pi / 4))
        assert np.allclose(es.eigenvalues, [2.0, -2.0])
        assert np.allclose(m.h_of(math.pi / 4), math.sqrt(2) * (SIGMA_Z + SIGMA_X))

    def test_derivative(self):
        m = make_qubit_direction(1.3)
        assert_analytic_derivative(m, np.linspace(0.2, 2.9, 20))

    def test_invalid_parameter(self):
        with pytest.raises(InvalidParameter):
            make_qubit_direction(0.0)


class TestQubitXComponent:
    def test_zero_theta(self):
        m = make_qubit_xcomponent(1.0)
        assert np.allclose(m.h_of(0.0), -SIGMA_Z)

    def test_spectrum_is_plus_minus_omega_theta(self):
        m = make_qubit_xcomponent(1.0)
        es = eig_hermitian(m.h_of(1.0))
        assert np.allclose(es.eigenvalues, [math.sqrt(2), -math.sqrt(2)], atol=1e-10)
        rng = np.random.default_rng(2)
        for _ in range(50):
            w = float(rng.uniform(0.2, 3.0))
            q = float(rng.uniform(-3.0, 3.0))
            ev = eig_hermitian(make_qubit_xcomponent(w).h_of(q)).eigenvalues
            assert np.allclose(ev, [math.hypot(w, q), -math.hypot(w, q)], atol=1e-10)

    def test_derivative_is_sigma_x(self):
        m = make_qubit_xcomponent(0.7)
        for q in (-1.0, 0.0, 2.5):
            assert np.allclose(m.dh_of(q), SIGMA_X)
        assert_analytic_derivative(m, [-2.0, 0.3, 1.7])


class TestNvSpin1:
    def test_zero_field_zero_strain_is_diagonal(self):
        m = make_nv_spin1(1.0, 2.0, 0.0)
        assert np.allclose(m.h_of(0.0), np.diag([8.0, 0.0, 8.0]))

    def test_strain_couples_extremal_levels_only(self):
        coupling = SPIN1_X @ SPIN1_X - SPIN1_Y @ SPIN1_Y
        expected = np.zeros((3, 3))
        expected[0, 2] = expected[2, 0] = 4.0
        assert np.allclose(coupling, expected)

    def test_three_four_five_spectrum(self):
        """With theta*mu = 3, E = 2 the split is 2*chi = 2*sqrt(9+16) = 10."""
        m = make_nv_spin1(1.0, 1.0, 2.0)
        es = eig_hermitian(m.h_of(3.0))
        assert np.allclose(es.eigenvalues, [14.0, 0.0, -6.0], atol=1e-10)

    def test_derivative(self):
        m = make_nv_spin1(1.0, 1.44 * math.pi, 5e-5 * math.pi)
        assert_analytic_derivative(m, [0.1, 0.5, 1.5])

    def test_invalid_parameters(self):
        with pytest.raises(InvalidParameter):
            make_nv_spin1(-1.0, 1.0, 0.0)
        with pytest.raises(InvalidParameter):
            make_nv_spin1(1.0, -0.1, 0.0)


class TestJaynesCummings:
    def test_coupling_matrix_elements(self):
        """<e,0|H_I|g,1> = Omega = kappa sqrt(omega); annihilation lowers |1> to |0>."""
        w, kappa, n_max = 1.3, 0.5, 8
        H = make_jaynes_cummings(w, kappa, n_max).h_of(w)
        omega_rabi = kappa * math.sqrt(w)
        g1 = 1            # |g> (x) |1>
        e0 = n_max + 1    # |e> (x) |0>
        assert H[e0, g1] == pytest.approx(omega_rabi)
        assert H[g1, e0] == pytest.approx(omega_rabi)

    def test_ground_row_couples_only_via_raising(self):
        w, kappa, n_max = 1.0, 0.8, 4
        Hi = jc_coupling(w, kappa, n_max)
        g0 = 0
        row = Hi[g0].copy()
        row[n_max + 1] = 0.0  # the |e,0> element is the only nonzero one
        assert np.allclose(row, 0.0)
        assert Hi[g0 + 1, n_max + 1] == pytest.approx(kappa * math.sqrt(w))

    def test_zero_coupling_is_block_diagonal(self):
        m = make_jaynes_cummings(1.0, 0.0, 4)
        H = m.h_of(1.0)
        assert np.allclose(H[:5, 5:], 0.0)
        assert np.allclose(H[5:, :5], 0.0)

    def test_truncation_guard(self):
        with pytest.raises(InvalidParameter):
            make_jaynes_cummings(1.0, 0.5, 1)

    def test_derivative(self):
        m = make_jaynes_cummings(1.0, 0.5, 6)
        assert_analytic_derivative(m, [0.5, 1.0, 2.0])


class TestHermiticityEverywhere:
    @pytest.mark.parametrize(
        "factory,domain",
        [
            (lambda: make_qubit_direction(1.1), (0.05, 3.0)),
            (lambda: make_qubit_xcomponent(0.9), (-3.0, 3.0)),
            (lambda: make_nv_spin1(1.0, 1.44 * math.pi, 5e-5 * math.pi), (0.01, 3.0)),
            (lambda: make_jaynes_cummings(1.0, 0.5, 5), (0.1, 3.0)),
        ],
    )
    def test_h_of_is_hermitian(self, factory, domain):
        model = factory()
        rng = np.random.default_rng(5)
        for theta in rng.uniform(*domain, size=50):
            require_hermitian(model.h_of(float(theta)))


class TestReferences:
    def test_direction_qfi_value(self):
        """4 sin^2(wt) - sin^2(2wt) sin^2(theta) at theta = pi/2, wt = pi/4 gives 1."""
        val = reference("direction_qfi")(theta=math.pi / 2, omega=1.0, t=math.pi / 4)
        assert val == pytest.approx(4 * 0.5 - 1.0 * 1.0)

    def test_direction_bound_value(self):
        assert reference("direction_g")(omega=1.0, t=math.pi / 2) == pytest.approx(9.0)

    def test_oscillator_ratio_identity(self):
        """F_C/F_Q = 1/(4 sin^2(wt/2)), > 1 exactly when |sin(wt/2)| < 1/2."""
        for wt in np.linspace(0.1, 6.0, 40):
            fq = reference("oscillator_qfi")(m=2.0, omega=1.0, t=wt)
            fc = reference("oscillator_fc")(m=2.0, omega=1.0)
            gamma = reference("oscillator_gamma")(omega=1.0, t=wt)
            assert fc / fq == pytest.approx(gamma, rel=1e-12)
            assert (gamma > 1.0) == (abs(math.sin(wt / 2)) < 0.5)

    def test_unknown_reference(self):
        with pytest.raises(UnknownReference):
            reference("no-such-formula")

    def test_registry_is_sorted_and_stable(self):
        names = reference_names()
        assert list(names) == sorted(names)
        assert "xcomponent_g" in names
