"""Tests for classical/quantum Fisher information and monotone metrics."""

import math

import numpy as np
import pytest

from qmet.cem import local_generator
from qmet.errors import (
    DimensionMismatch,
    DomainBoundary,
    NotTraceless,
    RankDeficient,
    UnknownMetricTag,
)
from qmet.fisher import (
    POVM,
    OutcomeDistribution,
    ProbabilityModel,
    classical_fisher,
    fisher_of_povm,
    monotone_metric,
    povm_outcome_model,
    qfi,
    qfi_pure,
    sld,
    sld_povm,
)
from qmet.linalg import expm_unitary, operator_variance
from qmet.models import make_qubit_direction, reference
from qmet.numdiff import derivative

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)


def two_outcome_model():
    def at(q):
        return OutcomeDistribution(outcomes=("0", "1"), probs=np.array([q, 1.0 - q]))

    return ProbabilityModel(at=at, theta_domain=(0.0, 1.0))


def pure_family(h_of, psi0, t=1.0):
    psi0 = np.asarray(psi0, dtype=complex)

    def rho_of(q):
        u = expm_unitary(h_of(q), t)
        v = u @ psi0
        return np.outer(v, v.conj())

    return rho_of


class TestClassicalFisher:
    def test_bernoulli_at_half(self):
        """Oracle 1/(theta (1-theta)) gives 4 at theta = 1/2."""
        report = classical_fisher(two_outcome_model(), 0.5)
        assert report.value == pytest.approx(4.0, rel=1e-9)
        assert report.error_estimate >= 0

    def test_bernoulli_matches_oracle_on_grid(self):
        model = two_outcome_model()
        for q in np.linspace(0.1, 0.9, 9):
            value = classical_fisher(model, float(q)).value
            assert value == pytest.approx(1.0 / (q * (1 - q)), rel=1e-8)

    def test_constant_distribution_has_zero_information(self):
        def at(q):
            return OutcomeDistribution(outcomes=("a", "b"), probs=np.array([0.3, 0.7]))

        report = classical_fisher(ProbabilityModel(at=at), 1.2)
        assert report.value <= 1e-18

    def test_domain_boundary(self):
        with pytest.raises(DomainBoundary):
            classical_fisher(two_outcome_model(), 1e-6)

    def test_support_exclusion(self):
        """An outcome pinned at zero probability is dropped, not divided by."""
        def at(q):
            return OutcomeDistribution(outcomes=("a", "b", "c"),
                                       probs=np.array([q, 1.0 - q, 0.0]))

        report = classical_fisher(ProbabilityModel(at=at, theta_domain=(0, 1)), 0.4)
        assert report.value == pytest.approx(1.0 / (0.4 * 0.6), rel=1e-8)


class TestSld:
    def test_maximally_mixed_state(self):
        """rho = I/d gives L = d * drho."""
        rng = np.random.default_rng(1)
        z = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        A = (z + z.conj().T) / 2
        A -= np.trace(A) / 3 * np.eye(3)
        L = sld(np.eye(3) / 3, A)
        assert np.allclose(L, 3 * A, atol=1e-10)

    def test_zero_derivative(self):
        assert np.allclose(sld(np.diag([0.4, 0.6]), np.zeros((2, 2))), 0.0)

    def test_pure_qubit_family_consistency(self):
        """tr(rho L^2) agrees with the pure-state formula on a rotating qubit."""
        h_of = lambda q: q * SX
        rho_of = pure_family(h_of, [1.0, 0.0])
        q0 = 0.35
        rho = rho_of(q0)
        drho, _ = derivative(rho_of, q0)
        drho = (drho + drho.conj().T) / 2
        L = sld(rho, drho)
        sld_value = np.trace(rho @ L @ L).real

        u = expm_unitary(h_of(q0), 1.0)
        psi = u @ np.array([1.0, 0.0], dtype=complex)
        dpsi, _ = derivative(lambda q: expm_unitary(h_of(q), 1.0) @ np.array([1.0, 0.0]), q0)
        assert sld_value == pytest.approx(qfi_pure(psi, dpsi), abs=1e-8)

    def test_traceless_precondition(self):
        with pytest.raises(NotTraceless):
            sld(np.diag([0.5, 0.5]), np.diag([1.0, 0.0]))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            sld(np.eye(2) / 2, np.zeros((3, 3)))


class TestQfi:
    def test_static_family(self):
        rho = np.diag([0.2, 0.8]).astype(complex)
        assert qfi(lambda q: rho, 0.7).value <= 1e-16

    def test_field_direction_matches_closed_form(self):
        """Ground-state preparation against the closed-form expression on a grid."""
        model = make_qubit_direction(1.0)
        ref = reference("direction_qfi")
        for theta in np.linspace(0.4, 2.7, 5):
            for t in np.linspace(0.3, 5.8, 5):
                rho_of = pure_family(model.h_of, [1.0, 0.0], t=t)
                value = qfi(rho_of, float(theta)).value
                expected = ref(theta=float(theta), omega=1.0, t=float(t))
                assert value == pytest.approx(expected, abs=2e-6)

    def test_domain_boundary(self):
        rho_of = pure_family(lambda q: q * SX, [1.0, 0.0])
        with pytest.raises(DomainBoundary):
            qfi(rho_of, 1e-7, theta_domain=(0.0, 1.0))

    def test_bosonic_mode_superposition(self):
        """Two-level field superposition: F_Q = 4 t^2 |a0|^2 |a1|^2, independent of omega."""
        n_max = 6
        levels = np.arange(n_max + 1) + 0.5
        a0, a1, t = math.sqrt(0.3), math.sqrt(0.7), 1.7
        psi0 = np.zeros(n_max + 1, dtype=complex)
        psi0[0], psi0[1] = a0, a1

        rho_of = pure_family(lambda w: np.diag(w * levels).astype(complex), psi0, t=t)
        value = qfi(rho_of, 1.3).value
        assert value == pytest.approx(4 * t * t * a0**2 * a1**2, rel=1e-7)


class TestQfiPure:
    def test_phase_motion_is_invisible(self):
        psi = np.array([0.6, 0.8j])
        assert qfi_pure(psi, 1j * 0.37 * psi) == pytest.approx(0.0, abs=1e-12)

    def test_orthogonal_motion(self):
        assert qfi_pure([1.0, 0.0], [0.0, 1.0]) == pytest.approx(4.0)

    def test_variance_identity(self):
        """Equals 4 Var over the initial state of the pulled-back generator."""
        model = make_qubit_direction(1.0)
        theta, t = 0.9, 1.4
        psi0 = np.array([1.0, 0.0], dtype=complex)
        u_of = lambda q: expm_unitary(model.h_of(q), t)
        g = local_generator(u_of, theta)
        u = u_of(theta)
        pulled_back = u.conj().T @ g @ u

        psi = u @ psi0
        dpsi, _ = derivative(lambda q: u_of(q) @ psi0, theta)
        assert qfi_pure(psi, dpsi) == pytest.approx(
            4 * operator_variance(psi0, pulled_back), abs=1e-8
        )

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            qfi_pure([1.0, 0.0], [0.0, 0.0, 1.0])

    def test_agrees_with_density_matrix_route_on_pure_families(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            G = (z + z.conj().T) / 2
            z = rng.normal(size=2) + 1j * rng.normal(size=2)
            psi0 = z / np.linalg.norm(z)
            q0 = float(rng.uniform(0.2, 1.4))
            rho_of = pure_family(lambda q: q * G, psi0)
            dense = qfi(rho_of, q0).value
            u_of = lambda q: expm_unitary(q * G, 1.0)
            psi = u_of(q0) @ psi0
            dpsi, _ = derivative(lambda q: u_of(q) @ psi0, q0)
            pure = qfi_pure(psi, dpsi)
            assert dense == pytest.approx(pure, rel=1e-6, abs=1e-9)


def full_rank_qubit_family(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    G = (z + z.conj().T) / 2
    w = rng.uniform(0.1, 0.4)
    rho0 = np.diag([0.5 + w, 0.5 - w]).astype(complex)
    basis = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
    rho0 = basis @ rho0 @ basis.conj().T
    return lambda q: expm_unitary(G, q) @ rho0 @ expm_unitary(G, q).conj().T


class TestMonotoneMetric:
    def test_arithmetic_tag_reproduces_qfi(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            rho_of = full_rank_qubit_family(rng)
            q = float(rng.uniform(0.2, 1.4))
            assert monotone_metric("ari", rho_of, q).value == pytest.approx(
                qfi(rho_of, q).value, rel=1e-7, abs=1e-10
            )

    def test_commuting_family_all_metrics_coincide(self):
        """For diag(theta, 1-theta) every monotone metric is the classical 1/(p(1-p))."""
        rho_of = lambda q: np.diag([q, 1.0 - q]).astype(complex)
        q0 = 0.3
        expected = 1.0 / (q0 * (1.0 - q0))
        for tag in ("ari", "har", "log"):
            assert monotone_metric(tag, rho_of, q0).value == pytest.approx(expected, rel=1e-8)

    def test_known_ordering(self):
        """Harmonic >= logarithmic >= arithmetic on full-rank qubit families."""
        rng = np.random.default_rng(4)
        for _ in range(50):
            rho_of = full_rank_qubit_family(rng)
            q = float(rng.uniform(0.2, 1.4))
            har = monotone_metric("har", rho_of, q).value
            log = monotone_metric("log", rho_of, q).value
            ari = monotone_metric("ari", rho_of, q).value
            assert har >= log - 1e-8 * (1 + har)
            assert log >= ari - 1e-8 * (1 + log)

    def test_rank_deficient_rejected(self):
        rho_of = pure_family(lambda q: q * SX, [1.0, 0.0])
        with pytest.raises(RankDeficient):
            monotone_metric("ari", rho_of, 0.4)

    def test_unknown_tag(self):
        rng = np.random.default_rng(5)
        with pytest.raises(UnknownMetricTag):
            monotone_metric("geo", full_rank_qubit_family(rng), 0.5)


class TestPovm:
    def test_sum_to_identity_enforced(self):
        with pytest.raises(DimensionMismatch):
            POVM(elements=(np.eye(2) / 2, np.eye(2) / 3))

    def test_positivity_enforced(self):
        with pytest.raises(DimensionMismatch):
            POVM(elements=(np.diag([1.5, 1.0]), np.diag([-0.5, 0.0])))

    def test_trivial_povm_gives_zero_information(self):
        rng = np.random.default_rng(6)
        rho_of = full_rank_qubit_family(rng)
        povm = POVM(elements=(np.eye(2),))
        assert fisher_of_povm(rho_of, 0.8, povm).value <= 1e-18

    def test_sld_projectors_saturate_qfi(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            rho_of = full_rank_qubit_family(rng)
            q = float(rng.uniform(0.3, 1.2))
            target = qfi(rho_of, q).value
            achieved = fisher_of_povm(rho_of, q, sld_povm(rho_of, q)).value
            assert achieved == pytest.approx(target, rel=1e-5)

    def test_random_povms_never_beat_qfi(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            rho_of = full_rank_qubit_family(rng)
            q = float(rng.uniform(0.3, 1.2))
            raw = [
                (lambda z: z @ z.conj().T)(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
                for _ in range(4)
            ]
            total = sum(raw)
            ev, V = np.linalg.eigh(total)
            isq = (V / np.sqrt(ev)) @ V.conj().T
            povm = POVM(elements=tuple(isq @ E @ isq for E in raw))
            assert fisher_of_povm(rho_of, q, povm).value <= qfi(rho_of, q).value + 1e-6

    def test_outcome_model_probabilities(self):
        rho_of = lambda q: np.diag([q, 1.0 - q]).astype(complex)
        povm = POVM(elements=(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])))
        dist = povm_outcome_model(rho_of, povm).at(0.25)
        assert np.allclose(dist.probs, [0.25, 0.75])
