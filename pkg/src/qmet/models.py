"""Parametrized Hamiltonian families and their closed-form reference functions.

Each factory returns a ``HamiltonianModel`` exposing H(theta), an analytic
theta-derivative where available, and the open parameter domain.  The
``reference`` registry collects the closed-form Fisher-information
expressions used as oracles for the numeric machinery:

* qubit in a field of known magnitude, unknown direction theta,
* qubit with unknown x-component theta of the field,
* spin-1 (NV-center style) probe of a weak axial field,
* bosonic mode of unknown frequency read out through a two-level atom,
* mechanical oscillator in a uniform gravitational field (closed forms only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import InvalidParameter, UnknownReference
from .fisher import OutcomeDistribution, ProbabilityModel
from .linalg import expm_unitary

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

# Spin-1 matrices with the normalization used by the NV closed forms below
# (sqrt(2) prefactor on S_x, S_y and 2 on S_z; twice the conventional spin-1).
SPIN1_X = math.sqrt(2) * np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex)
SPIN1_Y = math.sqrt(2) * 1j * np.array([[0, -1, 0], [1, 0, -1], [0, 1, 0]], dtype=complex)
SPIN1_Z = 2.0 * np.diag([1.0, 0.0, -1.0]).astype(complex)


@dataclass(frozen=True)
class HamiltonianModel:
    """A named family theta -> H(theta) with parameters and optional analytic derivative."""

    name: str
    dim: int
    params: dict
    h_of: Callable[[float], np.ndarray]
    dh_of: Optional[Callable[[float], np.ndarray]] = None
    theta_domain: tuple[float, float] = (-np.inf, np.inf)

    def u_of(self, theta: float, t: float) -> np.ndarray:
        """Time-evolution unitary exp(-i t H(theta))."""
        return expm_unitary(self.h_of(theta), t)


def make_qubit_direction(omega: float) -> HamiltonianModel:
    """H(theta) = omega (cos(theta) sigma_z + sin(theta) sigma_x), theta in (0, pi)."""
    if omega <= 0:
        raise InvalidParameter(f"omega must be positive, got {omega}")
    return HamiltonianModel(
        name="qubit-direction",
        dim=2,
        params={"omega": omega},
        h_of=lambda q: omega * (math.cos(q) * SIGMA_Z + math.sin(q) * SIGMA_X),
        dh_of=lambda q: omega * (-math.sin(q) * SIGMA_Z + math.cos(q) * SIGMA_X),
        theta_domain=(0.0, math.pi),
    )


def make_qubit_xcomponent(omega: float) -> HamiltonianModel:
    """H(theta) = -omega sigma_z + theta sigma_x, eigenvalues +-sqrt(omega^2+theta^2)."""
    if omega <= 0:
        raise InvalidParameter(f"omega must be positive, got {omega}")
    return HamiltonianModel(
        name="qubit-xcomponent",
        dim=2,
        params={"omega": omega},
        h_of=lambda q: -omega * SIGMA_Z + q * SIGMA_X,
        dh_of=lambda q: SIGMA_X.copy(),
        theta_domain=(-np.inf, np.inf),
    )


def make_nv_spin1(mu: float, D: float, E: float) -> HamiltonianModel:
    """H(theta) = mu theta S_z + D S_z^2 + E (S_x^2 - S_y^2) on the spin-1 triplet."""
    if mu <= 0:
        raise InvalidParameter(f"mu must be positive, got {mu}")
    if D < 0 or E < 0:
        raise InvalidParameter("zero-field splittings D, E must be nonnegative")
    zz = SPIN1_Z @ SPIN1_Z
    xy = SPIN1_X @ SPIN1_X - SPIN1_Y @ SPIN1_Y
    return HamiltonianModel(
        name="nv-spin1",
        dim=3,
        params={"mu": mu, "D": D, "E": E},
        h_of=lambda q: mu * q * SPIN1_Z + D * zz + E * xy,
        dh_of=lambda q: mu * SPIN1_Z,
        theta_domain=(0.0, np.inf),
    )


def _ladder(n_max: int) -> np.ndarray:
    """Annihilation operator truncated at Fock level n_max."""
    a = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    for n in range(1, n_max + 1):
        a[n - 1, n] = math.sqrt(n)
    return a


def jc_coupling(omega: float, kappa: float, n_max: int) -> np.ndarray:
    """Atom-field interaction Omega (a^dag sigma_- + a sigma_+) with Omega = kappa sqrt(omega).

    Atom factor first (|g>, |e>), field factor second.
    """
    a = _ladder(n_max)
    sm = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |g><e|
    sp = sm.conj().T
    return kappa * math.sqrt(omega) * (np.kron(sm, a.conj().T) + np.kron(sp, a))


def make_jaynes_cummings(omega: float, kappa: float, n_max: int = 8) -> HamiltonianModel:
    """Free field plus atom-field coupling on the truncated atom (x) field space.

    H(omega') = I_2 (x) omega'(a^dag a + 1/2) + kappa sqrt(omega') (a^dag sigma_- + a sigma_+);
    the estimated parameter omega' enters both the field frequency and the coupling.
    """
    if omega <= 0:
        raise InvalidParameter(f"omega must be positive, got {omega}")
    if kappa < 0:
        raise InvalidParameter(f"kappa must be nonnegative, got {kappa}")
    if n_max < 2:
        raise InvalidParameter(f"Fock truncation must be at least 2, got {n_max}")
    a = _ladder(n_max)
    number = a.conj().T @ a
    eye_f = np.eye(n_max + 1, dtype=complex)
    eye_2 = np.eye(2, dtype=complex)

    def h_of(w: float) -> np.ndarray:
        return np.kron(eye_2, w * (number + 0.5 * eye_f)) + jc_coupling(w, kappa, n_max)

    def dh_of(w: float) -> np.ndarray:
        return np.kron(eye_2, number + 0.5 * eye_f) + jc_coupling(w, kappa, n_max) / (2.0 * w)

    return HamiltonianModel(
        name="jaynes-cummings",
        dim=2 * (n_max + 1),
        params={"omega": omega, "kappa": kappa, "n_max": n_max},
        h_of=h_of,
        dh_of=dh_of,
        theta_domain=(0.0, np.inf),
    )


def jc_field_state(omega: float, t: float, alpha0: complex, alpha1: complex,
                   n_max: int) -> np.ndarray:
    """Field state alpha0 e^{-i w t/2}|0> + alpha1 e^{-3i w t/2}|1>, zero-padded to n_max."""
    v = np.zeros(n_max + 1, dtype=complex)
    v[0] = alpha0 * np.exp(-0.5j * omega * t)
    v[1] = alpha1 * np.exp(-1.5j * omega * t)
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > 1e-12:
        raise InvalidParameter("field amplitudes must be normalized")
    return v


def jc_readout_model(kappa: float, t: float, alpha0: complex, alpha1: complex,
                     n_max: int = 8) -> ProbabilityModel:
    """Atom ground/excited read-out probabilities as a function of the field frequency.

    The field is prepared in the two-level superposition, freely evolved for
    time t, coupled to an atom in its ground state through the truncated
    interaction for the same time t, and the atom is then measured.  Both the
    free phases and the coupling carry the frequency dependence; the atomic
    outcome probabilities depend on it only through the coupling.
    """
    eye_f = np.eye(n_max + 1, dtype=complex)

    def at(w: float) -> OutcomeDistribution:
        if w <= 0:
            raise InvalidParameter(f"frequency must be positive, got {w}")
        psi_f = jc_field_state(w, t, alpha0, alpha1, n_max)
        joint = np.kron(np.array([1.0, 0.0], dtype=complex), psi_f)  # atom in |g>
        u_int = expm_unitary(jc_coupling(w, kappa, n_max), t)
        out = u_int @ joint
        p_ground = float(np.linalg.norm(out[: n_max + 1]) ** 2)
        p_excited = float(np.linalg.norm(out[n_max + 1:]) ** 2)
        return OutcomeDistribution(outcomes=("ground", "excited"),
                                   probs=np.array([p_ground, p_excited]))

    return ProbabilityModel(at=at, theta_domain=(0.0, np.inf))


# --- closed-form reference functions ------------------------------------------------


def _direction_qfi(theta: float, omega: float, t: float) -> float:
    wt = omega * t
    return 4.0 * math.sin(wt) ** 2 - math.sin(2.0 * wt) ** 2 * math.sin(theta) ** 2


def _direction_max_qfi(omega: float, t: float) -> float:
    return 4.0 * math.sin(omega * t) ** 2


def _direction_g(omega: float, t: float) -> float:
    return (2.0 * abs(math.sin(omega * t)) + 1.0) ** 2


def _xcomponent_max_qfi(theta: float, omega: float, t: float) -> float:
    om2 = omega * omega + theta * theta
    return 2.0 / om2**2 * (
        2.0 * om2 * t * t * theta * theta
        - omega * omega * math.cos(2.0 * math.sqrt(om2) * t)
        + omega * omega
    )


def _xcomponent_g(theta: float, omega: float, t: float) -> float:
    om2 = omega * omega + theta * theta
    return (omega / om2 + math.sqrt(_xcomponent_max_qfi(theta, omega, t))) ** 2


def _nv_chi(theta: float, mu: float, E: float) -> float:
    return math.sqrt(theta * theta * mu * mu + 4.0 * E * E)


def _nv_max_qfi(theta: float, mu: float, E: float, t: float) -> float:
    chi = _nv_chi(theta, mu, E)
    return 8.0 * mu * mu * (
        2.0 * theta * theta * mu * mu * t * t * chi * chi
        + E * E
        - E * E * math.cos(4.0 * chi * t)
    ) / chi**4


def _nv_g(theta: float, mu: float, E: float, t: float) -> float:
    chi = _nv_chi(theta, mu, E)
    return (2.0 * E * mu / chi**2 + math.sqrt(_nv_max_qfi(theta, mu, E, t))) ** 2


def _jc_qfi(t: float, alpha1_sq: float) -> float:
    return 4.0 * t * t * alpha1_sq * (1.0 - alpha1_sq)


def _jc_fc(omega: float, kappa: float, t: float, alpha1_sq: float) -> float:
    Om = kappa * math.sqrt(omega)
    s2 = math.sin(Om * t) ** 2
    return (Om * t / omega) ** 2 * alpha1_sq * (1.0 - s2) / (1.0 - alpha1_sq * s2)


def _jc_enhancement_threshold(omega: float, kappa: float, t: float) -> float:
    """Largest |alpha0|^2 for which the atomic read-out beats the best regular measurement."""
    Om = kappa * math.sqrt(omega)
    t2 = math.tan(Om * t) ** 2
    if t2 < 1e-30:
        return math.inf
    return (math.sqrt(1.0 + (Om / omega) ** 2 * t2) - 1.0) / (2.0 * t2)


def _oscillator_qfi(m: float, omega: float, t: float) -> float:
    return 8.0 * m / omega**3 * math.sin(omega * t / 2.0) ** 2


def _oscillator_fc(m: float, omega: float) -> float:
    return 2.0 * m / omega**3


def _oscillator_gamma(omega: float, t: float) -> float:
    return 1.0 / (4.0 * math.sin(omega * t / 2.0) ** 2)


@dataclass(frozen=True)
class ClosedFormReference:
    """A named closed-form expression callable with keyword arguments."""

    name: str
    formula: Callable[..., float]
    provenance: str

    def __call__(self, **kwargs) -> float:
        return self.formula(**kwargs)


_REFERENCES = {
    r.name: r
    for r in (
        ClosedFormReference("direction_qfi", _direction_qfi,
                            "field-direction qubit, ground-state preparation"),
        ClosedFormReference("direction_max_qfi", _direction_max_qfi,
                            "field-direction qubit, best preparation"),
        ClosedFormReference("direction_g", _direction_g,
                            "field-direction qubit, controlled-energy-measurement bound"),
        ClosedFormReference("xcomponent_max_qfi", _xcomponent_max_qfi,
                            "field x-component qubit, best preparation"),
        ClosedFormReference("xcomponent_g", _xcomponent_g,
                            "field x-component qubit, controlled-energy-measurement bound"),
        ClosedFormReference("nv_max_qfi", _nv_max_qfi,
                            "spin-1 axial-field probe, best preparation"),
        ClosedFormReference("nv_g", _nv_g,
                            "spin-1 axial-field probe, controlled-energy-measurement bound"),
        ClosedFormReference("jc_qfi", _jc_qfi,
                            "bosonic-mode frequency, best regular measurement"),
        ClosedFormReference("jc_fc", _jc_fc,
                            "bosonic-mode frequency, atomic read-out"),
        ClosedFormReference("jc_enhancement_threshold", _jc_enhancement_threshold,
                            "bosonic-mode frequency, read-out enhancement region"),
        ClosedFormReference("oscillator_qfi", _oscillator_qfi,
                            "oscillator in uniform field, best regular measurement"),
        ClosedFormReference("oscillator_fc", _oscillator_fc,
                            "oscillator in uniform field, energy measurement"),
        ClosedFormReference("oscillator_gamma", _oscillator_gamma,
                            "oscillator in uniform field, energy-measurement advantage"),
    )
}


def reference(name: str) -> ClosedFormReference:
    """Look up a registered closed-form reference by name."""
    try:
        return _REFERENCES[name]
    except KeyError:
        raise UnknownReference(
            f"{name!r}; known references: {', '.join(sorted(_REFERENCES))}"
        ) from None


def reference_names() -> tuple:
    return tuple(sorted(_REFERENCES))
