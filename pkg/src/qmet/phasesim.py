"""Phase-estimation read-out of controlled energy measurements.

An n-qubit phase-estimation register interrogates the encoding unitary and
turns a controlled energy measurement into a read-out over bin indices
Q in {0, ..., 2^n - 1}:

* ideal mode assumes controlled evolutions are available; each energy level
  contributes a squared Dirichlet (Fejer-type) kernel,
* realistic mode replaces every controlled evolution by m rounds of universal
  controllization (controlled-SWAP sandwiches against a maximally mixed
  ancilla), which damps the interference terms by a^(2^(l-1) m) and offsets
  the phases by m arg[tr(U_{tau/m})/d].

A brute-force state-vector circuit simulation and an explicit
controllization superoperator serve as independent oracles for both read-out
formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import AliasingRisk, OracleTooLarge
from .fisher import (
    FisherReport,
    OutcomeDistribution,
    ProbabilityModel,
    classical_fisher,
)
from .linalg import (
    expm_unitary,
    partial_trace,
    require_density,
    require_hermitian,
    require_nondegenerate,
    require_unitary,
    tensor,
)
from .models import HamiltonianModel
from .numdiff import DEFAULT_DIFF, DiffSpec

IDEAL = "ideal"
REALISTIC = "realistic"


@dataclass(frozen=True)
class PhaseSimConfig:
    """Read-out configuration.

    n control qubits, m controllization subdivisions, base time tau (None
    selects 0.9 * 2 pi / (spectral range + 1e-6) at the working point),
    energy_shift added to all eigenvalues (None shifts the node's own
    spectrum to start at zero), control V (None = identity), preparation
    rho0, and encoding time t.
    """

    n: int
    m: int
    rho0: np.ndarray
    t: float
    tau: Optional[float] = None
    energy_shift: Optional[float] = None
    V: Optional[np.ndarray] = None

    def __post_init__(self):
        if not (1 <= self.n <= 12):
            raise ValueError(f"control-qubit count n must be in [1, 12], got {self.n}")
        if self.m < 1:
            raise ValueError(f"subdivision count m must be >= 1, got {self.m}")
        if self.tau is not None and self.tau <= 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        object.__setattr__(self, "rho0", require_density(self.rho0))
        if self.V is not None:
            object.__setattr__(self, "V", require_unitary(self.V))

    def control(self, dim: int) -> np.ndarray:
        return np.eye(dim, dtype=complex) if self.V is None else self.V

    def with_tau(self, tau: float) -> "PhaseSimConfig":
        return replace(self, tau=tau)


@dataclass(frozen=True)
class ControllizationFactors:
    """Damping a, phase offset phi, and accumulated error of universal controllization."""

    a: float
    phi: float
    eps_m: complex

    def __post_init__(self):
        if self.a > 1.0 + 1e-12:
            raise ValueError(f"damping factor a = {self.a} exceeds 1")


def controllization_factors(U, m: int) -> ControllizationFactors:
    """a e^{i phi} = tr(U)/d and eps_m = (tr(U)/d)^m - 1 for one subdivision unitary."""
    u = require_unitary(U)
    z = np.trace(u) / u.shape[0]
    a = abs(z)
    phi = float(np.angle(z)) if a >= 1e-14 else 0.0
    return ControllizationFactors(a=float(a), phi=phi, eps_m=z**m - 1.0)


def energy_probs(model: HamiltonianModel, theta: float, t: float, V, rho0) -> OutcomeDistribution:
    """Pr_theta(j) = <xi_j|V rho_theta V^dag|xi_j> over ascending energy index j."""
    v = require_unitary(V)
    rho = require_density(rho0)
    ev, W = np.linalg.eigh(require_hermitian(model.h_of(theta)))
    require_nondegenerate(ev)
    u_t = expm_unitary(model.h_of(theta), t)
    M = v @ (u_t @ rho @ u_t.conj().T) @ v.conj().T
    probs = np.einsum("ij,jk,ki->i", W.conj().T, M, W).real
    return OutcomeDistribution(outcomes=tuple(range(ev.shape[0])),
                               probs=np.clip(probs, 0.0, None))


def _spectrum(model: HamiltonianModel, theta: float) -> np.ndarray:
    ev = np.linalg.eigvalsh(require_hermitian(model.h_of(theta)))
    require_nondegenerate(ev)
    return ev


def default_tau(model: HamiltonianModel, theta: float) -> float:
    """0.9 * 2 pi / (spectral range + 1e-6) at the working point."""
    ev = _spectrum(model, theta)
    return 0.9 * 2.0 * math.pi / (float(ev[-1] - ev[0]) + 1e-6)


def aligned_tau(model: HamiltonianModel, theta: float, n: int) -> float:
    """Largest tau placing the full spectral range on the 2^n-bin phase grid.

    tau * range = 2 pi (2^n - 1)/2^n, so every eigenvalue of a two-level
    spectrum sits exactly on a read-out bin while anti-aliasing still holds.
    """
    ev = _spectrum(model, theta)
    rng = float(ev[-1] - ev[0])
    if rng <= 0:
        raise AliasingRisk("spectrum has zero range; no informative read-out grid")
    return 2.0 * math.pi * (2**n - 1) / (2**n * rng)


def _resolve_tau(cfg: PhaseSimConfig, model: HamiltonianModel, theta: float) -> float:
    return cfg.tau if cfg.tau is not None else default_tau(model, theta)


def _shifted_spectrum(cfg: PhaseSimConfig, model: HamiltonianModel, theta: float,
                      tau: float) -> np.ndarray:
    ev = _spectrum(model, theta)
    span = float(ev[-1] - ev[0])
    if tau * span >= 2.0 * math.pi:
        raise AliasingRisk(
            f"tau * spectral range = {tau * span:.6f} >= 2 pi; bins are not injective"
        )
    shift = -float(ev[0]) if cfg.energy_shift is None else float(cfg.energy_shift)
    return ev + shift


def _kernel(alpha: np.ndarray, n: int) -> np.ndarray:
    """Squared Dirichlet kernel (sin(2^n a/2) / (2^n sin(a/2)))^2 with its removable limit."""
    N = 2**n
    half = alpha / 2.0
    s = np.sin(half)
    singular = np.abs(s) < 1e-9
    safe = np.where(singular, 1.0, s)
    return np.where(singular, 1.0, (np.sin(N * half) / (N * safe)) ** 2)


def ideal_distribution(cfg: PhaseSimConfig, model: HamiltonianModel,
                       theta: float) -> OutcomeDistribution:
    """Read-out distribution over Q assuming exact controlled evolutions."""
    tau = _resolve_tau(cfg, model, theta)
    xi = _shifted_spectrum(cfg, model, theta, tau)
    p = energy_probs(model, theta, cfg.t, cfg.control(model.dim), cfg.rho0).probs
    Q = np.arange(2**cfg.n)
    alpha = tau * xi[:, None] + 2.0 * math.pi * Q[None, :] / 2**cfg.n
    probs = (p[:, None] * _kernel(alpha, cfg.n)).sum(axis=0)
    return OutcomeDistribution(outcomes=tuple(Q.tolist()), probs=probs)


def _shifted_hamiltonian(cfg: PhaseSimConfig, model: HamiltonianModel,
                         theta: float) -> np.ndarray:
    ev = _spectrum(model, theta)
    shift = -float(ev[0]) if cfg.energy_shift is None else float(cfg.energy_shift)
    return model.h_of(theta) + shift * np.eye(model.dim)


def realistic_distribution(cfg: PhaseSimConfig, model: HamiltonianModel,
                           theta: float) -> OutcomeDistribution:
    """Read-out distribution over Q with universal controllization.

    Pr(Q) = 2^-n sum_j p_j prod_l [1 + a^(2^(l-1) m) cos(2^(l-1) beta_jQ)],
    beta_jQ = tau xi_j + 2 pi Q / 2^n + m phi, with (a, phi) taken from the
    subdivision unitary exp(-i (tau/m) H_shifted) at the same parameter value.
    """
    tau = _resolve_tau(cfg, model, theta)
    xi = _shifted_spectrum(cfg, model, theta, tau)
    p = energy_probs(model, theta, cfg.t, cfg.control(model.dim), cfg.rho0).probs
    u_sub = expm_unitary(_shifted_hamiltonian(cfg, model, theta), tau / cfg.m)
    factors = controllization_factors(u_sub, cfg.m)
    Q = np.arange(2**cfg.n)
    beta = tau * xi[:, None] + 2.0 * math.pi * Q[None, :] / 2**cfg.n + cfg.m * factors.phi
    prod = np.ones((model.dim, 2**cfg.n))
    for level in range(1, cfg.n + 1):
        w = 2 ** (level - 1)
        prod *= 1.0 + factors.a ** (w * cfg.m) * np.cos(w * beta)
    probs = (p[:, None] * prod).sum(axis=0) / 2**cfg.n
    return OutcomeDistribution(outcomes=tuple(Q.tolist()), probs=np.clip(probs, 0.0, None))


def readout_model(cfg: PhaseSimConfig, model: HamiltonianModel, theta: float,
                  mode: str = IDEAL) -> ProbabilityModel:
    """theta' -> read-out distribution, with tau frozen at the working point.

    The energy shift is re-derived from each node's own spectrum, so its
    parameter dependence is part of the statistical model.
    """
    if mode not in (IDEAL, REALISTIC):
        raise ValueError(f"mode must be 'ideal' or 'realistic', got {mode!r}")
    frozen = cfg.with_tau(_resolve_tau(cfg, model, theta))
    dist = ideal_distribution if mode == IDEAL else realistic_distribution

    def at(x: float) -> OutcomeDistribution:
        return dist(frozen, model, x)

    return ProbabilityModel(at=at, theta_domain=model.theta_domain)


def fisher_phase_readout(
    cfg: PhaseSimConfig,
    model: HamiltonianModel,
    theta: float,
    diff: DiffSpec = DEFAULT_DIFF,
    mode: str = IDEAL,
) -> FisherReport:
    """Fisher information of the phase-estimation read-out distribution.

    The parameter enters the level weights, the (shifted) eigenvalues inside
    the kernel, and, in realistic mode, the controllization damping and phase.
    """
    return classical_fisher(readout_model(cfg, model, theta, mode), theta, diff)


def tune_tau(
    cfg: PhaseSimConfig,
    model: HamiltonianModel,
    theta: float,
    mode: str = REALISTIC,
    diff: DiffSpec = DEFAULT_DIFF,
    coarse: int = 32,
    refine: int = 16,
) -> float:
    """Deterministic scan for the tau maximizing the read-out Fisher information.

    Controllization damping favours small tau while bin resolution favours
    large tau, so the optimum is model-dependent; a coarse geometric scan is
    refined once around the best candidate.
    """
    hi = 0.98 * 2.0 * math.pi / (float(np.ptp(_spectrum(model, theta))) + 1e-6)
    taus = np.geomspace(hi / 300.0, hi, coarse)

    def fi(tau: float) -> float:
        try:
            return fisher_phase_readout(cfg.with_tau(tau), model, theta, diff, mode).value
        except AliasingRisk:
            return -np.inf

    values = [fi(tau) for tau in taus]
    best = int(np.argmax(values))
    lo_r = taus[max(best - 1, 0)]
    hi_r = taus[min(best + 1, len(taus) - 1)]
    fine = np.linspace(lo_r, hi_r, refine)
    fine_values = [fi(tau) for tau in fine]
    candidates = np.concatenate([taus, fine])
    all_values = np.array(values + fine_values)
    return float(candidates[int(np.argmax(all_values))])


# --- brute-force oracles -------------------------------------------------------------


def circuit_oracle(cfg: PhaseSimConfig, model: HamiltonianModel,
                   theta: float) -> OutcomeDistribution:
    """State-vector simulation of the ideal protocol.

    Hadamards on n control qubits, controlled powers U_tau^(2^(l-1)) coupling
    qubit l, inverse Fourier transform, and a computational-basis read-out.
    Limited to n <= 6 and system dimension <= 4.
    """
    d = model.dim
    if cfg.n > 6 or d > 4:
        raise OracleTooLarge(f"oracle limited to n <= 6 and d <= 4, got n={cfg.n}, d={d}")
    tau = _resolve_tau(cfg, model, theta)
    _shifted_spectrum(cfg, model, theta, tau)  # aliasing guard
    u_tau = expm_unitary(_shifted_hamiltonian(cfg, model, theta), tau)
    u_t = expm_unitary(model.h_of(theta), cfg.t)
    v = cfg.control(d)
    n_states = 2**cfg.n

    # Mixed preparations enter as ensembles over eigenvectors.
    evals, evecs = np.linalg.eigh(cfg.rho0)
    probs = np.zeros(n_states)
    for weight, k in zip(evals, range(d)):
        if weight < 1e-14:
            continue
        psi = v @ (u_t @ evecs[:, k])
        amp = np.tile(psi / math.sqrt(n_states), (n_states, 1))
        for level in range(1, cfg.n + 1):
            u_pow = np.linalg.matrix_power(u_tau, 2 ** (level - 1))
            sel = (np.arange(n_states) >> (level - 1)) & 1 == 1
            amp[sel] = amp[sel] @ u_pow.T
        amp = np.fft.fft(amp, axis=0) / math.sqrt(n_states)
        probs += weight * (np.abs(amp) ** 2).sum(axis=1)
    return OutcomeDistribution(outcomes=tuple(range(n_states)), probs=probs)


def _controlled_swap(d: int) -> np.ndarray:
    """Control qubit |0> swaps system and ancilla; |1> leaves them alone."""
    swap = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            swap[i * d + j, j * d + i] = 1.0
    out = np.zeros((2 * d * d, 2 * d * d))
    out[: d * d, : d * d] = swap
    out[d * d:, d * d:] = np.eye(d * d)
    return out


def controllization_oracle(U, x1: int, y1: int, rho_sys, m: int,
                           check: bool = True) -> np.ndarray:
    """Explicit m-step controllization of the control-system block |x1><y1| (x) rho.

    Each step sandwiches the uncontrolled U between controlled-SWAPs against
    a maximally mixed ancilla, traces the ancilla out, and resets it.  The
    result equals a^(|x1-y1| m) e^{i (y1-x1) m phi} C_{U^m}[|x1><y1| (x) rho];
    with check=True the closed form is verified to 1e-10.
    """
    u = require_unitary(U)
    d = u.shape[0]
    if d > 6:
        raise OracleTooLarge(f"controllization oracle limited to d <= 6, got {d}")
    if x1 not in (0, 1) or y1 not in (0, 1):
        raise ValueError("control indices must be 0 or 1")
    rho = np.asarray(rho_sys, dtype=complex)
    cswap = _controlled_swap(d)
    w = cswap @ tensor(np.eye(2), tensor(u, np.eye(d))) @ cswap

    ket = np.zeros(2)
    ket[x1] = 1.0
    bra = np.zeros(2)
    bra[y1] = 1.0
    block = tensor(np.outer(ket, bra), rho)
    for _ in range(m):
        full = w @ tensor(block, np.eye(d) / d) @ w.conj().T
        block = partial_trace(full, (2 * d, d), keep="first")

    if check:
        factors = controllization_factors(u, m)
        u_m = np.linalg.matrix_power(u, m)
        branch = np.outer(ket, bra)
        left = u_m if x1 == 1 else np.eye(d)
        right = u_m.conj().T if y1 == 1 else np.eye(d)
        expected = (factors.a ** (abs(x1 - y1) * m)
                    * np.exp(1j * (y1 - x1) * m * factors.phi)
                    * tensor(branch, left @ rho @ right))
        if np.max(np.abs(block - expected)) > 1e-10:
            raise ArithmeticError("controllization closed form violated beyond 1e-10")
    return block
