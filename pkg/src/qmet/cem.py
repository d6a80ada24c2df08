"""Controlled energy measurements: generators, the precision bound, and optimizers.

A controlled energy measurement applies a parameter-independent unitary
control V and then measures the (parameter-dependent) energy eigenbasis.
Under a moduli-matching condition on the extremal eigenvectors of the
diagonalizer's local generator, the maximum extractable Fisher information
has the closed form

    G(theta) = [sigma(g_dyn) + sigma(g_diag)]^2,

where g_dyn and g_diag are the local generators i dU U^dag of the encoding
unitary and of the (gauge-continuous) diagonalizer family, and sigma is the
spectral gap.  The bound comes with an explicit optimal control and optimal
preparation; an independent derivative-free optimizer cross-checks it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import numdiff
from .errors import DegenerateSpectrum, DomainBoundary, NonSmoothFamily, QmetError
from .fisher import FisherReport, OutcomeDistribution, ProbabilityModel, classical_fisher
from .linalg import (
    eig_hermitian,
    expm_unitary,
    fix_phases,
    require_density,
    require_hermitian,
    require_nondegenerate,
    require_state,
    require_unitary,
    spectral_gap,
)
from .models import HamiltonianModel
from .numdiff import DEFAULT_DIFF, DiffSpec

GENERATOR_HERMITICITY_TOL = 1e-8
CONDITION_TOL = 1e-8
SUPPORT_EPS = 1e-12


@dataclass(frozen=True)
class GeneratorPair:
    """Local generators of the encoding unitary and of the diagonalizer family."""

    g_dyn: np.ndarray
    g_diag: np.ndarray
    gaps: tuple[float, float]
    theta: float
    t: float


@dataclass(frozen=True)
class CemSolution:
    """The closed-form bound with its optimal control and preparation.

    When ``condition_holds`` is false the bound is still returned but is only
    an upper bound; it is achievable whenever the extremal-eigenvector
    moduli-matching condition is satisfied.
    """

    G_value: float
    condition_holds: bool
    V_opt: np.ndarray
    psi_opt: np.ndarray
    phi: float


def _check_domain(model: HamiltonianModel, theta: float, radius: float) -> None:
    lo, hi = model.theta_domain
    if theta - radius <= lo or theta + radius >= hi:
        raise DomainBoundary(
            f"stencil [{theta - radius}, {theta + radius}] leaves the open domain ({lo}, {hi})"
        )


def diagonalizer(model: HamiltonianModel, theta: float) -> np.ndarray:
    """Unitary S whose rows are the energy eigenbra's, ground state first.

    S H(theta) S^dag = diag(xi_0 <= ... <= xi_{d-1}); rows use the phase-fixed
    gauge.  Raises DegenerateSpectrum for (near-)degenerate Hamiltonians.
    """
    es = eig_hermitian(model.h_of(theta))
    require_nondegenerate(es.eigenvalues)
    return es.eigenvectors[:, ::-1].conj().T


def diagonalizer_family(model: HamiltonianModel, theta: float, phases=None):
    """theta' -> S(theta'), gauge-continuous around the anchor point theta.

    At the anchor the rows are phase-fixed eigenbra's in ascending energy
    order (optionally twisted by fixed per-row phases, used to probe gauge
    robustness).  At nearby theta' every eigenvector is matched to the anchor
    eigenvector of maximal overlap modulus and rephased so that the overlap
    with the anchor vector is real and positive.
    """
    es0 = eig_hermitian(model.h_of(theta))
    require_nondegenerate(es0.eigenvalues)
    anchor = es0.eigenvectors[:, ::-1]  # columns, ascending energy
    if phases is not None:
        anchor = anchor * np.exp(1j * np.asarray(phases))[None, :]
    d = anchor.shape[0]

    def s_of(x: float) -> np.ndarray:
        ev, V = np.linalg.eigh(require_hermitian(model.h_of(x)))
        require_nondegenerate(ev)
        cols = np.empty_like(anchor)
        used = np.zeros(d, dtype=bool)
        for k in range(d):
            overlaps = np.abs(anchor[:, k].conj() @ V)
            overlaps[used] = -1.0
            j = int(np.argmax(overlaps))
            used[j] = True
            s = np.vdot(anchor[:, k], V[:, j])
            cols[:, k] = V[:, j] * (s.conjugate() / abs(s)) if abs(s) > 0 else V[:, j]
        return cols.conj().T

    return s_of


def local_generator(u_of, theta: float, diff: DiffSpec = DEFAULT_DIFF) -> np.ndarray:
    """Local generator i (dU/dtheta) U^dag of a smooth unitary family.

    Raises NonSmoothFamily when the numerical generator fails Hermiticity,
    which signals a gauge discontinuity or a kink in the family.
    """
    u0 = np.asarray(u_of(theta), dtype=complex)
    du, _ = numdiff.derivative(lambda x: np.asarray(u_of(x), dtype=complex), theta, diff)
    g = 1j * du @ u0.conj().T
    defect = np.max(np.abs(g - g.conj().T))
    if defect > GENERATOR_HERMITICITY_TOL * (1.0 + np.max(np.abs(g))):
        raise NonSmoothFamily(f"generator Hermiticity defect {defect:.3e}")
    return (g + g.conj().T) / 2.0


def generator_pair(
    model: HamiltonianModel, theta: float, t: float, diff: DiffSpec = DEFAULT_DIFF,
    phases=None,
) -> GeneratorPair:
    """Generators of the encoding unitary exp(-i t H) and of the diagonalizer."""
    _check_domain(model, theta, numdiff.stencil_radius(theta, diff))
    g_dyn = local_generator(lambda x: model.u_of(x, t), theta, diff)
    g_diag = local_generator(diagonalizer_family(model, theta, phases=phases), theta, diff)
    return GeneratorPair(
        g_dyn=g_dyn,
        g_diag=g_diag,
        gaps=(spectral_gap(g_dyn), spectral_gap(g_diag)),
        theta=theta,
        t=t,
    )


def check_condition(g_diag, support=None, tol: float = CONDITION_TOL) -> bool:
    """Moduli-matching condition on the extremal eigenvectors of g_diag.

    True iff |<j|v_max>| = |<j|v_min>| within tol for every j in the support
    index set (all components by default).  Components where both moduli
    vanish satisfy the condition trivially.
    """
    es = eig_hermitian(require_hermitian(g_diag))
    v_top, v_bot = es.eigenvectors[:, 0], es.eigenvectors[:, -1]
    idx = range(v_top.shape[0]) if support is None else support
    return all(abs(abs(v_top[j]) - abs(v_bot[j])) <= tol for j in idx)


def g_bound(
    model: HamiltonianModel,
    theta: float,
    t: float,
    diff: DiffSpec = DEFAULT_DIFF,
    phi: float = math.pi / 2.0,
) -> CemSolution:
    """Closed-form bound G = (sigma(g_dyn) + sigma(g_diag))^2 with its optimizers.

    The optimal control is V = S^dag R1^dag R2 with R1, R2 the
    descending-ordered diagonalizers of g_diag and g_dyn; the optimal
    preparation is the balanced superposition of the extremal eigenvectors of
    g_diag pulled back through S V U_t, with relative phase phi.
    """
    pair = generator_pair(model, theta, t, diff)
    sigma_dyn, sigma_diag = pair.gaps
    g_value = (sigma_dyn + sigma_diag) ** 2

    es_diag = eig_hermitian(pair.g_diag)  # descending, phase-fixed
    es_dyn = eig_hermitian(pair.g_dyn)
    r1 = es_diag.eigenvectors.conj().T
    r2 = es_dyn.eigenvectors.conj().T
    s = diagonalizer(model, theta)
    v_opt = s.conj().T @ r1.conj().T @ r2

    u_tilde = s @ v_opt @ model.u_of(theta, t)
    v_top, v_bot = es_diag.eigenvectors[:, 0], es_diag.eigenvectors[:, -1]
    psi_opt = u_tilde.conj().T @ ((v_top + np.exp(1j * phi) * v_bot) / math.sqrt(2.0))

    return CemSolution(
        G_value=g_value,
        condition_holds=check_condition(pair.g_diag),
        V_opt=v_opt,
        psi_opt=psi_opt,
        phi=phi,
    )


def cem_outcome_model(
    model: HamiltonianModel, t: float, V, rho0
) -> ProbabilityModel:
    """Outcome model Pr_theta(j) = <xi_j,theta| V rho_theta V^dag |xi_j,theta>.

    Outcomes are identified across parameter values by their spectral index j
    (ascending energy order), never by the eigenvalue itself.
    """
    v = require_unitary(V)
    rho = require_density(rho0)

    def at(x: float) -> OutcomeDistribution:
        ev, W = np.linalg.eigh(require_hermitian(model.h_of(x)))
        require_nondegenerate(ev)
        u_t = expm_unitary(model.h_of(x), t)
        rho_x = u_t @ rho @ u_t.conj().T
        M = v @ rho_x @ v.conj().T
        probs = np.einsum("ij,jk,ki->i", W.conj().T, M, W).real
        return OutcomeDistribution(outcomes=tuple(range(ev.shape[0])),
                                   probs=np.clip(probs, 0.0, None))

    return ProbabilityModel(at=at, theta_domain=model.theta_domain)


def fisher_cem(
    model: HamiltonianModel,
    theta: float,
    t: float,
    V,
    rho0,
    diff: DiffSpec = DEFAULT_DIFF,
) -> FisherReport:
    """Fisher information of a controlled energy measurement.

    The parameter moves both the state rho_theta and the measured eigenbasis,
    so this is a non-regular statistical model; the energy measurement V = I
    yields a t-independent value.
    """
    return classical_fisher(cem_outcome_model(model, t, V, rho0), theta, diff)


# --- independent derivative-free maximization ---------------------------------------


def _fast_objective(model: HamiltonianModel, theta: float, t: float, step: float):
    """CEM Fisher information as a cheap objective V, psi -> value.

    One eigendecomposition per stencil node serves both the encoding unitary
    and the measured eigenbasis; a plain central difference replaces the full
    reporting machinery.  Agrees with fisher_cem to the stencil's accuracy.
    """
    nodes = (theta - step, theta + step, theta)
    systems = []
    for x in nodes:
        E, W = np.linalg.eigh(require_hermitian(model.h_of(x)))
        require_nondegenerate(E)
        systems.append((np.exp(-1j * t * E), W))

    def value(V: np.ndarray, psi: np.ndarray) -> float:
        probs = []
        for phases, W in systems:
            w = V @ (W @ (phases * (W.conj().T @ psi)))
            probs.append(np.abs(W.conj().T @ w) ** 2)
        p_minus, p_plus, p0 = probs
        dp = (p_plus - p_minus) / (2.0 * step)
        mask = p0 > SUPPORT_EPS
        return float(np.sum(dp[mask] ** 2 / p0[mask]))

    return value


def _hermitian_from_params(x: np.ndarray, d: int) -> np.ndarray:
    """Map d^2 real parameters to a Hermitian matrix (diagonal first, then pairs)."""
    A = np.zeros((d, d), dtype=complex)
    A[np.diag_indices(d)] = x[:d]
    k = d
    for i in range(d):
        for j in range(i + 1, d):
            A[i, j] = x[k] + 1j * x[k + 1]
            A[j, i] = x[k] - 1j * x[k + 1]
            k += 2
    return A


def _state_from_angles(x: np.ndarray, d: int) -> np.ndarray:
    """Hyperspherical chart: d-1 mixing angles plus d-1 relative phases."""
    amps = np.ones(d)
    for i in range(d - 1):
        amps[i] *= math.cos(x[i])
        amps[i + 1:] *= math.sin(x[i])
    psi = amps.astype(complex)
    psi[1:] *= np.exp(1j * x[d - 1:])
    return psi


def _angles_from_state(psi: np.ndarray) -> np.ndarray:
    """Best-effort inverse of the hyperspherical chart (exact away from chart edges)."""
    d = psi.shape[0]
    v = psi * (psi[0].conjugate() / abs(psi[0])) if abs(psi[0]) > 1e-14 else psi.copy()
    r = np.abs(v)
    angles = np.zeros(2 * d - 2)
    tail = 1.0
    for i in range(d - 1):
        angles[i] = math.acos(min(max(r[i] / tail, 0.0), 1.0)) if tail > 1e-14 else 0.0
        tail *= math.sin(angles[i])
    angles[d - 1:] = np.angle(v[1:])
    return angles


def _golden_max(f, lo: float, hi: float, iters: int = 14):
    """Golden-section maximization on [lo, hi]; returns (x, f(x))."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    e = a + invphi * (b - a)
    fc, fe = f(c), f(e)
    for _ in range(iters):
        if fc >= fe:
            b, e, fe = e, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + invphi * (b - a)
            fe = f(e)
    return (c, fc) if fc >= fe else (e, fe)


def optimize_cem(
    model: HamiltonianModel,
    theta: float,
    t: float,
    budget: tuple[int, int] = (8, 400),
    seed: int = 0,
    diff: DiffSpec | None = None,
):
    """Derivative-free maximization of the CEM Fisher information.

    Coordinate-wise golden-section line search with cyclic passes over the
    d^2 control parameters (V = V_seed exp(-iA)) and the 2d-2 preparation
    parameters, multistarted.  One restart is seeded at the analytic optimum
    (V_opt, psi_opt), whose Fisher information is also evaluated directly, so
    the returned value never falls below it.  The remaining restarts start
    from Haar-random controls and random pure preparations.  budget =
    (restarts, line searches per restart); diff only sets the central-difference
    step of the internal objective.

    Returns (best Fisher information, best V, best psi).
    """
    restarts, iterations = budget
    if restarts < 1 or iterations < 1:
        raise ValueError("budget entries must be positive")
    step = diff.base_step(theta) if diff is not None else 1e-5 * (1.0 + abs(theta))
    _check_domain(model, theta, step)
    d = model.dim
    n_v = d * d
    n_p = 2 * d - 2
    rng = np.random.default_rng(seed)
    objective = _fast_objective(model, theta, t, step)

    def fi_of(V: np.ndarray, psi: np.ndarray) -> float:
        try:
            return objective(V, psi)
        except QmetError:
            return -np.inf

    sol = g_bound(model, theta, t)
    best_fi = fi_of(sol.V_opt, sol.psi_opt)
    best_v, best_psi = sol.V_opt, sol.psi_opt

    def haar(dim: int) -> np.ndarray:
        z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        q, r = np.linalg.qr(z)
        return q * (np.diagonal(r) / np.abs(np.diagonal(r)))

    for restart in range(restarts):
        if restart == 0:
            v_seed = sol.V_opt
            x = np.concatenate([np.zeros(n_v), _angles_from_state(sol.psi_opt)])
        else:
            v_seed = haar(d)
            z = rng.normal(size=d) + 1j * rng.normal(size=d)
            x = np.concatenate([np.zeros(n_v), _angles_from_state(z / np.linalg.norm(z))])

        def value_at(params: np.ndarray) -> float:
            V = v_seed @ expm_unitary(_hermitian_from_params(params[:n_v], d), 1.0)
            psi = _state_from_angles(params[n_v:], d)
            return fi_of(V, psi)

        current = value_at(x)
        radius = 0.6
        for it in range(iterations):
            coord = it % (n_v + n_p)
            if coord == 0 and it > 0:
                radius = max(radius * 0.8, 1e-3)

            def along(val: float, c=coord) -> float:
                y = x.copy()
                y[c] = val
                return value_at(y)

            xc, fc = _golden_max(along, x[coord] - radius, x[coord] + radius)
            if fc > current:
                x[coord] = xc
                current = fc
        if current > best_fi:
            best_fi = current
            best_v = v_seed @ expm_unitary(_hermitian_from_params(x[:n_v], d), 1.0)
            best_psi = _state_from_angles(x[n_v:], d)

    return best_fi, best_v, require_state(best_psi)


def max_gap_lemma_check(M1, M2, trials: int = 100, seed: int = 0):
    """Probe max_{U1,U2} sigma(U1 M1 U1^dag + U2 M2 U2^dag) = sigma(M1) + sigma(M2).

    Returns (numeric maximum, analytic value).  The numeric maximum runs over
    random unitary conjugation pairs plus the explicitly constructed aligning
    pair (simultaneous descending diagonalization), which achieves the
    analytic value exactly.
    """
    A = require_hermitian(M1)
    B = require_hermitian(M2)
    if A.shape != B.shape:
        raise ValueError("matrices must have equal dimension")
    if trials < 1:
        raise ValueError("trials must be positive")
    analytic = spectral_gap(A) + spectral_gap(B)
    rng = np.random.default_rng(seed)
    d = A.shape[0]

    # Aligning pair: conjugate both matrices to descending diagonal form.
    e1 = eig_hermitian(A)
    e2 = eig_hermitian(B)
    numeric = spectral_gap(np.diag(e1.eigenvalues + e2.eigenvalues))

    for _ in range(trials):
        z1 = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        z2 = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        u1, _ = np.linalg.qr(z1)
        u2, _ = np.linalg.qr(z2)
        numeric = max(numeric, spectral_gap(u1 @ A @ u1.conj().T + u2 @ B @ u2.conj().T))
    return numeric, analytic
