"""Fisher information of parametrized outcome distributions and quantum states.

Covers the classical Fisher information of a discrete probability model, the
symmetric logarithmic derivative and the SLD quantum Fisher information, the
pure-state (Fubini-Study) formula, the family of monotone metrics indexed by
an operator-monotone function, and the Fisher information induced by a fixed
POVM.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import numdiff
from .errors import (
    DimensionMismatch,
    DomainBoundary,
    NonNormalized,
    NotTraceless,
    RankChange,
    RankDeficient,
    UnknownMetricTag,
)
from .linalg import require_hermitian, require_state
from .numdiff import DEFAULT_DIFF, DiffSpec

SUPPORT_THRESHOLD = 1e-12
RANK_THRESHOLD = 1e-10


@dataclass(frozen=True)
class OutcomeDistribution:
    """Finite probability distribution over labeled measurement outcomes."""

    outcomes: tuple
    probs: np.ndarray
    support_threshold: float = SUPPORT_THRESHOLD

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", p)
        if len(self.outcomes) != p.shape[0]:
            raise DimensionMismatch("outcome labels and probabilities disagree in length")
        if abs(p.sum() - 1.0) > 1e-10:
            raise NonNormalized(f"probabilities sum to {p.sum()!r}")

    @property
    def support(self) -> np.ndarray:
        """Indices of outcomes with probability above the support threshold."""
        return np.flatnonzero(self.probs > self.support_threshold)

    def total_variation(self, other: "OutcomeDistribution") -> float:
        if self.probs.shape != other.probs.shape:
            raise DimensionMismatch("distributions have different outcome counts")
        return 0.5 * float(np.abs(self.probs - other.probs).sum())


@dataclass(frozen=True)
class ProbabilityModel:
    """theta -> OutcomeDistribution with a fixed, parameter-independent sample space."""

    at: Callable[[float], OutcomeDistribution]
    theta_domain: tuple[float, float] = (-np.inf, np.inf)


@dataclass(frozen=True)
class POVM:
    """A positive-operator valued measure: PSD elements summing to the identity."""

    elements: tuple

    def __post_init__(self):
        mats = tuple(require_hermitian(E) for E in self.elements)
        object.__setattr__(self, "elements", mats)
        d = mats[0].shape[0]
        total = np.zeros((d, d), dtype=complex)
        for E in mats:
            if E.shape[0] != d:
                raise DimensionMismatch("POVM elements have mixed dimensions")
            if np.linalg.eigvalsh(E).min() < -1e-10:
                raise DimensionMismatch("POVM element is not positive semi-definite")
            total += E
        if np.max(np.abs(total - np.eye(d))) > 1e-9:
            raise DimensionMismatch("POVM elements do not sum to the identity")

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]


@dataclass(frozen=True)
class FisherReport:
    """A Fisher-information value together with how it was differentiated."""

    value: float
    method: str
    step: float
    error_estimate: float = field(default=0.0)

    def __post_init__(self):
        if self.value < 0:
            raise ArithmeticError(f"negative Fisher information {self.value!r}")


def _check_domain(theta: float, radius: float, domain: tuple[float, float]) -> None:
    lo, hi = domain
    if theta - radius <= lo or theta + radius >= hi:
        raise DomainBoundary(
            f"stencil [{theta - radius}, {theta + radius}] leaves the open domain ({lo}, {hi})"
        )


def _probs_vector(model: ProbabilityModel, n_outcomes: int):
    def p_of(x: float) -> np.ndarray:
        dist = model.at(x)
        if dist.probs.shape[0] != n_outcomes:
            raise DimensionMismatch("outcome count changed across evaluation points")
        return dist.probs

    return p_of


def classical_fisher(
    model: ProbabilityModel, theta: float, diff: DiffSpec = DEFAULT_DIFF
) -> FisherReport:
    """Classical Fisher information sum over the support of the distribution.

    F(theta) = sum_{x in support} (d p_x / d theta)^2 / p_x, with the
    derivative taken by the requested scheme and outcomes whose probability
    falls below the support threshold excluded from the sum.
    """
    radius = numdiff.stencil_radius(theta, diff)
    _check_domain(theta, radius, model.theta_domain)
    center = model.at(theta)
    p = center.probs
    dp, dp_err = numdiff.derivative(_probs_vector(model, p.shape[0]), theta, diff)
    idx = center.support
    value = float(np.sum(dp[idx] ** 2 / p[idx]))
    err = float(np.sum(2.0 * np.abs(dp[idx]) * dp_err / p[idx]))
    return FisherReport(value=max(value, 0.0), method=diff.method,
                        step=diff.base_step(theta), error_estimate=err)


def sld(rho, drho, support_threshold: float = SUPPORT_THRESHOLD) -> np.ndarray:
    """Symmetric logarithmic derivative L solving drho = (rho L + L rho)/2.

    In the eigenbasis of rho, L_kl = 2 (drho)_kl / (p_k + p_l); matrix elements
    with p_k + p_l below the support threshold are set to zero (the operator is
    arbitrary outside the support of rho).
    """
    R = require_hermitian(rho)
    D = require_hermitian(drho)
    if R.shape != D.shape:
        raise DimensionMismatch(f"rho {R.shape} vs drho {D.shape}")
    tr = np.trace(D)
    if abs(tr) > 1e-9:
        raise NotTraceless(f"tr(drho) = {tr}")
    p, V = np.linalg.eigh(R)
    Dv = V.conj().T @ D @ V
    denom = p[:, None] + p[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        Lv = np.where(denom < support_threshold, 0.0, 2.0 * Dv / denom)
    return V @ Lv @ V.conj().T


def _rank_profile(rho: np.ndarray) -> int:
    return int(np.sum(np.linalg.eigvalsh(rho) > RANK_THRESHOLD))


def _state_derivative(rho_of, theta: float, diff: DiffSpec,
                      theta_domain: tuple[float, float]):
    """Central machinery shared by qfi and monotone_metric.

    Returns (rho, drho, drho_err) after verifying that the rank classification
    of the state does not change across the differentiation stencil.
    """
    rho = require_hermitian(rho_of(theta))
    radius = numdiff.stencil_radius(theta, diff)
    _check_domain(theta, radius, theta_domain)
    rank0 = _rank_profile(rho)
    for x in (theta - radius, theta + radius):
        if _rank_profile(require_hermitian(rho_of(x))) != rank0:
            raise RankChange(f"state rank changes between theta and {x}")
    drho, err = numdiff.derivative(lambda x: np.asarray(rho_of(x), dtype=complex), theta, diff)
    drho = (drho + drho.conj().T) / 2.0
    return rho, drho, err


def qfi(rho_of, theta: float, diff: DiffSpec = DEFAULT_DIFF,
        theta_domain: tuple[float, float] = (-np.inf, np.inf)) -> FisherReport:
    """SLD quantum Fisher information tr(rho L^2) of a state family."""
    rho, drho, _ = _state_derivative(rho_of, theta, diff, theta_domain)
    L = sld(rho, drho)
    value = float(np.trace(rho @ L @ L).real)
    return FisherReport(value=max(value, 0.0), method=diff.method,
                        step=diff.base_step(theta))


def qfi_pure(psi, dpsi) -> float:
    """Pure-state quantum Fisher information from the state and its derivative.

    4 Re[<dpsi|dpsi> + <psi|dpsi><psi|dpsi>]; invariant under a common phase
    rotation of (psi, dpsi), and zero when dpsi is a pure phase motion.
    """
    v = require_state(psi)
    dv = np.asarray(dpsi, dtype=complex).reshape(-1)
    if dv.shape != v.shape:
        raise DimensionMismatch(f"psi dim {v.shape[0]} != dpsi dim {dv.shape[0]}")
    overlap = np.vdot(v, dv)
    value = 4.0 * (np.vdot(dv, dv) + overlap * overlap).real
    return max(value, 0.0)


_MONOTONE_F = {
    "ari": lambda x: (1.0 + x) / 2.0,
    "har": lambda x: 2.0 * x / (1.0 + x),
    # (x-1)/log x with the removable singularity at x = 1 filled in.
    "log": lambda x: 1.0 if abs(x - 1.0) < 1e-12 else (x - 1.0) / np.log(x),
}


def monotone_metric(
    f: str, rho_of, theta: float, diff: DiffSpec = DEFAULT_DIFF,
    theta_domain: tuple[float, float] = (-np.inf, np.inf),
) -> FisherReport:
    """Monotone Riemannian metric for the operator-monotone tag f (single parameter).

    Uses the eigenbasis closed form: with rho = sum_k p_k |k><k| and
    d = drho expressed in that basis,

        F^(f) = sum_k d_kk^2 / p_k + sum_{l != k} |d_kl|^2 / (p_l f(p_k/p_l)).

    Requires a full-rank family; f='ari' reproduces the SLD quantum Fisher
    information.
    """
    if f not in _MONOTONE_F:
        raise UnknownMetricTag(f"f must be one of {sorted(_MONOTONE_F)}, got {f!r}")
    fn = _MONOTONE_F[f]
    rho, drho, _ = _state_derivative(rho_of, theta, diff, theta_domain)
    p, V = np.linalg.eigh(rho)
    if p.min() <= RANK_THRESHOLD:
        raise RankDeficient(f"smallest eigenvalue {p.min():.3e} <= {RANK_THRESHOLD:.1e}")
    Dv = V.conj().T @ drho @ V
    d = p.shape[0]
    value = float(np.sum(np.diag(Dv).real ** 2 / p))
    for k in range(d):
        for l in range(d):
            if k == l:
                continue
            value += abs(Dv[k, l]) ** 2 / (p[l] * fn(p[k] / p[l]))
    return FisherReport(value=max(value, 0.0), method=diff.method,
                        step=diff.base_step(theta))


def povm_outcome_model(rho_of, povm: POVM,
                       theta_domain: tuple[float, float] = (-np.inf, np.inf)) -> ProbabilityModel:
    """The classical model Pr_theta(x) = tr(rho_theta Pi_x) induced by a fixed POVM."""

    def at(x: float) -> OutcomeDistribution:
        rho = np.asarray(rho_of(x), dtype=complex)
        probs = np.array([np.trace(rho @ E).real for E in povm.elements])
        return OutcomeDistribution(outcomes=tuple(range(len(povm.elements))),
                                   probs=np.clip(probs, 0.0, None))

    return ProbabilityModel(at=at, theta_domain=theta_domain)


def fisher_of_povm(
    rho_of, theta: float, povm: POVM, diff: DiffSpec = DEFAULT_DIFF
) -> FisherReport:
    """Fisher information of the outcome distribution of a parameter-independent POVM."""
    return classical_fisher(povm_outcome_model(rho_of, povm), theta, diff)


def sld_povm(rho_of, theta: float, diff: DiffSpec = DEFAULT_DIFF) -> POVM:
    """The projective measurement onto the SLD eigenbasis at theta.

    This is the measurement whose Fisher information saturates the quantum
    Fisher information at the true parameter value.
    """
    rho, drho, _ = _state_derivative(rho_of, theta, diff, (-np.inf, np.inf))
    L = sld(rho, drho)
    _, V = np.linalg.eigh(L)
    return POVM(elements=tuple(np.outer(V[:, k], V[:, k].conj()) for k in range(V.shape[1])))
