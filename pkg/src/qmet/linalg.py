"""Dense complex linear algebra on small Hilbert spaces.

Eigendecompositions are gauge-fixed and ordered non-increasingly
(lambda_1 >= ... >= lambda_d) so that every downstream formula can rely on a
single ordering convention.  All functions are pure and operate on plain
complex ndarrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrum, DimensionMismatch, NonHermitianInput

HERMITICITY_TOL = 1e-10
UNITARITY_TOL = 1e-10
DEGENERACY_TOL = 1e-8

PHASE_FIXED = "phase-fixed"
OVERLAP_ALIGNED = "overlap-aligned"


def as_matrix(M) -> np.ndarray:
    """Coerce to a square complex matrix."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    return A


def require_hermitian(M, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Return M as an ndarray, raising NonHermitianInput if M != M^dag.

    The tolerance is relative: max|M - M^dag| <= tol * (1 + max|M|).
    """
    A = as_matrix(M)
    scale = 1.0 + np.max(np.abs(A))
    defect = np.max(np.abs(A - A.conj().T))
    if defect > tol * scale:
        raise NonHermitianInput(f"Hermiticity defect {defect:.3e} exceeds {tol:.1e}*(1+|M|)")
    return A


def require_unitary(U, tol: float = UNITARITY_TOL) -> np.ndarray:
    """Return U as an ndarray, raising if U U^dag deviates from the identity."""
    A = as_matrix(U)
    defect = np.max(np.abs(A @ A.conj().T - np.eye(A.shape[0])))
    if defect > tol:
        raise DimensionMismatch(f"unitarity defect {defect:.3e} exceeds {tol:.1e}")
    return A


def require_density(rho, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Validate a density matrix: Hermitian, positive, unit trace."""
    A = require_hermitian(rho, tol)
    ev = np.linalg.eigvalsh(A)
    if ev.min() < -tol:
        raise DimensionMismatch(f"density matrix has negative eigenvalue {ev.min():.3e}")
    if abs(np.trace(A).real - 1.0) > tol:
        raise DimensionMismatch(f"density matrix trace {np.trace(A).real} != 1")
    return A


def require_state(psi, tol: float = 1e-12) -> np.ndarray:
    """Validate a pure-state amplitude vector (unit Euclidean norm)."""
    v = np.asarray(psi, dtype=complex).reshape(-1)
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > tol:
        raise DimensionMismatch(f"state norm {nrm} != 1 within {tol:.1e}")
    return v


@dataclass(frozen=True)
class Eigensystem:
    """Spectral decomposition with non-increasing eigenvalues.

    ``eigenvalues[k]`` belongs to column ``eigenvectors[:, k]``; the gauge tag
    records how the per-eigenvector phase freedom was fixed.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    gauge: str

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        """Sum of lambda_k |v_k><v_k|."""
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def fix_phases(V: np.ndarray) -> np.ndarray:
    """Make each column's largest-modulus entry real and nonnegative.

    Ties on the modulus (within 1e-12 relative) are broken by the lowest index.
    """
    W = np.array(V, dtype=complex, copy=True)
    for k in range(W.shape[1]):
        mags = np.abs(W[:, k])
        top = mags.max()
        j = int(np.argmax(mags > top * (1.0 - 1e-12)))
        entry = W[j, k]
        if abs(entry) > 0:
            W[:, k] *= entry.conjugate() / abs(entry)
    return W


def eig_hermitian(M, gauge: str = PHASE_FIXED) -> Eigensystem:
    """Eigendecompose a Hermitian matrix, eigenvalues sorted non-increasingly.

    gauge='phase-fixed' makes each eigenvector's largest-modulus entry real
    and nonnegative, giving a deterministic output for non-degenerate spectra.
    gauge='overlap-aligned' leaves the phases untouched for callers that align
    eigenvectors against an anchor decomposition themselves.
    """
    A = require_hermitian(M)
    ev, V = np.linalg.eigh(A)
    ev, V = ev[::-1], V[:, ::-1]
    if gauge == PHASE_FIXED:
        V = fix_phases(V)
    elif gauge != OVERLAP_ALIGNED:
        raise ValueError(f"unknown gauge tag {gauge!r}")
    return Eigensystem(eigenvalues=ev, eigenvectors=V, gauge=gauge)


def require_nondegenerate(eigenvalues: np.ndarray, tol: float = DEGENERACY_TOL) -> None:
    """Raise DegenerateSpectrum if consecutive eigenvalues are too close.

    Two eigenvalues count as degenerate when they differ by less than
    tol * (1 + spectral gap).
    """
    ev = np.sort(np.asarray(eigenvalues, dtype=float))
    if ev.size < 2:
        return
    gap = ev[-1] - ev[0]
    diffs = np.diff(ev)
    if np.any(diffs < tol * (1.0 + gap)):
        raise DegenerateSpectrum(
            f"minimum eigenvalue spacing {diffs.min():.3e} below {tol:.1e}*(1+gap)"
        )


def expm_unitary(H, t: float) -> np.ndarray:
    """exp(-i t H) for Hermitian H, via eigendecomposition."""
    A = require_hermitian(H)
    ev, V = np.linalg.eigh(A)
    return (V * np.exp(-1j * t * ev)) @ V.conj().T


def spectral_gap(M) -> float:
    """lambda_1(M) - lambda_d(M) >= 0 for Hermitian M."""
    ev = np.linalg.eigvalsh(require_hermitian(M))
    return float(ev[-1] - ev[0])


def tensor(A, B) -> np.ndarray:
    """Kronecker product."""
    return np.kron(as_matrix(A), as_matrix(B))


def partial_trace(M, dims: tuple[int, int], keep: str) -> np.ndarray:
    """Trace out one tensor factor of an operator on C^dA (x) C^dB.

    keep='first' returns tr_B(M), keep='second' returns tr_A(M).
    """
    dA, dB = dims
    A = as_matrix(M)
    if A.shape[0] != dA * dB:
        raise DimensionMismatch(f"matrix dim {A.shape[0]} != {dA}*{dB}")
    T = A.reshape(dA, dB, dA, dB)
    if keep in ("first", "A", "a"):
        return np.einsum("ijkj->ik", T)
    if keep in ("second", "B", "b"):
        return np.einsum("ijik->jk", T)
    raise ValueError(f"keep must be 'first' or 'second', got {keep!r}")


def operator_variance(psi, O) -> float:
    """Variance <psi|O^2|psi> - <psi|O|psi>^2, clamped to be nonnegative."""
    v = require_state(psi)
    A = require_hermitian(O)
    if A.shape[0] != v.shape[0]:
        raise DimensionMismatch(f"state dim {v.shape[0]} != operator dim {A.shape[0]}")
    Av = A @ v
    mean = np.vdot(v, Av).real
    second = np.vdot(Av, Av).real
    var = second - mean * mean
    if var < -1e-12:
        raise ArithmeticError(f"variance {var:.3e} below -1e-12")
    return max(var, 0.0)
