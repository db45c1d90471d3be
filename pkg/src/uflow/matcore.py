"""Dense complex linear algebra used by every flow.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
Skew-Hermitian matrices play the role of Lie-algebra elements, unitaries
the role of group elements.  Vectorisation stacks columns, so that

    vec(V @ Y @ W.T) == kron(W, V) @ vec(Y)
"""
from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import ContractError, DimensionError

SKEW_RTOL = 1e-10


def as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ContractError("matrix has non-finite entries")
    return M


def _square(M) -> np.ndarray:
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    return M


def _same_shape(A, B) -> tuple[np.ndarray, np.ndarray]:
    A, B = as_matrix(A), as_matrix(B)
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch: {A.shape} vs {B.shape}")
    return A, B


def dagger(M) -> np.ndarray:
    return np.conj(M).T


def skew_part(M) -> np.ndarray:
    """Return (M - M^dagger)/2."""
    M = _square(M)
    return 0.5 * (M - M.conj().T)


def herm_part(M) -> np.ndarray:
    """Return (M + M^dagger)/2."""
    M = _square(M)
    return 0.5 * (M + M.conj().T)


def commutator(A, B) -> np.ndarray:
    A, B = _same_shape(A, B)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected square matrices, got shape {A.shape}")
    return A @ B - B @ A


def hs_inner(A, B) -> complex:
    """Hilbert-Schmidt inner product tr(A^dagger B)."""
    A, B = _same_shape(A, B)
    return complex(np.vdot(A, B))


def fro_norm(A) -> float:
    return float(np.linalg.norm(np.asarray(A)))


def is_skew(M, rtol: float = SKEW_RTOL) -> bool:
    M = np.asarray(M)
    scale = max(np.linalg.norm(M), 1.0)
    return np.linalg.norm(M + M.conj().T) <= rtol * scale


def expm_skew(Omega) -> np.ndarray:
    """Exponential of a skew-Hermitian matrix.

    Uses the eigendecomposition of the Hermitian matrix ``i*Omega`` so the
    result is unitary to working precision.  Falls back to scipy's
    scaling-and-squaring ``expm`` if the eigensolver fails.
    """
    Omega = _square(Omega)
    if not is_skew(Omega):
        raise ContractError("expm_skew: argument is not skew-Hermitian")
    H = 0.5j * (Omega - Omega.conj().T)  # i * skew_part(Omega), Hermitian
    try:
        w, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError:
        return scipy.linalg.expm(skew_part(Omega))
    return (V * np.exp(-1j * w)) @ V.conj().T


def unitarity_defect(U) -> float:
    """Frobenius norm of U U^dagger - 1."""
    U = np.asarray(U)
    return float(np.linalg.norm(U @ U.conj().T - np.eye(U.shape[0])))


def is_unitary(U, atol: float | None = None) -> bool:
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        return False
    tol = 1e-10 * U.shape[0] if atol is None else atol
    return unitarity_defect(U) <= tol


def kron(*mats) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for M in mats:
        out = np.kron(out, np.asarray(M, dtype=complex))
    return out


def vec(M) -> np.ndarray:
    """Column-stacking vectorisation."""
    M = as_matrix(M)
    return M.reshape(-1, order="F")


def unvec(v, rows: int, cols: int) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.size != rows * cols:
        raise DimensionError(f"cannot reshape length {v.size} into {rows}x{cols}")
    return v.reshape((rows, cols), order="F")


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def haar_random_unitary(N: int, seed=None) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre matrix with phase fix."""
    if N < 1:
        raise DimensionError("N must be positive")
    rng = _rng(seed)
    Z = (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def random_skew(N: int, seed=None, traceless: bool = False) -> np.ndarray:
    rng = _rng(seed)
    M = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    S = 0.5 * (M - M.conj().T)
    if traceless:
        S = S - np.trace(S) / N * np.eye(N)
    return S


def random_hermitian(N: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    M = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    return 0.5 * (M + M.conj().T)


def random_complex(shape, seed=None) -> np.ndarray:
    rng = _rng(seed)
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
