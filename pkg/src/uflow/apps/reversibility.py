"""Local time reversal of qubit interaction Hamiltonians.

Joint: is there K in SU(2)^{x n} with K H K^dagger = -H?  Minimise
Re tr(H K H K^dagger) / ||H||^2, which reaches -1 exactly when it is.

Pointwise: for fixed tau, is there a pair K1, K2 with
K1 exp(-i tau H) K2 = exp(+i tau H)?  Minimise
-(1/2^n) Re tr(C^dagger K1 A K2) with A = exp(-i tau H), C = exp(+i tau H).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ..flows import QualityFunction, RestartResult, StepSizeRule, run_restarts
from ..liealg import local_subalgebra_basis
from .states import HamiltonianSpec, build_hamiltonian

REVERSIBLE_TOL = 1e-6


def _hamiltonian(H) -> np.ndarray:
    if isinstance(H, HamiltonianSpec):
        H = build_hamiltonian(H)
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError("Hamiltonian must be a square matrix")
    n = int(round(np.log2(H.shape[0])))
    if 2**n != H.shape[0]:
        raise ValueError("Hamiltonian dimension must be a power of two")
    if np.linalg.norm(H - H.conj().T) > 1e-10 * max(1.0, np.linalg.norm(H)):
        raise ValueError("Hamiltonian must be Hermitian")
    return H


def joint_objective(H, K) -> float:
    H = _hamiltonian(H)
    return float(np.vdot(H, K @ H @ K.conj().T).real / np.vdot(H, H).real)


@dataclass
class JointResult:
    min_value: float
    K: np.ndarray
    reversible: bool
    flow: RestartResult


@dataclass
class PointwiseResult:
    min_value: float
    K1: np.ndarray
    K2: np.ndarray
    reversible: bool
    tau: float
    flow: RestartResult


def joint_reversibility(H, restarts: int = 20, seed: int = 0, rule: StepSizeRule | None = None,
                        tol: float = REVERSIBLE_TOL, max_iter: int = 20_000,
                        grad_tol: float | None = None) -> JointResult:
    H = _hamiltonian(H)
    hn = np.vdot(H, H).real
    if hn == 0:
        raise ValueError("zero Hamiltonian")
    n = int(round(np.log2(H.shape[0])))
    # maximising Re tr(C^dagger K H K^dagger) with C = -H/||H||^2 minimises the transfer
    qf = QualityFunction("U1", A=H, C=-H / hn, restriction=local_subalgebra_basis(n))
    rr = run_restarts(qf, rule, restarts=restarts, seed=seed, max_iter=max_iter,
                      grad_tol=grad_tol)
    m = -rr.best.f
    return JointResult(m, rr.best.U, m <= -1 + tol, rr)


def pointwise_reversibility(H, tau: float, restarts: int = 20, seed: int = 0,
                            rule: StepSizeRule | None = None, tol: float = REVERSIBLE_TOL,
                            max_iter: int = 20_000, grad_tol: float | None = None) -> PointwiseResult:
    """Coupled flow on (K1, K2); the identity pair is always tried first."""
    H = _hamiltonian(H)
    N = H.shape[0]
    n = int(round(np.log2(N)))
    A = scipy.linalg.expm(-1j * tau * H)
    C = scipy.linalg.expm(1j * tau * H)
    qf = QualityFunction("U3", A=A, C=C, restriction=local_subalgebra_basis(n))
    eye = np.eye(N, dtype=complex)
    rr = run_restarts(qf, rule, restarts=restarts, seed=seed, inits=[(eye, eye)],
                      max_iter=max_iter, grad_tol=grad_tol)
    m = -rr.best.f / N
    return PointwiseResult(m, rr.best.U, rr.best.V, m <= -1 + tol, float(tau), rr)
