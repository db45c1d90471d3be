"""Independent reference computations used to check the flows.

Only numpy and scipy are used here; nothing is imported from the rest of
the package, so a bug in the flow code cannot leak into its own oracle.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.optimize


@dataclass
class OracleRank1:
    coefficient: complex
    factors: list[np.ndarray]
    overlap: float
    residual_sq: float
    history: list[float] = field(default_factory=list)


def _outer(factors) -> np.ndarray:
    out = factors[0]
    for f in factors[1:]:
        out = np.multiply.outer(out, f)
    return out


def _finish(X, factors, history=()) -> OracleRank1:
    z = _outer(factors)
    c = complex(np.vdot(z, X))
    r = X - c * z
    return OracleRank1(c, [f.copy() for f in factors], float(abs(c) ** 2),
                       float(np.vdot(r, r).real), list(history))


def _contract_except(X, factors, k) -> np.ndarray:
    """Contract X with conj(factor_j) on every leg j != k."""
    T = X
    for j in reversed(range(X.ndim)):
        if j != k:
            T = np.tensordot(T, factors[j].conj(), axes=([j], [0]))
    return T


def hopm(X, iters: int = 500, init="svd", seed: int = 0, tol: float = 1e-14) -> OracleRank1:
    """Higher-order power method.

    ``init="svd"`` starts from the dominant left singular vector of every
    mode unfolding; ``init="random"`` draws random unit factors from
    ``seed``; a list of vectors is used as given.  ``history`` holds the
    overlap after each full sweep.
    """
    X = np.asarray(X, dtype=complex)
    if X.ndim < 2 or any(d < 2 for d in X.shape):
        raise ValueError(f"every tensor dimension must be >= 2, got {X.shape}")
    if np.linalg.norm(X) == 0:
        raise ValueError("zero tensor")
    if isinstance(init, str):
        if init == "svd":
            factors = []
            for k in range(X.ndim):
                u, _, _ = np.linalg.svd(np.moveaxis(X, k, 0).reshape(X.shape[k], -1))
                factors.append(u[:, 0])
        elif init == "random":
            rng = np.random.default_rng(seed)
            factors = []
            for d in X.shape:
                v = rng.normal(size=d) + 1j * rng.normal(size=d)
                factors.append(v / np.linalg.norm(v))
        else:
            raise ValueError(f"unknown init {init!r}")
    else:
        factors = [np.asarray(f, dtype=complex) / np.linalg.norm(f) for f in init]
    history = []
    for _ in range(iters):
        for k in range(X.ndim):
            v = _contract_except(X, factors, k)
            n = np.linalg.norm(v)
            if n > 0:
                factors[k] = v / n
        history.append(float(abs(np.vdot(_outer(factors), X)) ** 2))
        if len(history) > 1 and abs(history[-1] - history[-2]) <= tol * max(1.0, history[-1]):
            break
    return _finish(X, factors, history)


def sorted_spectrum_bound(A, C) -> float:
    """max over unitaries of Re tr(C^dagger U A U^dagger) for Hermitian A, C."""
    A, C = np.asarray(A, dtype=complex), np.asarray(C, dtype=complex)
    for name, M in (("A", A), ("C", C)):
        if np.linalg.norm(M - M.conj().T) > 1e-10 * max(1.0, np.linalg.norm(M)):
            raise ValueError(f"{name} is not Hermitian")
    a = np.sort(np.linalg.eigvalsh(A))[::-1]
    c = np.sort(np.linalg.eigvalsh(C))[::-1]
    return float(np.dot(a, c))


def permutation_sums(A, C, decimals: int = 9) -> list[float]:
    """Distinct values sum_i a_i c_pi(i) over all permutations pi."""
    a = np.linalg.eigvalsh(np.asarray(A, dtype=complex))
    c = np.linalg.eigvalsh(np.asarray(C, dtype=complex))
    vals = {round(float(np.dot(a, c[list(p)])), decimals) for p in itertools.permutations(range(len(a)))}
    return sorted(vals)


def fd_directional(f, U, Omega, h: float = 1e-5) -> float:
    """Central difference of t -> f(exp(t Omega) U) at t = 0."""
    if h <= 0:
        raise ValueError("h must be positive")
    Ep, Em = scipy.linalg.expm(h * Omega), scipy.linalg.expm(-h * Omega)
    return (f(Ep @ U) - f(Em @ U)) / (2 * h)


def fd_second(f, U, Omega, h: float = 1e-4) -> float:
    """Second central difference of t -> f(exp(t Omega) U) at t = 0."""
    if h <= 0:
        raise ValueError("h must be positive")
    Ep, Em = scipy.linalg.expm(h * Omega), scipy.linalg.expm(-h * Omega)
    return (f(Ep @ U) - 2 * f(U) + f(Em @ U)) / h**2


def _qubit_grid(resolution: int) -> np.ndarray:
    """Unit vectors (cos t, e^{i p} sin t) on a (t, p) grid, shape (m, 2)."""
    t = np.linspace(0.0, np.pi / 2, resolution)
    p = np.linspace(0.0, 2 * np.pi, resolution, endpoint=False)
    T, P = np.meshgrid(t, p, indexing="ij")
    return np.stack([np.cos(T).ravel(), (np.exp(1j * P) * np.sin(T)).ravel()], axis=1)


def brute_force_rank1(X, resolution: int = 96, chunk: int = 4096) -> OracleRank1:
    """Best rank-1 approximation of a qubit tensor by exhaustive grid search.

    The first r - 2 legs scan a two-angle grid; for each grid point the
    remaining 2 x 2 problem max |a^dagger M b|^2 is its top singular value
    squared, solved exactly.  Order 3 and 4 qubit tensors are accepted.
    """
    X = np.asarray(X, dtype=complex)
    if X.ndim not in (3, 4) or any(d != 2 for d in X.shape):
        raise ValueError(f"expected a 2x2x2 or 2x2x2x2 tensor, got dims {list(X.shape)}")
    if resolution < 24:
        raise ValueError("resolution must be at least 24")
    g = _qubit_grid(resolution)
    m, scan = len(g), X.ndim - 2
    idx = np.stack(np.unravel_index(np.arange(m**scan), (m,) * scan), axis=1)
    best, best_idx = -1.0, None
    for start in range(0, len(idx), chunk):
        rows = idx[start:start + chunk]
        if scan == 1:
            M = np.einsum("ai,ikl->akl", g[rows[:, 0]].conj(), X)
        else:
            M = np.einsum("ai,aj,ijkl->akl", g[rows[:, 0]].conj(), g[rows[:, 1]].conj(), X)
        s = np.linalg.svd(M, compute_uv=False)[:, 0] ** 2
        i = int(np.argmax(s))
        if s[i] > best:
            best, best_idx = float(s[i]), rows[i]
    factors = [g[j].astype(complex) for j in best_idx]
    M = X
    for f in factors:
        M = np.tensordot(f.conj(), M, axes=([0], [0]))
    u, _, vh = np.linalg.svd(M)
    factors += [u[:, 0], vh[0]]
    return _finish(X, factors)


def _su2(q) -> np.ndarray:
    a, b, c, d = q / np.linalg.norm(q)
    return np.array([[a + 1j * b, c + 1j * d], [-c + 1j * d, a - 1j * b]])


def _local(qs) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for q in qs:
        out = np.kron(out, _su2(q))
    return out


def pointwise_minimum(H, tau: float, starts: int = 40, seed: int = 0) -> float:
    """min over local K1, K2 of -(1/2^n) Re tr(C^dagger K1 A K2).

    A = exp(-i tau H), C = exp(i tau H).  Each SU(2) factor is a
    normalised quaternion; random starts are polished by BFGS.
    """
    H = np.asarray(H, dtype=complex)
    N = H.shape[0]
    n = int(round(np.log2(N)))
    A = scipy.linalg.expm(-1j * tau * H)
    Cd = scipy.linalg.expm(1j * tau * H).conj().T

    def f(x):
        q = x.reshape(2 * n, 4)
        return -np.trace(Cd @ _local(q[:n]) @ A @ _local(q[n:])).real / N

    rng = np.random.default_rng(seed)
    best = np.inf
    for _ in range(starts):
        res = scipy.optimize.minimize(f, rng.normal(size=8 * n), method="BFGS",
                                      options={"gtol": 1e-10})
        best = min(best, float(res.fun))
    return best
