"""Double-bracket flows on adjoint orbits {U A U^dagger}.

The objective Re tr(C^dagger X) is raised by conjugating X with
exp(alpha * Omega), Omega = -[X, C^dagger]_S (or -P[X, C^dagger] on a
subgroup orbit).  Conjugation keeps the spectrum of X fixed; the Euler
variant X + alpha [X, [X, C^dagger]_S] does not and is kept only for
comparison.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import IntegrityError
from .flows import (ArmijoHalving, FlowResult, StepSizeRule, _Problem, ascend)
from .liealg import SubalgebraBasis
from .matcore import as_matrix, expm_skew, haar_random_unitary, skew_part, unitarity_defect

DRIFT_LIMIT = 1e-6


def spectrum(X) -> np.ndarray:
    X = np.asarray(X)
    if np.allclose(X, X.conj().T, atol=1e-12 * max(1.0, np.linalg.norm(X))):
        return np.linalg.eigvalsh(0.5 * (X + X.conj().T)).astype(complex)
    ev = np.linalg.eigvals(X)
    return ev[np.lexsort((ev.imag, ev.real))]


def spectrum_drift(ref, X) -> float:
    """Largest eigenvalue displacement under the best one-to-one matching."""
    ev = spectrum(X)
    ref = np.asarray(ref)
    cost = np.abs(ref[:, None] - ev[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


@dataclass(frozen=True)
class OrbitPoint:
    X: np.ndarray
    reference_spectrum: np.ndarray

    @classmethod
    def from_matrix(cls, A) -> "OrbitPoint":
        A = as_matrix(A)
        return cls(A, spectrum(A))

    def drift(self) -> float:
        return spectrum_drift(self.reference_spectrum, self.X)


def _generator(X, C, P: SubalgebraBasis | None):
    K = X @ C.conj().T - C.conj().T @ X
    return skew_part(K) if P is None else P.project(K)


def _conjugate(point: OrbitPoint, G, alpha: float, check: bool) -> OrbitPoint:
    if alpha < 0:
        raise ValueError("step size must be nonnegative")
    E = expm_skew(-alpha * G)
    new = OrbitPoint(E @ point.X @ E.conj().T, point.reference_spectrum)
    if check:
        d = new.drift()
        if d > DRIFT_LIMIT:
            raise IntegrityError(f"spectrum drift {d:.3e} exceeds {DRIFT_LIMIT:.0e}")
    return new


def db_step(point: OrbitPoint, C, alpha: float, check: bool = True) -> OrbitPoint:
    """X -> exp(-a S) X exp(a S) with S = [X, C^dagger]_S."""
    return _conjugate(point, _generator(point.X, np.asarray(C), None), alpha, check)


def db_step_restricted(point: OrbitPoint, C, alpha: float, P: SubalgebraBasis,
                       check: bool = True) -> OrbitPoint:
    """As :func:`db_step` with S = P[X, C^dagger], staying on the subgroup orbit."""
    return _conjugate(point, _generator(point.X, np.asarray(C), P), alpha, check)


def euler_db_step(X, C, alpha: float) -> np.ndarray:
    """X + alpha [X, [X, C^dagger]_S]; not isospectral."""
    if alpha < 0:
        raise ValueError("step size must be nonnegative")
    X = as_matrix(X)
    S = _generator(X, np.asarray(C), None)
    return X + alpha * (X @ S - S @ X)


class _OrbitProblem(_Problem):
    """State = (X, U) with X = U A U^dagger maintained by conjugation."""

    def __init__(self, A, C, P, reference, check_every: int):
        self.A, self.C, self.P = A, C, P
        self.reference = reference
        self.check_every = check_every
        self.scale = max(float(np.linalg.norm(A) * np.linalg.norm(C)), 1e-300)

    def value(self, state):
        return float(np.vdot(self.C, state[0]).real)

    def direction(self, state):
        return (-_generator(state[0], self.C, self.P),)

    def retract(self, state, dirs, alpha):
        E = expm_skew(alpha * dirs[0])
        X, U = state
        return (E @ X @ E.conj().T, E @ U)

    def defect(self, state):
        return unitarity_defect(state[1])

    def observe(self, state, k):
        if k % self.check_every:
            return {"spectrum_drift": None}
        d = spectrum_drift(self.reference, state[0])
        if d > DRIFT_LIMIT:
            raise IntegrityError(f"spectrum drift {d:.3e} exceeds {DRIFT_LIMIT:.0e} at k={k}")
        return {"spectrum_drift": d}


def run_double_bracket(A, C, rule: StepSizeRule | None = None, tol: float | None = None,
                       max_iter: int = 100_000, restriction: SubalgebraBasis | None = None,
                       init=None, seed=None) -> FlowResult:
    """Ascend Re tr(C^dagger X) over the (sub)group orbit of A.

    ``init`` is the unitary U0 with X0 = U0 A U0^dagger; by default a Haar
    (or subgroup) random element drawn from ``seed``.  The result carries
    the final X and the accumulated U with X = U A U^dagger.
    """
    A, C = as_matrix(A), as_matrix(C)
    N = A.shape[0]
    rule = ArmijoHalving() if rule is None else rule
    if tol is None:
        tol = 1e-9 * float(np.linalg.norm(A) * np.linalg.norm(C))
    if init is None:
        rng = np.random.default_rng(seed)
        init = (haar_random_unitary(N, rng) if restriction is None
                else restriction.random_group_element(rng))
    U0 = np.asarray(init, dtype=complex)
    X0 = U0 @ A @ U0.conj().T
    problem = _OrbitProblem(A, C, restriction, spectrum(A), 1 if N <= 16 else 100)
    if not hasattr(rule, "alpha0") and not hasattr(rule, "alpha"):
        raise ValueError("orbit flows support Fixed and ArmijoHalving step rules")
    state, f, g, k, trace, status, _ = ascend(problem, (X0, U0), rule, tol, max_iter)
    return FlowResult(U=state[1], X=state[0], f=f, converged=status == "converged",
                      iterations=k, trace=trace, grad_norm=g, status=status,
                      seed=seed if isinstance(seed, (int, np.integer)) else None)
