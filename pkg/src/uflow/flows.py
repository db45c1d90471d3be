"""Quality functions on U(N), their Riemannian gradients, and the ascent loop.

Every supported objective f has a differential of the form

    d/dt f(exp(t W) U) |_{t=0} = Re tr(G(U) W)     for skew W,

so its gradient with respect to the bi-invariant metric tr(W1^dagger W2) is
``Omega U`` with ``Omega = P(-G(U))``, where P is the skew-Hermitian part or,
for a subgroup, the orthogonal projector onto its Lie algebra.  One ascent
step is ``U <- exp(alpha * Omega) U``.

Kinds (with A_k = U A U^dagger, z_X = tr(X^dagger A_k)):

    U1   Re z_C
    U2   |z_C|^2
    U3   Re tr(C^dagger U A V)                 (two-sided, U and V)
    U1C  Re z_C - lam * (Im z_C)^2
    U2C  |z_C|^2 - lam * (||E||^2 - Re tr(E^dagger U E U^dagger))
    U3C  |z_C|^2 - lam * |z_D|^2

Attaching a ``restriction`` turns U1/U2/U3 into U1K/U2K/U3K.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .errors import ContractError, DimensionError, IntegrityError
from .liealg import SubalgebraBasis, full_subalgebra_basis
from .matcore import expm_skew, haar_random_unitary, skew_part, unitarity_defect

MONOTONE_SLACK = 1e-12
BASE_KINDS = ("U1", "U2", "U3", "U1C", "U2C", "U3C")
RESTRICTABLE = ("U1", "U2", "U3")
EPS = np.finfo(float).eps


# ---------------------------------------------------------------------------
# quality functions


@dataclass(frozen=True)
class QualityFunction:
    kind: str
    A: np.ndarray
    C: np.ndarray
    D: np.ndarray | None = None
    E: np.ndarray | None = None
    lambda0: float = 1.0
    restriction: SubalgebraBasis | None = None

    def __post_init__(self):
        kind = self.kind.upper()
        if kind in ("U1K", "U2K", "U3K"):
            if self.restriction is None:
                raise ValueError(f"kind {kind} needs a restriction")
            kind = kind[:-1]
        if kind not in BASE_KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.restriction is not None and kind not in RESTRICTABLE:
            raise ValueError(f"kind {kind} cannot be restricted to a subgroup")
        object.__setattr__(self, "kind", kind)
        A = np.asarray(self.A, dtype=complex)
        C = np.asarray(self.C, dtype=complex)
        N = A.shape[0]
        for name, M in (("A", A), ("C", C), ("D", self.D), ("E", self.E)):
            if M is None:
                continue
            if np.shape(M) != (N, N):
                raise DimensionError(f"{name} has shape {np.shape(M)}, expected {(N, N)}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "C", C)
        if kind == "U3C" and self.D is None:
            raise ValueError("kind U3C needs D")
        if kind == "U2C" and self.E is None:
            raise ValueError("kind U2C needs E")
        if self.D is not None:
            object.__setattr__(self, "D", np.asarray(self.D, dtype=complex))
        if self.E is not None:
            object.__setattr__(self, "E", np.asarray(self.E, dtype=complex))
        if self.lambda0 < 0:
            raise ValueError("lambda0 must be nonnegative")
        if self.restriction is not None and self.restriction.N != N:
            raise DimensionError("restriction dimension does not match A")

    @property
    def N(self) -> int:
        return self.A.shape[0]

    @property
    def label(self) -> str:
        return self.kind + ("K" if self.restriction is not None else "")

    @property
    def two_sided(self) -> bool:
        return self.kind == "U3"

    @property
    def constrained(self) -> bool:
        return self.kind.endswith("C")

    @property
    def scale(self) -> float:
        return float(np.linalg.norm(self.A) * np.linalg.norm(self.C))

    def algebra(self, M) -> np.ndarray:
        """Project onto the flow's Lie algebra."""
        if self.restriction is None:
            return skew_part(M)
        return self.restriction.project(M)


def _check_V(qf: QualityFunction, V):
    if qf.two_sided and V is None:
        raise ValueError(f"kind {qf.label} needs the second factor V")
    if not qf.two_sided and V is not None:
        raise ValueError(f"kind {qf.label} is one-sided; V must not be given")


def _check_dim(qf: QualityFunction, U):
    if np.shape(U) != (qf.N, qf.N):
        raise DimensionError(f"U has shape {np.shape(U)}, expected {(qf.N, qf.N)}")


def value(qf: QualityFunction, U, V=None, lam: float | None = None) -> float:
    _check_V(qf, V)
    _check_dim(qf, U)
    lam = qf.lambda0 if lam is None else lam
    A, C = qf.A, qf.C
    if qf.kind == "U3":
        return float(np.vdot(C, U @ A @ V).real)
    Ak = U @ A @ U.conj().T
    z = np.vdot(C, Ak)
    if qf.kind == "U1":
        return float(z.real)
    if qf.kind == "U2":
        return float(abs(z) ** 2)
    if qf.kind == "U1C":
        return float(z.real - lam * z.imag**2)
    if qf.kind == "U2C":
        # ||E||^2 - Re tr(E^dagger U E U^dagger) = ||U E U^dagger - E||^2 / 2;
        # the right side avoids cancellation when lam is large
        R = U @ qf.E @ U.conj().T - qf.E
        return float(abs(z) ** 2 - 0.5 * lam * np.vdot(R, R).real)
    if qf.kind == "U3C":
        zD = np.vdot(qf.D, Ak)
        return float(abs(z) ** 2 - lam * abs(zD) ** 2)
    raise AssertionError(qf.kind)


def _differential(qf: QualityFunction, U, V, lam):
    """Matrices G with Df = Re tr(G W) (one per group factor)."""
    A, C = qf.A, qf.C
    Ch = C.conj().T
    if qf.kind == "U3":
        return U @ A @ V @ Ch, V @ Ch @ U @ A
    Ak = U @ A @ U.conj().T
    M = Ak @ Ch - Ch @ Ak
    z = np.vdot(C, Ak)
    if qf.kind == "U1":
        return (M,)
    if qf.kind == "U2":
        return (2 * np.conj(z) * M,)
    if qf.kind == "U1C":
        return (M + 2j * lam * z.imag * M,)
    if qf.kind == "U2C":
        E = qf.E
        Ek = U @ E @ U.conj().T
        Eh = E.conj().T
        return (2 * np.conj(z) * M + lam * (Ek @ Eh - Eh @ Ek),)
    if qf.kind == "U3C":
        Dh = qf.D.conj().T
        MD = Ak @ Dh - Dh @ Ak
        zD = np.vdot(qf.D, Ak)
        return (2 * np.conj(z) * M - 2 * lam * np.conj(zD) * MD,)
    raise AssertionError(qf.kind)


def gradient_direction(qf: QualityFunction, U, V=None, lam: float | None = None):
    """Ascent direction Omega (Riemannian gradient = Omega @ U).

    Returns one skew matrix, or a pair (Omega_U, Omega_V) for two-sided kinds.
    """
    _check_V(qf, V)
    _check_dim(qf, U)
    lam = qf.lambda0 if lam is None else lam
    dirs = tuple(qf.algebra(-G) for G in _differential(qf, U, V, lam))
    return dirs if qf.two_sided else dirs[0]


def constraint_residual(qf: QualityFunction, U) -> float | None:
    """How far U is from satisfying the constraint of a penalty kind."""
    if qf.kind == "U1C":
        return float(abs(np.vdot(qf.C, U @ qf.A @ U.conj().T).imag))
    if qf.kind == "U2C":
        E = qf.E
        return float(abs(np.vdot(E, U @ E @ U.conj().T) - np.vdot(E, E)))
    if qf.kind == "U3C":
        return float(abs(np.vdot(qf.D, U @ qf.A @ U.conj().T)) ** 2)
    return None


def step(U, Omega, alpha: float) -> np.ndarray:
    """Geodesic step exp(alpha * Omega) @ U."""
    U = np.asarray(U)
    Omega = np.asarray(Omega)
    if U.shape != Omega.shape:
        raise DimensionError(f"shape mismatch: {U.shape} vs {Omega.shape}")
    return expm_skew(alpha * Omega) @ U


def analytic_step_u1k(U, A, C, P: SubalgebraBasis | None = None) -> float | None:
    """Step size guaranteeing ascent of Re tr(C^dagger K A K^dagger).

    alpha = ||Omega||^2 / (||[C^dagger, Omega]|| * ||[Omega, K A K^dagger]||)
    with Omega = P([C^dagger, K A K^dagger]).  Returns ``None`` when the
    gradient vanishes, i.e. the iterate is already critical.
    """
    Ak = U @ A @ U.conj().T
    Ch = np.conj(C).T
    G = Ch @ Ak - Ak @ Ch
    Om = skew_part(G) if P is None else P.project(G)
    num = np.linalg.norm(Om) ** 2
    if num == 0.0:
        return None
    d1 = np.linalg.norm(Ch @ Om - Om @ Ch)
    d2 = np.linalg.norm(Om @ Ak - Ak @ Om)
    if d1 * d2 == 0.0:
        return None
    return float(num / (d1 * d2))


# ---------------------------------------------------------------------------
# Hessian of the (restricted) U1 objective


def hessian_local(U, A, C, P: SubalgebraBasis | None = None) -> np.ndarray:
    """Hessian of Re tr(C^dagger K A K^dagger) in the orthonormal basis of P.

    Entry (i, j) is Re tr(h_i^dagger S h_j) with
    S W = 1/2 P([C^dagger, [W, A_k]] + [A_k, [W, C^dagger]]).
    Without P the basis of su(N) is used.
    """
    A = np.asarray(A, dtype=complex)
    if P is None:
        P = full_subalgebra_basis(A.shape[0])
    if np.shape(U) != (P.N, P.N) or A.shape != (P.N, P.N):
        raise DimensionError("U, A and the projector must share one dimension")
    Ak = U @ A @ U.conj().T
    Ch = np.conj(np.asarray(C, dtype=complex)).T
    H = np.empty((P.dim, P.dim))
    for j, h in enumerate(P.elements):
        X = h @ Ak - Ak @ h
        Y = h @ Ch - Ch @ h
        SW = 0.5 * ((Ch @ X - X @ Ch) + (Ak @ Y - Y @ Ak))
        H[:, j] = P.coordinates(SW)
    return H


def classify_critical(U, qf: QualityFunction, grad_tol: float | None = None,
                      zero_rtol: float = 1e-7) -> str:
    """'max', 'min', 'saddle' or 'degenerate' from the Hessian spectrum.

    Zero modes (within ``zero_rtol`` of the largest eigenvalue) are ignored;
    they come from continuous families of critical points, e.g. the
    diagonal phases commuting with a diagonal A.
    """
    if qf.kind != "U1":
        raise ValueError("classify_critical supports the U1/U1K objective only")
    tol = 1e-6 * qf.scale if grad_tol is None else grad_tol
    g = np.linalg.norm(gradient_direction(qf, U))
    if g > tol:
        raise ContractError(f"not a critical point: gradient norm {g:.3e} > {tol:.3e}")
    H = hessian_local(U, qf.A, qf.C, qf.restriction)
    ev = np.linalg.eigvalsh(0.5 * (H + H.T))
    scale = np.max(np.abs(ev)) if ev.size else 0.0
    cut = zero_rtol * scale
    pos, neg = bool(np.any(ev > cut)), bool(np.any(ev < -cut))
    if neg and not pos:
        return "max"
    if pos and not neg:
        return "min"
    if pos and neg:
        return "saddle"
    return "degenerate"


# ---------------------------------------------------------------------------
# step-size rules and run bookkeeping


@dataclass(frozen=True)
class Fixed:
    alpha: float


@dataclass(frozen=True)
class ArmijoHalving:
    """Backtracking by halving until the objective increases.

    The first trial step moves a geodesic distance ``alpha0``; with
    ``warm_start`` later iterations start from twice the last accepted step
    (never beyond that distance).  Accepting requires the usual sufficient
    increase ``c * alpha * ||grad||^2``.  When the gain in f is below
    rounding noise the slope at the trial point decides instead; such a step
    may lower f by at most ``MONOTONE_SLACK``.
    """

    alpha0: float = 0.1
    shrink: float = 0.5
    max_halvings: int = 40
    c: float = 1e-4
    warm_start: bool = True

    def __post_init__(self):
        if self.alpha0 <= 0:
            raise ValueError("alpha0 must be positive")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink must lie in (0, 1)")


@dataclass(frozen=True)
class AnalyticLocal:
    pass


StepSizeRule = Fixed | ArmijoHalving | AnalyticLocal


@dataclass(frozen=True)
class PenaltySchedule:
    """lam_k = lambda0 * factor**floor(k / period), capped.

    A stage is also advanced early when the iterate is stationary, or the
    line search fails, while the constraint residual is still above
    ``constraint_tol``; once the residual is within ``constraint_tol`` lam
    is held, since growing it further only stiffens the problem.
    """

    lambda0: float | None = None
    factor: float = 2.0
    period: int = 200
    cap: float = 1e6
    constraint_tol: float = 1e-8

    def at(self, lambda0: float, stage: int) -> float:
        return min(self.cap, lambda0 * self.factor**stage)


@dataclass
class TraceRecord:
    k: int
    f: float
    grad_norm: float
    alpha: float
    unitarity_defect: float
    lam: float | None = None
    spectrum_drift: float | None = None


@dataclass
class FlowTrace:
    records: list[TraceRecord] = field(default_factory=list)

    def append(self, rec: TraceRecord):
        self.records.append(rec)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=float)

    def to_csv(self) -> str:
        cols = ["k", "f", "grad_norm", "alpha", "unitarity_defect"]
        if any(r.spectrum_drift is not None for r in self.records):
            cols.append("spectrum_drift")
        if any(r.lam is not None for r in self.records):
            cols.append("lambda")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in self.records:
            row = [r.k]
            for c in cols[1:]:
                v = getattr(r, "lam" if c == "lambda" else c)
                row.append(format_float(v))
            w.writerow(row)
        return buf.getvalue()


def format_float(v) -> str:
    if v is None:
        return ""
    return format(float(v), ".17g")


@dataclass
class FlowResult:
    U: np.ndarray
    f: float
    converged: bool
    iterations: int
    trace: FlowTrace
    grad_norm: float
    status: str
    V: np.ndarray | None = None
    X: np.ndarray | None = None
    lam: float | None = None
    constraint_residual: float | None = None
    seed: int | None = None


# ---------------------------------------------------------------------------
# generic ascent engine


class _Problem:
    """State = tuple of unitaries; subclasses supply value and direction."""

    scale = 1.0

    def value(self, state) -> float:
        raise NotImplementedError

    def direction(self, state) -> tuple:
        raise NotImplementedError

    def retract(self, state, dirs, alpha):
        return tuple(expm_skew(alpha * W) @ U for W, U in zip(dirs, state))

    def defect(self, state) -> float:
        return max(unitarity_defect(U) for U in state)

    def observe(self, state, k) -> dict:
        return {}

    def analytic_alpha(self, state) -> float | None:
        raise ValueError("analytic step size is only defined for the U1/U1K objective")

    def noise_scale(self) -> float:
        """Magnitude of the terms summed in value(); sets the rounding floor."""
        return self.scale


def _norm2(dirs) -> float:
    return float(sum(np.vdot(W, W).real for W in dirs))


def _slope(new_dirs, dirs) -> float:
    return float(sum(np.vdot(a, b).real for a, b in zip(new_dirs, dirs)))


def _armijo(problem: _Problem, state, f, dirs, g2, rule: ArmijoHalving, alpha_prev):
    amax = rule.alpha0 / math.sqrt(g2)
    a = amax
    if rule.warm_start and alpha_prev is not None:
        a = min(amax, alpha_prev / rule.shrink)
    noise = 64 * EPS * max(abs(f), problem.noise_scale(), 1.0)
    for _ in range(rule.max_halvings + 1):
        new = problem.retract(state, dirs, a)
        fn = problem.value(new)
        gain = fn - f
        if gain > noise and gain >= rule.c * a * g2:
            return new, fn, a, None
        if -min(noise, MONOTONE_SLACK) <= gain <= noise:
            nd = problem.direction(new)
            if _slope(nd, dirs) >= 0:
                return new, fn, a, nd
        a *= rule.shrink
    return None


def ascend(problem: _Problem, init, rule, grad_tol: float, max_iter: int,
           schedule: PenaltySchedule | None = None, lambda0: float = 1.0,
           residual: Callable | None = None, defect_tol: float | None = None):
    """Run steepest ascent from ``init``; returns (state, f, g, k, trace, status, lam)."""
    state = tuple(init)
    N = state[0].shape[0]
    defect_tol = 1e-9 * N if defect_tol is None else defect_tol
    stage = 0
    stage_start = 0
    lam = None
    if schedule is not None:
        lam = schedule.at(lambda0, 0)
        problem.lam = lam
    f = problem.value(state)
    dirs = problem.direction(state)
    g2 = _norm2(dirs)
    trace = FlowTrace()
    trace.append(TraceRecord(0, f, math.sqrt(g2), 0.0, problem.defect(state), lam,
                             **problem.observe(state, 0)))
    alpha_prev = None
    status = "max_iter"
    k = 0
    while True:
        # penalty terms scale with lam, and so does the attainable gradient accuracy
        tol = grad_tol if schedule is None else grad_tol * problem.noise_scale() / problem.scale
        stuck = False
        if math.sqrt(g2) > tol and k < max_iter and isinstance(rule, ArmijoHalving):
            out = _armijo(problem, state, f, dirs, g2, rule, alpha_prev)
            # a failed search at a penalty stage is treated like stationarity
            stuck = out is None and schedule is not None
            if out is None and not stuck:
                status = "line_search_failed"
                break
        if math.sqrt(g2) <= tol or stuck:
            if schedule is None:
                status = "converged"
                break
            res = residual(state)
            if res <= schedule.constraint_tol or lam >= schedule.cap:
                status = "line_search_failed" if stuck else "converged"
                break
            stage += 1
            stage_start = k
            lam = schedule.at(lambda0, stage)
            problem.lam = lam
            f = problem.value(state)
            dirs = problem.direction(state)
            g2 = _norm2(dirs)
            alpha_prev = None
            continue
        if k >= max_iter:
            break
        new_dirs = None
        if isinstance(rule, Fixed):
            alpha = rule.alpha
            state = problem.retract(state, dirs, alpha)
            f = problem.value(state)
        elif isinstance(rule, AnalyticLocal):
            alpha = problem.analytic_alpha(state)
            if alpha is None:
                status = "converged"
                break
            state = problem.retract(state, dirs, alpha)
            f = problem.value(state)
        else:
            state, f, alpha, new_dirs = out
            alpha_prev = alpha
        k += 1
        defect = problem.defect(state)
        if defect > defect_tol:
            raise IntegrityError(f"unitarity defect {defect:.3e} exceeds {defect_tol:.3e} at k={k}")
        extra = problem.observe(state, k)
        if (schedule is not None and k - stage_start >= schedule.period and lam < schedule.cap
                and residual(state) > schedule.constraint_tol):
            stage += 1
            stage_start = k
            lam = schedule.at(lambda0, stage)
            problem.lam = lam
            f = problem.value(state)
            new_dirs = None
            alpha_prev = None
        dirs = problem.direction(state) if new_dirs is None else new_dirs
        g2 = _norm2(dirs)
        trace.append(TraceRecord(k, f, math.sqrt(g2), alpha, defect, lam, **extra))
    return state, f, math.sqrt(g2), k, trace, status, lam


class _GroupProblem(_Problem):
    def __init__(self, qf: QualityFunction):
        self.qf = qf
        self.lam = qf.lambda0
        self.scale = max(qf.scale, 1e-300)

    def value(self, state):
        return value(self.qf, *state, lam=self.lam)

    def direction(self, state):
        d = gradient_direction(self.qf, *state, lam=self.lam)
        return d if isinstance(d, tuple) else (d,)

    def noise_scale(self):
        qf = self.qf
        if not qf.constrained:
            return self.scale
        nA2 = float(np.vdot(qf.A, qf.A).real)
        if qf.kind == "U1C":
            pen = self.scale**2
        elif qf.kind == "U2C":
            pen = float(np.vdot(qf.E, qf.E).real)
        else:
            pen = nA2 * float(np.vdot(qf.D, qf.D).real)
        base = self.scale if qf.kind == "U1C" else self.scale**2
        return base + self.lam * pen

    def analytic_alpha(self, state):
        if self.qf.kind != "U1":
            return super().analytic_alpha(state)
        return analytic_step_u1k(state[0], self.qf.A, self.qf.C, self.qf.restriction)


def default_grad_tol(qf: QualityFunction) -> float:
    return 1e-9 * qf.scale


def random_init(qf: QualityFunction, rng: np.random.Generator):
    """Starting point(s) inside the flow's group: Haar on U(N) or its subgroup."""
    def one():
        if qf.restriction is None:
            return haar_random_unitary(qf.N, rng)
        return qf.restriction.random_group_element(rng)
    return (one(), one()) if qf.two_sided else (one(),)


def run_flow(qf: QualityFunction, rule: StepSizeRule | None = None, init=None,
             grad_tol: float | None = None, max_iter: int = 100_000,
             penalty_schedule: PenaltySchedule | None = None, seed=None) -> FlowResult:
    """Iterate U <- exp(alpha Omega(U)) U until the gradient vanishes.

    ``init`` is a unitary (or a pair for U3/U3K); if omitted a random start
    is drawn from ``seed``.  Penalty kinds use ``penalty_schedule`` (default
    :class:`PenaltySchedule`).
    """
    rule = ArmijoHalving() if rule is None else rule
    if isinstance(rule, AnalyticLocal) and qf.kind != "U1":
        raise ValueError("the analytic step size applies to U1/U1K only")
    if grad_tol is None:
        grad_tol = default_grad_tol(qf)
    if grad_tol <= 0 or max_iter < 0:
        raise ValueError("grad_tol must be positive and max_iter nonnegative")
    if init is None:
        init = random_init(qf, np.random.default_rng(seed))
    elif isinstance(init, np.ndarray) and init.ndim == 2:
        init = (init,)
    init = tuple(np.asarray(U, dtype=complex) for U in init)
    if len(init) != (2 if qf.two_sided else 1):
        raise ValueError(f"kind {qf.label} needs {2 if qf.two_sided else 1} initial unitaries")
    for U in init:
        _check_dim(qf, U)
        if unitarity_defect(U) > 1e-9 * qf.N:
            raise ContractError("initial point is not unitary")
    schedule = None
    if qf.constrained:
        schedule = penalty_schedule or PenaltySchedule()
    lambda0 = qf.lambda0 if schedule is None or schedule.lambda0 is None else schedule.lambda0
    problem = _GroupProblem(qf)
    state, f, g, k, trace, status, lam = ascend(
        problem, init, rule, grad_tol, max_iter, schedule=schedule, lambda0=lambda0,
        residual=lambda s: constraint_residual(qf, s[0]))
    return FlowResult(
        U=state[0], V=state[1] if qf.two_sided else None, f=f,
        converged=status == "converged", iterations=k, trace=trace, grad_norm=g,
        status=status, lam=lam,
        constraint_residual=constraint_residual(qf, state[0]) if qf.constrained else None,
        seed=seed if isinstance(seed, (int, np.integer)) else None)


@dataclass
class RestartResult:
    best: FlowResult
    runs: list[FlowResult]

    @property
    def values(self) -> np.ndarray:
        return np.array([r.f for r in self.runs])


def restart_seeds(seed: int, restarts: int) -> list[int]:
    return [int(seed) ^ i for i in range(restarts)]


def run_restarts(qf: QualityFunction, rule: StepSizeRule | None = None, restarts: int = 20,
                 seed: int = 0, inits: Sequence | None = None, **kwargs) -> RestartResult:
    """Independent runs from random starts (seed ^ i); best by final f.

    Extra starting points in ``inits`` are run first.
    """
    runs = []
    for init in inits or ():
        runs.append(run_flow(qf, rule, init=init, **kwargs))
    for s in restart_seeds(seed, restarts):
        runs.append(run_flow(qf, rule, seed=s, **kwargs))
    if not runs:
        raise ValueError("no runs requested")
    best = max(runs, key=lambda r: r.f)
    return RestartResult(best, runs)


def with_restriction(qf: QualityFunction, P: SubalgebraBasis | None) -> QualityFunction:
    return replace(qf, restriction=P)
