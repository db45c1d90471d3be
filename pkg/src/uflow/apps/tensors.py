"""Best rank-1 tensor approximation and geometric entanglement.

A tensor X of size N_1 x ... x N_r is flattened lexicographically (first
index slowest), which sends outer products to Kronecker products.  Then

    max |<x1 x ... x xr, X>|^2  over unit factors
  = max |vec(X)^dagger U e_1|^2  over U in SU(N_1) x ... x SU(N_r),

a U1 flow restricted to the local subgroup with A = e_1 e_1^dagger and
C = vec(X) vec(X)^dagger.  The factors are the first columns U_k e_1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError
from ..flows import QualityFunction, RestartResult, StepSizeRule, run_restarts
from ..liealg import partition_subalgebra_basis
from ..matcore import kron, vec
from .states import family_state


@dataclass(frozen=True)
class Tensor:
    dims: tuple[int, ...]
    data: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        data = np.asarray(self.data, dtype=complex)
        if data.size != int(np.prod(dims)):
            raise DimensionError(f"{data.size} entries do not fit dims {dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "data", data.reshape(dims))

    @classmethod
    def from_array(cls, a) -> "Tensor":
        a = np.asarray(a, dtype=complex)
        return cls(a.shape, a)

    @classmethod
    def from_vector(cls, v, dims) -> "Tensor":
        return tensor_unvec(v, dims)

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.data, self.data).real)


def _as_tensor(X) -> Tensor:
    return X if isinstance(X, Tensor) else Tensor.from_array(X)


def tensor_vec(X) -> np.ndarray:
    return _as_tensor(X).data.reshape(-1).copy()


def tensor_unvec(v, dims) -> Tensor:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.size != int(np.prod(dims)):
        raise DimensionError(f"length {v.size} does not match dims {tuple(dims)}")
    return Tensor(tuple(dims), v.reshape(tuple(dims)))


def tensor_inner(Y, X) -> complex:
    """sum conj(Y) * X over all multi-indices."""
    Y, X = _as_tensor(Y), _as_tensor(X)
    if Y.dims != X.dims:
        raise DimensionError(f"dims differ: {Y.dims} vs {X.dims}")
    return complex(np.vdot(Y.data, X.data))


def outer(*factors) -> Tensor:
    """x1 (outer) x2 (outer) ... as a Tensor."""
    dims = tuple(len(f) for f in factors)
    return tensor_unvec(kron(*[np.asarray(f).reshape(-1, 1) for f in factors]).ravel(), dims)


def product_factors(v, dims) -> list[np.ndarray]:
    """Unit factors of a (numerically) product vector, one per tensor leg."""
    T = np.asarray(v, dtype=complex).reshape(tuple(dims))
    out = []
    for k in range(len(dims)):
        M = np.moveaxis(T, k, 0).reshape(dims[k], -1)
        u, _, _ = np.linalg.svd(M, full_matrices=False)
        out.append(u[:, 0])
    return out


@dataclass
class Rank1Result:
    coefficient: complex
    factors: list[np.ndarray]
    overlap: float
    residual_sq: float
    norm_sq: float
    converged: bool = True
    flow: RestartResult | None = None

    @property
    def delta(self) -> float:
        """1 - overlap/||X||^2: squared distance of the normalised state to product states."""
        return 1.0 - self.overlap / self.norm_sq if self.norm_sq else 0.0

    def approximation(self) -> Tensor:
        return Tensor(tuple(len(f) for f in self.factors),
                      self.coefficient * outer(*self.factors).data)


def rank1_from_factors(X, factors, converged: bool = True, flow=None) -> Rank1Result:
    X = _as_tensor(X)
    z = outer(*factors)
    c = tensor_inner(z, X)
    resid = X.data - c * z.data
    return Rank1Result(c, list(factors), float(abs(c) ** 2),
                       float(np.vdot(resid, resid).real), X.norm_sq, converged, flow)


def rank1_problem(X) -> QualityFunction:
    X = _as_tensor(X)
    if any(d < 2 for d in X.dims):
        raise DimensionError(f"every tensor dimension must be >= 2, got {X.dims}")
    x = tensor_vec(X)
    y = np.zeros_like(x)
    y[0] = 1.0
    return QualityFunction("U1", A=np.outer(y, y), C=np.outer(x, x.conj()),
                           restriction=partition_subalgebra_basis(X.dims))


def best_rank1(X, restarts: int = 20, seed: int = 0, rule: StepSizeRule | None = None,
               grad_tol: float | None = None, max_iter: int = 20_000) -> Rank1Result:
    """Best rank-1 approximation through the local-subgroup U1 flow."""
    X = _as_tensor(X)
    qf = rank1_problem(X)
    rr = run_restarts(qf, rule, restarts=restarts, seed=seed,
                      grad_tol=grad_tol, max_iter=max_iter)
    v = rr.best.U[:, 0]
    return rank1_from_factors(X, product_factors(v, X.dims), rr.best.converged, rr)


def entanglement_point(family: str, s: float, restarts: int = 20, seed: int = 0,
                       max_iter: int = 20_000) -> dict:
    x = family_state(family, s)
    n = int(round(np.log2(x.size)))
    res = best_rank1(tensor_unvec(x, (2,) * n), restarts=restarts, seed=seed, max_iter=max_iter)
    return {
        "s": float(s),
        "overlap": res.overlap,
        "delta": 1.0 - res.overlap,
        "measureI_value": 2.0 - 2.0 * res.overlap,
        "restarts_used": restarts,
        "converged": res.converged,
    }


def entanglement_sweep(family: str, s_values, restarts: int = 20, seed: int = 0,
                       max_iter: int = 20_000) -> list[dict]:
    """Distance to the nearest product state along a one-parameter family.

    ``delta`` is 1 - max overlap; ``measureI_value`` is the operator distance
    min ||x x^dagger - U y y^dagger U^dagger||^2 = 2 - 2 * overlap.
    Grid point i uses seed ^ i.
    """
    return [entanglement_point(family, s, restarts, int(seed) ^ i, max_iter)
            for i, s in enumerate(s_values)]


# ---------------------------------------------------------------------------
# bipartite closed form


@dataclass
class BipartiteResult:
    value: float
    U: np.ndarray


def local_transfer(Xmat, Ymat, U) -> float:
    """|vec(X)^dagger U vec(Y)|^2 with column-stacking vec."""
    return float(abs(np.vdot(vec(Xmat), U @ vec(Ymat))) ** 2)


def bipartite_optimal(Xmat, Ymat) -> BipartiteResult:
    """Maximum local transfer between vec(X) and vec(Y) from their SVDs.

    Value (sum_i s_i(X) s_i(Y))^2 with both spectra sorted decreasingly,
    attained at U = (conj(W_X) x V_X)(W_Y^T x V_Y^dagger).
    """
    Xmat = np.asarray(Xmat, dtype=complex)
    Ymat = np.asarray(Ymat, dtype=complex)
    if Xmat.shape != Ymat.shape or Xmat.ndim != 2:
        raise DimensionError(f"shape mismatch: {Xmat.shape} vs {Ymat.shape}")
    VX, sX, WXh = np.linalg.svd(Xmat)
    VY, sY, WYh = np.linalg.svd(Ymat)
    WX, WY = WXh.conj().T, WYh.conj().T
    value = float(np.dot(sX, sY) ** 2)
    U = np.kron(WX.conj(), VX) @ np.kron(WY.T, VY.conj().T)
    return BipartiteResult(value, U)


def bipartite_flow(Xmat, Ymat, restarts: int = 5, seed: int = 0,
                   rule: StepSizeRule | None = None, max_iter: int = 20_000) -> RestartResult:
    """Maximise the local transfer over SU(N2) x SU(N1) by the restricted U1 flow."""
    Xmat = np.asarray(Xmat, dtype=complex)
    N1, N2 = Xmat.shape
    x, y = vec(Xmat), vec(Ymat)
    qf = QualityFunction("U1", A=np.outer(y, y.conj()), C=np.outer(x, x.conj()),
                         restriction=partition_subalgebra_basis((N2, N1)))
    return run_restarts(qf, rule, restarts=restarts, seed=seed, max_iter=max_iter)
