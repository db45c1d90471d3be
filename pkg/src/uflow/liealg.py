"""Lie subalgebras of u(N), their orthogonal projectors, and Lie closures.

All bases are stored orthonormal with respect to the real inner product
``Re tr(a^dagger b)``.  The projector onto the span is then simply

    P(g) = sum_j Re tr(h_j^dagger g) h_j

For the local algebra su_loc(2^n) the basis is {X_k, Y_k, Z_k} / sqrt(2^n),
so the familiar 1/2^n-weighted formula over unnormalised Pauli embeddings
is the same map.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import ContractError, DimensionError
from .matcore import haar_random_unitary, expm_skew, kron

RANK_RTOL = 1e-10

_PAULI_SKEW = {
    "x": np.array([[0, 1j], [1j, 0]]),
    "y": np.array([[0, -1], [1, 0]], dtype=complex),
    "z": np.array([[1j, 0], [0, -1j]]),
}


def pauli_skew(axis: str) -> np.ndarray:
    """Skew-Hermitian Pauli matrix i*sigma_axis (x -> [[0,i],[i,0]], ...)."""
    try:
        return _PAULI_SKEW[axis.lower()].copy()
    except (KeyError, AttributeError):
        raise ValueError(f"invalid Pauli axis {axis!r}; expected x, y or z") from None


def embed_single_site(k: int, n: int, g) -> np.ndarray:
    """1 x ... x g x ... x 1 with g in slot k (1-based, slot 1 leftmost)."""
    if not 1 <= k <= n:
        raise ValueError(f"site {k} out of range 1..{n}")
    g = np.asarray(g, dtype=complex)
    d = g.shape[0]
    return kron(np.eye(d ** (k - 1)), g, np.eye(d ** (n - k)))


def embed_factor(g, k: int, dims) -> np.ndarray:
    """Embed a dims[k]-square matrix g at position k (0-based) of a tensor product."""
    left = int(np.prod(dims[:k], dtype=int))
    right = int(np.prod(dims[k + 1:], dtype=int))
    return kron(np.eye(left), g, np.eye(right))


def _realify(mats: np.ndarray) -> np.ndarray:
    """Stack (m, N, N) complex matrices as (m, 2N^2) real vectors."""
    flat = mats.reshape(mats.shape[0], -1)
    return np.concatenate([flat.real, flat.imag], axis=1)


def _complexify(vecs: np.ndarray, N: int) -> np.ndarray:
    half = vecs.shape[1] // 2
    return (vecs[:, :half] + 1j * vecs[:, half:]).reshape(-1, N, N)


def orthonormalize(mats, rtol: float = RANK_RTOL) -> np.ndarray:
    """Modified Gram-Schmidt with one re-orthogonalisation pass.

    Inputs whose residual falls below ``rtol`` times the largest input norm
    are dropped as linearly dependent.  Returns an (m, N, N) array.
    """
    mats = np.asarray(mats, dtype=complex)
    if mats.ndim == 2:
        mats = mats[None]
    if mats.shape[0] == 0:
        return mats
    N = mats.shape[1]
    V = _realify(mats)
    scale = max(np.linalg.norm(V, axis=1).max(), np.finfo(float).tiny)
    basis: list[np.ndarray] = []
    for v in V:
        r = v.copy()
        for _ in range(2):
            for q in basis:
                r -= (q @ r) * q
        nr = np.linalg.norm(r)
        if nr > rtol * scale:
            basis.append(r / nr)
    if not basis:
        return np.zeros((0, N, N), dtype=complex)
    return _complexify(np.array(basis), N)


@dataclass(frozen=True)
class SubalgebraBasis:
    """Real-orthonormal basis of a Lie subalgebra of u(N).

    Also acts as the orthogonal projector onto that subalgebra.  ``dims`` is
    set for tensor-product partitions and lets :meth:`random_group_element`
    sample Haar-distributed local unitaries.
    """

    elements: np.ndarray
    label: str = ""
    dims: tuple[int, ...] | None = None
    _flat: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        el = np.asarray(self.elements, dtype=complex)
        if el.ndim != 3 or el.shape[1] != el.shape[2]:
            raise DimensionError("elements must have shape (m, N, N)")
        object.__setattr__(self, "elements", el)
        object.__setattr__(self, "_flat", el.reshape(el.shape[0], -1))

    @property
    def N(self) -> int:
        return self.elements.shape[1]

    @property
    def dim(self) -> int:
        return self.elements.shape[0]

    def __len__(self) -> int:
        return self.dim

    def coordinates(self, g) -> np.ndarray:
        """Real coordinates Re tr(h_j^dagger g)."""
        g = np.asarray(g, dtype=complex)
        if g.shape != (self.N, self.N):
            raise DimensionError(f"expected {self.N}x{self.N}, got {g.shape}")
        return (self._flat.conj() @ g.reshape(-1)).real

    def from_coordinates(self, c) -> np.ndarray:
        M = (np.asarray(c, dtype=float) @ self._flat).reshape(self.N, self.N)
        return 0.5 * (M - M.conj().T)

    def project(self, g) -> np.ndarray:
        return self.from_coordinates(self.coordinates(g))

    __call__ = project

    def random_group_element(self, rng: np.random.Generator) -> np.ndarray:
        """Random element of the connected group generated by this algebra."""
        if self.dims is not None:
            return kron(*(_haar_special(d, rng) for d in self.dims))
        c = rng.standard_normal(self.dim) * np.pi
        return expm_skew(self.from_coordinates(c))


def _haar_special(d: int, rng) -> np.ndarray:
    """Haar element of SU(d); the subalgebras here are traceless, so the phase is unreachable."""
    U = haar_random_unitary(d, rng)
    return U / np.linalg.det(U) ** (1.0 / d)


def project(P: SubalgebraBasis, g) -> np.ndarray:
    return P.project(g)


def span_residual(P: SubalgebraBasis, g) -> float:
    g = np.asarray(g, dtype=complex)
    return float(np.linalg.norm(g - P.project(g)))


def local_subalgebra_basis(n: int) -> SubalgebraBasis:
    """Orthonormal basis {X_k, Y_k, Z_k}/sqrt(2^n) of su_loc(2^n)."""
    if n < 1:
        raise ValueError("n must be positive")
    norm = np.sqrt(2.0 ** n)
    els = [
        embed_single_site(k, n, pauli_skew(a)) / norm
        for k in range(1, n + 1)
        for a in "xyz"
    ]
    return SubalgebraBasis(np.array(els), label=f"su_loc(2^{n})", dims=(2,) * n)


def su_basis(N: int) -> np.ndarray:
    """Orthonormal basis of su(N): i times generalised Gell-Mann matrices."""
    els = []
    for j in range(N):
        for k in range(j + 1, N):
            S = np.zeros((N, N), dtype=complex)
            S[j, k] = S[k, j] = 1j
            els.append(S / np.sqrt(2))
            A = np.zeros((N, N), dtype=complex)
            A[j, k], A[k, j] = -1, 1
            els.append(A / np.sqrt(2))
    for l in range(1, N):
        d = np.zeros(N)
        d[:l] = 1
        d[l] = -l
        els.append(np.diag(1j * d) / np.linalg.norm(d))
    return np.array(els).reshape(-1, N, N)


def u_basis(N: int) -> np.ndarray:
    return np.concatenate([su_basis(N), (1j * np.eye(N) / np.sqrt(N))[None]])


def full_subalgebra_basis(N: int) -> SubalgebraBasis:
    return SubalgebraBasis(su_basis(N), label=f"su({N})", dims=(N,))


def partition_subalgebra_basis(dims) -> SubalgebraBasis:
    """Basis of su(N_1) x ... x su(N_r) embedded in su(N_1 * ... * N_r)."""
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise ValueError("empty partition")
    if any(d < 2 for d in dims):
        raise ValueError(f"every factor dimension must be >= 2, got {dims}")
    els = []
    for k, d in enumerate(dims):
        for g in su_basis(d):
            G = embed_factor(g, k, dims)
            els.append(G / np.linalg.norm(G))
    label = "su(" + ")x su(".join(map(str, dims)) + ")"
    return SubalgebraBasis(np.array(els), label=label, dims=dims)


def stabilizer_subalgebra(E, rtol: float = RANK_RTOL) -> SubalgebraBasis:
    """Orthonormal basis of {k in u(N) : [k, E] = 0}.

    Solves (1 x E - E^T x 1) vec(k) = 0 over the real span of a u(N) basis;
    the kernel is read off an SVD with cutoff ``rtol * sigma_max``.
    """
    E = np.asarray(E, dtype=complex)
    if E.ndim != 2 or E.shape[0] != E.shape[1]:
        raise DimensionError("E must be square")
    N = E.shape[0]
    B = u_basis(N)
    L = np.kron(np.eye(N), E) - np.kron(E.T, np.eye(N))
    images = np.array([L @ b.reshape(-1, order="F") for b in B])  # (N^2, N^2) complex
    M = np.concatenate([images.real, images.imag], axis=1).T  # (2N^2, N^2) real
    _, s, Vt = np.linalg.svd(M)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rtol * smax)) if smax > 0 else 0
    kernel = Vt[rank:]
    els = np.tensordot(kernel, B, axes=(1, 0))
    return SubalgebraBasis(orthonormalize(els, rtol), label="stabilizer")


@dataclass(frozen=True)
class ClosureResult:
    basis: SubalgebraBasis
    dimension: int
    full: bool
    iterations: int


def lie_closure(generators, rtol: float = RANK_RTOL, max_iter: int | None = None) -> ClosureResult:
    """Smallest commutator-closed real span containing the generators.

    Breadth-first: each sweep brackets every generator with the elements
    added in the previous sweep; stops when a sweep adds nothing.
    """
    gens = np.asarray(generators, dtype=complex)
    if gens.ndim == 2:
        gens = gens[None]
    if gens.shape[0] == 0:
        raise ValueError("empty generator list")
    N = gens.shape[1]
    if any(np.linalg.norm(g + g.conj().T) > 1e-10 * max(1.0, np.linalg.norm(g)) for g in gens):
        raise ContractError("generators must be skew-Hermitian")
    gen_basis = orthonormalize(gens, rtol)
    vecs = list(_realify(gen_basis))
    frontier = list(gen_basis)
    cap = N * N if max_iter is None else max_iter
    it = 0
    while frontier and it < cap:
        it += 1
        new = []
        for g in gen_basis:
            for b in frontier:
                c = g @ b - b @ g
                r = _realify(c[None])[0]
                nc = np.linalg.norm(r)
                if nc <= rtol:
                    continue
                for _ in range(2):
                    for q in vecs:
                        r -= (q @ r) * q
                nr = np.linalg.norm(r)
                if nr > rtol * max(nc, 1.0):
                    q = r / nr
                    vecs.append(q)
                    new.append(_complexify(q[None], N)[0])
        frontier = new
    basis = SubalgebraBasis(_complexify(np.array(vecs), N), label="lie closure")
    traceless = all(abs(np.trace(g)) <= 1e-10 * max(1.0, np.linalg.norm(g)) for g in gens)
    target = N * N - 1 if traceless else N * N
    return ClosureResult(basis, basis.dim, basis.dim == target, it)


def subalgebra_from_config(cfg: dict, N: int | None = None, load_matrix=None) -> SubalgebraBasis:
    """Build a basis from {"kind": "local"|"partition"|"stabilizer"|"full", ...}."""
    kind = cfg.get("kind")
    if kind == "local":
        return local_subalgebra_basis(int(cfg["n"]))
    if kind == "partition":
        return partition_subalgebra_basis(cfg["dims"])
    if kind == "stabilizer":
        E = cfg["E"]
        if load_matrix is not None:
            E = load_matrix(E)
        return stabilizer_subalgebra(E)
    if kind == "full":
        n = cfg.get("N", N)
        if n is None:
            raise ValueError("restriction 'full' needs a dimension")
        return full_subalgebra_basis(int(n))
    raise ValueError(f"unknown restriction kind {kind!r}")


def commutator_closed(P: SubalgebraBasis, tol: float = 1e-8) -> bool:
    for a, b in product(P.elements, repeat=2):
        if span_residual(P, a @ b - b @ a) > tol:
            return False
    return True
