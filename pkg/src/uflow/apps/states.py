"""Named pure states and qubit Hamiltonians.

Qubit 1 is the leftmost Kronecker factor, so |001> has basis index 1.
Hamiltonians are Hermitian and use the standard Pauli matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..matcore import kron

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]]),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}

COUPLINGS = {"ZZ": ("z",), "XX": ("x",), "YY": ("y",), "XXX": ("x", "y", "z")}


def ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def _superpose(*bits: str) -> np.ndarray:
    v = sum(ket(b) for b in bits)
    return v / np.linalg.norm(v)


def build_state(name: str) -> np.ndarray:
    """W, Vbar (bit-flipped W), GHZ3, GHZp4 ((|0011>+|1100>)/sqrt2), Xplus."""
    states = {
        "W": ("001", "010", "100"),
        "Vbar": ("110", "101", "011"),
        "GHZ3": ("000", "111"),
        "GHZp4": ("0011", "1100"),
        "Xplus": ("10", "01"),
    }
    if name not in states:
        raise ValueError(f"unknown state {name!r}; expected one of {sorted(states)}")
    return _superpose(*states[name])


def family_state(family: str, s: float) -> np.ndarray:
    """sqrt(s) W + sqrt(1-s) Vbar (3q) or sqrt(s) GHZ' - sqrt(1-s) X+ x X+ (4q)."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s = {s} outside [0, 1]")
    if family == "3q":
        return np.sqrt(s) * build_state("W") + np.sqrt(1 - s) * build_state("Vbar")
    if family == "4q":
        xp = build_state("Xplus")
        return np.sqrt(s) * build_state("GHZp4") - np.sqrt(1 - s) * np.kron(xp, xp)
    raise ValueError(f"unknown family {family!r}; expected '3q' or '4q'")


def pauli_string(n: int, ops: dict[int, str]) -> np.ndarray:
    """Kronecker product with PAULI[ops[k]] at site k (1-based), identity elsewhere."""
    return kron(*(PAULI[ops[k]] if k in ops else np.eye(2) for k in range(1, n + 1)))


@dataclass(frozen=True)
class Coupling:
    type: str
    sites: tuple[int, int]
    J: float = 1.0


@dataclass(frozen=True)
class LocalField:
    site: int
    axis: str
    h: float = 1.0


@dataclass(frozen=True)
class HamiltonianSpec:
    n: int
    terms: tuple[Coupling, ...] = ()
    fields: tuple[LocalField, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        for t in self.terms:
            if t.type not in COUPLINGS:
                raise ValueError(f"unknown coupling {t.type!r}")
            k, l = t.sites
            if not (1 <= k <= self.n and 1 <= l <= self.n) or k == l:
                raise ValueError(f"invalid site pair {t.sites} for n={self.n}")
        for f in self.fields:
            if not 1 <= f.site <= self.n or f.axis not in PAULI:
                raise ValueError(f"invalid local field {f}")

    @classmethod
    def from_dict(cls, obj: dict) -> "HamiltonianSpec":
        terms = tuple(Coupling(t["type"], tuple(t["sites"]), float(t.get("J", 1.0)))
                      for t in obj.get("terms", []))
        fields = tuple(LocalField(int(f["site"]), f["axis"], float(f.get("h", 1.0)))
                       for f in obj.get("fields", []))
        return cls(int(obj["n"]), terms, fields)


def build_hamiltonian(spec: HamiltonianSpec) -> np.ndarray:
    H = np.zeros((2**spec.n, 2**spec.n), dtype=complex)
    for t in spec.terms:
        k, l = t.sites
        for a in COUPLINGS[t.type]:
            H += t.J * pauli_string(spec.n, {k: a, l: a})
    for f in spec.fields:
        H += f.h * pauli_string(spec.n, {f.site: f.axis})
    return H


def ring(n: int, coupling: str = "ZZ", J: float = 1.0) -> HamiltonianSpec:
    """Cyclic coupling 1-2, 2-3, ..., n-1."""
    pairs = [(k, k % n + 1) for k in range(1, n + 1)] if n > 2 else [(1, 2)]
    return HamiltonianSpec(n, tuple(Coupling(coupling, p, J) for p in pairs))


def chain(n: int, coupling: str = "ZZ", J: float = 1.0) -> HamiltonianSpec:
    return HamiltonianSpec(n, tuple(Coupling(coupling, (k, k + 1), J) for k in range(1, n)))


def ising_control_generators(n: int, J: float = 1.0) -> list[np.ndarray]:
    """Skew generators of an Ising chain with x/y controls on every qubit.

    Drift i*sum J Z_k Z_{k+1} plus i*X_k, i*Y_k; a connected chain is
    fully controllable.
    """
    gens = [1j * build_hamiltonian(chain(n, "ZZ", J))] if n > 1 else []
    for k in range(1, n + 1):
        for a in "xy":
            gens.append(1j * pauli_string(n, {k: a}))
    return gens
