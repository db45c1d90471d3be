import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uflow.apps.states import ising_control_generators
from uflow.errors import ContractError
from uflow.liealg import (commutator_closed, embed_single_site, full_subalgebra_basis,
                          lie_closure, local_subalgebra_basis, partition_subalgebra_basis,
                          pauli_skew, span_residual, stabilizer_subalgebra, su_basis,
                          subalgebra_from_config)
from uflow.matcore import random_complex, random_skew


def _gram(P):
    F = P.elements.reshape(P.dim, -1)
    return (F.conj() @ F.T).real


def test_pauli_skew_convention():
    assert np.allclose(pauli_skew("x"), [[0, 1j], [1j, 0]])
    assert np.allclose(pauli_skew("y"), [[0, -1], [1, 0]])
    assert np.allclose(pauli_skew("z"), [[1j, 0], [0, -1j]])
    x, y, z = (pauli_skew(a) for a in "xyz")
    assert np.allclose(x @ y - y @ x, 2 * z)


def test_embed_single_site_position():
    Z = embed_single_site(1, 3, pauli_skew("z"))
    assert np.allclose(np.diag(Z), 1j * np.array([1, 1, 1, 1, -1, -1, -1, -1]))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_local_basis_orthonormal(n):
    P = local_subalgebra_basis(n)
    assert P.dim == 3 * n
    assert np.allclose(_gram(P), np.eye(P.dim), atol=1e-12)
    assert commutator_closed(P)


def test_su_basis():
    for N in (2, 3, 5):
        B = su_basis(N)
        assert B.shape[0] == N * N - 1
        assert all(abs(np.trace(b)) < 1e-14 for b in B)
        F = B.reshape(len(B), -1)
        assert np.allclose((F.conj() @ F.T).real, np.eye(len(B)))


def test_partition_basis():
    P = partition_subalgebra_basis([2, 3])
    assert P.dim == 3 + 8 and P.N == 6
    assert np.allclose(_gram(P), np.eye(P.dim), atol=1e-12)
    assert commutator_closed(P)


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_projector_idempotent_self_adjoint(seed):
    P = local_subalgebra_basis(2)
    rng = np.random.default_rng(seed)
    g, h = random_complex((4, 4), rng), random_complex((4, 4), rng)
    Pg = P(g)
    assert np.allclose(P(Pg), Pg, atol=1e-12)
    assert np.isclose(np.vdot(P(g), h).real, np.vdot(g, P(h)).real)
    assert span_residual(P, Pg) < 1e-12


def test_projector_fixes_members_and_kills_two_body_terms():
    P = local_subalgebra_basis(2)
    local = 0.3 * embed_single_site(1, 2, pauli_skew("x")) - embed_single_site(2, 2, pauli_skew("y"))
    assert np.allclose(P(local), local)
    zz = 1j * np.diag([1, -1, -1, 1])
    assert np.allclose(P(zz), 0)


def test_full_projector_is_traceless_skew_part():
    P = full_subalgebra_basis(3)
    W = random_skew(3, 1)
    expected = W - np.trace(W) / 3 * np.eye(3)
    assert np.allclose(P(W), expected)


def test_stabilizer_of_projector():
    E = np.diag([1.0, 1, 0, 0])
    P = stabilizer_subalgebra(E)
    assert P.dim == 8  # u(2) + u(2)
    for h in P.elements:
        assert np.allclose(h @ E, E @ h, atol=1e-10)
    assert commutator_closed(P)


def test_stabilizer_of_generic_hermitian_is_diagonal_torus():
    d = np.diag([1.0, 2, 3])
    assert stabilizer_subalgebra(d).dim == 3


def test_random_group_element_is_special_unitary_product():
    P = local_subalgebra_basis(2)
    K = P.random_group_element(np.random.default_rng(0))
    assert np.allclose(K.conj().T @ K, np.eye(4))
    assert np.isclose(np.linalg.det(K), 1)
    # a Kronecker product: reshuffled matrix has rank one
    R = K.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    assert np.linalg.matrix_rank(R, tol=1e-10) == 1


def test_lie_closure_ising_controls():
    assert lie_closure(ising_control_generators(2)).dimension == 15
    res = lie_closure(ising_control_generators(3))
    assert res.dimension == 63 and res.full


def test_lie_closure_single_generator():
    res = lie_closure([pauli_skew("z")])
    assert res.dimension == 1 and not res.full


def test_lie_closure_local_only_is_not_full():
    gens = [embed_single_site(k, 2, pauli_skew(a)) for k in (1, 2) for a in "xy"]
    res = lie_closure(gens)
    assert res.dimension == 6 and not res.full


def test_lie_closure_rejects_bad_input():
    with pytest.raises(ValueError):
        lie_closure(np.zeros((0, 2, 2)))
    with pytest.raises(ContractError):
        lie_closure([np.eye(2)])


def test_subalgebra_from_config():
    assert subalgebra_from_config({"kind": "local", "n": 2}).dim == 6
    assert subalgebra_from_config({"kind": "partition", "dims": [2, 4]}).dim == 18
    assert subalgebra_from_config({"kind": "full"}, N=3).dim == 8
    E = np.diag([1.0, 0])
    assert subalgebra_from_config({"kind": "stabilizer", "E": E}).dim == 2
    with pytest.raises(ValueError):
        subalgebra_from_config({"kind": "nope"})
