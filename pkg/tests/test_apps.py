import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uflow.apps import (HamiltonianSpec, Tensor, best_rank1, bipartite_flow, bipartite_optimal,
                        build_hamiltonian, build_state, chain, entanglement_sweep, family_state,
                        joint_objective, joint_reversibility, local_transfer, outer,
                        pointwise_reversibility, ring, tensor_inner, tensor_unvec, tensor_vec)
from uflow.errors import DimensionError
from uflow.matcore import haar_random_unitary, kron, random_complex, vec
from uflow.oracles import pointwise_minimum


# states and Hamiltonians

def test_w_state_amplitudes():
    w = build_state("W")
    assert np.isclose(np.linalg.norm(w), 1)
    assert np.flatnonzero(np.abs(w) > 0).tolist() == [1, 2, 4]
    assert np.allclose(w[[1, 2, 4]], 1 / np.sqrt(3))


def test_w_tensor_slices():
    W = build_state("W").reshape(2, 2, 2)
    assert np.allclose(W[0], np.array([[0, 1], [1, 0]]) / np.sqrt(3))
    assert np.allclose(W[1], np.array([[1, 0], [0, 0]]) / np.sqrt(3))


def test_other_states():
    assert np.allclose(build_state("GHZp4")[[3, 12]], 1 / np.sqrt(2))
    assert np.allclose(build_state("Xplus"), [0, 1, 1, 0] / np.sqrt(2))
    assert np.allclose(build_state("Vbar")[[3, 5, 6]], 1 / np.sqrt(3))
    with pytest.raises(ValueError):
        build_state("bell")


def test_family_states():
    assert np.allclose(family_state("3q", 1.0), build_state("W"))
    xp = build_state("Xplus")
    assert np.allclose(family_state("4q", 0.0), -np.kron(xp, xp))
    with pytest.raises(ValueError):
        family_state("3q", 1.5)
    with pytest.raises(ValueError):
        family_state("5q", 0.5)


def test_hamiltonians():
    assert np.allclose(build_hamiltonian(chain(2)), np.diag([1, -1, -1, 1]))
    H = build_hamiltonian(ring(4, "XXX", 0.5))
    assert np.allclose(H, H.conj().T)
    spec = HamiltonianSpec.from_dict({"n": 2, "terms": [{"type": "ZZ", "sites": [1, 2], "J": 0.5}],
                                      "fields": [{"site": 1, "axis": "z", "h": 0.5},
                                                 {"site": 2, "axis": "z", "h": 0.5}]})
    assert np.allclose(build_hamiltonian(spec), np.diag([1.5, -0.5, -0.5, -0.5]))
    with pytest.raises(ValueError):
        HamiltonianSpec.from_dict({"n": 2, "terms": [{"type": "ZZ", "sites": [1, 3]}]})
    with pytest.raises(ValueError):
        HamiltonianSpec.from_dict({"n": 2, "terms": [{"type": "ZX", "sites": [1, 2]}]})


# tensors

def test_tensor_inner_and_vec():
    e1, e2 = np.array([1, 0]), np.array([0, 1])
    assert tensor_inner(outer(e1, e1), outer(e1, e2)) == 0
    rng = np.random.default_rng(0)
    X = Tensor.from_array(random_complex((2, 3, 2), rng))
    Y = Tensor.from_array(random_complex((2, 3, 2), rng))
    assert np.isclose(tensor_inner(Y, X), np.vdot(tensor_vec(Y), tensor_vec(X)))
    assert np.isclose(tensor_inner(X, X).real, X.norm_sq) and tensor_inner(X, X).real >= 0
    assert np.allclose(tensor_unvec(tensor_vec(X), X.dims).data, X.data)
    with pytest.raises(DimensionError):
        tensor_unvec(np.zeros(5), (2, 2))
    with pytest.raises(DimensionError):
        tensor_inner(X, Tensor.from_array(np.zeros((2, 2))))


def test_tensor_vec_outer_is_kron_and_matrix_case():
    rng = np.random.default_rng(1)
    x, y = random_complex(2, rng), random_complex(3, rng)
    assert np.allclose(tensor_vec(outer(x, y)), np.kron(x, y))
    M = random_complex((2, 3), rng)
    assert np.allclose(tensor_vec(M), vec(M.T))


def test_best_rank1_of_product_tensor():
    rng = np.random.default_rng(2)
    fs = [random_complex(d, rng) for d in (2, 3, 2)]
    X = outer(*fs)
    r = best_rank1(X, restarts=3)
    assert np.isclose(r.overlap, X.norm_sq, rtol=1e-10)
    assert r.residual_sq < 1e-8
    assert np.allclose(r.approximation().data, X.data, atol=1e-5)


def test_best_rank1_w_state():
    r = best_rank1(tensor_unvec(build_state("W"), (2, 2, 2)), restarts=5)
    assert abs(r.overlap - 4 / 9) < 1e-6
    assert abs(r.residual_sq - 5 / 9) < 1e-4
    assert all(abs(np.linalg.norm(f) - 1) < 1e-10 for f in r.factors)


@given(st.integers(0, 10**6))
@settings(max_examples=10, deadline=None)
def test_rank1_residual_identity(seed):
    X = Tensor.from_array(random_complex((2, 2, 3), seed))
    r = best_rank1(X, restarts=2, seed=seed)
    assert abs(r.residual_sq + r.overlap - X.norm_sq) <= 1e-9 * max(1, X.norm_sq)


def test_rank1_invariant_under_local_rotation():
    rng = np.random.default_rng(4)
    X = random_complex((2, 2, 2), rng)
    Us = [haar_random_unitary(2, rng) for _ in range(3)]
    Y = np.einsum("ai,bj,ck,ijk->abc", *Us, X)
    a = best_rank1(X, restarts=10).overlap
    b = best_rank1(Y, restarts=10).overlap
    assert abs(a - b) < 1e-4


def test_rank1_rejects_trivial_leg():
    with pytest.raises(DimensionError):
        best_rank1(np.ones((1, 2)))


def test_sweep_rows_and_4q_values():
    rows = entanglement_sweep("4q", [0.0, 1.0], restarts=10)
    assert [r["s"] for r in rows] == [0.0, 1.0]
    assert abs(rows[0]["delta"] - 0.75) < 1e-6
    assert abs(rows[1]["delta"] - 0.5) < 1e-6
    for r in rows:
        assert 0 <= r["delta"] <= 1
        assert np.isclose(r["measureI_value"], 2 * r["delta"])


def test_product_state_has_zero_delta():
    prod = np.kron(np.kron([1, 0], [0.6, 0.8]), [1, 1j]) / np.sqrt(2)
    r = best_rank1(tensor_unvec(prod, (2, 2, 2)), restarts=3)
    assert 1 - r.overlap < 1e-6


# bipartite

def test_bipartite_examples():
    bell = np.eye(2) / np.sqrt(2)
    prod = np.diag([1.0, 0])
    assert np.isclose(bipartite_optimal(bell, prod).value, 0.5)
    M = random_complex((2, 3), 1)
    M /= np.linalg.norm(M)
    r = bipartite_optimal(M, M)
    assert np.isclose(r.value, 1) and np.isclose(local_transfer(M, M, r.U), 1)


def test_bipartite_u_star_is_local():
    rng = np.random.default_rng(7)
    X, Y = random_complex((2, 3), rng), random_complex((2, 3), rng)
    r = bipartite_optimal(X, Y)
    assert np.allclose(r.U.conj().T @ r.U, np.eye(6))
    R = r.U.reshape(3, 2, 3, 2).transpose(0, 2, 1, 3).reshape(9, 4)
    assert np.linalg.matrix_rank(R, tol=1e-10) == 1
    assert abs(local_transfer(X, Y, r.U) - r.value) <= 1e-10 * max(1, r.value)


def test_bipartite_flow_never_beats_formula():
    rng = np.random.default_rng(8)
    for _ in range(5):
        X, Y = random_complex((2, 2), rng), random_complex((2, 2), rng)
        bound = bipartite_optimal(X, Y).value
        rr = bipartite_flow(X, Y, restarts=3, seed=1)
        assert rr.values.max() <= bound + 1e-8
        assert abs(rr.best.f - bound) < 1e-6


def test_bipartite_shape_mismatch():
    with pytest.raises(DimensionError):
        bipartite_optimal(np.eye(2), np.eye(3))


# reversibility

def test_joint_objective_range():
    H = build_hamiltonian(ring(3))
    assert np.isclose(joint_objective(H, np.eye(8)), 1)
    K = kron(*[haar_random_unitary(2, i) for i in range(3)])
    assert -1 - 1e-12 <= joint_objective(H, K) <= 1 + 1e-12


def test_joint_single_pair_flip():
    r = joint_reversibility(chain(2), restarts=3)
    assert r.reversible and abs(r.min_value + 1) < 1e-6
    assert np.isclose(joint_objective(chain(2), r.K), r.min_value)


def test_joint_verdicts():
    assert joint_reversibility(ring(4), restarts=5).reversible
    assert not joint_reversibility(ring(3), restarts=5).reversible


def test_joint_zero_hamiltonian():
    with pytest.raises(ValueError):
        joint_reversibility(np.zeros((4, 4)))


def test_pointwise_tau_zero():
    r = pointwise_reversibility(build_hamiltonian(ring(3)), 0.0, restarts=0)
    assert r.reversible and np.isclose(r.min_value, -1)
    assert np.allclose(r.K1, np.eye(8)) and np.allclose(r.K2, np.eye(8))


def test_joint_implies_pointwise():
    H = build_hamiltonian(ring(4))
    tau = 0.37
    r = pointwise_reversibility(H, tau, restarts=5)
    assert r.reversible
    import scipy.linalg
    lhs = r.K1 @ scipy.linalg.expm(-1j * tau * H) @ r.K2
    assert np.allclose(lhs, scipy.linalg.expm(1j * tau * H), atol=1e-4)


def test_pointwise_matches_sampling_oracle():
    H = np.diag([1.5, -0.5, -0.5, -0.5])
    r = pointwise_reversibility(H, np.pi / 4, restarts=10)
    assert abs(r.min_value - pointwise_minimum(H, np.pi / 4, starts=10)) < 1e-3
