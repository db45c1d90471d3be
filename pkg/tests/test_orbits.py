import numpy as np
import pytest

from uflow.errors import IntegrityError
from uflow.flows import ArmijoHalving, Fixed
from uflow.liealg import local_subalgebra_basis
from uflow.matcore import haar_random_unitary, random_hermitian
from uflow.oracles import sorted_spectrum_bound
from uflow.orbits import (OrbitPoint, db_step, db_step_restricted, euler_db_step,
                          run_double_bracket, spectrum, spectrum_drift)


def test_db_step_is_isospectral():
    A, C = random_hermitian(5, 0), random_hermitian(5, 1)
    p = OrbitPoint.from_matrix(A)
    for _ in range(50):
        p = db_step(p, C, 0.05)
    assert p.drift() < 1e-12


def test_db_step_restricted_stays_in_local_orbit():
    A, C = random_hermitian(4, 2), random_hermitian(4, 3)
    P = local_subalgebra_basis(2)
    p = OrbitPoint.from_matrix(A)
    for _ in range(20):
        p = db_step_restricted(p, C, 0.1, P)
    assert p.drift() < 1e-12
    # the reduced density of qubit 1 keeps its spectrum under local conjugation
    red = lambda X: np.einsum("ijkj->ik", X.reshape(2, 2, 2, 2))
    assert np.allclose(np.linalg.eigvalsh(red(p.X)), np.linalg.eigvalsh(red(A)), atol=1e-12)


def test_db_step_zero_alpha_is_identity():
    A = random_hermitian(3, 4)
    assert np.allclose(db_step(OrbitPoint.from_matrix(A), random_hermitian(3, 5), 0.0).X, A)


def test_euler_step_drifts_but_exact_step_does_not():
    A, C = random_hermitian(4, 6), random_hermitian(4, 7)
    X = A
    for _ in range(20):
        X = euler_db_step(X, C, 0.005)
    assert np.all(np.isfinite(X))
    assert spectrum_drift(spectrum(A), X) > 1e-8
    p = OrbitPoint.from_matrix(A)
    for _ in range(20):
        p = db_step(p, C, 0.005)
    assert p.drift() < 1e-12


def test_drift_guard_raises():
    A = np.diag([1.0, 2.0])
    bad = OrbitPoint(A, spectrum(np.diag([1.0, 3.0])))
    with pytest.raises(IntegrityError):
        db_step(bad, np.eye(2), 0.1)


def test_spectrum_drift_matching():
    assert spectrum_drift(np.array([1, 2, 3]), np.diag([3.0, 1.0, 2.0])) < 1e-15
    assert np.isclose(spectrum_drift(np.array([1, 2]), np.diag([1.0, 2.5])), 0.5)


@pytest.mark.parametrize("N", [2, 4, 6])
def test_double_bracket_reaches_sorted_bound(N):
    A, C = random_hermitian(N, 10 + N), random_hermitian(N, 20 + N)
    res = run_double_bracket(A, C, seed=1)
    assert res.converged
    assert abs(res.f - sorted_spectrum_bound(A, C)) < 1e-6
    assert np.allclose(res.U @ A @ res.U.conj().T, res.X, atol=1e-9)
    assert res.trace.column("spectrum_drift").max() < 1e-9


def test_double_bracket_diagonalises_against_diagonal_target():
    A = random_hermitian(4, 3)
    C = np.diag([4.0, 3, 2, 1])
    res = run_double_bracket(A, C, seed=0)
    assert np.allclose(res.X, np.diag(np.sort(np.linalg.eigvalsh(A))[::-1]), atol=1e-5)


def test_double_bracket_fixed_step_and_trace_csv():
    A, C = random_hermitian(3, 0), np.diag([3.0, 2, 1])
    res = run_double_bracket(A, C, Fixed(0.02), max_iter=50, seed=0)
    assert res.iterations == 50
    assert res.trace.to_csv().splitlines()[0] == "k,f,grad_norm,alpha,unitarity_defect,spectrum_drift"


def test_double_bracket_restricted_init():
    A, C = random_hermitian(4, 1), random_hermitian(4, 2)
    P = local_subalgebra_basis(2)
    res = run_double_bracket(A, C, ArmijoHalving(), restriction=P, init=np.eye(4))
    R = res.U.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    assert np.linalg.matrix_rank(R, tol=1e-8) == 1
