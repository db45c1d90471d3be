import numpy as np
import pytest

from uflow.apps import best_rank1, build_state
from uflow.matcore import haar_random_unitary, random_complex, random_hermitian
from uflow.oracles import (brute_force_rank1, fd_directional, fd_second, hopm, permutation_sums,
                           sorted_spectrum_bound)


def test_sorted_spectrum_bound_examples():
    assert np.isclose(sorted_spectrum_bound(np.diag([1.0, 2]), np.diag([1.0, 2])), 5)
    assert np.isclose(sorted_spectrum_bound(np.diag([2.0, 1]), np.diag([3.0, 1])), 7)
    with pytest.raises(ValueError):
        sorted_spectrum_bound(np.array([[0, 1], [0, 0]]), np.eye(2))


def test_sorted_spectrum_bound_dominates_haar_samples():
    A, C = random_hermitian(4, 0), random_hermitian(4, 1)
    b = sorted_spectrum_bound(A, C)
    rng = np.random.default_rng(2)
    for _ in range(1000):
        U = haar_random_unitary(4, rng)
        assert np.trace(C.conj().T @ U @ A @ U.conj().T).real <= b + 1e-12


def test_permutation_sums():
    vals = permutation_sums(np.diag([1.0, 2, 3]), np.diag([1.0, 2, 3]))
    assert vals == [10.0, 11.0, 13.0, 14.0]


def test_fd_directional():
    U = haar_random_unitary(3, 0)
    W = random_complex((3, 3), 1)
    W = W - W.conj().T
    assert fd_directional(lambda X: 3.0, U, W) == 0
    # f(exp(tW)U) = t * const is exactly linear in t for this f
    f = lambda X: np.trace(X @ U.conj().T).imag
    assert np.isfinite(fd_directional(f, U, W))


def test_fd_error_is_second_order():
    A, C = random_hermitian(3, 2), random_hermitian(3, 3)
    U = haar_random_unitary(3, 4)
    W = random_complex((3, 3), 5)
    W = W - W.conj().T
    f = lambda X: np.trace(C @ X @ A @ X.conj().T).real
    Ak = U @ A @ U.conj().T
    exact = np.trace(C @ (W @ Ak - Ak @ W)).real
    e1 = abs(fd_directional(f, U, W, 1e-2) - exact)
    e2 = abs(fd_directional(f, U, W, 5e-3) - exact)
    assert 1.7 < np.log2(e1 / e2) < 2.3


def test_fd_second_of_quadratic_path():
    A, C = random_hermitian(2, 0), random_hermitian(2, 1)
    W = np.array([[1j, 0], [0, -1j]])
    f = lambda X: np.trace(C @ X @ A @ X.conj().T).real
    Ak = A
    exact = np.trace(C @ (W @ (W @ Ak - Ak @ W) - (W @ Ak - Ak @ W) @ W)).real
    assert np.isclose(fd_second(f, np.eye(2), W), exact, atol=1e-5)


def test_hopm_rank1_exact():
    rng = np.random.default_rng(0)
    fs = [random_complex(2, rng) for _ in range(3)]
    X = np.einsum("i,j,k->ijk", *fs)
    r = hopm(X)
    assert r.residual_sq < 1e-20 * np.vdot(X, X).real + 1e-24


def test_hopm_w_state_trap_and_good_init():
    W = build_state("W").reshape(2, 2, 2)
    trapped = hopm(W)  # dominant singular vectors all point to |0>
    assert abs(trapped.overlap - 1 / 3) < 1e-9
    good = hopm(W, init=[np.ones(2)] * 3)
    assert abs(good.overlap - 4 / 9) < 1e-6


def test_hopm_monotone():
    for seed in range(5):
        X = random_complex((2, 3, 2), seed)
        h = np.array(hopm(X, init="random", seed=seed).history)
        assert np.all(np.diff(h) >= -1e-12 * h.max())


def test_hopm_errors():
    with pytest.raises(ValueError):
        hopm(np.zeros((2, 2, 2)))
    with pytest.raises(ValueError):
        hopm(np.ones((1, 2)))


def test_brute_force_examples():
    assert abs(brute_force_rank1(build_state("W").reshape(2, 2, 2)).overlap - 4 / 9) < 1e-3
    assert abs(brute_force_rank1(build_state("GHZ3").reshape(2, 2, 2)).overlap - 1 / 2) < 1e-3
    x = np.einsum("i,j,k->ijk", [1, 0], [0.6, 0.8], [1, 1j]) / np.sqrt(2)
    assert abs(brute_force_rank1(x).overlap - 1) < 1e-3
    with pytest.raises(ValueError):
        brute_force_rank1(np.ones((2, 3, 2)))
    with pytest.raises(ValueError):
        brute_force_rank1(np.ones((2, 2, 2)), resolution=10)


def test_random_tensor_flow_hopm_grid_agree():
    for seed in range(3):
        X = random_complex((2, 2, 2), seed)
        X /= np.linalg.norm(X)
        flow = best_rank1(X, restarts=10).overlap
        power = max(hopm(X, init="random", seed=s).overlap for s in range(10))
        grid = brute_force_rank1(X).overlap
        assert abs(flow - power) < 1e-4
        assert abs(flow - grid) < 1e-4
        assert grid <= flow + 1e-12
