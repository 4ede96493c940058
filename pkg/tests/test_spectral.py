import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from querybounds.spectral import (
    ConvergenceError, StreamingMatrix, charpoly_largest_root, largest_eigenvalue,
    power_iteration, spectral_norm)


def random_sym(rng, d, density=1.0):
    A = rng.uniform(0, 1, (d, d)) * (rng.uniform(0, 1, (d, d)) < density)
    return np.triu(A, 1) + np.triu(A, 1).T


def bipartite(rng, a, b):
    B = rng.uniform(0.1, 1, (a, b))
    A = np.zeros((a + b, a + b))
    A[:a, a:] = B
    A[a:, :a] = B.T
    return A


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 12), st.floats(0.2, 1.0), st.integers(0, 10**6))
def test_matches_eigvalsh_and_rayleigh(d, density, seed):
    rng = np.random.default_rng(seed)
    A = random_sym(rng, d, density)
    pair = spectral_norm(A)
    assert pair.value == pytest.approx(np.linalg.eigvalsh(A)[-1], rel=1e-8, abs=1e-12)
    v = pair.vector
    assert np.all(v >= 0) and np.linalg.norm(v) == pytest.approx(1.0)
    # Rayleigh quotient of the returned vector reproduces the value
    assert v @ A @ v == pytest.approx(pair.value, rel=1e-8, abs=1e-12)


@pytest.mark.parametrize("a, b", [(1, 1), (2, 3), (5, 5), (8, 3)])
def test_bipartite_needs_shift(a, b):
    A = bipartite(np.random.default_rng(a * 10 + b), a, b)
    pair = power_iteration(A)
    assert pair.value == pytest.approx(np.linalg.eigvalsh(A)[-1], rel=1e-8)
    if a * b > 1:
        assert pair.shifted


def test_charpoly_oracle():
    rng = np.random.default_rng(7)
    for d in (3, 6, 9):
        A = bipartite(rng, d - d // 2, d // 2)
        assert spectral_norm(A).value == pytest.approx(charpoly_largest_root(A), rel=1e-9)


def test_closed_forms():
    # star K_{1,k} has lambda = sqrt(k); path P_m has 2 cos(pi/(m+1))
    for k in range(1, 9):
        A = np.zeros((k + 1, k + 1))
        A[0, 1:] = A[1:, 0] = 1
        assert spectral_norm(A).value == pytest.approx(np.sqrt(k), abs=1e-9)
    for m in range(2, 10):
        A = np.diag(np.ones(m - 1), 1) + np.diag(np.ones(m - 1), -1)
        assert spectral_norm(A).value == pytest.approx(2 * np.cos(np.pi / (m + 1)), abs=1e-9)


def test_reducible_picks_largest_block():
    A = np.zeros((5, 5))
    A[0, 1] = A[1, 0] = 1.0
    A[2:, 2:] = 3.0 * (1 - np.eye(3))
    pair = spectral_norm(A)
    assert pair.value == pytest.approx(6.0)
    assert np.allclose(pair.vector[:2], 0)


def test_zero_matrix():
    pair = spectral_norm(np.zeros((4, 4)))
    assert pair.value == 0.0 and pair.method == "zero"


def test_near_degenerate_falls_back_to_lapack():
    # two nearly equal blocks linked weakly: tiny gap between the top two eigenvalues
    A = np.zeros((4, 4))
    A[0, 1] = A[1, 0] = 1.0
    A[2, 3] = A[3, 2] = 1.0 + 1e-7
    A[1, 2] = A[2, 1] = 1e-7
    pair = spectral_norm(A, dense_steps=200)
    assert pair.value == pytest.approx(np.linalg.eigvalsh(A)[-1], rel=1e-12)


def test_convergence_error_reports_state():
    A = np.zeros((4, 4))
    A[0, 1] = A[1, 0] = 1.0
    A[2, 3] = A[3, 2] = 1.0 + 1e-7
    A[1, 2] = A[2, 1] = 1e-7
    with pytest.raises(ConvergenceError) as info:
        power_iteration(A, max_iter=50)
    assert info.value.iterations == 50
    assert info.value.residual > 0


def test_streaming_matches_dense():
    rng = np.random.default_rng(3)
    A = random_sym(rng, 37)
    S = StreamingMatrix(37, lambda r, c: A[r, c], chunk=8)
    assert np.allclose(S.dense(), A)
    v = rng.normal(size=37)
    assert np.allclose(S.matvec(v), A @ v)
    assert spectral_norm(S).value == pytest.approx(largest_eigenvalue(A), rel=1e-8)


def test_empty_rejected():
    with pytest.raises(ValueError):
        spectral_norm(np.zeros((0, 0)))
