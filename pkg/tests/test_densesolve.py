"""Pivoted dense-solver tests against closed-form oracles."""

import numpy as np
import pytest

from msdiff import (
    DenseSystem,
    InvalidParameterError,
    SingularSystemError,
    solve_dense,
    solve_dense_batch,
)
from oracles import adjugate_solve, solve_2x2


def test_identity_returns_rhs():
    b = np.array([3.0, -1.0, 0.25])
    assert np.array_equal(solve_dense(np.eye(3), b), b)


def test_diagonal_example():
    x = solve_dense(np.array([[2.0, 0.0], [0.0, 4.0]]), np.array([2.0, 8.0]))
    assert x == pytest.approx([1.0, 2.0], rel=1e-15)


def test_random_small_systems_match_adjugate():
    rng = np.random.default_rng(42)
    for _ in range(60):
        k = rng.integers(1, 5)
        a = rng.normal(size=(k, k)) + 3.0 * np.eye(k)  # keep well conditioned
        b = rng.normal(size=k)
        x = solve_dense(a, b)
        assert x == pytest.approx(adjugate_solve(a, b), rel=1e-10, abs=1e-12)
        assert np.abs(a @ x - b).max() <= 1e-10 * (1.0 + np.abs(b).max())


def test_batch_matches_single():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(25, 3, 3)) + 2.5 * np.eye(3)
    b = rng.normal(size=(25, 3))
    batch = solve_dense_batch(a, b)
    for m in range(25):
        assert np.array_equal(batch[m], solve_dense(a[m], b[m]))


def test_pivoting_handles_zero_leading_entry():
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    x = solve_dense(a, np.array([2.0, 3.0]))
    assert x == pytest.approx([3.0, 2.0], rel=1e-15)


def test_zero_rhs_gives_exact_zero():
    a = np.array([[-0.8, -0.06], [-0.53, -2.27]])
    x = solve_dense(a, np.zeros(2))
    assert np.all(x == 0.0)


def test_singular_matrix_raises_with_pivot_index():
    a = np.array([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(SingularSystemError) as err:
        solve_dense(a, np.array([1.0, 1.0]))
    assert err.value.pivot_index == 1


def test_all_zero_matrix_is_singular():
    with pytest.raises(SingularSystemError) as err:
        solve_dense(np.zeros((3, 3)), np.zeros(3))
    assert err.value.pivot_index == 0


def test_singular_tol_threshold():
    a = np.array([[1.0, 0.0], [0.0, 1e-9]])
    solve_dense(a, np.ones(2), singular_tol=1e-12)  # fine
    with pytest.raises(SingularSystemError):
        solve_dense(a, np.ones(2), singular_tol=1e-6)


def test_batch_error_carries_system_index():
    a = np.stack([np.eye(2), np.zeros((2, 2)), np.eye(2)])
    with pytest.raises(SingularSystemError) as err:
        solve_dense_batch(a, np.ones((3, 2)))
    assert err.value.system_index == 1


def test_size_limit_and_shape_checks():
    with pytest.raises(InvalidParameterError):
        solve_dense(np.eye(17), np.ones(17))
    with pytest.raises(InvalidParameterError):
        solve_dense(np.ones((2, 3)), np.ones(2))
    with pytest.raises(InvalidParameterError):
        solve_dense_batch(np.ones((4, 2, 2)), np.ones((3, 2)))
    with pytest.raises(InvalidParameterError):
        DenseSystem(np.eye(2), np.ones(3))


def test_dense_system_wrapper_solves():
    system = DenseSystem(np.array([[2.0, 1.0], [1.0, 3.0]]), np.array([3.0, 4.0]))
    assert system.solve() == pytest.approx(adjugate_solve(system.a, system.b), rel=1e-12)


def test_benchmark_flux_system_matches_closed_form(bench_spec):
    # the eliminated 2x2 system at the benchmark interface half-node
    from msdiff import assemble_flux_system

    coeffs = assemble_flux_system(
        np.array([0.4, 0.2, 0.4]), np.array([-16.0, 0.0, 16.0]), bench_spec)
    x = solve_dense(coeffs.a, coeffs.rhs)
    assert x == pytest.approx(solve_2x2(coeffs.a, coeffs.rhs), rel=1e-12)


def test_deterministic_repeated_solves():
    rng = np.random.default_rng(11)
    a = rng.normal(size=(4, 4)) + 4.0 * np.eye(4)
    b = rng.normal(size=4)
    first = solve_dense(a, b)
    for _ in range(5):
        assert np.array_equal(solve_dense(a, b), first)
