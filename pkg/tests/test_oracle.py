"""Direct-solve oracle, intersection-projection limits, least-squares
references, and the positive-definiteness gate."""

import numpy as np
import pytest

from helpers import case2_problem, case3_problem, random_problem, rng, vec_solution
from sylflow import (
    Case,
    DimensionError,
    SylvesterProblem,
    UnsolvableError,
    bc_column_partition,
    direct_solve,
    flow_limit,
    grouped_column_partition,
    least_squares_reference,
    positive_definite_check,
    stack_equations,
    vec,
)
from sylflow.fixtures import example1_problem, example4_P_star


# ------------------------------------------------------------- direct_solve


def test_direct_solve_scalar():
    sol = direct_solve(SylvesterProblem(A=[[1.0]], B=[[1.0]], C=[[4.0]]))
    assert sol.case is Case.I
    assert sol.X_star == pytest.approx(np.array([[2.0]]))
    assert sol.residual <= 1e-12


def test_direct_solve_identity():
    sol = direct_solve(SylvesterProblem(A=np.eye(2), B=np.eye(2), C=2.0 * np.eye(2)))
    assert np.allclose(sol.X_star, np.eye(2), atol=1e-12)


def test_direct_solve_example1():
    p = example1_problem()
    sol = direct_solve(p)
    assert sol.case is Case.I
    assert np.linalg.norm(p.A @ sol.X_star + sol.X_star @ p.B - p.C) <= 1e-9
    assert sol.is_min_norm


def test_direct_solve_no_solution_reports_residual():
    sol = direct_solve(SylvesterProblem(A=[[1.0]], B=[[-1.0]], C=[[1.0]]))
    assert sol.case is Case.III
    assert sol.X_star == pytest.approx(np.array([[0.0]]))
    assert sol.residual == pytest.approx(1.0, abs=1e-12)


def test_direct_solve_min_norm_on_singular_case():
    p = case2_problem(rng(21))
    sol = direct_solve(p)
    assert sol.case is Case.II
    assert sol.residual <= 1e-8
    # min-norm: orthogonal to the operator kernel, so no shorter solution exists
    x = vec(sol.X_star)
    for _ in range(5):
        other = x + _kernel_vector(p, rng(22))
        assert np.linalg.norm(x) <= np.linalg.norm(other) + 1e-10


def _kernel_vector(p, r):
    from sylflow import pinv, vectorized_operator

    H = vectorized_operator(p)
    perp = np.eye(H.shape[1]) - pinv(H) @ H
    return perp @ r.uniform(-2.0, 2.0, H.shape[1])


# --------------------------------------------------------------- flow_limit


def test_flow_limit_zero_init_reaches_min_norm():
    p = example1_problem()
    eqs = bc_column_partition(p)
    x_star = vec_solution(p)
    limit = flow_limit(eqs, np.zeros((5, 25)))
    assert np.linalg.norm(limit - x_star) <= 1e-8


def test_flow_limit_averages_members_of_intersection():
    # Singular consistent case: the solution set is affine; states that are
    # already solutions must map to their average.
    p = case2_problem(rng(23))
    eqs = bc_column_partition(p)
    x_star = vec_solution(p)
    r = rng(24)
    rows = [x_star + _kernel_vector(p, r) for _ in range(3)]
    X0 = np.vstack(rows)
    limit = flow_limit(eqs, X0)
    assert np.linalg.norm(limit - X0.mean(axis=0)) <= 1e-8


def test_flow_limit_case2_lands_in_solution_set():
    p = case2_problem(rng(25))
    eqs = bc_column_partition(p)
    X0 = rng(26).uniform(-1, 1, (3, 9))
    limit = flow_limit(eqs, X0)
    H, c = stack_equations(eqs)
    assert np.linalg.norm(H @ limit - c) <= 1e-8 * (1 + np.linalg.norm(c))


def test_flow_limit_case1_is_init_independent():
    p = example1_problem()
    eqs = bc_column_partition(p)
    r = rng(27)
    l1 = flow_limit(eqs, r.uniform(-3, 3, (5, 25)))
    l2 = flow_limit(eqs, r.uniform(-3, 3, (5, 25)))
    assert np.linalg.norm(l1 - l2) <= 1e-8


def test_flow_limit_fixes_the_oracle_solution():
    p = example1_problem()
    eqs = grouped_column_partition(p, [[1, 2], [3, 4, 5]])
    x_star = vec_solution(p)
    limit = flow_limit(eqs, np.tile(x_star, (2, 1)))
    assert np.linalg.norm(limit - x_star) <= 1e-9


def test_flow_limit_rejects_inconsistent_and_bad_shapes():
    p3 = case3_problem(rng(28))
    eqs = bc_column_partition(p3)
    with pytest.raises(UnsolvableError):
        flow_limit(eqs, np.zeros((3, 9)))
    p = example1_problem()
    with pytest.raises(DimensionError):
        flow_limit(bc_column_partition(p), np.zeros((4, 25)))  # wrong node count
    with pytest.raises(DimensionError):
        flow_limit(bc_column_partition(p), np.zeros((5, 24)))  # wrong width


# --------------------------------------------- least-squares reference point


def test_least_squares_matches_direct_solve_when_consistent():
    p = random_problem(rng(29))
    assert np.linalg.norm(least_squares_reference(p) - vec_solution(p)) <= 1e-10


def test_least_squares_scalar_inconsistent():
    p = SylvesterProblem(A=[[1.0]], B=[[-1.0]], C=[[1.0]])
    x = least_squares_reference(p)
    assert x == pytest.approx(np.zeros(1))


def test_least_squares_beats_random_candidates():
    from sylflow import vectorized_operator

    p = case3_problem(rng(30))
    H = vectorized_operator(p)
    c = vec(p.C)
    x_ls = least_squares_reference(p)
    best = np.linalg.norm(H @ x_ls - c)
    r = rng(31)
    for _ in range(20):
        cand = x_ls + r.uniform(-1.0, 1.0, x_ls.shape[0])
        assert best <= np.linalg.norm(H @ cand - c) + 1e-10


# ---------------------------------------------------- positive-definiteness


def test_positive_definite_check():
    assert positive_definite_check(np.eye(3))
    assert not positive_definite_check(np.diag([1.0, -1.0]))
    assert not positive_definite_check(np.zeros((2, 2)))
    assert positive_definite_check(example4_P_star())
