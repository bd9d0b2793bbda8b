"""Partition schemes: every scheme's node operators must reproduce the
vectorized equation (exactly, or as a solvable superset), and the solvability
classifier must sort problems into unique / infinite / none."""

import numpy as np
import pytest

from helpers import case2_problem, case3_problem, random_problem, rng, vec_solution
from sylflow import (
    Case,
    ContractViolationError,
    DimensionError,
    NetworkGraph,
    PartitionError,
    SylvesterProblem,
    ac_row_partition,
    bc_column_partition,
    clustering_partition,
    consistency_check,
    full_rowcol_partition,
    grouped_column_partition,
    high_res_partition,
    kron,
    lyapunov_sym_partition,
    stack_equations,
    unvec,
    vec,
    vectorized_operator,
)
from sylflow.fixtures import example1_problem, example4_problem
from sylflow.netgraph import make_path


# ------------------------------------------------------------ problem class


def test_problem_validation():
    with pytest.raises(DimensionError):
        SylvesterProblem(A=np.ones((2, 3)), B=np.eye(3), C=np.ones((2, 3)))
    with pytest.raises(DimensionError):
        SylvesterProblem(A=np.eye(2), B=np.eye(3), C=np.ones((3, 2)))
    with pytest.raises(ContractViolationError):
        SylvesterProblem(A=np.array([[np.inf]]), B=np.eye(1), C=np.eye(1))


def test_problem_frozen_arrays():
    p = example1_problem()
    assert (p.n, p.m) == (5, 5)
    assert p.is_square
    with pytest.raises(ValueError):
        p.A[0, 0] = 99.0


def test_vectorized_operator_formula():
    p = random_problem(rng(11), n=3, m=4)
    H = vectorized_operator(p)
    expected = kron(np.eye(4), p.A) + kron(p.B.T, np.eye(3))
    assert np.array_equal(H, expected)


# ---------------------------------------------------------------- bc-column


def test_bc_column_scalar():
    p = SylvesterProblem(A=[[2.0]], B=[[3.0]], C=[[5.0]])
    (eq,) = bc_column_partition(p)
    assert np.array_equal(eq.H, np.array([[5.0]]))
    assert np.array_equal(eq.c, np.array([5.0]))


def test_bc_column_decoupled():
    p = SylvesterProblem(A=np.eye(2), B=np.zeros((2, 2)), C=np.eye(2))
    eqs = bc_column_partition(p)
    assert np.array_equal(eqs[0].H, np.hstack([np.eye(2), np.zeros((2, 2))]))
    assert np.array_equal(eqs[0].c, np.array([1.0, 0.0]))
    assert np.array_equal(eqs[1].H, np.hstack([np.zeros((2, 2)), np.eye(2)]))
    assert np.array_equal(eqs[1].c, np.array([0.0, 1.0]))


def test_bc_column_stack_reproduces_operator():
    p = example1_problem()
    H, c = stack_equations(bc_column_partition(p))
    assert np.array_equal(H, vectorized_operator(p))
    assert np.array_equal(c, vec(p.C))


def test_bc_column_solution_in_every_node_set():
    p = example1_problem()
    x = vec_solution(p)
    for eq in bc_column_partition(p):
        assert np.linalg.norm(eq.H @ x - eq.c) <= 1e-9


# ------------------------------------------------------------------- ac-row


def test_ac_row_is_bc_of_transposed_problem():
    p = random_problem(rng(12), n=3, m=4)
    pt = SylvesterProblem(A=p.B.T, B=p.A.T, C=p.C.T)
    for eq, ref in zip(ac_row_partition(p), bc_column_partition(pt)):
        assert eq.node_id == ref.node_id
        assert np.array_equal(eq.H, ref.H)
        assert np.array_equal(eq.c, ref.c)


def test_ac_row_scalar_matches_bc():
    p = SylvesterProblem(A=[[2.0]], B=[[3.0]], C=[[5.0]])
    (eq,) = ac_row_partition(p)
    assert np.array_equal(eq.H, np.array([[5.0]]))


# ------------------------------------------------------------------ grouped


def test_grouped_singletons_match_bc():
    p = example1_problem()
    base = bc_column_partition(p)
    grouped = grouped_column_partition(p, [[i] for i in range(1, 6)])
    for eq, ref in zip(grouped, base):
        assert np.array_equal(eq.H, ref.H)
        assert np.array_equal(eq.c, ref.c)


def test_grouped_single_group_is_full_operator():
    p = example1_problem()
    (eq,) = grouped_column_partition(p, [[1, 2, 3, 4, 5]])
    assert np.array_equal(eq.H, vectorized_operator(p))
    assert np.array_equal(eq.c, vec(p.C))


def test_grouped_row_counts():
    p = example1_problem()
    eqs = grouped_column_partition(p, [[1, 2], [3, 4, 5]])
    assert [eq.H.shape[0] for eq in eqs] == [10, 15]
    x = vec_solution(p)
    for eq in eqs:
        assert np.linalg.norm(eq.H @ x - eq.c) <= 1e-9


def test_grouped_overlap_allowed():
    p = example1_problem()
    eqs = grouped_column_partition(p, [[1, 2], [2, 3], [3, 4, 5]])
    assert [eq.H.shape[0] for eq in eqs] == [10, 10, 15]


def test_grouped_rejects_bad_groups():
    p = example1_problem()
    with pytest.raises(PartitionError):
        grouped_column_partition(p, [[1, 2], [], [3, 4, 5]])
    with pytest.raises(PartitionError):
        grouped_column_partition(p, [[1, 2], [3, 4]])  # column 5 uncovered
    with pytest.raises(PartitionError):
        grouped_column_partition(p, [[1, 2, 6], [3, 4, 5]])  # out of range


# ----------------------------------------------------------------- high-res


def test_high_res_scalar():
    p = SylvesterProblem(A=[[2.0]], B=[[3.0]], C=[[5.0]])
    (eq,) = high_res_partition(p)
    assert np.array_equal(eq.H, np.array([[5.0]]))


def test_high_res_identity_example():
    p = SylvesterProblem(A=np.eye(2), B=np.zeros((2, 2)), C=np.arange(1.0, 5.0).reshape(2, 2))
    eqs = high_res_partition(p)
    assert eqs[0].node_id == 1
    assert np.array_equal(eqs[0].H, np.array([[1.0, 0.0, 0.0, 0.0]]))


def test_high_res_stack_is_exact_operator():
    p = example1_problem()
    eqs = high_res_partition(p)
    assert len(eqs) == 25
    H, c = stack_equations(eqs)
    assert np.array_equal(H, vectorized_operator(p))
    assert np.array_equal(c, vec(p.C))


def test_high_res_requires_square():
    with pytest.raises(DimensionError):
        high_res_partition(random_problem(rng(13), n=2, m=3))


# ------------------------------------------------------------- lyapunov-sym


def test_lyapunov_scalar():
    (eq,) = lyapunov_sym_partition(np.array([[3.0]]), np.array([[4.0]]))
    assert np.array_equal(eq.H, np.array([[6.0], [6.0]]))
    assert np.array_equal(eq.c, np.array([4.0, 4.0]))


def test_lyapunov_node_ids_n2():
    A = np.array([[-2.0, 1.0], [0.0, -3.0]])
    eqs = lyapunov_sym_partition(A, -np.eye(2))
    assert [eq.node_id for eq in eqs] == [1, 2, 3]  # pairs (1,1), (1,2), (2,2)


def _row_matches(row, ci, H_full, c_full):
    for ref_row, ref_c in zip(H_full, c_full):
        if np.linalg.norm(row - ref_row) <= 1e-12 and abs(ci - ref_c) <= 1e-12:
            return True
    return False


def test_lyapunov_rows_come_from_full_operator():
    A = np.array([[-2.0, 1.0, 0.0], [0.5, -3.0, 1.0], [0.0, 0.25, -1.5]])
    C = -(np.eye(3) + 0.1 * np.ones((3, 3)))
    p = SylvesterProblem(A=A, B=A.T, C=C)
    H_full = vectorized_operator(p)
    c_full = vec(p.C)
    eqs = lyapunov_sym_partition(A, C)
    assert len(eqs) == 3 * 4 // 2  # n(n+1)/2 nodes
    total_rows = 0
    for eq in eqs:
        total_rows += eq.H.shape[0]
        for row, ci in zip(eq.H, eq.c):
            assert _row_matches(row, ci, H_full, c_full)
    assert total_rows == 12  # two rows per node, duplicates kept on the diagonal
    # coverage: every scalar equation of the full system is carried by a node
    all_rows = np.vstack([eq.H for eq in eqs])
    all_c = np.concatenate([eq.c for eq in eqs])
    for ref_row, ref_c in zip(H_full, c_full):
        assert _row_matches(ref_row, ref_c, all_rows, all_c)


def test_lyapunov_solution_in_every_node_set():
    A = np.array([[-2.0, 1.0, 0.0], [0.5, -3.0, 1.0], [0.0, 0.25, -1.5]])
    C = -(np.eye(3) + 0.1 * np.ones((3, 3)))
    x = vec_solution(SylvesterProblem(A=A, B=A.T, C=C))
    for eq in lyapunov_sym_partition(A, C):
        assert np.linalg.norm(eq.H @ x - eq.c) <= 1e-9


def test_lyapunov_rejects_asymmetric_target():
    with pytest.raises(ContractViolationError):
        lyapunov_sym_partition(np.eye(2), np.array([[0.0, 1.0], [0.0, 0.0]]))


# ----------------------------------------------------------- full row/column


def test_full_rowcol_scalar():
    p = SylvesterProblem(A=[[2.0]], B=[[3.0]], C=[[4.0]])
    (eq,) = full_rowcol_partition(p, NetworkGraph(1))
    assert np.array_equal(eq.H, np.array([[5.0, 0.0]]))
    assert np.array_equal(eq.c, np.array([4.0]))


def test_full_rowcol_dimensions():
    p = example4_problem()
    eqs = full_rowcol_partition(p, make_path(3))
    assert len(eqs) == 3
    d = 6 * 6 * (1 + 3)
    for eq in eqs:
        assert eq.H.shape == (36, d)


def test_full_rowcol_sum_cancels_slack():
    # Summing node residuals must reproduce AX + XB - C for ANY slack z.
    r = rng(14)
    p = random_problem(r, n=4, m=4)
    eqs = full_rowcol_partition(p, make_path(2))
    y = r.uniform(-2, 2, eqs[0].H.shape[1])
    total = sum(eq.H @ y - eq.c for eq in eqs)
    X = unvec(y[:16], 4, 4)
    assert np.linalg.norm(total - vec(p.A @ X + X @ p.B - p.C)) <= 1e-12


def test_full_rowcol_stacked_solution_recovers_x():
    p = example4_problem()
    eqs = full_rowcol_partition(p, make_path(3))
    H, c = stack_equations(eqs)
    y = np.linalg.lstsq(H, c, rcond=None)[0]
    assert np.linalg.norm(H @ y - c) <= 1e-8 * (1 + np.linalg.norm(c))
    assert np.linalg.norm(y[: 6 * 6] - vec_solution(p)) <= 1e-8


def test_full_rowcol_rejects_bad_sizes():
    p = random_problem(rng(15), n=5, m=5)
    with pytest.raises(DimensionError):
        full_rowcol_partition(p, make_path(2))  # 2 does not divide 5
    with pytest.raises(DimensionError):
        full_rowcol_partition(random_problem(rng(16), n=2, m=3), make_path(2))


# --------------------------------------------------------------- clustering


def test_clustering_scalar():
    p = SylvesterProblem(A=[[2.0]], B=[[3.0]], C=[[4.0]])
    (op,) = clustering_partition(p)
    assert np.array_equal(op.M, np.array([[5.0]]))
    assert np.array_equal(op.c_tilde, np.array([4.0]))


def test_clustering_zero_A_is_diagonal():
    r = rng(17)
    B = r.uniform(-2, 2, (3, 3))
    p = SylvesterProblem(A=np.zeros((3, 3)), B=B, C=np.zeros((3, 3)))
    for i, op in enumerate(clustering_partition(p)):
        expected = np.kron(np.diag(B[:, i]), np.eye(3))
        assert np.array_equal(op.M, expected)


def test_clustering_block_sums_recover_columns():
    # structural identity at an arbitrary column-stacked X ...
    p = example1_problem()
    x_rand = rng(20).uniform(-2, 2, 25)
    X_rand = unvec(x_rand, 5, 5)
    ops = clustering_partition(p)
    for i, op in enumerate(ops):
        col_sum = (op.M @ x_rand - op.c_tilde).reshape(5, 5).sum(axis=0)
        expected = p.A @ X_rand[:, i] + (X_rand @ p.B)[:, i] - p.C[:, i]
        assert np.linalg.norm(col_sum - expected) <= 1e-12
    # ... and the sums vanish at a solution
    x_star = vec_solution(p)
    for op in ops:
        col_sum = (op.M @ x_star - op.c_tilde).reshape(5, 5).sum(axis=0)
        assert np.linalg.norm(col_sum) <= 1e-10


def test_clustering_requires_square():
    with pytest.raises(DimensionError):
        clustering_partition(random_problem(rng(18), n=2, m=3))


# --------------------------------------------------------------- solvability


def test_consistency_scalar_cases():
    assert consistency_check(SylvesterProblem(A=[[1.0]], B=[[1.0]], C=[[2.0]])).case is Case.I
    assert consistency_check(SylvesterProblem(A=[[1.0]], B=[[-1.0]], C=[[0.0]])).case is Case.II
    res = consistency_check(SylvesterProblem(A=[[1.0]], B=[[-1.0]], C=[[1.0]]))
    assert res.case is Case.III
    assert res.residual == pytest.approx(1.0, abs=1e-12)


def test_consistency_random_cases():
    r = rng(19)
    assert consistency_check(random_problem(r)).case is Case.I
    assert consistency_check(case2_problem(r)).case is Case.II
    assert consistency_check(case3_problem(r)).case is Case.III


def test_stack_equations_orders_by_node_id():
    p = example1_problem()
    eqs = bc_column_partition(p)
    H_ref, c_ref = stack_equations(eqs)
    H_rev, c_rev = stack_equations(list(reversed(eqs)))
    assert np.array_equal(H_ref, H_rev)
    assert np.array_equal(c_ref, c_rev)
    with pytest.raises(PartitionError):
        stack_equations([])
