"""Shared builders for the test suite: seeded random problems in each
solvability case, and a synthetic-trajectory constructor for rate fitting."""

from __future__ import annotations

import numpy as np

from sylflow import (
    Case,
    FlowState,
    SylvesterProblem,
    Trajectory,
    consistency_check,
    pinv,
    vec,
    unvec,
    vectorized_operator,
)


def rng(seed: int = 0) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_problem(r: np.random.Generator, n: int = 3, m: int = 3, scale: float = 2.0):
    """Generic dense problem; generically this has a unique solution."""
    A = r.uniform(-scale, scale, (n, n))
    B = r.uniform(-scale, scale, (m, m))
    C = r.uniform(-scale, scale, (n, m))
    return SylvesterProblem(A=A, B=B, C=C)


def singular_pair(r: np.random.Generator, n: int = 3):
    """(A, B) whose vectorized operator is singular: B carries eigenvalue
    -lambda for a real eigenvalue lambda of A."""
    while True:
        A = r.uniform(-2.0, 2.0, (n, n))
        ev = np.linalg.eigvals(A)
        real = ev[np.abs(ev.imag) < 1e-12].real
        if real.size == 0:
            continue
        lam = float(real[0])
        diag = np.concatenate(([-lam], r.uniform(-2.0, 2.0, n - 1)))
        S = r.uniform(-1.0, 1.0, (n, n))
        if abs(np.linalg.det(S)) < 1e-2:
            continue
        B = S @ np.diag(diag) @ np.linalg.inv(S)
        return A, B


def case2_problem(r: np.random.Generator, n: int = 3) -> SylvesterProblem:
    """Consistent problem with a singular operator (infinitely many solutions)."""
    while True:
        A, B = singular_pair(r, n)
        X0 = r.uniform(-2.0, 2.0, (n, n))
        p = SylvesterProblem(A=A, B=B, C=A @ X0 + X0 @ B)
        if consistency_check(p).case is Case.II:
            return p


def case3_problem(r: np.random.Generator, n: int = 3) -> SylvesterProblem:
    """Inconsistent problem: the data has a unit-norm component outside the
    operator's range, so no exact solution exists."""
    while True:
        A, B = singular_pair(r, n)
        H = vectorized_operator(SylvesterProblem(A=A, B=B, C=np.zeros((n, n))))
        perp = np.eye(n * n) - H @ pinv(H)
        w = perp @ r.uniform(-1.0, 1.0, n * n)
        if np.linalg.norm(w) < 1e-6:
            continue
        w /= np.linalg.norm(w)
        c = H @ r.uniform(-2.0, 2.0, n * n) + w
        p = SylvesterProblem(A=A, B=B, C=unvec(c, n, n))
        if consistency_check(p).case is Case.III:
            return p


def synthetic_trajectory(times, e_total) -> Trajectory:
    """Single-node trajectory with a prescribed total-error curve."""
    times = np.asarray(times, dtype=float)
    e_total = np.asarray(e_total, dtype=float)
    final = FlowState(t=float(times[-1]), node_states=np.zeros((1, 1)))
    return Trajectory(
        times=times,
        e_node=e_total[:, None].copy(),
        e_total=e_total,
        consensus=np.zeros_like(e_total),
        final_state=final,
        meta={},
    )


def penrose_residuals(M: np.ndarray, P: np.ndarray) -> list:
    """Frobenius norms of the four Moore-Penrose defining identities."""
    return [
        float(np.linalg.norm(M @ P @ M - M)),
        float(np.linalg.norm(P @ M @ P - P)),
        float(np.linalg.norm((M @ P).T - M @ P)),
        float(np.linalg.norm((P @ M).T - P @ M)),
    ]


def solution_residual(p: SylvesterProblem, X: np.ndarray) -> float:
    return float(np.linalg.norm(p.A @ X + X @ p.B - p.C))


def vec_solution(p: SylvesterProblem) -> np.ndarray:
    """Min-norm vectorized solution H^+ c (reference for node-equation checks)."""
    H = vectorized_operator(p)
    return pinv(H) @ vec(p.C)
