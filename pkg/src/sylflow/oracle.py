"""Ground-truth references computed independently of any flow.

Direct min-norm solve of the vectorized equation, the projected-average limit
of the consensus flow, the least-squares reference for inconsistent data, and
a positive-definiteness certificate for stability checks. These are the
quantities trajectories are measured against, so none of them integrates
anything: everything here is one pseudoinverse away from the data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .densela import as_matrix, pinv, sym_eig_desc, unvec, vec
from .errors import DimensionError, UnsolvableError
from .partition import (
    CONSISTENCY_RTOL,
    Case,
    SylvesterProblem,
    consistency_check,
    stack_equations,
    vectorized_operator,
)

__all__ = [
    "OracleSolution",
    "direct_solve",
    "flow_limit",
    "least_squares_reference",
    "positive_definite_check",
]


@dataclass(frozen=True)
class OracleSolution:
    """Min-norm solve result: X_star, solvability case, residual, min-norm flag."""

    X_star: np.ndarray
    case: Case
    residual: float
    is_min_norm: bool


def direct_solve(p: SylvesterProblem) -> OracleSolution:
    """Min-norm (least-squares) solution X* = unvec(H^+ c) of AX + XB = C.

    In the no-solution case this is the least-squares minimizer, reported
    with its (nonzero) residual.
    """
    H = vectorized_operator(p)
    c = vec(p.C)
    x = pinv(H) @ c
    case = consistency_check(p).case
    residual = float(np.linalg.norm(H @ x - c))
    return OracleSolution(
        X_star=unvec(x, p.n, p.m), case=case, residual=residual, is_min_norm=True
    )


def flow_limit(eqs: list, initial_node_states) -> np.ndarray:
    """The consensus-flow limit (1/N) sum_i P(x_i(0)).

    P projects onto the intersection of the node constraint sets, built from
    the stacked (H, c) as P(x) = (I - H^+H) x + H^+ c. Requires consistent
    equations; inconsistent stacks raise UnsolvableError.
    """
    H, c = stack_equations(eqs)
    X0 = np.asarray(initial_node_states, dtype=float)
    if X0.ndim != 2 or X0.shape != (len(eqs), H.shape[1]):
        raise DimensionError(
            f"initial states must be ({len(eqs)}, {H.shape[1]}), got {X0.shape}"
        )
    Hp = pinv(H)
    offset = Hp @ c
    if np.linalg.norm(H @ offset - c) > CONSISTENCY_RTOL * (1.0 + np.linalg.norm(c)):
        raise UnsolvableError(
            "the stacked node equations are inconsistent; the projected-average "
            "limit only exists for solvable systems"
        )
    P_lin = np.eye(H.shape[1]) - Hp @ H
    projected = X0 @ P_lin.T + offset[np.newaxis, :]
    return projected.mean(axis=0)


def least_squares_reference(p: SylvesterProblem) -> np.ndarray:
    """Min-norm least-squares point H^+ c of the full vectorized system."""
    H = vectorized_operator(p)
    return pinv(H) @ vec(p.C)


def positive_definite_check(M, tol_scale: float = 1e-9) -> bool:
    """True iff the symmetrized matrix (M + M.T)/2 is positive definite.

    The smallest eigenvalue must exceed tol_scale * (1 + ||M||_F), so a
    barely-PSD matrix does not certify.
    """
    M = as_matrix(M, "M")
    S = 0.5 * (M + M.T)
    smallest = float(sym_eig_desc(S)[-1])
    return smallest > tol_scale * (1.0 + float(np.linalg.norm(M)))
