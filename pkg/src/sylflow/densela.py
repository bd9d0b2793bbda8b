"""Dense real linear-algebra kernel.

Kronecker products, column-major vectorization, Moore-Penrose pseudoinverse,
descending symmetric eigensolver, numerical rank, standard basis vectors, and
the symmetrizer permutation P with P @ vec(M) = vec(M.T).

All functions are pure: they validate their inputs, never mutate them, and
return freshly allocated arrays, so values are safe to share across threads.
Conventions used throughout the package:

* vectorization is column-major (vec stacks columns top to bottom);
* eigenvalues are reported in descending order, lambda_1 >= ... >= lambda_n;
* "numerically zero" singular values are relative to the largest one.
"""

from __future__ import annotations

import numpy as np

from .errors import ContractViolationError, DimensionError

__all__ = [
    "kron",
    "vec",
    "unvec",
    "pinv",
    "sym_eig_desc",
    "numerical_rank",
    "symmetrizer_permutation",
    "standard_basis",
    "as_matrix",
    "as_vector",
]

#: Relative singular-value cutoff for the pseudoinverse: sigma is treated as
#: zero when sigma <= PINV_RTOL * sigma_max * max(m, n).
PINV_RTOL = 1e-12

#: Default relative threshold for numerical_rank. Tight enough that the
#: integer-valued rank identities used by the rate reports are stable for
#: exactly-constructed inputs.
RANK_RTOL = 1e-10


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and return ``a`` as a 2-D float array with finite entries."""
    M = np.asarray(a, dtype=float)
    if M.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got ndim={M.ndim}")
    if M.size == 0:
        raise DimensionError(f"{name} must have positive dimensions, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ContractViolationError(f"{name} has non-finite entries")
    return M


def as_vector(a, name: str = "vector") -> np.ndarray:
    """Validate and return ``a`` as a 1-D float array with finite entries."""
    v = np.asarray(a, dtype=float)
    if v.ndim != 1:
        raise DimensionError(f"{name} must be 1-D, got ndim={v.ndim}")
    if v.size == 0:
        raise DimensionError(f"{name} must have positive length")
    if not np.all(np.isfinite(v)):
        raise ContractViolationError(f"{name} has non-finite entries")
    return v


def kron(A, B) -> np.ndarray:
    """Kronecker product: block (i, j) of the result is A[i, j] * B."""
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    return np.kron(A, B)


def vec(M) -> np.ndarray:
    """Stack the columns of M top to bottom into one vector (column-major)."""
    M = as_matrix(M, "M")
    return M.flatten(order="F")


def unvec(v, m: int, n: int) -> np.ndarray:
    """Inverse of :func:`vec`: reshape a length-(m*n) vector to m x n.

    Raises :class:`DimensionError` if the length does not match.
    """
    v = as_vector(v, "v")
    if v.shape[0] != m * n:
        raise DimensionError(f"cannot unvec length-{v.shape[0]} vector into {m}x{n}")
    return v.reshape((m, n), order="F")


def pinv(M) -> np.ndarray:
    """Moore-Penrose pseudoinverse via SVD.

    Singular values sigma <= PINV_RTOL * sigma_max * max(m, n) are treated as
    zero (so the zero matrix maps to the zero matrix of transposed shape).
    The result satisfies the four Penrose identities to working precision.
    """
    M = as_matrix(M, "M")
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((M.shape[1], M.shape[0]))
    cutoff = PINV_RTOL * s[0] * max(M.shape)
    inv = np.where(s > cutoff, 1.0 / np.where(s > cutoff, s, 1.0), 0.0)
    return (Vt.T * inv) @ U.T


def sym_eig_desc(S, sym_tol: float = 1e-9) -> np.ndarray:
    """Eigenvalues of a symmetric matrix, sorted descending.

    Precondition: ``norm(S - S.T, 'fro') <= sym_tol * (1 + norm(S, 'fro'))``;
    anything less symmetric raises :class:`ContractViolationError`. The input
    is symmetrized before the solve so the tolerance only gates, never leaks
    asymmetry into the result.
    """
    S = as_matrix(S, "S")
    if S.shape[0] != S.shape[1]:
        raise DimensionError(f"S must be square, got shape {S.shape}")
    asym = np.linalg.norm(S - S.T)
    if asym > sym_tol * (1.0 + np.linalg.norm(S)):
        raise ContractViolationError(
            f"matrix is not symmetric: ||S - S.T||_F = {asym:.3e} exceeds tolerance"
        )
    w = np.linalg.eigvalsh(0.5 * (S + S.T))
    return w[::-1].copy()


def numerical_rank(M, rel_tol: float = RANK_RTOL) -> int:
    """Count singular values above ``rel_tol * sigma_max``.

    The zero matrix has rank 0. ``rel_tol`` must be positive.
    """
    if rel_tol <= 0.0:
        raise ContractViolationError(f"rel_tol must be positive, got {rel_tol}")
    M = as_matrix(M, "M")
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rel_tol * s[0]))


def symmetrizer_permutation(n: int) -> np.ndarray:
    """Permutation P of size n^2 with P @ vec(M) = vec(M.T) for n x n M.

    P is symmetric, orthogonal, and an involution (P @ P = I). Entry
    ((k-1)n + l, (l-1)n + k) is 1 for k, l = 1..n.
    """
    if n < 1:
        raise DimensionError(f"n must be >= 1, got {n}")
    P = np.zeros((n * n, n * n))
    for k in range(n):
        for l in range(n):
            P[k * n + l, l * n + k] = 1.0
    return P


def standard_basis(n: int, i: int) -> np.ndarray:
    """The i-th standard basis vector e_i of length n (1-based index)."""
    if n < 1:
        raise DimensionError(f"n must be >= 1, got {n}")
    if not 1 <= i <= n:
        raise DimensionError(f"index i={i} out of range 1..{n}")
    e = np.zeros(n)
    e[i - 1] = 1.0
    return e
