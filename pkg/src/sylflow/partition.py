"""Data partitions: from one matrix equation to per-node affine equations.

The equation AX + XB = C (A is n x n, B is m x m, C and the unknown X are
n x m) vectorizes to H x = c with H = kron(I_m, A) + kron(B.T, I_n) and
x = vec(X), c = vec(C). Each partition scheme splits the data so that node i
knows only a slice (H_i, c_i), defining the affine set E_i = {y : H_i y = c_i}
whose intersection is the full solution set. Schemes:

* ``bc_column_partition``  - node i owns column i of B and C (m nodes).
* ``ac_row_partition``     - node i owns row i of A and C (n nodes); built as
  the column scheme of the transposed equation B.T W + W A.T = C.T, so
  solutions of the two are transposes of each other.
* ``grouped_column_partition`` - columns bundled into (possibly overlapping)
  groups, one node per group.
* ``high_res_partition``   - one node per scalar entry (k, l): n^2 single-row
  equations (square case).
* ``lyapunov_sym_partition`` - for AX + XA.T = C with symmetric C: one node
  per unordered index pair {k, l}, stacking the two mirror rows (n(n+1)/2
  nodes, always two rows each).
* ``full_rowcol_partition`` - node i owns a block of rows of A and columns of
  B and C; the per-node equation is augmented with a shared slack matrix Z
  whose graph-Laplacian coupling lets the nodes' partial equations sum to the
  full one.
* ``clustering_partition`` - per-cluster block operators M_i, C-tilde_i for
  the two-layer (cluster) flow, where inner node i_j tracks column j of X.

``consistency_check`` classifies solvability: Case I (unique solution),
Case II (infinitely many), Case III (none).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .densela import as_matrix, kron, numerical_rank, pinv, standard_basis, vec
from .errors import ContractViolationError, DimensionError, PartitionError
from .netgraph import NetworkGraph, laplacian

__all__ = [
    "SylvesterProblem",
    "NodeEquation",
    "ClusterOperators",
    "Case",
    "ConsistencyResult",
    "vectorized_operator",
    "bc_column_partition",
    "ac_row_partition",
    "grouped_column_partition",
    "high_res_partition",
    "lyapunov_sym_partition",
    "full_rowcol_partition",
    "clustering_partition",
    "consistency_check",
    "stack_equations",
]

#: Relative residual threshold separating "consistent" from "no solution".
CONSISTENCY_RTOL = 1e-8


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class SylvesterProblem:
    """Data (A, B, C) of the equation AX + XB = C with X unknown n x m."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        A = as_matrix(self.A, "A")
        B = as_matrix(self.B, "B")
        C = as_matrix(self.C, "C")
        if A.shape[0] != A.shape[1]:
            raise DimensionError(f"A must be square, got {A.shape}")
        if B.shape[0] != B.shape[1]:
            raise DimensionError(f"B must be square, got {B.shape}")
        if C.shape != (A.shape[0], B.shape[0]):
            raise DimensionError(
                f"C must be {A.shape[0]}x{B.shape[0]} to conform with A and B, "
                f"got {C.shape}"
            )
        object.__setattr__(self, "A", _frozen(A))
        object.__setattr__(self, "B", _frozen(B))
        object.__setattr__(self, "C", _frozen(C))

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[0]

    @property
    def is_square(self) -> bool:
        return self.n == self.m


@dataclass(frozen=True)
class NodeEquation:
    """One node's slice H y = c of the vectorized equation (E_i = {y: H y = c})."""

    node_id: int
    H: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        H = as_matrix(self.H, f"H (node {self.node_id})")
        c = np.asarray(self.c, dtype=float)
        if c.ndim != 1 or c.shape[0] != H.shape[0]:
            raise DimensionError(
                f"node {self.node_id}: c has shape {c.shape}, "
                f"expected ({H.shape[0]},) to match H"
            )
        object.__setattr__(self, "H", _frozen(H))
        object.__setattr__(self, "c", _frozen(c))

    @property
    def unknown_dim(self) -> int:
        return self.H.shape[1]


@dataclass(frozen=True)
class ClusterOperators:
    """Cluster i's block operator M_i (block-diagonal) and stacked target C-tilde_i."""

    cluster_id: int
    M: np.ndarray
    c_tilde: np.ndarray

    def __post_init__(self):
        M = as_matrix(self.M, f"M (cluster {self.cluster_id})")
        c = np.asarray(self.c_tilde, dtype=float)
        if M.shape[0] != M.shape[1]:
            raise DimensionError(f"cluster {self.cluster_id}: M must be square")
        if c.shape != (M.shape[0],):
            raise DimensionError(
                f"cluster {self.cluster_id}: c_tilde shape {c.shape} does not match M"
            )
        object.__setattr__(self, "M", _frozen(M))
        object.__setattr__(self, "c_tilde", _frozen(c))


class Case(enum.Enum):
    """Solvability of AX + XB = C: unique / infinitely many / no solution."""

    I = "unique"
    II = "infinite"
    III = "none"


class ConsistencyResult(NamedTuple):
    case: Case
    residual: float


def vectorized_operator(p: SylvesterProblem) -> np.ndarray:
    """The full operator H = kron(I_m, A) + kron(B.T, I_n) of size nm x nm."""
    return kron(np.eye(p.m), p.A) + kron(p.B.T, np.eye(p.n))


def bc_column_partition(p: SylvesterProblem) -> list[NodeEquation]:
    """One node per column of B and C (m nodes, n rows each, d = n*m).

    Node i's operator is the i-th block row of kron(I_m, A) plus
    kron(B[:, i].T, I_n); its right side is column i of C. Stacking all nodes
    in order reproduces the full vectorized operator exactly.
    """
    n, m = p.n, p.m
    eqs = []
    eye_n = np.eye(n)
    for i in range(m):
        H = np.zeros((n, n * m))
        H[:, i * n : (i + 1) * n] = p.A
        H += kron(p.B[:, i][np.newaxis, :], eye_n)
        eqs.append(NodeEquation(node_id=i + 1, H=H, c=p.C[:, i]))
    return eqs


def ac_row_partition(p: SylvesterProblem) -> list[NodeEquation]:
    """One node per row of A and C (n nodes): the column scheme of the
    transposed equation B.T W + W A.T = C.T, whose solutions are X.T."""
    pt = SylvesterProblem(A=p.B.T, B=p.A.T, C=p.C.T)
    return bc_column_partition(pt)


def grouped_column_partition(p: SylvesterProblem, groups) -> list[NodeEquation]:
    """Bundle columns into groups (1-based indices), one node per group.

    Groups may overlap; rows are stacked in the order given inside each group
    and never de-duplicated (redundant rows do not change the affine set).
    Every column must appear in at least one group and no group may be empty.
    """
    base = bc_column_partition(p)
    m = p.m
    covered = set()
    eqs = []
    for gi, group in enumerate(groups, start=1):
        idx = [int(k) for k in group]
        if not idx:
            raise PartitionError(f"group {gi} is empty")
        for k in idx:
            if not 1 <= k <= m:
                raise PartitionError(f"group {gi}: column {k} out of range 1..{m}")
        covered.update(idx)
        H = np.vstack([base[k - 1].H for k in idx])
        c = np.concatenate([base[k - 1].c for k in idx])
        eqs.append(NodeEquation(node_id=gi, H=H, c=c))
    missing = sorted(set(range(1, m + 1)) - covered)
    if missing:
        raise PartitionError(f"columns not covered by any group: {missing}")
    return eqs


def high_res_partition(p: SylvesterProblem) -> list[NodeEquation]:
    """One node per scalar entry (k, l) of the equation (square case).

    Node (k, l) -- numbered i = (k-1)n + l -- holds the single row
    kron(e_k.T, A[l, :]) + e_l.T @ kron(B[:, k].T, I_n) and the scalar
    C[l, k]; this is exactly row i of the full vectorized operator, so the
    stack over all n^2 nodes reproduces it row for row.
    """
    if not p.is_square:
        raise DimensionError("high-resolution partition requires a square problem (n = m)")
    n = p.n
    eqs = []
    for k in range(1, n + 1):
        ek = standard_basis(n, k)
        for l in range(1, n + 1):
            el = standard_basis(n, l)
            h = kron(ek[np.newaxis, :], p.A[l - 1, :][np.newaxis, :]) + el[np.newaxis, :] @ kron(
                p.B[:, k - 1][np.newaxis, :], np.eye(n)
            )
            i = (k - 1) * n + l
            eqs.append(NodeEquation(node_id=i, H=h, c=np.array([p.C[l - 1, k - 1]])))
    return eqs


def _pair_index(k: int, l: int, n: int) -> int:
    """Node number of the unordered pair {k, l}, k <= l: (k-1)n + l - k(k-1)/2."""
    return (k - 1) * n + l - k * (k - 1) // 2


def lyapunov_sym_partition(A, C, sym_tol: float = 1e-9) -> list[NodeEquation]:
    """Pair partition for AX + XA.T = C with symmetric C.

    One node per unordered index pair {k, l} (k <= l), numbered
    g(k, l) = (k-1)n + l - k(k-1)/2. The node stacks the two mirror rows
    (k, l) and (l, k) of the entrywise split of the equation with B = A.T and
    the targets (C[l-1, k-1], C[k-1, l-1]); diagonal nodes keep the duplicated
    row pair so every node is uniformly 2 x n^2. Asymmetric C is rejected.
    """
    A = as_matrix(A, "A")
    C = as_matrix(C, "C")
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"A must be square, got {A.shape}")
    if C.shape != A.shape:
        raise DimensionError(f"C must match A's shape {A.shape}, got {C.shape}")
    if np.linalg.norm(C - C.T) > sym_tol * (1.0 + np.linalg.norm(C)):
        raise ContractViolationError("C must be symmetric for the pair partition")
    p = SylvesterProblem(A=A, B=A.T, C=C)
    rows = high_res_partition(p)  # row i = entry (k, l) with i = (k-1)n + l
    n = A.shape[0]
    eqs = []
    for k in range(1, n + 1):
        for l in range(k, n + 1):
            r_kl = rows[(k - 1) * n + l - 1]
            r_lk = rows[(l - 1) * n + k - 1]
            H = np.vstack([r_kl.H, r_lk.H])
            c = np.concatenate([r_kl.c, r_lk.c])
            eqs.append(NodeEquation(node_id=_pair_index(k, l, n), H=H, c=c))
    return eqs


def full_rowcol_partition(p: SylvesterProblem, g: NetworkGraph) -> list[NodeEquation]:
    """Row/column split with an auxiliary coupling matrix Z (square case).

    The graph's node count N must divide n. Node i owns the i-th block of
    n/N rows of A and columns of B and C. Its matrix equation

        E_i A_i X + X B_i E_i.T - (row_i(L_G) kron I_n) Z = C_i E_i.T

    (E_i = i-th block column of I_n, Z an (N n) x n slack stacked over nodes)
    vectorizes to a single-node operator on y = col{vec X, vec Z} of size
    d = n^2 (1 + N). Summing the N matrix equations cancels the Z terms
    (Laplacian rows sum to zero) and recovers AX + XB = C, so the stacked
    system is solvable exactly when the original equation is.
    """
    if not p.is_square:
        raise DimensionError("full row/column partition requires a square problem (n = m)")
    n = p.n
    N = g.node_count
    if n % N != 0:
        raise DimensionError(
            f"graph size {N} must divide the matrix dimension {n} "
            "(each node owns an equal block of rows/columns)"
        )
    w = n // N
    L = laplacian(g)
    eye_n = np.eye(n)
    d_x = n * n
    d_z = N * n * n
    eqs = []
    for i in range(N):
        E_i = eye_n[:, i * w : (i + 1) * w]  # n x w block column of I_n
        A_i = p.A[i * w : (i + 1) * w, :]  # node's rows of A (w x n)
        B_i = p.B[:, i * w : (i + 1) * w]  # node's columns of B (n x w)
        C_i = p.C[:, i * w : (i + 1) * w]  # node's columns of C (n x w)
        Hx = kron(eye_n, E_i @ A_i) + kron(E_i @ B_i.T, eye_n)
        Hz = -kron(eye_n, kron(L[i, :][np.newaxis, :], eye_n))
        H = np.zeros((d_x, d_x + d_z))
        H[:, :d_x] = Hx
        H[:, d_x:] = Hz
        eqs.append(NodeEquation(node_id=i + 1, H=H, c=vec(C_i @ E_i.T)))
    return eqs


def clustering_partition(p: SylvesterProblem) -> list[ClusterOperators]:
    """Per-cluster block operators for the two-layer flow (square case).

    Cluster i's operator is M_i = blockdiag_j{1_{j=i} A + B[j-1, i-1] I_n}
    (inner node i_j tracks column j of X) with stacked target
    C-tilde_i = col{C[0, i-1] e_1, ..., C[n-1, i-1] e_n}; the cluster's
    constraint is that the n blocks of M_i x_i - C-tilde_i sum to zero,
    which is column i of AX + XB = C when x_i column-stacks X.
    """
    if not p.is_square:
        raise DimensionError("clustering partition requires a square problem (n = m)")
    n = p.n
    ops = []
    for i in range(n):
        M = np.zeros((n * n, n * n))
        c = np.zeros(n * n)
        for j in range(n):
            blk = p.B[j, i] * np.eye(n)
            if j == i:
                blk = blk + p.A
            M[j * n : (j + 1) * n, j * n : (j + 1) * n] = blk
            c[j * n + j] = p.C[j, i]
        ops.append(ClusterOperators(cluster_id=i + 1, M=M, c_tilde=c))
    return ops


def consistency_check(p: SylvesterProblem) -> ConsistencyResult:
    """Classify solvability and report the min-norm least-squares residual.

    Case I iff the vectorized operator has full rank n*m; otherwise Case II
    when the min-norm residual ||H H^+ c - c|| is below the relative
    consistency threshold, else Case III.
    """
    H = vectorized_operator(p)
    c = vec(p.C)
    residual = float(np.linalg.norm(H @ (pinv(H) @ c) - c))
    if numerical_rank(H) == p.n * p.m:
        return ConsistencyResult(Case.I, residual)
    if residual <= CONSISTENCY_RTOL * (1.0 + float(np.linalg.norm(c))):
        return ConsistencyResult(Case.II, residual)
    return ConsistencyResult(Case.III, residual)


def stack_equations(eqs: list[NodeEquation]) -> tuple[np.ndarray, np.ndarray]:
    """Stack node equations (in node order) into one (H, c) system."""
    if not eqs:
        raise PartitionError("no node equations to stack")
    order = sorted(eqs, key=lambda e: e.node_id)
    H = np.vstack([e.H for e in order])
    c = np.concatenate([e.c for e in order])
    return H, c
