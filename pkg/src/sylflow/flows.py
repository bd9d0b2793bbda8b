"""Network flows over node states and a deterministic fixed-step integrator.

Every flow in the package is affine, u-dot = -F u + q with constant (F, q):

* consensus + projection ("cp"): each node mixes neighbor states through the
  graph Laplacian and projects onto its local affine constraint set;
* consensus + projection + symmetrization ("cps"): adds a contraction onto
  the symmetric-matrix subspace, for equations with symmetric solutions;
* least-squares ("ls"): consensus plus the per-node residual descent
  -H_i^+ (H_i x_i - c_i); pointwise identical to "cp" on consistent node
  equations, but meaningful on inconsistent data as well;
* augmented ("augmented"): the cp flow run on the row/column-partitioned
  equations with the slack matrix Z appended to every node state;
* clustering ("clustering"): the two-layer local-conservation + global-
  consensus dynamics over cluster block operators with integral states z.

The node-wise right-hand-side functions below are literal transcriptions of
the per-node update laws; the ``*_system`` builders assemble the equivalent
stacked (F, q). Both paths are exercised against each other in the tests.

Integration is classical fixed-step RK4. Because the dynamics are affine,
one RK4 step is the exact affine map u <- R u + s with R the degree-4 Taylor
polynomial of expm(-dt F); ``simulate`` precomputes (R, s) once and hands the
per-step loop to a compiled kernel (NumPy fallback) for speed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import oracle
from .backend import propagate
from .densela import as_matrix, kron, pinv, symmetrizer_permutation, vec
from .errors import (
    ContractViolationError,
    DimensionError,
    FlowDivergenceError,
    UnsolvableError,
)
from .netgraph import DoubleLayerNetwork, NetworkGraph, laplacian
from .partition import (
    CONSISTENCY_RTOL,
    Case,
    ClusterOperators,
    NodeEquation,
    SylvesterProblem,
    bc_column_partition,
    ac_row_partition,
    clustering_partition,
    consistency_check,
    full_rowcol_partition,
    grouped_column_partition,
    high_res_partition,
    lyapunov_sym_partition,
    stack_equations,
)

__all__ = [
    "AffineProjector",
    "FlowState",
    "Trajectory",
    "build_projector",
    "cp_rhs",
    "cps_rhs",
    "ls_rhs",
    "clustering_rhs",
    "consensus_residual",
    "rk4_step",
    "rk4_transition",
    "cp_system",
    "cps_system",
    "ls_system",
    "clustering_system",
    "default_dt",
    "build_node_equations",
    "simulate",
]

#: State-norm guard: integration aborts when max |entry| exceeds this.
DIVERGENCE_GUARD = 1e12

FLOWS = ("cp", "cps", "ls", "augmented", "clustering")
PARTITIONS = (
    "bc-column",
    "ac-row",
    "grouped",
    "high-res",
    "lyapunov-sym",
    "full-row-column",
    "clustering",
)


@dataclass(frozen=True)
class AffineProjector:
    """Orthogonal projection onto an affine set {y : H y = c}.

    ``linear_part`` is I - H^+ H (symmetric idempotent) and ``offset`` is
    H^+ c, so proj(x) = linear_part @ x + offset. For inconsistent (H, c)
    this projects onto the least-squares affine set instead.
    """

    linear_part: np.ndarray
    offset: np.ndarray

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.linear_part @ x + self.offset


def build_projector(eq: NodeEquation) -> AffineProjector:
    """Projector onto E_i = {y : H_i y = c_i}: proj(x) = (I - H^+H) x + H^+ c."""
    Hp = pinv(eq.H)
    d = eq.unknown_dim
    return AffineProjector(linear_part=np.eye(d) - Hp @ eq.H, offset=Hp @ eq.c)


@dataclass
class FlowState:
    """Node states at one time: t, an (N, d) array, optional aux (z) states."""

    t: float
    node_states: np.ndarray
    aux_states: Optional[np.ndarray] = None

    def __post_init__(self):
        self.node_states = np.asarray(self.node_states, dtype=float)
        if self.node_states.ndim != 2:
            raise DimensionError("node_states must be an (N, d) array")
        if self.aux_states is not None:
            self.aux_states = np.asarray(self.aux_states, dtype=float)
            if (
                self.aux_states.ndim != 2
                or self.aux_states.shape[0] != self.node_states.shape[0]
            ):
                raise DimensionError("aux_states must be (N, d_aux) matching node count")

    @property
    def n_nodes(self) -> int:
        return self.node_states.shape[0]


@dataclass
class Trajectory:
    """Sampled run: times, per-node squared errors, total error, consensus residual."""

    times: np.ndarray
    e_node: np.ndarray  # (n_samples, N): ||unvec(x_i) - X_ref||_F^2 per node
    e_total: np.ndarray  # row sums of e_node
    consensus: np.ndarray  # max over node pairs of ||x_i - x_j|| per sample
    final_state: FlowState
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not np.all(np.diff(self.times) > 0):
            raise ContractViolationError("sample times must be strictly increasing")

    @property
    def samples(self) -> list:
        """Rows as (t, per-node errors, total error, consensus residual)."""
        return [
            (float(t), self.e_node[k].copy(), float(self.e_total[k]), float(self.consensus[k]))
            for k, t in enumerate(self.times)
        ]


# ---------------------------------------------------------------------------
# Node-wise right-hand sides (literal per-node update laws)
# ---------------------------------------------------------------------------


def _neighbor_sums(L: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Row i of the result is sum_{j in N_i} (x_j - x_i), via explicit edges."""
    N = X.shape[0]
    if L.shape != (N, N):
        raise DimensionError(f"Laplacian shape {L.shape} does not match {N} nodes")
    out = np.zeros_like(X)
    for i in range(N):
        for j in range(N):
            if i != j and L[i, j] != 0.0:
                out[i] += X[j] - X[i]
    return out


def cp_rhs(s: FlowState, K: float, L: np.ndarray, projs: list) -> np.ndarray:
    """Consensus + projection: x_i' = K sum_{j in N_i}(x_j - x_i) + proj_i(x_i) - x_i."""
    X = s.node_states
    if len(projs) != X.shape[0]:
        raise DimensionError(f"{len(projs)} projectors for {X.shape[0]} nodes")
    out = K * _neighbor_sums(L, X)
    for i, proj in enumerate(projs):
        out[i] += proj(X[i]) - X[i]
    return out


def cps_rhs(
    s: FlowState, K: float, Ks: float, L: np.ndarray, projs: list, P_sym: np.ndarray
) -> np.ndarray:
    """cp plus symmetrization: adds Ks ((x_i + P x_i)/2 - x_i) per node."""
    d = s.node_states.shape[1]
    if P_sym.shape != (d, d):
        raise DimensionError(
            f"symmetrizer shape {P_sym.shape} does not match state dimension {d} "
            "(states must be vectorized square matrices)"
        )
    out = cp_rhs(s, K, L, projs)
    for i in range(s.n_nodes):
        xi = s.node_states[i]
        out[i] += Ks * (0.5 * (xi + P_sym @ xi) - xi)
    return out


def ls_rhs(s: FlowState, K: float, L: np.ndarray, eqs: list) -> np.ndarray:
    """Least-squares: x_i' = K sum_{j in N_i}(x_j - x_i) - H_i^+ (H_i x_i - c_i)."""
    X = s.node_states
    if len(eqs) != X.shape[0]:
        raise DimensionError(f"{len(eqs)} equations for {X.shape[0]} nodes")
    out = K * _neighbor_sums(L, X)
    for i, eq in enumerate(eqs):
        out[i] -= pinv(eq.H) @ (eq.H @ X[i] - eq.c)
    return out


def clustering_rhs(
    s: FlowState,
    K: float,
    L_outer: np.ndarray,
    inner_laplacians: list,
    ops: list,
) -> tuple[np.ndarray, np.ndarray]:
    """Two-layer dynamics over cluster operators, with integral states z.

    x_i' = -M_i.T (M_i x_i - c_i - (L_i kron I_n) z_i) - K sum_{k in N_i}(x_i - x_k)
    z_i' =        M_i x_i - c_i - (L_i kron I_n) z_i
    """
    if s.aux_states is None:
        raise ContractViolationError("clustering flow needs aux (z) states")
    X, Z = s.node_states, s.aux_states
    N = X.shape[0]
    if not (len(ops) == len(inner_laplacians) == N):
        raise DimensionError("cluster operators / inner graphs / states disagree on N")
    n = int(round(np.sqrt(X.shape[1])))
    dx = K * _neighbor_sums(L_outer, X)
    dz = np.empty_like(Z)
    for i, op in enumerate(ops):
        Li = kron(inner_laplacians[i], np.eye(n))
        resid = op.M @ X[i] - op.c_tilde - Li @ Z[i]
        dx[i] -= op.M.T @ resid
        dz[i] = resid
    return dx, dz


def consensus_residual(s: FlowState, block_dim: Optional[int] = None) -> float:
    """Max over node pairs of ||x_i - x_j|| (restricted to the leading
    ``block_dim`` entries when given — the X block of augmented states)."""
    X = s.node_states if block_dim is None else s.node_states[:, :block_dim]
    best = 0.0
    for i in range(X.shape[0]):
        for j in range(i + 1, X.shape[0]):
            best = max(best, float(np.linalg.norm(X[i] - X[j])))
    return best


# ---------------------------------------------------------------------------
# Generic RK4 step (reference integrator for the node-wise forms)
# ---------------------------------------------------------------------------


def rk4_step(rhs: Callable, s: FlowState, dt: float) -> FlowState:
    """One classical Runge-Kutta 4 step of the (possibly aux-carrying) state.

    ``rhs(state)`` returns either an (N, d) array or an (dx, dz) pair
    matching the state layout. Raises on non-finite derivatives.
    """
    if dt <= 0.0:
        raise ContractViolationError(f"dt must be positive, got {dt}")

    def _eval(state: FlowState):
        d = rhs(state)
        dx, dz = d if isinstance(d, tuple) else (d, None)
        dx = np.asarray(dx, dtype=float)
        if not np.all(np.isfinite(dx)) or (
            dz is not None and not np.all(np.isfinite(np.asarray(dz)))
        ):
            raise FlowDivergenceError(
                f"non-finite derivative at t={state.t:g}; the state has left the "
                "stable region — try a smaller dt"
            )
        return dx, (None if dz is None else np.asarray(dz, dtype=float))

    def _shift(base: FlowState, k, h: float) -> FlowState:
        dx, dz = k
        aux = None
        if base.aux_states is not None:
            aux = base.aux_states + h * (0.0 if dz is None else dz)
        return FlowState(t=base.t + h, node_states=base.node_states + h * dx, aux_states=aux)

    k1 = _eval(s)
    k2 = _eval(_shift(s, k1, dt / 2.0))
    k3 = _eval(_shift(s, k2, dt / 2.0))
    k4 = _eval(_shift(s, k3, dt))
    dx = (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]) * (dt / 6.0)
    aux = None
    if s.aux_states is not None:
        parts = [p[1] if p[1] is not None else 0.0 for p in (k1, k2, k3, k4)]
        aux = s.aux_states + (parts[0] + 2.0 * parts[1] + 2.0 * parts[2] + parts[3]) * (dt / 6.0)
    return FlowState(t=s.t + dt, node_states=s.node_states + dx, aux_states=aux)


# ---------------------------------------------------------------------------
# Stacked affine systems u' = -F u + q and the exact one-step RK4 map
# ---------------------------------------------------------------------------


def cp_system(eqs: list, L: np.ndarray, K: float) -> tuple[np.ndarray, np.ndarray]:
    """Stacked form of the cp flow: F = K (L kron I_d) + diag{H_i^+ H_i},
    q = col{H_i^+ c_i}, so that u' = -F u + q over u = col{x_1, ..., x_N}."""
    N = len(eqs)
    d = eqs[0].unknown_dim
    if any(e.unknown_dim != d for e in eqs):
        raise DimensionError("all node equations must share the unknown dimension")
    if L.shape != (N, N):
        raise DimensionError(f"Laplacian shape {L.shape} does not match {N} nodes")
    F = K * kron(L, np.eye(d))
    q = np.zeros(N * d)
    for i, eq in enumerate(eqs):
        proj = build_projector(eq)
        F[i * d : (i + 1) * d, i * d : (i + 1) * d] += np.eye(d) - proj.linear_part
        q[i * d : (i + 1) * d] = proj.offset
    return F, q


def cps_system(
    eqs: list, L: np.ndarray, K: float, Ks: float
) -> tuple[np.ndarray, np.ndarray]:
    """Stacked cps flow: cp plus the block-diagonal term (Ks/2)(I - P) per node."""
    F, q = cp_system(eqs, L, K)
    d = eqs[0].unknown_dim
    n = int(round(np.sqrt(d)))
    if n * n != d:
        raise DimensionError(
            f"symmetrization needs states that are vectorized square matrices; d={d}"
        )
    P = symmetrizer_permutation(n)
    block = 0.5 * Ks * (np.eye(d) - P)
    for i in range(len(eqs)):
        F[i * d : (i + 1) * d, i * d : (i + 1) * d] += block
    return F, q


def ls_system(eqs: list, L: np.ndarray, K: float) -> tuple[np.ndarray, np.ndarray]:
    """Stacked least-squares flow, assembled directly from pseudoinverses:
    F = K (L kron I_d) + diag{H_i^+ H_i}, q = col{H_i^+ c_i}."""
    N = len(eqs)
    d = eqs[0].unknown_dim
    if any(e.unknown_dim != d for e in eqs):
        raise DimensionError("all node equations must share the unknown dimension")
    if L.shape != (N, N):
        raise DimensionError(f"Laplacian shape {L.shape} does not match {N} nodes")
    F = K * kron(L, np.eye(d))
    q = np.zeros(N * d)
    for i, eq in enumerate(eqs):
        Hp = pinv(eq.H)
        F[i * d : (i + 1) * d, i * d : (i + 1) * d] += Hp @ eq.H
        q[i * d : (i + 1) * d] = Hp @ eq.c
    return F, q


def clustering_system(
    ops: list, L_outer: np.ndarray, inner_laplacians: list, K: float
) -> tuple[np.ndarray, np.ndarray]:
    """Stacked two-layer dynamics over u = col{x, z}:

        F = [[Mbar.T Mbar + K (L_G kron I), -Mbar.T Lbar],
             [-Mbar,                          Lbar       ]],
        q = [Mbar.T cbar; -cbar],

    with Mbar = diag{M_i}, Lbar = diag{L_i kron I_n}, cbar = col{c_i}.
    """
    N = len(ops)
    if len(inner_laplacians) != N:
        raise DimensionError("one inner Laplacian per cluster is required")
    if L_outer.shape != (N, N):
        raise DimensionError(f"outer Laplacian shape {L_outer.shape} for {N} clusters")
    dc = ops[0].M.shape[0]  # n^2 per cluster
    n = int(round(np.sqrt(dc)))
    Mbar = np.zeros((N * dc, N * dc))
    Lbar = np.zeros((N * dc, N * dc))
    cbar = np.zeros(N * dc)
    for i, op in enumerate(ops):
        if op.M.shape[0] != dc:
            raise DimensionError("all cluster operators must share dimensions")
        sl = slice(i * dc, (i + 1) * dc)
        Mbar[sl, sl] = op.M
        Lbar[sl, sl] = kron(inner_laplacians[i], np.eye(n))
        cbar[sl] = op.c_tilde
    D = N * dc
    F = np.zeros((2 * D, 2 * D))
    F[:D, :D] = Mbar.T @ Mbar + K * kron(L_outer, np.eye(dc))
    F[:D, D:] = -Mbar.T @ Lbar
    F[D:, :D] = -Mbar
    F[D:, D:] = Lbar
    q = np.concatenate([Mbar.T @ cbar, -cbar])
    return F, q


def rk4_transition(F: np.ndarray, q: np.ndarray, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Exact one-step map of RK4 applied to u' = -F u + q: u <- R u + s.

    R is the degree-4 Taylor polynomial of expm(-dt F); s applies the same
    truncation to the constant forcing.
    """
    F = as_matrix(F, "F")
    if dt <= 0.0:
        raise ContractViolationError(f"dt must be positive, got {dt}")
    D = F.shape[0]
    M = -dt * F
    M2 = M @ M
    M3 = M2 @ M
    M4 = M3 @ M
    eye = np.eye(D)
    R = eye + M + M2 / 2.0 + M3 / 6.0 + M4 / 24.0
    s = dt * (eye + M / 2.0 + M2 / 6.0 + M3 / 24.0) @ q
    return R, s


def default_dt(K: float, Ks: float, L: np.ndarray) -> float:
    """Stability-informed default step for the consensus-type flows.

    Their spectral abscissa is bounded by K lambda_1(L) + 2 + Ks, so
    dt = min(0.01, 0.5 / (K lambda_1(L) + 2 + Ks)) keeps RK4 well inside its
    stability region.
    """
    lam1 = float(np.linalg.eigvalsh(L)[-1])
    return min(0.01, 0.5 / (K * lam1 + 2.0 + (Ks or 0.0)))


def _clustering_default_dt(ops, L_outer: np.ndarray, inner_Ls: list, K: float) -> float:
    """Default step for the clustering dynamics.

    The consensus-flow formula ignores the ||Mbar.T Mbar|| term that dominates
    here, so the bound is assembled from cheap per-block spectral norms
    (including the off-diagonal Mbar / Mbar.T Lbar coupling).
    """
    m_norm = max(float(np.linalg.norm(op.M, 2)) for op in ops)
    l_norm = max(float(np.linalg.eigvalsh(L)[-1]) for L in inner_Ls)
    lam_outer = float(np.linalg.eigvalsh(L_outer)[-1])
    bound = m_norm**2 + K * lam_outer + l_norm + m_norm * (1.0 + l_norm) + 1.0
    return 0.5 / bound


# ---------------------------------------------------------------------------
# High-level simulation
# ---------------------------------------------------------------------------


def build_node_equations(
    problem: SylvesterProblem,
    partition: str,
    graph: NetworkGraph,
    groups=None,
) -> list:
    """Node equations for a named partition scheme, validated against the graph."""
    if partition == "bc-column":
        eqs = bc_column_partition(problem)
    elif partition == "ac-row":
        eqs = ac_row_partition(problem)
    elif partition == "grouped":
        if groups is None:
            raise ContractViolationError("grouped partition needs explicit groups")
        eqs = grouped_column_partition(problem, groups)
    elif partition == "high-res":
        eqs = high_res_partition(problem)
    elif partition == "lyapunov-sym":
        if np.linalg.norm(problem.B - problem.A.T) > 1e-9 * (
            1.0 + np.linalg.norm(problem.A)
        ):
            raise ContractViolationError(
                "the pair partition is for AX + XA.T = C; the problem's B must equal A.T"
            )
        eqs = lyapunov_sym_partition(problem.A, problem.C)
    elif partition == "full-row-column":
        eqs = full_rowcol_partition(problem, graph)
    else:
        raise ContractViolationError(f"unknown partition {partition!r}")
    if len(eqs) != graph.node_count:
        raise DimensionError(
            f"partition {partition!r} yields {len(eqs)} nodes but the graph has "
            f"{graph.node_count}"
        )
    return eqs


def _initial_states(N: int, d: int, init: str, seed, d_aux: int = 0, x_eq=None):
    if init == "zero":
        X = np.zeros((N, d))
    elif init == "random":
        rng = np.random.default_rng(seed)
        X = rng.uniform(-1.0, 1.0, size=(N, d))
    elif init == "equilibrium":
        if x_eq is None:
            raise ContractViolationError(
                "equilibrium init needs a solvable equation under a consensus flow"
            )
        X = np.tile(np.asarray(x_eq, dtype=float), (N, 1))
    else:
        raise ContractViolationError(
            f"unknown init {init!r} (use 'zero', 'random', or 'equilibrium')"
        )
    Z = np.zeros((N, d_aux)) if d_aux else None
    return X, Z


def _sample_steps(t_end: float, dt: float, stride: int) -> tuple[int, np.ndarray]:
    """Integration length and sample indices.

    The run takes S = floor(t_end/dt) full strides' worth of steps plus one
    final step past t_end; samples sit at j*stride for j*stride <= S plus the
    final step, so the row count is floor(S/stride) + 2 and times strictly
    increase.
    """
    if t_end <= 0.0 or dt <= 0.0:
        raise ContractViolationError("t_end and dt must be positive")
    if stride < 1:
        raise ContractViolationError(f"sample_stride must be >= 1, got {stride}")
    S = int(np.floor(t_end / dt + 1e-9))
    n_steps = S + 1
    steps = list(range(0, S + 1, stride))
    steps.append(n_steps)
    return n_steps, np.asarray(steps, dtype=np.int64)


def simulate(
    problem: SylvesterProblem,
    flow: str = "cp",
    *,
    partition: Optional[str] = None,
    groups=None,
    graph: Optional[NetworkGraph] = None,
    network: Optional[DoubleLayerNetwork] = None,
    K: float = 1.0,
    Ks: Optional[float] = None,
    dt: Optional[float] = None,
    t_end: float,
    sample_stride: int = 1,
    init: str = "zero",
    seed: Optional[int] = None,
) -> Trajectory:
    """Integrate the selected flow and return the sampled trajectory.

    ``partition`` defaults to the flow's natural scheme: "clustering" for the
    clustering flow, "full-row-column" for the augmented flow, "bc-column"
    otherwise. The error metric is e(t) = sum_i ||x_i(t) - x_ref||^2 with
    x_ref the min-norm solution (unique-solution case), the projected-average
    limit (consistent singular case), or the least-squares minimizer (ls flow
    on inconsistent data). For the augmented flow the metric and the
    consensus residual read only the X block of each node state. ``init`` is
    "zero", "random" (seeded), or "equilibrium" (consensus flows on solvable
    equations: every node starts at the stacked min-norm solution, so the
    trajectory is stationary). Divergence past the norm guard raises
    FlowDivergenceError suggesting a smaller dt.
    """
    if flow not in FLOWS:
        raise ContractViolationError(f"unknown flow {flow!r} (expected one of {FLOWS})")
    if K <= 0.0:
        raise ContractViolationError(f"K must be positive, got {K}")
    if partition is None:
        partition = {"clustering": "clustering", "augmented": "full-row-column"}.get(
            flow, "bc-column"
        )

    check = consistency_check(problem)

    if flow == "clustering":
        if network is None:
            raise ContractViolationError("clustering flow needs a DoubleLayerNetwork")
        if partition != "clustering":
            raise ContractViolationError(
                "the clustering flow runs on the clustering partition "
                '(pass partition="clustering" or leave it unset)'
            )
        ops = clustering_partition(problem)
        N = len(ops)
        if network.outer.node_count != N:
            raise DimensionError(
                f"outer graph has {network.outer.node_count} clusters, problem needs {N}"
            )
        L_outer = laplacian(network.outer)
        inner_Ls = [laplacian(g) for g in network.inner]
        F, q = clustering_system(ops, L_outer, inner_Ls, K)
        dc = ops[0].M.shape[0]
        if check.case is Case.III:
            raise UnsolvableError(
                "the equation has no solution; the clustering flow needs a consistent one"
            )
        if init == "equilibrium":
            raise ContractViolationError(
                "equilibrium init is only available for the consensus-type flows"
            )
        # Min-norm reference in both consistent cases (for the singular case
        # this is a reporting convention, not a guaranteed limit).
        x_ref = vec(oracle.direct_solve(problem).X_star)
        ref_kind = "min-norm"
        X0, Z0 = _initial_states(N, dc, init, seed, d_aux=dc)
        u0 = np.concatenate([X0.reshape(-1), Z0.reshape(-1)])
        metric_dim = dc
        n_nodes = N
        if dt is None:
            dt = _clustering_default_dt(ops, L_outer, inner_Ls, K)
    else:
        if graph is None:
            raise ContractViolationError(f"{flow} flow needs a communication graph")
        if flow == "augmented" and partition != "full-row-column":
            raise ContractViolationError("augmented flow requires the full-row-column partition")
        if flow != "augmented" and partition == "full-row-column":
            raise ContractViolationError("full-row-column equations run under the augmented flow")
        eqs = build_node_equations(problem, partition, graph, groups=groups)
        N = len(eqs)
        d = eqs[0].unknown_dim
        L = laplacian(graph)
        if flow == "cps":
            if Ks is None:
                raise ContractViolationError("cps flow needs the symmetrization gain Ks")
            F, q = cps_system(eqs, L, K, Ks)
        elif flow == "ls":
            F, q = ls_system(eqs, L, K)
        else:  # cp, or augmented = cp dynamics on the augmented equations
            F, q = cp_system(eqs, L, K)

        # Min-norm solution of the stacked node system. Its leading block is
        # the equation's min-norm solution in the flow's own coordinates (the
        # row partition works on the transposed equation), and for the
        # augmented scheme it carries equilibrium slack blocks as well.
        H_stack, c_stack = stack_equations(eqs)
        y_hat = pinv(H_stack) @ c_stack
        stack_residual = float(np.linalg.norm(H_stack @ y_hat - c_stack))
        x_min = None
        if stack_residual <= CONSISTENCY_RTOL * (1.0 + float(np.linalg.norm(c_stack))):
            x_min = y_hat
        elif init == "equilibrium":
            raise ContractViolationError(
                "equilibrium init needs a solvable equation (this one has no solution)"
            )

        X0, _ = _initial_states(N, d, init, seed, x_eq=x_min)
        u0 = X0.reshape(-1)
        metric_dim = problem.n * problem.m  # X block width (= d for plain schemes)
        n_nodes = N

        if check.case is Case.I:
            x_ref = x_min
            ref_kind = "min-norm"
        elif check.case is Case.II:
            limit = oracle.flow_limit(eqs, X0)
            x_ref = limit[:metric_dim]
            ref_kind = "projected-average"
        else:  # Case III
            if flow != "ls":
                raise UnsolvableError(
                    "the equation has no solution; only the least-squares flow "
                    "is meaningful on inconsistent data"
                )
            if partition == "ac-row":
                p_eff = SylvesterProblem(problem.B.T, problem.A.T, problem.C.T)
            else:
                p_eff = problem
            x_ref = oracle.least_squares_reference(p_eff)
            ref_kind = "least-squares"
        if dt is None:
            dt = default_dt(K, Ks or 0.0, L)

    n_steps, steps = _sample_steps(t_end, dt, sample_stride)
    R, s_vec = rk4_transition(F, q, dt)
    samples, bad = propagate(R, s_vec, u0, n_steps, steps, guard=DIVERGENCE_GUARD)
    if bad is not None:
        t_bad = steps[bad] * dt
        raise FlowDivergenceError(
            f"state norm exceeded {DIVERGENCE_GUARD:g} near t={t_bad:g}; "
            f"the integration is unstable at dt={dt:g} — try a smaller dt"
        )

    times = steps.astype(float) * dt
    D = u0.shape[0]
    if flow == "clustering":
        half = D // 2
        node_part = samples[:, :half].reshape(len(steps), n_nodes, metric_dim)
        aux_part = samples[:, half:].reshape(len(steps), n_nodes, metric_dim)
    else:
        node_part = samples.reshape(len(steps), n_nodes, -1)
        aux_part = None

    diffs = node_part[:, :, :metric_dim] - x_ref[np.newaxis, np.newaxis, :metric_dim]
    e_node = np.einsum("snk,snk->sn", diffs, diffs)
    e_total = e_node.sum(axis=1)
    consensus = np.empty(len(steps))
    for k in range(len(steps)):
        Xk = node_part[k, :, :metric_dim]
        gram = Xk @ Xk.T
        sq = np.diag(gram)
        d2 = sq[:, np.newaxis] + sq[np.newaxis, :] - 2.0 * gram
        consensus[k] = float(np.sqrt(max(0.0, float(d2.max()))))

    final = FlowState(
        t=float(times[-1]),
        node_states=node_part[-1].copy(),
        aux_states=None if aux_part is None else aux_part[-1].copy(),
    )
    meta = {
        "flow": flow,
        "partition": partition,
        "K": K,
        "Ks": Ks,
        "dt": dt,
        "t_end": t_end,
        "sample_stride": sample_stride,
        "init": init,
        "seed": seed,
        "case": check.case.value,
        "reference": ref_kind,
        "x_ref": x_ref,
        "metric_dim": metric_dim,
    }
    return Trajectory(
        times=times,
        e_node=e_node,
        e_total=e_total,
        consensus=consensus,
        final_state=final,
        meta=meta,
    )
