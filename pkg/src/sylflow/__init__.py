"""Distributed network flows for Sylvester matrix equations AX + XB = C.

The library partitions the vectorized equation Hx = c across the nodes of a
connected graph, integrates a consensus-plus-projection flow with a fixed-step
fourth-order Runge-Kutta scheme, and verifies the measured convergence rate
against spectral predictions computed from the partition and the topology.

Quick start::

    import sylflow

    p = sylflow.fixtures.example1_problem()
    g = sylflow.make_cycle(5)
    traj = sylflow.simulate(p, flow="cp", graph=g, K=1.0, t_end=100.0)
    print(traj.e_total[-1])
"""

from __future__ import annotations

from . import fixtures
from .backend import kernel_backend
from .densela import (
    kron,
    numerical_rank,
    pinv,
    standard_basis,
    sym_eig_desc,
    symmetrizer_permutation,
    unvec,
    vec,
)
from .errors import (
    ConfigError,
    ConnectivityError,
    ContractViolationError,
    DegenerateProblemError,
    DimensionError,
    FlowDivergenceError,
    PartitionError,
    SylflowError,
    UnsolvableError,
)
from .flows import (
    FLOWS,
    PARTITIONS,
    FlowState,
    Trajectory,
    build_node_equations,
    default_dt,
    rk4_step,
    rk4_transition,
    simulate,
)
from .netgraph import (
    DoubleLayerNetwork,
    NetworkGraph,
    algebraic_connectivity,
    from_edges,
    laplacian,
    make_complete,
    make_cycle,
    make_path,
    max_laplacian_eigenvalue,
)
from .oracle import (
    OracleSolution,
    direct_solve,
    flow_limit,
    least_squares_reference,
    positive_definite_check,
)
from .partition import (
    Case,
    ClusterOperators,
    ConsistencyResult,
    NodeEquation,
    SylvesterProblem,
    ac_row_partition,
    bc_column_partition,
    clustering_partition,
    consistency_check,
    full_rowcol_partition,
    grouped_column_partition,
    high_res_partition,
    lyapunov_sym_partition,
    stack_equations,
    vectorized_operator,
)
from .rates import (
    ClusteringRateReport,
    RateReport,
    build_JL,
    clustering_rate,
    measured_rate,
    r0_limit,
    r_of_K,
    rank_identity_check,
    remark2_bounds,
    rs_upper_bound,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "kernel_backend",
    "fixtures",
    # errors
    "SylflowError",
    "DimensionError",
    "ContractViolationError",
    "ConnectivityError",
    "PartitionError",
    "DegenerateProblemError",
    "UnsolvableError",
    "FlowDivergenceError",
    "ConfigError",
    # dense linear algebra
    "vec",
    "unvec",
    "kron",
    "pinv",
    "sym_eig_desc",
    "numerical_rank",
    "symmetrizer_permutation",
    "standard_basis",
    # graphs
    "NetworkGraph",
    "DoubleLayerNetwork",
    "laplacian",
    "algebraic_connectivity",
    "max_laplacian_eigenvalue",
    "make_path",
    "make_cycle",
    "make_complete",
    "from_edges",
    # problems and partitions
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
    # flows
    "FLOWS",
    "PARTITIONS",
    "FlowState",
    "Trajectory",
    "simulate",
    "build_node_equations",
    "rk4_step",
    "rk4_transition",
    "default_dt",
    # oracle
    "OracleSolution",
    "direct_solve",
    "flow_limit",
    "least_squares_reference",
    "positive_definite_check",
    # rates
    "RateReport",
    "ClusteringRateReport",
    "build_JL",
    "r_of_K",
    "r0_limit",
    "remark2_bounds",
    "rs_upper_bound",
    "clustering_rate",
    "rank_identity_check",
    "measured_rate",
]
