"""Built-in benchmark problems ("example1" .. "example5").

Five fixed scenarios used by the ``verify`` CLI command and the test suite:

* example1 - a dense 5x5 equation with a unique solution; the workhorse for
  convergence and rate-law checks on the 5-node cycle.
* example2 - two contrasting 5x5 data sets (sparse A / dense B and dense A /
  sparse B) for comparing the column and row partitions.
* example3 - example1's equation at two data resolutions: 5-node column
  partition vs 25-node entrywise partition.
* example4 - a 6x6 Lyapunov equation A X + X A.T = -I assembled from a 3x3
  grid of 2x2 blocks, run on a 3-node path under the augmented flow; its
  positive definite solution (printed to 4 decimals as P_STAR) certifies
  stability of the block system.
* example5 - example1's equation under the two-layer clustering topology.
"""

from __future__ import annotations

import numpy as np

from .netgraph import (
    DoubleLayerNetwork,
    NetworkGraph,
    make_complete,
    make_cycle,
    make_path,
)
from .partition import SylvesterProblem

__all__ = [
    "example1_problem",
    "example1_graph",
    "example2_problems",
    "example4_A",
    "example4_problem",
    "example4_graph",
    "example4_P_star",
    "example5_network",
    "FIXTURE_NAMES",
]

FIXTURE_NAMES = ("example1", "example2", "example3", "example4", "example5")


def example1_problem() -> SylvesterProblem:
    """Dense 5x5 equation with a unique solution."""
    A = [
        [7, 1, 1, 1, 5],
        [7, 2, 8, 3, 0],
        [1, 4, 8, 7, 7],
        [7, 8, 4, 6, 7],
        [5, 8, 6, 8, 5],
    ]
    B = [
        [6, 6, 7, 4, 4],
        [6, 0, 6, 3, 4],
        [3, 2, 3, 6, 5],
        [5, 0, 8, 6, 6],
        [1, 1, 0, 1, 6],
    ]
    C = [
        [2, 4, 6, 8, 7],
        [5, 8, 2, 4, 2],
        [5, 3, 4, 1, 7],
        [1, 5, 6, 1, 2],
        [1, 2, 7, 2, 7],
    ]
    return SylvesterProblem(A=np.array(A, float), B=np.array(B, float), C=np.array(C, float))


def example1_graph() -> NetworkGraph:
    """The 5-node cycle used with example1."""
    return make_cycle(5)


def example2_problems() -> tuple[SylvesterProblem, SylvesterProblem]:
    """Two 5x5 data sets: (sparse A, dense B) and (dense A, sparse B)."""
    A1 = [
        [0, 0, 0, 5, 0],
        [0, 2, 0, 0, 2],
        [1, 3, 0, 0, 0],
        [0, 0, 4, 0, 0],
        [0, 0, 0, 0, 0],
    ]
    B1 = [
        [7, 4, 4, 7, 10],
        [3, 8, 6, 7, 3],
        [10, 8, 7, 2, 6],
        [0, 2, 8, 1, 2],
        [4, 5, 3, 5, 8],
    ]
    C1 = [
        [8, 1, 6, 8, 3],
        [8, 5, 5, 3, 7],
        [4, 8, 0, 5, 7],
        [6, 9, 3, 2, 7],
        [1, 1, 2, 6, 5],
    ]
    A2 = [
        [1, 5, 10, 1, 9],
        [2, 10, 0, 4, 2],
        [9, 1, 8, 3, 3],
        [2, 4, 8, 8, 1],
        [8, 1, 9, 4, 1],
    ]
    B2 = [
        [0, 0, 8, 6, 0],
        [2, 0, 0, 0, 0],
        [0, 1, 0, 0, 0],
        [0, 0, 0, 0, 0],
        [0, 0, 0, 0, 3],
    ]
    C2 = [
        [9, 6, 2, 0, 3],
        [6, 4, 1, 9, 9],
        [5, 5, 2, 9, 4],
        [1, 4, 2, 5, 1],
        [9, 1, 4, 5, 8],
    ]
    p1 = SylvesterProblem(np.array(A1, float), np.array(B1, float), np.array(C1, float))
    p2 = SylvesterProblem(np.array(A2, float), np.array(B2, float), np.array(C2, float))
    return p1, p2


def example4_A() -> np.ndarray:
    """6x6 block matrix assembled from the 2x2 subsystem coupling blocks."""
    D = {
        (1, 1): [[-5, 0], [0, -5]],
        (1, 2): [[4, 1], [0, 4]],
        (1, 3): [[0, 0], [0, 0]],
        (2, 1): [[1, 0], [0, 1]],
        (2, 2): [[-6, 1], [1, -3]],
        (2, 3): [[2, 0], [2, 4]],
        (3, 1): [[0, 0], [0, 0]],
        (3, 2): [[2, 0], [1, -1]],
        (3, 3): [[-4, 0], [0, -4]],
    }
    return np.block([[np.array(D[(i, j)], float) for j in (1, 2, 3)] for i in (1, 2, 3)])


def example4_problem() -> SylvesterProblem:
    """The Lyapunov equation A X + X A.T = -I_6 for the block system."""
    A = example4_A()
    return SylvesterProblem(A=A, B=A.T, C=-np.eye(6))


def example4_graph() -> NetworkGraph:
    """3-node path (Laplacian [[1,-1,0],[-1,2,-1],[0,-1,1]])."""
    return make_path(3)


def example4_P_star() -> np.ndarray:
    """The positive definite solution, as printed to 4 decimals.

    The (4,5)/(5,4) entries differ by 2e-4 — rounding noise in the printed
    source; the true solution is symmetric.
    """
    P = [
        [0.2278, 0.1343, 0.1176, 0.1690, 0.0744, -0.0009],
        [0.1343, 0.3170, 0.0990, 0.2713, 0.0694, -0.0068],
        [0.1176, 0.0990, 0.1529, 0.1360, 0.0819, 0.0040],
        [0.1690, 0.2713, 0.1360, 0.4106, 0.1067, 0.0278],
        [0.0744, 0.0694, 0.0819, 0.1069, 0.1660, -0.0021],
        [-0.0009, -0.0068, 0.0040, 0.0278, -0.0021, 0.1190],
    ]
    return np.array(P, float)


def example5_network(kind: str = "complete") -> DoubleLayerNetwork:
    """Two-layer topology for example1's equation: 5 clusters of 5 nodes."""
    make = make_complete if kind == "complete" else make_cycle
    return DoubleLayerNetwork(outer=make(5), inner=tuple(make(5) for _ in range(5)))
