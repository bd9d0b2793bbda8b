"""Convergence-rate quantities: exact spectral formulas and measured slopes.

For the consensus + projection flow over node equations (H_i, c_i) on a graph
with Laplacian L, the error contracts like exp(-2 r(K) t) where

    r(K) = smallest nonzero eigenvalue of J_L = K (L kron I_d) + diag{H_i^+ H_i}.

r(K) is nondecreasing in K, bounded by 1, and tends to

    r0 = lambda_{rank(H)} of (1/N) sum_i H_i^+ H_i

as K grows. When every H_i has full row rank, r0 is sandwiched by eigenvalue
bounds built from f_AB = I kron A.T A + (sum_i B_i B_i.T) kron I + B kron A
+ (B kron A).T. The symmetrization flow's rate is only bounded above, by
min{1 + Ks, 1 + K lambda_1(L)}. The clustering flow has its own dynamics
matrix G; its rate r*(K) is the smallest nonzero real part of G's spectrum.

``measured_rate`` estimates the exponent from a simulated trajectory by a
least-squares fit to log e(t) over the tail window and reports slope / -2,
directly comparable to r(K).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .densela import kron, numerical_rank, pinv, sym_eig_desc
from .errors import ContractViolationError, DegenerateProblemError, DimensionError
from .flows import clustering_system
from .partition import SylvesterProblem, stack_equations

__all__ = [
    "RateReport",
    "ClusteringRateReport",
    "r_of_K",
    "r0_limit",
    "remark2_bounds",
    "rs_upper_bound",
    "clustering_rate",
    "rank_identity_check",
    "measured_rate",
]

#: An eigenvalue counts as nonzero when |lam| > this times the largest |lam|
#: (kept consistent with numerical_rank so index- and threshold-based
#: selection of the "smallest nonzero" eigenvalue agree).
EIG_ZERO_RTOL = 1e-9

#: Squared-error samples below this are treated as numerical floor.
ERROR_FLOOR = 1e-20

#: Minimum usable tail samples for a slope fit.
MIN_FIT_SAMPLES = 10


@dataclass(frozen=True)
class RateReport:
    """Rate summary for one K: theory, limit, measurement, optional bounds."""

    K: float
    r_theory: float
    r_limit_r0: float
    rank_H: int
    rank_JL: int
    r_measured: Optional[float] = None
    bounds: Optional[tuple] = None

    def __post_init__(self):
        if self.r_theory < -1e-12:
            raise ContractViolationError(f"negative rate r(K) = {self.r_theory}")
        if self.bounds is not None:
            lo, hi = self.bounds
            if lo > hi:
                raise ContractViolationError(f"rate bounds out of order: {lo} > {hi}")


@dataclass(frozen=True)
class ClusteringRateReport:
    """Rate summary of the clustering dynamics matrix G for one K."""

    K: float
    r_star: float
    rank_G: int
    rank_bound: int
    min_real_part: float
    max_imag_ratio: float
    conditioning_warning: bool


def _projector_blocks(eqs: list) -> list:
    d = eqs[0].unknown_dim
    if any(e.unknown_dim != d for e in eqs):
        raise DimensionError("all node equations must share the unknown dimension")
    return [pinv(e.H) @ e.H for e in eqs]


def build_JL(eqs: list, L: np.ndarray, K: float) -> np.ndarray:
    """The symmetric PSD matrix J_L = K (L kron I_d) + diag{H_i^+ H_i}."""
    N = len(eqs)
    d = eqs[0].unknown_dim
    if L.shape != (N, N):
        raise DimensionError(f"Laplacian shape {L.shape} does not match {N} nodes")
    JL = K * kron(L, np.eye(d))
    for i, block in enumerate(_projector_blocks(eqs)):
        JL[i * d : (i + 1) * d, i * d : (i + 1) * d] += block
    return JL


def r_of_K(eqs: list, L: np.ndarray, K: float) -> tuple[float, int]:
    """Exact rate r(K) = smallest nonzero eigenvalue of J_L, plus rank(J_L).

    Eigenvalues are sorted descending; the value at index rank(J_L) - 1 is
    the smallest one above the zero threshold. An all-zero J_L (no data and
    no coupling) has no rate and raises DegenerateProblemError.
    """
    JL = build_JL(eqs, L, K)
    lam = sym_eig_desc(JL)
    if lam[0] <= 0.0:
        raise DegenerateProblemError("J_L is zero: no rate is defined")
    rank = int(np.count_nonzero(np.abs(lam) > EIG_ZERO_RTOL * np.abs(lam[0])))
    return float(lam[rank - 1]), rank


def r0_limit(eqs: list) -> float:
    """Large-K limit of r(K): lambda_{rank(H)} of (1/N) sum_i H_i^+ H_i."""
    H, _ = stack_equations(eqs)
    rank_H = numerical_rank(H)
    if rank_H == 0:
        raise DegenerateProblemError("all node operators are zero: no rate limit")
    avg = sum(_projector_blocks(eqs)) / float(len(eqs))
    lam = sym_eig_desc(avg)
    return float(lam[rank_H - 1])


def remark2_bounds(p: SylvesterProblem, eqs: list) -> Optional[tuple]:
    """Eigenvalue sandwich for r0 on column-partitioned equations.

    Requires every H_i to have full row rank; returns None (inapplicable)
    otherwise. With lam_star = max_i lambda_1(H_i H_i.T) and
    lam_low = min_i lambda_min(H_i H_i.T):

        lower = lambda_min(f_AB) / (N lam_star),
        upper = lambda_max(f_AB) / (N lam_low),

    where f_AB = I kron (A.T A) + (sum_i B_i B_i.T) kron I + B kron A
    + (B kron A).T equals H.T H for the column scheme.
    """
    for eq in eqs:
        if numerical_rank(eq.H) < eq.H.shape[0]:
            return None
    n = p.n
    BBt = np.zeros((p.m, p.m))
    for i in range(p.m):
        col = p.B[:, i][:, np.newaxis]
        BBt += col @ col.T
    BA = kron(p.B, p.A)
    f_AB = kron(np.eye(p.m), p.A.T @ p.A) + kron(BBt, np.eye(n)) + BA + BA.T
    lam_f = sym_eig_desc(f_AB)
    gram_eigs = [sym_eig_desc(eq.H @ eq.H.T) for eq in eqs]
    lam_star = max(float(g[0]) for g in gram_eigs)
    lam_low = min(float(g[-1]) for g in gram_eigs)
    N = len(eqs)
    return (float(lam_f[-1]) / (N * lam_star), float(lam_f[0]) / (N * lam_low))


def rs_upper_bound(K: float, Ks: float, L: np.ndarray) -> float:
    """Guaranteed rate bound of the symmetrization flow:
    min{1 + Ks, 1 + K lambda_1(L)}."""
    if K <= 0.0 or Ks <= 0.0:
        raise ContractViolationError(f"K and Ks must be positive, got {K}, {Ks}")
    lam1 = float(sym_eig_desc(L)[0])
    return min(1.0 + Ks, 1.0 + K * lam1)


def clustering_rate(
    ops: list, K: float, L_outer: np.ndarray, inner_laplacians: list
) -> ClusteringRateReport:
    """Rate r*(K) of the clustering dynamics: smallest nonzero eigenvalue of G.

    G is nonsymmetric but has (numerically) real, nonnegative spectrum;
    eigenvalues are taken by a general solver, ranked by descending real
    part, and r* is the entry at index rank(G) - 1. The report also carries
    the exact kernel-dimension rank bound
    rank(G) <= 2 N dc - dc - dim(intersection of ker M_i)
    and flags a conditioning warning when any eigenvalue's imaginary part
    exceeds 1e-6 |lambda|.
    """
    G, _ = clustering_system(ops, L_outer, inner_laplacians, K)
    lam = np.linalg.eigvals(G)
    order = np.argsort(-lam.real)
    lam = lam[order]
    rank_G = numerical_rank(G)
    if rank_G == 0:
        raise DegenerateProblemError("G is zero: no clustering rate is defined")
    r_star = float(lam[rank_G - 1].real)

    dc = ops[0].M.shape[0]
    N = len(ops)
    stacked_M = np.vstack([op.M for op in ops])
    kernel_dim = dc - numerical_rank(stacked_M)
    rank_bound = 2 * N * dc - dc - kernel_dim

    mags = np.abs(lam)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratios = np.where(mags > 0.0, np.abs(lam.imag) / np.where(mags > 0, mags, 1.0), 0.0)
    max_ratio = float(np.max(ratios)) if ratios.size else 0.0
    return ClusteringRateReport(
        K=K,
        r_star=r_star,
        rank_G=rank_G,
        rank_bound=rank_bound,
        min_real_part=float(lam[-1].real),
        max_imag_ratio=max_ratio,
        conditioning_warning=bool(max_ratio > 1e-6),
    )


def rank_identity_check(eqs: list, L: np.ndarray, K: float) -> Optional[bool]:
    """Whether rank(J_L) = N d - d + rank(H) holds for these equations.

    Returns None (not applicable) when rank(H) = 0, where the identity
    degenerates. The N-node/d-dimension form generalizes the square-case
    count N = d = n^2; the generalization is exercised by tests on random
    plain partitions rather than assumed.
    """
    H, _ = stack_equations(eqs)
    rank_H = numerical_rank(H)
    if rank_H == 0:
        return None
    d = eqs[0].unknown_dim
    N = len(eqs)
    JL = build_JL(eqs, L, K)
    return bool(numerical_rank(JL) == N * d - d + rank_H)


def measured_rate(traj, tail_fraction: float = 0.5) -> Optional[float]:
    """Exponent estimate from a trajectory: -slope/2 of log e(t) on the tail.

    Uses the final ``tail_fraction`` of samples, discarding any at the
    numerical floor (e < 1e-20). Returns None — the floor-reached marker —
    when fewer than 10 usable samples remain.
    """
    if not 0.0 < tail_fraction < 1.0:
        raise ContractViolationError(
            f"tail_fraction must be in (0, 1), got {tail_fraction}"
        )
    t = np.asarray(traj.times, dtype=float)
    e = np.asarray(traj.e_total, dtype=float)
    start = int(np.floor(len(t) * (1.0 - tail_fraction)))
    t, e = t[start:], e[start:]
    keep = e > ERROR_FLOOR
    if int(np.count_nonzero(keep)) < MIN_FIT_SAMPLES:
        return None
    slope = np.polyfit(t[keep], np.log(e[keep]), 1)[0]
    return float(-slope / 2.0)
