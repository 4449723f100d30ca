"""Exact optimal NERF bounds for small frames by exhaustive enumeration.

For every K-element column subset the extreme eigenvalues of the M x M
subframe operator are computed with a cyclic Jacobi eigensolver; the
global minimum of the smallest and maximum of the largest eigenvalue over
all C(N,K) subsets are the optimal bounds.  Only feasible for small N,
which is exactly its job: ground truth to validate the net estimator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional

import numpy as np

from .errors import InvalidInputError, OracleInfeasibleError
from .frames import FrameMatrix

DEFAULT_BUDGET = 10**7
_JACOBI_TOL_FACTOR = 1e-14
_JACOBI_MAX_SWEEPS = 100

__all__ = [
    "EigenResult",
    "OracleResult",
    "eigen_symmetric",
    "exact_bounds",
    "exact_bounds_all_K",
    "write_oracle_csv",
]


@dataclass(frozen=True)
class EigenResult:
    """Sorted eigenvalues and the max eigenpair residual ||Aq - lam q||."""

    eigenvalues: np.ndarray
    residual: float


def eigen_symmetric(A: np.ndarray) -> EigenResult:
    """All eigenvalues of a symmetric matrix via cyclic Jacobi rotations.

    Sweeps annihilate off-diagonal entries until the off-diagonal
    Frobenius norm drops below 1e-14 * ||A||_F (100-sweep cap).
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidInputError("matrix must be square")
    scale = np.linalg.norm(A)
    if np.max(np.abs(A - A.T)) > 1e-12 * max(1.0, scale):
        raise InvalidInputError("matrix must be symmetric")
    n = A.shape[0]
    a = (A + A.T) / 2.0
    v = np.eye(n)
    tol = _JACOBI_TOL_FACTOR * max(scale, np.finfo(float).tiny)
    for _ in range(_JACOBI_MAX_SWEEPS):
        off = math.sqrt(max(0.0, np.sum(a**2) - np.sum(np.diag(a) ** 2)))
        if off <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= tol / max(1, n):
                    continue
                # Rotation angle zeroing a[p,q] (standard stable form).
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(
                    1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0)), theta
                )
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                rot_p = c * v[:, p] - s * v[:, q]
                rot_q = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = rot_p, rot_q
    lam = np.diag(a).copy()
    order = np.argsort(lam)
    lam = lam[order]
    vecs = v[:, order]
    residual = float(np.max(np.linalg.norm(A @ vecs - vecs * lam, axis=0)))
    return EigenResult(eigenvalues=lam, residual=residual)


@dataclass(frozen=True)
class OracleResult:
    K: int
    alpha: float
    beta: float
    witness_alpha: tuple  # 0-based column indices
    witness_beta: tuple
    subsets_examined: int


def exact_bounds(
    frame: FrameMatrix, K: int, budget: int = DEFAULT_BUDGET
) -> OracleResult:
    """Extreme subframe-operator eigenvalues over all K-subsets.

    Subsets are visited in lexicographic order; the first subset attaining
    each extremum is kept as its witness, so results are deterministic.
    """
    N, M = frame.N, frame.M
    if not 1 <= K <= N:
        raise InvalidInputError(f"need 1 <= K <= N, got K={K}, N={N}")
    total = math.comb(N, K)
    if total > budget:
        raise OracleInfeasibleError(N, K, total, budget)
    phi = frame.matrix
    alpha = math.inf
    beta = -math.inf
    wit_a = wit_b = None
    count = 0
    for subset in combinations(range(N), K):
        sub = phi[:, subset]
        # Subframe operator, accumulated fresh per subset.
        gram = sub @ sub.T
        lam = eigen_symmetric(gram).eigenvalues
        count += 1
        if lam[0] < alpha:
            alpha = float(lam[0])
            wit_a = subset
        if lam[-1] > beta:
            beta = float(lam[-1])
            wit_b = subset
    return OracleResult(
        K=K,
        alpha=alpha,
        beta=beta,
        witness_alpha=wit_a,
        witness_beta=wit_b,
        subsets_examined=count,
    )


def exact_bounds_all_K(
    frame: FrameMatrix,
    k_min: int = 1,
    k_max: Optional[int] = None,
    budget: int = DEFAULT_BUDGET,
) -> List[OracleResult]:
    """exact_bounds for every K in [k_min, k_max] (default 1..N)."""
    if k_max is None:
        k_max = frame.N
    if not 1 <= k_min <= k_max <= frame.N:
        raise InvalidInputError(
            f"bad K range [{k_min}, {k_max}] for N={frame.N}"
        )
    total = sum(math.comb(frame.N, k) for k in range(k_min, k_max + 1))
    if total > budget:
        raise OracleInfeasibleError(frame.N, -1, total, budget)
    return [exact_bounds(frame, k, budget) for k in range(k_min, k_max + 1)]


def write_oracle_csv(results: List[OracleResult], path) -> None:
    """Oracle report CSV; witness indices are 1-based, semicolon-joined."""
    with open(path, "w") as fh:
        fh.write(
            "K,alpha_exact,beta_exact,witness_alpha,witness_beta,"
            "subsets_examined\n"
        )
        for res in results:
            wa = ";".join(str(i + 1) for i in res.witness_alpha)
            wb = ";".join(str(i + 1) for i in res.witness_beta)
            fh.write(
                f"{res.K},{res.alpha:.17g},{res.beta:.17g},"
                f"{wa},{wb},{res.subsets_examined}\n"
            )
