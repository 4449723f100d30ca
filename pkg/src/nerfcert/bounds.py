"""Net-sweep estimates and certified intervals for optimal NERF bounds.

For every net point the squared correlations with the frame columns are
sorted; prefix sums give the candidate lower bounds (sum of the K
smallest) and suffix sums the candidate upper bounds (sum of the K
largest).  Running elementwise min/max over all net points yields the
approximate bounds alpha_eps[K], beta_eps[K] for every K in one pass.
Certification then converts these into two-sided intervals around the
true extremal eigenvalue bounds.
"""

from __future__ import annotations

import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

import numpy as np

from .epsnet import NetConfig, StepPoint, _iter_pruned_levels, _iter_level_tuples, _leaf_passes
from .errors import InvalidConfigError, InvalidInputError
from .frames import FrameMatrix

_CHUNK = 4096  # points per batch; fixed so results never depend on threads

CAP_MODES = ("combined", "untf", "general")

__all__ = [
    "BoundsTable",
    "SweepAccumulator",
    "sorted_squared_correlations",
    "sweep_all_K",
    "certify",
    "trivial_untf_bounds",
    "min_spanning_K",
    "condition_number_bound",
    "write_bounds_csv",
    "read_bounds_csv",
]


@dataclass
class BoundsTable:
    """Per-K bound arrays, all indexed K = 1..N at position K-1."""

    M: int
    N: int
    epsilon_sq: float
    alpha_eps: np.ndarray
    beta_eps: np.ndarray
    argmin_r: np.ndarray  # net point rank attaining alpha_eps[K]
    argmax_r: np.ndarray
    net_points_used: int
    L: Optional[int] = None
    delta: Optional[float] = None
    alpha_lower: Optional[np.ndarray] = None
    beta_upper: Optional[np.ndarray] = None
    cap_mode: Optional[str] = None

    @property
    def certified(self) -> bool:
        return self.alpha_lower is not None


@dataclass
class SweepAccumulator:
    """Running per-K extrema; merging is an elementwise min/max."""

    alpha: np.ndarray
    beta: np.ndarray
    argmin: np.ndarray
    argmax: np.ndarray
    points_processed: int = 0

    @classmethod
    def empty(cls, N: int) -> "SweepAccumulator":
        return cls(
            alpha=np.full(N, np.inf),
            beta=np.full(N, -np.inf),
            argmin=np.zeros(N, dtype=np.int64),
            argmax=np.zeros(N, dtype=np.int64),
        )

    def merge(self, other: "SweepAccumulator") -> "SweepAccumulator":
        # Ties keep the smaller point rank, so merges commute.
        take_a = np.where(
            other.alpha < self.alpha,
            True,
            (other.alpha == self.alpha) & (other.argmin < self.argmin),
        )
        take_b = np.where(
            other.beta > self.beta,
            True,
            (other.beta == self.beta) & (other.argmax < self.argmax),
        )
        return SweepAccumulator(
            alpha=np.where(take_a, other.alpha, self.alpha),
            beta=np.where(take_b, other.beta, self.beta),
            argmin=np.where(take_a, other.argmin, self.argmin),
            argmax=np.where(take_b, other.argmax, self.argmax),
            points_processed=self.points_processed + other.points_processed,
        )


def sorted_squared_correlations(
    frame: FrameMatrix, psi: np.ndarray
) -> np.ndarray:
    """|<psi, phi_n>|^2 for all n, sorted nondecreasingly."""
    psi = np.asarray(psi, dtype=float)
    if psi.shape != (frame.M,):
        raise InvalidInputError(
            f"psi has shape {psi.shape}, expected ({frame.M},)"
        )
    vals = (psi @ frame.matrix) ** 2
    vals.sort()
    return vals


def _chunk_accumulate(phi: np.ndarray, psi_rows: np.ndarray, offset: int) -> SweepAccumulator:
    """Prefix/suffix extrema over one batch of unit-norm net points."""
    c2 = (psi_rows @ phi) ** 2
    c2.sort(axis=1)
    prefix = np.cumsum(c2, axis=1)
    suffix = np.cumsum(c2[:, ::-1], axis=1)
    amin = prefix.argmin(axis=0)
    amax = suffix.argmax(axis=0)
    n = phi.shape[1]
    cols = np.arange(n)
    return SweepAccumulator(
        alpha=prefix[amin, cols],
        beta=suffix[amax, cols],
        argmin=amin.astype(np.int64) + offset,
        argmax=amax.astype(np.int64) + offset,
        points_processed=psi_rows.shape[0],
    )


def _net_psi_chunks(net, config: Optional[NetConfig]):
    """Yield (psi_rows, first_rank) batches from a net source."""
    if isinstance(net, NetConfig):
        config = net
        powers = config.level_powers
        if config.pruned:
            tuples = _iter_pruned_levels(config)
        else:
            tuples = _iter_level_tuples(config)
        buf = []
        offset = 0
        for levels in tuples:
            buf.append(levels)
            if len(buf) == _CHUNK:
                yield _tuples_to_psi(buf, powers), offset
                offset += len(buf)
                buf = []
        if buf:
            yield _tuples_to_psi(buf, powers), offset
        return
    buf = []
    offset = 0
    for step in net:
        buf.append(step.psi)
        if len(buf) == _CHUNK:
            yield np.array(buf), offset
            offset += len(buf)
            buf = []
    if buf:
        yield np.array(buf), offset


def _tuples_to_psi(level_tuples, powers: np.ndarray) -> np.ndarray:
    psi_hat = powers[np.array(level_tuples)]
    psi_hat /= np.linalg.norm(psi_hat, axis=1, keepdims=True)
    return psi_hat


def resolve_threads(threads: int) -> int:
    """0 means auto: NERF_CERT_THREADS if set, else the CPU count."""
    if threads < 0:
        raise InvalidConfigError(f"threads must be >= 0, got {threads}")
    if threads:
        return threads
    env = os.environ.get("NERF_CERT_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def sweep_all_K(
    frame: FrameMatrix,
    net: Union[NetConfig, Iterable[StepPoint]],
    threads: int = 1,
    progress: bool = False,
) -> BoundsTable:
    """One pass over the net filling alpha_eps and beta_eps for all K.

    The caller is responsible for the frame being signed-permutation
    invariant (see frames.verify_group_invariance); only then do sector
    net points certify anything about the whole sphere.  Results are
    independent of chunking and thread count: per-point sums are computed
    identically everywhere and merged by pure min/max.
    """
    threads = resolve_threads(threads)
    phi = frame.matrix
    acc = SweepAccumulator.empty(frame.N)
    config = net if isinstance(net, NetConfig) else None

    chunks = _net_psi_chunks(net, config)
    if threads == 1:
        for psi_rows, offset in chunks:
            acc = acc.merge(_chunk_accumulate(phi, psi_rows, offset))
            if progress and acc.points_processed % 100_000 < _CHUNK:
                print(
                    f"  swept {acc.points_processed} net points", file=sys.stderr
                )
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = []
            for psi_rows, offset in chunks:
                futures.append(
                    pool.submit(_chunk_accumulate, phi, psi_rows, offset)
                )
                if len(futures) >= 4 * threads:
                    acc = acc.merge(futures.pop(0).result())
            for fut in futures:
                acc = acc.merge(fut.result())

    if acc.points_processed == 0:
        raise InvalidInputError("net is empty; nothing to sweep")
    return BoundsTable(
        M=frame.M,
        N=frame.N,
        epsilon_sq=config.epsilon_sq if config else math.nan,
        alpha_eps=acc.alpha,
        beta_eps=acc.beta,
        argmin_r=acc.argmin,
        argmax_r=acc.argmax,
        net_points_used=acc.points_processed,
        L=config.L if config else None,
        delta=config.delta if config else None,
    )


def certify(
    table: BoundsTable,
    use_untf_cap: bool = True,
    cap_mode: Optional[str] = None,
) -> BoundsTable:
    """Fill the certified interval endpoints alpha_lower / beta_upper.

    cap_mode selects the upper-bound cap fed into the lower certificate:

    * ``"combined"`` -- min(N/M, beta_eps/(1-eps^2)); the sharpest valid
      cap for unit norm tight frames (default, use_untf_cap=True).
    * ``"untf"`` -- N/M alone; this is the construction behind the
      published reference tables, weaker than "combined" at small K.
    * ``"general"`` -- beta_eps/(1-eps^2); no tightness assumed
      (use_untf_cap=False).

    alpha_lower[K] = (alpha_eps[K] - eps^2 * cap[K]) / (1 - eps^2); values
    may be negative, meaning no lower certificate at that K.
    """
    if not 0.0 < table.epsilon_sq < 1.0:
        raise InvalidConfigError(
            f"epsilon_sq must lie in (0,1), got {table.epsilon_sq}"
        )
    if cap_mode is None:
        cap_mode = "combined" if use_untf_cap else "general"
    if cap_mode not in CAP_MODES:
        raise InvalidConfigError(f"unknown cap_mode {cap_mode!r}")
    eps_sq = table.epsilon_sq
    scale = 1.0 / (1.0 - eps_sq)
    redundancy = table.N / table.M
    general_cap = table.beta_eps * scale
    if cap_mode == "combined":
        cap = np.minimum(redundancy, general_cap)
    elif cap_mode == "untf":
        cap = np.full(table.N, redundancy)
    else:
        cap = general_cap
    table.alpha_lower = (table.alpha_eps - eps_sq * cap) * scale
    if cap_mode == "general":
        table.beta_upper = general_cap
    else:
        table.beta_upper = np.minimum(redundancy, general_cap)
    table.cap_mode = cap_mode
    return table


def trivial_untf_bounds(N: int, M: int, K: int) -> tuple:
    """Bounds K - (N - N/M) <= alpha_K <= beta_K <= N/M for any UNTF."""
    if not M <= K <= N:
        raise InvalidInputError(f"need M <= K <= N, got K={K}, M={M}, N={N}")
    return (K - (N - N / M), N / M)


def min_spanning_K(table: BoundsTable) -> Optional[int]:
    """Smallest K with a positive certified lower bound, if any.

    At that K every K-column submatrix is guaranteed to span R^M.
    """
    if not table.certified:
        raise InvalidInputError("table must be certified first")
    positive = np.flatnonzero(table.alpha_lower > 0)
    return int(positive[0]) + 1 if positive.size else None


def condition_number_bound(table: BoundsTable, K: int) -> Optional[float]:
    """beta_upper[K] / alpha_lower[K], or None without a lower certificate."""
    if not table.certified:
        raise InvalidInputError("table must be certified first")
    if not 1 <= K <= table.N:
        raise InvalidInputError(f"K={K} out of range 1..{table.N}")
    lower = table.alpha_lower[K - 1]
    if lower <= 0:
        return None
    return float(table.beta_upper[K - 1] / lower)


def write_bounds_csv(table: BoundsTable, path) -> None:
    """Bounds report CSV with a JSON header comment line.

    Timing is deliberately left to the JSON run report so identical
    configurations produce byte-identical CSVs.
    """
    header = {
        "M": table.M,
        "N": table.N,
        "epsilon_sq": table.epsilon_sq,
        "L": table.L,
        "delta": table.delta,
        "net_points_used": table.net_points_used,
        "cap_mode": table.cap_mode,
    }
    nm = table.N / table.M
    with open(path, "w") as fh:
        fh.write("# " + json.dumps(header) + "\n")
        fh.write(
            "K,alpha_eps,beta_eps,alpha_lower,beta_upper,"
            "trivial_lower,trivial_upper\n"
        )
        for i in range(table.N):
            k = i + 1
            alo = table.alpha_lower[i] if table.certified else math.nan
            bup = table.beta_upper[i] if table.certified else math.nan
            fh.write(
                f"{k},{table.alpha_eps[i]:.17g},{table.beta_eps[i]:.17g},"
                f"{alo:.17g},{bup:.17g},"
                f"{k - (table.N - nm):.17g},{nm:.17g}\n"
            )


def read_bounds_csv(path) -> BoundsTable:
    """Read a CSV written by :func:`write_bounds_csv`."""
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith("# "):
            raise InvalidInputError(f"{path}: missing JSON header line")
        meta = json.loads(first[2:])
        fh.readline()  # column header
        rows = [line.split(",") for line in fh if line.strip()]
    n = meta["N"]
    if len(rows) != n:
        raise InvalidInputError(f"{path}: expected {n} rows, found {len(rows)}")
    cols = np.array([[float(v) for v in row] for row in rows])
    table = BoundsTable(
        M=meta["M"],
        N=n,
        epsilon_sq=meta["epsilon_sq"],
        alpha_eps=cols[:, 1],
        beta_eps=cols[:, 2],
        argmin_r=np.zeros(n, dtype=np.int64),
        argmax_r=np.zeros(n, dtype=np.int64),
        net_points_used=meta.get("net_points_used", 0),
        L=meta.get("L"),
        delta=meta.get("delta"),
        cap_mode=meta.get("cap_mode"),
    )
    if not np.all(np.isnan(cols[:, 3])):
        table.alpha_lower = cols[:, 3]
        table.beta_upper = cols[:, 4]
    return table
