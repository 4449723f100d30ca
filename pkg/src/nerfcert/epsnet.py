"""Quantized step-function epsilon-nets for the nonnegative nondecreasing
sector of the unit sphere.

A net point is a nondecreasing step function on {1,..,M} with values in
{delta^l : l = 0..L-1}, normalized to unit length.  Exponentially spaced
levels make the rounded-up quantization of any sector point land within
chordal distance epsilon, once L satisfies the level-count inequality of
:func:`min_levels`.  The net is enumerated as integer compositions of M
into L nonnegative parts (stars and bars), optionally restricted by two
necessary pruning conditions that every rounded-up quantization obeys.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import fsum
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import (
    InvalidConfigError,
    InvalidInputError,
    LevelSearchOverflowError,
)

LEVEL_SEARCH_CAP = 10**6

# Conservative slack for branch-and-bound cuts; boundary-adjacent leaves
# are re-evaluated with exactly rounded sums (math.fsum).
_BB_MARGIN = 1e-12

__all__ = [
    "NetConfig",
    "StepPoint",
    "CoveringReport",
    "min_levels",
    "delta_for",
    "net_cardinality",
    "pruned_cardinality",
    "quantize_step",
    "prune_check",
    "enumerate_net",
    "volumetric_bound",
    "verify_covering",
]


def min_levels(M: int, epsilon_sq: float) -> int:
    """Smallest L >= 2 with (L-1)(1-eps^2)^L <= (1/M)((L-1)/L)^L.

    epsilon_sq is the squared net radius (the tables of interest are
    indexed by eps^2).  Scans linearly from L = 2; raises
    LevelSearchOverflowError past the hard cap.
    """
    if M < 1:
        raise InvalidInputError(f"M must be positive, got {M}")
    if not 0.0 < epsilon_sq < 1.0:
        raise InvalidInputError(f"epsilon_sq must lie in (0,1), got {epsilon_sq}")
    one_minus = 1.0 - epsilon_sq
    for L in range(2, LEVEL_SEARCH_CAP + 1):
        if (L - 1) * one_minus**L <= ((L - 1) / L) ** L / M:
            return L
    raise LevelSearchOverflowError(
        f"no admissible L <= {LEVEL_SEARCH_CAP} for M={M}, eps^2={epsilon_sq}"
    )


def delta_for(M: int, L: int) -> float:
    """Base level ratio delta = [M(L-1)]^(-1/(2L)).

    Computed as exp(-ln(M(L-1))/(2L)) for cross-platform reproducibility.
    """
    if M < 1 or L < 2:
        raise InvalidInputError(f"need M >= 1 and L >= 2, got M={M}, L={L}")
    prod = M * (L - 1)
    if prod <= 1:
        raise InvalidInputError(
            f"M(L-1) = {prod} gives delta = 1; the net degenerates"
        )
    return math.exp(-math.log(prod) / (2 * L))


def net_cardinality(M: int, L: int) -> int:
    """Exact count C(M+L-1, L-1) of compositions of M into L parts."""
    if M < 1 or L < 2:
        raise InvalidInputError(f"need M >= 1 and L >= 2, got M={M}, L={L}")
    return math.comb(M + L - 1, L - 1)


@dataclass(frozen=True)
class NetConfig:
    """Step-function net parameters.

    ``level_powers`` caches delta^l for l = 0..L-1 so the enumeration hot
    loop never calls transcendentals.
    """

    M: int
    epsilon_sq: float
    L: int
    delta: float
    pruned: bool = True

    @classmethod
    def create(
        cls,
        M: int,
        epsilon_sq: float,
        pruned: bool = True,
        L: Optional[int] = None,
    ) -> "NetConfig":
        if not 0.0 < epsilon_sq < 1.0:
            raise InvalidConfigError(
                f"epsilon_sq must lie in (0,1), got {epsilon_sq}"
            )
        if L is None:
            L = min_levels(M, epsilon_sq)
        elif L < 2:
            raise InvalidConfigError(f"L must be >= 2, got {L}")
        return cls(
            M=M,
            epsilon_sq=epsilon_sq,
            L=L,
            delta=delta_for(M, L),
            pruned=pruned,
        )

    @property
    def epsilon(self) -> float:
        return math.sqrt(self.epsilon_sq)

    @property
    def level_powers(self) -> np.ndarray:
        powers = self.delta ** np.arange(self.L)
        powers.flags.writeable = False
        return powers

    @property
    def cardinality(self) -> int:
        return net_cardinality(self.M, self.L)


@dataclass(frozen=True)
class StepPoint:
    """One net element.

    ``exponents`` is the nonincreasing level profile eta(1..M), so the
    pre-normalized values psi_hat(m) = delta^eta(m) are nondecreasing;
    ``counts`` holds the composition (c_0,..,c_{L-1}) with sum M.
    """

    exponents: tuple
    counts: tuple
    psi_hat: np.ndarray
    psi: np.ndarray

    @classmethod
    def from_ascending_levels(
        cls, levels: Sequence[int], config: NetConfig
    ) -> "StepPoint":
        """Build from level exponents sorted ascending (entry M first)."""
        exponents = tuple(reversed(levels))
        counts = [0] * config.L
        for l in levels:
            counts[l] += 1
        psi_hat = config.level_powers[list(exponents)]
        psi = psi_hat / np.linalg.norm(psi_hat)
        return cls(exponents, tuple(counts), psi_hat, psi)


def quantize_step(x: np.ndarray, config: NetConfig) -> StepPoint:
    """Round a sector point up onto the step-function grid.

    Each entry maps to delta^l with delta^(l+1) < x(m) <= delta^l, entries
    at or below delta^(L-1) map to the bottom level.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (config.M,):
        raise InvalidInputError(f"expected a vector of length {config.M}")
    if np.any(x < 0) or np.any(np.diff(x) < 0):
        raise InvalidInputError("input must be nonnegative and nondecreasing")
    if abs(np.linalg.norm(x) - 1.0) > 1e-9:
        raise InvalidInputError("input must have unit norm")
    exponents = _quantize_exponents(x[None, :], config)[0]
    # exponents are nonincreasing; ascending order is the reverse.
    return StepPoint.from_ascending_levels(tuple(exponents[::-1]), config)


def _quantize_exponents(X: np.ndarray, config: NetConfig) -> np.ndarray:
    """Row-wise level exponents for points of the sector (vectorized)."""
    ascending = config.level_powers[::-1]  # delta^(L-1) .. delta^0 = 1
    idx = np.searchsorted(ascending, X, side="left")
    idx = np.minimum(idx, config.L - 1)  # x <= delta^(L-1) clamps to bottom
    return (config.L - 1) - idx


def prune_check(step: StepPoint, config: NetConfig) -> bool:
    """Necessary conditions on rounded-up quantizations.

    ||psi_hat||^2 >= 1 and delta^2 * sum of psi_hat(m)^2 over entries
    above the bottom level <= 1.  Comparisons use exactly rounded sums
    with no tolerance slack; boundary points are kept.
    """
    sq = config.level_powers**2
    bottom = config.L - 1
    norm_sq = fsum(sq[l] for l in step.exponents)
    top_sq = fsum(sq[l] for l in step.exponents if l < bottom)
    dsq = config.delta * config.delta
    return norm_sq >= 1.0 and dsq * top_sq <= 1.0


def _leaf_passes(levels, sq, bottom, dsq) -> bool:
    """Canonical prune test for one ascending level tuple."""
    norm_sq = fsum(sq[l] for l in levels)
    top_sq = fsum(sq[l] for l in levels if l < bottom)
    return norm_sq >= 1.0 and dsq * top_sq <= 1.0


def _iter_pruned_levels(config: NetConfig) -> Iterator[tuple]:
    """Yield ascending level tuples passing the prune conditions.

    Depth-first over nondecreasing level tuples in lexicographic order,
    cutting subtrees that cannot satisfy either condition: the norm bound
    can only fail harder once the running top-level mass exceeds its cap,
    and a subtree dies when even placing all remaining entries at the
    current level cannot reach unit mass.
    """
    M, L = config.M, config.L
    sq = (config.level_powers**2).tolist()
    bottom = L - 1
    dsq = config.delta * config.delta
    top_cap = 1.0 / dsq

    def rec(lmin: int, t: int, s: float, top: float, prefix: tuple):
        if t == 0:
            near = abs(s - 1.0) <= _BB_MARGIN or abs(dsq * top - 1.0) <= _BB_MARGIN
            if near:
                if _leaf_passes(prefix, sq, bottom, dsq):
                    yield prefix
            elif s >= 1.0 and dsq * top <= 1.0:
                yield prefix
            return
        if top > top_cap + _BB_MARGIN:
            return
        for l in range(lmin, L):
            if s + t * sq[l] < 1.0 - _BB_MARGIN:
                return  # larger l only shrinks the reachable mass
            add_top = sq[l] if l < bottom else 0.0
            yield from rec(l, t - 1, s + sq[l], top + add_top, prefix + (l,))

    yield from rec(0, M, 0.0, 0.0, ())


def pruned_cardinality(config: NetConfig) -> int:
    """Exact number of net points passing :func:`prune_check`.

    Same search tree as :func:`_iter_pruned_levels` but with a closed-form
    count for subtrees that pass both conditions wholesale, so the big
    nets never enumerate their interior.
    """
    M, L = config.M, config.L
    sq = (config.level_powers**2).tolist()
    bottom = L - 1
    dsq = config.delta * config.delta
    top_cap = 1.0 / dsq
    bot_sq = sq[bottom]

    def rec(lmin: int, t: int, s: float, top: float, prefix: tuple) -> int:
        if t == 0:
            near = abs(s - 1.0) <= _BB_MARGIN or abs(dsq * top - 1.0) <= _BB_MARGIN
            if near:
                return 1 if _leaf_passes(prefix, sq, bottom, dsq) else 0
            return 1 if (s >= 1.0 and dsq * top <= 1.0) else 0
        if top > top_cap + _BB_MARGIN:
            return 0
        # Whole-subtree pass: minimum reachable mass already >= 1 and the
        # worst-case top mass still under the cap.
        s_min = s + t * bot_sq
        top_max = top + (t * sq[lmin] if lmin < bottom else 0.0)
        if s_min >= 1.0 + _BB_MARGIN and top_max <= top_cap - _BB_MARGIN:
            return math.comb(L - lmin + t - 1, t)
        total = 0
        for l in range(lmin, L):
            if s + t * sq[l] < 1.0 - _BB_MARGIN:
                break
            add_top = sq[l] if l < bottom else 0.0
            total += rec(l, t - 1, s + sq[l], top + add_top, prefix + (l,))
        return total

    return rec(0, M, 0.0, 0.0, ())


def _unrank_levels(index: int, M: int, L: int) -> tuple:
    """Ascending level tuple at a given lexicographic rank."""
    if not 0 <= index < net_cardinality(M, L):
        raise InvalidInputError(f"rank {index} out of range")
    levels = []
    lmin = 0
    for t in range(M, 0, -1):
        for l in range(lmin, L):
            block = math.comb(L - l + t - 2, t - 1)
            if index < block:
                levels.append(l)
                lmin = l
                break
            index -= block
    return tuple(levels)


def _iter_level_tuples(
    config: NetConfig, start: int = 0, stop: Optional[int] = None
) -> Iterator[tuple]:
    """Ascending level tuples for composition ranks [start, stop)."""
    total = config.cardinality
    if stop is None:
        stop = total
    if not 0 <= start <= stop <= total:
        raise InvalidInputError(f"bad rank range [{start}, {stop})")
    if start == stop:
        return
    if start == 0 and stop == total:
        yield from combinations_with_replacement(range(config.L), config.M)
        return
    first = _unrank_levels(start, config.M, config.L)
    count = stop - start
    # Resume a combinations_with_replacement scan from the unranked tuple.
    current = list(first)
    M, L = config.M, config.L
    while count:
        yield tuple(current)
        count -= 1
        if not count:
            break
        # lexicographic successor of a nondecreasing tuple
        i = M - 1
        while current[i] == L - 1:
            i -= 1
        current[i:] = [current[i] + 1] * (M - i)


def enumerate_net(
    config: NetConfig, start: int = 0, stop: Optional[int] = None
) -> Iterator[StepPoint]:
    """Stream the net points in a fixed deterministic order.

    Compositions are visited in lexicographic order of the ascending
    level-exponent tuple; ``start``/``stop`` select a contiguous rank
    range of the unpruned composition space, so disjoint ranges can be
    consumed independently.  With ``config.pruned`` only points passing
    :func:`prune_check` are yielded (full-range calls use a pruned search
    that skips dead subtrees outright).
    """
    full_range = start == 0 and stop is None
    if config.pruned and full_range:
        for levels in _iter_pruned_levels(config):
            yield StepPoint.from_ascending_levels(levels, config)
        return
    sq = (config.level_powers**2).tolist()
    bottom = config.L - 1
    dsq = config.delta * config.delta
    for levels in _iter_level_tuples(config, start, stop):
        if config.pruned and not _leaf_passes(levels, sq, bottom, dsq):
            continue
        yield StepPoint.from_ascending_levels(levels, config)


def volumetric_bound(M: int, epsilon: float) -> float:
    """Volumetric cover-size bound (1/M!)(M + sqrt(M)/eps)^M.

    Diagnostic only; evaluated in logs to dodge overflow and exponentiated
    at the end.
    """
    if M < 1 or epsilon <= 0:
        raise InvalidInputError(f"need M >= 1 and epsilon > 0")
    return math.exp(volumetric_bound_log(M, epsilon))


def volumetric_bound_log(M: int, epsilon: float) -> float:
    """Natural log of :func:`volumetric_bound`."""
    if M < 1 or epsilon <= 0:
        raise InvalidInputError(f"need M >= 1 and epsilon > 0")
    return M * math.log(M + math.sqrt(M) / epsilon) - math.lgamma(M + 1)


@dataclass(frozen=True)
class CoveringReport:
    trials: int
    min_inner_product: float
    failures: int
    prune_failures: int

    @property
    def ok(self) -> bool:
        return self.failures == 0 and self.prune_failures == 0


def verify_covering(
    config: NetConfig, trials: int, rng_seed: int
) -> CoveringReport:
    """Monte-Carlo check of the covering guarantee.

    Samples uniform sphere points, folds them into the sector, quantizes,
    and verifies <x, psi_x> >= sqrt(1 - eps^2) and that each quantization
    passes the prune conditions.
    """
    rng = np.random.default_rng(rng_seed)
    X = rng.standard_normal((trials, config.M))
    X = np.abs(X)
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    X.sort(axis=1)  # canonical sector representatives
    exponents = _quantize_exponents(X, config)
    psi_hat = config.level_powers[exponents]
    norms = np.linalg.norm(psi_hat, axis=1)
    inner = np.einsum("ij,ij->i", X, psi_hat) / norms
    threshold = math.sqrt(1.0 - config.epsilon_sq)
    failures = int(np.sum(inner < threshold))

    sq_rows = psi_hat**2
    norm_sq = sq_rows.sum(axis=1)
    top_sq = np.where(exponents < config.L - 1, sq_rows, 0.0).sum(axis=1)
    dsq = config.delta * config.delta
    prune_failures = int(np.sum(~((norm_sq >= 1.0) & (dsq * top_sq <= 1.0))))

    return CoveringReport(
        trials=trials,
        min_inner_product=float(inner.min()),
        failures=failures,
        prune_failures=prune_failures,
    )
