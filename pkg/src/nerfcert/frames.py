"""Signed-permutation-invariant unit-norm tight frames.

A frame here is an M x N real matrix whose columns are unit vectors.  The
frames built by :func:`orbit_signed_permutations` are orbits of a sparse
generator (k entries equal to 1/sqrt(k)) under the group of signed
permutation matrices, keeping one representative per +/- pair.  Such
orbits are unit norm tight frames because the signed permutation group is
irreducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .errors import InvalidInputError, InvalidSpecError

UNIT_NORM_TOL = 1e-12
TIGHT_TOL = 1e-9

__all__ = [
    "GeneratorSpec",
    "FrameMatrix",
    "GroupDescriptor",
    "UntfReport",
    "orbit_signed_permutations",
    "verify_untf",
    "verify_group_invariance",
    "canonicalize",
    "read_frame",
    "write_frame",
]


@dataclass(frozen=True)
class GeneratorSpec:
    """Sparse orbit generator: k entries of 1/sqrt(k) in dimension M."""

    M: int
    k: int

    def __post_init__(self):
        if self.M < 1:
            raise InvalidSpecError(f"dimension M must be positive, got {self.M}")
        if not 1 <= self.k <= self.M:
            raise InvalidSpecError(
                f"support size k must satisfy 1 <= k <= M, got k={self.k}, M={self.M}"
            )

    def generator(self) -> np.ndarray:
        """Unit-norm generator vector: k leading entries 1/sqrt(k)."""
        g = np.zeros(self.M)
        g[: self.k] = 1.0 / math.sqrt(self.k)
        return g

    @property
    def orbit_size(self) -> int:
        """Number of signed permutations distinct modulo negation."""
        return 2 ** (self.k - 1) * math.comb(self.M, self.k)


@dataclass(frozen=True)
class GroupDescriptor:
    """The group of M x M signed permutation matrices."""

    M: int

    @property
    def order(self) -> int:
        # Python ints are arbitrary precision, so 2^M * M! never overflows.
        return (1 << self.M) * math.factorial(self.M)


@dataclass
class FrameMatrix:
    """An M x N matrix of unit-norm columns.

    ``tight_constant`` is N/M for tight frames and is only meaningful when
    :func:`verify_untf` reports tightness.
    """

    matrix: np.ndarray  # shape (M, N)

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=float)
        if self.matrix.ndim != 2 or self.matrix.size == 0:
            raise InvalidInputError("frame must be a nonempty 2-D array")

    @property
    def M(self) -> int:
        return self.matrix.shape[0]

    @property
    def N(self) -> int:
        return self.matrix.shape[1]

    @property
    def tight_constant(self) -> float:
        return self.N / self.M

    def columns(self) -> np.ndarray:
        """Columns as an (N, M) array of row vectors."""
        return self.matrix.T


@dataclass(frozen=True)
class UntfReport:
    is_unit_norm: bool
    is_tight: bool
    frobenius_defect: float
    max_norm_defect: float


def orbit_signed_permutations(spec: GeneratorSpec) -> FrameMatrix:
    """All signed permutations of the generator, distinct modulo negation.

    Columns are emitted with support sets in lexicographic order; within a
    support, the entry at the smallest index is forced positive and the
    remaining k-1 signs run in binary order (0 bit = +).  The column count
    is 2^(k-1) * C(M, k).
    """
    M, k = spec.M, spec.k
    value = 1.0 / math.sqrt(k)
    cols = []
    for support in combinations(range(M), k):
        for signs in product((1.0, -1.0), repeat=k - 1):
            col = np.zeros(M)
            col[support[0]] = value
            for idx, s in zip(support[1:], signs):
                col[idx] = s * value
            cols.append(col)
    return FrameMatrix(np.column_stack(cols))


def verify_untf(frame: FrameMatrix, tol: float = TIGHT_TOL) -> UntfReport:
    """Check unit norms and tightness of the frame operator.

    Tight means ||Phi Phi* - (N/M) I||_F <= tol.
    """
    phi = frame.matrix
    norms = np.linalg.norm(phi, axis=0)
    max_norm_defect = float(np.max(np.abs(norms - 1.0)))
    gram = phi @ phi.T
    defect = float(
        np.linalg.norm(gram - frame.tight_constant * np.eye(frame.M))
    )
    return UntfReport(
        is_unit_norm=max_norm_defect <= UNIT_NORM_TOL,
        is_tight=defect <= tol,
        frobenius_defect=defect,
        max_norm_defect=max_norm_defect,
    )


def _column_keys(phi: np.ndarray, decimals: int = 9) -> set:
    """Hashable column representatives modulo negation."""
    keys = set()
    for col in phi.T:
        nz = np.flatnonzero(np.round(col, decimals))
        if nz.size and col[nz[0]] < 0:
            col = -col
        keys.add(tuple(np.round(col, decimals)))
    return keys


def verify_group_invariance(
    frame: FrameMatrix, trials: int = 100, rng_seed: int = 0
) -> bool:
    """Spot-check invariance under random signed permutations.

    For each trial U, the set {U phi_n} must equal {phi_n} modulo negation.
    """
    rng = np.random.default_rng(rng_seed)
    phi = frame.matrix
    base = _column_keys(phi)
    for _ in range(trials):
        perm = rng.permutation(frame.M)
        signs = rng.choice((-1.0, 1.0), size=frame.M)
        acted = signs[:, None] * phi[perm, :]
        if _column_keys(acted) != base:
            return False
    return True


def canonicalize(x: np.ndarray) -> np.ndarray:
    """Map x to its signed-permutation-orbit representative.

    Returns |x| sorted nondecreasingly, the unique orbit point with
    nonnegative nondecreasing entries.  Norm is preserved.
    """
    x = np.asarray(x, dtype=float)
    if not np.any(x):
        raise InvalidInputError("cannot canonicalize the zero vector")
    return np.sort(np.abs(x))


def write_frame(frame: FrameMatrix, path) -> None:
    """Write the plain-text frame format: 'M N' then one column per line."""
    with open(path, "w") as fh:
        fh.write(f"{frame.M} {frame.N}\n")
        for col in frame.matrix.T:
            fh.write(" ".join(f"{v:.17g}" for v in col) + "\n")


def read_frame(path) -> FrameMatrix:
    """Read the plain-text frame format, rejecting mismatched counts."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise InvalidInputError(f"{path}: expected header 'M N'")
        m, n = int(header[0]), int(header[1])
        rows = []
        for line in fh:
            if not line.strip():
                continue
            vals = [float(v) for v in line.split()]
            if len(vals) != m:
                raise InvalidInputError(
                    f"{path}: column with {len(vals)} entries, expected {m}"
                )
            rows.append(vals)
    if len(rows) != n:
        raise InvalidInputError(f"{path}: found {len(rows)} columns, expected {n}")
    return FrameMatrix(np.array(rows).T)
