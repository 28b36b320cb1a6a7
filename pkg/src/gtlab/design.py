"""Constant-weight random pooling matrices.

Each column of an ``N x t`` matrix has exactly ``W`` ones, placed uniformly at
random using a generator seeded from ``(seed, column index)``.  Columns are
therefore reproducible one at a time and independent of generation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable

import numpy as np

from gtlab.errors import ParameterError

MATRIX_MAGIC = "gtlab-matrix v1"
UINT64_MAX = 2**64 - 1


def weight_for(N: int, w: float) -> int:
    """Number of ones per column: ``round(w * N)`` clamped to ``[1, N - 1]``."""
    return min(max(int(round(w * N)), 1), N - 1)


@dataclass(frozen=True, eq=False)
class TestMatrix:
    """Binary pooling matrix; ``bits[i, j] == 1`` iff item ``j`` is in pool ``i``.

    Items and pools are 0-based.
    """

    __test__ = False  # keep pytest from collecting this class

    N: int
    t: int
    W: int
    w: float
    seed: int
    bits: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.bits.shape != (self.N, self.t):
            raise ParameterError(f"bits shape {self.bits.shape} != ({self.N}, {self.t})")

    @classmethod
    def from_bits(cls, bits, seed: int = 0) -> "TestMatrix":
        """Wrap an explicit 0/1 array; every column must have the same weight."""
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.ndim != 2 or arr.size == 0:
            raise ParameterError("matrix must be a non-empty 2-d array")
        if np.any(arr > 1):
            raise ParameterError("matrix entries must be 0 or 1")
        weights = arr.sum(axis=0)
        if np.any(weights != weights[0]):
            raise ParameterError("columns do not have constant weight")
        N, t = arr.shape
        W = int(weights[0])
        return cls(N=N, t=t, W=W, w=W / N, seed=seed, bits=np.ascontiguousarray(arr))

    def column(self, j: int) -> np.ndarray:
        return self.bits[:, j]

    @cached_property
    def column_masks(self) -> list[int]:
        """Columns as integers, bit ``i`` set iff row ``i`` contains the item."""
        weights = 1 << np.arange(self.N, dtype=object)
        return [int(sum(weights[self.bits[:, j] == 1])) for j in range(self.t)]

    def column_weights(self) -> np.ndarray:
        return self.bits.sum(axis=0)

    @property
    def rate(self) -> float:
        return math.log2(self.t) / self.N if self.t > 1 else 0.0

    def to_text(self) -> str:
        header = f"N={self.N} t={self.t} w={self.w!r} W={self.W} seed={self.seed}"
        rows = ["".join("1" if b else "0" for b in row) for row in self.bits]
        return "\n".join([MATRIX_MAGIC, header, *rows]) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())


def _column_support(N: int, W: int, seed: int, j: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence([seed, j]))
    # partial Fisher-Yates: the first W positions of a random permutation
    idx = np.arange(N)
    for i in range(W):
        k = int(rng.integers(i, N))
        idx[i], idx[k] = idx[k], idx[i]
    return idx[:W]


def gen_matrix(N: int, t: int, w: float, seed: int) -> TestMatrix:
    """Draw an ``N x t`` matrix whose columns are uniform over weight-``W`` columns."""
    if not isinstance(N, (int, np.integer)) or N < 2:
        raise ParameterError(f"N must be an integer >= 2, got {N!r}")
    if not isinstance(t, (int, np.integer)) or t < 1:
        raise ParameterError(f"t must be a positive integer, got {t!r}")
    if not 0.0 < w < 1.0:
        raise ParameterError(f"relative weight must lie in (0, 1), got {w!r}")
    if not 0 <= seed <= UINT64_MAX:
        raise ParameterError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    N, t, seed = int(N), int(t), int(seed)
    W = weight_for(N, w)
    bits = np.zeros((N, t), dtype=np.uint8)
    for j in range(t):
        bits[_column_support(N, W, seed, j), j] = 1
    return TestMatrix(N=N, t=t, W=W, w=float(w), seed=seed, bits=bits)


def recommended_weight(s: int, mode: str = "full") -> float:
    """Relative column weight suited to ``s`` defectives.

    ``partial`` returns ``1 - 2**(-1/s)``; ``full`` returns ``1 - sqrt(2)/2`` for
    ``s == 2`` and the numerically optimal weight of the rate bound otherwise.
    """
    if not isinstance(s, (int, np.integer)) or s < 2:
        raise ParameterError(f"s must be an integer >= 2, got {s!r}")
    if mode == "partial":
        return 1.0 - 2.0 ** (-1.0 / s)
    if mode != "full":
        raise ParameterError(f"mode must be 'full' or 'partial', got {mode!r}")
    if s == 2:
        return 1.0 - math.sqrt(2.0) / 2.0
    from gtlab.rates import theorem2_bound

    return theorem2_bound(int(s)).w_star


def parse_matrix(text: str) -> TestMatrix:
    lines = text.splitlines()
    if len(lines) < 2 or lines[0].strip() != MATRIX_MAGIC:
        raise ParameterError("not a gtlab-matrix v1 file")
    try:
        header = dict(item.split("=", 1) for item in lines[1].split())
        N, t, W = int(header["N"]), int(header["t"]), int(header["W"])
        w, seed = float(header["w"]), int(header["seed"])
    except (KeyError, ValueError) as exc:
        raise ParameterError(f"malformed matrix header: {lines[1]!r}") from exc
    rows = lines[2:]
    if len(rows) != N:
        raise ParameterError(f"expected {N} rows, found {len(rows)}")
    if any(len(r) != t or set(r) - {"0", "1"} for r in rows):
        raise ParameterError("matrix rows must be length-t strings over {0,1}")
    bits = np.array([[c == "1" for c in r] for r in rows], dtype=np.uint8).reshape(N, t)
    if np.any(bits.sum(axis=0) != W):
        raise ParameterError(f"column weights differ from declared W={W}")
    return TestMatrix(N=N, t=t, W=W, w=w, seed=seed, bits=bits)


def load_matrix(path) -> TestMatrix:
    return parse_matrix(Path(path).read_text())


def identity_matrix(t: int) -> TestMatrix:
    return TestMatrix.from_bits(np.eye(t, dtype=np.uint8))


def stack_columns(columns: Iterable[Iterable[int]]) -> TestMatrix:
    """Build a matrix from an iterable of 0/1 columns."""
    return TestMatrix.from_bits(np.array(list(columns), dtype=np.uint8).T)
