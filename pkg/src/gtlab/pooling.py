"""Outcome vectors and a counting oracle that hides the defective set."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from gtlab.design import TestMatrix
from gtlab.errors import ParameterError


@dataclass(frozen=True)
class OutcomeVector:
    """Test results of one stage, stored as an integer (bit ``i`` = pool ``i``)."""

    N: int
    mask: int

    @property
    def weight(self) -> int:
        return bin(self.mask).count("1")

    @property
    def bits(self) -> np.ndarray:
        return np.array([(self.mask >> i) & 1 for i in range(self.N)], dtype=np.uint8)

    def to_string(self) -> str:
        return "".join("1" if (self.mask >> i) & 1 else "0" for i in range(self.N))

    @classmethod
    def from_string(cls, text: str) -> "OutcomeVector":
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ParameterError(f"outcome must be a non-empty 0/1 string, got {text!r}")
        mask = sum(1 << i for i, c in enumerate(text) if c == "1")
        return cls(N=len(text), mask=mask)

    @classmethod
    def from_bits(cls, bits) -> "OutcomeVector":
        arr = np.asarray(bits).ravel()
        return cls(N=len(arr), mask=sum(1 << i for i, b in enumerate(arr) if b))


def _check_items(items: Iterable[int], t: int) -> list[int]:
    items = [int(j) for j in items]
    for j in items:
        if not 0 <= j < t:
            raise ParameterError(f"item index {j} outside [0, {t})")
    return items


def outcome_vector(X: TestMatrix, S: Iterable[int]) -> OutcomeVector:
    """Componentwise OR of the columns of ``X`` indexed by ``S``."""
    mask = 0
    cols = X.column_masks
    for j in _check_items(S, X.t):
        mask |= cols[j]
    return OutcomeVector(N=X.N, mask=mask)


class DefectiveOracle:
    """Answers pool tests against a hidden defective set and counts them.

    Stage-1 matrix rows count as pool tests; single-item retests are counted
    both as pool tests and in ``individual_tests``.
    """

    def __init__(self, t: int, defectives: Iterable[int]):
        self.t = int(t)
        hidden = frozenset(_check_items(defectives, self.t))
        self._hidden = hidden
        self.s = len(hidden)
        self.pool_tests = 0
        self.individual_tests = 0
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return (f"DefectiveOracle(t={self.t}, s={self.s}, pool_tests={self.pool_tests}, "
                f"individual_tests={self.individual_tests})")

    def pool_test(self, pool: Iterable[int]) -> int:
        pool = _check_items(pool, self.t)
        with self._lock:
            self.pool_tests += 1
        return int(any(j in self._hidden for j in pool))

    def individual_test(self, v: int) -> int:
        answer = self.pool_test([v])
        with self._lock:
            self.individual_tests += 1
        return answer

    def stage1(self, X: TestMatrix) -> OutcomeVector:
        """Run every row of ``X`` as a pool, in parallel."""
        if X.t != self.t:
            raise ParameterError(f"matrix has {X.t} columns, oracle universe is {self.t}")
        cols = X.column_masks
        mask = 0
        for j in self._hidden:
            mask |= cols[j]
        with self._lock:
            self.pool_tests += X.N
        return OutcomeVector(N=X.N, mask=mask)

    @property
    def total_tests(self) -> int:
        return self.pool_tests


def oracle_pool_test(oracle: DefectiveOracle, pool: Iterable[int]) -> int:
    return oracle.pool_test(pool)


def oracle_stage1(oracle: DefectiveOracle, X: TestMatrix) -> OutcomeVector:
    return oracle.stage1(X)
