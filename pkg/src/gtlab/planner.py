"""Two-stage search: pool with a matrix, decode candidates, retest singly."""

from __future__ import annotations

import json
from dataclasses import dataclass

from gtlab.decoder import (DEFAULT_EDGE_CAP, CandidateHypergraph, Edge,
                           candidate_edges, non_isolated_vertices)
from gtlab.design import TestMatrix
from gtlab.errors import ParameterError
from gtlab.pooling import DefectiveOracle


@dataclass
class TwoStageResult:
    found: list[int]
    stage1_tests: int
    stage2_tests: int
    candidate_edge_count: int
    mode: str

    @property
    def total_tests(self) -> int:
        return self.stage1_tests + self.stage2_tests

    def to_dict(self, t: int, s: int) -> dict:
        # 1-based item indices in every external format
        return {
            "mode": self.mode,
            "t": t,
            "s": s,
            "N": self.stage1_tests,
            "found": [v + 1 for v in self.found],
            "stage1_tests": self.stage1_tests,
            "stage2_tests": self.stage2_tests,
            "candidate_edges": self.candidate_edge_count,
        }

    def to_json(self, t: int, s: int) -> str:
        return json.dumps(self.to_dict(t, s))


def _retest(oracle: DefectiveOracle, vertices: list[int]) -> list[int]:
    return [v for v in vertices if oracle.individual_test(v)]


def run_two_stage(X: TestMatrix, s: int, oracle: DefectiveOracle,
                  max_edges: int = DEFAULT_EDGE_CAP) -> TwoStageResult:
    """Find the whole defective set.

    Correct for any matrix: the true set is always an edge of the candidate
    hypergraph, so every defective is among the retested vertices.
    """
    y = oracle.stage1(X)
    H = candidate_edges(X, s, y, max_edges=max_edges)
    tested = non_isolated_vertices(H)
    return TwoStageResult(found=_retest(oracle, tested), stage1_tests=X.N,
                          stage2_tests=len(tested), candidate_edge_count=len(H.edges),
                          mode="full")


def greedy_E1(H: CandidateHypergraph, s: int | None = None) -> list[Edge]:
    """Maximal family of edges pairwise sharing at most ``s // 2`` vertices.

    Edges are considered in lexicographic order.
    """
    s = H.s if s is None else s
    limit = s // 2
    chosen: list[Edge] = []
    chosen_sets: list[frozenset] = []
    for e in sorted(H.edges):
        es = frozenset(e)
        if all(len(es & f) <= limit for f in chosen_sets):
            chosen.append(e)
            chosen_sets.append(es)
    return chosen


def run_partial(X: TestMatrix, s: int, oracle: DefectiveOracle,
                max_edges: int = DEFAULT_EDGE_CAP) -> TwoStageResult:
    """Find at least ``s // 2 + 1`` defectives, never reporting a non-defective.

    Only the vertices of the greedy family are retested.  Every candidate edge
    meets that family in more than ``s // 2`` vertices, the true set included.
    """
    y = oracle.stage1(X)
    H = candidate_edges(X, s, y, max_edges=max_edges)
    E1 = greedy_E1(H, s)
    tested = sorted({v for e in E1 for v in e})
    return TwoStageResult(found=_retest(oracle, tested), stage1_tests=X.N,
                          stage2_tests=len(tested), candidate_edge_count=len(H.edges),
                          mode="partial")


def run(X: TestMatrix, s: int, oracle: DefectiveOracle, mode: str = "full",
        max_edges: int = DEFAULT_EDGE_CAP) -> TwoStageResult:
    if mode == "full":
        return run_two_stage(X, s, oracle, max_edges)
    if mode == "partial":
        return run_partial(X, s, oracle, max_edges)
    raise ParameterError(f"unknown mode {mode!r}")
