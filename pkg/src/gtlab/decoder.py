"""Candidate hypergraph: every s-set of items consistent with an outcome."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from gtlab.design import TestMatrix
from gtlab.errors import EdgeCapExceeded, ParameterError
from gtlab.pooling import OutcomeVector

DEFAULT_EDGE_CAP = 10**6

Edge = tuple[int, ...]


@dataclass
class CandidateHypergraph:
    t: int
    s: int
    edges: list[Edge]
    y: Optional[OutcomeVector] = None
    compatible: list[int] = field(default_factory=list, repr=False)

    @classmethod
    def from_edges(cls, edges: Iterable[Iterable[int]], s: int | None = None,
                   t: int | None = None) -> "CandidateHypergraph":
        """Hypergraph from explicit edges (normalised, deduplicated, sorted)."""
        norm = sorted({tuple(sorted(int(v) for v in e)) for e in edges})
        sizes = {len(e) for e in norm}
        if s is None:
            if len(sizes) > 1:
                raise ParameterError("edges have mixed sizes")
            s = sizes.pop() if sizes else 0
        elif sizes - {s}:
            raise ParameterError(f"hypergraph is not {s}-uniform")
        for e in norm:
            if len(set(e)) != len(e):
                raise ParameterError(f"edge {e} repeats a vertex")
        if t is None:
            t = 1 + max((max(e) for e in norm if e), default=-1)
        return cls(t=t, s=s, edges=norm)

    def to_json(self) -> str:
        """Dump with 1-based vertex indices."""
        doc = {
            "t": self.t,
            "s": self.s,
            "y": self.y.to_string() if self.y is not None else None,
            "edges": [[v + 1 for v in e] for e in self.edges],
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "CandidateHypergraph":
        doc = json.loads(text)
        y = OutcomeVector.from_string(doc["y"]) if doc.get("y") else None
        edges = [tuple(v - 1 for v in e) for e in doc["edges"]]
        return cls(t=doc["t"], s=doc["s"], edges=edges, y=y)


def compatible_columns(X: TestMatrix, y: OutcomeVector) -> list[int]:
    """Items whose column support lies inside the support of ``y``."""
    if y.N != X.N:
        raise ParameterError(f"outcome length {y.N} != matrix rows {X.N}")
    ymask = y.mask
    return [j for j, c in enumerate(X.column_masks) if c & ~ymask == 0]


def candidate_edges(X: TestMatrix, s: int, y: OutcomeVector,
                    max_edges: int = DEFAULT_EDGE_CAP) -> CandidateHypergraph:
    """All ``s``-subsets of items whose columns OR to exactly ``y``.

    Depth-first over compatible columns in increasing order.  A branch is cut
    as soon as the columns still available cannot cover the rest of ``y``.
    """
    if s < 1:
        raise ParameterError(f"s must be >= 1, got {s}")
    comp = compatible_columns(X, y)
    cols = [X.column_masks[j] for j in comp]
    n = len(comp)
    target = y.mask
    # suffix[i] = OR of cols[i:], used as the coverage bound
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] | cols[i]

    edges: list[Edge] = []
    chosen: list[int] = []

    def dfs(start: int, cur: int) -> None:
        need = s - len(chosen)
        if need == 0:
            if cur == target:
                if len(edges) >= max_edges:
                    raise EdgeCapExceeded(f"more than {max_edges} candidate edges")
                edges.append(tuple(chosen))
            return
        for i in range(start, n - need + 1):
            if cur | suffix[i] != target:
                break
            chosen.append(comp[i])
            dfs(i + 1, cur | cols[i])
            chosen.pop()

    if n >= s:
        dfs(0, 0)
    return CandidateHypergraph(t=X.t, s=s, edges=edges, y=y, compatible=comp)


def non_isolated_vertices(H: CandidateHypergraph) -> list[int]:
    return sorted({v for e in H.edges for v in e})
