"""Structural certificates for stage-1 matrices.

A matrix is a good first stage when no candidate hypergraph contains ``L``
edges whose pairwise intersections are all the same ``k``-set (a sunflower
with a ``k``-element core).  For pairs (``s == 2``) these are a star of
degree ``L`` (``k = 1``) and a matching of size ``L`` (``k = 0``).
"""

from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from gtlab.decoder import CandidateHypergraph, Edge
from gtlab.design import TestMatrix
from gtlab.errors import CapacityError, ParameterError
from gtlab.pooling import OutcomeVector

DEFAULT_SUBSET_CAP = 5_000_000


@dataclass(frozen=True)
class BadConfiguration:
    k: int
    core: tuple[int, ...]
    edges: tuple[Edge, ...]

    def verify(self) -> bool:
        """Re-check pairwise intersections from scratch."""
        core = set(self.core)
        if len(core) != self.k:
            return False
        return all(set(a) & set(b) == core for a, b in combinations(self.edges, 2))

    def to_dict(self) -> dict:
        return {"k": self.k, "core": [v + 1 for v in self.core],
                "edges": [[v + 1 for v in e] for e in self.edges]}


@dataclass
class GoodCodeReport:
    is_good: bool
    L: int
    K: tuple[int, ...]
    outcomes_checked: int
    witness: Optional[BadConfiguration] = None
    witness_outcome: Optional[OutcomeVector] = None

    def to_dict(self) -> dict:
        return {
            "is_good": self.is_good,
            "L": self.L,
            "K": list(self.K),
            "outcomes_checked": self.outcomes_checked,
            "witness": None if self.witness is None else {
                **self.witness.to_dict(), "outcome": self.witness_outcome.to_string()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def max_degree(H: CandidateHypergraph) -> tuple[int, Optional[int]]:
    """Largest vertex degree and the smallest vertex attaining it."""
    deg: dict[int, int] = defaultdict(int)
    for e in H.edges:
        for v in e:
            deg[v] += 1
    if not deg:
        return 0, None
    best = max(deg.values())
    return best, min(v for v, d in deg.items() if d == best)


def _greedy_matching(edges: list[Edge]) -> int:
    used: set[int] = set()
    size = 0
    for u, v in edges:
        if u not in used and v not in used:
            used.update((u, v))
            size += 1
    return size


def max_matching_size(G: CandidateHypergraph) -> int:
    """Exact maximum matching of a graph by branch and bound.

    Branches on the lowest live vertex (left unmatched, or matched to each
    live neighbour).  Bounded above by half the live vertices and by the
    number of live edges; seeded with a greedy matching.
    """
    if G.s != 2 or any(len(e) != 2 for e in G.edges):
        raise ParameterError("maximum matching needs a 2-uniform hypergraph")
    edges = sorted({tuple(sorted(e)) for e in G.edges})
    if not edges:
        return 0
    index = {v: i for i, v in enumerate(sorted({v for e in edges for v in e}))}
    n = len(index)
    adj = [0] * n
    for a, b in edges:
        i, j = index[a], index[b]
        adj[i] |= 1 << j
        adj[j] |= 1 << i

    best = _greedy_matching(edges)
    ceiling = n // 2
    seen: dict[int, int] = {}

    def live(mask: int) -> tuple[int, int]:
        """Drop vertices with no neighbour inside ``mask``; count live edges."""
        out, deg_sum = 0, 0
        m = mask
        while m:
            low = m & -m
            d = (adj[low.bit_length() - 1] & mask).bit_count()
            if d:
                out |= low
                deg_sum += d
            m ^= low
        return out, deg_sum // 2

    def search(mask: int, size: int) -> None:
        nonlocal best
        if best == ceiling:
            return
        mask, n_edges = live(mask)
        if size + min(mask.bit_count() // 2, n_edges) <= best:
            return
        if seen.get(mask, -1) >= size:
            return
        seen[mask] = size
        low = mask & -mask
        nbrs = adj[low.bit_length() - 1] & mask
        while nbrs:
            b = nbrs & -nbrs
            best = max(best, size + 1)
            search(mask & ~low & ~b, size + 1)
            nbrs ^= b
        search(mask & ~low, size)

    search((1 << n) - 1, 0)
    return best


def _disjoint_family(petals: list[int], L: int) -> Optional[list[int]]:
    """Indices of ``L`` pairwise disjoint bitmasks, found by backtracking."""
    n = len(petals)
    pick: list[int] = []

    def go(start: int, used: int) -> bool:
        if len(pick) == L:
            return True
        for i in range(start, n - (L - len(pick)) + 1):
            if petals[i] & used == 0:
                pick.append(i)
                if go(i + 1, used | petals[i]):
                    return True
                pick.pop()
        return False

    return list(pick) if go(0, 0) else None


def find_bad_configuration(H: CandidateHypergraph, L: int, k: int) -> Optional[BadConfiguration]:
    """Return ``L`` edges pairwise meeting in one common ``k``-set, if any exist.

    Edges are bucketed by each of their ``k``-subsets.  Inside a bucket with at
    least ``L`` edges the remainders ``e - U`` must be pairwise disjoint, since
    the intersections have to equal the core exactly.
    """
    s = H.s
    if L < 2:
        raise ParameterError(f"L must be >= 2, got {L}")
    if not 0 <= k <= s - 1:
        raise ParameterError(f"k must lie in [0, {s - 1}], got {k}")
    buckets: dict[tuple[int, ...], list[Edge]] = defaultdict(list)
    for e in H.edges:
        for core in combinations(e, k):
            buckets[core].append(e)
    for core in sorted(buckets):
        members = buckets[core]
        if len(members) < L:
            continue
        core_set = set(core)
        petals = [sum(1 << v for v in e if v not in core_set) for e in members]
        pick = _disjoint_family(petals, L)
        if pick is not None:
            return BadConfiguration(k=k, core=core, edges=tuple(members[i] for i in pick))
    return None


def outcome_groups(X: TestMatrix, s: int,
                   max_subsets: int = DEFAULT_SUBSET_CAP) -> dict[int, list[Edge]]:
    """Every attainable outcome (as a mask) mapped to its candidate edges."""
    if s < 1 or s > X.t:
        raise ParameterError(f"need 1 <= s <= t, got s={s}, t={X.t}")
    total = math.comb(X.t, s)
    if total > max_subsets:
        raise CapacityError(f"C({X.t},{s}) = {total} subsets exceeds cap {max_subsets}")
    cols = X.column_masks
    groups: dict[int, list[Edge]] = defaultdict(list)
    for S in combinations(range(X.t), s):
        mask = 0
        for j in S:
            mask |= cols[j]
        groups[mask].append(S)
    return groups


def is_good_code(X: TestMatrix, s: int, L: int, K: Iterable[int],
                 max_subsets: int = DEFAULT_SUBSET_CAP) -> GoodCodeReport:
    """Check that no attainable outcome admits an ``(s, L, k)`` sunflower, k in K.

    Outcomes that no ``s``-set produces have empty candidate hypergraphs, so
    only attainable ones are scanned.
    """
    K = tuple(sorted(set(int(k) for k in K)))
    if any(not 0 <= k <= s - 1 for k in K):
        raise ParameterError(f"K must be a subset of [0, {s - 1}], got {K}")
    groups = outcome_groups(X, s, max_subsets)
    checked = 0
    for mask in sorted(groups, key=lambda m: OutcomeVector(X.N, m).to_string()):
        checked += 1
        edges = groups[mask]
        if len(edges) < L:
            continue
        H = CandidateHypergraph(t=X.t, s=s, edges=edges, y=OutcomeVector(X.N, mask))
        for k in K:
            witness = find_bad_configuration(H, L, k)
            if witness is not None:
                return GoodCodeReport(False, L, K, checked, witness, H.y)
    return GoodCodeReport(True, L, K, checked)


def edge_bound_check(G: CandidateHypergraph, L: int) -> bool:
    """Whether the instance agrees with the bound: degree and matching
    below ``L`` force fewer than ``2 L**2`` edges."""
    if G.s != 2:
        raise ParameterError("edge bound applies to graphs (s == 2)")
    degree, _ = max_degree(G)
    if degree >= L or max_matching_size(G) >= L:
        return True
    return len(G.edges) < 2 * L * L
