import json
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gtlab.decoder import (CandidateHypergraph, candidate_edges, compatible_columns,
                           non_isolated_vertices)
from gtlab.design import gen_matrix, identity_matrix, stack_columns
from gtlab.errors import EdgeCapExceeded
from gtlab.pooling import DefectiveOracle, OutcomeVector, outcome_vector
from oracles import brute_force_edges


def test_compatible_all_ones():
    X = gen_matrix(8, 12, 0.3, 42)
    assert compatible_columns(X, OutcomeVector(8, 2**8 - 1)) == list(range(12))


def test_compatible_all_zeros():
    X = gen_matrix(8, 12, 0.3, 42)
    assert compatible_columns(X, OutcomeVector(8, 0)) == []


def test_compatible_seed42_scan():
    X = gen_matrix(8, 12, 0.3, 42)
    y_bits = X.bits[:, 3] | X.bits[:, 7]
    y = OutcomeVector.from_bits(y_bits)
    expected = [j for j in range(12) if np.all(X.bits[:, j] <= y_bits)]
    got = compatible_columns(X, y)
    assert got == expected
    assert {3, 7} <= set(got)


def test_identity_pair():
    H = candidate_edges(identity_matrix(3), 2, OutcomeVector.from_string("110"))
    assert H.edges == [(0, 1)]


def test_zero_outcome_has_no_edges():
    X = gen_matrix(8, 12, 0.3, 42)
    assert candidate_edges(X, 2, OutcomeVector(8, 0)).edges == []


def test_exhaustive_t14_s3():
    X = gen_matrix(10, 14, 0.3, 5)
    y = DefectiveOracle(14, [1, 6, 11]).stage1(X)
    H = candidate_edges(X, 3, y)
    assert H.edges == brute_force_edges(X.bits, 3, y.bits)
    assert (1, 6, 11) in H.edges
    union = set()
    for e in brute_force_edges(X.bits, 3, y.bits):
        union |= set(e)
    assert non_isolated_vertices(H) == sorted(union)


@given(seed=st.integers(0, 10_000), t=st.integers(2, 12), N=st.integers(3, 9),
       s=st.integers(1, 3), data=st.data())
def test_matches_brute_force(seed, t, N, s, data):
    s = min(s, t)
    X = gen_matrix(N, t, 0.3, seed)
    hidden = data.draw(st.sets(st.integers(0, t - 1), min_size=s, max_size=s))
    y = outcome_vector(X, hidden)
    H = candidate_edges(X, s, y)
    assert H.edges == brute_force_edges(X.bits, s, y.bits)
    assert tuple(sorted(hidden)) in H.edges
    assert all(set(e) <= set(compatible_columns(X, y)) for e in H.edges)


def test_hypergraph_invariants():
    X = gen_matrix(12, 30, 0.25, 9)
    y = DefectiveOracle(30, [2, 9, 17]).stage1(X)
    H = candidate_edges(X, 3, y)
    assert H.edges == sorted(set(H.edges))
    for e in H.edges:
        assert list(e) == sorted(e) and len(e) == 3
        assert outcome_vector(X, e) == y


def test_edge_cap():
    X = stack_columns([[1, 0]] * 10)  # ten identical columns
    y = OutcomeVector.from_string("10")
    with pytest.raises(EdgeCapExceeded):
        candidate_edges(X, 2, y, max_edges=10)
    assert len(candidate_edges(X, 2, y, max_edges=45).edges) == 45


def test_non_isolated():
    assert non_isolated_vertices(CandidateHypergraph.from_edges([], s=2)) == []
    assert non_isolated_vertices(CandidateHypergraph.from_edges([(1, 2)])) == [1, 2]


def test_json_dump_is_one_based():
    H = candidate_edges(identity_matrix(3), 2, OutcomeVector.from_string("110"))
    doc = json.loads(H.to_json())
    assert doc == {"t": 3, "s": 2, "y": "110", "edges": [[1, 2]]}
    back = CandidateHypergraph.from_json(H.to_json())
    assert back.edges == H.edges and back.y == H.y


def test_random_outcomes_match_brute_force():
    rng = random.Random(77)
    for _ in range(50):
        t, N, s = rng.randint(3, 12), rng.randint(3, 8), rng.randint(1, 3)
        X = gen_matrix(N, t, rng.uniform(0.1, 0.7), rng.randrange(2**32))
        y_bits = np.array([rng.random() < 0.6 for _ in range(N)], dtype=np.uint8)
        H = candidate_edges(X, s, OutcomeVector.from_bits(y_bits))
        assert H.edges == brute_force_edges(X.bits, s, y_bits)
