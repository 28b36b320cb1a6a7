"""Two-stage group testing: constant-weight pooling, candidate-hypergraph
decoding, structural code checks and numeric rate bounds."""

from gtlab.decoder import CandidateHypergraph, candidate_edges, compatible_columns, non_isolated_vertices
from gtlab.design import TestMatrix, gen_matrix, recommended_weight
from gtlab.errors import CapacityError, DomainError, EdgeCapExceeded, ParameterError
from gtlab.planner import TwoStageResult, greedy_E1, run_partial, run_two_stage
from gtlab.pooling import DefectiveOracle, OutcomeVector, outcome_vector

__all__ = [
    "CandidateHypergraph", "CapacityError", "DefectiveOracle", "DomainError",
    "EdgeCapExceeded", "OutcomeVector", "ParameterError", "TestMatrix",
    "TwoStageResult", "candidate_edges", "compatible_columns", "gen_matrix",
    "greedy_E1", "non_isolated_vertices", "outcome_vector", "recommended_weight",
    "run_partial", "run_two_stage",
]
