"""Monte Carlo / exhaustive recovery experiments with reproducible seeds."""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Optional

import numpy as np

from gtlab.decoder import DEFAULT_EDGE_CAP
from gtlab.design import TestMatrix, gen_matrix, recommended_weight
from gtlab.errors import CapacityError, ParameterError
from gtlab.planner import run
from gtlab.pooling import DefectiveOracle

EXHAUSTIVE_CAP = 10**6


@dataclass
class ExperimentConfig:
    t: int
    s: int
    N: int
    w: float
    mode: str = "full"
    trials: int = 1000
    seed: int = 0
    exhaustive: bool = False
    max_edges: int = DEFAULT_EDGE_CAP

    @classmethod
    def from_rate(cls, t: int, s: int, rate: float, **kw) -> "ExperimentConfig":
        if rate <= 0:
            raise ParameterError(f"rate must be positive, got {rate}")
        N = math.ceil(math.log2(t) / rate - 1e-9)
        return cls(t=t, s=s, N=N, **kw)


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    trials: int
    successes: int
    partial_found_histogram: dict[int, int]
    stage2_histogram: dict[int, int]
    empirical_rate: Optional[float]
    mean_total_tests: Optional[float]
    wall_time: Optional[float] = None
    failures: list[list[int]] = field(default_factory=list)

    def to_dict(self, deterministic: bool = False) -> dict:
        c = self.config
        doc = {
            "config": {"t": c.t, "s": c.s, "N": c.N, "w": _fmt(c.w), "mode": c.mode,
                       "trials": self.trials, "seed": c.seed, "exhaustive": c.exhaustive},
            "successes": self.successes,
            "trials": self.trials,
            "partial_found_histogram": {str(k): v for k, v in sorted(self.partial_found_histogram.items())},
            "stage2_histogram": {str(k): v for k, v in sorted(self.stage2_histogram.items())},
            "empirical_rate": _fmt(self.empirical_rate),
            "mean_total_tests": _fmt(self.mean_total_tests),
            "failures": self.failures,
        }
        if not deterministic:
            doc["wall_time"] = _fmt(self.wall_time)
        return doc


def _fmt(x):
    if x is None:
        return None
    return float(f"{x:.12g}")


def trial_defectives(seed: int, index: int, t: int, s: int) -> list[int]:
    """Hidden set of trial ``index``; depends only on ``(seed, index)``."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
    return sorted(int(v) for v in rng.choice(t, size=s, replace=False))


def _hidden_sets(config: ExperimentConfig) -> Iterator[list[int]]:
    if config.exhaustive:
        yield from (list(S) for S in combinations(range(config.t), config.s))
    else:
        for i in range(config.trials):
            yield trial_defectives(config.seed, i, config.t, config.s)


def run_experiment(config: ExperimentConfig, X: TestMatrix | None = None) -> ExperimentReport:
    """Run every trial against one stage-1 matrix (seeded by ``config.seed``)."""
    if config.s < 1 or config.s > config.t:
        raise CapacityError(f"cannot hide s={config.s} defectives among t={config.t} items")
    if config.mode not in ("full", "partial"):
        raise ParameterError(f"mode must be 'full' or 'partial', got {config.mode!r}")
    if config.exhaustive:
        n_sets = math.comb(config.t, config.s)
        if n_sets > EXHAUSTIVE_CAP:
            raise CapacityError(f"C({config.t},{config.s}) = {n_sets} hidden sets exceeds {EXHAUSTIVE_CAP}")
        config.trials = n_sets
    if X is None:
        X = gen_matrix(config.N, config.t, config.w, config.seed)
    elif (X.N, X.t) != (config.N, config.t):
        raise ParameterError("matrix shape does not match the configuration")

    need = config.s // 2 + 1 if config.mode == "partial" else config.s
    found_hist: Counter = Counter()
    stage2_hist: Counter = Counter()
    successes = 0
    failures: list[list[int]] = []
    start = time.perf_counter()
    for hidden in _hidden_sets(config):
        oracle = DefectiveOracle(config.t, hidden)
        res = run(X, config.s, oracle, config.mode, config.max_edges)
        truth = set(hidden)
        ok = set(res.found) <= truth and len(res.found) >= need
        if config.mode == "full":
            ok = ok and set(res.found) == truth
        successes += ok
        if not ok:
            failures.append([v + 1 for v in hidden])
        found_hist[len(res.found)] += 1
        stage2_hist[res.stage2_tests] += 1
    elapsed = time.perf_counter() - start

    trials = sum(stage2_hist.values())
    if trials:
        worst = config.N + max(stage2_hist)
        rate = math.log2(config.t) / worst if config.t > 1 else 0.0
        mean_total = config.N + sum(k * v for k, v in stage2_hist.items()) / trials
    else:
        rate = mean_total = None
    return ExperimentReport(config=config, trials=trials, successes=successes,
                            partial_found_histogram=dict(found_hist),
                            stage2_histogram=dict(stage2_hist), empirical_rate=rate,
                            mean_total_tests=mean_total, wall_time=elapsed,
                            failures=failures)


def default_weight(s: int, mode: str) -> float:
    return recommended_weight(s, mode) if s >= 2 else 0.5
