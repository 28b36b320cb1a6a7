"""Rate lower bounds for two-stage group testing with constant-weight codes.

The exponent ``A(s, w, q)`` is the large-``N`` decay rate of the probability
that ``s`` random columns of relative weight ``w`` OR together to a vector of
relative weight ``q``.  It is parametrised by the root ``y`` in (0, 1) of
``1 + y + ... + y**(s-1) = q / w``.

All infima over ``q`` and suprema over ``w`` are taken on open intervals: a
uniform grid on ``[lo + d, hi - d]`` with ``d = 1e-9 * (hi - lo)``, then a
golden-section refinement around the best grid point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np

from gtlab.errors import DomainError

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
Y_TOL = 1e-12
_BISECT_STEPS = 48  # 2**-48 < 4e-15, comfortably below Y_TOL

TABLE1_OLD = {3: 0.199, 4: 0.145, 5: 0.114, 6: 0.094}
TABLE1_NEW = {3: 0.3219, 4: 0.199, 5: 0.145, 6: 0.114}


def entropy(x: float) -> float:
    """Binary entropy in bits, with ``h(0) = h(1) = 0``."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"entropy argument {x!r} outside [0, 1]")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def _entropy_array(x: np.ndarray) -> np.ndarray:
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    out = np.zeros_like(x)
    inner = (x > 0.0) & (x < 1.0)
    xi = x[inner]
    out[inner] = -xi * np.log2(xi) - (1.0 - xi) * np.log2(1.0 - xi)
    return out


def _xlog2x(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.where(x > 0.0, x * np.log2(np.where(x > 0.0, x, 1.0)), 0.0)


def _geometric_sum(y: np.ndarray, s: int) -> np.ndarray:
    acc = np.ones_like(y)
    for _ in range(s - 1):
        acc = acc * y + 1.0
    return acc


def _solve_y_array(s: int, ratio: np.ndarray) -> np.ndarray:
    """Bisection for ``1 + y + ... + y**(s-1) = ratio`` with ``ratio`` in (1, s)."""
    lo = np.zeros_like(ratio)
    hi = np.ones_like(ratio)
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        below = _geometric_sum(mid, s) < ratio
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def solve_y(s: int, w: float, q: float) -> float:
    """Unique root ``y`` in (0, 1) of ``q = w (1 - y**s) / (1 - y)``."""
    if s < 1 or not 0.0 < w < 1.0 or not w < q < min(1.0, s * w):
        raise DomainError(f"solve_y needs w < q < min(1, s*w); got s={s}, w={w}, q={q}")
    return float(_solve_y_array(s, np.array([q / w]))[0])


def _big_A_array(s: int, w: float, q: np.ndarray) -> np.ndarray:
    """Vectorised ``A(s, w, q)`` for ``w <= q <= min(1, s*w)``; endpoints by limit."""
    q = np.asarray(q, dtype=float)
    hw = entropy(w)
    if s == 1:
        return np.zeros_like(q)
    out = np.empty_like(q)
    at_lo = q <= w
    at_hi = q >= s * w
    inner = ~(at_lo | at_hi)
    # y -> 0: all s columns coincide
    out[at_lo] = (s - 1) * hw
    # y -> 1: the s columns are pairwise disjoint
    qh = q[at_hi]
    out[at_hi] = _xlog2x(1.0 - qh) + qh * math.log2(w) + s * hw
    if inner.any():
        qi = q[inner]
        y = _solve_y_array(s, qi / w)
        log_y = np.log2(y)
        log_1my = np.log2(1.0 - y)
        out[inner] = (_xlog2x(1.0 - qi)
                      + qi * (math.log2(w) + s * log_y - log_1my)
                      + s * w * (log_1my - log_y)
                      + s * hw)
    return out


def _big_A_scalar(s: int, w: float, q: float) -> float:
    """Scalar twin of :func:`_big_A_array`, used inside refinement loops."""
    if s == 1:
        return 0.0
    hw = entropy(w)
    if q <= w:
        return (s - 1) * hw
    if q >= s * w:
        return (0.0 if q >= 1.0 else (1.0 - q) * math.log2(1.0 - q)) + q * math.log2(w) + s * hw
    ratio = q / w
    lo, hi = 0.0, 1.0
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        acc = 1.0
        for _ in range(s - 1):
            acc = acc * mid + 1.0
        if acc < ratio:
            lo = mid
        else:
            hi = mid
    y = 0.5 * (lo + hi)
    log_y, log_1my = math.log2(y), math.log2(1.0 - y)
    xl = 0.0 if q >= 1.0 else (1.0 - q) * math.log2(1.0 - q)
    return (xl + q * (math.log2(w) + s * log_y - log_1my)
            + s * w * (log_1my - log_y) + s * hw)


def _h(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def big_A(s: int, w: float, q: float) -> float:
    """Exponent ``A(s, w, q)`` of the union-weight probability of ``s`` columns."""
    if not 0.0 < w < 1.0:
        raise DomainError(f"w must lie in (0, 1), got {w}")
    if s == 1:
        if not math.isclose(q, w, rel_tol=0.0, abs_tol=1e-15):
            raise DomainError("A(1, w, q) is defined only at q = w")
        return 0.0
    if s < 1 or not w < q < min(1.0, s * w):
        raise DomainError(f"A needs w < q < min(1, s*w); got s={s}, w={w}, q={q}")
    return float(_big_A_array(s, w, np.array([q]))[0])


def golden_section_min(f: Callable[[float], float], a: float, b: float,
                       tol: float = 1e-10) -> tuple[float, float]:
    """Minimise a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    a, b = min(a, b), max(a, b)
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def _open_grid(lo: float, hi: float, n: int) -> np.ndarray:
    d = 1e-9 * (hi - lo)
    return np.linspace(lo + d, hi - d, n)


def _grid_then_refine(fvec: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
                      n: int, tol: float,
                      fscalar: Callable[[float], float] | None = None) -> tuple[float, float]:
    """Infimum of ``fvec`` over the open interval (lo, hi): ``(argmin, min)``."""
    grid = _open_grid(lo, hi, n)
    vals = fvec(grid)
    i = int(np.argmin(vals))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, n - 1)]
    if fscalar is None:
        def fscalar(q):
            return float(fvec(np.array([q]))[0])
    x, fx = golden_section_min(fscalar, a, b, tol)
    if fx < vals[i]:
        return x, fx
    return float(grid[i]), float(vals[i])


def _inf_over_q(objective: Callable[[np.ndarray], np.ndarray],
                scalar: Callable[[float], float], lo: float, hi: float,
                q_grid: int, tol: float) -> float:
    if lo > hi + 1e-15:
        return math.inf
    if hi - lo <= 1e-12:
        return scalar(lo)
    return _grid_then_refine(objective, lo, hi, q_grid, tol, scalar)[1]


def r1_bound(s: int, k: int, w: float, q_grid: int = 200, tol: float = 1e-6) -> float:
    """Rate condition from configurations whose extra columns add at least kw/2."""
    if not 0 <= k <= s - 1:
        raise DomainError(f"k must lie in [0, {s - 1}], got {k}")
    m = s - k
    lo, hi = max(w, k * w / 2.0), min(m * w, 1.0)

    def obj(q):
        return (_big_A_array(m, w, q) - k * w + _entropy_array(q)) / m

    def obj1(q):
        return (_big_A_scalar(m, w, q) - k * w + _h(q)) / m

    return _inf_over_q(obj, obj1, lo, hi, q_grid, tol)


def r2_bound(s: int, k: int, w: float, q_grid: int = 200, tol: float = 1e-6) -> float:
    """Rate condition for the case ``q <= kw/2``; ``+inf`` when that set is empty."""
    if not 0 <= k <= s - 1:
        raise DomainError(f"k must lie in [0, {s - 1}], got {k}")
    if k == 0:
        return math.inf
    m = s - k
    lo, hi = w, min(1.0, m * w, k * w / 2.0)

    def obj(q):
        return (_big_A_array(m, w, q) - k * w * _entropy_array(q / (k * w))
                + _entropy_array(q)) / m

    def obj1(q):
        return (_big_A_scalar(m, w, q) - k * w * _h(q / (k * w)) + _h(q)) / m

    return _inf_over_q(obj, obj1, lo, hi, q_grid, tol)


def rate_at(s: int, K: Iterable[int], w: float, q_grid: int = 200,
            tol: float = 1e-6) -> float:
    """``min over k in K`` of ``min(R1, R2)`` at relative weight ``w``."""
    return min(min(r1_bound(s, k, w, q_grid, tol), r2_bound(s, k, w, q_grid, tol))
               for k in K)


@dataclass(frozen=True)
class RateQuery:
    s: int
    K: tuple[int, ...]
    w_grid: int = 200
    q_grid: int = 200
    tol: float = 1e-6

    def __post_init__(self):
        if self.s < 2:
            raise DomainError(f"s must be >= 2, got {self.s}")
        if not self.K or any(not 0 <= k <= self.s - 1 for k in self.K):
            raise DomainError(f"K must be a non-empty subset of [0, {self.s - 1}]")
        if self.w_grid < 100 or self.q_grid < 100:
            raise DomainError("grid resolutions must be >= 100")
        if self.tol <= 0:
            raise DomainError("tolerance must be positive")


@dataclass(frozen=True)
class RateResult:
    value: float
    w_star: float
    per_k: dict[int, tuple[float, float]]
    diagnostics: dict = field(default_factory=dict)


@lru_cache(maxsize=None)
def _evaluate(query: RateQuery) -> RateResult:
    s, K = query.s, query.K

    def objective(w: float) -> float:
        return rate_at(s, K, w, query.q_grid, query.tol)

    ws = _open_grid(0.0, 1.0, query.w_grid)
    vals = np.array([objective(w) for w in ws])
    i = int(np.argmax(vals))
    a, b = ws[max(i - 1, 0)], ws[min(i + 1, len(ws) - 1)]
    evals = [0]

    def neg(w: float) -> float:
        evals[0] += 1
        return -objective(w)

    w_ref, neg_val = golden_section_min(neg, a, b, tol=query.tol * 1e-3)
    if -neg_val >= vals[i]:
        w_star, value = w_ref, -neg_val
    else:
        w_star, value = float(ws[i]), float(vals[i])
    per_k = {k: (r1_bound(s, k, w_star, query.q_grid, query.tol),
                 r2_bound(s, k, w_star, query.q_grid, query.tol)) for k in K}
    diagnostics = {"w_grid": query.w_grid, "q_grid": query.q_grid, "tol": query.tol,
                   "grid_best_w": float(ws[i]), "grid_best_value": float(vals[i]),
                   "refine_evaluations": evals[0]}
    return RateResult(value=value, w_star=w_star, per_k=per_k, diagnostics=diagnostics)


def lower_bound(query: RateQuery) -> RateResult:
    """``sup over w`` of ``min over k in K`` of the two rate conditions."""
    return _evaluate(query)


def theorem2_bound(s: int, w_grid: int = 200, q_grid: int = 200,
                   tol: float = 1e-6) -> RateResult:
    """Achievable two-stage rate for finding all ``s`` defectives."""
    return lower_bound(RateQuery(s, tuple(range(s)), w_grid, q_grid, tol))


def partial_closed_form(s: int, w: float | None = None) -> float:
    """``h(w) + w log2(2**(1/s) - 1)``; equals ``1/s`` at ``w = 1 - 2**(-1/s)``."""
    if w is None:
        w = 1.0 - 2.0 ** (-1.0 / s)
    return entropy(w) + w * math.log2(2.0 ** (1.0 / s) - 1.0)


def partial_bound(s: int, w_grid: int = 200, q_grid: int = 200,
                  tol: float = 1e-6) -> RateResult:
    """Achievable rate for finding ``s // 2 + 1`` of ``s`` defectives."""
    res = lower_bound(RateQuery(s, tuple(range(s // 2 + 1)), w_grid, q_grid, tol))
    closed = partial_closed_form(s)
    if abs(closed - 1.0 / s) > 1e-10:
        raise ArithmeticError(f"closed form {closed} differs from 1/{s}")
    diagnostics = {**res.diagnostics, "closed_form": closed,
                   "closed_form_w": 1.0 - 2.0 ** (-1.0 / s)}
    return RateResult(res.value, res.w_star, res.per_k, diagnostics)


def qmin_closed_form(s: int, w: float) -> float:
    return w / (2.0 * (1.0 - 2.0 ** (-1.0 / s)))


def qmin_check(s: int, w: float, tol: float = 1e-12) -> float:
    """Numeric argmin over q of ``A(s, w, q) + h(q)``."""
    if s < 2:
        raise DomainError(f"s must be >= 2, got {s}")
    lo, hi = w, min(s * w, 1.0)
    q_closed = qmin_closed_form(s, w)
    if not lo < q_closed < hi:
        raise DomainError(f"minimiser {q_closed} outside ({lo}, {hi})")

    def f(q):
        return _big_A_array(s, w, q) + _entropy_array(q)

    return _grid_then_refine(f, lo, hi, 400, tol)[0]


def prop2_exponent(w: float, q: float) -> float:
    """``q h(w/q) + w h((q-w)/w) - 2 h(w)``: exponent of the pair-collision count."""
    if not 0.0 < w < 1.0 or not w < q < min(2.0 * w, 1.0):
        raise DomainError(f"need w < q < min(2w, 1); got w={w}, q={q}")
    return q * entropy(w / q) + w * entropy((q - w) / w) - 2.0 * entropy(w)


def prop2_sup(w: float, grid: int = 2000, tol: float = 1e-12) -> tuple[float, float]:
    """``(argsup, sup)`` of the pair exponent over q in (w, min(2w, 1))."""
    lo, hi = w, min(2.0 * w, 1.0)
    if not 0.0 < w < 1.0:
        raise DomainError(f"w must lie in (0, 1), got {w}")

    def neg(q):
        q = np.asarray(q, dtype=float)
        return -(q * _entropy_array(w / q) + w * _entropy_array((q - w) / w)
                 - 2.0 * entropy(w))

    q, v = _grid_then_refine(neg, lo, hi, grid, tol)
    return q, -v


def _log_comb(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def pair_probabilities(N: int, wN: int, qN: int) -> tuple[float, float]:
    """Exact ``(p1, p2)`` for columns of weight ``wN`` and an outcome of weight ``qN``.

    ``p1``: a fixed column and one random column OR to a given outcome.
    ``p2``: two random columns OR to a given outcome.
    """
    d = qN - wN
    if not (0 <= d <= wN <= qN <= N):
        raise DomainError(f"need 0 <= qN-wN <= wN <= qN <= N; got N={N}, wN={wN}, qN={qN}")
    log_base = _log_comb(N, wN)
    log_p1 = _log_comb(wN, d) - log_base
    log_p2 = _log_comb(qN, wN) + _log_comb(wN, d) - 2.0 * log_base
    return math.exp(log_p1), math.exp(log_p2)


def log2_pair_probabilities(N: int, wN: int, qN: int) -> tuple[float, float]:
    """``log2`` of :func:`pair_probabilities`, safe against underflow."""
    d = qN - wN
    if not (0 <= d <= wN <= qN <= N):
        raise DomainError(f"need 0 <= qN-wN <= wN <= qN <= N; got N={N}, wN={wN}, qN={qN}")
    log_base = _log_comb(N, wN)
    ln2 = math.log(2.0)
    return ((_log_comb(wN, d) - log_base) / ln2,
            (_log_comb(qN, wN) + _log_comb(wN, d) - 2.0 * log_base) / ln2)
