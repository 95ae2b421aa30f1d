"""Certified measure bounds for the full-height Cantor sets ``C_n``.

A point of ``E_n`` lies in ``C_n`` when its forward itinerary is admissible
at every length.  Along an itinerary the running prefix sum ``S`` (the
budget) caps the next symbol, so the relative leaf measure obeys the
survival recursion

    rho(S) = sum_{j <= S} w_j rho(S + j).

Iterating from ``rho = 1`` gives upper bounds; iterating from the product
``prod_k (1 - a**(S + k))`` gives lower bounds.  Both are monotone in the
depth and pinch together geometrically.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import ArgumentError
from .intervals import MeasureInterval
from .model import DEFAULT_SPEC, ModelSpec
from .symbolic import cylinder_interval, is_admissible

__all__ = ["MeasureInterval", "BudgetState", "relative_measure", "cantor_measure",
           "leaf_ratio_bound", "survival_product", "exact_upper"]


class BudgetState(int):
    """Running prefix sum capping the next symbol; always at least 1."""

    def __new__(cls, value: int):
        if int(value) != value or value < 1:
            raise ArgumentError(f"budget must be a positive integer, got {value!r}")
        return super().__new__(cls, int(value))


EXACT_DEPTH = 10


def _distortion(spec: ModelSpec) -> float:
    eps = spec.perturbation
    return 1.0 if eps == 0.0 else (1.0 + eps) / (1.0 - eps)


def survival_product(budget: int, spec: ModelSpec = DEFAULT_SPEC, terms: int = 2000) -> float:
    """Lower bound ``prod_{k>=0} (1 - D a**(budget + k))`` on the survival from ``budget``.

    ``D`` is the distortion factor (1 for the affine model).  The product is
    truncated once the factors are within rounding of 1 and the remainder is
    bounded by ``1 - D a**K / (1 - a)``.
    """
    a, D = spec.width_base, _distortion(spec)
    prod = 1.0
    for k in range(terms):
        gap = D * a ** (budget + k)
        if gap >= 1.0:
            return 0.0
        if gap < 1e-18:
            prod *= max(0.0, 1.0 - gap / (1.0 - a))
            break
        prod *= 1.0 - gap
    return prod


def _gap_range(S: int, spec: ModelSpec) -> tuple[float, float]:
    """Certified range of the total relative weight of symbols ``> S``."""
    a, D = spec.width_base, _distortion(spec)
    tail = a ** S
    lo = max(tail / D, 1.0 - D * (1.0 - tail))
    hi = min(D * tail, 1.0 - (1.0 - tail) / D)
    return lo, hi


def _extreme_sum(S: int, values: np.ndarray, spec: ModelSpec, maximize: bool) -> float:
    """Extremize ``sum_j wt_j values[j]`` over admissible relative weights ``j <= S``.

    Each weight lies in ``[w_j / D, w_j D]``.  The total mass of the
    admissible symbols equals one minus the gap mass, whose range comes from
    :func:`_gap_range`.  Values are nondecreasing in ``j`` so the greedy
    allocation is optimal.
    """
    a, D = spec.width_base, _distortion(spec)
    j = np.arange(1, S + 1)
    w = (1.0 - a) * a ** (j - 1.0)
    if D == 1.0:
        return float(np.dot(w, values))
    glo, ghi = _gap_range(S, spec)
    mass = 1.0 - (glo if maximize else ghi)
    lo_w, hi_w = w / D, w * D
    alloc = lo_w.copy()
    spare = mass - lo_w.sum()
    order = np.argsort(values)[::-1] if maximize else np.argsort(values)
    for k in order:
        if spare <= 0:
            break
        add = min(hi_w[k] - lo_w[k], spare)
        alloc[k] += add
        spare -= add
    return float(np.dot(alloc, values))


@lru_cache(maxsize=256)
def _tables(depth: int, spec: ModelSpec, s_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Upper and lower survival tables indexed by budget ``1 .. s_max`` after ``depth`` levels."""
    budgets = np.arange(1, s_max + 1)
    upper = np.ones(s_max + 1)
    lower = np.array([0.0] + [survival_product(int(S), spec) for S in budgets])

    def lookup(table, idx, collapsed):
        out = np.where(idx <= s_max, table[np.minimum(idx, s_max)], collapsed[np.minimum(idx - s_max, len(collapsed) - 1)])
        return out

    far = np.array([survival_product(s_max + k, spec) for k in range(0, s_max + 2)])
    ones = np.ones_like(far)
    for _ in range(depth):
        new_u = np.ones(s_max + 1)
        new_l = np.zeros(s_max + 1)
        for S in budgets:
            idx = S + np.arange(1, S + 1)
            u_vals = lookup(upper, idx, ones)
            l_vals = lookup(lower, idx, far)
            new_u[S] = _extreme_sum(int(S), u_vals, spec, maximize=True)
            new_l[S] = _extreme_sum(int(S), l_vals, spec, maximize=False)
        upper = np.minimum(upper, new_u)
        lower = np.maximum(lower, new_l)
    return upper, lower


def _s_max(spec: ModelSpec) -> int:
    a, D = spec.width_base, _distortion(spec)
    return int(min(400, max(8, math.ceil(math.log(1e-20 / D) / math.log(a)) + 2)))


def relative_measure(budget: int, depth: int, spec: ModelSpec = DEFAULT_SPEC) -> MeasureInterval:
    """Certified relative leaf measure of points surviving from ``budget``.

    Parameters
    ----------
    budget : int
        Initial running sum ``S``; the next symbol must not exceed it.
    depth : int
        Number of recursion levels.

    Returns
    -------
    MeasureInterval
        ``lower`` nondecreasing and ``upper`` nonincreasing in ``depth``.
        Budgets beyond the internal ceiling use ``[prod bound, 1]``.
    """
    S = BudgetState(budget)
    if depth < 1:
        raise ArgumentError("depth must be at least 1")
    s_max = _s_max(spec)
    if S > s_max:
        lo = survival_product(int(S), spec)
        return MeasureInterval(lo, 1.0, depth)
    upper, lower = _tables(int(depth), spec, s_max)
    lo = max(0.0, float(lower[S]) * (1.0 - 1e-13))
    if spec.affine and depth <= EXACT_DEPTH and int(S) << int(depth) <= 2048:
        return MeasureInterval(lo, exact_upper(int(S), int(depth), spec), depth)
    hi = min(1.0, float(upper[S]) * (1.0 + 1e-13))
    return MeasureInterval(lo, max(hi, lo), depth)


def exact_upper(budget: int, depth: int, spec: ModelSpec = DEFAULT_SPEC) -> Fraction:
    """Exact rational depth-``depth`` upper bound (affine model)."""
    return _exact_upper(int(budget), int(depth), spec.width_base_q)


@lru_cache(maxsize=None)
def _exact_upper(S: int, d: int, a: Fraction) -> Fraction:
    if d == 0:
        return Fraction(1)
    return sum(((1 - a) * a ** (j - 1) * _exact_upper(S + j, d - 1, a) for j in range(1, S + 1)),
               Fraction(0))


def cantor_measure(n: int, depth: int = 60, spec: ModelSpec = DEFAULT_SPEC) -> MeasureInterval:
    """Relative measure of ``C_n`` inside ``E_n`` on an unstable leaf."""
    if n < 1:
        raise ArgumentError("n must be a positive symbol")
    return relative_measure(n, depth, spec)


def leaf_ratio_bound(w: Sequence[int], spec: ModelSpec = DEFAULT_SPEC, samples: int = 100) -> float:
    """Largest ratio of cross-section lengths of ``E_w`` over sampled horizontal leaves.

    The cylinders of this family are vertical strips, so every leaf sees the
    same interval and the ratio is 1 up to rounding.  Compare with
    ``exp(B0)`` from the condition verifier for the analytic cap.
    """
    w = tuple(w)
    if not w or not is_admissible(w):
        raise ArgumentError(f"word {list(w)} is not admissible")
    if samples < 1:
        raise ArgumentError("samples must be at least 1")
    lengths = []
    for y in np.linspace(0.0, 1.0, samples):
        lengths.append(leaf_cross_section(w, float(y), spec))
    lengths = np.array(lengths)
    return float(lengths.max() / lengths.min())


def leaf_cross_section(w: Sequence[int], y: float, spec: ModelSpec = DEFAULT_SPEC) -> float:
    """Length of the horizontal section of ``E_w`` at height ``y``."""
    lo, hi = cylinder_interval(w, spec)
    return hi - lo
