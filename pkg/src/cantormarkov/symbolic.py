"""Admissible words, gaps, cylinder geometry and the variation check.

A word ``[i_1, ..., i_k]`` is admissible when every symbol is at most the
sum of the symbols before it.  Words are represented as tuples of ints.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import ArgumentError
from .intervals import MeasureInterval
from .model import (DEFAULT_SPEC, ModelSpec, g_eps_inverse, g_eps_prime)

Word = tuple


def as_word(w: Sequence[int]) -> tuple[int, ...]:
    out = tuple(int(s) for s in w)
    if any(s < 1 for s in out):
        raise ArgumentError(f"symbols must be positive integers: {w!r}")
    return out


def is_admissible(w: Sequence[int]) -> bool:
    """True iff each symbol is bounded by the sum of the preceding ones."""
    total = 0
    for k, s in enumerate(w):
        if k > 0 and s > total:
            return False
        total += s
    return True


def first_violation(w: Sequence[int]) -> int | None:
    """Index of the first symbol exceeding its prefix sum, or ``None``."""
    total = 0
    for k, s in enumerate(w):
        if k > 0 and s > total:
            return k
        total += s
    return None


def iter_admissible(prefix: Sequence[int], length: int, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    """Stream admissible extensions of ``prefix`` to ``length`` in lexicographic order.

    ``cap=None`` means no symbol cap; this is only finite when ``prefix`` is
    nonempty, since every later symbol is then bounded by the running sum.
    """
    prefix = as_word(prefix)
    if not is_admissible(prefix):
        raise ArgumentError(f"prefix {list(prefix)} is not admissible")
    if cap is not None and cap < 1:
        raise ArgumentError("cap must be at least 1")
    if not prefix and cap is None and length > 0:
        raise ArgumentError("an empty prefix needs a finite cap")
    if length < len(prefix):
        return
    if cap is not None and any(s > cap for s in prefix):
        return
    word = list(prefix)

    def rec(total: int):
        if len(word) == length:
            yield tuple(word)
            return
        hi = total if word else cap
        if cap is not None:
            hi = min(hi, cap)
        for s in range(1, hi + 1):
            word.append(s)
            yield from rec(total + s)
            word.pop()

    yield from rec(sum(prefix))


def enumerate_admissible(prefix: Sequence[int], length: int, cap: int | None = None) -> list[tuple[int, ...]]:
    """All admissible words of ``length`` extending ``prefix``, lexicographically sorted."""
    return list(iter_admissible(prefix, length, cap))


class Gap(NamedTuple):
    """Gap family: every extension ``stem + [k]`` with ``k > threshold`` is inadmissible."""

    stem: tuple[int, ...]
    threshold: int

    def minimal_word(self) -> tuple[int, ...]:
        return self.stem + (self.threshold + 1,)


def enumerate_gaps(n: int, order: int) -> list[Gap]:
    """Gap families of ``C_n`` of the given order, as (stem, threshold) pairs."""
    if order < 1:
        raise ArgumentError("order must be at least 1")
    if n < 1:
        raise ArgumentError("n must be a positive symbol")
    return [Gap(stem, sum(stem)) for stem in iter_admissible((n,), order)]


# cylinders ------------------------------------------------------------------

def cylinder_interval(w: Sequence[int], spec: ModelSpec = DEFAULT_SPEC) -> tuple[float, float]:
    """x-interval ``[left, right)`` of the full-height cylinder ``E_w`` (floating point)."""
    w = as_word(w)
    if not w:
        return 0.0, 1.0
    lo, hi = 0.0, 1.0
    for s in reversed(w):
        left, width = spec.left_edge(s), spec.width(s)
        lo = left + width * float(g_eps_inverse(lo, spec.perturbation))
        hi = left + width * float(g_eps_inverse(hi, spec.perturbation))
    return lo, hi


def pull_back(s: np.ndarray, w: Sequence[int], spec: ModelSpec = DEFAULT_SPEC) -> np.ndarray:
    """Map points ``s`` of [0, 1] into the cylinder ``E_w`` through inverse branches."""
    x = np.asarray(s, dtype=float)
    for sym in reversed(tuple(w)):
        x = spec.left_edge(sym) + spec.width(sym) * g_eps_inverse(x, spec.perturbation)
    return x


def exact_weight(w: Sequence[int], spec: ModelSpec = DEFAULT_SPEC) -> Fraction:
    """Product of exact widths ``prod w_{i_k}``."""
    out = Fraction(1)
    for s in w:
        out *= spec.exact_width(s)
    return out


def cylinder_width(w: Sequence[int], spec: ModelSpec = DEFAULT_SPEC) -> MeasureInterval:
    """Width of the cylinder ``E_w``.

    Exact rational for the affine model.  With a perturbation every inverse
    branch after the first rescales lengths by ``1/g'`` with
    ``1 - eps <= g' <= 1 + eps``, which gives the certified interval.
    """
    w = as_word(w)
    if not w:
        raise ArgumentError("cylinder of the empty word is not defined")
    base = exact_weight(w, spec)
    eps = spec.perturbation
    if eps == 0.0:
        return MeasureInterval(base, base, len(w))
    n = len(w) - 1
    lo = float(base) / (1.0 + eps) ** n
    hi = float(base) / (1.0 - eps) ** n
    return MeasureInterval(math.nextafter(lo, 0.0), math.nextafter(hi, math.inf), len(w))


# rectangles and variation ---------------------------------------------------------

@dataclass(frozen=True)
class RectangleSpec:
    """Rectangle ``R_{past, future} = S_past intersected with E_future``."""

    past: tuple[int, ...]
    future: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "past", as_word(self.past))
        object.__setattr__(self, "future", as_word(self.future))
        if not self.future:
            raise ArgumentError("future part of a rectangle must be nonempty")

    @property
    def string(self) -> tuple[int, ...]:
        return self.past + self.future

    @property
    def m(self) -> int:
        return len(self.past)

    @property
    def n(self) -> int:
        return len(self.future)


def strip_interval(past: Sequence[int], spec: ModelSpec = DEFAULT_SPEC) -> tuple[float, float]:
    """y-interval of the strip ``S_past`` (full height for the empty past)."""
    lo, hi = 0.0, 1.0
    for s in past:
        c, h = spec.offset(s), spec.height(s)
        lo, hi = c + h * lo, c + h * hi
    return lo, hi


def rectangle_points(rect: RectangleSpec, samples: int, spec: ModelSpec = DEFAULT_SPEC,
                     rng: np.random.Generator | None = None) -> np.ndarray:
    """Sample points of a rectangle by pulling a grid back through inverse branches.

    Returns an array of shape ``(k, 2)``: grid and cylinder corners, the
    critical points of ``g'`` that fall inside, and random interior points.
    """
    grid = np.linspace(0.0, 1.0, max(samples, 2))
    grid[-1] = math.nextafter(1.0, 0.0)
    extra = rng.random(samples) if rng is not None else np.empty(0)
    xs = pull_back(np.concatenate([grid, extra]), rect.future, spec)
    i0 = rect.future[0]
    left, width = spec.left_edge(i0), spec.width(i0)
    lo, hi = xs.min(), xs.max()
    crit = left + width * np.array([0.0, 0.5])
    xs = np.concatenate([xs, crit[(crit >= lo) & (crit <= hi)]])
    ylo, yhi = strip_interval(rect.past, spec)
    ys = np.linspace(ylo, yhi, 3)
    X, Y = np.meshgrid(xs, ys)
    return np.column_stack([X.ravel(), Y.ravel()])


def log_unstable_derivative(points: np.ndarray, spec: ModelSpec = DEFAULT_SPEC,
                            symbol: int | None = None) -> np.ndarray:
    """``log D^u F`` at each row ``(x, y)``; depends on ``x`` only for this family.

    When ``symbol`` is given the points are known to lie in ``E_symbol`` and
    the branch is not re-located, which keeps pulled-back points sitting on
    a rounded right edge on their own branch.
    """
    from .model import locate_array

    x = np.asarray(points, dtype=float)[:, 0]
    a = spec.width_base
    i = locate_array(x, spec) if symbol is None else np.full(x.shape, symbol)
    w = (1.0 - a) * a ** (i - 1.0)
    t = np.clip((x - (1.0 - a ** (i - 1.0))) / w, 0.0, 1.0)
    return np.log(g_eps_prime(t, spec.perturbation)) - np.log(w)


def rectangle_variation(rect: RectangleSpec, samples: int, spec: ModelSpec = DEFAULT_SPEC,
                        rng: np.random.Generator | None = None) -> float:
    """Sampled oscillation ``max - min`` of ``log D^u F`` over the rectangle."""
    pts = rectangle_points(rect, samples, spec, rng)
    vals = log_unstable_derivative(pts, spec, symbol=rect.future[0])
    return float(vals.max() - vals.min())


@dataclass
class VariationFit:
    """Measured variation table and the fitted constants of the local Hoelder bound.

    ``rows`` holds ``(m, n, variation)``; ``levels`` holds ``(k, V_k)`` with
    ``V_k`` the largest variation among rows with ``min(m, n) = k``.
    """

    rows: list[tuple[int, int, float]]
    levels: list[tuple[int, float]]
    C: float
    theta0: float | None
    theta1: float
    residual: float
    r2: float | None
    monotone: bool
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"rows": [{"m": m, "n": n, "variation": v} for m, n, v in self.rows],
                "levels": [{"k": k, "V": v} for k, v in self.levels],
                "C": self.C, "theta0": self.theta0, "theta1": self.theta1,
                "residual": self.residual, "r2": self.r2, "monotone": self.monotone,
                "passed": self.passed, **self.detail}


def random_admissible(prefix: Sequence[int], length: int, rng: np.random.Generator,
                      cap: int | None = None) -> tuple[int, ...]:
    """Random admissible extension; each new symbol is geometric truncated by the budget."""
    word = list(as_word(prefix))
    total = sum(word)
    while len(word) < length:
        hi = total if word else (cap or 8)
        if cap is not None:
            hi = min(hi, cap)
        s = int(min(rng.geometric(0.5), hi))
        word.append(s)
        total += s
    return tuple(word)


def variation_check(rect: RectangleSpec, samples: int = 16, spec: ModelSpec = DEFAULT_SPEC,
                    max_order: int = 6, family_size: int = 24, seed: int = 0,
                    tol: float = 1e-12) -> VariationFit:
    """Measure the variation of ``log D^u F`` over a family of admissible rectangles.

    The family consists of the rectangles ``(s[:m], s[m:m+n])`` for
    ``0 <= m <= max_order`` and ``1 <= n <= max_order``, where ``s`` ranges
    over random admissible strings extending ``rect``'s defining string and
    the all-ones extension.  The level ``V_k`` is the largest variation with
    ``min(m, n) = k`` and a log-linear fit ``V_k ~ C theta0**k`` over
    ``k >= 1`` gives the constants.

    Raises
    ------
    ArgumentError
        If the defining string of ``rect`` is not admissible.
    """
    if not is_admissible(rect.string):
        raise ArgumentError(f"rectangle string {list(rect.string)} is not admissible")
    if samples < 1:
        raise ArgumentError("samples must be at least 1")
    rng = np.random.default_rng(seed)
    L = max(2 * max_order, len(rect.string))
    cap = spec.symbol_cap
    strings = {random_admissible(rect.string, L, rng, cap) for _ in range(family_size)}
    strings.add(tuple(rect.string) + (1,) * (L - len(rect.string)))
    strings = sorted(strings)

    rows = [(rect.m, rect.n, rectangle_variation(rect, samples, spec, rng))]
    for m in range(0, max_order + 1):
        for n in range(1, max_order + 1):
            v = 0.0
            for s in strings:
                v = max(v, rectangle_variation(RectangleSpec(s[:m], s[m:m + n]), samples, spec, rng))
            rows.append((m, n, v))
    levels = []
    for k in range(0, max_order + 1):
        vals = [v for m, n, v in rows[1:] if min(m, n) == k]
        levels.append((k, max(vals)))
    V = np.array([v for _, v in levels])
    monotone = bool(np.all(np.diff(V) <= tol))

    from .model import verify_conditions

    rep = verify_conditions(spec.with_(symbol_cap=max(spec.symbol_cap, 2)), samples=max(samples, 8))
    alpha = spec.cone_slope
    theta1 = max(1.0 / rep.K0 ** 2 + alpha ** 2, spec.height_base / spec.width_base)

    ks = np.array([k for k, _ in levels[1:]], dtype=float)
    vs = np.array([v for _, v in levels[1:]])
    if np.all(vs == 0.0):
        return VariationFit(rows, levels, 0.0, None, theta1, 0.0, None, monotone, monotone,
                            {"note": "log D^u F is locally constant"})
    pos = vs > 0
    if pos.sum() < 2:
        return VariationFit(rows, levels, float(vs.max()), None, theta1, math.nan, None,
                            monotone, False, {"note": "too few nonzero levels to fit"})
    slope, intercept = np.polyfit(ks[pos], np.log(vs[pos]), 1)
    pred = intercept + slope * ks[pos]
    resid = np.log(vs[pos]) - pred
    ss_tot = float(np.sum((np.log(vs[pos]) - np.log(vs[pos]).mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    theta0 = float(math.exp(slope))
    C = float(np.max(V / theta0 ** np.arange(len(V))))
    passed = monotone and 0.0 < theta0 < 1.0
    return VariationFit(rows, levels, C, theta0, theta1, float(np.sqrt(np.mean(resid ** 2))),
                        r2, monotone, passed, {"B0": rep.B0, "strings": len(strings)})
