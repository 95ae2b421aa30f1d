"""Piecewise-hyperbolic map family on the unit square.

The square ``Q = [0, 1) x [0, 1]`` is cut into full-height rectangles
``E_i = [x_{i-1}, x_i) x [0, 1]`` with ``x_i = 1 - a**i``, so that
``E_i`` has width ``w_i = (1 - a) a**(i - 1)``.  Branch ``i`` stretches
``E_i`` horizontally onto ``[0, 1)`` and squeezes it vertically onto the
full-width strip ``S_i = [c_i, c_i + h_i]`` with ``h_i = a_1**i`` and
``c_i = h_1 + ... + h_{i-1}``.  An optional horizontal post-composition
``g(t) = t + eps / (2 pi) sin(2 pi t)`` makes the branches non-affine
while keeping the product structure.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import ArgumentError, DomainError, NumericError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ModelSpec:
    """Parameters of the map family.

    Parameters
    ----------
    width_base : float
        Ratio ``a`` of consecutive rectangle widths.
    height_base : float
        Ratio ``a_1`` of strip heights.  The family is only expected to
        satisfy every standing condition when ``height_base < width_base``,
        but other values are accepted so that failures can be reported.
    cone_slope : float
        Slope ``alpha`` of the stable and unstable cones.
    perturbation : float
        Amplitude ``eps`` of the horizontal perturbation, ``0 <= eps < 1``.
    symbol_cap : int
        Truncation of the countable alphabet used by numerical routines.
    """

    width_base: float = 0.5
    height_base: float = 1.0 / 3.0
    cone_slope: float = 0.5
    perturbation: float = 0.0
    symbol_cap: int = 40

    def __post_init__(self):
        for name in ("width_base", "height_base", "cone_slope"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and 0.0 < v < 1.0):
                raise ArgumentError(f"{name} must lie in (0, 1), got {v!r}")
        eps = self.perturbation
        if not (math.isfinite(eps) and 0.0 <= eps < 1.0):
            raise ArgumentError(f"perturbation must lie in [0, 1), got {eps!r}")
        if int(self.symbol_cap) != self.symbol_cap or self.symbol_cap < 1:
            raise ArgumentError(f"symbol_cap must be a positive integer, got {self.symbol_cap!r}")

    # geometry -----------------------------------------------------------
    @property
    def affine(self) -> bool:
        return self.perturbation == 0.0

    def width(self, i: int) -> float:
        return (1.0 - self.width_base) * self.width_base ** (i - 1)

    def left_edge(self, i: int) -> float:
        """Left end ``x_{i-1}`` of ``E_i``."""
        return 1.0 - self.width_base ** (i - 1)

    def height(self, i: int) -> float:
        return self.height_base ** i

    def offset(self, i: int) -> float:
        """Bottom ``c_i`` of the strip ``S_i``."""
        a1 = self.height_base
        return a1 * (1.0 - a1 ** (i - 1)) / (1.0 - a1)

    # exact arithmetic ---------------------------------------------------
    @property
    def width_base_q(self) -> Fraction:
        return Fraction(self.width_base).limit_denominator(10 ** 9)

    @property
    def height_base_q(self) -> Fraction:
        return Fraction(self.height_base).limit_denominator(10 ** 9)

    def exact_width(self, i: int) -> Fraction:
        a = self.width_base_q
        return (1 - a) * a ** (i - 1)

    def exact_height(self, i: int) -> Fraction:
        return self.height_base_q ** i

    def with_(self, **changes) -> "ModelSpec":
        d = asdict(self)
        d.update(changes)
        return ModelSpec(**d)

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_SPEC = ModelSpec()


@dataclass(frozen=True)
class Point:
    """A point ``(x, y)`` of the square with ``0 <= x < 1`` and ``0 <= y <= 1``."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError(f"non-finite point ({self.x}, {self.y})")
        if not (0.0 <= self.x < 1.0) or not (0.0 <= self.y <= 1.0):
            raise DomainError(f"point ({self.x}, {self.y}) outside [0,1) x [0,1]")


class InverseImage(NamedTuple):
    """Result of an inverse branch.  ``y`` is ``None`` when the input is off the strip."""

    x: float
    y: float | None
    on_strip: bool

    def point(self) -> Point:
        if self.y is None:
            raise DomainError("inverse image has no y-coordinate (input off the strip)")
        return Point(self.x, self.y)


# perturbation -----------------------------------------------------------

def g_eps(t, eps: float):
    """Horizontal perturbation ``t + eps/(2 pi) sin(2 pi t)``, a diffeomorphism of [0, 1]."""
    if eps == 0.0:
        return t
    return t + eps / TWO_PI * np.sin(TWO_PI * t)


def g_eps_prime(t, eps: float):
    return 1.0 + eps * np.cos(TWO_PI * np.asarray(t, dtype=float))


def g_eps_second(t, eps: float):
    return -TWO_PI * eps * np.sin(TWO_PI * np.asarray(t, dtype=float))


def g_eps_inverse(s, eps: float, tol: float = 1e-15, max_iter: int = 60):
    """Invert ``g_eps`` by safeguarded Newton iteration (vectorized)."""
    if eps == 0.0:
        return s
    s_arr = np.asarray(s, dtype=float)
    t = s_arr.copy()
    for _ in range(max_iter):
        step = (g_eps(t, eps) - s_arr) / g_eps_prime(t, eps)
        t = np.clip(t - step, 0.0, 1.0)
        if np.all(np.abs(step) <= tol):
            break
    return float(t) if np.ndim(s) == 0 else t


# branch geometry ----------------------------------------------------------

def locate(p: Point, spec: ModelSpec = DEFAULT_SPEC) -> int:
    """Symbol ``i`` of the rectangle ``E_i = [x_{i-1}, x_i)`` containing ``p``."""
    x = p.x if isinstance(p, Point) else float(p[0])
    if not (0.0 <= x < 1.0):
        raise DomainError(f"x = {x} outside [0, 1)")
    a = spec.width_base
    i = max(1, int(math.floor(math.log1p(-x) / math.log(a))) + 1)
    while i > 1 and x < spec.left_edge(i):
        i -= 1
    while x >= spec.left_edge(i + 1):
        i += 1
    return i


def locate_array(x: np.ndarray, spec: ModelSpec = DEFAULT_SPEC) -> np.ndarray:
    """Vectorized :func:`locate` on an array of x-coordinates in ``[0, 1)``."""
    x = np.asarray(x, dtype=float)
    if np.any((x < 0.0) | (x >= 1.0)) or not np.all(np.isfinite(x)):
        raise DomainError("x-coordinates outside [0, 1)")
    a = spec.width_base
    i = np.maximum(1, np.floor(np.log1p(-x) / math.log(a)).astype(np.int64) + 1)
    for _ in range(3):
        left = 1.0 - a ** (i - 1.0)
        i = np.where((i > 1) & (x < left), i - 1, i)
        right = 1.0 - a ** i.astype(float)
        i = np.where(x >= right, i + 1, i)
    return i


def local_coordinate(p: Point, i: int, spec: ModelSpec = DEFAULT_SPEC) -> float:
    """Affine coordinate ``t in [0, 1)`` of ``p.x`` inside ``E_i``."""
    return (p.x - spec.left_edge(i)) / spec.width(i)


def apply(p: Point, spec: ModelSpec = DEFAULT_SPEC) -> Point:
    """Image ``F(p) = f_i(p)`` with ``i = locate(p)``."""
    i = locate(p, spec)
    t = local_coordinate(p, i, spec)
    x_new = float(g_eps(t, spec.perturbation))
    y_new = spec.offset(i) + spec.height(i) * p.y
    if not (0.0 <= x_new < 1.0) or not math.isfinite(y_new):
        raise NumericError(f"image of ({p.x}, {p.y}) left the square")
    return Point(x_new, min(y_new, 1.0))


def apply_inverse_branch(p: Point, i: int, spec: ModelSpec = DEFAULT_SPEC) -> InverseImage:
    """Inverse of branch ``f_i`` at ``p``.

    The x-preimage always exists.  The y-preimage exists only when ``p.y``
    lies in the strip ``S_i``; otherwise ``y`` is ``None`` and ``on_strip``
    is ``False``.
    """
    if int(i) != i or i < 1:
        raise ArgumentError(f"symbol must be a positive integer, got {i!r}")
    w = spec.width(i)
    left = spec.left_edge(i)
    if w == 0.0 or left >= 1.0 or not math.isfinite(w):
        raise OverflowError(f"rectangle E_{i} is not representable in double precision")
    t = g_eps_inverse(p.x, spec.perturbation)
    x = left + w * t
    x = min(x, math.nextafter(1.0, 0.0))
    c, h = spec.offset(i), spec.height(i)
    if h > 0.0 and c <= p.y <= c + h:
        y = min(max((p.y - c) / h, 0.0), 1.0)
        return InverseImage(x, y, True)
    return InverseImage(x, None, False)


def unstable_derivative(p: Point, spec: ModelSpec = DEFAULT_SPEC) -> float:
    """Horizontal expansion ``D^u F(p) = g'(t) / w_i``."""
    i = locate(p, spec)
    t = local_coordinate(p, i, spec)
    return float(g_eps_prime(t, spec.perturbation)) / spec.width(i)


def unstable_derivative_array(x: np.ndarray, spec: ModelSpec = DEFAULT_SPEC) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    i = locate_array(x, spec)
    a = spec.width_base
    w = (1.0 - a) * a ** (i - 1.0)
    t = (x - (1.0 - a ** (i - 1.0))) / w
    return g_eps_prime(t, spec.perturbation) / w


def itinerary(p: Point, n: int, spec: ModelSpec = DEFAULT_SPEC) -> tuple[int, ...]:
    """Symbols ``(locate(p), locate(F p), ..., locate(F^{n-1} p))``."""
    if n < 1:
        raise ArgumentError("n must be at least 1")
    out = []
    x, y = p.x, p.y
    for k in range(n):
        if not (math.isfinite(x) and 0.0 <= x < 1.0):
            raise NumericError(f"orbit left [0, 1): x = {x}", step=k)
        q = Point(x, y)
        i = locate(q, spec)
        out.append(i)
        if k == n - 1:
            break
        t = local_coordinate(q, i, spec)
        x = float(g_eps(t, spec.perturbation))
        y = min(spec.offset(i) + spec.height(i) * y, 1.0)
    return tuple(out)


# condition verification ------------------------------------------------------

CONDITION_NAMES = ("G1", "G2", "G3", "H1", "H2", "H3", "H4", "H5", "D1", "BIV")


@dataclass
class ConditionEntry:
    """Outcome of one standing condition."""

    name: str
    passed: bool
    margin: float
    witness: dict | None = None
    constant: float | None = None
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "pass": bool(self.passed), "margin": self.margin,
                "witness": self.witness, "constant": self.constant, "detail": self.detail}


@dataclass
class ConditionReport:
    """Per-condition entries plus the extracted constants ``K_0``, ``C_0``, ``B_0``."""

    spec: ModelSpec
    entries: list[ConditionEntry]
    K0: float
    C0: float
    B0: float

    def __getitem__(self, name: str) -> ConditionEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    @property
    def all_passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def failed(self) -> list[str]:
        return [e.name for e in self.entries if not e.passed]

    def to_json(self) -> str:
        return json.dumps([e.to_dict() for e in self.entries], indent=2)

    def to_dict(self) -> dict:
        return {"spec": self.spec.to_dict(), "K0": self.K0, "C0": self.C0, "B0": self.B0,
                "conditions": [e.to_dict() for e in self.entries]}


def _finite(name: str, arr) -> None:
    if np.any(np.isnan(np.asarray(arr, dtype=float))):
        raise NumericError(f"NaN while evaluating {name}")


def _witness(i: int, t: float, spec: ModelSpec) -> dict:
    return {"symbol": int(i), "point": [spec.left_edge(i) + spec.width(i) * float(t), 0.0]}


def verify_conditions(spec: ModelSpec = DEFAULT_SPEC, samples: int = 64) -> ConditionReport:
    """Check the geometric, hyperbolicity, distortion and variation conditions.

    Every branch ``i <= spec.symbol_cap`` is evaluated on a grid of
    ``samples`` local coordinates, augmented by the critical points of the
    perturbation derivative so that the extremes of ``g'`` and ``|g''|/g'``
    are attained exactly.  For ``eps = 0`` the derivative is constant on
    each branch and the grid collapses to closed forms.  Beyond the cap all
    margins are monotone in ``i`` (widths shrink, heights shrink), which is
    recorded as the tail argument.

    Returns
    -------
    ConditionReport
    """
    if samples < 1:
        raise ArgumentError("samples must be at least 1")
    M = int(spec.symbol_cap)
    if M < 2:
        raise ArgumentError("symbol_cap must be at least 2")
    a, a1, alpha, eps = spec.width_base, spec.height_base, spec.cone_slope, spec.perturbation

    if eps == 0.0:
        t = np.array([0.0])
    else:
        crit = [0.0, 0.5]
        c = -eps
        crit += [math.acos(c) / TWO_PI, 1.0 - math.acos(c) / TWO_PI]
        t = np.unique(np.concatenate([np.arange(samples) / samples, crit]))
    i = np.arange(1, M + 1, dtype=float)[:, None]
    w = (1.0 - a) * a ** (i - 1.0)
    h = a1 ** i
    gp = g_eps_prime(t, eps)[None, :]
    gpp = np.abs(g_eps_second(t, eps))[None, :]
    F1x = gp / w
    F1y = np.zeros_like(F1x)
    F2x = np.zeros_like(F1x)
    F2y = np.broadcast_to(h, F1x.shape)
    J = np.abs(F1x * F2y - F1y * F2x)
    _finite("derivatives", F1x)
    tail = {"tail_argument": "margins monotone in i beyond the cap", "cap": M}

    def worst(arr):
        k = int(np.argmin(arr))
        r, c_ = divmod(k, arr.shape[1])
        return float(arr[r, c_]), _witness(r + 1, t[c_], spec)

    entries = []
    # G1: disjoint interiors, strips fit inside the square
    strip_total = a1 / (1.0 - a1)
    m = 1.0 - strip_total
    entries.append(ConditionEntry("G1", m > 0, m, None, strip_total,
                                  {"strip_total_height": strip_total}))
    # G2: the rectangles exhaust the square up to a null set
    aq = spec.width_base_q
    uncovered = abs(1 - (sum(spec.exact_width(k) for k in range(1, M + 1)) + aq ** M))
    m = 1.0 - a
    entries.append(ConditionEntry("G2", uncovered == 0 and m > 0, m, None, float(uncovered),
                                  {"uncovered_measure": str(uncovered), "tail_rate": a}))
    # G3: widths comparable to a**i with constant C~
    ratios = np.array([spec.width(k) / a ** k for k in range(1, M + 1)])
    ctilde = float(max(ratios.max(), (1.0 / ratios).max()))
    entries.append(ConditionEntry("G3", ctilde >= 1.0 and a < 1.0, 1.0 - a,
                                  {"symbol": 1}, ctilde, {"a": a, "b": a}))
    # H1 and H3
    lhs1 = F2x + alpha * F2y + alpha ** 2 * F1y
    m1, w1 = worst(alpha * F1x - lhs1)
    entries.append(ConditionEntry("H1", m1 > 0, m1, w1, None, dict(tail)))
    lhs3 = F1y + alpha * F2y + alpha ** 2 * F2x
    m3, w3 = worst(alpha * F1x - lhs3)
    entries.append(ConditionEntry("H3", m3 > 0, m3, w3, None, dict(tail)))
    # H2 and H4 define K0
    kh2, wh2 = worst(np.abs(F1x) - alpha * np.abs(F1y))
    kh4, wh4 = worst((np.abs(F1x) - alpha * np.abs(F2x)) / J)
    K0 = min(kh2, kh4)
    entries.append(ConditionEntry("H2", kh2 > 1.0, kh2 - 1.0, wh2, K0, {"K_H2": kh2, **tail}))
    entries.append(ConditionEntry("H4", kh4 > 1.0, kh4 - 1.0, wh4, K0, {"K_H4": kh4, **tail}))
    # H5: inverse expansion on the stable cone (sup norm); effective rate a1*
    s = np.linspace(-1.0, 1.0, max(samples, 3))
    rates = []
    for k in range(1, M + 1):
        v1, v2 = alpha * s, np.ones_like(s)
        wk = spec.width(k)
        gmax = float(np.max(g_eps_prime(t, eps)))
        inv1 = np.abs(v1) * wk / gmax
        inv2 = np.abs(v2) / spec.height(k)
        ratio = np.maximum(inv1, inv2) / np.maximum(np.abs(v1), np.abs(v2))
        rates.append(float(ratio.min()) ** (-1.0 / k))
    k5 = int(np.argmax(rates))
    a1_star = rates[k5]
    m5 = a - a1_star
    entries.append(ConditionEntry("H5", m5 > 0, m5, {"symbol": k5 + 1}, a1_star,
                                  {"effective_rate": a1_star, "width_base": a, "norm": "sup"}))
    # D1: sup |D^2 f| / |f_1x| * width, certificate C0 = 2 sup
    d1 = (gpp / w ** 2) / F1x * w
    k = int(np.argmax(d1))
    r, c_ = divmod(k, d1.shape[1])
    sup_d1 = float(d1[r, c_])
    C0 = 2.0 * sup_d1
    entries.append(ConditionEntry("D1", math.isfinite(sup_d1), C0 - sup_d1,
                                  _witness(r + 1, t[c_], spec), C0,
                                  {"sup": sup_d1, "analytic_sup": TWO_PI * eps / math.sqrt(1 - eps ** 2)}))
    # BIV: oscillation of log f_1x per branch, certificate B0 = 2 V
    logd = np.log(F1x)
    osc = logd.max(axis=1) - logd.min(axis=1)
    V = float(osc.max())
    B0 = 2.0 * V
    rv = int(np.argmax(osc))
    entries.append(ConditionEntry("BIV", math.isfinite(V), B0 - V,
                                  {"symbol": rv + 1,
                                   "points": [float(t[np.argmax(logd[rv])]), float(t[np.argmin(logd[rv])])]},
                                  B0, {"variation": V, "analytic": math.log((1 + eps) / (1 - eps))}))
    order = {n: k for k, n in enumerate(CONDITION_NAMES)}
    entries.sort(key=lambda e: order[e.name])
    return ConditionReport(spec, entries, K0=K0, C0=C0, B0=B0)
