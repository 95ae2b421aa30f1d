"""Truncated transfer operators and their spectral data.

Two finite-dimensional truncations are provided.

``induced``
    The transfer operator of the first-return map to ``C_1`` acting on
    functions of depth-``d`` cylinders (admissible words of length ``d``
    starting with 1).  A preimage of a point with coding ``c`` under the
    return map has coding ``w[:-1] + c`` for a first-return word ``w``, and
    carries the weight ``exp(induced potential)``.
``tower``
    The transfer operator of ``F`` on the return-time tower, restricted to
    functions of the column ``r`` (return time) and level ``l``.  Levels move
    up with weight 1, the top of column ``r`` returns to the base with the
    total induced weight ``q_r e^{p r}`` of return time ``r``.

For the affine model the induced potential is locally constant, so the
induced operator maps the constant 1 to the induced mass and kills one level
of cylinder dependence per application.  The tower operator retains the
return-time structure and carries the spectral gap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..errors import ArgumentError, ConvergenceError
from ..model import ModelSpec
from ..returns import fit_exponential, mp1_words, returns_to_one_masses
from ..symbolic import enumerate_admissible
from .potential import Caps, Potential

OPERATORS = ("induced", "tower")


@dataclass
class CylinderTable:
    """Function values on depth-``depth`` cylinders with certified bounds.

    ``lower <= true value <= upper`` accounts for the truncation of the
    preimage sum; for a table that was given exactly the bounds coincide
    with ``values``.
    """

    depth: int
    words: list[tuple[int, ...]]
    values: np.ndarray
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if len(self.words) != len(self.values):
            raise ArgumentError("one value per cylinder is required")
        if self.lower is None:
            self.lower = self.values.copy()
        if self.upper is None:
            self.upper = self.values.copy()

    @classmethod
    def constant(cls, depth: int, value: float = 1.0, caps: Caps = Caps(depth=6, symbol_cap=20)):
        words = cylinder_words(depth, caps.symbol_cap)
        return cls(depth, words, np.full(len(words), float(value)))

    @classmethod
    def from_function(cls, depth: int, fn, caps: Caps = Caps(depth=6, symbol_cap=20)):
        words = cylinder_words(depth, caps.symbol_cap)
        return cls(depth, words, np.array([fn(w) for w in words], dtype=float))

    def __add__(self, other: "CylinderTable") -> "CylinderTable":
        self._check(other)
        return CylinderTable(self.depth, self.words, self.values + other.values,
                             self.lower + other.lower, self.upper + other.upper)

    def scale(self, alpha: float) -> "CylinderTable":
        lo, hi = alpha * self.lower, alpha * self.upper
        return CylinderTable(self.depth, self.words, alpha * self.values,
                             np.minimum(lo, hi), np.maximum(lo, hi))

    def _check(self, other):
        if self.depth != other.depth or len(self.words) != len(other.words):
            raise ArgumentError("tables live on different cylinder sets")

    def rows(self) -> list[dict]:
        return [{"word": "".join(f"{s}," for s in w).rstrip(","), "value": float(v),
                 "lower": float(lo), "upper": float(hi)}
                for w, v, lo, hi in zip(self.words, self.values, self.lower, self.upper)]


@lru_cache(maxsize=32)
def cylinder_words(depth: int, symbol_cap: int) -> list[tuple[int, ...]]:
    """Admissible words of length ``depth`` starting with 1 and symbols ``<= symbol_cap``."""
    if depth < 1:
        raise ArgumentError("depth must be at least 1")
    return enumerate_admissible((1,), depth, symbol_cap)


def _closing_state(word) -> tuple[int, int]:
    """Running sum ``T`` and largest alive 1-suffix sum ``A`` after ``word`` (starting with 1)."""
    T, alive = word[0], ()
    for v in word[1:]:
        alive = tuple(s + v for s in alive if v <= s)
        if v == 1:
            alive += (1,)
        T += v
    return T, (max(alive) if alive else 0)


def _completion_table(steps: int, spec: ModelSpec, cap: int, p: float) -> np.ndarray:
    """``V[T, A]``: total weight of ways to close a first return within ``steps`` more symbols.

    Closing appends the landing symbol 1 (weight excluded) when no 1-suffix
    is alive; each added symbol ``v`` contributes ``w_v e^p``.
    """
    w = np.array([0.0] + [spec.width(v) * math.exp(p) for v in range(1, cap + 1)])
    V = np.zeros((cap + 1, cap))
    V[:, 0] = 1.0
    closing = V.copy()
    for _ in range(steps):
        new = closing.copy()
        for T in range(1, cap + 1):
            for A in range(cap):
                tot = 0.0
                for v in range(1, T + 1):
                    A2 = A + v if A >= v else (1 if v == 1 else 0)
                    if A2 >= cap:
                        continue
                    tot += w[v] * V[min(T + v, cap), A2]
                new[T, A] += tot
        V = new
    return V


@dataclass
class InducedOperator:
    """Matrix of the induced transfer operator on depth-``d`` cylinder tables.

    ``matrix`` has one row per depth-``(d-1)`` cylinder and one column per
    depth-``d`` cylinder; ``square`` lifts rows back to depth ``d``.
    ``tail`` bounds the omitted weight of return words beyond the caps.
    """

    depth: int
    spec: ModelSpec
    caps: Caps
    shift: float
    words: list[tuple[int, ...]]
    parents: list[tuple[int, ...]]
    matrix: np.ndarray
    tail: float

    @property
    def square(self) -> np.ndarray:
        index = {w: k for k, w in enumerate(self.parents)}
        return self.matrix[[index[w[:-1]] for w in self.words], :]

    @property
    def mass(self) -> float:
        """Truncated total induced weight ``sum_w exp(phi_bar(w))``."""
        return float(self.matrix.sum(axis=1)[0])


def induced_operator(pot: Potential = Potential(), caps: Caps = Caps(depth=6, symbol_cap=20)) -> InducedOperator:
    """Assemble the induced operator for return times ``<= caps.return_cap``."""
    spec, p = pot.spec, pot.shift
    if not spec.affine:
        raise ArgumentError("the induced operator needs the locally constant (affine) potential")
    d, S, R = caps.depth, caps.symbol_cap, caps.return_cap
    if d < 2:
        raise ArgumentError("depth must be at least 2")
    if R < d:
        raise ArgumentError("return_cap must be at least the depth")
    words = cylinder_words(d, S)
    parents = cylinder_words(d - 1, S)
    col = {w: k for k, w in enumerate(words)}
    M = np.zeros((len(parents), len(words)))
    for rw in mp1_words(d, symbol_cap=S):
        head = rw.word[:-1]
        wt = math.prod(spec.width(s) for s in head) * math.exp(p * len(head))
        for i, c in enumerate(parents):
            M[i, col[(head + c)[:d]]] += wt
    V = _completion_table(R - d, spec, S, p)
    for j, w in enumerate(words):
        T, A = _closing_state(w)
        if A >= S:
            continue
        G = math.prod(spec.width(s) for s in w) * math.exp(p * d) * V[min(T, S), A]
        M[:, j] += G
    q = returns_to_one_masses(R, spec, S)
    if p > 0:
        tail = math.inf
    else:
        tail = max(0.0, 1.0 - math.fsum(q)) * math.exp(p * (R + 1))
    return InducedOperator(d, spec, caps, p, words, parents, M, tail)


def transfer_apply(f: CylinderTable, pot: Potential = Potential(),
                   caps: Caps | None = None, op: InducedOperator | None = None) -> CylinderTable:
    """Apply the induced transfer operator to a depth-``d`` table.

    Returns the table of ``L f`` on depth-``(d-1)`` cylinders.  The omitted
    return words add at most ``tail * sup|f|``, which widens the bounds.
    """
    if f.depth < 1:
        raise ArgumentError("input table must have depth at least 1")
    if f.depth < 2:
        raise ArgumentError("depth-1 tables have no depth-0 image on this cylinder set")
    if op is None:
        caps = caps or Caps(depth=f.depth, symbol_cap=20)
        if caps.depth != f.depth:
            caps = Caps(caps.symbol_cap, caps.return_cap, f.depth, caps.fit_from, caps.exact)
        op = induced_operator(pot, caps)
    if op.words != f.words:
        raise ArgumentError("table cylinders do not match the operator")
    out = op.matrix @ f.values
    lo = op.matrix @ f.lower
    hi = op.matrix @ f.upper
    lo_f = min(0.0, float(f.lower.min()))
    hi_f = max(0.0, float(f.upper.max()))
    lo = lo + op.tail * lo_f
    hi = hi + op.tail * hi_f
    return CylinderTable(f.depth - 1, op.parents, out, lo, hi)


@dataclass
class RenewalOperator:
    """Tower transfer operator on functions of (return time ``r``, level ``l``)."""

    return_cap: int
    weights: np.ndarray
    states: list[tuple[int, int]]
    matrix: np.ndarray

    @property
    def truncated_mass(self) -> float:
        return float(self.weights.sum())


def renewal_operator(pot: Potential = Potential(), caps: Caps = Caps()) -> RenewalOperator:
    """Build the tower operator from the induced weights ``q_r e^{p r}``, ``r <= return_cap``."""
    R = caps.return_cap
    q = np.array([float(v) for v in returns_to_one_masses(R, pot.spec, caps.symbol_cap)])
    q = q * np.exp(pot.shift * np.arange(1, R + 1))
    states = [(r, l) for r in range(1, R + 1) for l in range(r)]
    index = {s: k for k, s in enumerate(states)}
    L = np.zeros((len(states), len(states)))
    for (r, l), k in index.items():
        if l == 0:
            for r2 in range(1, R + 1):
                L[k, index[(r2, r2 - 1)]] = q[r2 - 1]
        else:
            L[k, index[(r, l - 1)]] = 1.0
    return RenewalOperator(R, q, states, L)


@dataclass
class SpectralReport:
    """Leading eigendata, subleading ratio and decay curve of a truncated operator.

    Residual norms are sup norms over the truncated state set (constant
    weight function).
    """

    operator: str
    caps: dict
    lam: float
    lam_bounds: tuple[float, float]
    h: np.ndarray
    nu: np.ndarray
    labels: list
    ratio: float
    ratio_r2: float
    decay: list[tuple[int, float]]
    slope: float
    slope_r2: float
    window: tuple[int, int]
    iterations: int
    detail: dict = field(default_factory=dict)

    @property
    def gap(self) -> bool:
        return self.ratio < 1.0

    def decay_rows(self) -> list[dict]:
        return [{"n": n, "residual": r} for n, r in self.decay]

    def to_dict(self) -> dict:
        def fmt(lab):
            return ",".join(str(s) for s in lab)

        return {"operator": self.operator, "caps": self.caps, "lambda": self.lam,
                "lambda_bounds": list(self.lam_bounds), "subleading_ratio": self.ratio,
                "ratio_r2": self.ratio_r2, "decay_slope": self.slope, "decay_r2": self.slope_r2,
                "log_ratio": math.log(self.ratio) if self.ratio > 0 else None,
                "fit_window": list(self.window), "iterations": self.iterations,
                "norm": "sup over truncated states",
                "h": [{"state": fmt(l), "value": float(v)} for l, v in zip(self.labels, self.h)],
                "nu": [{"state": fmt(l), "value": float(v)} for l, v in zip(self.labels, self.nu)],
                **self.detail}


def _log_slope(ns, vals, floor):
    pts = [(n, v) for n, v in zip(ns, vals) if v > floor]
    if len(pts) < 3:
        return -math.inf, 1.0
    _, beta, r2, _ = fit_exponential([n for n, _ in pts], [v for _, v in pts])
    return math.log(beta), r2


def _spectral(K: np.ndarray, f: np.ndarray, iters: int, tol: float = 1e-9):
    n = K.shape[0]
    h = np.ones(n)
    nu = np.ones(n) / n
    lam_hist = []
    for _ in range(iters):
        Kh = K @ h
        lam_hist.append(float(np.max(Kh) / np.max(h)))
        h = Kh / np.max(Kh)
        nu = nu @ K
        nu = nu / nu.sum()
    Kh = K @ h
    lam = float(nu @ Kh / (nu @ h))
    pos = h > 0
    cw = (float(np.min(Kh[pos] / h[pos])), float(np.max(Kh[pos] / h[pos])))
    if not (np.all(h > 0) and lam > 0) or abs(lam_hist[-1] - lam_hist[-2]) > tol * lam:
        raise ConvergenceError("power iteration did not settle",
                               {"lambda_history": lam_hist[-5:], "collatz_wielandt": cw})
    nu = np.clip(nu, 0.0, None)
    nu = nu / nu.sum()
    h = h / float(nu @ h)
    return lam, cw, h, nu


def power_iterate(pot: Potential = Potential(), caps: Caps = Caps(depth=6, symbol_cap=20),
                  iters: int = 200, operator: str = "induced", test_function=None) -> SpectralReport:
    """Power iteration for the leading eigendata and the subleading ratio.

    Parameters
    ----------
    operator : {"induced", "tower"}
    test_function : array, optional
        Vector on the operator's states used for the decay curve; defaults to
        the indicator of the first coordinate block (base level or words
        whose second symbol is 1).

    Notes
    -----
    ``lambda`` is the Rayleigh quotient ``nu K h / nu h`` of the left and
    right iterates.  The subleading ratio comes from deflated iteration:
    ``g -> (K g) / lambda`` followed by removal of the ``h`` component, with
    an exponential fit of ``|g_n|`` over the second half of the run.  The
    decay curve ``|lambda^{-n} K^n f - h nu(f)|`` is computed without
    deflation and fitted on the window where it exceeds ``1e-9``.
    """
    if iters < 2:
        raise ArgumentError("iters must be at least 2")
    if operator == "induced":
        op = induced_operator(pot, caps)
        K, labels = op.square, op.words
        default_f = np.array([1.0 if w[1] == 1 else 0.0 for w in labels])
        info = {"induced_mass": op.mass, "tail": op.tail, "states": len(labels)}
        cap_d = {"symbol_cap": caps.symbol_cap, "depth": caps.depth, "return_cap": caps.return_cap}
    elif operator == "tower":
        op = renewal_operator(pot, caps)
        K, labels = op.matrix, op.states
        default_f = np.array([1.0 if l == 0 else 0.0 for _, l in labels])
        info = {"truncated_mass": op.truncated_mass, "states": len(labels)}
        cap_d = {"symbol_cap": caps.symbol_cap, "return_cap": caps.return_cap}
    else:
        raise ArgumentError(f"unknown operator {operator!r}")
    f = default_f if test_function is None else np.asarray(test_function, dtype=float)
    lam, cw, h, nu = _spectral(K, f, iters)
    proj = h * float(nu @ f)
    g = f - proj
    g_norms, decay = [], []
    x = f.copy()
    for k in range(1, iters + 1):
        g = (K @ g) / lam
        g = g - h * float(nu @ g)
        g_norms.append(float(np.max(np.abs(g))))
        x = (K @ x) / lam
        decay.append((k, float(np.max(np.abs(x - proj)))))
    half = iters // 2
    ns = list(range(half + 1, iters + 1))
    slope_g, ratio_r2 = _log_slope(ns, g_norms[half:], 1e-250)
    ratio = math.exp(slope_g) if math.isfinite(slope_g) else 0.0
    win = [(n, v) for n, v in decay if v > 1e-9 and n > iters // 4]
    slope, slope_r2 = _log_slope([n for n, _ in win], [v for _, v in win], 0.0)
    window = (win[0][0], win[-1][0]) if win else (0, 0)
    if not math.isfinite(slope):
        info["nilpotent"] = True
    return SpectralReport(operator, cap_d, lam, cw, h, nu, labels, ratio, ratio_r2, decay,
                          slope, slope_r2, window, iters, info)
