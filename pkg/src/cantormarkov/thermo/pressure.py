"""Partition sums, Gurevich pressure and the discriminant scan.

Two readings of the periodic-orbit sum are provided.

``tower``
    Words of length ``n`` starting with 1 whose periodic repetition is
    admissible, weighted by ``exp(phi_n)``.
``induced``
    ``n``-fold loops of first-return words at state 1, weighted by the
    induced potential.  The induced alphabet is a full shift, so the sum is
    ``Z_1**n`` with ``Z_1(p) = sum_r q_r exp(p r)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence


from ..cantor import relative_measure
from ..errors import ArgumentError, DivergenceError
from ..model import DEFAULT_SPEC, ModelSpec
from ..returns import fit_exponential, returns_to_one_masses
from ..symbolic import is_admissible
from .potential import Caps, Potential

MODES = ("tower", "induced")


def is_cyclically_admissible(w: Sequence[int]) -> bool:
    """Admissibility of the infinite periodic repetition of ``w``.

    Prefix conditions are checked up to ``len(w) + max(w)`` symbols: past
    that point the prefix sum exceeds every symbol of the word.
    """
    w = tuple(w)
    if not w:
        return True
    reps = 1 + (max(w) + len(w)) // len(w) + 1
    return is_admissible(w * reps)


@dataclass
class ZInterval:
    """Bounds on a partition sum.  ``exact`` holds the rational value when available."""

    lower: float
    upper: float
    certified: bool = True
    exact: Fraction | None = None

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "certified": self.certified,
                "exact": None if self.exact is None else str(self.exact)}


@lru_cache(maxsize=256)
def tower_sum_exact(n: int, spec: ModelSpec = DEFAULT_SPEC, cap: int = 40) -> Fraction:
    """Exact sum over admissible words of length ``n`` from 1 with symbols ``<= cap``.

    Budget states at or above ``cap`` are merged, which is exact because
    such budgets allow every symbol up to the cap.
    """
    w = [None] + [spec.exact_width(v) for v in range(1, cap + 1)]
    states = {1: w[1]}
    for _ in range(n - 1):
        new: dict = {}
        for S, m in states.items():
            for v in range(1, min(S, cap) + 1):
                k = min(S + v, cap)
                new[k] = new.get(k, Fraction(0)) + m * w[v]
        states = new
    return sum(states.values(), Fraction(0))


def tower_tail(n: int, spec: ModelSpec, cap: int) -> float:
    """Mass dropped by the symbol cap: each of the ``n - 1`` steps loses at most ``a**cap``."""
    if cap >= 2 ** max(n - 2, 0):
        return 0.0
    return spec.width(1) * (n - 1) * spec.width_base ** cap


@lru_cache(maxsize=64)
def _induced_table(spec: ModelSpec, caps: Caps) -> tuple:
    q = returns_to_one_masses(caps.return_cap, spec, caps.symbol_cap, exact=caps.exact)
    qf = [float(v) for v in q]
    win = [(r, v) for r, v in enumerate(qf, start=1) if r >= caps.fit_from and v > 0]
    C, beta, r2, _ = fit_exponential([r for r, _ in win], [v for _, v in win])
    return tuple(q), C, beta, r2


def induced_envelope(spec: ModelSpec = DEFAULT_SPEC, caps: Caps = Caps()) -> dict:
    """Fitted envelope ``q_r ~ C beta**r`` of the induced weights and the divergence threshold."""
    q, C, beta, r2 = _induced_table(spec, caps)
    return {"C": C, "beta": beta, "r2": r2, "threshold": math.log(1.0 / beta),
            "truncated_mass": float(sum(q))}


def induced_z1(p: float, spec: ModelSpec = DEFAULT_SPEC, caps: Caps = Caps()) -> tuple[ZInterval, float]:
    """``Z_1(p)`` as an interval plus the envelope-based point estimate.

    For ``p <= 0`` the interval is certified: the induced weights of all
    first-return words add up to at most 1 (their cylinders, intersected
    with the landing set, are disjoint), so the omitted words contribute at
    most ``exp(p (R + 1)) (1 - sum_{r <= R} q_r)``.  For ``p > 0`` the tail
    uses the fitted envelope and the interval is flagged uncertified.

    Raises
    ------
    DivergenceError
        When ``exp(p) beta >= 1``.
    """
    q, C, beta, _ = _induced_table(spec, caps)
    R = len(q)
    ratio = beta * math.exp(p)
    threshold = math.log(1.0 / beta)
    if ratio >= 1.0:
        raise DivergenceError(f"induced sum diverges for p = {p} >= log(1/beta) = {threshold:.6f}",
                              threshold=threshold)
    lo_exact = None
    if p == 0.0 and caps.exact:
        lo_exact = sum(q, Fraction(0))
    lo = math.fsum(float(v) * math.exp(p * r) for r, v in enumerate(q, start=1))
    env = C * ratio ** (R + 1) / (1.0 - ratio)
    est = lo + env
    if p <= 0.0:
        missing = max(0.0, 1.0 - math.fsum(float(v) for v in q))
        hi = lo + math.exp(p * (R + 1)) * missing
        return ZInterval(lo, hi, True, lo_exact), min(est, hi)
    return ZInterval(lo, lo + 2.0 * env, False, lo_exact), est


def partition_sum(n: int, pot: Potential = Potential(), mode: str = "tower",
                  caps: Caps = Caps()) -> ZInterval:
    """Periodic-orbit sum ``Z_n`` at state 1 as an interval.

    Parameters
    ----------
    mode : {"tower", "induced"}
    """
    if n < 1:
        raise ArgumentError("n must be at least 1")
    spec = pot.spec
    if not spec.affine:
        raise ArgumentError("partition sums are implemented for the affine model")
    p = pot.shift
    if mode == "tower":
        z = tower_sum_exact(n, spec, caps.symbol_cap)
        tail = tower_tail(n, spec, caps.symbol_cap)
        f = math.exp(p * n)
        exact = z if p == 0.0 and tail == 0.0 else None
        return ZInterval(float(z) * f, (float(z) + tail) * f, True, exact)
    if mode == "induced":
        z1, _ = induced_z1(p, spec, caps)
        exact = z1.exact ** n if z1.exact is not None else None
        return ZInterval(z1.lower ** n, z1.upper ** n, z1.certified, exact)
    raise ArgumentError(f"unknown mode {mode!r}")


@dataclass
class PressureEstimate:
    """Table of ``Z_n`` intervals, slopes ``(1/n) log Z_n`` and a bracket for the pressure."""

    mode: str
    shift: float
    rows: list[dict]
    bracket: tuple[float, float]
    estimate: float
    certified: bool
    detail: dict = field(default_factory=dict)

    @property
    def half_width(self) -> float:
        return (self.bracket[1] - self.bracket[0]) / 2.0

    def to_dict(self) -> dict:
        return {"mode": self.mode, "shift": self.shift, "rows": self.rows,
                "bracket": list(self.bracket), "estimate": self.estimate,
                "half_width": self.half_width, "certified": self.certified, **self.detail}


def gurevich_pressure(pot: Potential = Potential(), n_max: int = 12, mode: str = "tower",
                      caps: Caps = Caps(), cantor_depth: int = 60) -> PressureEstimate:
    """Gurevich pressure from the partition-sum table.

    In tower mode the sums satisfy ``c_hat w_1 <= Z_n exp(-p n) <= w_1`` for
    every ``n``: the words counted by ``Z_n`` cover ``C_1`` and lie inside
    ``E_1``, and ``c_hat`` is the certified Cantor lower bound.  Hence the
    pressure lies in ``[s_n - log(w_1) / n, s_n - log(c_hat w_1) / n]`` with
    ``s_n = (1/n) log Z_n``.  For ``a = 1/2`` these are the bounds
    ``log 2 / n`` and ``log(2 / c_hat) / n``.  In induced mode ``Z_n = Z_1**n`` and the
    pressure is ``log Z_1`` exactly; the bracket is ``log`` of the ``Z_1``
    interval.
    """
    if n_max < 4:
        raise ArgumentError("n_max must be at least 4")
    rows = []
    p = pot.shift
    if mode == "tower":
        c_hat = float(relative_measure(1, cantor_depth, pot.spec).lower)
        for n in range(1, n_max + 1):
            z = partition_sum(n, pot, "tower", caps)
            rows.append({"n": n, "Z_lower": z.lower, "Z_upper": z.upper,
                         "Z_exact": None if z.exact is None else str(z.exact),
                         "slope": math.log(z.lower) / n})
        last = rows[-1]
        w1 = pot.spec.width(1)
        lo = (math.log(last["Z_lower"]) - math.log(w1)) / n_max
        hi = (math.log(last["Z_upper"]) - math.log(c_hat * w1)) / n_max
        return PressureEstimate(mode, p, rows, (lo, hi), (lo + hi) / 2.0, True,
                                {"c_hat": c_hat, "bound": math.log(1.0 / (c_hat * w1)) / n_max})
    if mode == "induced":
        z1, est = induced_z1(p, pot.spec, caps)
        for n in range(1, n_max + 1):
            rows.append({"n": n, "Z_lower": z1.lower ** n, "Z_upper": z1.upper ** n,
                         "Z_exact": None, "slope": math.log(z1.lower)})
        env = induced_envelope(pot.spec, caps)
        return PressureEstimate(mode, p, rows, (math.log(z1.lower), math.log(z1.upper)),
                                math.log(est), z1.certified, {"envelope": env})
    raise ArgumentError(f"unknown mode {mode!r}")


@dataclass
class DiscriminantTable:
    """Induced pressure of ``phi + p`` over a grid of shifts."""

    rows: list[dict]
    threshold: float
    positive: bool

    def to_dict(self) -> dict:
        return {"rows": self.rows, "threshold": self.threshold, "positive": self.positive}


def discriminant_scan(p_grid: Sequence[float], caps: Caps = Caps(),
                      spec: ModelSpec = DEFAULT_SPEC) -> DiscriminantTable:
    """Scan shifts ``p`` for finite positive induced pressure.

    The verdict is positive when some ``p`` gives a finite pressure whose
    lower bound is already above zero.
    """
    grid = list(p_grid)
    if len(set(grid)) != len(grid):
        raise ArgumentError("grid values must be distinct")
    env = induced_envelope(spec, caps)
    rows = []
    for p in grid:
        try:
            est = gurevich_pressure(Potential(spec, p), 4, "induced", caps)
            rows.append({"p": p, "finite": True, "lower": est.bracket[0], "upper": est.bracket[1],
                         "estimate": est.estimate, "certified": est.certified})
        except DivergenceError as err:
            rows.append({"p": p, "finite": False, "lower": None, "upper": None,
                         "estimate": math.inf, "certified": False, "threshold": err.threshold})
    positive = any(r["finite"] and r["lower"] > 0.0 for r in rows)
    return DiscriminantTable(rows, env["threshold"], positive)
