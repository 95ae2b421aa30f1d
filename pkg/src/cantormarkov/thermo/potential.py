"""Potentials, induced potentials, the cohomology series and separation times."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


from ..errors import ArgumentError, InsufficientDataError
from ..model import DEFAULT_SPEC, ModelSpec, Point, g_eps, g_eps_prime, locate
from ..returns import ReturnWord
from ..symbolic import as_word, cylinder_interval, exact_weight


@dataclass(frozen=True)
class Caps:
    """Truncation parameters for infinite sums over symbols and words.

    Attributes
    ----------
    symbol_cap : int
        Largest symbol kept in any word.
    return_cap : int
        Largest return time kept for the induced system.
    depth : int
        Cylinder depth of function tables on the induced system.
    fit_from : int
        First return time used when fitting the geometric envelope of the
        induced tail.
    exact : bool
        Use rational arithmetic where available.
    """

    symbol_cap: int = 40
    return_cap: int = 40
    depth: int = 6
    fit_from: int = 6
    exact: bool = False

    def __post_init__(self):
        if self.symbol_cap < 1 or self.return_cap < 1:
            raise ArgumentError("caps must be positive")


@dataclass(frozen=True)
class Potential:
    """``phi = -log D^u F`` plus a constant shift ``p``.

    For the affine model ``phi`` equals ``log w_i`` on ``E_i``.
    """

    spec: ModelSpec = DEFAULT_SPEC
    shift: float = 0.0

    def shifted(self, p: float) -> "Potential":
        return Potential(self.spec, self.shift + p)

    def symbol_value(self, i: int) -> float:
        """Value on ``E_i`` (affine model) or the upper end of its range otherwise."""
        return math.log(self.spec.width(i)) - math.log(1.0 - self.spec.perturbation) + self.shift

    def symbol_bounds(self, i: int) -> tuple[float, float]:
        eps = self.spec.perturbation
        lw = math.log(self.spec.width(i))
        return lw - math.log1p(eps) + self.shift, lw - math.log1p(-eps) + self.shift

    def at(self, p: Point) -> float:
        """Pointwise value ``-log D^u F(p) + shift``."""
        i = locate(p, self.spec)
        t = (p.x - self.spec.left_edge(i)) / self.spec.width(i)
        return math.log(self.spec.width(i)) - math.log(float(g_eps_prime(t, self.spec.perturbation))) + self.shift


def log_weight(w: Sequence[int], pot: Potential) -> Fraction:
    """Exact ``exp`` of the unshifted Birkhoff sum (affine model): the cylinder width."""
    if not pot.spec.affine:
        raise ArgumentError("exact weights need the affine model")
    return exact_weight(as_word(w), pot.spec)


def potential_value(w: Sequence[int], pot: Potential = Potential()) -> float:
    """Birkhoff sum ``phi_n`` over the word ``w`` (plus ``n p``).

    For the affine model this is ``sum log w_{i_k}``, the log of the exact
    cylinder width.  With a perturbation it is the log of the cylinder
    width, i.e. the log of the average of ``exp(phi_n)`` over the cylinder.
    """
    w = as_word(w)
    if not w:
        raise ArgumentError("word must be nonempty")
    if pot.spec.affine:
        val = sum(math.log(pot.spec.width(s)) for s in w)
    else:
        lo, hi = cylinder_interval(w, pot.spec)
        val = math.log(hi - lo)
    return val + len(w) * pot.shift


def potential_bounds(w: Sequence[int], pot: Potential = Potential()) -> tuple[float, float]:
    """Certified range of ``phi_n`` over the cylinder ``E_w``."""
    w = as_word(w)
    lo = sum(pot.symbol_bounds(s)[0] for s in w)
    hi = sum(pot.symbol_bounds(s)[1] for s in w)
    return lo, hi


def induced_potential(rw: ReturnWord, pot: Potential = Potential()) -> float:
    """Sum of ``phi`` over the first ``return_time`` symbols (landing symbol excluded)."""
    return potential_value(rw.word[:-1], pot)


# cohomology -------------------------------------------------------------------------

def _phi_x(x: float, spec: ModelSpec) -> float:
    i = locate(Point(x, 0.0), spec)
    t = (x - spec.left_edge(i)) / spec.width(i)
    return math.log(spec.width(i)) - math.log(float(g_eps_prime(t, spec.perturbation)))


def reference_height(p: Point, spec: ModelSpec = DEFAULT_SPEC) -> float:
    """Height ``y_0`` of the reference unstable leaf of the element containing ``p``.

    Elements are full-height rectangles, so the leaf is their bottom edge.
    """
    return 0.0


def cohomology_u(p: Point, depth: int, spec: ModelSpec = DEFAULT_SPEC,
                 C: float | None = None, theta0: float | None = None) -> tuple[float, float]:
    """Truncated series ``u = sum_k Phi(F^k(x, y)) - Phi(F^k(x, y_0))`` with its tail bound.

    ``Phi = -log D^u F``.  The tail after ``depth`` terms is bounded by
    ``C theta0**depth / (1 - theta0)`` using the constants of the variation
    fit; they are computed with :func:`variation_check` when omitted.

    Returns
    -------
    (value, tail_bound)
    """
    if depth < 1:
        raise ArgumentError("depth must be at least 1")
    y0 = reference_height(p, spec)
    x1, y1 = p.x, p.y
    x2, y2 = p.x, y0
    total = 0.0
    for _ in range(depth):
        total += _phi_x(x1, spec) - _phi_x(x2, spec)
        i1, i2 = locate(Point(x1, 0.0), spec), locate(Point(x2, 0.0), spec)
        x1 = float(g_eps((x1 - spec.left_edge(i1)) / spec.width(i1), spec.perturbation))
        x2 = float(g_eps((x2 - spec.left_edge(i2)) / spec.width(i2), spec.perturbation))
        y1 = spec.offset(i1) + spec.height(i1) * y1
        y2 = spec.offset(i2) + spec.height(i2) * y2
    if spec.affine:
        return total, 0.0
    if C is None or theta0 is None:
        from ..symbolic import RectangleSpec, variation_check

        fit = variation_check(RectangleSpec((1,), (1,)), 12, spec)
        C, theta0 = fit.C, fit.theta0
    return total, C * theta0 ** depth / (1.0 - theta0)


# separation times ------------------------------------------------------------------

@dataclass(frozen=True)
class SeparationTimes:
    """First disagreement index ``t`` and number ``s1`` of common 1-symbols before it."""

    t: int
    s1: int


def separation(x: Sequence[int], y: Sequence[int]) -> SeparationTimes:
    """Separation time of two symbol sequences and the count of shared 1s before it."""
    n = min(len(x), len(y))
    for k in range(n):
        if x[k] != y[k]:
            return SeparationTimes(k, sum(1 for s in x[:k] if s == 1))
    raise InsufficientDataError("the given prefixes agree; extend them until they differ")
