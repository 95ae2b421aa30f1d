"""First-return words, the induced alphabet at state 1, return-time tails and mixing.

A return word ``[j0, i_1, ..., i_{n-2}, j1]`` is admissible while every
intermediate suffix ``[i_k, ..., j1]`` (``1 <= k <= n - 2``) is not.  The
words returning to the symbol 1 compose into the induced alphabet whose
transition matrix consists of ones only.

Masses of words are computed by dynamic programming over the state
``(T, A)``: ``T`` is the running prefix sum (capping the next symbol) and
``A`` the largest sum among the suffixes that are still admissible.  A new
symbol ``v`` keeps a suffix with sum ``s`` alive iff ``v <= s``; when
``v <= A`` the largest alive suffix grows to ``A + v``, otherwise all older
suffixes die and ``v`` itself is the largest.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import ArgumentError
from .model import DEFAULT_SPEC, ModelSpec
from .symbolic import as_word, exact_weight, is_admissible

MODES = ("strict_suffix", "no_interior_one")


# return words ------------------------------------------------------------------

def is_return_word(w: Sequence[int]) -> bool:
    """Admissible, length at least 2, and every intermediate suffix inadmissible."""
    w = tuple(w)
    if len(w) < 2 or not is_admissible(w):
        return False
    return all(not is_admissible(w[k:]) for k in range(1, len(w) - 1))


def is_first_return_to_one(w: Sequence[int]) -> bool:
    """First return to ``C_1``: starts and ends with 1, admissible, and every
    intermediate 1 starts an inadmissible suffix."""
    w = tuple(w)
    if len(w) < 2 or w[0] != 1 or w[-1] != 1 or not is_admissible(w):
        return False
    return all(not is_admissible(w[k:]) for k in range(1, len(w) - 1) if w[k] == 1)


@dataclass(frozen=True, order=True)
class ReturnWord:
    """A first-return word with its source, target and return time."""

    word: tuple[int, ...]
    mode: str = field(default="strict_suffix", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "word", as_word(self.word))
        if len(self.word) < 2:
            raise ArgumentError("a return word has at least two symbols")

    @classmethod
    def checked(cls, w: Sequence[int]) -> "ReturnWord":
        if not is_return_word(w):
            raise ArgumentError(f"{list(w)} is not a first-return word")
        return cls(tuple(w))

    @property
    def source(self) -> int:
        return self.word[0]

    @property
    def target(self) -> int:
        return self.word[-1]

    @property
    def return_time(self) -> int:
        return len(self.word) - 1

    def width(self, spec: ModelSpec = DEFAULT_SPEC) -> Fraction:
        return exact_weight(self.word, spec)

    def weight(self, spec: ModelSpec = DEFAULT_SPEC) -> Fraction:
        """``exp`` of the induced potential: product of widths, landing symbol excluded."""
        return exact_weight(self.word[:-1], spec)

    def to_dict(self, spec: ModelSpec = DEFAULT_SPEC) -> dict:
        return {"word": list(self.word), "source": self.source, "target": self.target,
                "return_time": self.return_time, "width": str(self.width(spec))}


def first_return_words(j0: int, j1: int, max_len: int | None = None) -> list[ReturnWord]:
    """All first-return words from ``j0`` to ``j1`` in lexicographic order.

    Every alive intermediate suffix must end with a sum below ``j1`` (the
    closing symbol has to exceed it), and alive sums never decrease while
    alive, so a branch is pruned as soon as an alive sum reaches ``j1``.
    The search is finite; ``max_len`` is only a safety guard.
    """
    if j0 < 1 or j1 < 1:
        raise ArgumentError("symbols must be positive")
    guard = max_len if max_len is not None else 4 * j1 + 8
    out: list[ReturnWord] = []
    word = [j0]

    def rec(total: int, alive: tuple[int, ...]):
        if j1 <= total and all(s < j1 for s in alive):
            out.append(ReturnWord(tuple(word) + (j1,)))
        if len(word) + 1 >= guard:
            return
        for v in range(1, min(total, j1 - 1) + 1):
            new_alive = tuple(s + v for s in alive if v <= s) + (v,)
            if max(new_alive) >= j1:
                continue
            word.append(v)
            rec(total + v, new_alive)
            word.pop()

    rec(j0, ())
    out.sort()
    return out


def return_words_from(j0: int, max_len: int, symbol_cap: int | None = None,
                      exclude_target: int | None = None) -> Iterator[tuple[int, ...]]:
    """Stream all first-return words from ``j0`` of length ``<= max_len``."""
    word = [j0]

    def rec(total: int, alive: tuple[int, ...]):
        amax = max(alive) if alive else 0
        hi = total if symbol_cap is None else min(total, symbol_cap)
        for j1 in range(amax + 1, hi + 1):
            if j1 != exclude_target:
                yield tuple(word) + (j1,)
        if len(word) + 1 >= max_len:
            return
        for v in range(1, hi + 1):
            new_alive = tuple(s + v for s in alive if v <= s) + (v,)
            word.append(v)
            yield from rec(total + v, new_alive)
            word.pop()

    yield from rec(j0, ())


def length_bound_violations(max_symbol: int, bound: str = "stated") -> list[ReturnWord]:
    """Return words with source, target ``<= max_symbol`` that break a length bound.

    ``bound="stated"`` tests ``len <= target - source + 2``;
    ``bound="target"`` tests ``len <= target + 1``.
    """
    bad = []
    for j0 in range(1, max_symbol + 1):
        for j1 in range(1, max_symbol + 1):
            limit = j1 - j0 + 2 if bound == "stated" else j1 + 1
            bad.extend(rw for rw in first_return_words(j0, j1) if len(rw.word) > limit)
    return bad


# induced alphabet at state 1 --------------------------------------------------------

def _mp1_strict(max_len: int, symbol_cap: int | None) -> Iterator[tuple[int, ...]]:
    word = [1]

    def rec(total: int, alive: tuple[int, ...]):
        if not alive:
            yield tuple(word) + (1,)
        if len(word) + 1 >= max_len:
            return
        hi = total if symbol_cap is None else min(total, symbol_cap)
        for v in range(1, hi + 1):
            new_alive = tuple(s + v for s in alive if v <= s)
            if v == 1:
                new_alive += (1,)
            word.append(v)
            yield from rec(total + v, new_alive)
            word.pop()

    yield from rec(1, ())


def _mp1_no_interior_one(max_len: int, symbol_cap: int) -> Iterator[tuple[int, ...]]:
    word = [1]

    def rec():
        yield tuple(word) + (1,)
        if len(word) + 1 >= max_len:
            return
        for v in range(2, symbol_cap + 1):
            word.append(v)
            yield from rec()
            word.pop()

    yield from rec()


def mp1_words(max_len: int, mode: str = "strict_suffix", symbol_cap: int | None = None) -> list[ReturnWord]:
    """First-return words to the symbol 1 up to length ``max_len``.

    Parameters
    ----------
    mode : {"strict_suffix", "no_interior_one"}
        ``strict_suffix``: admissible words ``[1, ..., 1]`` in which every
        intermediate 1 starts an inadmissible suffix, i.e. the itinerary does
        not come back to ``C_1`` before the end.  ``no_interior_one``: the
        full-shift alphabet ``[1, xi_2, ..., xi_{n-2}, 1]`` with interior
        symbols different from 1 and no admissibility requirement; it needs a
        finite ``symbol_cap``.
    """
    if max_len < 2:
        raise ArgumentError("max_len must be at least 2")
    if mode == "strict_suffix":
        words = _mp1_strict(max_len, symbol_cap)
    elif mode == "no_interior_one":
        if symbol_cap is None:
            raise ArgumentError("no_interior_one needs a finite symbol_cap")
        words = _mp1_no_interior_one(max_len, symbol_cap)
    else:
        raise ArgumentError(f"unknown mode {mode!r}")
    return sorted(ReturnWord(w, mode) for w in words)


def mp1_words_composed(max_len: int, symbol_cap: int | None = None) -> list[ReturnWord]:
    """Induced words built by chaining first-return words through targets other
    than 1 and closing with a single step ``[i, 1]``.  Used as an independent
    construction of the ``strict_suffix`` alphabet."""
    out = set()

    def chain(prefix: tuple[int, ...]):
        last = prefix[-1]
        if is_admissible(prefix + (1,)) and (len(prefix) == 1 or last != 1):
            out.add(prefix + (1,))
        room = max_len - len(prefix)
        if room < 1:
            return
        for rw in return_words_from(last, room + 1, symbol_cap, exclude_target=1):
            cand = prefix + rw[1:]
            if len(cand) < max_len and is_admissible(cand):
                chain(cand)

    chain((1,))
    return sorted(ReturnWord(w) for w in out if len(w) <= max_len and is_first_return_to_one(w))


def transition_matrix(words: Sequence[ReturnWord]) -> np.ndarray:
    """0/1 matrix: entry ``(u, v)`` is 1 when ``v`` can follow ``u``.

    ``v`` follows ``u`` when ``u`` lands on ``v``'s source and the merged
    word is admissible (for the induced full shift every merge is allowed).
    """
    n = len(words)
    M = np.zeros((n, n), dtype=np.int8)
    for a, u in enumerate(words):
        for b, v in enumerate(words):
            if u.target != v.source:
                continue
            if v.mode == "no_interior_one" or is_admissible(u.word + v.word[1:]):
                M[a, b] = 1
    return M


# mass tables ---------------------------------------------------------------------

def _weights(spec: ModelSpec, cap: int, exact: bool):
    if exact:
        return [None] + [spec.exact_width(v) for v in range(1, cap + 1)]
    return [None] + [spec.width(v) for v in range(1, cap + 1)]


def returns_to_c_masses(n_max: int, spec: ModelSpec = DEFAULT_SPEC, cap: int | None = None,
                        exact: bool = True) -> list:
    """Relative mass ``m_n`` of cylinders of return words from 1 with return time ``n``.

    Symbols are capped at ``cap``; the omitted mass is bounded by
    :func:`truncation_tail`.
    """
    cap = cap or spec.symbol_cap
    w = _weights(spec, cap, exact)
    a = spec.width_base_q if exact else spec.width_base
    zero = Fraction(0) if exact else 0.0
    states = {(1, 0): Fraction(1) if exact else 1.0}
    out = []
    for _ in range(n_max):
        tot = zero
        for (T, A), m in states.items():
            hi = min(T, cap)
            if A + 1 <= hi:
                tot += m * (a ** A - a ** hi)
        out.append(tot)
        new: dict = {}
        for (T, A), m in states.items():
            for v in range(1, min(T, cap) + 1):
                A2 = A + v if A >= v else v
                if A2 >= cap:
                    continue
                k = (min(T + v, cap), A2)
                new[k] = new.get(k, zero) + m * w[v]
        states = new
    return out


@lru_cache(maxsize=64)
def _returns_to_one(r_max: int, spec: ModelSpec, cap: int, exact: bool) -> tuple:
    w = _weights(spec, cap, exact)
    zero = Fraction(0) if exact else 0.0
    states = {(1, 0): w[1]}
    out = []
    for _ in range(r_max):
        out.append(sum((m for (T, A), m in states.items() if A == 0), zero))
        new: dict = {}
        for (T, A), m in states.items():
            for v in range(1, min(T, cap) + 1):
                if A >= v:
                    A2 = A + v
                else:
                    A2 = 1 if v == 1 else 0
                if A2 >= cap:
                    continue
                k = (min(T + v, cap), A2)
                new[k] = new.get(k, zero) + m * w[v]
        states = new
    return tuple(out)


def returns_to_one_masses(r_max: int, spec: ModelSpec = DEFAULT_SPEC, cap: int | None = None,
                          exact: bool = False) -> list:
    """``q_r``: total induced weight of first-return words to 1 with return time ``r``.

    The weight of a word is the product of the widths of its first ``r``
    symbols, i.e. ``exp`` of the induced potential.  The state tracks only
    suffixes that start at an intermediate 1; a word may close with 1 when
    none of them is alive.  Symbols are capped at ``cap``.
    """
    cap = cap or spec.symbol_cap
    return list(_returns_to_one(int(r_max), spec, int(cap), bool(exact)))


def truncation_tail(n: int, spec: ModelSpec, cap: int) -> float:
    """Upper bound on mass lost by capping symbols at ``cap`` over ``n`` steps."""
    a = spec.width_base
    return (n + 1) * a ** cap / (1.0 - a)


# tail fits and the return-time lemma --------------------------------------------------

@dataclass
class TailFit:
    """Exact tail table and its exponential fit ``mass_n ~ C beta**n``."""

    kind: str
    n: list[int]
    mass: list
    bound: list
    C: float
    beta: float
    r2: float
    residual: float
    window: tuple[int, int]
    lemma: dict | None = None
    truncation: float = 0.0

    @property
    def passed(self) -> bool:
        ok = 0.0 < self.beta < 1.0
        if self.lemma is not None:
            ok = ok and self.lemma["counterexamples"] == 0
        return ok and all(float(m) <= float(b) + self.truncation for m, b in zip(self.mass, self.bound))

    def rows(self) -> list[tuple[int, float, float]]:
        return [(n, float(m), float(b)) for n, m, b in zip(self.n, self.mass, self.bound)]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "C": self.C, "beta": self.beta, "r2": self.r2,
                "residual": self.residual, "window": list(self.window), "lemma": self.lemma,
                "truncation": self.truncation,
                "rows": [{"n": n, "mass": m, "bound": b} for n, m, b in self.rows()]}


def fit_exponential(ns: Sequence[int], values: Sequence[float]) -> tuple[float, float, float, float]:
    """Least-squares fit of ``log values = log C + n log beta``; returns ``(C, beta, r2, rms)``."""
    ns = np.asarray(ns, dtype=float)
    y = np.log(np.asarray(values, dtype=float))
    slope, intercept = np.polyfit(ns, y, 1)
    resid = y - (intercept + slope * ns)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return float(math.exp(intercept)), float(math.exp(slope)), r2, float(np.sqrt(np.mean(resid ** 2)))


def lemma_check(n_max: int) -> dict:
    """Exhaustive check that a first return at time ``n`` lands on a symbol ``>= n``.

    The set of reachable states is tracked with the dominance reduction
    ``A -> largest T``: a larger running sum allows a superset of moves, so
    the reachable values of ``A`` (and hence of the smallest closing symbol
    ``A + 1``) are exact.  No symbol cap is applied.
    """
    best = {0: 1}
    min_closing = {}
    counterexamples = 0
    for n in range(1, n_max + 1):
        closable = [A for A, T in best.items() if A + 1 <= T]
        m = min(closable) + 1
        min_closing[n] = m
        counterexamples += sum(1 for A in closable if A + 1 < n)
        if n == n_max:
            break
        As = np.fromiter(best.keys(), dtype=np.int64)
        Ts = np.fromiter(best.values(), dtype=np.int64)
        parts_A, parts_T = [], []
        for A, T in zip(As, Ts):
            v = np.arange(1, T + 1, dtype=np.int64)
            parts_A.append(np.where(A >= v, A + v, v))
            parts_T.append(T + v)
        newA = np.concatenate(parts_A)
        newT = np.concatenate(parts_T)
        order = np.lexsort((-newT, newA))
        newA, newT = newA[order], newT[order]
        first = np.ones(len(newA), dtype=bool)
        first[1:] = newA[1:] != newA[:-1]
        best = dict(zip(newA[first].tolist(), newT[first].tolist()))
    return {"n_max": n_max, "min_closing_symbol": min_closing,
            "counterexamples": counterexamples, "method": "dominance-reduced exhaustive search"}


def lemma_check_bruteforce(n_max: int) -> dict:
    """Same statement by explicit enumeration of stems (small ``n`` only)."""
    min_closing = {}
    bad = 0
    for n in range(1, n_max + 1):
        best = None
        stems = _stems(n)
        for stem, alive_max, total in stems:
            if alive_max + 1 <= total:
                c = alive_max + 1
                best = c if best is None else min(best, c)
                if c < n:
                    bad += 1
        min_closing[n] = best
    return {"min_closing_symbol": min_closing, "counterexamples": bad}


def _stems(n: int):
    """Stems ``[1, i_1, ..., i_{n-1}]`` with the largest alive intermediate suffix sum."""
    out = []

    def rec(word, total, alive):
        if len(word) == n:
            out.append((tuple(word), max(alive) if alive else 0, total))
            return
        for v in range(1, total + 1):
            rec(word + [v], total + v, tuple(s + v for s in alive if v <= s) + (v,))

    rec([1], 1, ())
    return out


def return_tail(n_max: int = 12, spec: ModelSpec = DEFAULT_SPEC, target: str = "C",
                cap: int | None = None, fit_from: int | None = None) -> TailFit:
    """Return-time tail table with exponential fit.

    Parameters
    ----------
    target : {"C", "C1"}
        ``"C"``: mass ``m_n`` of return-word cylinders from 1 returning to
        the union of Cantor sets at time ``n`` (exact rationals), compared
        with ``sum_{j >= n} w_j``; the return-time lemma is verified
        exhaustively alongside.  ``"C1"``: the induced weights ``q_r`` of
        first returns to ``C_1`` (floating point).
    """
    if n_max < 3:
        raise ArgumentError("n_max must be at least 3")
    cap = cap or spec.symbol_cap
    a = spec.width_base_q
    if target == "C":
        masses = returns_to_c_masses(n_max, spec, cap, exact=spec.affine)
        bounds = [a ** (n - 1) for n in range(1, n_max + 1)]
        lo = fit_from or 3
        lemma = lemma_check(min(n_max, 12))
    elif target == "C1":
        masses = returns_to_one_masses(n_max, spec, cap, exact=False)
        bounds = [1.0] * n_max
        lo = fit_from or 6
        lemma = None
    else:
        raise ArgumentError(f"unknown target {target!r}")
    ns = list(range(1, n_max + 1))
    win = [(n, float(m)) for n, m in zip(ns, masses) if lo <= n and float(m) > 0]
    C, beta, r2, rms = fit_exponential([n for n, _ in win], [m for _, m in win])
    return TailFit(target, ns, masses, bounds, C, beta, r2, rms, (lo, n_max), lemma,
                   truncation_tail(n_max, spec, cap))


def kac_check(n_max: int, spec: ModelSpec = DEFAULT_SPEC, cap: int | None = None,
              depth: int = 60) -> dict:
    """Mass balance of first returns from ``C_1`` to the Cantor union.

    Every point of ``C_1`` has a unique first return, landing in
    ``C_{j1}``, so ``rho(1) = sum_w |E_w| / w_1 * rho(j1)`` over return words
    ``w`` from 1.  Returns both sides as intervals, the left side truncated
    at return time ``n_max`` with the remaining mass bounded by
    ``a**n_max / (1 - a)``.
    """
    from .cantor import relative_measure

    cap = cap or spec.symbol_cap
    a = spec.width_base
    rho = [None] + [relative_measure(j, depth, spec) for j in range(1, cap + 1)]
    states = {(1, 0): 1.0}
    lo_sum = hi_sum = 0.0
    for _ in range(n_max):
        for (T, A), m in states.items():
            for x in range(A + 1, min(T, cap) + 1):
                lo_sum += m * spec.width(x) * float(rho[x].lower)
                hi_sum += m * spec.width(x) * float(rho[x].upper)
        new: dict = {}
        for (T, A), m in states.items():
            for v in range(1, min(T, cap) + 1):
                A2 = A + v if A >= v else v
                if A2 >= cap:
                    continue
                k = (min(T + v, cap), A2)
                new[k] = new.get(k, 0.0) + m * spec.width(v)
        states = new
    tail = a ** n_max / (1.0 - a) + truncation_tail(n_max, spec, cap)
    r1 = rho[1]
    return {"returned": (lo_sum, hi_sum + tail), "rho1": (float(r1.lower), float(r1.upper)),
            "consistent": lo_sum <= float(r1.upper) + 1e-12 and float(r1.lower) <= hi_sum + tail + 1e-12}


# Markov property and mixing ------------------------------------------------------------

@dataclass
class MarkovResult:
    """Outcome of an overlap-concatenation check, with strictness witnesses."""

    ok: bool
    merged: tuple[int, ...]
    witnesses: list[tuple[int, ...]]

    def __bool__(self) -> bool:
        return self.ok


def markov_check(u: Sequence[int], v: Sequence[int]) -> MarkovResult:
    """Is the overlap-concatenation of ``u`` and ``v`` (merged at the shared symbol) admissible?

    Witnesses are one-symbol extensions ``merged + [e]`` that are
    admissible while ``v + [e]`` is not: the long past admits more futures.
    """
    u, v = as_word(u), as_word(v)
    if not u or not v:
        raise ArgumentError("words must be nonempty")
    if not is_admissible(u) or not is_admissible(v):
        raise ArgumentError("both words must be admissible")
    if u[-1] != v[0]:
        raise ArgumentError("last symbol of u must equal first symbol of v")
    merged = u + v[1:]
    ok = is_admissible(merged)
    witnesses = [merged + (e,) for e in range(sum(v) + 1, sum(merged) + 1)] if ok else []
    return MarkovResult(ok, merged, witnesses)


@dataclass
class MixingTable:
    """Least lengths ``N(a, b)`` after which every length up to the horizon connects ``a`` to ``b``."""

    states: list[ReturnWord]
    horizon: int
    N: dict

    @property
    def all_finite(self) -> bool:
        return all(v is not None for v in self.N.values())

    def to_dict(self) -> dict:
        return {"horizon": self.horizon, "states": [list(s.word) for s in self.states],
                "N": [{"a": list(self.states[i].word), "b": list(self.states[j].word), "N": n}
                      for (i, j), n in sorted(self.N.items())]}


def mixing_check(states: Sequence[ReturnWord], horizon: int = 20) -> MixingTable:
    """Path-length analysis on the tower over the given return words.

    Tower states are ``(word, level)`` with ``0 <= level < return_time``;
    each level climbs by one and the top of ``u`` drops onto the base of
    every ``v`` whose source is ``u``'s target.  ``N(a, b)`` counts
    ``F``-steps from the base of ``a`` to the base of ``b``.
    """
    if horizon < 1:
        raise ArgumentError("horizon must be at least 1")
    states = list(states)
    index = {}
    for s_idx, s in enumerate(states):
        for lvl in range(s.return_time):
            index[(s_idx, lvl)] = len(index)
    n = len(index)
    adj = np.zeros((n, n), dtype=bool)
    for (s_idx, lvl), k in index.items():
        s = states[s_idx]
        if lvl + 1 < s.return_time:
            adj[k, index[(s_idx, lvl + 1)]] = True
        else:
            for t_idx, t in enumerate(states):
                if t.source == s.target and (t.mode == "no_interior_one" or is_admissible(s.word + t.word[1:])):
                    adj[k, index[(t_idx, 0)]] = True
    base = np.array([index[(i, 0)] for i in range(len(states))])
    reach = np.zeros((horizon + 1, len(states), len(states)), dtype=bool)
    P = np.eye(n, dtype=bool)
    A_int = adj.astype(np.int64)
    for step in range(1, horizon + 1):
        P = (P.astype(np.int64) @ A_int) > 0
        reach[step] = P[np.ix_(base, base)]
    N = {}
    for i in range(len(states)):
        for j in range(len(states)):
            col = reach[1:, i, j]
            if not col[-1]:
                N[(i, j)] = None
                continue
            k = horizon
            while k > 1 and col[k - 2]:
                k -= 1
            N[(i, j)] = k
    return MixingTable(states, horizon, N)
