"""Monte Carlo sampling of the attractor and the statistical checks built on it.

Trajectories start from Lebesgue-random points and are advanced in
vectorized chunks.  For the dyadic affine model (``a = 1/2``, no
perturbation) the x-coordinate is a shift on binary digits, and it is
simulated exactly: each trajectory keeps a 64-bit window of digits, the
symbol is one plus the number of leading ones, and the used digits are
replaced by fresh random bits.  Every other model is iterated in double
precision.

Random numbers come from Philox generators.  Trajectories are grouped in
chunks of ``CHUNK`` and chunk ``k`` uses the substream spawned from
``(seed, k)``, so results do not depend on the number of worker threads.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import stats as sps

from .errors import ArgumentError, InsufficientDataError, NoFitError, NumericError
from .model import DEFAULT_SPEC, ModelSpec, g_eps, g_eps_prime, locate_array
from .returns import fit_exponential

CHUNK = 1024
_MASK11 = np.uint64(11)


class DegenerateObservableWarning(UserWarning):
    """Block-sum variance is numerically zero, so no Gaussian limit can be tested."""


@dataclass(frozen=True)
class RunConfig:
    """Monte Carlo run parameters.

    ``steps`` counts iterations per trajectory including the ``burn_in``
    iterations, which are discarded.
    """

    seed: int = 20240601
    burn_in: int = 64
    steps: int = 10_000
    samples: int = 100
    observables: tuple[str, ...] = ("x_centered",)
    threads: int = 1

    def __post_init__(self):
        if not (0 <= self.seed < 2 ** 64):
            raise ArgumentError("seed must be a 64-bit unsigned integer")
        if self.burn_in < 0 or self.steps <= self.burn_in:
            raise ArgumentError("need steps > burn_in >= 0")
        if self.samples < 1:
            raise ArgumentError("samples must be positive")
        for name in self.observables:
            if name not in OBSERVABLES and not name.startswith("e1_smooth"):
                raise ArgumentError(f"unknown observable {name!r}")

    @property
    def kept(self) -> int:
        return self.steps - self.burn_in

    def to_dict(self) -> dict:
        return {"seed": self.seed, "burn_in": self.burn_in, "steps": self.steps,
                "samples": self.samples, "observables": list(self.observables)}


# observables ------------------------------------------------------------------------

@dataclass(frozen=True)
class Observable:
    """A bounded observable ``fn(x, y, symbol, spec)`` with its Holder exponent."""

    name: str
    fn: Callable
    gamma: float
    mean: float | None = None


def _ramp(scale: float):
    def fn(x, y, sym, spec):
        lo, hi = 0.5 - scale / 2.0, 0.5 + scale / 2.0
        return np.clip((hi - x) / (hi - lo), 0.0, 1.0)

    return fn


OBSERVABLES: dict[str, Observable] = {
    "x": Observable("x", lambda x, y, s, spec: x, 1.0),
    "y": Observable("y", lambda x, y, s, spec: y, 1.0),
    "x_centered": Observable("x_centered", lambda x, y, s, spec: x - 0.5, 1.0),
    "one": Observable("one", lambda x, y, s, spec: np.ones_like(x), 1.0),
    "zero": Observable("zero", lambda x, y, s, spec: np.zeros_like(x), 1.0),
    "symbol": Observable("symbol", lambda x, y, s, spec: s.astype(float), 0.0),
    "e1_smooth": Observable("e1_smooth", _ramp(0.5), 1.0),
}


def observable(name: str) -> Observable:
    """Look up an observable; ``e1_smooth_k`` is the indicator of ``E_1`` smoothed at scale ``2**-k``."""
    if name in OBSERVABLES:
        return OBSERVABLES[name]
    if name.startswith("e1_smooth_"):
        k = int(name.rsplit("_", 1)[1])
        return Observable(name, _ramp(2.0 ** -k), 1.0)
    raise ArgumentError(f"unknown observable {name!r}")


# stepping -------------------------------------------------------------------------

def _dyadic(spec: ModelSpec) -> bool:
    return spec.width_base == 0.5 and spec.perturbation == 0.0


def _leading_ones(X: np.ndarray) -> np.ndarray:
    v = (~X >> _MASK11).astype(np.float64)
    _, e = np.frexp(v)
    ones = 53 - e.astype(np.int64)
    return np.where(v == 0.0, 53, ones)


class _Chunk:
    """State of ``n`` trajectories advanced together."""

    def __init__(self, spec: ModelSpec, rng: np.random.Generator, n: int):
        self.spec, self.rng, self.n = spec, rng, n
        self.exact = _dyadic(spec)
        if self.exact:
            self.X = rng.integers(0, 2 ** 64, size=n, dtype=np.uint64, endpoint=False)
            self.x = (self.X >> _MASK11).astype(np.float64) * 2.0 ** -53
        else:
            self.x = rng.random(n)
        self.y = rng.random(n)
        self.sym = self._locate()

    def _locate(self):
        if self.exact:
            return _leading_ones(self.X) + 1
        return locate_array(self.x, self.spec)

    def log_du(self) -> np.ndarray:
        """``log D^u F`` at the current points."""
        spec = self.spec
        w = (1.0 - spec.width_base) * spec.width_base ** (self.sym - 1.0)
        if spec.perturbation == 0.0:
            return -np.log(w)
        t = (self.x - (1.0 - spec.width_base ** (self.sym - 1.0))) / w
        return np.log(g_eps_prime(t, spec.perturbation)) - np.log(w)

    def step(self, k: int) -> None:
        spec, i = self.spec, self.sym
        self.y = spec.offset(i.astype(float)) + spec.height_base ** i.astype(float) * self.y
        if self.exact:
            fresh = self.rng.integers(0, 2 ** 64, size=self.n, dtype=np.uint64, endpoint=False)
            s = i.astype(np.uint64)
            self.X = (self.X << s) | (fresh >> (np.uint64(64) - s))
            self.x = (self.X >> _MASK11).astype(np.float64) * 2.0 ** -53
        else:
            a = spec.width_base
            w = (1.0 - a) * a ** (i - 1.0)
            t = (self.x - (1.0 - a ** (i - 1.0))) / w
            x = np.asarray(g_eps(t, spec.perturbation), dtype=float)
            bad = ~np.isfinite(x) | (x < 0.0) | (x > 1.0)
            if np.any(bad):
                raise NumericError("trajectory left the unit square", step=k)
            # an image at exactly 1.0 is a rounding artifact of t close to 1
            self.x = np.minimum(x, np.nextafter(1.0, 0.0))
        self.sym = self._locate()


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(chunk,))
    return np.random.Generator(np.random.Philox(ss))


def _run(cfg: RunConfig, spec: ModelSpec, make_visitor: Callable, n_traj: int | None = None) -> list:
    """Run all chunks; ``make_visitor(n)`` returns an object with ``visit`` and ``result``."""
    n_traj = cfg.samples if n_traj is None else n_traj
    sizes = [min(CHUNK, n_traj - s) for s in range(0, n_traj, CHUNK)]

    def work(job):
        idx, n = job
        ch = _Chunk(spec, _chunk_rng(cfg.seed, idx), n)
        vis = make_visitor(n)
        for k in range(cfg.steps):
            if k >= cfg.burn_in:
                vis.visit(k - cfg.burn_in, ch)
            ch.step(k)
        return vis.result()

    jobs = list(enumerate(sizes))
    if cfg.threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            return list(pool.map(work, jobs))
    return [work(j) for j in jobs]


# simulation and histogram ----------------------------------------------------------------

@dataclass
class Histogram:
    """2D occupation histogram of kept points and symbol counts."""

    counts: np.ndarray
    x_edges: np.ndarray
    y_edges: np.ndarray
    symbol_counts: np.ndarray
    total: int
    config: dict
    exact_dynamics: bool

    def x_marginal(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def y_marginal(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    def rows(self) -> list[dict]:
        xc = 0.5 * (self.x_edges[1:] + self.x_edges[:-1])
        yc = 0.5 * (self.y_edges[1:] + self.y_edges[:-1])
        return [{"x_bin": float(xc[i]), "y_bin": float(yc[j]), "count": int(self.counts[i, j])}
                for i in range(len(xc)) for j in range(len(yc))]

    def to_dict(self) -> dict:
        return {"total": self.total, "config": self.config, "exact_dynamics": self.exact_dynamics,
                "symbol_counts": self.symbol_counts.tolist(),
                "x_marginal": self.x_marginal().tolist(), "y_marginal": self.y_marginal().tolist()}


class _HistVisitor:
    def __init__(self, n, bins, max_symbol, spec):
        self.counts = np.zeros(bins, dtype=np.int64)
        self.sym = np.zeros(max_symbol + 1, dtype=np.int64)
        self.bins = bins
        self.strip = 0
        self.spec = spec

    def visit(self, k, ch):
        ix = np.minimum((ch.x * self.bins[0]).astype(np.int64), self.bins[0] - 1)
        iy = np.minimum((ch.y * self.bins[1]).astype(np.int64), self.bins[1] - 1)
        np.add.at(self.counts, (ix, iy), 1)
        self.sym += np.bincount(np.minimum(ch.sym, len(self.sym) - 1), minlength=len(self.sym))
        self.strip += int(np.count_nonzero(in_strips(ch.y, self.spec)))

    def result(self):
        return self.counts, self.sym, self.strip


def in_strips(y: np.ndarray, spec: ModelSpec = DEFAULT_SPEC, max_symbol: int = 60) -> np.ndarray:
    """Membership of heights in the union of the strips ``S_i``."""
    y = np.asarray(y, dtype=float)
    a1 = spec.height_base
    # strips stack from 0 upwards, so y lies in S_i iff c_i <= y < c_i + a1**i
    i = np.arange(1, max_symbol + 1)
    c = spec.offset(i.astype(float))
    h = a1 ** i.astype(float)
    k = np.clip(np.searchsorted(c, y, side="right") - 1, 0, max_symbol - 1)
    return (y >= c[k]) & (y < c[k] + h[k])


def simulate(cfg: RunConfig = RunConfig(), spec: ModelSpec = DEFAULT_SPEC,
             bins: tuple[int, int] = (32, 32), max_symbol: int = 64) -> Histogram:
    """Iterate ``F`` from Lebesgue-random starts and accumulate a 2D histogram.

    Deterministic given ``cfg.seed``.  Heights are tracked in double
    precision; the smallest strip used has height ``a1**i`` with ``i`` at
    most 64, far above the subnormal range, so no rescaling is needed.
    """
    parts = _run(cfg, spec, lambda n: _HistVisitor(n, bins, max_symbol, spec))
    counts = sum(p[0] for p in parts)
    sym = sum(p[1] for p in parts)
    strip = sum(p[2] for p in parts)
    h = Histogram(counts, np.linspace(0, 1, bins[0] + 1), np.linspace(0, 1, bins[1] + 1), sym,
                  cfg.samples * cfg.kept, cfg.to_dict(), _dyadic(spec))
    h.strip_fraction = strip / h.total
    return h


def x_marginal_chi2(hist: Histogram) -> tuple[float, float]:
    """Chi-square statistic and p-value of the x-marginal against the uniform law."""
    obs = hist.x_marginal().astype(float)
    exp = np.full_like(obs, obs.sum() / len(obs))
    res = sps.chisquare(obs, exp)
    return float(res.statistic), float(res.pvalue)


def symbol_chi2(hist: Histogram, spec: ModelSpec = DEFAULT_SPEC, max_symbol: int = 10) -> tuple[float, float, float]:
    """Chi-square test of symbol frequencies ``1..max_symbol`` (plus the pooled rest) against ``w_i``.

    Returns ``(statistic, p_value, critical_99)``.
    """
    counts = hist.symbol_counts
    n = counts.sum()
    obs = np.append(counts[1:max_symbol + 1], n - counts[1:max_symbol + 1].sum()).astype(float)
    p = np.array([spec.width(i) for i in range(1, max_symbol + 1)])
    p = np.append(p, 1.0 - p.sum())
    stat, pv = sps.chisquare(obs, p * n)
    return float(stat), float(pv), float(sps.chi2.ppf(0.99, len(obs) - 1))


def sample_paths(cfg: RunConfig, spec: ModelSpec = DEFAULT_SPEC, name: str = "x_centered") -> np.ndarray:
    """Values of one observable along all kept steps, shape ``(samples, kept)``."""
    obs = observable(name)

    class V:
        def __init__(self, n):
            self.out = np.empty((n, cfg.kept))

        def visit(self, k, ch):
            self.out[:, k] = obs.fn(ch.x, ch.y, ch.sym, spec)

        def result(self):
            return self.out

    return np.vstack(_run(cfg, spec, V))


# Lyapunov exponent and entropy --------------------------------------------------------------

@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    n: int

    def to_dict(self) -> dict:
        return {"value": self.value, "stderr": self.stderr, "n": self.n}


class _SymVisitor:
    def __init__(self, n, max_symbol):
        self.sum_log = np.zeros(n)
        self.sym = np.zeros(max_symbol + 1, dtype=np.int64)

    def visit(self, k, ch):
        self.sum_log += ch.log_du()
        self.sym += np.bincount(np.minimum(ch.sym, len(self.sym) - 1), minlength=len(self.sym))

    def result(self):
        return self.sum_log, self.sym


def _symbol_run(cfg, spec, max_symbol=64):
    parts = _run(cfg, spec, lambda n: _SymVisitor(n, max_symbol))
    traj = np.concatenate([p[0] for p in parts]) / cfg.kept
    sym = sum(p[1] for p in parts)
    return traj, sym


def lyapunov(cfg: RunConfig, spec: ModelSpec = DEFAULT_SPEC) -> Estimate:
    """Birkhoff average of ``log D^u F`` with the standard error across trajectories."""
    if cfg.samples * cfg.kept < 10_000:
        raise InsufficientDataError("need at least 1e4 kept steps in total")
    traj, _ = _symbol_run(cfg, spec)
    se = float(traj.std(ddof=1) / math.sqrt(len(traj))) if len(traj) > 1 else math.nan
    return Estimate(float(traj.mean()), se, cfg.samples * cfg.kept)


def lyapunov_band(spec: ModelSpec = DEFAULT_SPEC) -> tuple[float, float]:
    """Range of the exponent allowed by the extremes ``1 +- eps`` of ``g_eps'``."""
    base = entropy_closed_form(spec)
    eps = spec.perturbation
    return base + math.log1p(-eps), base + math.log1p(eps)


def entropy_closed_form(spec: ModelSpec = DEFAULT_SPEC) -> float:
    """Entropy ``-sum w_i log w_i`` of the Bernoulli symbol law, summed in closed form."""
    a = spec.width_base
    return -math.log1p(-a) - a / (1.0 - a) * math.log(a)


def lyapunov_series(spec: ModelSpec = DEFAULT_SPEC, terms: int | None = None) -> float:
    """``sum_i w_i log(1 / w_i)``: the exponent of the affine model, by direct summation."""
    a = spec.width_base
    terms = terms or int(math.ceil(60.0 / -math.log10(a)))
    i = np.arange(1, terms + 1, dtype=float)
    w = (1.0 - a) * a ** (i - 1)
    return math.fsum(w * -np.log(w))


def alphabet_tail(M: int, spec: ModelSpec = DEFAULT_SPEC) -> float:
    """``sum_{i > M} w_i log(1/w_i)``: the part of the exponent carried by symbols beyond ``M``."""
    a = spec.width_base
    i = np.arange(M + 1, M + 1 + int(math.ceil(60.0 / -math.log10(a))), dtype=float)
    w = (1.0 - a) * a ** (i - 1)
    return math.fsum(w * -np.log(w))


@dataclass
class EntropyCheck:
    """Symbol-law entropy next to the integral of ``log D^u F``."""

    entropy: Estimate
    integral: Estimate
    closed_entropy: float
    closed_integral: float

    @property
    def difference(self) -> float:
        return self.entropy.value - self.integral.value

    @property
    def combined_se(self) -> float:
        return math.hypot(self.entropy.stderr, self.integral.stderr)

    def to_dict(self) -> dict:
        return {"entropy": self.entropy.to_dict(), "integral": self.integral.to_dict(),
                "closed_entropy": self.closed_entropy, "closed_integral": self.closed_integral,
                "difference": self.difference, "combined_se": self.combined_se}


def entropy_check(cfg: RunConfig, spec: ModelSpec = DEFAULT_SPEC) -> EntropyCheck:
    """Plug-in entropy of the empirical symbol law and the Birkhoff integral.

    The plug-in value ``-sum p_i log p_i`` gets the Miller-Madow correction
    ``(K - 1) / (2N)`` for ``K`` observed symbols.  For the affine model the
    symbols are independent with law ``w_i``, so this is the entropy of
    ``F``; its standard error is ``sd(-log p_I) / sqrt(N)``.
    """
    if cfg.samples * cfg.kept < 10_000:
        raise InsufficientDataError("need at least 1e4 kept steps in total")
    traj, sym = _symbol_run(cfg, spec)
    N = int(sym.sum())
    p = sym[sym > 0] / N
    H = float(-np.sum(p * np.log(p))) + (len(p) - 1) / (2.0 * N)
    var = float(np.sum(p * np.log(p) ** 2) - np.sum(p * np.log(p)) ** 2)
    ent = Estimate(H, math.sqrt(max(var, 0.0) / N), N)
    se = float(traj.std(ddof=1) / math.sqrt(len(traj))) if len(traj) > 1 else math.nan
    integ = Estimate(float(traj.mean()), se, N)
    return EntropyCheck(ent, integ, entropy_closed_form(spec), lyapunov_series(spec))


# correlations ---------------------------------------------------------------------

@dataclass
class CorrelationCurve:
    """Autocovariances ``C_n(f, g)`` with standard errors and the exponential fit."""

    f: str
    g: str
    lags: np.ndarray
    values: np.ndarray
    stderr: np.ndarray
    C: float | None = None
    eta: float | None = None
    r2: float | None = None
    window: tuple[int, int] | None = None
    residual: float | None = None
    gamma: float = 1.0
    config: dict = field(default_factory=dict)

    def rows(self) -> list[dict]:
        return [{"lag": int(n), "value": float(v), "stderr": float(s)}
                for n, v, s in zip(self.lags, self.values, self.stderr)]

    def to_dict(self) -> dict:
        return {"f": self.f, "g": self.g, "C": self.C, "eta": self.eta, "r2": self.r2,
                "window": None if self.window is None else list(self.window),
                "residual": self.residual, "gamma": self.gamma, "config": self.config,
                "rows": self.rows()}


def autocovariance(F: np.ndarray, G: np.ndarray, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Lagged covariances averaged over trajectories, with trajectory-level standard errors.

    ``F`` and ``G`` have shape ``(samples, length)``.  Means are the global
    means, so the estimate is not split into per-trajectory centering.
    """
    F = F - F.mean()
    G = G - G.mean()
    L = F.shape[1]
    if n_max >= L:
        raise ArgumentError("n_max must be smaller than the trajectory length")
    vals = np.empty(n_max + 1)
    ses = np.empty(n_max + 1)
    for n in range(n_max + 1):
        per = np.mean(F[:, :L - n] * G[:, n:], axis=1)
        vals[n] = per.mean()
        ses[n] = per.std(ddof=1) / math.sqrt(len(per)) if len(per) > 1 else math.inf
    return vals, ses


def correlation(f: str, g: str, cfg: RunConfig, n_max: int = 20,
                spec: ModelSpec = DEFAULT_SPEC) -> CorrelationCurve:
    """Estimate ``C_n(f, g)`` for lags ``0..n_max`` and fit ``C eta**n``.

    The fit uses the run of lags starting at 0 on which ``|C_n|`` exceeds
    three standard errors.

    Raises
    ------
    NoFitError
        Fewer than three significant lags; the curve is attached to the error.
    """
    if cfg.samples < 2:
        raise ArgumentError("need at least two trajectories for standard errors")
    F = sample_paths(cfg, spec, f)
    G = F if g == f else sample_paths(cfg, spec, g)
    vals, ses = autocovariance(F, G, n_max)
    gamma = min(observable(f).gamma, observable(g).gamma)
    curve = CorrelationCurve(f, g, np.arange(n_max + 1), vals, ses, gamma=gamma, config=cfg.to_dict())
    k = 0
    while k <= n_max and abs(vals[k]) > 3.0 * ses[k]:
        k += 1
    if k < 3:
        raise NoFitError(f"only {k} lags above three standard errors", curve=curve)
    C, eta, r2, rms = fit_exponential(range(k), np.abs(vals[:k]))
    curve.C, curve.eta, curve.r2, curve.window, curve.residual = C, eta, r2, (0, k - 1), rms
    return curve


# central limit theorem ------------------------------------------------------------

@dataclass
class CltReport:
    """Normalized block sums, their variance and the KS distance to ``N(0, sigma2)``."""

    block_n: int
    blocks: int
    sigma2: float
    sigma2_se: float
    ks: float
    ks_pvalue: float
    threshold: float
    degenerate: bool
    quantiles: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return (not self.degenerate) and self.ks < self.threshold

    def to_dict(self) -> dict:
        return {"block_n": self.block_n, "blocks": self.blocks, "sigma2": self.sigma2,
                "sigma2_se": self.sigma2_se, "ks": self.ks, "ks_pvalue": self.ks_pvalue,
                "threshold": self.threshold, "degenerate": self.degenerate,
                "passed": self.passed, "config": self.config}


def clt_test(f: str, cfg: RunConfig, block_n: int | None = None, spec: ModelSpec = DEFAULT_SPEC,
             threshold: float = 0.02, min_sigma2: float = 1e-10) -> CltReport:
    """KS test of ``(1/sqrt(n)) sum (f - mean)`` over blocks, one block per trajectory.

    Each trajectory contributes one block of ``block_n`` kept steps
    (default: all kept steps).  The mean of ``f`` is the mean over all
    blocks.
    """
    block_n = block_n or cfg.kept
    if block_n > cfg.kept:
        raise ArgumentError("block_n exceeds the kept steps per trajectory")
    obs = observable(f)

    class V:
        def __init__(self, n):
            self.s = np.zeros(n)

        def visit(self, k, ch):
            if k < block_n:
                self.s += obs.fn(ch.x, ch.y, ch.sym, spec)

        def result(self):
            return self.s

    run = RunConfig(cfg.seed, cfg.burn_in, cfg.burn_in + block_n, cfg.samples, cfg.observables, cfg.threads)
    sums = np.concatenate(_run(run, spec, V))
    z = (sums - sums.mean()) / math.sqrt(block_n)
    B = len(z)
    sigma2 = float(z.var(ddof=1)) if B > 1 else 0.0
    se = sigma2 * math.sqrt(2.0 / (B - 1)) if B > 1 else math.inf
    qs = [0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99]
    if sigma2 < min_sigma2:
        warnings.warn(f"block-sum variance {sigma2:.3g} is below {min_sigma2:g}; "
                      "the observable looks like a coboundary or a constant", DegenerateObservableWarning)
        return CltReport(block_n, B, sigma2, se, math.nan, math.nan, threshold, True, [], run.to_dict())
    res = sps.kstest(z, "norm", args=(0.0, math.sqrt(sigma2)))
    sq = np.quantile(z, qs)
    nq = sps.norm.ppf(qs, scale=math.sqrt(sigma2))
    table = [{"q": q, "sample": float(a), "normal": float(b)} for q, a, b in zip(qs, sq, nq)]
    return CltReport(block_n, B, sigma2, se, float(res.statistic), float(res.pvalue), threshold,
                     False, table, run.to_dict())


def variance_plateau(f: str, cfg: RunConfig, block_lengths=(1000, 10_000),
                     spec: ModelSpec = DEFAULT_SPEC) -> dict:
    """Block-sum variances for several block lengths and whether they agree within 3 SE."""
    reps = [clt_test(f, cfg, n, spec) for n in block_lengths]
    s = [r.sigma2 for r in reps]
    e = [r.sigma2_se for r in reps]
    stable = all(abs(s[i] - s[0]) <= 3.0 * math.hypot(e[i], e[0]) for i in range(1, len(s)))
    return {"block_lengths": list(block_lengths), "sigma2": s, "sigma2_se": e, "stable": stable}
