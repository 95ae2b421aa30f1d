"""The acceptance suite: fifteen end-to-end checks with quick and full profiles.

Each check returns a :class:`CriterionResult` holding the verdict and the
numbers behind it.  The full profile uses the stated Monte Carlo sizes; the
quick profile shrinks only the Monte Carlo runs and the direct-sum oracle.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__
from .cantor import cantor_measure, relative_measure
from .model import ModelSpec, verify_conditions
from .returns import (first_return_words, is_return_word, length_bound_violations, markov_check,
                      mixing_check, mp1_words, return_tail, returns_to_one_masses)
from .stats import RunConfig, clt_test, correlation, entropy_check, lyapunov_series, entropy_closed_form
from .symbolic import (RectangleSpec, enumerate_admissible, enumerate_gaps, is_admissible,
                       random_admissible, variation_check)
from .thermo import (Caps, Potential, discriminant_scan, gurevich_pressure, induced_operator,
                     is_cyclically_admissible, power_iterate, tower_sum_exact)

PROFILES = ("quick", "full")
SEED = 20240601


@dataclass
class CriterionResult:
    cid: int
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.cid:2d} {self.title} ({self.seconds:.1f}s)"

    def to_dict(self) -> dict:
        return {"id": self.cid, "title": self.title, "pass": self.passed,
                "seconds": self.seconds, "detail": self.detail}


def _words(ws):
    return ["".join(str(s) for s in w) if max(w) < 10 else list(w) for w in ws]


# exact combinatorics ----------------------------------------------------------------

def c01_enumeration(profile="full"):
    o3 = enumerate_admissible((1,), 3)
    o4 = enumerate_admissible((1,), 4)
    want3 = [(1, 1, 1), (1, 1, 2)]
    want4 = [(1, 1, 1, 1), (1, 1, 1, 2), (1, 1, 1, 3), (1, 1, 2, 1), (1, 1, 2, 2), (1, 1, 2, 3), (1, 1, 2, 4)]
    ok = o3 == want3 and o4 == want4
    return ok, {"order3": _words(o3), "order4": _words(o4)}


def c02_gaps(profile="full"):
    want = [((3,), 3), ((3, 1), 4), ((3, 2), 5), ((3, 3), 6), ((3, 1, 1), 5)]
    found = {}
    for order in (1, 2, 3):
        for g in enumerate_gaps(3, order):
            found[g.stem] = g.threshold
    rows = [{"stem": list(s), "expected": k, "found": found.get(s)} for s, k in want]
    return all(r["expected"] == r["found"] for r in rows), {"gaps": rows}


def c03_return_words(profile="full"):
    words = {rw.word: rw for rw in first_return_words(1, 3)}
    ex = []
    for w in ((1, 1, 1, 3), (1, 1, 2, 3)):
        rw = words.get(w)
        ex.append({"word": list(w), "return_word": is_return_word(w), "enumerated": rw is not None,
                   "source": rw.source if rw else None, "target": rw.target if rw else None,
                   "return_time": rw.return_time if rw else None})
    ex_ok = all(e["return_word"] and e["enumerated"] and e["source"] == 1 and e["target"] == 3
                and e["return_time"] == 3 for e in ex)
    viol = length_bound_violations(8, "stated")
    viol_t = length_bound_violations(8, "target")
    detail = {"examples": ex, "bound": "len <= target - source + 2",
              "violations": len(viol), "first_violations": [list(v.word) for v in viol[:5]],
              "violations_of_len_le_target_plus_1": len(viol_t)}
    return ex_ok and not viol, detail


def c04_markov(profile="full", random_cases=100_000):
    words = [w for L in range(1, 6) for first in range(1, 7)
             for w in enumerate_admissible((first,), L, 6)]
    by_first: dict = {}
    for w in words:
        by_first.setdefault(w[0], []).append(w)
    checked = fails = 0
    for u in words:
        for v in by_first.get(u[-1], ()):
            checked += 1
            if not is_admissible(u + v[1:]):
                fails += 1
    rng = np.random.default_rng(SEED)
    rfails = 0
    for _ in range(random_cases):
        u = random_admissible((int(rng.integers(1, 9)),), int(rng.integers(6, 16)), rng)
        v = random_admissible((u[-1],), int(rng.integers(2, 16)), rng)
        if not is_admissible(u + v[1:]):
            rfails += 1
    res = markov_check((1, 1, 2), (2,))
    strict = is_admissible((1, 1, 2, 3)) and not is_admissible((2, 3))
    witness_ok = res.ok and (1, 1, 2, 3) in res.witnesses and (1, 1, 2, 4) in res.witnesses
    detail = {"exhaustive_pairs": checked, "exhaustive_failures": fails, "random_cases": random_cases,
              "random_failures": rfails, "witnesses": [list(w) for w in res.witnesses],
              "strictness_1123_vs_23": strict}
    return fails == 0 and rfails == 0 and strict and witness_ok, detail


def c05_return_tail(profile="full"):
    fit = return_tail(12)
    ok = fit.passed and fit.r2 >= 0.98 and fit.lemma["counterexamples"] == 0
    d = fit.to_dict()
    d["rows"] = [{"n": r["n"], "mass": float(r["mass"]), "bound": float(r["bound"])} for r in d["rows"]]
    return ok, d


def c06_cantor(profile="full"):
    rho = relative_measure(1, 60)
    ns = list(range(5, 13))
    cm = [cantor_measure(n) for n in ns]
    rows = [{"n": n, "lower": float(m.lower), "required": 1 - 2.0 ** (-n + 1) - 1e-6} for n, m in zip(ns, cm)]
    prod = math.prod(1 - 2.0 ** -m for m in range(1, 200))
    ok = float(rho.width) < 1e-6 and float(rho.lower) >= 0.288 and all(r["lower"] >= r["required"] for r in rows)
    return ok, {"rho1": [float(rho.lower), float(rho.upper)], "width": float(rho.width),
                "product_bound": prod, "rows": rows}


def _brute_tower(n: int) -> Fraction:
    spec = ModelSpec()
    tot = Fraction(0)
    for w in enumerate_admissible((1,), n):
        if is_cyclically_admissible(w):
            tot += math.prod((spec.exact_width(s) for s in w), start=Fraction(1))
    return tot


def c07_pressure(profile="full"):
    want = [Fraction(1, 2), Fraction(1, 4), Fraction(3, 16), Fraction(43, 256)]
    exact = [tower_sum_exact(n) for n in range(1, 5)]
    brute = [_brute_tower(n) for n in range(1, 5)]
    est = gurevich_pressure(Potential(), 12, "tower")
    lo, hi = est.bracket
    bound = math.log(2.0 / est.detail["c_hat"]) / 12
    ok = exact == want and brute == want and lo <= 0.0 <= hi and est.half_width <= bound
    return ok, {"Z": [str(z) for z in exact], "brute_force": [str(z) for z in brute],
                "bracket": [lo, hi], "half_width": est.half_width, "allowed_half_width": bound,
                "c_hat": est.detail["c_hat"]}


def c08_discriminant(profile="full"):
    grid = [0.0, 0.05, 0.1, 0.2]
    tab = discriminant_scan(grid)
    rows = {r["p"]: r for r in tab.rows}
    base = rows[0.0]
    ok = base["finite"] and base["upper"] <= 1e-12
    for p in (0.05, 0.1):
        ok = ok and rows[p]["finite"] and rows[p]["lower"] >= p + base["upper"]
    ok = ok and (not rows[0.2]["finite"]) and 0.2 >= tab.threshold and tab.positive
    return ok, tab.to_dict()


def c09_transfer(profile="full"):
    caps = Caps(symbol_cap=20, return_cap=40, depth=6)
    rep = power_iterate(Potential(), caps, 200, "induced")
    q = returns_to_one_masses(40, cap=20)
    dp_sum = math.fsum(q)
    R = 8 if profile == "full" else 7
    small = induced_operator(Potential(), Caps(symbol_cap=20, return_cap=R, depth=6))
    direct = math.fsum(math.prod(2.0 ** -s for s in rw.word[:-1]) for rw in mp1_words(R + 1, symbol_cap=20))
    tower = power_iterate(Potential(), caps, 200, "tower")
    log_ratio = math.log(tower.ratio)
    ok = (abs(rep.lam - dp_sum) <= 1e-10 and abs(small.mass - direct) <= 1e-10
          and rep.ratio < 1.0 and tower.ratio < 1.0 and abs(tower.slope - log_ratio) <= 0.05)
    return ok, {"induced": {"lambda": rep.lam, "direct_sum_R40": dp_sum, "operator_mass_R%d" % R: small.mass,
                            "direct_sum_R%d" % R: direct, "subleading_ratio": rep.ratio,
                            "nilpotent": rep.detail.get("nilpotent", False)},
                "tower": {"lambda": tower.lam, "subleading_ratio": tower.ratio, "log_ratio": log_ratio,
                          "decay_slope": tower.slope, "decay_r2": tower.slope_r2,
                          "window": list(tower.window)}}


def c10_mixing(profile="full"):
    states = mp1_words(6, symbol_cap=4)
    tab = mixing_check(states, 20)
    Ns = [v for v in tab.N.values()]
    return tab.all_finite, {"states": len(states), "pairs": len(Ns),
                            "max_N": max(n for n in Ns if n is not None) if any(Ns) else None}


# Monte Carlo ----------------------------------------------------------------------

def c11_lyapunov(profile="full"):
    target = 2.0 * math.log(2.0)
    closed = (entropy_closed_form(), lyapunov_series())
    steps = 10_000 if profile == "full" else 2_000
    chk = entropy_check(RunConfig(seed=SEED, burn_in=64, steps=steps + 64, samples=100))
    ok = (abs(closed[0] - target) <= 1e-12 and abs(closed[1] - target) <= 1e-12
          and abs(chk.entropy.value - target) <= 0.01 and abs(chk.integral.value - target) <= 0.01
          and abs(chk.difference) <= 3.0 * chk.combined_se)
    return ok, {"closed_form": closed, "target": target, **chk.to_dict()}


def c12_correlations(profile="full"):
    steps = 10_000 if profile == "full" else 2_000
    out, ok = {}, True
    for f in ("x_centered", "e1_smooth"):
        for seed in (SEED, SEED + 1):
            cfg = RunConfig(seed=seed, burn_in=64, steps=steps + 64, samples=100)
            c = correlation(f, f, cfg, 12)
            good = c.eta is not None and c.eta < 0.9 and c.r2 >= 0.95
            entry = {"C": c.C, "eta": c.eta, "r2": c.r2, "window": list(c.window),
                     "C0": float(c.values[0]), "C0_se": float(c.stderr[0])}
            if f == "x_centered":
                entry["C0_ok"] = abs(c.values[0] - 1 / 12) <= 3.0 * c.stderr[0]
                good = good and entry["C0_ok"]
            ok = ok and good
            out[f"{f}/seed{seed}"] = entry
    return ok, out


def c13_clt(profile="full"):
    n = 10_000 if profile == "full" else 1_000
    cfg = RunConfig(seed=SEED, burn_in=64, steps=n + 64, samples=10_000)
    rep = clt_test("x_centered", cfg, n)
    short = clt_test("x_centered", cfg, 1_000 if n > 1_000 else 100)
    stable = abs(rep.sigma2 - short.sigma2) <= 3.0 * math.hypot(rep.sigma2_se, short.sigma2_se)
    return rep.passed and stable, {"main": rep.to_dict(), "short_blocks": short.to_dict(),
                                   "sigma2_stable": stable, "sigma2_exact": 1 / 6}


# analytic -------------------------------------------------------------------------

def c14_variation(profile="full"):
    rect = RectangleSpec((1,), (1,))
    pert = variation_check(rect, 16, ModelSpec(perturbation=0.05))
    flat = variation_check(rect, 16, ModelSpec())
    zero = all(v == 0.0 for _, _, v in flat.rows)
    ok = pert.monotone and pert.theta0 is not None and pert.theta0 < 1.0 and zero
    return ok, {"eps_0.05": {"levels": pert.levels, "theta0": pert.theta0, "C": pert.C,
                             "r2": pert.r2, "monotone": pert.monotone},
                "eps_0": {"max_variation": max(v for _, _, v in flat.rows)}}


def c15_conditions(profile="full"):
    base = verify_conditions(ModelSpec())
    rig_h = verify_conditions(ModelSpec(width_base=0.4, height_base=0.45))
    rig_e = verify_conditions(ModelSpec(perturbation=0.6))
    ok = base.all_passed and base.K0 == 2.0 and rig_h.failed == ["H5"] and rig_e.failed == ["H2"]
    return ok, {"default_failed": base.failed, "K0": base.K0,
                "height_above_width": {"spec": rig_h.spec.to_dict(), "failed": rig_h.failed},
                "large_perturbation": {"spec": rig_e.spec.to_dict(), "failed": rig_e.failed}}


CRITERIA = {
    1: ("admissible enumeration from [1]", c01_enumeration),
    2: ("gap thresholds of C_3", c02_gaps),
    3: ("return-word examples and length bound", c03_return_words),
    4: ("overlap-concatenation closure", c04_markov),
    5: ("return-time lemma and tail fit", c05_return_tail),
    6: ("Cantor measure bounds", c06_cantor),
    7: ("tower partition sums and pressure bracket", c07_pressure),
    8: ("discriminant positivity", c08_discriminant),
    9: ("transfer operator spectrum", c09_transfer),
    10: ("topological mixing", c10_mixing),
    11: ("Lyapunov exponent and entropy", c11_lyapunov),
    12: ("decay of correlations", c12_correlations),
    13: ("central limit theorem", c13_clt),
    14: ("variation bound", c14_variation),
    15: ("condition verifier", c15_conditions),
}


def run_criterion(cid: int, profile: str = "full") -> CriterionResult:
    title, fn = CRITERIA[cid]
    t0 = time.perf_counter()
    passed, detail = fn(profile)
    return CriterionResult(cid, title, bool(passed), detail, time.perf_counter() - t0)


def run_all(profile: str = "quick", ids=None, echo=None) -> dict:
    """Run the suite and return a JSON-ready report keyed by criterion id."""
    if profile not in PROFILES:
        raise ValueError(f"profile must be one of {PROFILES}")
    results = {}
    for cid in ids or CRITERIA:
        res = run_criterion(cid, profile)
        if echo:
            echo(res.line())
        results[str(cid)] = res.to_dict()
    return {"profile": profile, "version": __version__, "seed": SEED,
            "all_passed": all(r["pass"] for r in results.values()), "criteria": results}
