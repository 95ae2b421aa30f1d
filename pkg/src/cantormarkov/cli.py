"""Command-line frontend.

Every command reads ``--config`` (flat ``section.key = value`` file), writes
a JSON summary and CSV tables to ``--out`` and prints one verdict line per
check it exercises.  Exit codes: 0 all checks passed, 1 a check failed,
2 configuration or argument error, 3 numeric or convergence failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (ArgumentError, ConfigError, ConvergenceError, DivergenceError, DomainError,
                     NoFitError, NumericError)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


class Outcome:
    """Collected output of a command: JSON summary, CSV tables and verdicts."""

    def __init__(self, name: str):
        self.name = name
        self.summary: dict = {}
        self.tables: dict[str, list[dict]] = {}
        self.verdicts: list[tuple[str, bool]] = []
        self.lines: list[str] = []

    def check(self, claim: str, passed: bool) -> None:
        self.verdicts.append((claim, bool(passed)))

    @property
    def passed(self) -> bool:
        return all(p for _, p in self.verdicts)


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def write_csv(path: Path, rows: list[dict]) -> None:
    if not rows:
        path.write_text("")
        return
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        w.writeheader()
        for r in rows:
            w.writerow({k: (str(v) if isinstance(v, Fraction) else v) for k, v in r.items()})


def _word(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(s) for s in text.replace(" ", "").split(",") if s) if "," in text \
            else tuple(int(c) for c in text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"bad word {text!r}") from err


def _grid(text: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from err


# command handlers ---------------------------------------------------------------

def cmd_verify(args, cfg, out):
    from .model import verify_conditions

    rep = verify_conditions(cfg.spec, args.samples)
    out.summary = rep.to_dict()
    out.tables["conditions"] = [{"name": e.name, "pass": e.passed, "margin": e.margin,
                                 "constant": e.constant} for e in rep.entries]
    for e in rep.entries:
        out.check(f"{e.name} margin", e.passed)
    out.lines.append(f"K0 = {rep.K0:g}  C0 = {rep.C0:g}  B0 = {rep.B0:g}")


def cmd_enumerate(args, cfg, out):
    from .symbolic import cylinder_width, enumerate_admissible

    words = enumerate_admissible(args.prefix, args.length, args.cap)
    out.summary = {"prefix": list(args.prefix), "length": args.length, "count": len(words)}
    out.tables["words"] = [{"word": ",".join(map(str, w)), "width": str(_exact_width(w, cfg.spec)),
                            "width_float": float(cylinder_width(w, cfg.spec).mid)} for w in words]
    out.lines.extend(" ".join(map(str, w)) for w in words)
    if args.prefix == (1,) and args.length == 3 and args.cap is None:
        out.check("order-3 continuations of [1]", words == [(1, 1, 1), (1, 1, 2)])
    if args.prefix == (1,) and args.length == 4 and args.cap is None:
        out.check("order-4 continuations of [1]", len(words) == 7)


def _exact_width(w, spec):
    from .symbolic import exact_weight

    return exact_weight(w, spec) if spec.affine else None


def cmd_gaps(args, cfg, out):
    from .acceptance import c02_gaps
    from .symbolic import enumerate_gaps

    rows = [{"stem": ",".join(map(str, g.stem)), "threshold": g.threshold}
            for g in enumerate_gaps(args.n, args.order)]
    out.tables["gaps"] = rows
    out.summary = {"n": args.n, "order": args.order, "gaps": rows}
    out.lines.extend(f"[{r['stem']}] + k, k > {r['threshold']}" for r in rows)
    if args.n == 3:
        ok, detail = c02_gaps()
        out.summary["reference"] = detail
        out.check("gap thresholds of C_3", ok)


def cmd_cantor(args, cfg, out):
    from .cantor import cantor_measure
    from .model import DEFAULT_SPEC

    rows = []
    for n in range(1, args.nmax + 1):
        m = cantor_measure(n, args.depth, cfg.spec)
        rows.append({"n": n, "lower": float(m.lower), "upper": float(m.upper), "width": float(m.width)})
    out.tables["cantor"] = rows
    out.summary = {"depth": args.depth, "rows": rows}
    out.lines.extend(f"C_{r['n']}: [{r['lower']:.15f}, {r['upper']:.15f}]" for r in rows)
    if cfg.spec == DEFAULT_SPEC:
        out.check("rho(1) width < 1e-6", rows[0]["width"] < 1e-6)
        out.check("rho(1) lower >= 0.288", rows[0]["lower"] >= 0.288)
        out.check("C_n tends to one", all(r["lower"] >= 1 - 2.0 ** (1 - r["n"]) - 1e-6
                                           for r in rows if r["n"] >= 5))


def cmd_returns(args, cfg, out):
    from .returns import first_return_words, length_bound_violations, mp1_words

    if args.markov:
        from .acceptance import c04_markov

        ok, detail = c04_markov(random_cases=args.random)
        out.summary = detail
        out.check("overlap-concatenation closure", ok)
        return
    if args.mp1:
        rows = []
        for mode in ("strict_suffix", "no_interior_one"):
            ws = mp1_words(args.max_len or 8, mode, args.cap if mode == "strict_suffix" else (args.cap or 8))
            rows.append({"mode": mode, "count": len(ws)})
        out.tables["mp1_counts"] = rows
        out.summary = {"max_len": args.max_len or 8, "counts": rows}
        return
    words = first_return_words(args.source, args.target, args.max_len)
    out.tables["return_words"] = [rw.to_dict(cfg.spec) for rw in words]
    out.summary = {"source": args.source, "target": args.target, "count": len(words)}
    out.lines.extend(json.dumps(_jsonable(rw.to_dict(cfg.spec))) for rw in words)
    if args.source == 1 and args.target == 3:
        have = {rw.word for rw in words}
        out.check("[1,1,1,3] and [1,1,2,3] are return words 1->3",
                  {(1, 1, 1, 3), (1, 1, 2, 3)} <= have)
    if args.bound_check:
        viol = length_bound_violations(args.bound_check, "stated")
        alt = length_bound_violations(args.bound_check, "target")
        out.summary["length_bound"] = {"max_symbol": args.bound_check, "violations": len(viol),
                                       "examples": [list(v.word) for v in viol[:10]],
                                       "violations_of_len_le_target_plus_1": len(alt)}
        out.check("length bound len <= target - source + 2", not viol)


def cmd_tail(args, cfg, out):
    from .returns import return_tail

    fit = return_tail(args.nmax, cfg.spec, args.target, cfg.caps.symbol_cap)
    d = _jsonable(fit.to_dict())
    out.summary = d
    out.tables["tail"] = [{"n": n, "mass": m, "bound": b} for n, m, b in fit.rows()]
    out.lines.append(f"C = {fit.C:.6g}  beta = {fit.beta:.6g}  R^2 = {fit.r2:.5f}")
    out.check("fitted beta < 1", 0 < fit.beta < 1)
    if args.target == "C":
        out.check("non-returned stems close with symbol >= n", fit.lemma["counterexamples"] == 0)
        out.check("tail mass <= 2^(-n+1)", fit.passed)
        out.check("tail fit R^2 >= 0.98", fit.r2 >= 0.98)


def cmd_mixing(args, cfg, out):
    from .returns import mixing_check, mp1_words

    states = mp1_words(args.max_len, symbol_cap=args.cap)
    tab = mixing_check(states, args.horizon)
    out.summary = tab.to_dict()
    out.tables["mixing"] = [{"a": ",".join(map(str, r["a"])), "b": ",".join(map(str, r["b"])), "N": r["N"]}
                            for r in tab.to_dict()["N"]]
    out.check("finite N(a,b) for every state pair", tab.all_finite)


def cmd_pressure(args, cfg, out):
    from .thermo import Potential, gurevich_pressure

    est = gurevich_pressure(Potential(cfg.spec, args.shift), args.nmax, args.mode, cfg.caps)
    out.summary = _jsonable(est.to_dict())
    out.tables["pressure"] = [{"n": r["n"], "Z_lower": r["Z_lower"], "Z_upper": r["Z_upper"],
                               "slope": r["slope"]} for r in est.rows]
    for r in est.rows:
        z = r["Z_exact"] or f"[{r['Z_lower']:.12g}, {r['Z_upper']:.12g}]"
        out.lines.append(f"Z_{r['n']} = {z}")
    out.lines.append(f"P_G bracket [{est.bracket[0]:.6g}, {est.bracket[1]:.6g}]")
    if args.mode == "tower":
        lo, hi = est.bracket
        out.check("pressure bracket contains the shift", lo <= args.shift <= hi)


def cmd_discriminant(args, cfg, out):
    from .thermo import discriminant_scan

    tab = discriminant_scan(args.grid, cfg.caps, cfg.spec)
    out.summary = _jsonable(tab.to_dict())
    out.tables["discriminant"] = [{k: r.get(k) for k in ("p", "finite", "lower", "upper", "estimate")}
                                  for r in tab.rows]
    out.check("discriminant positive", tab.positive)


def cmd_spectrum(args, cfg, out):
    from .thermo import Caps, Potential, power_iterate

    caps = Caps(args.symbols, args.return_cap, args.depth, cfg.caps.fit_from, cfg.caps.exact)
    rep = power_iterate(Potential(cfg.spec), caps, args.iters, args.operator)
    out.summary = _jsonable(rep.to_dict())
    out.tables["decay"] = rep.decay_rows()
    out.lines.append(f"lambda = {rep.lam:.15g}  subleading ratio = {rep.ratio:.6g}  "
                     f"decay slope = {rep.slope:.6g}")
    out.check("subleading ratio < 1", rep.ratio < 1.0)
    if args.operator == "tower":
        out.check("decay slope within 0.05 of log ratio", abs(rep.slope - math.log(rep.ratio)) <= 0.05)


def cmd_variation(args, cfg, out):
    from .symbolic import RectangleSpec, variation_check

    fit = variation_check(RectangleSpec(args.past, args.future), args.samples, cfg.spec,
                          args.max_order, seed=args.seed)
    out.summary = _jsonable(fit.to_dict())
    out.tables["variation"] = [{"m": m, "n": n, "variation": v} for m, n, v in fit.rows]
    out.check("variation nonincreasing in min(m,n)", fit.monotone)
    if cfg.spec.affine:
        out.check("variation exactly 0 for the affine model", all(v == 0 for _, _, v in fit.rows))
    else:
        out.check("theta0 < 1", fit.theta0 is not None and fit.theta0 < 1)


def _run_config(args, cfg, **extra):
    d = {**cfg.mc}
    for key in ("seed", "steps", "samples", "burn_in"):
        v = getattr(args, key, None)
        if v is not None:
            d[key] = v
    d["threads"] = args.threads
    d.update(extra)
    from .stats import RunConfig

    try:
        return RunConfig(**d)
    except TypeError as err:
        raise ConfigError(str(err)) from err


def cmd_simulate(args, cfg, out):
    from .stats import simulate, symbol_chi2, x_marginal_chi2

    rc = _run_config(args, cfg)
    h = simulate(rc, cfg.spec, (args.bins, args.bins))
    chi, pv = x_marginal_chi2(h)
    schi, spv, crit = symbol_chi2(h, cfg.spec)
    out.summary = {**h.to_dict(), "x_chi2": chi, "x_pvalue": pv, "symbol_chi2": schi,
                   "symbol_chi2_critical_99": crit, "strip_fraction": h.strip_fraction}
    out.tables["histogram"] = h.rows()
    out.check("points lie in the strip union", h.strip_fraction == 1.0)
    if cfg.spec.affine:
        out.check("symbol frequencies follow w_i", schi <= crit)


def cmd_lyapunov(args, cfg, out):
    from .stats import lyapunov, lyapunov_band

    rc = _run_config(args, cfg)
    est = lyapunov(rc, cfg.spec)
    lo, hi = lyapunov_band(cfg.spec)
    out.summary = {**est.to_dict(), "band": [lo, hi], "config": rc.to_dict()}
    out.lines.append(f"lyapunov = {est.value:.6f} +- {est.stderr:.6f}")
    if cfg.spec.affine:
        out.check("lyapunov within 0.01 of the closed form", abs(est.value - lo) <= 0.01)
    else:
        out.check("lyapunov inside the distortion band", lo - 3 * est.stderr <= est.value <= hi + 3 * est.stderr)


def cmd_entropy(args, cfg, out):
    from .stats import entropy_check

    rc = _run_config(args, cfg)
    chk = entropy_check(rc, cfg.spec)
    out.summary = {**chk.to_dict(), "config": rc.to_dict()}
    out.lines.append(f"entropy = {chk.entropy.value:.6f}  integral = {chk.integral.value:.6f}")
    out.check("closed forms agree to 1e-12", abs(chk.closed_entropy - chk.closed_integral) <= 1e-12)
    out.check("entropy and integral agree within 3 sigma", abs(chk.difference) <= 3 * chk.combined_se)
    if cfg.spec.affine:
        out.check("entropy within 0.01 of the closed form", abs(chk.entropy.value - chk.closed_entropy) <= 0.01)
        out.check("integral within 0.01 of the closed form", abs(chk.integral.value - chk.closed_integral) <= 0.01)


def cmd_correlate(args, cfg, out):
    from .stats import correlation

    rc = _run_config(args, cfg)
    try:
        curve = correlation(args.f, args.g or args.f, rc, args.nmax, cfg.spec)
        fitted = True
    except NoFitError as err:
        curve, fitted = err.curve, False
    out.summary = _jsonable(curve.to_dict())
    out.tables["correlation"] = curve.rows()
    out.check("exponential fit found", fitted)
    if fitted:
        out.check("eta < 1 with R^2 >= 0.95", curve.eta < 1 and curve.r2 >= 0.95)
        out.lines.append(f"C = {curve.C:.6g}  eta = {curve.eta:.6g}  R^2 = {curve.r2:.5f}")


def cmd_clt(args, cfg, out):
    from .stats import clt_test

    rc = _run_config(args, cfg)
    rep = clt_test(args.f, rc, args.block, cfg.spec)
    out.summary = _jsonable(rep.to_dict())
    out.tables["clt"] = rep.quantiles
    out.lines.append(f"sigma^2 = {rep.sigma2:.6g}  KS = {rep.ks:.4g}")
    out.check("KS distance below threshold", rep.passed)


def cmd_all(args, cfg, out):
    from .acceptance import run_all

    rep = run_all(args.profile, echo=print)
    out.summary = rep
    for cid, r in rep["criteria"].items():
        out.check(f"criterion {cid}: {r['title']}", r["pass"])


HANDLERS = {
    "verify": cmd_verify, "enumerate": cmd_enumerate, "gaps": cmd_gaps, "cantor": cmd_cantor,
    "returns": cmd_returns, "tail": cmd_tail, "mixing": cmd_mixing, "pressure": cmd_pressure,
    "discriminant": cmd_discriminant, "spectrum": cmd_spectrum, "variation": cmd_variation,
    "simulate": cmd_simulate, "lyapunov": cmd_lyapunov, "entropy": cmd_entropy,
    "correlate": cmd_correlate, "clt": cmd_clt, "all": cmd_all,
}
RANDOMIZED = {"simulate", "lyapunov", "entropy", "correlate", "clt", "all", "variation"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--out", default="results", help="output directory (default: results)")
    common.add_argument("--threads", type=int, default=1, help="worker threads for Monte Carlo chunks")

    mc = argparse.ArgumentParser(add_help=False)
    mc.add_argument("--seed", type=int)
    mc.add_argument("--steps", type=int, help="iterations per trajectory including burn-in")
    mc.add_argument("--samples", type=int, help="independent trajectories")
    mc.add_argument("--burn-in", dest="burn_in", type=int)

    p = argparse.ArgumentParser(prog="cantormarkov", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", parents=[common], help="check the standing conditions")
    s.add_argument("--samples", type=int, default=64)

    s = sub.add_parser("enumerate", parents=[common], help="admissible continuations of a prefix")
    s.add_argument("--prefix", type=_word, default=(1,))
    s.add_argument("--length", type=int, required=True)
    s.add_argument("--cap", type=int)

    s = sub.add_parser("gaps", parents=[common], help="gap families of C_n")
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--order", type=int, default=2)

    s = sub.add_parser("cantor", parents=[common], help="certified measures of C_n")
    s.add_argument("--nmax", type=int, default=12)
    s.add_argument("--depth", type=int, default=60)

    s = sub.add_parser("returns", parents=[common], help="return words, MP_1 counts, Markov closure")
    s.add_argument("--source", type=int, default=1)
    s.add_argument("--target", type=int, default=3)
    s.add_argument("--max-len", dest="max_len", type=int)
    s.add_argument("--cap", type=int)
    s.add_argument("--bound-check", dest="bound_check", type=int, metavar="MAX_SYMBOL",
                   help="test the length bound for all source, target <= MAX_SYMBOL")
    s.add_argument("--mp1", action="store_true", help="count first-return words to 1 in both modes")
    s.add_argument("--markov", action="store_true", help="overlap-concatenation closure check")
    s.add_argument("--random", type=int, default=100_000, help="random cases for --markov")

    s = sub.add_parser("tail", parents=[common], help="return-time tail table and fit")
    s.add_argument("--nmax", type=int, default=12)
    s.add_argument("--target", choices=("C", "C1"), default="C")

    s = sub.add_parser("mixing", parents=[common], help="mixing lengths on the induced tower")
    s.add_argument("--max-len", dest="max_len", type=int, default=6)
    s.add_argument("--cap", type=int, default=4)
    s.add_argument("--horizon", type=int, default=20)

    s = sub.add_parser("pressure", parents=[common], help="partition sums and Gurevich pressure")
    s.add_argument("--mode", choices=("tower", "induced"), default="tower")
    s.add_argument("--nmax", type=int, default=12)
    s.add_argument("--shift", type=float, default=0.0)

    s = sub.add_parser("discriminant", parents=[common], help="induced pressure over shifts")
    s.add_argument("--grid", type=_grid, default=[0.0, 0.05, 0.1, 0.2])

    s = sub.add_parser("spectrum", parents=[common], help="transfer-operator power iteration")
    s.add_argument("--operator", choices=("induced", "tower"), default="induced")
    s.add_argument("--symbols", type=int, default=20)
    s.add_argument("--depth", type=int, default=6)
    s.add_argument("--return-cap", dest="return_cap", type=int, default=40)
    s.add_argument("--iters", type=int, default=200)

    s = sub.add_parser("variation", parents=[common], help="variation of log D^uF over rectangles")
    s.add_argument("--past", type=_word, default=(1,))
    s.add_argument("--future", type=_word, default=(1,))
    s.add_argument("--samples", type=int, default=16)
    s.add_argument("--max-order", dest="max_order", type=int, default=6)
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("simulate", parents=[common, mc], help="SRB histogram")
    s.add_argument("--bins", type=int, default=32)
    sub.add_parser("lyapunov", parents=[common, mc], help="Lyapunov exponent")
    sub.add_parser("entropy", parents=[common, mc], help="entropy versus the Lyapunov integral")
    s = sub.add_parser("correlate", parents=[common, mc], help="decay of correlations")
    s.add_argument("--f", default="x_centered")
    s.add_argument("--g")
    s.add_argument("--nmax", type=int, default=12)
    s = sub.add_parser("clt", parents=[common, mc], help="central limit theorem for block sums")
    s.add_argument("--f", default="x_centered")
    s.add_argument("--block", type=int)

    s = sub.add_parser("all", parents=[common], help="run the acceptance suite")
    s.add_argument("--profile", choices=("quick", "full"), default="quick")
    return p


def main(argv=None) -> int:
    from .config import load_config

    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        out = Outcome(args.command)
        HANDLERS[args.command](args, cfg, out)
    except (ConfigError, ArgumentError, DomainError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericError, ConvergenceError, DivergenceError, OverflowError, FloatingPointError) as err:
        print(f"numeric error: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    for line in out.lines:
        print(line)
    outdir = Path(args.out)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        summary = {"command": args.command, "version": __version__, "config": cfg.to_dict(),
                   "passed": out.passed, "verdicts": [{"claim": c, "pass": p} for c, p in out.verdicts],
                   "result": out.summary}
        if args.command in RANDOMIZED:
            summary["seed"] = getattr(args, "seed", None) or cfg.mc.get("seed") or _default_seed()
        (outdir / f"{args.command}.json").write_text(json.dumps(_jsonable(summary), indent=2))
        for name, rows in out.tables.items():
            write_csv(outdir / f"{args.command}_{name}.csv", [_jsonable(r) for r in rows])
    except OSError as err:
        print(f"error: cannot write to {str(outdir)!r}: {err.strerror}", file=sys.stderr)
        return EXIT_CONFIG
    for claim, ok in out.verdicts:
        print(f"{'PASS' if ok else 'FAIL'} {claim}")
    return EXIT_OK if out.passed else EXIT_FAIL


def _default_seed() -> int:
    from .stats import RunConfig

    return RunConfig().seed


if __name__ == "__main__":
    sys.exit(main())
