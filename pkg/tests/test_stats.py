from __future__ import annotations

import math

import numpy as np
import pytest

from cantormarkov import stats
from cantormarkov.errors import ArgumentError, InsufficientDataError, NoFitError, NumericError
from cantormarkov.model import DEFAULT_SPEC
from cantormarkov.stats import (DegenerateObservableWarning, RunConfig, alphabet_tail, autocovariance,
                                clt_test, correlation, entropy_check, entropy_closed_form, in_strips,
                                lyapunov, lyapunov_band, lyapunov_series, observable, sample_paths,
                                simulate, symbol_chi2, x_marginal_chi2)

SMALL = RunConfig(seed=11, burn_in=16, steps=2016, samples=64)


def test_closed_forms_agree():
    assert entropy_closed_form() == pytest.approx(2 * math.log(2.0), abs=1e-12)
    assert lyapunov_series() == pytest.approx(entropy_closed_form(), abs=1e-12)
    spec = DEFAULT_SPEC.with_(width_base=0.3)
    assert lyapunov_series(spec) == pytest.approx(entropy_closed_form(spec), abs=1e-12)


def test_alphabet_tail_small():
    assert alphabet_tail(20) < 1e-4
    assert alphabet_tail(5) > alphabet_tail(10) > 0.0


def test_lyapunov_band_contains_affine_value():
    lo, hi = lyapunov_band(DEFAULT_SPEC.with_(perturbation=0.1))
    assert lo < 2 * math.log(2.0) < hi


def test_simulation_is_deterministic():
    a = simulate(SMALL)
    b = simulate(SMALL)
    assert np.array_equal(a.counts, b.counts)
    c = simulate(RunConfig(seed=12, burn_in=16, steps=2016, samples=64))
    assert not np.array_equal(a.counts, c.counts)


def test_thread_count_does_not_change_results():
    cfg = RunConfig(seed=3, burn_in=8, steps=208, samples=3000)
    one = sample_paths(cfg)
    many = sample_paths(RunConfig(seed=3, burn_in=8, steps=208, samples=3000, threads=4))
    assert np.array_equal(one, many)


def test_histogram_marginals_and_strips():
    h = simulate(SMALL)
    assert h.total == SMALL.samples * SMALL.kept == h.counts.sum()
    _, p = x_marginal_chi2(h)
    assert p > 1e-4
    stat, _, crit = symbol_chi2(h)
    assert stat < crit
    assert h.strip_fraction == 1.0


def test_in_strips_union():
    # with a_1 = 1/3 the strips tile [0, 1/2)
    y = np.array([0.0, 0.2, 0.34, 0.49, 0.51, 0.9])
    assert in_strips(y).tolist() == [True, True, True, True, False, False]


def test_perturbed_run_uses_float_dynamics():
    cfg = RunConfig(seed=5, burn_in=8, steps=1008, samples=32)
    h = simulate(cfg, DEFAULT_SPEC.with_(perturbation=0.05))
    assert not h.exact_dynamics and h.total == 32 * 1000


def test_escape_raises_numeric_error(monkeypatch):
    monkeypatch.setattr(stats, "g_eps", lambda t, eps: np.full_like(t, np.nan))
    cfg = RunConfig(seed=5, burn_in=0, steps=10, samples=4)
    with pytest.raises(NumericError) as err:
        simulate(cfg, DEFAULT_SPEC.with_(perturbation=0.05))
    assert err.value.step == 0


def test_lyapunov_and_entropy_values():
    cfg = RunConfig(seed=21, burn_in=16, steps=10_016, samples=20)
    est = lyapunov(cfg)
    assert abs(est.value - 2 * math.log(2.0)) < 0.01
    chk = entropy_check(cfg)
    assert abs(chk.entropy.value - chk.closed_entropy) < 0.01
    assert abs(chk.difference) <= 3.0 * chk.combined_se + 1e-3


def test_lyapunov_needs_data():
    with pytest.raises(InsufficientDataError):
        lyapunov(RunConfig(burn_in=0, steps=100, samples=10))


def test_autocovariance_of_constant_is_zero():
    F = np.ones((4, 50))
    vals, _ = autocovariance(F, F, 5)
    assert np.all(vals == 0.0)
    with pytest.raises(ArgumentError):
        autocovariance(F, F, 50)


def test_variance_and_decay_of_x():
    cfg = RunConfig(seed=7, burn_in=16, steps=4016, samples=200)
    curve = correlation("x_centered", "x_centered", cfg, 12)
    assert curve.values[0] == pytest.approx(1.0 / 12.0, abs=3 * curve.stderr[0] + 1e-3)
    assert curve.eta == pytest.approx(1.0 / 3.0, abs=0.1)
    assert curve.r2 >= 0.95


def test_constant_observable_has_no_fit():
    with pytest.raises(NoFitError) as err:
        correlation("one", "one", RunConfig(seed=1, burn_in=4, steps=504, samples=8), 5)
    assert err.value.curve is not None
    assert np.all(err.value.curve.values == 0.0)


def test_smoothed_indicator_names():
    f = observable("e1_smooth_3")
    x = np.array([0.0, 0.5, 1.0 - 1e-9])
    assert np.allclose(f.fn(x, x, x, DEFAULT_SPEC), [1.0, 0.5, 0.0])
    with pytest.raises(ArgumentError):
        observable("nope")


def test_clt_for_x():
    cfg = RunConfig(seed=9, burn_in=16, steps=1016, samples=2000)
    rep = clt_test("x_centered", cfg)
    assert rep.sigma2 == pytest.approx(1.0 / 6.0, abs=5 * rep.sigma2_se)
    assert rep.ks < 0.05


def test_clt_degenerate_observable_warns():
    with pytest.warns(DegenerateObservableWarning):
        rep = clt_test("zero", RunConfig(seed=1, burn_in=4, steps=104, samples=16))
    assert rep.degenerate and not rep.passed


def test_clt_block_longer_than_run():
    with pytest.raises(ArgumentError):
        clt_test("x", RunConfig(seed=1, burn_in=4, steps=104, samples=4), block_n=1000)


@pytest.mark.parametrize("kwargs", [{"seed": -1}, {"steps": 10, "burn_in": 10}, {"samples": 0},
                                    {"observables": ("bogus",)}])
def test_run_config_validation(kwargs):
    with pytest.raises(ArgumentError):
        RunConfig(**kwargs)
