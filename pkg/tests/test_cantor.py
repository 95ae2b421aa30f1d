from __future__ import annotations

import math

import pytest

from cantormarkov.cantor import cantor_measure, exact_upper, relative_measure, survival_product


def test_rho1_interval_is_tight():
    rho = relative_measure(1, 60)
    assert float(rho.width) < 1e-6
    assert float(rho.lower) >= 0.288
    prod = math.prod(1 - 2.0 ** -m for m in range(1, 200))
    assert prod <= float(rho.lower)


@pytest.mark.parametrize("budget", [1, 2, 3, 5])
def test_bounds_tighten_with_depth(budget):
    prev = None
    for depth in (4, 8, 16, 32):
        m = relative_measure(budget, depth)
        if prev is not None:
            assert m.lower >= prev.lower - 1e-15
            assert m.upper <= prev.upper + 1e-15
        prev = m


def test_relative_measure_increases_with_budget():
    vals = [float(relative_measure(j, 40).lower) for j in range(1, 8)]
    assert vals == sorted(vals)


def test_exact_upper_dominates_float_upper():
    assert float(exact_upper(1, 8)) >= float(relative_measure(1, 8).lower)


@pytest.mark.parametrize("n", range(5, 13))
def test_cantor_measure_lower_bounds(n):
    assert float(cantor_measure(n).lower) >= 1 - 2.0 ** (-n + 1) - 1e-6


@pytest.mark.parametrize("budget", [1, 2, 4, 8])
def test_survival_product_is_a_lower_bound(budget):
    assert survival_product(budget) <= float(relative_measure(budget, 60).lower)
