from __future__ import annotations

import math

import pytest
from hypothesis import given, strategies as st

from cantormarkov.errors import ArgumentError
from cantormarkov.model import (DEFAULT_SPEC, ModelSpec, Point, apply, apply_inverse_branch, g_eps,
                                g_eps_inverse, g_eps_prime, itinerary, locate, unstable_derivative,
                                verify_conditions)


def test_geometry_of_default_rectangles():
    spec = DEFAULT_SPEC
    assert spec.width(1) == 0.5
    assert spec.width(3) == 0.125
    assert spec.left_edge(2) == 0.5
    assert spec.offset(1) == 0.0
    assert spec.offset(2) == pytest.approx(1.0 / 3.0)
    # strips are stacked without overlap
    for i in range(1, 10):
        assert spec.offset(i) + spec.height(i) <= spec.offset(i + 1) + 1e-15


def test_locate_boundaries():
    assert locate(Point(0.0, 0.2)) == 1
    assert locate(Point(0.4999, 0.2)) == 1
    assert locate(Point(0.5, 0.2)) == 2
    assert locate(Point(0.8, 0.2)) == 3


def test_apply_affine_example():
    q = apply(Point(0.625, 0.5))
    assert q.x == pytest.approx(0.5)
    assert q.y == pytest.approx(1.0 / 3.0 + 0.5 / 9.0)


@given(st.floats(0.0, 0.999), st.floats(0.0, 1.0), st.integers(1, 12))
def test_inverse_branch_roundtrip(x, y, i):
    spec = DEFAULT_SPEC.with_(perturbation=0.05)
    c, h = spec.offset(i), spec.height(i)
    p = Point(x, c + h * y)
    pre = apply_inverse_branch(p, i, spec)
    assert pre.on_strip
    back = apply(pre.point(), spec)
    assert back.x == pytest.approx(x, abs=1e-9)
    assert back.y == pytest.approx(p.y, abs=1e-12)


def test_inverse_branch_off_strip():
    pre = apply_inverse_branch(Point(0.3, 0.9), 1)
    assert not pre.on_strip and pre.y is None


@given(st.floats(0.0, 1.0), st.floats(0.0, 0.9))
def test_g_eps_inverse(s, eps):
    t = g_eps_inverse(s, eps)
    assert float(g_eps(t, eps)) == pytest.approx(s, abs=1e-12)
    assert 1.0 - eps - 1e-15 <= float(g_eps_prime(t, eps)) <= 1.0 + eps + 1e-15


def test_unstable_derivative_affine():
    assert unstable_derivative(Point(0.1, 0.0)) == pytest.approx(2.0)
    assert unstable_derivative(Point(0.8, 0.0)) == pytest.approx(8.0)


def test_itinerary_of_dyadic_point():
    # x = 0.625 = E_2 then 0.5 in E_2 then 0 in E_1
    assert itinerary(Point(0.625, 0.1), 3) == (2, 2, 1)


def test_spec_validation():
    with pytest.raises(ArgumentError):
        ModelSpec(width_base=1.2)
    with pytest.raises(ArgumentError):
        ModelSpec(perturbation=1.0)
    with pytest.raises(ArgumentError):
        ModelSpec(symbol_cap=0)


def test_default_conditions_hold():
    rep = verify_conditions()
    assert rep.all_passed, rep.failed
    assert rep.K0 == 2
    assert all(math.isfinite(e.margin) for e in rep.entries)


def test_rigged_height_fails_only_h5():
    rep = verify_conditions(ModelSpec(width_base=0.4, height_base=0.45))
    assert rep.failed == ["H5"]


def test_rigged_perturbation_fails_only_h2():
    rep = verify_conditions(DEFAULT_SPEC.with_(perturbation=0.6))
    assert rep.failed == ["H2"]
