from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cantormarkov.errors import ArgumentError
from cantormarkov.model import DEFAULT_SPEC
from cantormarkov.symbolic import (RectangleSpec, cylinder_interval, cylinder_width, enumerate_admissible,
                                   enumerate_gaps, exact_weight, first_violation, is_admissible,
                                   random_admissible, variation_check)

words = st.lists(st.integers(1, 12), min_size=1, max_size=10)


def _brute(prefix, length, cap):
    out = []
    for tail in itertools.product(range(1, cap + 1), repeat=length - len(prefix)):
        w = tuple(prefix) + tail
        if is_admissible(w):
            out.append(w)
    return out


def test_order_three_and_four_from_one():
    assert enumerate_admissible((1,), 3) == [(1, 1, 1), (1, 1, 2)]
    assert len(enumerate_admissible((1,), 4)) == 7
    assert (1, 1, 2, 4) in enumerate_admissible((1,), 4)


@pytest.mark.parametrize("prefix,length", [((1,), 5), ((2,), 4), ((1, 1), 6), ((3,), 3)])
def test_enumeration_matches_brute_force(prefix, length):
    cap = sum(prefix) * 2 ** (length - len(prefix))
    assert enumerate_admissible(prefix, length) == _brute(prefix, length, cap)


def test_enumeration_respects_cap():
    capped = enumerate_admissible((1,), 6, 3)
    assert all(max(w) <= 3 for w in capped)
    assert capped == [w for w in enumerate_admissible((1,), 6) if max(w) <= 3]


def test_gaps_of_c3():
    found = {g.stem: g.threshold for o in (1, 2, 3) for g in enumerate_gaps(3, o)}
    assert found[(3,)] == 3
    assert found[(3, 1)] == 4
    assert found[(3, 3)] == 6
    assert found[(3, 1, 1)] == 5


@given(words)
def test_first_violation_consistent(w):
    k = first_violation(w)
    assert (k is None) == is_admissible(w)
    if k is not None:
        assert w[k] > sum(w[:k])
        assert is_admissible(w[:k])


@given(words)
def test_prefixes_of_admissible_are_admissible(w):
    if is_admissible(w):
        assert all(is_admissible(w[:k]) for k in range(1, len(w) + 1))


@given(st.integers(1, 6), st.integers(2, 12), st.integers(0, 2 ** 31))
def test_random_admissible_is_admissible(first, length, seed):
    w = random_admissible((first,), length, np.random.default_rng(seed))
    assert len(w) == length and is_admissible(w)


@given(words)
def test_cylinder_width_exact_matches_interval(w):
    lo, hi = cylinder_interval(w)
    assert float(exact_weight(w)) == pytest.approx(hi - lo, rel=1e-9, abs=1e-14)
    assert cylinder_width(w).exact


def test_cylinder_width_example():
    assert cylinder_width((1, 1, 2)).lower == Fraction(1, 16)


@given(st.lists(st.integers(1, 5), min_size=1, max_size=5))
def test_perturbed_width_is_bracketed(w):
    spec = DEFAULT_SPEC.with_(perturbation=0.1)
    lo, hi = cylinder_interval(w, spec)
    mi = cylinder_width(w, spec)
    assert mi.lower <= hi - lo <= mi.upper


def test_cylinder_width_rejects_empty_word():
    with pytest.raises(ArgumentError):
        cylinder_width(())


def test_variation_vanishes_in_affine_case():
    fit = variation_check(RectangleSpec((1,), (1,)), 8)
    assert max(v for _, _, v in fit.rows) == 0.0


def test_variation_decays_with_perturbation():
    fit = variation_check(RectangleSpec((1,), (1,)), 12, DEFAULT_SPEC.with_(perturbation=0.05))
    assert fit.monotone and fit.passed
    assert 0.0 < fit.theta0 < 1.0
    assert all(v <= fit.C * fit.theta0 ** k * (1 + 1e-9) + 1e-15 for k, v in fit.levels)


def test_variation_rejects_inadmissible_rectangle():
    with pytest.raises(ArgumentError):
        variation_check(RectangleSpec((1,), (3,)), 4)
