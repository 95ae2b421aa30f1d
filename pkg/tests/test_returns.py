from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cantormarkov.errors import ArgumentError
from cantormarkov.returns import (ReturnWord, first_return_words, fit_exponential, is_first_return_to_one,
                                  is_return_word, kac_check, lemma_check, lemma_check_bruteforce,
                                  length_bound_violations, markov_check, mixing_check, mp1_words,
                                  mp1_words_composed, return_tail, returns_to_one_masses,
                                  transition_matrix)
from cantormarkov.symbolic import enumerate_admissible, is_admissible


def _brute_returns(j0, j1, max_len):
    out = []
    for L in range(2, max_len + 1):
        for w in enumerate_admissible((j0,), L, max(j0, j1)):
            if w[-1] == j1 and is_return_word(w):
                out.append(w)
    return sorted(out)


def test_worked_return_words():
    words = {rw.word for rw in first_return_words(1, 3)}
    assert (1, 1, 1, 3) in words and (1, 1, 2, 3) in words
    rw = ReturnWord.checked((1, 1, 2, 3))
    assert (rw.source, rw.target, rw.return_time) == (1, 3, 3)


@pytest.mark.parametrize("j0,j1", [(1, 1), (1, 3), (2, 4), (3, 2), (1, 5)])
def test_return_words_match_brute_force(j0, j1):
    got = [rw.word for rw in first_return_words(j0, j1)]
    assert got == _brute_returns(j0, j1, j1 + 3)


def test_checked_rejects_non_return_word():
    with pytest.raises(ArgumentError):
        ReturnWord.checked((1, 1, 1))


def test_corrected_length_bound_has_no_violations():
    assert length_bound_violations(6, "target") == []


def test_stated_length_bound_counterexample():
    bad = {rw.word for rw in length_bound_violations(3, "stated")}
    assert (2, 1, 2) in bad


def test_mp1_strict_matches_composition_and_brute_force():
    for L in range(2, 8):
        strict = [rw.word for rw in mp1_words(L)]
        composed = [rw.word for rw in mp1_words_composed(L)]
        brute = sorted(w for n in range(2, L + 1) for w in enumerate_admissible((1,), n)
                       if is_first_return_to_one(w))
        assert strict == composed == brute


def test_mp1_small_alphabet():
    assert [rw.word for rw in mp1_words(4)] == [(1, 1), (1, 1, 2, 1)]
    assert [len(mp1_words(L)) for L in range(2, 8)] == [1, 1, 2, 6, 35, 356]


def test_no_interior_one_mode_counts():
    S, L = 4, 5
    n = len(mp1_words(L, "no_interior_one", S))
    assert n == sum((S - 1) ** k for k in range(L - 1))
    with pytest.raises(ArgumentError):
        mp1_words(L, "no_interior_one")


def test_transition_matrix_all_ones_on_mp1():
    M = transition_matrix(mp1_words(6, symbol_cap=4))
    assert M.min() == 1


def test_masses_match_word_weights():
    R = 7
    q = returns_to_one_masses(R, cap=20, exact=True)
    by_time = [Fraction(0)] * R
    for rw in mp1_words(R + 1, symbol_cap=20):
        by_time[rw.return_time - 1] += rw.weight()
    assert q == by_time


def test_masses_are_bounded_by_one():
    q = returns_to_one_masses(40, cap=20)
    assert 0.0 < sum(q) <= 1.0


def test_lemma_agrees_with_brute_force():
    fast = lemma_check(8)
    slow = lemma_check_bruteforce(8)
    assert fast["counterexamples"] == slow["counterexamples"] == 0
    assert fast["min_closing_symbol"] == slow["min_closing_symbol"]


def test_return_tail_fit():
    fit = return_tail(12)
    assert fit.passed and fit.r2 >= 0.98
    assert 0.0 < fit.beta < 1.0


def test_fit_exponential_recovers_geometric():
    ns = list(range(1, 15))
    C, beta, r2, _ = fit_exponential(ns, [3.0 * 0.7 ** n for n in ns])
    assert C == pytest.approx(3.0) and beta == pytest.approx(0.7) and r2 == pytest.approx(1.0)


def test_mass_balance_at_one():
    res = kac_check(20)
    assert res["consistent"]


def test_markov_example_and_witnesses():
    res = markov_check((1, 1, 2), (2,))
    assert res.ok and res.merged == (1, 1, 2)
    assert (1, 1, 2, 3) in res.witnesses and (1, 1, 2, 4) in res.witnesses
    assert not is_admissible((2, 3))


@given(st.integers(0, 2 ** 31), st.integers(1, 6), st.integers(2, 8), st.integers(1, 8))
def test_overlap_concatenation_is_admissible(seed, first, lu, lv):
    from cantormarkov.symbolic import random_admissible
    rng = np.random.default_rng(seed)
    u = random_admissible((first,), lu, rng)
    v = random_admissible((u[-1],), lv, rng)
    assert markov_check(u, v).ok


def test_markov_check_argument_errors():
    with pytest.raises(ArgumentError):
        markov_check((1, 1), (2,))
    with pytest.raises(ArgumentError):
        markov_check((1, 3), (3,))


def test_mixing_lengths_finite():
    tab = mixing_check(mp1_words(6, symbol_cap=4))
    assert len(tab.states) == 22
    assert tab.all_finite
