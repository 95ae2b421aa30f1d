from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cantormarkov.cantor import relative_measure
from cantormarkov.errors import ArgumentError, DivergenceError, InsufficientDataError
from cantormarkov.model import DEFAULT_SPEC, Point
from cantormarkov.returns import ReturnWord, returns_to_one_masses
from cantormarkov.symbolic import enumerate_admissible
from cantormarkov.thermo import (Caps, CylinderTable, Potential, cohomology_u, discriminant_scan,
                                 gurevich_pressure, induced_operator, induced_potential, induced_z1,
                                 is_cyclically_admissible, partition_sum, potential_value, power_iterate,
                                 renewal_operator, SeparationTimes, separation, tower_sum_exact, transfer_apply)

LOG2 = math.log(2.0)
SMALL = Caps(symbol_cap=20, return_cap=40, depth=4)


def _brute_z(n: int) -> Fraction:
    tot = Fraction(0)
    for w in enumerate_admissible((1,), n):
        if is_cyclically_admissible(w):
            tot += math.prod((DEFAULT_SPEC.exact_width(s) for s in w), start=Fraction(1))
    return tot


# potentials -------------------------------------------------------------------------

def test_potential_value_examples():
    assert potential_value([1]) == pytest.approx(-LOG2)
    assert potential_value([1, 1, 2]) == pytest.approx(-4 * LOG2)


@given(st.lists(st.integers(1, 20), min_size=1, max_size=8), st.floats(-2.0, 2.0))
def test_shift_adds_length_times_p(w, p):
    assert potential_value(w, Potential(shift=p)) == pytest.approx(potential_value(w) + len(w) * p)


def test_induced_potential_examples():
    assert induced_potential(ReturnWord((1, 1))) == pytest.approx(-LOG2)
    assert induced_potential(ReturnWord((1, 1, 1, 3))) == pytest.approx(-3 * LOG2)


@given(st.floats(0.0, 1.0))
def test_induced_potential_shift_inequality(p):
    rw = ReturnWord((1, 1, 2, 1))
    shifted = induced_potential(rw, Potential(shift=p))
    assert shifted == pytest.approx(induced_potential(rw) + rw.return_time * p)
    assert shifted >= induced_potential(rw) + p - 1e-12


def test_perturbed_potential_is_log_width():
    spec = DEFAULT_SPEC.with_(perturbation=0.05)
    pot = Potential(spec)
    lo, hi = pot.symbol_bounds(2)
    assert lo <= math.log(spec.width(2)) <= hi
    assert potential_value([1, 2], pot) < 0.0


# partition sums ---------------------------------------------------------------------

def test_tower_sums_exact_values():
    want = [Fraction(1, 2), Fraction(1, 4), Fraction(3, 16), Fraction(43, 256)]
    assert [tower_sum_exact(n) for n in range(1, 5)] == want


@pytest.mark.parametrize("n", range(1, 8))
def test_tower_sums_match_cyclic_brute_force(n):
    assert tower_sum_exact(n) == _brute_z(n)


def test_tower_sums_nonincreasing_and_bounded_below():
    c_hat = float(relative_measure(1, 60).lower)
    zs = [float(tower_sum_exact(n)) for n in range(1, 16)]
    assert all(b <= a for a, b in zip(zs, zs[1:]))
    assert all(z >= c_hat / 2.0 for z in zs)


@pytest.mark.parametrize("n", range(1, 9))
def test_partition_sum_shift_law(n):
    p = 0.3
    base = partition_sum(n)
    shifted = partition_sum(n, Potential(shift=p))
    assert shifted.lower == pytest.approx(base.lower * math.exp(p * n))


def test_cyclic_admissibility_examples():
    assert is_cyclically_admissible((1, 1))
    assert not is_cyclically_admissible((1, 2))
    assert is_cyclically_admissible((1, 1, 2))


def test_pressure_bracket_contains_zero():
    est = gurevich_pressure(Potential(), 12, "tower")
    lo, hi = est.bracket
    assert lo <= 0.0 <= hi
    assert est.half_width <= math.log(2.0 / est.detail["c_hat"]) / 12


def test_pressure_requires_enough_terms():
    with pytest.raises(ArgumentError):
        gurevich_pressure(Potential(), 3)


def test_induced_z1_certified_for_nonpositive_shift():
    z, est = induced_z1(0.0)
    assert z.certified and z.lower <= est <= z.upper <= 1.0
    z, _ = induced_z1(0.05)
    assert not z.certified
    with pytest.raises(DivergenceError):
        induced_z1(0.2)


def test_discriminant_scan_is_positive():
    tab = discriminant_scan([0.0, 0.05, 0.1, 0.2])
    rows = {r["p"]: r for r in tab.rows}
    assert rows[0.0]["upper"] <= 1e-12
    assert rows[0.1]["lower"] > 0.0
    assert not rows[0.2]["finite"]
    assert tab.positive and 0.1 < tab.threshold < 0.2


def test_discriminant_rejects_repeated_grid():
    with pytest.raises(ArgumentError):
        discriminant_scan([0.0, 0.0])


# induced transfer operator ----------------------------------------------------------

def test_transfer_of_one_is_induced_mass():
    op = induced_operator(Potential(), SMALL)
    one = CylinderTable.constant(4, 1.0, SMALL)
    out = transfer_apply(one, op=op)
    assert np.allclose(out.values, op.mass)
    assert np.all(out.lower <= out.values) and np.all(out.values <= out.upper)


@pytest.mark.parametrize("n", range(1, 4))
def test_iterated_transfer_matches_induced_partition_sum(n):
    f = CylinderTable.constant(5, 1.0, Caps(symbol_cap=20, depth=5))
    for _ in range(n):
        op = induced_operator(Potential(), Caps(symbol_cap=20, return_cap=40, depth=f.depth))
        f = transfer_apply(f, op=op)
    z = partition_sum(n, Potential(), "induced", Caps(symbol_cap=20, return_cap=40))
    assert f.values[0] == pytest.approx(z.lower, rel=1e-9)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 31), st.floats(-3.0, 3.0))
def test_transfer_is_linear_and_positive(seed, alpha):
    op = induced_operator(Potential(), SMALL)
    rng = np.random.default_rng(seed)
    words = op.words
    f = CylinderTable(4, words, rng.random(len(words)))
    g = CylinderTable(4, words, rng.random(len(words)))
    lhs = transfer_apply(f + g.scale(alpha), op=op).values
    rhs = transfer_apply(f, op=op).values + alpha * transfer_apply(g, op=op).values
    assert np.allclose(lhs, rhs)
    assert np.all(transfer_apply(f, op=op).values >= 0.0)


def test_transfer_depth_errors():
    caps = Caps(symbol_cap=20, depth=1)
    with pytest.raises(ArgumentError):
        transfer_apply(CylinderTable.constant(1, 1.0, caps))
    with pytest.raises(ArgumentError):
        induced_operator(Potential(), caps)


def test_transfer_needs_affine_model():
    with pytest.raises(ArgumentError):
        induced_operator(Potential(DEFAULT_SPEC.with_(perturbation=0.1)), SMALL)


def test_induced_leading_eigenvalue_is_mass():
    caps = Caps(symbol_cap=20, return_cap=40, depth=6)
    rep = power_iterate(Potential(), caps, 200, "induced")
    assert rep.lam == pytest.approx(math.fsum(returns_to_one_masses(40, cap=20)), abs=1e-10)
    assert rep.lam_bounds[0] - 1e-12 <= rep.lam <= rep.lam_bounds[1] + 1e-12


def test_tower_operator_spectrum_matches_dense_eig():
    caps = Caps(symbol_cap=20, return_cap=30)
    rep = power_iterate(Potential(), caps, 400, "tower")
    ev = np.sort(np.abs(np.linalg.eigvals(renewal_operator(Potential(), caps).matrix)))[::-1]
    assert rep.lam == pytest.approx(ev[0], rel=1e-8)
    assert rep.ratio == pytest.approx(ev[1] / ev[0], abs=5e-3)
    assert rep.gap
    assert abs(rep.slope - math.log(rep.ratio)) < 0.05


def test_power_iterate_argument_errors():
    with pytest.raises(ArgumentError):
        power_iterate(Potential(), SMALL, 1)
    with pytest.raises(ArgumentError):
        power_iterate(Potential(), SMALL, 10, "other")


# cohomology and separation ----------------------------------------------------------

@given(st.floats(0.0, 0.999), st.floats(0.0, 1.0))
def test_cohomology_vanishes_in_affine_case(x, y):
    assert cohomology_u(Point(x, y), 10) == (0.0, 0.0)


def test_cohomology_vanishes_on_reference_leaf():
    spec = DEFAULT_SPEC.with_(perturbation=0.05)
    value, _ = cohomology_u(Point(0.3, 0.0), 10, spec, C=1.0, theta0=0.5)
    assert value == 0.0


def test_cohomology_tail_bound():
    spec = DEFAULT_SPEC.with_(perturbation=0.05)
    value, tail = cohomology_u(Point(0.3, 0.7), 8, spec)
    deep, _ = cohomology_u(Point(0.3, 0.7), 30, spec)
    assert abs(deep - value) <= tail + 1e-12


def test_separation_examples():
    assert separation([1, 2, 3], [1, 2, 4]) == SeparationTimes(2, 1)
    assert separation([2, 1], [1, 1]) == SeparationTimes(0, 0)
    assert separation([1, 1, 1, 5], [1, 1, 1, 6]) == SeparationTimes(3, 3)
    with pytest.raises(InsufficientDataError):
        separation([1, 2], [1, 2, 3])
