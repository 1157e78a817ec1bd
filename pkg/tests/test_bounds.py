from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from threetrans.bounds import (
    CASES,
    COSET,
    LATTICE,
    BoundInstance,
    is_integer_square,
    lattice_top_weight,
    non_square_sweep,
    run_all_cases,
    sigma_bound,
    top_weight_table,
)
from threetrans.errors import RangeError, UnsupportedFamily

F = Fraction


@pytest.mark.parametrize("args,want", [
    ((12, 6, 8, 4, F(1)), F(3, 2)),
    ((36, 15, 20, 8, F(3, 2)), F(72, 35)),
    ((496, 126, 240, 64, F(3, 2)), F(12, 7)),
])
def test_sigma_bound_examples(args, want):
    ig, ih, kg, kh, lam = args
    assert sigma_bound(BoundInstance("x", ig, ih, kg, kh, lam, F(2))) == want


def test_instance_validation():
    with pytest.raises(ValueError):
        BoundInstance("x", 6, 12, 8, 4, F(1), F(2))
    with pytest.raises(ValueError):
        BoundInstance("x", 12, 6, 4, 8, F(1), F(2))
    with pytest.raises(ValueError):
        BoundInstance("x", 12, 6, 8, 4, F(0), F(2))


def test_all_cases():
    res = run_all_cases()
    assert len(res) == 11
    for r in res:
        assert r.matches and r.contradiction and r.ok, r.row()
    by = {r.case.name: r for r in res}
    c2 = by["Thm5.2-Case2"]
    assert (c2.case.lam, c2.bound, c2.case.h_min) == (2, F(9, 4), 3)
    c4 = by["Thm6.3-Case4"]
    assert (c4.case.lam, c4.bound, c4.case.h_min) == (F(3, 2), F(3, 2), 2)
    assert by["Thm6.3-Case3"].bound == F(68, 45)
    assert [by[f"Thm5.2-Case{i}"].case.h_min for i in (1, 2, 3)] == [3, 3, 3]


def test_expected_bounds_listed():
    want = [F(3, 2), F(4, 3), F(72, 35), F(9, 4), F(75, 28), F(9, 5), F(14, 9), F(68, 45), F(3, 2), F(12, 7), F(12, 7)]
    assert [r.bound for r in run_all_cases()] == want


def test_mismatch_is_reported():
    bad = BoundInstance("x", 12, 6, 8, 4, F(1), F(3), F(1))
    (r,) = run_all_cases([bad])
    assert r.contradiction and not r.matches and not r.ok
    assert r.row()["verdict"] == "contradiction"


def test_lattice_tables():
    assert set(top_weight_table(LATTICE, 3).weights) == {0, F(2, 3), 1}
    t6 = top_weight_table(LATTICE, 6)
    assert {F(5, 6), F(4, 3)} <= set(t6.weights) and t6.max_weight == F(3, 2)
    assert all(w >= 0 for w in t6.weights)
    dims = dict()
    for w, d in t6.entries:
        dims[w] = dims.get(w, 0) + d
    assert dims[F(3, 2)] == math.comb(6, 3)


def test_coset_tables():
    assert top_weight_table(COSET, 7).max_weight == 2
    assert top_weight_table(COSET, 5).weights == [0, F(3, 4), F(5, 4), F(3, 2)]
    assert top_weight_table(COSET, 3).weights == top_weight_table(LATTICE, 3).weights


@pytest.mark.parametrize("fam,n", [(COSET, 2), (COSET, 4), (COSET, 9), ("E8", 3), (LATTICE, 1)])
def test_unsupported_tables(fam, n):
    with pytest.raises(UnsupportedFamily):
        top_weight_table(fam, n)


def test_lattice_top_weight_examples():
    assert lattice_top_weight(4, 0, 1) == F(1, 48)
    assert lattice_top_weight(5, 0, 20) == 5
    assert lattice_top_weight(4, 1, 23) == F(47**2, 48)
    with pytest.raises(RangeError):
        lattice_top_weight(4, 1, 24)
    with pytest.raises(RangeError):
        lattice_top_weight(4, 0, 0)


def test_non_square_sweep():
    checks, bad = non_square_sweep()
    assert bad == []
    assert checks == sum(11 * (2 * n * (n - 1) - 1) for n in range(4, 13))


def test_is_integer_square():
    assert is_integer_square(49) and is_integer_square(F(16, 1)) and is_integer_square(0)
    assert not is_integer_square(F(1, 4)) and not is_integer_square(-4) and not is_integer_square(2)


inst = st.builds(
    lambda ih, dg, kh, dk, lam: (ih + dg, ih, kh + dk, kh, lam),
    st.integers(1, 500), st.integers(0, 500), st.integers(1, 300), st.integers(0, 300),
    st.fractions(min_value=F(1, 10), max_value=5),
)


@given(inst, st.integers(1, 50))
def test_monotone_in_lambda_and_ig(t, bump):
    ig, ih, kg, kh, lam = t
    base = sigma_bound(BoundInstance("x", ig, ih, kg, kh, lam, F(2)))
    assert sigma_bound(BoundInstance("x", ig, ih, kg, kh, lam + bump, F(2))) > base
    assert sigma_bound(BoundInstance("x", ig + bump, ih, kg, kh, lam, F(2))) > base


@given(inst)
def test_decreasing_in_ih(t):
    ig, ih, kg, kh, lam = t
    assume(ih > 1)
    lo = sigma_bound(BoundInstance("x", ig, ih, kg, kh, lam, F(2)))
    hi = sigma_bound(BoundInstance("x", ig, ih - 1, kg, kh, lam, F(2)))
    assert hi > lo


def test_cases_are_frozen_data():
    assert len(CASES) == 11
    assert CASES[0].name == "Lemma4.7"
