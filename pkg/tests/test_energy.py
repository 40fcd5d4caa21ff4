import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import energy_by_tuples, sumset_counter
from sqdiff.energy import (convolution_power, diagonal_lower, energy, energy_approx, energy_brute,
                           energy_conv, energy_mitm, mfold_sum_table, split_intervals,
                           sumset_size, theorem_bound_rhs, translate)
from sqdiff.errors import InvalidArgument, ResourceError
from sqdiff.rationals import RationalSet, ReducedRational, enumerate_rationals

S3 = RationalSet.of(["1/2", "1/3", "2/3"])


def test_small_energy_matches_tuple_oracle():
    assert energy_by_tuples(S3, 2) == 19
    for f in (energy_brute, energy_mitm, energy_conv):
        assert f(S3, 2) == 19


def test_energy_m1_is_size():
    B = enumerate_rationals(6)
    for f in (energy_brute, energy_mitm, energy_conv):
        assert f(B, 1) == len(B)


def test_empty_and_singleton():
    assert energy_mitm([], 2) == 0
    one = RationalSet.of(["1/7"])
    for f in (energy_brute, energy_mitm, energy_conv):
        assert f(one, 3) == 1


def test_convolution_power_examples():
    assert convolution_power(S3, 0) == {Fraction(0): 1}
    c1 = convolution_power(S3, 1)
    assert c1 == {Fraction(1, 2): 1, Fraction(1, 3): 1, Fraction(2, 3): 1}
    assert convolution_power(S3, 2)[Fraction(1)] == 3
    assert dict(sumset_counter(S3, 3)) == convolution_power(S3, 3)


def test_sumset_size():
    # {2/3, 5/6, 1, 7/6, 4/3}
    assert sumset_size(S3, 2) == 5
    assert sumset_size([], 2) == 0


def test_brute_budget_and_bad_m():
    with pytest.raises(ResourceError):
        energy_brute(enumerate_rationals(10), 3, tuple_budget=10**6)
    with pytest.raises(InvalidArgument):
        energy_mitm(S3, 0)
    with pytest.raises(ResourceError):
        mfold_sum_table(enumerate_rationals(30), 4, memory_budget=10**6)


def test_diagonal_lower_formula():
    assert diagonal_lower(3, 2) == 2
    assert diagonal_lower(2, 2) == 0
    assert diagonal_lower(10, 3) == 6 * 7**3


def test_report_contains_theorem_rhs():
    B = enumerate_rationals(8)
    rep = energy(B, 2, "mitm")
    assert rep.energy == energy_conv(B, 2)
    assert rep.theorem_rhs == pytest.approx(theorem_bound_rhs(8, B.max_per_den(), 2, 1.0))
    with pytest.raises(InvalidArgument):
        energy(B, 2, "fft")


def test_split_intervals_partition():
    B = enumerate_rationals(5)
    parts = split_intervals(B, 2)
    assert [len(p) for p in parts] == [1, 3, 3, 3]
    assert sorted(x for p in parts for x in p) == list(B)
    assert ReducedRational(1, 1) in parts[-1]


def test_translate_keeps_energy():
    B = enumerate_rationals(6)
    shifted = translate(B, Fraction(3, 7))
    assert energy_mitm(shifted, 2) == energy_mitm(B, 2)


def test_energy_approx_zero_delta_is_energy():
    B = enumerate_rationals(7)
    assert energy_approx(list(B), 2, 0) == energy_mitm(B, 2)
    assert energy_approx([float(b) for b in B], 2, 0.0) == energy_mitm(B, 2)


def test_energy_approx_wrap_exact_and_float_agree():
    rng = random.Random(5)
    pts = [Fraction(rng.randint(1, 97), 97) for _ in range(12)]
    for delta in (Fraction(1, 50), Fraction(1, 7)):
        exact = energy_approx(pts, 2, delta, wrap=True)
        flt = energy_approx([float(p) for p in pts], 2, float(delta), wrap=True)
        assert exact == flt
        assert exact >= energy_approx(pts, 2, delta, wrap=False)


def test_energy_approx_large_delta_counts_everything():
    pts = [Fraction(1, 3), Fraction(1, 2)]
    assert energy_approx(pts, 1, Fraction(1, 2), wrap=True) == 4


rational_sets = st.lists(
    st.tuples(st.integers(1, 20), st.integers(1, 20)).filter(lambda t: t[0] <= t[1]),
    min_size=1, max_size=7).map(lambda xs: RationalSet.of(xs))


@settings(max_examples=60, deadline=None)
@given(rational_sets, st.sampled_from([1, 2, 3]))
def test_backends_agree(B, m):
    e = energy_mitm(B, m)
    assert e == energy_brute(B, m) == energy_conv(B, m)
    assert e >= diagonal_lower(len(B), m)
    assert e <= len(B) ** (2 * m - 1)


@settings(max_examples=25, deadline=None)
@given(rational_sets)
def test_backends_agree_with_tuple_oracle(B):
    if len(B) <= 5:
        assert energy_mitm(B, 2) == energy_by_tuples(B, 2)
