import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sqdiff.errors import InvalidArgument, InvalidDenominator, PreconditionError, ResourceError
from sqdiff.rationals import (RationalSet, ReducedRational, enumerate_rationals, rational_sum,
                              rationals_with_denominator, read_rational_set, reduce, totient,
                              wrap, write_rational_set)


def test_reduce_examples():
    assert reduce(2, 4) == ReducedRational(1, 2)
    assert reduce(3, 3) == ReducedRational(1, 1)
    with pytest.raises(InvalidDenominator):
        reduce(1, 0)


def test_reduced_rational_rejects_unreduced_and_out_of_range():
    with pytest.raises(InvalidArgument):
        ReducedRational(2, 4)
    with pytest.raises(InvalidArgument):
        ReducedRational(0, 3)
    with pytest.raises(InvalidArgument):
        ReducedRational(4, 3)


def test_wrap_maps_integers_to_one():
    assert wrap(0) == ReducedRational(1, 1)
    assert wrap(Fraction(7, 3)) == ReducedRational(1, 3)
    assert wrap(Fraction(-1, 4)) == ReducedRational(3, 4)


def test_ordering_is_by_value():
    xs = [ReducedRational(2, 3), ReducedRational(1, 2), ReducedRational(1, 1), ReducedRational(1, 3)]
    assert [str(x) for x in sorted(xs)] == ["1/3", "1/2", "2/3", "1/1"]


def test_enumerate_small():
    Q3 = enumerate_rationals(3)
    assert [str(r) for r in Q3] == ["1/3", "1/2", "2/3", "1/1"]
    assert len(enumerate_rationals(1)) == 1


@pytest.mark.parametrize("Q", [1, 2, 5, 10, 30, 100])
def test_enumeration_size_is_totient_sum(Q):
    assert len(enumerate_rationals(Q)) == sum(totient(q) for q in range(1, Q + 1))


def test_enumeration_limit():
    with pytest.raises(ResourceError):
        enumerate_rationals(3000)


def test_rational_sum_examples():
    assert rational_sum([ReducedRational(1, 2), ReducedRational(1, 3)]) == Fraction(5, 6)
    assert rational_sum([(1, ReducedRational(1, 2)), (-1, ReducedRational(1, 2))]) == 0
    assert rational_sum([ReducedRational(1, 1), ReducedRational(1, 1)]) == 2
    with pytest.raises(InvalidArgument):
        rational_sum([])


@given(st.lists(st.tuples(st.sampled_from([1, -1]),
                          st.fractions(min_value=-5, max_value=5, max_denominator=200)),
                min_size=1, max_size=12))
def test_rational_sum_matches_fraction_arithmetic(terms):
    assert rational_sum(terms) == sum((s * f for s, f in terms), Fraction(0))


def test_rationalset_caps_and_counts():
    B = RationalSet.of(["1/2", "1/3", "2/3"], denominator_cap=3)
    assert B.denominator_counts() == {2: 1, 3: 2}
    assert B.max_per_den() == 2
    assert ReducedRational(1, 3) in B and ReducedRational(1, 4) not in B
    with pytest.raises(PreconditionError):
        RationalSet.of(["1/5"], denominator_cap=4)
    with pytest.raises(PreconditionError):
        RationalSet.of(["1/3", "2/3"], per_den_cap=1)


def test_rationals_with_denominator():
    assert [r.num for r in rationals_with_denominator(10)] == [1, 3, 7, 9]
    assert len(rationals_with_denominator(97)) == 96


def test_file_roundtrip(tmp_path):
    B = enumerate_rationals(7)
    p = tmp_path / "b.txt"
    write_rational_set(p, B, comment="Q<=7")
    assert p.read_bytes().count(b"\r") == 0
    assert read_rational_set(p) == B


def test_file_rejects_unreduced(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("1/2\n2/4\n")
    with pytest.raises(InvalidArgument):
        read_rational_set(p)


def test_file_rejects_duplicates(tmp_path):
    p = tmp_path / "dup.txt"
    p.write_text("# header\n1/2\n1/2\n")
    with pytest.raises(PreconditionError):
        read_rational_set(p)


@given(st.integers(1, 400), st.integers(1, 400))
def test_reduce_is_canonical(a, q):
    if a > q:
        a, q = q, a
    r = reduce(a, q)
    assert math.gcd(r.num, r.den) == 1
    assert Fraction(r.num, r.den) == Fraction(a, q)
