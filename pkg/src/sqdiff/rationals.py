"""Reduced fractions in (0, 1] with bounded denominators.

Elements follow the convention a/q with 1 <= a <= q and gcd(a, q) = 1, so the
value 1 is written 1/1 and 0 never appears as a set element.  Python integers
are arbitrary precision, so m-fold sums never overflow.
"""

from __future__ import annotations

import functools
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import InvalidArgument, InvalidDenominator, PreconditionError, ResourceError

DEFAULT_ENUMERATION_LIMIT = 2000


@functools.total_ordering
@dataclass(frozen=True)
class ReducedRational:
    num: int
    den: int

    def __post_init__(self):
        if self.den < 1:
            raise InvalidDenominator(f"denominator must be >= 1, got {self.den}")
        if not 1 <= self.num <= self.den:
            raise InvalidArgument(f"{self.num}/{self.den} is not in (0, 1]")
        if math.gcd(self.num, self.den) != 1:
            raise InvalidArgument(f"{self.num}/{self.den} is not reduced")

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __lt__(self, other):
        if not isinstance(other, ReducedRational):
            return NotImplemented
        return self.num * other.den < other.num * self.den

    def __float__(self):
        return self.num / self.den

    def __str__(self):
        return f"{self.num}/{self.den}"


def reduce(a: int, q: int) -> ReducedRational:
    """Return a/q in lowest terms; the result must lie in (0, 1]."""
    if q == 0:
        raise InvalidDenominator("denominator is zero")
    if q < 0:
        a, q = -a, -q
    g = math.gcd(a, q)
    return ReducedRational(a // g, q // g)


def wrap(x: Fraction | int) -> ReducedRational:
    """Representative of x mod 1 in (0, 1]; integers map to 1/1."""
    x = Fraction(x)
    r = x - math.floor(x)
    if r == 0:
        return ReducedRational(1, 1)
    return ReducedRational(r.numerator, r.denominator)


def as_fraction(x) -> Fraction:
    if isinstance(x, ReducedRational):
        return Fraction(x.num, x.den)
    return Fraction(x)


@dataclass(frozen=True)
class RationalSet:
    """A finite set of reduced rationals, stored sorted by value."""

    elements: tuple[ReducedRational, ...]
    denominator_cap: int
    per_den_cap: int | None = None
    _counts: Counter = field(default=None, init=False, repr=False, compare=False)
    _members: frozenset = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        elems = tuple(sorted(self.elements))
        if len(set(elems)) != len(elems):
            raise PreconditionError("duplicate elements in RationalSet")
        for r in elems:
            if r.den > self.denominator_cap:
                raise PreconditionError(f"{r} exceeds denominator cap {self.denominator_cap}")
        counts = Counter(r.den for r in elems)
        if self.per_den_cap is not None:
            for q, c in counts.items():
                if c > self.per_den_cap:
                    raise PreconditionError(
                        f"{c} elements with denominator {q} exceed per-denominator cap {self.per_den_cap}"
                    )
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "_counts", counts)
        object.__setattr__(self, "_members", frozenset(elems))

    @classmethod
    def of(cls, items: Iterable, denominator_cap: int | None = None,
           per_den_cap: int | None = None) -> "RationalSet":
        """Build from ReducedRationals, Fractions, (a, q) pairs or 'a/q' strings."""
        elems = []
        for it in items:
            if isinstance(it, ReducedRational):
                elems.append(it)
            elif isinstance(it, tuple):
                elems.append(reduce(*it))
            else:
                f = Fraction(it)
                elems.append(reduce(f.numerator, f.denominator))
        elems = sorted(set(elems))
        if denominator_cap is None:
            denominator_cap = max((r.den for r in elems), default=1)
        return cls(tuple(elems), denominator_cap, per_den_cap)

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[ReducedRational]:
        return iter(self.elements)

    def __contains__(self, r):
        return r in self._members

    def denominator_counts(self) -> dict[int, int]:
        return dict(sorted(self._counts.items()))

    def max_per_den(self) -> int:
        return max(self._counts.values(), default=0)

    def values(self) -> list[Fraction]:
        return [Fraction(r.num, r.den) for r in self.elements]

    def subset(self, pred) -> "RationalSet":
        return RationalSet(tuple(r for r in self.elements if pred(r)),
                           self.denominator_cap, self.per_den_cap)


def totient(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def rationals_with_denominator(q: int) -> list[ReducedRational]:
    """The set Q_{=q} in increasing order."""
    if q < 1:
        raise InvalidDenominator(f"denominator must be >= 1, got {q}")
    return [ReducedRational(a, q) for a in range(1, q + 1) if math.gcd(a, q) == 1]


def enumerate_rationals(Q: int, limit: int = DEFAULT_ENUMERATION_LIMIT) -> RationalSet:
    """All reduced a/q in (0, 1] with q <= Q, sorted by value."""
    if Q < 1:
        raise InvalidArgument(f"Q must be >= 1, got {Q}")
    if Q > limit:
        raise ResourceError(f"Q={Q} exceeds the enumeration limit {limit}")
    elems = [r for q in range(1, Q + 1) for r in rationals_with_denominator(q)]
    return RationalSet(tuple(elems), Q)


def one_per_denominator(Q: int, seed: int = 0) -> list[ReducedRational]:
    """One uniformly random reduced a/q for each q in [Q/2, Q], seeded by (seed, Q)."""
    if Q < 1:
        raise InvalidArgument(f"Q must be >= 1, got {Q}")
    rng = random.Random(seed * 1000 + Q)
    out = []
    for q in range(max(Q // 2, 1), Q + 1):
        a = rng.randrange(1, q + 1)
        while math.gcd(a, q) != 1:
            a = rng.randrange(1, q + 1)
        out.append(ReducedRational(a, q))
    return out


def rational_sum(terms: Sequence) -> Fraction:
    """Exact signed sum.

    Each term is a ReducedRational/Fraction (taken with a plus sign) or a
    pair ``(sign, r)`` with sign in {+1, -1}.
    """
    if not terms:
        raise InvalidArgument("rational_sum needs at least one term")
    num, den = 0, 1
    for t in terms:
        if isinstance(t, tuple):
            sign, r = t
            if sign not in (1, -1):
                raise InvalidArgument(f"sign must be +1 or -1, got {sign}")
        else:
            sign, r = 1, t
        f = as_fraction(r)
        a, b = f.numerator, f.denominator
        # num/den + sign*a/b over lcm(den, b)
        g = math.gcd(den, b)
        l = den // g * b
        num = num * (l // den) + sign * a * (l // b)
        den = l
    return Fraction(num, den)


def parse_rational_line(line: str) -> ReducedRational | None:
    line = line.strip()
    if not line or line.startswith("#"):
        return None
    a, sep, q = line.partition("/")
    if not sep:
        raise InvalidArgument(f"expected 'a/q', got {line!r}")
    a, q = int(a), int(q)
    r = reduce(a, q)
    if (r.num, r.den) != (a, q):
        raise InvalidArgument(f"{line!r} is not in reduced form")
    return r


def read_rational_set(path, per_den_cap: int | None = None) -> RationalSet:
    with open(path, encoding="utf-8") as fh:
        elems = [r for r in map(parse_rational_line, fh) if r is not None]
    if len(set(elems)) != len(elems):
        raise PreconditionError(f"{path}: duplicate fractions")
    return RationalSet.of(elems, per_den_cap=per_den_cap)


def write_rational_set(path, B: Iterable[ReducedRational], comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        for r in B:
            fh.write(f"{r.num}/{r.den}\n")
