"""Additive energy E_2m of finite sets of rationals.

Three independent exact backends compute the same integer

    E_2m(B) = #{(b_1..b_2m) in B^2m : b_1+...+b_m = b_{m+1}+...+b_2m}

``brute`` tests every 2m-tuple, ``mitm`` builds the multiset of m-fold sums
from two half tables, and ``conv`` iterates exact convolutions keyed by
Fractions.  Inputs may be RationalSets or any iterable of rationals, which
allows shifted copies B + gamma outside (0, 1].
"""

from __future__ import annotations

import bisect
import itertools
import math
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import InvalidArgument, ResourceError
from .rationals import RationalSet, ReducedRational, as_fraction

DEFAULT_TUPLE_BUDGET = 10**8
DEFAULT_MEMORY_BUDGET = 2 * 1024**3
# rough footprint of one Counter entry keyed by a Python int
_BYTES_PER_ENTRY = 160
_PAIR_CHUNK = 4_000_000
APPROX_FLOAT_TOL = 1e-12

BACKENDS = ("brute", "mitm", "conv")


def _fractions(B) -> list[Fraction]:
    return [as_fraction(b) for b in B]


def _scaled(vals: list[Fraction]) -> tuple[list[int], int]:
    """Integers v * L with L the lcm of the denominators."""
    L = 1
    for v in vals:
        L = L * v.denominator // math.gcd(L, v.denominator)
    return [v.numerator * (L // v.denominator) for v in vals], L


def _mfold_array(ints: list[int], m: int) -> np.ndarray:
    """All ordered m-fold sums (length n^m), int64 when safe else object."""
    bound = m * max((abs(x) for x in ints), default=0)
    dtype = np.int64 if bound < 2**62 else object
    arr = np.array(ints, dtype=dtype)
    out = arr
    for _ in range(m - 1):
        out = (out[:, None] + arr[None, :]).ravel()
    return out


def energy_brute(B, m: int, tuple_budget: int = DEFAULT_TUPLE_BUDGET) -> int:
    """Count ordered 2m-tuples with equal left and right m-fold sums by testing each."""
    if m < 1:
        raise InvalidArgument(f"m must be >= 1, got {m}")
    vals = _fractions(B)
    n = len(vals)
    if n == 0:
        return 0
    if n ** (2 * m) > tuple_budget:
        raise ResourceError(
            f"|B|^2m = {n}^{2 * m} exceeds the tuple budget {tuple_budget}; use the mitm backend")
    ints, _ = _scaled(vals)
    sums = _mfold_array(ints, m)
    chunk = max(1, _PAIR_CHUNK // len(sums))
    total = 0
    for i in range(0, len(sums), chunk):
        total += int(np.count_nonzero(sums[i : i + chunk, None] == sums[None, :]))
    return total


def _half_table(ints: list[int], h: int) -> Counter:
    if h == 0:
        return Counter({0: 1})
    return Counter(sum(t) for t in itertools.product(ints, repeat=h))


def mfold_sum_table(B, m: int, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> tuple[Counter, int]:
    """Multiset of m-fold ordered sums, keyed by sum * L; returns (table, L)."""
    vals = _fractions(B)
    n = len(vals)
    est = n**m * _BYTES_PER_ENTRY
    if est > memory_budget:
        raise ResourceError(f"m-fold sum table (~{est} bytes) exceeds memory budget {memory_budget}")
    ints, L = _scaled(vals)
    left = _half_table(ints, (m + 1) // 2)
    right = _half_table(ints, m // 2)
    table: Counter = Counter()
    for s1, c1 in left.items():
        for s2, c2 in right.items():
            table[s1 + s2] += c1 * c2
    return table, L


def energy_mitm(B, m: int, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> int:
    if m < 1:
        raise InvalidArgument(f"m must be >= 1, got {m}")
    if len(_fractions(B)) == 0:
        return 0
    table, _ = mfold_sum_table(B, m, memory_budget)
    return sum(c * c for c in table.values())


def convolution_power(B, j: int) -> dict[Fraction, int]:
    """The j-fold convolution 1_B^(*j) as {x: multiplicity} over its support."""
    if j < 0:
        raise InvalidArgument(f"j must be >= 0, got {j}")
    vals = _fractions(B)
    cur: dict[Fraction, int] = {Fraction(0): 1}
    for _ in range(j):
        nxt: dict[Fraction, int] = defaultdict(int)
        for x, c in cur.items():
            for b in vals:
                nxt[x + b] += c
        cur = dict(nxt)
    return cur


def energy_conv(B, m: int) -> int:
    if m < 1:
        raise InvalidArgument(f"m must be >= 1, got {m}")
    if len(_fractions(B)) == 0:
        return 0
    return sum(c * c for c in convolution_power(B, m).values())


def sumset_size(B, m: int) -> int:
    """|mB|, the support size of the m-fold convolution."""
    return len(convolution_power(B, m)) if len(_fractions(B)) else 0


def diagonal_lower(size: int, m: int) -> int:
    """m! (|B| - m)^m, the count coming from permuted diagonal tuples."""
    if size <= m:
        return 0
    return math.factorial(m) * (size - m) ** m


def theorem_bound_rhs(Q: int, n: int, m: int, C: float) -> float:
    """(log(mQ))^(C^m) (Qn)^m."""
    if Q < 2 or m < 2 or n < 1 or C <= 0:
        raise InvalidArgument("need Q, m >= 2, n >= 1 and C > 0")
    return math.log(m * Q) ** (C**m) * float(Q * n) ** m


@dataclass
class EnergyReport:
    m: int
    energy: int
    diagonal_lower: int
    theorem_rhs: float | None
    backend: str
    size: int

    def to_dict(self) -> dict:
        return asdict(self)


def energy(B, m: int, backend: str = "mitm", C: float = 1.0,
           tuple_budget: int = DEFAULT_TUPLE_BUDGET,
           memory_budget: int = DEFAULT_MEMORY_BUDGET) -> EnergyReport:
    if backend == "brute":
        e = energy_brute(B, m, tuple_budget)
    elif backend == "mitm":
        e = energy_mitm(B, m, memory_budget)
    elif backend == "conv":
        e = energy_conv(B, m)
    else:
        raise InvalidArgument(f"unknown backend {backend!r}; choose from {BACKENDS}")
    size = len(_fractions(B))
    rhs = None
    if isinstance(B, RationalSet) and size and m >= 2 and B.denominator_cap >= 2:
        rhs = theorem_bound_rhs(B.denominator_cap, max(1, B.max_per_den()), m, C)
    return EnergyReport(m, e, diagonal_lower(size, m), rhs, backend, size)


def split_intervals(B: RationalSet, m: int) -> list[RationalSet]:
    """B_i = B cap [(i-1)/2m, i/2m) for i = 1..2m, the last interval closed at 1."""
    if m < 1:
        raise InvalidArgument(f"m must be >= 1, got {m}")
    k = 2 * m
    classes: list[list[ReducedRational]] = [[] for _ in range(k)]
    for b in B:
        i = min(b.num * k // b.den, k - 1)
        classes[i].append(b)
    return [RationalSet(tuple(c), B.denominator_cap, B.per_den_cap) for c in classes]


def translate(B, gamma) -> list[Fraction]:
    g = as_fraction(gamma)
    return [as_fraction(b) + g for b in B]


def _is_exact(x) -> bool:
    return isinstance(x, (Fraction, ReducedRational, int)) and not isinstance(x, bool)


def energy_approx(Gamma: Iterable, m: int, delta, wrap: bool = False,
                  tuple_budget: int = DEFAULT_TUPLE_BUDGET) -> int:
    """#{2m-tuples of Gamma : |b_1+..+b_m - b_{m+1}-..-b_2m| <= delta}.

    The distance is the literal absolute value on the real line; ``wrap=True``
    measures distance to the nearest integer instead.  Exact arithmetic is
    used when every frequency and delta are rational, otherwise float64 with
    a tolerance of 1e-12.
    """
    if m < 1:
        raise InvalidArgument(f"m must be >= 1, got {m}")
    Gamma = list(Gamma)
    if delta < 0:
        raise InvalidArgument("delta must be >= 0")
    n = len(Gamma)
    if n == 0:
        return 0
    if n**m > tuple_budget:
        raise ResourceError(f"{n}^{m} m-fold sums exceed the tuple budget")
    if all(_is_exact(g) for g in Gamma) and _is_exact(delta):
        return _approx_exact(_fractions(Gamma), m, Fraction(as_fraction(delta)), wrap)
    return _approx_float(np.array([float(g) for g in Gamma]), m, float(delta), wrap)


def _approx_exact(vals: list[Fraction], m: int, delta: Fraction, wrap: bool) -> int:
    table = Counter(sum(t, Fraction(0)) for t in itertools.product(vals, repeat=m))
    if wrap:
        folded: Counter = Counter()
        for s, c in table.items():
            folded[s - math.floor(s)] += c
        table = folded
    keys = sorted(table)
    prefix = [0]
    for k in keys:
        prefix.append(prefix[-1] + table[k])

    def count(lo, hi):
        return prefix[bisect.bisect_right(keys, hi)] - prefix[bisect.bisect_left(keys, lo)]

    total_mass = prefix[-1]
    total = 0
    for s, c in table.items():
        if wrap and delta >= Fraction(1, 2):
            total += c * total_mass
        elif wrap:
            inner = count(s - delta, s + delta)
            # pieces of the window that wrap around [0, 1)
            if s + delta >= 1:
                inner += count(Fraction(0), s + delta - 1)
            if s - delta < 0:
                inner += count(s - delta + 1, Fraction(1))
            total += c * inner
        else:
            total += c * count(s - delta, s + delta)
    return total


def _approx_float(vals: np.ndarray, m: int, delta: float, wrap: bool) -> int:
    sums = vals
    for _ in range(m - 1):
        sums = (sums[:, None] + vals[None, :]).ravel()
    if wrap:
        sums = sums - np.floor(sums)
    sums = np.sort(sums)
    d = delta + APPROX_FLOAT_TOL
    if wrap and delta >= 0.5:
        return len(sums) ** 2
    lo = np.searchsorted(sums, sums - d, side="left")
    hi = np.searchsorted(sums, sums + d, side="right")
    total = int((hi - lo).sum())
    if wrap:
        over = sums + d >= 1.0
        total += int(np.searchsorted(sums, sums[over] + d - 1.0, side="right").sum())
        under = sums - d < 0.0
        total += int((len(sums) - np.searchsorted(sums, sums[under] - d + 1.0, side="left")).sum())
    return total
