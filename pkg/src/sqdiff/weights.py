"""Ternary divisor function, sub-multiplicative weights and maximal averages."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import InvalidArgument

DEFAULT_SIEVE_BOUND = 10**6
TRIAL_DIVISION_THRESHOLD = 4 * 10**6


class Tau3Sieve:
    """Smallest-prime-factor sieve with tau_3 evaluated multiplicatively.

    The table is built once up to ``bound`` and regrown (doubling) only when a
    query exceeds it; existing tables are never mutated in place.
    """

    def __init__(self, bound: int = DEFAULT_SIEVE_BOUND):
        self._spf = self._build(max(bound, 2))

    @staticmethod
    def _build(bound: int) -> np.ndarray:
        spf = np.zeros(bound + 1, dtype=np.int64)
        for p in range(2, math.isqrt(bound) + 1):
            if spf[p] == 0:
                block = spf[p * p :: p]
                block[block == 0] = p
        rest = np.nonzero(spf == 0)[0]
        spf[rest] = rest
        return spf

    @property
    def bound(self) -> int:
        return len(self._spf) - 1

    def _ensure(self, n: int) -> np.ndarray:
        spf = self._spf
        if n >= len(spf):
            spf = self._build(max(n, 2 * self.bound))
            self._spf = spf
        return spf

    def factor(self, n: int) -> dict[int, int]:
        out: dict[int, int] = {}
        if n > max(self.bound, TRIAL_DIVISION_THRESHOLD):
            # beyond the table: trial division by sieved primes up to sqrt(n)
            spf = self._ensure(math.isqrt(n) + 1)
            for p in np.flatnonzero(spf[2 : math.isqrt(n) + 1] == np.arange(2, math.isqrt(n) + 1)) + 2:
                p = int(p)
                if p * p > n:
                    break
                if n % p == 0:
                    e = 0
                    while n % p == 0:
                        n //= p
                        e += 1
                    out[p] = e
            if n > 1:
                out[n] = out.get(n, 0) + 1
            return out
        spf = self._ensure(n)
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
        return out

    def tau3(self, n: int) -> int:
        if n < 1:
            raise InvalidArgument(f"tau3 needs n >= 1, got {n}")
        result = 1
        for e in self.factor(n).values():
            result *= (e + 1) * (e + 2) // 2
        return result

    def table(self, X: int) -> np.ndarray:
        """Array t with t[n] = tau_3(n) for 1 <= n <= X (t[0] = 0)."""
        spf = self._ensure(max(X, 2))[: X + 1]
        t = np.zeros(X + 1, dtype=np.int64)
        if X >= 1:
            t[1] = 1
        # tau3(n) = tau3(n / p^e) * C(e+2, 2) with p = spf(n)
        exp = np.zeros(X + 1, dtype=np.int64)
        rest = np.zeros(X + 1, dtype=np.int64)
        for n in range(2, X + 1):
            p = spf[n]
            m = n // p
            if m % p == 0:
                exp[n] = exp[m] + 1
                rest[n] = rest[m]
            else:
                exp[n] = 1
                rest[n] = m
            e = exp[n]
            t[n] = t[rest[n]] * ((e + 1) * (e + 2) // 2)
        return t


_default_sieve: Tau3Sieve | None = None


def default_sieve() -> Tau3Sieve:
    global _default_sieve
    if _default_sieve is None:
        _default_sieve = Tau3Sieve(DEFAULT_SIEVE_BOUND)
    return _default_sieve


@functools.lru_cache(maxsize=1 << 16)
def tau3(n: int) -> int:
    """Number of ordered triples (a, b, c) with abc = n."""
    return default_sieve().tau3(n)


@dataclass(frozen=True)
class WeightFunction:
    evaluator: Callable[[int], float]
    label: str
    integer_valued: bool = False
    submultiplicative: bool = False

    def __call__(self, n: int):
        return self.evaluator(n)

    def times_tau3(self) -> "WeightFunction":
        return WeightFunction(lambda n: self.evaluator(n) * tau3(n), f"{self.label}*tau3",
                              self.integer_valued, self.submultiplicative)


def constant_one() -> WeightFunction:
    return WeightFunction(lambda n: 1, "one", integer_valued=True, submultiplicative=True)


def zero_weight() -> WeightFunction:
    return WeightFunction(lambda n: 0, "zero", integer_valued=True)


def tau3_power(k: int) -> WeightFunction:
    """n -> tau_3(n)^k; k = 0 gives the constant weight 1."""
    if k < 0:
        raise InvalidArgument("exponent must be nonnegative")
    if k == 0:
        return constant_one()
    return WeightFunction(lambda n: tau3(n) ** k, f"tau3^{k}", integer_valued=True,
                          submultiplicative=True)


def partial_sums(omega: WeightFunction, X: int) -> list:
    s, out = 0, []
    for n in range(1, X + 1):
        s += omega(n)
        out.append(s)
    return out


def maximal_average(omega: WeightFunction, X: int):
    """max over 1 <= x <= X of (1/x) sum_{n <= x} omega(n).

    Returns a Fraction for integer-valued weights (the comparison is done on
    exact numerators) and a float otherwise.
    """
    if X < 1:
        raise InvalidArgument(f"X must be >= 1, got {X}")
    sums = partial_sums(omega, X)
    if omega.integer_valued:
        best_s, best_x = sums[0], 1
        for x, s in enumerate(sums, 1):
            if s * best_x > best_s * x:
                best_s, best_x = s, x
        return Fraction(best_s, best_x)
    return max(s / x for x, s in enumerate(sums, 1))


def log_maximal_average(omega: WeightFunction, X: int) -> float:
    """max over 2 <= x <= X of (1/log x) sum_{n <= x} omega(n)/n."""
    if X < 2:
        raise InvalidArgument(f"X must be >= 2, got {X}")
    best = -math.inf
    s = c = 0.0  # Neumaier-compensated running sum
    for n in range(1, X + 1):
        t = omega(n) / n
        u = s + t
        c += (s - u) + t if abs(s) >= abs(t) else (t - u) + s
        s = u
        if n >= 2:
            best = max(best, (s + c) / math.log(n))
    return best


def rankin_ratio(omega: WeightFunction, X: int) -> float:
    """M(omega; X) / ((log X) * M_log(omega; X)), reported rather than bounded."""
    if X < 2:
        raise InvalidArgument("rankin_ratio needs X >= 2")
    return float(maximal_average(omega, X)) / (math.log(X) * log_maximal_average(omega, X))


@dataclass
class SubmultiplicativityReport:
    passed: bool
    counterexample: dict | None = None


def validate_submultiplicative(omega: WeightFunction, X: int) -> SubmultiplicativityReport:
    """Check omega(ab) <= omega(a) omega(b) for ab <= X and omega(d) <= omega(n) for d | n <= X."""
    if X < 1:
        raise InvalidArgument(f"X must be >= 1, got {X}")
    w = [None] + [omega(n) for n in range(1, X + 1)]
    for n in range(1, X + 1):
        if w[n] < 0:
            return SubmultiplicativityReport(False, {"kind": "negative", "n": n, "value": w[n]})
    for a in range(1, X + 1):
        for b in range(1, X // a + 1):
            if w[a * b] > w[a] * w[b]:
                return SubmultiplicativityReport(False, {
                    "kind": "product", "a": a, "b": b,
                    "omega(ab)": w[a * b], "omega(a)*omega(b)": w[a] * w[b]})
    for d in range(1, X + 1):
        for n in range(2 * d, X + 1, d):
            if w[d] > w[n]:
                return SubmultiplicativityReport(False, {
                    "kind": "divisor", "d": d, "n": n, "omega(d)": w[d], "omega(n)": w[n]})
    return SubmultiplicativityReport(True)
