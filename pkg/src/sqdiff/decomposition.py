"""Popular/unpopular edge splitting for solutions of a/k - b/l = c/q.

The bipartite graph A x B is coloured by (d, f) with d = gcd(k, l) and
f = gcd((a*l - b*k)/d, d).  A colour is popular at a/k when at least
T / tau_3(k) neighbours carry it; popular edges form E1, the rest E2.  The
functions here build that split and check every constant-1 inequality the
counting argument rests on, exactly where the quantities are rational.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .energy import convolution_power
from .errors import InvalidArgument, PreconditionError, ResourceError
from .rationals import RationalSet, ReducedRational, as_fraction
from .weights import WeightFunction, constant_one, log_maximal_average, tau3

# relative slack for comparisons that involve logarithms (floating point)
FLOAT_RTOL = 1e-12

Edge = tuple[ReducedRational, ReducedRational]


@dataclass(frozen=True, order=True)
class EdgeColor:
    d: int
    f: int

    def __post_init__(self):
        if self.d < 1 or self.f < 1 or self.d % self.f:
            raise InvalidArgument(f"invalid colour ({self.d}, {self.f}): need f | d")


def _color(a: int, k: int, b: int, l: int, sign: int) -> tuple[int, int]:
    d = math.gcd(k, l)
    # math.gcd(0, d) == d, the convention needed when a*l = b*k
    return d, math.gcd((a * l + sign * b * k) // d, d)


def color_edge(x: ReducedRational, y: ReducedRational, sign: int = -1) -> EdgeColor:
    """Colour of the edge (a/k, b/l); ``sign=+1`` selects the a*l + b*k variant."""
    if sign not in (1, -1):
        raise InvalidArgument("sign must be +1 or -1")
    return EdgeColor(*_color(x.num, x.den, y.num, y.den, sign))


@dataclass
class EdgeDecomposition:
    E1: list[Edge]
    E2: list[Edge]
    T: float | Fraction
    colors: dict[Edge, EdgeColor]
    popular: dict[ReducedRational, frozenset[EdgeColor]]
    sign: int = -1

    def degree_E2(self) -> dict[ReducedRational, int]:
        deg: dict[ReducedRational, int] = defaultdict(int)
        for x, _ in self.E2:
            deg[x] += 1
        return dict(deg)


@dataclass
class LinearSolutionCount:
    """Weighted counts F_i(x) = sum of omega(k) over edges of E_i with a/k - b/l = x."""

    F1: dict[Fraction, float] = field(default_factory=dict)
    F2: dict[Fraction, float] = field(default_factory=dict)

    def total(self, x: Fraction):
        return self.F1.get(x, 0) + self.F2.get(x, 0)


def _popular(count: int, k: int, T) -> bool:
    # count >= T / tau3(k), compared without division
    return count * tau3(k) >= T


def split_edges(A: Iterable[ReducedRational], B: Iterable[ReducedRational], T,
                omega: WeightFunction | None = None, sign: int = -1) -> EdgeDecomposition:
    """Split A x B into popular edges E1 and the remainder E2.

    ``omega`` plays no role in the split itself; it is accepted so that the
    signature mirrors :func:`solution_counts` callers.
    """
    if not T > 0:
        raise InvalidArgument("T must be positive")
    A, B = list(A), list(B)
    E1: list[Edge] = []
    E2: list[Edge] = []
    colors: dict[Edge, EdgeColor] = {}
    popular: dict[ReducedRational, frozenset[EdgeColor]] = {}
    for x in A:
        a, k = x.num, x.den
        by_color: dict[tuple[int, int], list[ReducedRational]] = defaultdict(list)
        for y in B:
            by_color[_color(a, k, y.num, y.den, sign)].append(y)
        hot = set()
        for c, ys in by_color.items():
            col = EdgeColor(*c)
            is_pop = _popular(len(ys), k, T)
            if is_pop:
                hot.add(col)
            for y in ys:
                colors[(x, y)] = col
                (E1 if is_pop else E2).append((x, y))
        popular[x] = frozenset(hot)
    return EdgeDecomposition(E1, E2, T, colors, popular, sign)


def _difference(x: ReducedRational, y: ReducedRational) -> Fraction:
    return Fraction(x.num * y.den - y.num * x.den, x.den * y.den)


def solution_counts(dec: EdgeDecomposition, omega: WeightFunction) -> LinearSolutionCount:
    F1: dict[Fraction, float] = defaultdict(int)
    F2: dict[Fraction, float] = defaultdict(int)
    for edges, F in ((dec.E1, F1), (dec.E2, F2)):
        for x, y in edges:
            F[_difference(x, y)] += omega(x.den)
    return LinearSolutionCount(dict(F1), dict(F2))


def r_counts(dec: EdgeDecomposition) -> dict[tuple[int, int, int], int]:
    """R_{d,f,k}: distinct residues a mod f among a/k where (d, f) is popular."""
    residues: dict[tuple[int, int, int], set[int]] = defaultdict(set)
    for x, cols in dec.popular.items():
        for c in cols:
            residues[(c.d, c.f, x.den)].add(x.num % c.f)
    return {key: len(v) for key, v in residues.items()}


def count_R(A, B, d: int, f: int, k: int, T, omega: WeightFunction | None = None,
            sign: int = -1) -> int:
    if d % f or k % d:
        raise PreconditionError("count_R needs f | d and d | k")
    A = [x for x in A if x.den == k]
    dec = split_edges(A, B, T, omega, sign)
    return r_counts(dec).get((d, f, k), 0)


def _bn(B: RationalSet | list, L: int | None, n: int | None) -> tuple[int, int]:
    B = list(B)
    dens = defaultdict(int)
    for y in B:
        dens[y.den] += 1
    if L is None:
        L = max(dens, default=1)
    if n is None:
        n = max(dens.values(), default=1)
    for q, c in dens.items():
        if q > L:
            raise PreconditionError(f"B has denominator {q} > L = {L}")
        if c > n:
            raise PreconditionError(f"B has {c} elements with denominator {q} > n = {n}")
    return L, n


def _triples(q: int):
    """Ordered (k', l', e) with k' l' e = q."""
    for kp in range(1, q + 1):
        if q % kp:
            continue
        r = q // kp
        for lp in range(1, r + 1):
            if r % lp == 0:
                yield kp, lp, r // lp


def optimal_T(A, B, C, omega: WeightFunction, L: int, n: int) -> float:
    """T balancing the popular and unpopular contributions."""
    if L < 2:
        raise InvalidArgument("optimal_T needs L >= 2")
    sA = sum(omega(x.den) for x in A)
    if sA <= 0:
        raise InvalidArgument("sum of omega(k) over A must be positive")
    sC = sum(omega(as_fraction(c).denominator) * tau3(as_fraction(c).denominator) ** 2 for c in C)
    mlog = log_maximal_average(omega.times_tau3(), L)
    return math.sqrt(L * n * math.log(L) * mlog * float(sC) / float(sA))


@dataclass
class Check:
    passed: bool
    lhs: float | int | None = None
    rhs: float | int | None = None
    witness: dict | None = None
    instances: int = 0

    def to_dict(self) -> dict:
        return {"passed": self.passed, "lhs": self.lhs, "rhs": self.rhs,
                "witness": self.witness, "instances": self.instances}


@dataclass
class DecompositionReport:
    T: float
    L: int
    n: int
    sizes: dict
    checks: dict[str, Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def to_dict(self) -> dict:
        return {"passed": self.passed, "T": float(self.T), "L": self.L, "n": self.n,
                "sizes": self.sizes,
                "checks": {k: v.to_dict() for k, v in self.checks.items()}}


def _exact(T) -> Fraction:
    return Fraction(T)


def _fle(lhs, rhs) -> bool:
    return lhs <= rhs * (1 + FLOAT_RTOL) + FLOAT_RTOL


def verify_decomposition_bounds(A, B, C, T, omega: WeightFunction | None = None,
                                L: int | None = None, n: int | None = None,
                                sign: int = -1) -> DecompositionReport:
    """Check the exact inequalities behind the edge-splitting count.

    Checks (each with constant 1):
      partition    E1 and E2 partition A x B and F1 + F2 is the full count
      e2_degree    every a/k has fewer than T edges in E2
      graphbound2  sum_C F2 <= T * sum_A omega(k)
      est2         R_{d,f,k} <= L n tau3(k) / (d T)
      bound1       F1(c/q) <= sum_{k'l'e=q} sum_{f<=L} omega(k'ef) e R_{ef,f,k'ef}
      F1_closed    F1(c/q) <= (L n log L / T) M_log(omega tau3; L) omega(q) tau3(q)^2
      injectivity  fixed k, d, f, b/l: popular a/k of colour (d, f) agree mod f
    """
    omega = omega or constant_one()
    A, B = list(A), list(B)
    C = [as_fraction(c) for c in C]
    L, n = _bn(B, L, n)
    Tq = _exact(T)
    dec = split_edges(A, B, T, omega, sign)
    F = solution_counts(dec, omega)
    R = r_counts(dec)
    checks: dict[str, Check] = {}

    # partition
    full: dict[Fraction, float] = defaultdict(int)
    for x in A:
        for y in B:
            full[_difference(x, y)] += omega(x.den)
    e1, e2 = set(dec.E1), set(dec.E2)
    part_ok = (len(e1) + len(e2) == len(A) * len(B) and not (e1 & e2)
               and all(F.total(x) == v for x, v in full.items()))
    checks["partition"] = Check(part_ok, len(e1) + len(e2), len(A) * len(B), instances=1)

    deg = dec.degree_E2()
    bad = next(((x, d) for x, d in deg.items() if not d < Tq), None)
    checks["e2_degree"] = Check(bad is None, max(deg.values(), default=0), float(T),
                                None if bad is None else {"vertex": str(bad[0]), "degree": bad[1]},
                                instances=len(A))

    lhs = sum(F.F2.get(c, 0) for c in C)
    rhs = Tq * sum(omega(x.den) for x in A)
    checks["graphbound2"] = Check(lhs <= rhs, lhs, float(rhs), instances=1)

    worst = None
    ok = True
    for (d, f, k), r in R.items():
        if not r * d * Tq <= L * n * tau3(k):
            ok = False
            worst = worst or {"d": d, "f": f, "k": k, "R": r, "bound": float(L * n * tau3(k) / (d * Tq))}
    checks["est2"] = Check(ok, None, None, worst, instances=len(R))

    ok1 = ok3 = True
    w1 = w3 = None
    closed = None
    if L >= 2:
        mlog = log_maximal_average(omega.times_tau3(), L)
        closed = L * n * math.log(L) / float(T) * mlog
    for c in C:
        q = c.denominator
        f1 = F.F1.get(c, 0)
        b1 = 0
        for kp, lp, e in _triples(q):
            for f in range(1, L + 1):
                r = R.get((e * f, f, kp * e * f))
                if r:
                    b1 += omega(kp * e * f) * e * r
        if not f1 <= b1:
            ok1 = False
            w1 = w1 or {"c/q": str(c), "F1": f1, "bound": b1}
        if closed is not None:
            b3 = closed * omega(q) * tau3(q) ** 2
            if not _fle(f1, b3):
                ok3 = False
                w3 = w3 or {"c/q": str(c), "F1": f1, "bound": b3}
    checks["bound1"] = Check(ok1, None, None, w1, instances=len(C))
    checks["F1_closed"] = Check(ok3, None, None, w3, instances=len(C) if closed is not None else 0)

    seen: dict[tuple[int, EdgeColor, ReducedRational], int] = {}
    inj_ok, w4, count = True, None, 0
    for (x, y), col in dec.colors.items():
        if col not in dec.popular[x]:
            continue
        key = (x.den, col, y)
        res = x.num % col.f
        count += 1
        if seen.setdefault(key, res) != res:
            inj_ok = False
            w4 = w4 or {"k": x.den, "d": col.d, "f": col.f, "b": str(y)}
    checks["injectivity"] = Check(inj_ok, None, None, w4, instances=count)

    sizes = {"A": len(A), "B": len(B), "C": len(C), "E1": len(dec.E1), "E2": len(dec.E2)}
    return DecompositionReport(T, L, n, sizes, checks)


def optimal_T_total_check(A, B, C, omega: WeightFunction, L: int, n: int, sign: int = -1) -> Check:
    """At the optimal T, sum_C (F1 + F2) <= 2 sqrt(X Y)."""
    T = optimal_T(A, B, C, omega, L, n)
    dec = split_edges(A, B, T, omega, sign)
    F = solution_counts(dec, omega)
    C = [as_fraction(c) for c in C]
    total = sum(F.total(c) for c in C)
    X = L * n * math.log(L) * log_maximal_average(omega.times_tau3(), L) * float(
        sum(omega(c.denominator) * tau3(c.denominator) ** 2 for c in C))
    Y = float(sum(omega(x.den) for x in A))
    bound = 2 * math.sqrt(X * Y)
    return Check(_fle(total, bound), total, bound, instances=1)


def dyadic_levels(f: dict) -> dict[int, list]:
    """Group the support of a nonnegative integer function by floor(log2 f(x))."""
    levels: dict[int, list] = defaultdict(list)
    for x, v in f.items():
        if v < 0 or int(v) != v:
            raise InvalidArgument(f"value {v!r} at {x!r} is not a nonnegative integer")
        if v:
            levels[int(v).bit_length() - 1].append(x)
    return {j: levels[j] for j in sorted(levels)}


def induction_statistic(B, j: int, t: int, budget: int = 10**7) -> int:
    """sum over x of tau3(den x)^(2t) * (1_B^(*j)(x))^2, exactly."""
    if j < 0 or t < 0:
        raise InvalidArgument("j and t must be nonnegative")
    size = len(list(B))
    if size**j > budget:
        raise ResourceError(f"|B|^j = {size}^{j} exceeds the budget {budget}")
    conv = convolution_power(B, j)
    return sum(tau3(x.denominator) ** (2 * t) * c * c for x, c in conv.items())


def induction_ratio(B: RationalSet, j: int, t: int) -> float:
    """statistic(j, t) / (Q n statistic(j-1, t+1)); report-only."""
    if j < 1:
        raise InvalidArgument("j must be >= 1")
    Q = B.denominator_cap
    n = max(1, B.max_per_den())
    return induction_statistic(B, j, t) / (Q * n * induction_statistic(B, j - 1, t + 1))
