"""Exponential sums on [N], the weighted square transform, Gauss sums and major arcs.

Conventions: e(x) = exp(2 pi i x) and f^(gamma) = sum_x f(x) e(x gamma).  The
balanced function of A in [N] is g = 1_A - alpha 1_[N] with alpha = |A|/N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InvalidArgument, PreconditionError
from .rationals import ReducedRational, as_fraction, rationals_with_denominator
from .sdf import IntegerSet, square_difference_counts

TWO_PI = 2.0 * math.pi
QUAD_RTOL = 1e-6
QUAD_MIN_NODES = 129
QUAD_MAX_NODES = 1 << 20
_CHUNK = 1 << 22

INTEGRANDS = ("g2", "W2", "gAW")


def _frac_part(gamma) -> float:
    """gamma mod 1 as a float in [0, 1), exact for rational input."""
    if isinstance(gamma, (Fraction, ReducedRational, int)):
        f = as_fraction(gamma)
        return float(f - math.floor(f))
    return float(gamma) - math.floor(float(gamma))


def _is_integer(gamma) -> bool:
    if isinstance(gamma, (Fraction, ReducedRational, int)):
        return as_fraction(gamma).denominator == 1
    return float(gamma) == math.floor(float(gamma))


def _phases(points: np.ndarray, gamma) -> np.ndarray:
    """(x * gamma) mod 1 for integer x; exact reduction when gamma is rational."""
    if isinstance(gamma, (Fraction, ReducedRational, int)):
        f = as_fraction(gamma)
        p, q = f.numerator, f.denominator
        r = [(int(x) * p) % q for x in points]
        return np.array(r, dtype=float) / q
    return np.mod(points.astype(float) * float(gamma), 1.0)


def exp_sum(A: IntegerSet, gamma) -> complex:
    """1_A^(gamma) summed in ascending element order with compensated sums."""
    if len(A) == 0:
        return 0j
    if _is_integer(gamma):
        return complex(len(A), 0.0)
    ph = TWO_PI * _phases(A.array, gamma)
    return complex(math.fsum(np.cos(ph)), math.fsum(np.sin(ph)))


def interval_exp_sum(N: int, gamma) -> complex:
    """1_[N]^(gamma) by the Dirichlet closed form."""
    if _is_integer(gamma):
        return complex(N, 0.0)
    t = _frac_part(gamma)
    # e((N+1) t / 2) sin(pi N t) / sin(pi t)
    ratio = math.sin(math.pi * N * t) / math.sin(math.pi * t)
    ang = math.pi * (N + 1) * t
    return complex(ratio * math.cos(ang), ratio * math.sin(ang))


def balanced_exp_sum(A: IntegerSet, gamma) -> complex:
    """g^(gamma); exactly 0 at integer gamma."""
    if _is_integer(gamma):
        return 0j
    return exp_sum(A, gamma) - A.alpha * interval_exp_sum(A.N, gamma)


def exp_sum_grid(A: IntegerSet, gammas: np.ndarray) -> np.ndarray:
    """1_A^ at many float frequencies (vectorized, chunked)."""
    gammas = np.asarray(gammas, dtype=float)
    out = np.zeros(len(gammas), dtype=complex)
    if len(A) == 0 or len(gammas) == 0:
        return out
    pts = A.array.astype(float)
    step = max(1, _CHUNK // len(pts))
    for i in range(0, len(gammas), step):
        g = gammas[i : i + step]
        ph = np.mod(np.outer(g, pts), 1.0)
        out[i : i + step] = np.exp(1j * TWO_PI * ph).sum(axis=1)
    return out


def interval_exp_sum_grid(N: int, gammas: np.ndarray) -> np.ndarray:
    t = np.mod(np.asarray(gammas, dtype=float), 1.0)
    out = np.full(len(t), complex(N, 0.0))
    nz = (t != 0.0)
    tt = t[nz]
    ratio = np.sin(np.pi * np.mod(N * tt, 2.0)) / np.sin(np.pi * tt)
    out[nz] = ratio * np.exp(1j * np.pi * np.mod((N + 1) * tt, 2.0))
    return out


def balanced_exp_sum_grid(A: IntegerSet, gammas: np.ndarray) -> np.ndarray:
    gammas = np.asarray(gammas, dtype=float)
    vals = exp_sum_grid(A, gammas) - A.alpha * interval_exp_sum_grid(A.N, gammas)
    vals[np.mod(gammas, 1.0) == 0.0] = 0.0
    return vals


def balanced_coefficients(A: IntegerSet) -> np.ndarray:
    """g(x) for x = 1..N as a float array (index 0 is x = 1)."""
    g = np.full(A.N, -A.alpha)
    g[A.array - 1] += 1.0
    return g


def parseval_mass(A: IntegerSet) -> tuple[float, float]:
    """(sum 1_A^2, sum g^2) computed from coefficients; the latter is alpha(1-alpha)N."""
    n, N = len(A), A.N
    g2 = Fraction(n) * (1 - Fraction(n, N)) ** 2 + Fraction(N - n) * Fraction(n, N) ** 2
    return float(n), float(g2)


# ---------------------------------------------------------------- squares

def square_weights(N: int) -> np.ndarray:
    """W(m^2) = 2m / sqrt(N) for m = 1..floor(sqrt N)."""
    if N < 1:
        raise InvalidArgument(f"N must be >= 1, got {N}")
    m = np.arange(1, math.isqrt(N) + 1, dtype=float)
    return 2.0 * m / math.sqrt(N)


def W_weight(n: int, N: int) -> float:
    r = math.isqrt(n) if n >= 1 else 0
    if n >= 1 and r * r == n and n <= N:
        return 2.0 * r / math.sqrt(N)
    return 0.0


def W_hat(gamma, N: int) -> complex:
    """sum_{m <= sqrt N} (2m/sqrt N) e(m^2 gamma)."""
    w = square_weights(N)
    m = np.arange(1, len(w) + 1, dtype=np.int64)
    ph = TWO_PI * _phases(m * m, gamma)
    return complex(math.fsum(w * np.cos(ph)), math.fsum(w * np.sin(ph)))


def W_hat_grid(gammas: np.ndarray, N: int) -> np.ndarray:
    gammas = np.asarray(gammas, dtype=float)
    w = square_weights(N)
    sq = np.arange(1, len(w) + 1, dtype=float) ** 2
    out = np.zeros(len(gammas), dtype=complex)
    step = max(1, _CHUNK // len(sq))
    for i in range(0, len(gammas), step):
        ph = np.mod(np.outer(gammas[i : i + step], sq), 1.0)
        out[i : i + step] = np.exp(1j * TWO_PI * ph) @ w
    return out


def gauss_sum(a: int, q: int) -> complex:
    """S(a; q) = sum_{n=1}^{q} e(a n^2 / q) by direct summation."""
    if q < 1:
        raise InvalidArgument(f"q must be >= 1, got {q}")
    if math.gcd(a, q) != 1:
        raise PreconditionError(f"gcd({a}, {q}) != 1")
    n = np.arange(1, q + 1, dtype=np.int64)
    ph = TWO_PI * ((a % q) * (n * n % q) % q) / q
    return complex(math.fsum(np.cos(ph)), math.fsum(np.sin(ph)))


def gauss_sums(q: int) -> dict[int, complex]:
    """S(a; q) for every 1 <= a <= q coprime to q, by direct summation."""
    if q < 1:
        raise InvalidArgument(f"q must be >= 1, got {q}")
    a = np.array([r.num for r in rationals_with_denominator(q)], dtype=np.int64)
    n = np.arange(1, q + 1, dtype=np.int64)
    res = (np.outer(a, n * n % q) % q).astype(float) / q
    vals = np.exp(1j * TWO_PI * res).sum(axis=1)
    return {int(x): complex(v) for x, v in zip(a, vals)}


# ---------------------------------------------------------------- arcs

@dataclass(frozen=True)
class MajorArc:
    """{gamma in (0,1] : ||gamma - a/q|| <= K/(qN)}."""

    center: ReducedRational
    K: float
    N: int

    def __post_init__(self):
        if self.K <= 0 or self.N < 1:
            raise InvalidArgument("arc needs K > 0 and N >= 1")

    @property
    def half_width(self) -> Fraction:
        return Fraction(self.K) / (self.center.den * self.N)

    def bounds(self) -> tuple[float, float]:
        """Interval [c - w, c + w] on the real line (may stick out of (0, 1])."""
        c = float(self.center)
        w = float(self.half_width)
        return c - w, c + w

    def contains(self, gamma) -> bool:
        d = as_fraction(gamma) - self.center.value if not isinstance(gamma, float) else None
        if d is None:
            x = (float(gamma) - float(self.center)) % 1.0
            return min(x, 1.0 - x) <= float(self.half_width)
        d -= math.floor(d)
        return min(d, 1 - d) <= self.half_width


def major_arcs(N: int, K: float, check_disjoint: bool = True) -> list[MajorArc]:
    """Arcs around every a/q with q <= K, sorted by centre.

    When 2K^2 < N the arcs are asserted pairwise disjoint with exact interval
    arithmetic (adjacent centres only, which suffices after sorting).
    """
    Q = int(math.floor(K))
    centers = sorted(r for q in range(1, Q + 1) for r in rationals_with_denominator(q))
    arcs = [MajorArc(c, K, N) for c in centers]
    if check_disjoint and 2 * Fraction(K) ** 2 < N and len(arcs) > 1:
        overlaps = arcs_overlapping(arcs)
        if overlaps:
            raise PreconditionError(f"major arcs overlap: {overlaps[0]}")
    return arcs


def arcs_overlapping(arcs: Sequence[MajorArc]) -> list[tuple[str, str]]:
    """Pairs of circularly adjacent arcs whose closed intervals meet."""
    srt = sorted(arcs, key=lambda a: a.center)
    bad = []
    for i, left in enumerate(srt):
        right = srt[(i + 1) % len(srt)]
        gap = right.center.value - left.center.value
        if gap <= 0:
            gap += 1
        if left.half_width + right.half_width >= gap:
            bad.append((str(left.center), str(right.center)))
    return bad


@dataclass
class QuadratureResult:
    value: float
    converged: bool
    nodes: int
    estimate_delta: float


def _integrand_values(A: IntegerSet, integrand: str, gammas: np.ndarray) -> np.ndarray:
    if integrand == "g2":
        return np.abs(balanced_exp_sum_grid(A, gammas)) ** 2
    if integrand == "W2":
        return np.abs(W_hat_grid(gammas, A.N)) ** 2
    if integrand == "gAW":
        g = balanced_exp_sum_grid(A, gammas)
        f = exp_sum_grid(A, gammas)
        return np.abs(g * f * W_hat_grid(gammas, A.N))
    raise InvalidArgument(f"unknown integrand {integrand!r}; choose from {INTEGRANDS}")


def integrate(A: IntegerSet, lo: float, hi: float, integrand: str = "g2",
              rtol: float = QUAD_RTOL, max_nodes: int = QUAD_MAX_NODES) -> QuadratureResult:
    """Composite Simpson over [lo, hi], doubling the node count until two estimates agree."""
    if integrand not in INTEGRANDS:
        raise InvalidArgument(f"unknown integrand {integrand!r}; choose from {INTEGRANDS}")
    if hi <= lo or (integrand != "W2" and len(A) == 0):
        return QuadratureResult(0.0, True, 0, 0.0)
    # bandwidth of the integrand is about 2N; start at ~4 nodes per oscillation
    n = max(QUAD_MIN_NODES, int(8 * A.N * (hi - lo)) + 1)
    n += (n + 1) % 2
    xs = np.linspace(lo, hi, n)
    ys = _integrand_values(A, integrand, xs)
    prev = _simpson(ys, hi - lo)
    while True:
        n2 = 2 * n - 1
        if n2 > max_nodes:
            return QuadratureResult(prev, False, n, math.nan)
        mids = lo + (np.arange(n - 1) + 0.5) * (hi - lo) / (n - 1)
        new = np.empty(n2)
        new[0::2] = ys
        new[1::2] = _integrand_values(A, integrand, mids)
        ys, n = new, n2
        cur = _simpson(ys, hi - lo)
        delta = abs(cur - prev)
        if delta <= rtol * abs(cur) or (cur == 0.0 and prev == 0.0):
            return QuadratureResult(cur, True, n, delta)
        prev = cur


def _simpson(ys: np.ndarray, length: float) -> float:
    h = length / (len(ys) - 1)
    return float(h / 3.0 * (ys[0] + ys[-1] + 4.0 * ys[1:-1:2].sum() + 2.0 * ys[2:-1:2].sum()))


def arc_integral(A: IntegerSet, arc: MajorArc, integrand: str = "g2",
                 rtol: float = QUAD_RTOL) -> QuadratureResult:
    """Quadrature of the integrand over the arc; the integrand is 1-periodic so no clipping is needed."""
    lo, hi = arc.bounds()
    if hi - lo >= 1.0:
        lo, hi = 0.0, 1.0
    return integrate(A, lo, hi, integrand, rtol)


def full_circle_integral(A: IntegerSet, integrand: str = "g2",
                         rtol: float = QUAD_RTOL) -> QuadratureResult:
    return integrate(A, 0.0, 1.0, integrand, rtol)


# ---------------------------------------------------------------- closed-form arc masses

def autocorrelation(A: IntegerSet) -> np.ndarray:
    """r(h) = sum_x g(x) g(x+h) for h = 0..N-1, via FFT."""
    g = balanced_coefficients(A)
    size = 1 << (2 * A.N - 1).bit_length()
    f = np.fft.rfft(g, size)
    r = np.fft.irfft(f * np.conj(f), size)[: A.N]
    # exact value at h = 0
    r[0] = parseval_mass(A)[1]
    return r


class ArcMassCalculator:
    """Closed-form integrals of |g^|^2 over major arcs.

    |g^(gamma)|^2 = sum_h r(h) e(h gamma), so the integral over [c - w, c + w] is
    2w r(0) + 2 sum_{h >= 1} r(h) cos(2 pi h c) sin(2 pi h w) / (pi h).
    For a fixed q the cosines depend on h mod q only.
    """

    def __init__(self, A: IntegerSet):
        self.A = A
        self.r = autocorrelation(A)
        self.h = np.arange(len(self.r), dtype=np.int64)

    def interval(self, c: float, w: float) -> float:
        h = self.h[1:]
        terms = self.r[1:] * np.cos(TWO_PI * np.mod(h * c, 1.0)) * np.sin(TWO_PI * h * w) / (math.pi * h)
        return float(2 * w * self.r[0] + 2 * math.fsum(terms))

    def masses_for_denominator(self, q: int, K: float) -> dict[int, float]:
        """{a: integral of |g^|^2 over M(a/q; N, K)} for every a coprime to q."""
        N = self.A.N
        w = K / (q * N)
        if 2 * w >= 1.0 / q:
            raise PreconditionError("arcs with the same denominator overlap (need 2K < N)")
        h = self.h[1:]
        s = self.r[1:] * np.sin(TWO_PI * np.mod(h * w, 1.0)) / (math.pi * h)
        buckets = np.bincount(h % q, weights=s, minlength=q)
        a = np.array([r.num for r in rationals_with_denominator(q)], dtype=np.int64)
        j = np.arange(q, dtype=np.int64)
        cos = np.cos(TWO_PI * (np.outer(a, j) % q) / q)
        vals = 2 * w * self.r[0] + 2 * (cos @ buckets)
        return {int(x): float(v) for x, v in zip(a, vals)}

    def arc_mass(self, arc: MajorArc) -> float:
        return self.interval(float(arc.center), float(arc.half_width))


# ---------------------------------------------------------------- orthogonality and bounds

def correlation_count(A: IntegerSet) -> float:
    """sum_{a,b in A} sum_{n <= sqrt N} W(n^2) 1[b - a = n^2], counted directly."""
    counts = square_difference_counts(A)
    total = sum(n * c for n, c in counts.items())
    if total == 0:
        return 0.0
    return 2.0 * total / math.sqrt(A.N)


def square_weight_arc_ratio(a: int, q: int, beta: float, N: int) -> float:
    """|W^(a/q + beta)| / (sqrt(N/q) + sqrt(q log q)(1 + |beta| N)); q = 1 leaves sqrt N."""
    if q < 1 or math.gcd(a, q) != 1:
        raise PreconditionError(f"need gcd(a, q) = 1 and q >= 1, got a={a}, q={q}")
    gamma = Fraction(a, q) + Fraction(beta)
    bracket = math.sqrt(N / q) + math.sqrt(q * math.log(q)) * (1 + abs(beta) * N)
    return abs(W_hat(gamma, N)) / bracket


def decomposition_identity_ratio(a: int, q: int, beta: float, N: int) -> float:
    """|W^(a/q + beta) - S(a;q)/q W^(beta)| / (sqrt(q log q)(1 + |beta| N)), q >= 2."""
    if q < 2 or math.gcd(a, q) != 1:
        raise PreconditionError(f"need gcd(a, q) = 1 and q >= 2, got a={a}, q={q}")
    gamma = Fraction(a, q) + Fraction(beta)
    err = W_hat(gamma, N) - gauss_sum(a, q) / q * W_hat(Fraction(beta), N)
    return abs(err) / (math.sqrt(q * math.log(q)) * (1 + abs(beta) * N))


def small_beta_ratio(beta: float, N: int) -> float:
    """|W^(beta)| / min(sqrt N, 1/(beta sqrt N)) for 0 < beta <= N^(-7/8); reported only."""
    if not 0 < beta <= N ** (-7 / 8):
        raise InvalidArgument("need 0 < beta <= N^(-7/8)")
    return abs(W_hat(beta, N)) / min(math.sqrt(N), 1.0 / (beta * math.sqrt(N)))


def arc_W2_ratio(q: int, N: int, K: float, a: int = 1) -> float:
    """q times the integral of |W^|^2 over M(a/q; N, K)."""
    arc = MajorArc(ReducedRational(a, q), K, N)
    lo, hi = arc.bounds()
    res = integrate(IntegerSet(N, ()), lo, hi, "W2")
    return q * res.value
