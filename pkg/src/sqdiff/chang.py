"""Fejer kernel identities and the explicit-constant chain bounding sum |1_A^(b)|.

For frequencies Gamma and m >= 1 the chain is

    sum_b |1_A^(b)| = sum_{a in A} F(a),            F(x) = sum_b e(theta_b + b x)
                    <= |A|^(1-1/2m) (sum_{a in A} |F(a)|^2m)^(1/2m)              (Holder)
    sum_{a in A} |F(a)|^2m <= 3 sum_n psi(n/2N) |F(n)|^2m                          (Fejer)
    sum_n psi(n/2N) |F(n)|^2m <= sum_tuples 2N max(0, 1 - 2N ||s||) =: P           (Poisson)

with psi(t) = sin^2(pi t)/(pi t)^2 and s running over the 2m-fold signed sums.
Since P <= 2N E_2m(Gamma; 1/N) with wrapped distance, the final bound is
sum_b |1_A^(b)| <= 6^(1/2m) |A| alpha^(-1/2m) E_2m(Gamma; 1/N)^(1/2m).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .energy import energy_approx
from .errors import InvalidArgument, ResourceError
from .fourier import exp_sum
from .rationals import ReducedRational, as_fraction
from .sdf import IntegerSet

FEJER_TRUNCATION = 64
HOLDER_RTOL = 1e-12
DEFAULT_TUPLE_BUDGET = 10**8


def psi(t):
    """sin^2(pi t) / (pi t)^2 with psi(0) = 1; accepts arrays."""
    t = np.asarray(t, dtype=float)
    out = np.ones_like(t)
    nz = t != 0
    x = np.pi * t[nz]
    out[nz] = (np.sin(x) / x) ** 2
    return out if out.ndim else float(out)


def psi_hat(xi):
    """Fourier transform of psi: the triangle max(0, 1 - |xi|)."""
    xi = np.asarray(xi, dtype=float)
    out = np.maximum(0.0, 1.0 - np.abs(xi))
    return out if out.ndim else float(out)


def _frac(x):
    return x - math.floor(x)


def _b2(x):
    """Periodic Bernoulli polynomial B_2({x}) = {x}^2 - {x} + 1/6."""
    f = _frac(x)
    return f * f - f + (Fraction(1, 6) if isinstance(f, Fraction) else 1.0 / 6.0)


def fejer_lattice_sum(beta, N: int):
    """sum_{n in Z} psi(n/2N) e(n beta) via the Fourier series of B_2.

    Uses sum_{n != 0} e(n x)/n^2 = 2 pi^2 B_2({x}); exact when beta is a Fraction.
    """
    if N < 1:
        raise InvalidArgument(f"N must be >= 1, got {N}")
    L = 2 * N
    if isinstance(beta, (Fraction, ReducedRational, int)):
        b = as_fraction(beta)
        h = Fraction(1, L)
    else:
        b, h = float(beta), 1.0 / L
    return 1 + L * L * (_b2(b) - (_b2(b + h) + _b2(b - h)) / 2)


def fejer_poisson(beta, N: int):
    """2N max(0, 1 - 2N ||beta||), the Poisson-summation closed form."""
    if N < 1:
        raise InvalidArgument(f"N must be >= 1, got {N}")
    if isinstance(beta, (Fraction, ReducedRational, int)):
        f = _frac(as_fraction(beta))
    else:
        f = _frac(float(beta))
    dist = min(f, 1 - f)
    return 2 * N * max(0, 1 - 2 * N * dist)


def fejer_direct_sum(beta: float, N: int, M: int) -> tuple[float, float]:
    """(sum_{|n| <= M} psi(n/2N) e(n beta), bound on the omitted tail)."""
    n = np.arange(1, M + 1, dtype=float)
    w = psi(n / (2 * N))
    s = 1.0 + 2.0 * math.fsum(w * np.cos(2 * np.pi * np.mod(n * beta, 1.0)))
    # psi(t) <= 1/(pi t)^2 and sum_{n > M} 1/n^2 <= 1/M
    tail = 2.0 * (2 * N / math.pi) ** 2 / M
    return s, tail


@dataclass
class ChangReport:
    m: int
    N: int
    size: int
    lhs: float
    holder_rhs: float
    holder_ok: bool
    power_sum: float
    fejer_sum: float
    fejer_tail: float
    fejer_ok: bool
    poisson_sum: float
    poisson_ok: bool
    energy_wrapped: int
    energy_literal: int
    final_rhs: float
    final_ok: bool
    ratio: float

    @property
    def passed(self) -> bool:
        return self.holder_ok and self.fejer_ok and self.poisson_ok and self.final_ok

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def _F_values(gammas: list[float], thetas: np.ndarray, xs: np.ndarray) -> np.ndarray:
    g = np.array(gammas, dtype=float)
    out = np.zeros(len(xs), dtype=complex)
    step = max(1, (1 << 22) // max(len(g), 1))
    for i in range(0, len(xs), step):
        ph = np.mod(np.outer(xs[i : i + step].astype(float), g) + thetas[None, :], 1.0)
        out[i : i + step] = np.exp(2j * np.pi * ph).sum(axis=1)
    return out


def _poisson_sum(gammas: list[float], m: int, N: int, budget: int) -> float:
    n = len(gammas)
    if n ** (2 * m) > budget:
        raise ResourceError(f"{n}^{2 * m} tuples exceed the tuple budget")
    g = np.array(gammas, dtype=float)
    sums = g
    for _ in range(m - 1):
        sums = (sums[:, None] + g[None, :]).ravel()
    total = 0.0
    step = max(1, (1 << 22) // len(sums))
    for i in range(0, len(sums), step):
        d = np.mod(sums[i : i + step, None] - sums[None, :], 1.0)
        dist = np.minimum(d, 1.0 - d)
        total += math.fsum(np.maximum(0.0, 1.0 - 2 * N * dist).ravel())
    return 2 * N * total


def chang_check(A: IntegerSet, Gamma, m: int, tuple_budget: int = DEFAULT_TUPLE_BUDGET,
                truncation: int = FEJER_TRUNCATION) -> ChangReport:
    """Evaluate every step of the chain with its explicit constant."""
    Gamma = list(Gamma)
    if not Gamma:
        raise InvalidArgument("Gamma must be nonempty")
    if m < 1:
        raise InvalidArgument(f"m must be >= 1, got {m}")
    if len(A) == 0:
        raise InvalidArgument("A must be nonempty")
    N, size = A.N, len(A)
    coeffs = [exp_sum(A, b) for b in Gamma]
    lhs = math.fsum(abs(c) for c in coeffs)
    thetas = np.array([-math.atan2(c.imag, c.real) / (2 * math.pi) for c in coeffs])
    gammas = [float(as_fraction(b)) if not isinstance(b, float) else b for b in Gamma]

    F_A = _F_values(gammas, thetas, A.array)
    power_sum = math.fsum(np.abs(F_A) ** (2 * m))
    holder_rhs = size ** (1 - 1 / (2 * m)) * power_sum ** (1 / (2 * m))
    holder_ok = lhs <= holder_rhs * (1 + HOLDER_RTOL)

    M = truncation * N
    ns = np.arange(-M, M + 1, dtype=np.int64)
    F_n = _F_values(gammas, thetas, ns)
    fejer_sum = math.fsum(psi(ns / (2 * N)) * np.abs(F_n) ** (2 * m))
    # the omitted terms are nonnegative, so the truncated sum is a lower bound
    fejer_ok = power_sum <= 3 * fejer_sum * (1 + HOLDER_RTOL)
    fejer_tail = 2.0 * (2 * N / math.pi) ** 2 / M * len(Gamma) ** (2 * m)

    poisson = _poisson_sum(gammas, m, N, tuple_budget)
    poisson_ok = fejer_sum <= poisson * (1 + HOLDER_RTOL) + 1e-9

    exact = all(not isinstance(b, float) for b in Gamma)
    pts = [as_fraction(b) for b in Gamma] if exact else gammas
    delta = Fraction(1, N) if exact else 1.0 / N
    e_wrap = energy_approx(pts, m, delta, wrap=True, tuple_budget=tuple_budget)
    e_lit = energy_approx(pts, m, delta, wrap=False, tuple_budget=tuple_budget)
    alpha = size / N
    final_rhs = 6 ** (1 / (2 * m)) * size * alpha ** (-1 / (2 * m)) * e_wrap ** (1 / (2 * m))
    final_ok = lhs <= final_rhs * (1 + HOLDER_RTOL)
    return ChangReport(m, N, size, lhs, holder_rhs, holder_ok, power_sum, fejer_sum, fejer_tail,
                       fejer_ok, poisson, poisson_ok, e_wrap, e_lit, final_rhs, final_ok,
                       lhs / final_rhs if final_rhs else math.inf)
