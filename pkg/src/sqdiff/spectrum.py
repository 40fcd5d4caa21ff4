"""Large-spectrum extraction at rationals with small denominators.

Arc masses of |g^|^2 come from the closed form in ``ArcMassCalculator``;
suprema of |1_A^| on each arc are read off an FFT grid first and then refined
by golden-section search for the arcs that make it into the reported class.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .config import ConstantsConfig
from .errors import InvalidArgument, SparseBranch
from .fourier import ArcMassCalculator, exp_sum_grid
from .rationals import ReducedRational, rationals_with_denominator
from .sdf import IntegerSet

ARC_GRID_POINTS = 65
GOLDEN_ITERATIONS = 40
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def disjoint_K_cap(N: int) -> int:
    """Largest integer K >= 1 with 2K^2 < N (1 when N is tiny)."""
    k = math.isqrt(max(N - 1, 0) // 2)
    while 2 * (k + 1) ** 2 < N:
        k += 1
    while k > 1 and 2 * k * k >= N:
        k -= 1
    return max(k, 1)


def choose_K(alpha: float, N: int, constants: ConstantsConfig) -> tuple[int, int]:
    """(K from ceil(C alpha^-2 log N), the K actually used after capping)."""
    k_formula = max(1, math.ceil(constants.C_kdef * alpha**-2 * math.log(N)))
    cap = constants.k_cap if constants.k_cap > 0 else disjoint_K_cap(N)
    return k_formula, min(k_formula, cap)


@dataclass
class SpectralFrequency:
    center: ReducedRational
    gamma: float
    peak: float
    mass: float


@dataclass
class SpectralClass:
    Q: int
    B_level: float
    members: list[tuple[ReducedRational, float, float]]  # (a/q, mass, grid sup)

    @property
    def score(self) -> float:
        return sum(m**0.5 * s / math.sqrt(r.den) for r, m, s in self.members)


@dataclass
class SpectrumReport:
    N: int
    size: int
    alpha: float
    K_formula: int
    K: int
    Q: int
    B_level: float
    discard_threshold: float
    arcs_total: int
    arcs_discarded: int
    frequencies: list[SpectralFrequency]
    classes: list[dict]
    toref_sum: float
    chosen_score: float
    mass_by_denominator: dict[int, float] = field(default_factory=dict)
    branch: str | None = None

    @property
    def toref_ratio(self) -> float:
        """Sum over kept arcs of q^-1/2 mass^1/2 sup, divided by alpha |A| sqrt N."""
        return self.toref_sum / (self.alpha * self.size * math.sqrt(self.N))

    @property
    def chosen_ratio(self) -> float:
        return self.chosen_score / (self.alpha * self.size * math.sqrt(self.N))

    def count_by_denominator(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for f in self.frequencies:
            out[f.center.den] += 1
        return dict(sorted(out.items()))

    def to_dict(self) -> dict:
        return {
            "N": self.N, "size": self.size, "alpha": self.alpha,
            "K_formula": self.K_formula, "K": self.K, "Q": self.Q, "B_level": self.B_level,
            "discard_threshold": self.discard_threshold,
            "arcs_total": self.arcs_total, "arcs_discarded": self.arcs_discarded,
            "toref_sum": self.toref_sum, "toref_ratio": self.toref_ratio,
            "chosen_score": self.chosen_score, "chosen_ratio": self.chosen_ratio,
            "branch": self.branch,
            "classes": self.classes,
            "frequencies": [
                {"a/q": str(f.center), "gamma": f.gamma, "peak": f.peak, "mass": f.mass}
                for f in self.frequencies
            ],
        }


def _fft_magnitudes(A: IntegerSet) -> np.ndarray:
    """|1_A^(j/M)| for j = 0..M-1 with M the power of two >= 8N."""
    M = 1 << (8 * A.N - 1).bit_length()
    ind = np.zeros(M)
    ind[A.array % M] = 1.0
    return np.abs(np.fft.fft(ind))


def _grid_sup(mags: np.ndarray, c: float, w: float) -> float:
    M = len(mags)
    lo = math.ceil((c - w) * M)
    hi = math.floor((c + w) * M)
    idx = np.arange(lo, hi + 1) % M
    if idx.size == 0:
        return float(mags[round(c * M) % M])
    return float(mags[idx].max())


def refine_peak(A: IntegerSet, c: float, w: float) -> tuple[float, float]:
    """(gamma, |1_A^(gamma)|) maximizing on [c - w, c + w]: 65-point grid then golden section."""
    xs = np.linspace(c - w, c + w, ARC_GRID_POINTS)
    vals = np.abs(exp_sum_grid(A, xs))
    i = int(np.argmax(vals))
    best_x, best_v = float(xs[i]), float(vals[i])
    a = float(xs[max(i - 1, 0)])
    b = float(xs[min(i + 1, len(xs) - 1)])

    def f(x):
        return float(abs(exp_sum_grid(A, np.array([x]))[0]))

    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(GOLDEN_ITERATIONS):
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
    for x, v in ((x1, f1), (x2, f2)):
        if v > best_v:
            best_x, best_v = x, v
    return best_x % 1.0 or 1.0, best_v


def dyadic_level(x: float) -> int:
    """k with 2^k <= x < 2^(k+1)."""
    m, e = math.frexp(x)
    return e - 1


def extract_spectrum(A: IntegerSet, constants: ConstantsConfig | None = None,
                     refine: bool = True, require_density: bool = True) -> SpectrumReport:
    """Dyadic class of kept arcs maximizing sum q^-1/2 mass^1/2 sup|1_A^|.

    ``require_density=False`` skips the alpha >= N^(-1/3) precondition so that
    small fixtures below it can still be inspected.
    """
    constants = constants or ConstantsConfig()
    N, n = A.N, len(A)
    alpha = A.alpha
    if n == 0 or (require_density and alpha < N ** (-1.0 / 3.0)):
        raise SparseBranch(f"alpha = {alpha:.6g} < N^(-1/3) = {N ** (-1 / 3):.6g}")
    if 2 >= N:
        raise InvalidArgument("N too small for major arcs")
    k_formula, K = choose_K(alpha, N, constants)
    threshold = N / K**constants.discard_exponent
    calc = ArcMassCalculator(A)
    mags = _fft_magnitudes(A)

    classes: dict[tuple[int, int], SpectralClass] = {}
    mass_by_q: dict[int, float] = {}
    total = discarded = 0
    toref = 0.0
    for q in range(1, K + 1):
        masses = calc.masses_for_denominator(q, K)
        mass_by_q[q] = sum(masses.values())
        w = K / (q * N)
        for a, mu in masses.items():
            total += 1
            if mu <= threshold:
                discarded += 1
                continue
            r = ReducedRational(a, q)
            sup = _grid_sup(mags, a / q, w)
            toref += math.sqrt(mu) * sup / math.sqrt(q)
            # B with alpha sqrt(N)/B <= sqrt(mu) < 2 alpha sqrt(N)/B
            b_exp = math.ceil(math.log2(alpha * math.sqrt(N) / math.sqrt(mu)))
            key = (1 << dyadic_level(q), b_exp)
            cls = classes.get(key)
            if cls is None:
                cls = classes[key] = SpectralClass(key[0], 2.0**b_exp, [])
            cls.members.append((r, mu, sup))

    summary = sorted(
        ({"Q": c.Q, "B_level": c.B_level, "count": len(c.members), "score": c.score}
         for c in classes.values()),
        key=lambda d: (-d["score"], d["Q"], d["B_level"]))
    if not classes:
        return SpectrumReport(N, n, alpha, k_formula, K, 0, 0.0, threshold, total, discarded,
                              [], summary, toref, 0.0, mass_by_q)
    best = max(classes.values(), key=lambda c: (c.score, -c.Q, -c.B_level))
    freqs = []
    for r, mu, sup in sorted(best.members, key=lambda t: t[0]):
        if refine:
            gamma, peak = refine_peak(A, float(r), K / (r.den * N))
            peak = max(peak, sup)
        else:
            gamma, peak = float(r), sup
        freqs.append(SpectralFrequency(r, gamma, peak, mu))
    return SpectrumReport(N, n, alpha, k_formula, K, best.Q, best.B_level, threshold, total,
                          discarded, freqs, summary, toref, best.score, mass_by_q)


def spectrum_samples(A: IntegerSet, points: int = 4096) -> list[tuple[float, float]]:
    """(gamma, |1_A^(gamma)|) on an even grid of (0, 1], for plotting elsewhere."""
    if points < 1:
        raise InvalidArgument("points must be >= 1")
    xs = np.arange(1, points + 1) / points
    return list(zip(xs.tolist(), np.abs(exp_sum_grid(A, xs)).tolist()))
