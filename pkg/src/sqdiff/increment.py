"""Density increment on progressions of square difference, the trichotomy and the iteration."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .config import ConstantsConfig
from .energy import energy_approx, energy_mitm
from .errors import DomainError, InvalidArgument, ResourceError, ScaleError, SparseBranch
from .fourier import ArcMassCalculator
from .sdf import IntegerSet, is_sdf
from .spectrum import SpectrumReport, choose_K, extract_spectrum

MAX_INCREMENT_ATTEMPTS = 8


def nu_of_alpha(alpha: float, c: float = 1.0) -> float:
    """exp(-c log(1/alpha) / log log(1/alpha)) for 0 < alpha < 1/e."""
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if c < 0:
        raise DomainError(f"c must be >= 0, got {c}")
    L = math.log(1 / alpha)
    if L <= 1:
        raise DomainError(f"log log(1/alpha) <= 0 for alpha = {alpha} (need alpha < 1/e)")
    return math.exp(-c * L / math.log(L))


def theorem_bound(N: float, c: float) -> float:
    """N / (log N)^(c log log log N)."""
    if N <= math.e:
        raise DomainError("need log log log N > 0")
    lll = math.log(math.log(math.log(N))) if math.log(N) > 1 else -math.inf
    if not lll > 0:
        raise DomainError(f"log log log N = {lll:.3g} is not positive")
    return N / math.log(N) ** (c * lll)


def m_of_alpha(alpha: float, c_prime: float) -> int:
    """max(2, ceil(c' log log(1/alpha))); 2 when the double log is not positive."""
    L = math.log(1 / alpha)
    if L <= 1:
        return 2
    return max(2, math.ceil(c_prime * math.log(L)))


def nprime(alpha: float, N: int, K: float, q: int, nu: float, c0: float) -> int:
    return math.floor(c0 * nu * alpha * N / (K * q * q))


@dataclass
class IncrementResult:
    found: bool
    x: int
    q: int
    N_prime: int
    A_prime: IntegerSet
    alpha_prime: float
    nu: float
    alpha: float
    K: float
    hypothesis_mass: float
    hypothesis_threshold: float

    @property
    def hypothesis_holds(self) -> bool:
        return self.hypothesis_mass >= self.hypothesis_threshold

    @property
    def target(self) -> float:
        return (1 + self.nu / 20) * self.alpha

    def to_dict(self) -> dict:
        return {
            "found": self.found, "x": self.x, "q": self.q, "K": self.K, "N_prime": self.N_prime,
            "size_prime": len(self.A_prime), "alpha": self.alpha, "alpha_prime": self.alpha_prime,
            "target": self.target, "nu": self.nu,
            "hypothesis_mass": self.hypothesis_mass,
            "hypothesis_threshold": self.hypothesis_threshold,
            "hypothesis_holds": self.hypothesis_holds,
        }


def shift_counts(A: IntegerSet, step: int, length: int) -> tuple[np.ndarray, np.ndarray]:
    """All x with some a + x in step*[length], and #{a in A : a + x in step*[length]}."""
    xs = np.arange(step - A.N, step * length, dtype=np.int64)
    counts = np.zeros(len(xs), dtype=np.int64)
    arr = A.array
    for rho in range(step):
        # a + x = 0 mod step  <=>  a = -x mod step
        members = np.sort(arr[arr % step == (-rho) % step])
        sel = np.flatnonzero(xs % step == rho)
        if members.size == 0 or sel.size == 0:
            continue
        x = xs[sel]
        hi = np.searchsorted(members, step * length - x, side="right")
        lo = np.searchsorted(members, step - x, side="left")
        counts[sel] = hi - lo
    return xs, counts


def find_increment(A: IntegerSet, q: int, K: float, nu: float,
                   constants: ConstantsConfig | None = None,
                   hypothesis_mass: float | None = None) -> IncrementResult:
    """Best translate of A onto q^2 * [N'] and the rescaled set A'.

    N' = floor(c0 nu alpha N / (K q^2)).  The scan over shifts is exhaustive and
    the smallest x wins ties.  ``found`` records whether alpha' >= (1 + nu/20) alpha.
    """
    constants = constants or ConstantsConfig()
    if q < 1 or K < 1 or not 0 < nu <= 1:
        raise InvalidArgument("need q >= 1, K >= 1 and nu in (0, 1]")
    if len(A) == 0:
        raise InvalidArgument("A must be nonempty")
    alpha = A.alpha
    Np = nprime(alpha, A.N, K, q, nu, constants.c0_nprime)
    if Np < 1:
        raise ScaleError(
            f"N' = floor({constants.c0_nprime} * {nu:.4g} * {alpha:.4g} * {A.N} / ({K} * {q}^2)) < 1")
    if hypothesis_mass is None:
        hypothesis_mass = sum(ArcMassCalculator(A).masses_for_denominator(q, K).values())
    step = q * q
    xs, counts = shift_counts(A, step, Np)
    i = int(np.argmax(counts))
    x = int(xs[i])
    image = [(a + x) // step for a in A.elements if (a + x) % step == 0 and 1 <= (a + x) // step <= Np]
    A_prime = IntegerSet(Np, tuple(image))
    found = Fraction(len(image), Np) >= (1 + Fraction(nu) / 20) * Fraction(len(A), A.N)
    return IncrementResult(found, x, q, Np, A_prime, len(image) / Np, nu, alpha, K,
                           hypothesis_mass, nu * alpha * len(A))


@dataclass
class ManyRationalsDiagnostic:
    m: int
    Q: int
    B: float
    nu: float
    max_per_denominator: int
    lhs: float
    rhs: float
    separation: float
    max_deviation: float
    separated: bool
    energy: int | None
    energy_approx: int | None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def many_rationals_diagnostic(A: IntegerSet, spec: SpectrumReport, nu: float,
                              constants: ConstantsConfig) -> ManyRationalsDiagnostic:
    """Both sides of m^m (log mQ)^(C^m) (nu B^2 Q)^m >= alpha (B Q^1/2 / log(1/alpha))^2m.

    Also reports whether the 2m-fold signed sums of the chosen frequencies are
    separated at scale Q^(-2m)/2, in which case E(Gamma; 1/N) counts exactly the
    vanishing rational sums.
    """
    alpha = A.alpha
    m = m_of_alpha(alpha, constants.c_prime_m)
    Q = max(spec.Q, 1)
    # denominators in the chosen class lie in [Q, 2Q]
    Qtop = 2 * Q
    B = spec.B_level
    C = constants.C_energy
    lhs = m**m * math.log(m * Qtop) ** (C**m) * (nu * B * B * Qtop) ** m
    # the right side blows up as alpha -> 1
    rhs = alpha * (B * math.sqrt(Qtop) / math.log(1 / alpha)) ** (2 * m) if alpha < 1 else math.inf
    per_q = max(spec.count_by_denominator().values(), default=0)
    sep = Qtop ** (-2 * m) / 2
    dev = max((abs(((f.gamma - float(f.center)) + 0.5) % 1.0 - 0.5) for f in spec.frequencies), default=0.0)
    separated = 2 * m * dev + 1.0 / A.N < sep
    centers = [f.center for f in spec.frequencies]
    energy = approx = None
    try:
        energy = energy_mitm(centers, m, constants.memory_budget) if centers else 0
        approx = energy_approx([f.gamma for f in spec.frequencies], m, 1.0 / A.N,
                               tuple_budget=constants.tuple_budget) if centers else 0
    except ResourceError:
        pass
    return ManyRationalsDiagnostic(m, Q, B, nu, per_q, lhs, rhs, sep, dev, separated, energy, approx)


@dataclass
class TrichotomyResult:
    branch: str  # sparse | increment | many-rationals
    spectrum: SpectrumReport | None = None
    increment: IncrementResult | None = None
    diagnostic: ManyRationalsDiagnostic | None = None
    candidates: list[int] = field(default_factory=list)
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "branch": self.branch,
            "note": self.note,
            "candidates": self.candidates,
            "increment": self.increment.to_dict() if self.increment else None,
            "diagnostic": self.diagnostic.to_dict() if self.diagnostic else None,
            "spectrum": self.spectrum.to_dict() if self.spectrum else None,
        }


def is_sparse(A: IntegerSet, constants: ConstantsConfig) -> bool:
    if len(A) == 0:
        return True
    alpha, N = A.alpha, A.N
    return alpha < N ** (-1 / 3) or math.log(1 / alpha) >= constants.c_sparse * math.log(N)


def trichotomy(A: IntegerSet, nu: float, constants: ConstantsConfig | None = None) -> TrichotomyResult:
    """Sparse, density increment, or many large coefficients at distinct denominators.

    Increment candidates are the denominators in the chosen spectral class whose
    count exceeds nu B^2, followed by every q <= K whose total arc mass meets
    nu alpha |A|, in decreasing order of mass.  The first candidate that yields
    an increment is returned; otherwise the last attempt is reported.
    """
    constants = constants or ConstantsConfig()
    if is_sparse(A, constants):
        return TrichotomyResult("sparse", note="alpha < N^(-1/3) or log(1/alpha) >= c_sparse log N")
    try:
        spec = extract_spectrum(A, constants)
    except SparseBranch as exc:
        return TrichotomyResult("sparse", note=str(exc))
    cap = nu * spec.B_level**2
    violators = [q for q, c in spec.count_by_denominator().items() if c > cap]
    threshold = nu * A.alpha * len(A)
    heavy = sorted((q for q, mass in spec.mass_by_denominator.items() if mass >= threshold),
                   key=lambda q: (-spec.mass_by_denominator[q], q))
    candidates = list(dict.fromkeys(violators + heavy))
    if not candidates:
        spec.branch = "many-rationals"
        diag = many_rationals_diagnostic(A, spec, nu, constants)
        return TrichotomyResult("many-rationals", spec, diagnostic=diag)
    last = None
    note = ""
    for q in candidates[:MAX_INCREMENT_ATTEMPTS]:
        try:
            res = find_increment(A, q, spec.K, nu, constants, spec.mass_by_denominator.get(q))
        except ScaleError as exc:
            note = f"q={q}: {exc}"
            continue
        last = res
        if res.found:
            spec.branch = "increment"
            return TrichotomyResult("increment", spec, res, candidates=candidates)
        note = f"q={q}: no increment at N'={res.N_prime}"
    spec.branch = "increment"
    return TrichotomyResult("increment", spec, last, candidates=candidates, note=note)


@dataclass
class IterationStep:
    t: int
    N: int
    size: int
    alpha: float
    branch: str
    nu: float
    q: int | None
    x: int | None
    sdf: bool
    note: str = ""

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class IterationLog:
    N0: int
    alpha0: float
    nu: float
    step_bound: int
    steps: list[IterationStep]
    reason: str

    def to_jsonl(self, dumps=json.dumps) -> str:
        lines = [dumps(s.to_dict()) for s in self.steps]
        lines.append(dumps({"summary": True, "N0": self.N0, "alpha0": self.alpha0, "nu": self.nu,
                            "step_bound": self.step_bound, "steps": len(self.steps),
                            "reason": self.reason}))
        return "\n".join(lines) + "\n"

    def alphas(self) -> list[float]:
        return [s.alpha for s in self.steps]


def step_bound(alpha: float, nu: float) -> int:
    """ceil(20 log(1/alpha) / nu) + 1, from (1 + nu/20)^t alpha <= 1."""
    return math.ceil(20 * math.log(1 / alpha) / nu) + 1


def iterate(A: IntegerSet, constants: ConstantsConfig | None = None,
            nu: float | None = None) -> IterationLog:
    """Apply the trichotomy until it stops producing increments.

    nu is fixed from the initial density.  Stops on the sparse or
    many-rationals branch, on a failed or impossible increment, when N_t drops
    below sqrt(N) or the configured floor, or at the step bound.
    """
    constants = constants or ConstantsConfig()
    if len(A) == 0:
        raise InvalidArgument("A must be nonempty")
    N0, alpha0 = A.N, A.alpha
    if nu is None:
        nu = nu_of_alpha(alpha0, constants.c_nu)
    bound = step_bound(alpha0, nu)
    steps: list[IterationStep] = []
    cur = A
    reason = "step-bound"
    for t in range(bound + 1):
        sdf = is_sdf(cur).ok
        if cur.N < math.sqrt(N0):
            steps.append(IterationStep(t, cur.N, len(cur), cur.alpha, "stop", nu, None, None, sdf))
            reason = "N_t < sqrt(N)"
            break
        if cur.N < constants.n_floor:
            steps.append(IterationStep(t, cur.N, len(cur), cur.alpha, "stop", nu, None, None, sdf))
            reason = "N_t below floor"
            break
        if t == bound:
            steps.append(IterationStep(t, cur.N, len(cur), cur.alpha, "stop", nu, None, None, sdf))
            break
        res = trichotomy(cur, nu, constants)
        inc = res.increment
        steps.append(IterationStep(t, cur.N, len(cur), cur.alpha, res.branch, nu,
                                   inc.q if inc else None, inc.x if inc else None, sdf, res.note))
        if res.branch != "increment":
            reason = res.branch
            break
        if inc is None:
            reason = "scale"
            break
        if not inc.found:
            reason = "increment-not-found"
            break
        if len(inc.A_prime) == 0:
            reason = "empty"
            break
        cur = inc.A_prime
    return IterationLog(N0, alpha0, nu, bound, steps, reason)
