"""Square-difference-free subsets of [N]: construction, verification and file I/O."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument, PreconditionError

# above this N a dense membership mask is not allocated
MASK_LIMIT = 10**8


@dataclass(frozen=True)
class IntegerSet:
    N: int
    elements: tuple[int, ...]
    _array: np.ndarray = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.N < 1:
            raise InvalidArgument(f"N must be >= 1, got {self.N}")
        elems = tuple(int(a) for a in self.elements)
        for prev, cur in zip(elems, elems[1:]):
            if cur <= prev:
                raise PreconditionError("elements must be strictly increasing")
        if elems and (elems[0] < 1 or elems[-1] > self.N):
            raise PreconditionError(f"elements must lie in [1, {self.N}]")
        object.__setattr__(self, "elements", elems)
        dtype = np.int64 if self.N < 2**62 else object
        object.__setattr__(self, "_array", np.array(elems, dtype=dtype))

    @classmethod
    def of(cls, N: int, items) -> "IntegerSet":
        return cls(N, tuple(sorted(set(int(a) for a in items))))

    @property
    def array(self) -> np.ndarray:
        return self._array

    @property
    def alpha(self) -> float:
        return len(self.elements) / self.N

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, a):
        i = np.searchsorted(self._array, a)
        return bool(i < len(self.elements) and self.elements[i] == a)


@dataclass(frozen=True)
class SDFResult:
    ok: bool
    witness: tuple[int, int, int] | None = None  # (a, b, n) with a - b = n^2

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        if self.witness is None:
            return {"sdf": self.ok, "witness": None}
        a, b, n = self.witness
        return {"sdf": self.ok, "witness": {"a": a, "b": b, "n": n}}


def _mask(A: IntegerSet) -> np.ndarray:
    m = np.zeros(A.N + 1, dtype=bool)
    m[A.array] = True
    return m


def square_difference_counts(A: IntegerSet) -> dict[int, int]:
    """{n: #{(a, b) in A^2 : a - b = n^2}} for the n that occur."""
    out: dict[int, int] = {}
    if len(A) < 2:
        return out
    if A.N > MASK_LIMIT:
        for n, c in _pairwise_counts(A).items():
            out[n] = c
        return out
    mask = _mask(A)
    arr = A.array
    for n in range(1, math.isqrt(A.N - 1) + 1):
        s = n * n
        lo = arr[arr + s <= A.N]
        c = int(np.count_nonzero(mask[lo + s]))
        if c:
            out[n] = c
    return out


def _pairwise_counts(A: IntegerSet) -> dict[int, int]:
    out: dict[int, int] = {}
    el = A.elements
    for i, b in enumerate(el):
        for a in el[i + 1 :]:
            r = math.isqrt(a - b)
            if r * r == a - b:
                out[r] = out.get(r, 0) + 1
    return out


def is_sdf(A: IntegerSet) -> SDFResult:
    """No a > b in A with a - b a positive square.

    The witness reported on failure uses the smallest n, then the smallest b.
    """
    if len(A) < 2:
        return SDFResult(True)
    if A.N > MASK_LIMIT:
        el = A.elements
        best = None
        for i, b in enumerate(el):
            for a in el[i + 1 :]:
                r = math.isqrt(a - b)
                if r * r == a - b and (best is None or (r, b) < (best[2], best[1])):
                    best = (a, b, r)
        return SDFResult(best is None, best)
    mask = _mask(A)
    arr = A.array
    for n in range(1, math.isqrt(A.N - 1) + 1):
        s = n * n
        lo = arr[arr + s <= A.N]
        hit = np.flatnonzero(mask[lo + s])
        if hit.size:
            b = int(lo[hit[0]])
            return SDFResult(False, (b + s, b, n))
    return SDFResult(True)


def _squares_upto(N: int) -> np.ndarray:
    r = math.isqrt(max(N, 0))
    return np.arange(1, r + 1, dtype=np.int64) ** 2


def greedy_sdf(N: int) -> IntegerSet:
    """Scan 1..N ascending and keep every integer compatible with those already kept."""
    if N < 1:
        raise InvalidArgument(f"N must be >= 1, got {N}")
    return _greedy_filter(N, range(1, N + 1))


def _greedy_filter(N: int, candidates, both_sides: bool = False) -> IntegerSet:
    sq = _squares_upto(N)
    forbidden = np.zeros(N + 1, dtype=bool)
    kept = []
    for x in candidates:
        if forbidden[x]:
            continue
        kept.append(x)
        up = x + sq[: np.searchsorted(sq, N - x, side="right")]
        forbidden[up] = True
        if both_sides:
            down = x - sq[: np.searchsorted(sq, x - 1, side="right")]
            forbidden[down] = True
    return IntegerSet(N, tuple(sorted(kept)))


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def planted_sdf(N: int, q: int, r: int, seed: int = 0, thin: float = 0.0) -> IntegerSet:
    """Greedy SDF subset of {n <= N : n = r mod q}, optionally thinned at random first.

    With ``thin = t`` each candidate is dropped independently with probability t,
    drawn from a PCG64 generator seeded with ``seed``.
    """
    if N < 1:
        raise InvalidArgument(f"N must be >= 1, got {N}")
    if not 1 <= r <= q:
        raise InvalidArgument(f"need 1 <= r <= q, got r={r}, q={q}")
    if not 0.0 <= thin < 1.0:
        raise InvalidArgument("thin must lie in [0, 1)")
    first = r if r <= N else None
    if first is None:
        return IntegerSet(N, ())
    cand = np.arange(r, N + 1, q, dtype=np.int64)
    if thin > 0:
        cand = cand[_rng(seed).random(len(cand)) >= thin]
    return _greedy_filter(N, (int(x) for x in cand))


def random_sdf(N: int, seed: int = 0) -> IntegerSet:
    """Greedy SDF set built from a seeded random ordering of [N]."""
    if N < 1:
        raise InvalidArgument(f"N must be >= 1, got {N}")
    order = _rng(seed).permutation(np.arange(1, N + 1, dtype=np.int64))
    return _greedy_filter(N, (int(x) for x in order), both_sides=True)


def random_subset(N: int, density: float, seed: int = 0) -> IntegerSet:
    """Each element of [N] kept independently with the given probability (not SDF in general)."""
    if N < 1 or not 0.0 <= density <= 1.0:
        raise InvalidArgument("need N >= 1 and density in [0, 1]")
    keep = _rng(seed).random(N) < density
    return IntegerSet(N, tuple(int(a) for a in np.flatnonzero(keep) + 1))


def write_integer_set(path, A: IntegerSet) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# N={A.N}\n")
        for a in A.elements:
            fh.write(f"{a}\n")


def read_integer_set(path) -> IntegerSet:
    N = None
    elems = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip().replace(" ", "")
                if body.startswith("N="):
                    N = int(body[2:])
                continue
            try:
                elems.append(int(line))
            except ValueError:
                raise InvalidArgument(f"{path}:{lineno}: not an integer: {line!r}") from None
    if N is None:
        raise InvalidArgument(f"{path}: missing '# N=<value>' header")
    if len(set(elems)) != len(elems):
        raise PreconditionError(f"{path}: duplicate integers")
    return IntegerSet(N, tuple(sorted(elems)))
