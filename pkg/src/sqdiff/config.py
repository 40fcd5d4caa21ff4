"""Absolute constants that the underlying arguments leave unspecified.

Every implied constant lives here with a documented default. The on-disk
format is a flat ``key = value`` file; ``#`` starts a comment and unknown keys
are rejected so that every choice is auditable.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError

ENV_VAR = "SQDIFF_CONSTANTS"


@dataclass(frozen=True)
class ConstantsConfig:
    # K = ceil(C_kdef * alpha^-2 * log N)
    C_kdef: float = 1.0
    # N' = floor(c0_nprime * nu * alpha * N / (K q^2))
    c0_nprime: float = 0.01
    # nu = exp(-c_nu * log(1/alpha) / log log(1/alpha))
    c_nu: float = 1.0
    # m = max(2, ceil(c_prime_m * log log(1/alpha)))
    c_prime_m: float = 1.0
    # arcs with mass <= N / K^discard_exponent are dropped; fixed at 6
    discard_exponent: int = 6
    tuple_budget: int = 10**8
    memory_budget: int = 2 * 1024**3
    seed: int = 0
    # sparse branch when log(1/alpha) >= c_sparse * log N
    c_sparse: float = 0.5
    # iteration stops once N_t falls below this floor
    n_floor: int = 32
    # upper bound on K; 0 means the largest K with 2K^2 < N (disjoint arcs)
    k_cap: int = 0
    # C in the additive energy bound (log(mQ))^(C^m) (Qn)^m
    C_energy: float = 1.0
    # largest Q accepted by enumerate_rationals
    enumeration_limit: int = 2000

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name in ("seed", "k_cap"):
                if value < 0:
                    raise ConfigError(f"{f.name} must be nonnegative, got {value}")
            elif value <= 0:
                raise ConfigError(f"{f.name} must be positive, got {value}")
        if self.discard_exponent != 6:
            raise ConfigError("discard_exponent is fixed at 6")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 bits")

    def replace(self, **changes) -> "ConstantsConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _coerce(name: str, raw: str, kind):
    try:
        if kind is int:
            return int(float(raw)) if ("e" in raw.lower() and "." not in raw) else int(raw)
        return float(raw)
    except ValueError:
        raise ConfigError(f"bad value for {name}: {raw!r}") from None


def parse_constants(text: str) -> ConstantsConfig:
    types = {f.name: (int if f.type in ("int", int) else float) for f in fields(ConstantsConfig)}
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in types:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _coerce(key, raw, types[key])
    return ConstantsConfig(**values)


def load_constants(path: str | os.PathLike | None = None) -> ConstantsConfig:
    """Load constants from ``path``, else from $SQDIFF_CONSTANTS, else defaults."""
    if path is None:
        path = os.environ.get(ENV_VAR) or None
    if path is None:
        return ConstantsConfig()
    return parse_constants(Path(path).read_text(encoding="utf-8"))


def format_constants(cfg: ConstantsConfig) -> str:
    return "".join(f"{k} = {v}\n" for k, v in cfg.to_dict().items())
