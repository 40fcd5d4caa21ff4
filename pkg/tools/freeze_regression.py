"""Recompute the first-run regression values stored in tests/data/regression.json.

Run only when a value is meant to change; the tests compare against the frozen file.
"""

import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from sqdiff.energy import energy_mitm
from sqdiff.fourier import (arc_W2_ratio, decomposition_identity_ratio, exp_sum,
                            square_weight_arc_ratio)
from sqdiff.increment import iterate, trichotomy, nu_of_alpha
from sqdiff.rationals import one_per_denominator
from sqdiff.sdf import greedy_sdf, planted_sdf
from sqdiff.spectrum import extract_spectrum

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "regression.json"
ENERGY_SEEDS = range(10)
ENERGY_QS = (16, 32, 64, 128)


def energy_ratios() -> dict:
    table = {}
    for Q in ENERGY_QS:
        ratios = [energy_mitm(one_per_denominator(Q, s), 2) / Q**2 for s in ENERGY_SEEDS]
        table[str(Q)] = max(ratios)
    return table


def square_weight_arc_grid(N: int = 10**4) -> dict:
    part1 = ident = 0.0
    betas = [k * 5 / N for k in range(-10, 11)]
    for q in range(2, 51):
        for a in (1, q - 1, q // 2 if math.gcd(q // 2, q) == 1 else 1):
            if math.gcd(a, q) != 1:
                continue
            for b in betas:
                part1 = max(part1, square_weight_arc_ratio(a, q, b, N))
                ident = max(ident, decomposition_identity_ratio(a, q, b, N))
    w2 = max(arc_W2_ratio(q, N, 20) for q in range(1, 11))
    return {"part1_max": part1, "identity_max": ident, "arc_W2_max": w2}


def main() -> None:
    g5 = greedy_sdf(10**5)
    planted = planted_sdf(10**3, 3, 1)
    spec = extract_spectrum(g5)
    tri = trichotomy(g5, nu_of_alpha(g5.alpha))
    log = iterate(g5)
    data = {
        "greedy_sizes": {str(N): len(greedy_sdf(N)) for N in (10**3, 10**4, 10**5, 10**6)},
        "planted_1000_3_1": {"size": len(planted),
                             "coef_ratio": abs(exp_sum(planted, Fraction(1, 3))) / len(planted)},
        "planted_10000_2_1_size": len(planted_sdf(10**4, 2, 1)),
        "spectrum_greedy_1e5": {"K": spec.K, "Q": spec.Q, "B_level": spec.B_level,
                                "toref_ratio": spec.toref_ratio, "chosen_ratio": spec.chosen_ratio},
        "trichotomy_greedy_1e5": tri.branch,
        "iterate_greedy_1e5": [s.to_dict() for s in log.steps] + [{"reason": log.reason}],
        "square_weight_arcs": square_weight_arc_grid(),
        "energy_ratio_max": energy_ratios(),
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    json.dump(data, sys.stdout, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
