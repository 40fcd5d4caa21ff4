"""Command-line front end.

Exit status: 0 on success, 1 when a property check fails (a witness is printed
as JSON), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from fractions import Fraction

from . import __version__
from .chang import chang_check
from .config import ConstantsConfig, load_constants
from .decomposition import optimal_T, verify_decomposition_bounds
from .energy import BACKENDS, energy
from .errors import InvalidArgument, ResourceError, ScaleError, SqdiffError
from .increment import find_increment, iterate, nu_of_alpha, theorem_bound, trichotomy
from .jsonio import dumps
from .rationals import RationalSet, read_rational_set
from .sdf import greedy_sdf, is_sdf, planted_sdf, random_sdf, read_integer_set, write_integer_set
from .spectrum import choose_K, extract_spectrum, spectrum_samples
from .weights import constant_one, tau3_power

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _omega(spec: str):
    if spec == "one":
        return constant_one()
    if spec.startswith("tau3pow:"):
        try:
            t = int(spec.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad omega {spec!r}") from None
        if t < 0:
            raise UsageError("tau3pow exponent must be >= 0")
        return tau3_power(2 * t)
    raise UsageError(f"omega must be 'one' or 'tau3pow:<t>', got {spec!r}")


def _emit(obj) -> None:
    sys.stdout.write(dumps(obj) + "\n")


def cmd_construct(args, cfg: ConstantsConfig) -> int:
    seed = cfg.seed if args.seed is None else args.seed
    if args.kind == "greedy":
        A = greedy_sdf(args.N)
    elif args.kind == "planted":
        if args.q is None or args.r is None:
            raise UsageError("--kind planted needs --q and --r")
        A = planted_sdf(args.N, args.q, args.r, seed, args.thin)
    else:
        A = random_sdf(args.N, seed)
    write_integer_set(args.out, A)
    _emit({"kind": args.kind, "N": A.N, "size": len(A), "alpha": A.alpha, "out": args.out})
    return EXIT_OK


def cmd_verify(args, cfg) -> int:
    A = read_integer_set(args.set)
    res = is_sdf(A)
    _emit({"N": A.N, "size": len(A), **res.to_dict()})
    return EXIT_OK if res.ok else EXIT_FAIL


def cmd_energy(args, cfg) -> int:
    B = read_rational_set(args.set)
    rep = energy(B, args.m, args.backend, args.C if args.C is not None else cfg.C_energy,
                 cfg.tuple_budget, cfg.memory_budget)
    ok = rep.energy >= rep.diagonal_lower
    _emit({**rep.to_dict(), "diagonal_ok": ok})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_decompose(args, cfg) -> int:
    A, B, C = (read_rational_set(p) for p in (args.A, args.B, args.C))
    omega = _omega(args.omega)
    L = args.L or max((r.den for r in B), default=1)
    n = args.n or max(1, B.max_per_den())
    if args.T == "auto":
        T = optimal_T(A, B, C, omega, max(L, 2), n)
    else:
        try:
            T = Fraction(args.T)
        except ValueError:
            raise UsageError(f"--T must be a number or 'auto', got {args.T!r}") from None
        if T <= 0:
            raise UsageError("--T must be positive")
    rep = verify_decomposition_bounds(A, B, C, T, omega, L, n, sign=args.sign)
    _emit(rep)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_spectrum(args, cfg) -> int:
    A = read_integer_set(args.set)
    if args.C is not None:
        cfg = cfg.replace(C_kdef=args.C)
    rep = extract_spectrum(A, cfg)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["gamma", "abs_1A_hat"])
            for g, v in spectrum_samples(A, args.samples):
                w.writerow([f"{g:.12g}", f"{v:.12g}"])
    _emit(rep)
    return EXIT_OK


def _nu(args, A, cfg) -> float:
    if args.nu in (None, "auto"):
        return nu_of_alpha(A.alpha, cfg.c_nu)
    try:
        return float(args.nu)
    except ValueError:
        raise UsageError(f"--nu must be a number or 'auto', got {args.nu!r}") from None


def cmd_increment(args, cfg) -> int:
    A = read_integer_set(args.set)
    nu = _nu(args, A, cfg)
    K = args.K if args.K is not None else choose_K(A.alpha, A.N, cfg)[1]
    res = find_increment(A, args.q, K, nu, cfg)
    sdf_in = is_sdf(A).ok
    sdf_out = is_sdf(res.A_prime).ok
    if args.out:
        write_integer_set(args.out, res.A_prime)
    _emit({**res.to_dict(), "sdf_preserved": (not sdf_in) or sdf_out})
    return EXIT_OK if (not sdf_in) or sdf_out else EXIT_FAIL


def cmd_iterate(args, cfg) -> int:
    A = read_integer_set(args.set)
    nu = None if args.nu in (None, "auto") else _nu(args, A, cfg)
    log = iterate(A, cfg, nu)
    sys.stdout.write(log.to_jsonl(lambda d: dumps(d, schema=False)))
    alphas = [s.alpha for s in log.steps]
    inc = all(b >= a for a, b in zip(alphas, alphas[1:]))
    sdf_in = is_sdf(A).ok
    ok = inc and (not sdf_in or all(s.sdf for s in log.steps))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_trichotomy(args, cfg) -> int:
    A = read_integer_set(args.set)
    _emit(trichotomy(A, _nu(args, A, cfg), cfg))
    return EXIT_OK


def cmd_report(args, cfg) -> int:
    rows = []
    for N in args.N:
        A = greedy_sdf(N)
        try:
            bound = theorem_bound(N, args.c)
        except SqdiffError:
            bound = None
        rows.append({"N": N, "greedy_size": len(A), "alpha": A.alpha,
                     "theorem_bound": bound,
                     "ratio": len(A) / bound if bound else None,
                     "N_to_0.733": N**0.733})
    _emit({"c": args.c, "rows": rows, "constants": cfg.to_dict()})
    return EXIT_OK


def cmd_chang(args, cfg) -> int:
    A = read_integer_set(args.set)
    G = read_rational_set(args.gamma)
    rep = chang_check(A, list(G), args.m, cfg.tuple_budget)
    _emit(rep)
    return EXIT_OK if rep.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--constants", help="flat key = value constants file")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="accepted for compatibility; evaluation is single-process")
    common.add_argument("--json", action="store_true", help="JSON output (always on)")

    p = argparse.ArgumentParser(prog="sqdiff", description="Square-difference-free sets, "
                                "rational additive energy and circle-method diagnostics.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("construct", parents=[common], help="build an SDF set")
    s.add_argument("--kind", choices=["greedy", "planted", "random"], required=True)
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--q", type=int)
    s.add_argument("--r", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--thin", type=float, default=0.0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("verify", parents=[common], help="check an integer set is SDF")
    s.add_argument("--set", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("energy", parents=[common], help="additive energy of a rational set")
    s.add_argument("--set", required=True)
    s.add_argument("--m", type=int, default=2)
    s.add_argument("--backend", choices=BACKENDS, default="mitm")
    s.add_argument("--C", type=float)
    s.set_defaults(func=cmd_energy)

    s = sub.add_parser("decompose", parents=[common], help="verify the edge-splitting inequalities")
    s.add_argument("--A", required=True)
    s.add_argument("--B", required=True)
    s.add_argument("--C", required=True)
    s.add_argument("--T", default="auto")
    s.add_argument("--omega", default="one")
    s.add_argument("--L", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--sign", type=int, choices=[-1, 1], default=-1)
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("spectrum", parents=[common], help="large spectrum at small denominators")
    s.add_argument("--set", required=True)
    s.add_argument("--C", type=float)
    s.add_argument("--csv")
    s.add_argument("--samples", type=int, default=4096)
    s.set_defaults(func=cmd_spectrum)

    for name, func, help_ in (("increment", cmd_increment, "one density-increment step"),
                              ("iterate", cmd_iterate, "iterate the increment (JSON lines)"),
                              ("trichotomy", cmd_trichotomy, "sparse / increment / many-rationals")):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("--set", required=True)
        s.add_argument("--nu", default="auto")
        if name == "increment":
            s.add_argument("--q", type=int, required=True)
            s.add_argument("--K", type=float)
            s.add_argument("--out")
        s.set_defaults(func=func)

    s = sub.add_parser("chang", parents=[common], help="explicit-constant Chang chain")
    s.add_argument("--set", required=True)
    s.add_argument("--gamma", required=True, help="file of rationals a/q")
    s.add_argument("--m", type=int, default=1)
    s.set_defaults(func=cmd_chang)

    s = sub.add_parser("report", parents=[common], help="greedy sizes against the theorem bound")
    s.add_argument("--N", type=int, nargs="+", default=[10**3, 10**4, 10**5, 10**6])
    s.add_argument("--c", type=float, default=1.0)
    s.set_defaults(func=cmd_report)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = load_constants(args.constants)
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        return args.func(args, cfg)
    except (UsageError, InvalidArgument, OSError) as exc:
        sys.stderr.write(f"sqdiff {args.command}: {exc}\n")
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except (ResourceError, ScaleError, SqdiffError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
