"""Command-line front end.

Every subcommand prints one JSON document on standard output.  Exit codes:
0 success / verification passed, 1 verification failed (the JSON carries the
counterexample), 2 usage or input error (the JSON is an error object).
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone

from . import indices as idx
from .cache import ENV_CACHE_PATH, cache_from_env
from .counting import CountEngine
from .expansion import (DomainError, FourierExpansion, SiegelPoint, evaluate,
                        siegel_operator)
from .fay import DegenerationData, fay_check
from .lattices import UnsupportedLatticeError, lattice_by_id, \
    short_vector_shells
from .schottky import first_nonzero_index, nonzero_report, verify_vanishing
from .theta import default_norm_budget, theta_eval, theta_expansion

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Bad command-line input or malformed input file."""


def _emit(doc: dict):
    doc = dict(doc)
    doc["generated_at"] = datetime.now(timezone.utc).isoformat()
    json.dump(doc, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def parse_tau(text: str, g: int) -> SiegelPoint:
    """Parse a tau argument: either a complex scalar z (meaning z * identity)
    or a JSON matrix of [re, im] pairs.

    Scalar grammar: [real [+|-]] imag "i", e.g. "i", "1.2i", "0.3+1.2i".
    """
    text = text.strip()
    if text.startswith("["):
        try:
            rows = json.loads(text)
            tau = tuple(tuple(complex(float(e[0]), float(e[1])) for e in row)
                        for row in rows)
        except (ValueError, TypeError, IndexError) as exc:
            raise UsageError(f"bad tau matrix: {exc}") from None
        return SiegelPoint(g, tau)
    try:
        z = complex(text.replace("i", "j").replace(" ", ""))
    except ValueError:
        raise UsageError(f"bad tau expression {text!r}") from None
    return SiegelPoint.scalar(g, z)


def _lattice(name: str):
    try:
        return lattice_by_id(name)
    except UnsupportedLatticeError as exc:
        raise UsageError(str(exc)) from None


def _read_doc(path: str) -> dict:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read JSON from {path!r}: {exc}") from None


# -- subcommands -----------------------------------------------------------


def cmd_lattice_enum(args, cache) -> int:
    lat = _lattice(args.lattice)
    shells = short_vector_shells(lat, args.max_norm)
    doc = {
        "command": "lattice-enum",
        "lattice": lat.name,
        "rank": lat.rank,
        "max_norm": args.max_norm,
        "shell_sizes": {str(m): int(len(v)) for m, v in shells.items()},
    }
    if args.vectors:
        doc["vectors"] = {str(m): [[int(c) for c in row] for row in v]
                          for m, v in shells.items()}
    _emit(doc)
    return EXIT_OK


def cmd_theta_coeffs(args, cache) -> int:
    lat = _lattice(args.lattice)
    f = theta_expansion(lat, args.genus, args.max_trace, cache=cache,
                        workers=args.workers)
    doc = f.to_json()
    doc["command"] = "theta-coeffs"
    doc["lattice"] = lat.name
    _emit(doc)
    return EXIT_OK


def cmd_siegel_phi(args, cache) -> int:
    try:
        f = FourierExpansion.from_json(_read_doc(args.input))
        phi = siegel_operator(f)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad expansion document: {exc}") from None
    doc = phi.to_json()
    doc["command"] = "siegel-phi"
    _emit(doc)
    return EXIT_OK


def cmd_schottky_verify(args, cache) -> int:
    if args.genus <= 3:
        rep = verify_vanishing(args.genus, args.max_trace, cache=cache,
                               workers=args.workers)
        rep["command"] = "schottky-verify"
        _emit(rep)
        return EXIT_OK if rep["status"] == "pass" else EXIT_FAIL
    rep = nonzero_report(args.genus, args.max_trace, cache=cache,
                         workers=args.workers)
    first = first_nonzero_index(args.genus, args.max_trace, cache=cache,
                                workers=args.workers)
    rep["command"] = "schottky-verify"
    # from genus 4 on the expected outcome is a nonzero difference
    rep["status"] = "pass" if first is not None else "fail"
    if first is not None:
        s, v = first
        rep["first_nonzero"] = {"S": idx.upper_triangle(s), "a": str(v)}
    _emit(rep)
    return EXIT_OK if first is not None else EXIT_FAIL


def cmd_eval(args, cache) -> int:
    lat = _lattice(args.lattice)
    point = parse_tau(args.tau, args.genus)
    budget = args.budget if args.budget is not None \
        else default_norm_budget(args.max_trace)
    f = theta_expansion(lat, args.genus, args.max_trace, cache=cache,
                        workers=args.workers)
    from_series = evaluate(f, point, precision=args.precision)
    direct = theta_eval(lat, args.genus, point, budget)
    a, b = complex(from_series.value), complex(direct.value)
    diff = abs(a - b)
    scale = max(abs(a), abs(b), 1e-300)
    rel = diff / scale
    passed = rel <= args.tolerance
    _emit({
        "command": "eval",
        "lattice": lat.name,
        "genus": args.genus,
        "max_trace": args.max_trace,
        "norm_budget": budget,
        "value": [a.real, a.imag],
        "direct_value": [b.real, b.imag],
        "series_tail_estimate": from_series.tail_estimate,
        "direct_tail_estimate": direct.tail_estimate,
        "rel_difference": rel,
        "tolerance": args.tolerance,
        "status": "pass" if passed else "fail",
    })
    return EXIT_OK if passed else EXIT_FAIL


def cmd_fay_check(args, cache) -> int:
    try:
        data = DegenerationData.from_json(_read_doc(args.input))
    except (ValueError, KeyError, TypeError, DomainError) as exc:
        raise UsageError(f"bad degeneration-data document: {exc}") from None
    g = data.g
    max_trace = args.max_trace if args.max_trace is not None \
        else (8 if g <= 2 else 6)
    lat = _lattice(args.lattice)
    f = theta_expansion(lat, g, max_trace, cache=cache, workers=args.workers)
    f_next = theta_expansion(lat, g + 1, max_trace, cache=cache,
                             workers=args.workers)
    rep = fay_check(data, f, f_next=f_next)
    rep["command"] = "fay-check"
    rep["lattice"] = lat.name
    rep["max_trace"] = max_trace
    _emit(rep)
    return EXIT_OK if rep["status"] == "pass" else EXIT_FAIL


def cmd_cache_stats(args, cache) -> int:
    doc = cache.stats()
    doc["command"] = "cache-stats"
    if args.verify_cache:
        def recompute(lattice_id, key):
            rec = json.loads(key)
            target = idx.from_upper_triangle(rec["g"], rec["u"])
            # fresh engine without the cache: forces real recomputation
            return CountEngine(_lattice(lattice_id)).count(target)
        mismatches = cache.verify_sample(recompute, fraction=args.fraction)
        doc["verified_fraction"] = args.fraction
        doc["mismatches"] = mismatches
        _emit(doc)
        return EXIT_OK if not mismatches else EXIT_FAIL
    _emit(doc)
    return EXIT_OK


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="schottky-workbench",
        description="Siegel theta series, the Schottky form, and "
                    "first-order period-matrix degenerations.")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, genus=True, trace=True):
        p.add_argument("--cache", default=None,
                       help=f"cache file path (default: ${ENV_CACHE_PATH})")
        p.add_argument("--workers", type=int, default=0,
                       help="worker threads for counting (0 = serial)")
        if genus:
            p.add_argument("--genus", type=int, required=True)
        if trace:
            p.add_argument("--max-trace", type=int, required=True)

    p = sub.add_parser("lattice-enum", help="enumerate short vectors by norm")
    p.add_argument("--lattice", required=True)
    p.add_argument("--max-norm", type=int, required=True)
    p.add_argument("--vectors", action="store_true",
                   help="include the coordinate lists, not just shell sizes")
    common(p, genus=False, trace=False)
    p.set_defaults(func=cmd_lattice_enum)

    p = sub.add_parser("theta-coeffs", help="exact theta Fourier coefficients")
    p.add_argument("--lattice", required=True)
    common(p)
    p.set_defaults(func=cmd_theta_coeffs)

    p = sub.add_parser("siegel-phi",
                       help="apply the Siegel operator to an expansion file")
    p.add_argument("--input", required=True, help="expansion JSON ('-' stdin)")
    common(p, genus=False, trace=False)
    p.set_defaults(func=cmd_siegel_phi)

    p = sub.add_parser("schottky-verify",
                       help="check vanishing (g <= 3) or locate the first "
                            "nonzero coefficient (g >= 4)")
    common(p)
    p.set_defaults(func=cmd_schottky_verify)

    p = sub.add_parser("eval",
                       help="evaluate a theta series two ways and compare")
    p.add_argument("--lattice", required=True)
    p.add_argument("--tau", required=True,
                   help='scalar like "i", "1.2i", "0.3+1.2i" (times the '
                        'identity) or a JSON matrix of [re,im] pairs')
    p.add_argument("--budget", type=int, default=None,
                   help="norm budget of the direct sum (default 2*max_trace+4)")
    p.add_argument("--precision", type=int, default=None,
                   help="decimal digits for high-precision series evaluation")
    p.add_argument("--tolerance", type=float, default=1e-8)
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("fay-check",
                       help="run all degeneration checks on a data file")
    p.add_argument("--input", required=True,
                   help="degeneration-data JSON ('-' stdin)")
    p.add_argument("--lattice", default="E8",
                   help="theta series used as the test form (default E8)")
    p.add_argument("--max-trace", type=int, default=None)
    common(p, genus=False, trace=False)
    p.set_defaults(func=cmd_fay_check)

    p = sub.add_parser("cache-stats", help="cache statistics and spot checks")
    p.add_argument("--verify-cache", action="store_true",
                   help="recompute a random sample of cached counts")
    p.add_argument("--fraction", type=float, default=0.01)
    common(p, genus=False, trace=False)
    p.set_defaults(func=cmd_cache_stats)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    cache = cache_from_env(args.cache)
    try:
        return args.func(args, cache)
    except UsageError as exc:
        json.dump({"error": str(exc)}, sys.stdout, indent=2)
        sys.stdout.write("\n")
        return EXIT_USAGE
    except (ValueError, KeyError, DomainError) as exc:
        json.dump({"error": f"{type(exc).__name__}: {exc}"}, sys.stdout,
                  indent=2)
        sys.stdout.write("\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
