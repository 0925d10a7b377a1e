"""Command-line entry point: ``hforge <subcommand>``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import catalog
from .assembly import calibrate_border_scheme, read_matrix
from .constructions import admissible_q_list, build_family, derive_params
from .cyclotomy import cyclotomic_numbers_bruteforce, cyclotomic_numbers_formula, make_cyclo_ctx
from .errors import HForgeError, ParseError
from .group_ring import read_family, write_family
from .verification import check_difference_family, infer_lambda, verify_hadamard


def _emit(args, pairs: dict) -> None:
    if args.machine:
        for k, v in pairs.items():
            print(f"{k}={v}")
    else:
        width = max(len(k) for k in pairs)
        for k, v in pairs.items():
            print(f"{k:<{width}}  {v}")


def _ints(xs) -> str:
    return ",".join(str(x) for x in xs)


def cmd_list_q(args) -> int:
    qs = admissible_q_list(args.max)
    if args.machine:
        print(f"count={len(qs)}")
        print(f"values={_ints(qs)}")
    else:
        print("\n".join(str(q) for q in qs))
    return 0


def cmd_params(args) -> int:
    p = derive_params(args.q)
    _emit(
        args,
        {
            "q": p.qv,
            "c": p.c,
            "m": p.m,
            "a": p.rep.a,
            "b": p.rep.b_signed,
            "I": _ints(p.I),
            "y": p.y,
            "J1": _ints(p.J1),
            "J2": _ints(p.J2),
        },
    )
    return 0


def cmd_cyclo(args) -> int:
    p = derive_params(args.q)
    ctx = make_cyclo_ctx(args.q)
    brute = cyclotomic_numbers_bruteforce(ctx, 8).rows()
    formula = cyclotomic_numbers_formula(args.q, p.rep).rows()
    if args.machine:
        print(f"a={p.rep.a}")
        print(f"b={p.rep.b_signed}")
        for row in brute:
            print(" ".join(map(str, row)))
        for row in formula:
            print(" ".join(map(str, row)))
        print(f"match={int(brute == formula)}")
        return 0
    print(f"{ctx.field.header()}  omega={ctx.field.coeffs(ctx.field.omega)}")
    print(f"q^2 = a^2 + 2b^2 with a={p.rep.a}, b={p.rep.b_signed} (sign fitted)")
    w = max(len(str(x)) for row in brute + formula for x in row)
    print(f"{'brute force':<{8 * (w + 1)}}   formula")
    for rb, rf in zip(brute, formula):
        left = " ".join(f"{x:>{w}}" for x in rb)
        right = " ".join(f"{x:>{w}}" for x in rf)
        print(f"{left}   {right}")
    print("tables agree" if brute == formula else "TABLES DIFFER")
    return 0 if brute == formula else 1


def cmd_build_family(args) -> int:
    cache = catalog.resolve_cache(args.cache)
    fam = build_family(args.q)
    out = Path(args.out) if args.out else catalog.family_path(cache, args.q)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_family(out, fam.ctx, fam.blocks)
    v, ks, lam = fam.declared
    _emit(args, {"path": out, "v": v, "k": _ints(ks), "lambda": lam})
    return 0


def cmd_verify_family(args) -> int:
    try:
        ctx, blocks = read_family(args.file)
    except (ParseError, OSError) as exc:
        print(f"ERROR parse {exc}", file=sys.stderr)
        return 2
    lam = infer_lambda(ctx.order, blocks)
    if lam is None:
        rep = check_difference_family(ctx, blocks, -1)
        rep.passed, rep.details = False, {"reason": "difference count not divisible by |G|-1"}
    else:
        ks = [len(b) for b in blocks]
        rep = check_difference_family(ctx, blocks, lam, subject=f"DF({ctx.order};{_ints(ks)};{lam})")
    print(rep.line(args.machine))
    return 0 if rep.passed else 1


def cmd_build_hadamard(args) -> int:
    entry, path = catalog.run_pipeline(args.q, args.method, args.cache)
    order = entry.hadamard_order_gs if args.method == "gs" else entry.hadamard_order_ww
    if args.out:
        Path(args.out).write_bytes(path.read_bytes())
        path = Path(args.out)
    _emit(args, {"path": path, "order": order, "verified": int(getattr(entry, f"{args.method}_verified"))})
    return 0


def cmd_verify_hadamard(args) -> int:
    try:
        M = read_matrix(args.file)
    except (ParseError, OSError) as exc:
        print(f"ERROR parse {exc}", file=sys.stderr)
        return 2
    rep = verify_hadamard(M)
    print(rep.line(args.machine))
    return 0 if rep.passed else 1


def cmd_sieve(args) -> int:
    form, mod8 = catalog.sieve_counts(args.max)
    _emit(args, {"max": args.max, "count_form": form, "count_3mod8": mod8})
    return 0


def cmd_conjecture_scan(args) -> int:
    hits = catalog.conjecture_scan(args.max)
    if args.machine:
        print(f"hits={len(hits)}")
    for c, v, p, alpha in hits:
        print(f"c={c} value={v} = {p}^{alpha}")
    if not hits and not args.machine:
        print(f"no proper prime powers of the form 12c^2+4c+3 below {args.max}")
    return 0


def cmd_calibrate(args) -> int:
    cache = catalog.resolve_cache(args.cache)
    path = cache / catalog.CALIBRATION_FILE
    schemes = calibrate_border_scheme(build_family(3), cache_path=path)
    _emit(args, {"schemes": len(schemes), "first": schemes[0].line(), "cache": path})
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hforge", description="Difference families and Hadamard matrices of order 4(2q^2+1).")
    ap.add_argument("--cache", help="cache directory (default: $HFORGE_CACHE or ./.hforge)")
    ap.add_argument("--machine", action="store_true", help="key=value output")
    ap.add_argument("-v", "--verbose", action="store_true", help="log pipeline stages")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list-q", help="admissible q below a bound")
    p.add_argument("--max", type=int, required=True)
    p.set_defaults(fn=cmd_list_q)

    p = sub.add_parser("params", help="derived parameters for q")
    p.add_argument("q", type=int)
    p.set_defaults(fn=cmd_params)

    p = sub.add_parser("build-family", help="write the four-block family for q")
    p.add_argument("q", type=int)
    p.add_argument("-o", "--out")
    p.set_defaults(fn=cmd_build_family)

    p = sub.add_parser("verify-family", help="check a family file")
    p.add_argument("file")
    p.set_defaults(fn=cmd_verify_family)

    p = sub.add_parser("build-hadamard", help="build and verify a Hadamard matrix")
    p.add_argument("q", type=int)
    p.add_argument("--method", choices=("gs", "ww"), default="ww")
    p.add_argument("-o", "--out")
    p.set_defaults(fn=cmd_build_hadamard)

    p = sub.add_parser("verify-hadamard", help="check a matrix file")
    p.add_argument("file")
    p.set_defaults(fn=cmd_verify_hadamard)

    p = sub.add_parser("cyclo", help="order-8 cyclotomic numbers, brute force vs closed form")
    p.add_argument("q", type=int)
    p.set_defaults(fn=cmd_cyclo)

    p = sub.add_parser("sieve", help="prime-power counts below a bound")
    p.add_argument("--max", type=int, required=True)
    p.set_defaults(fn=cmd_sieve)

    p = sub.add_parser("conjecture-scan", help="search for proper prime powers 12c^2+4c+3")
    p.add_argument("--max", type=int, required=True)
    p.set_defaults(fn=cmd_conjecture_scan)

    p = sub.add_parser("calibrate", help="search border schemes on the q=3 family")
    p.set_defaults(fn=cmd_calibrate)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.fn(args)
    except HForgeError as exc:
        print(f"ERROR {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
