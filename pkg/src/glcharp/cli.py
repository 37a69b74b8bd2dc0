"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 parse/usage error or unknown suite,
3 domain error, 4 cutoff or resource limit, 5 bounded search exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import signal
import sys
from typing import List, Optional

from . import dist, harness, schur
from .combinatorics import as_ctx
from .descriptors import parse_family
from .evaluation import CutoffError
from .glideals import (
    DomainError,
    ParseError,
    SearchExhausted,
    evaluate_ideal,
    format_ideal,
    gl_radical,
    hilbert_function,
    ideal_contains,
    ideal_member,
    is_gl_prime,
    non_primality_witness,
    parse_ideal,
    parse_monomial,
)
from .homology import InvariantViolation, detect_lines, koszul_tor, periodic_tor, tor_bound_degree

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN, EXIT_CUTOFF, EXIT_EXHAUSTED = 0, 1, 2, 3, 4, 5

ENV_PREFIX = "GLCHARP_"


class UsageError(Exception):
    pass


def _fmt_monomial(a) -> str:
    parts = [f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(a) if e]
    return "*".join(parts) or "1"


def _n_values(args) -> List[int]:
    if args.n_range:
        try:
            a, b = (int(x) for x in args.n_range.split(".."))
        except ValueError:
            raise UsageError(f"--n-range expects a..b, got {args.n_range!r}") from None
        if a < 0 or b < a:
            raise UsageError("--n-range needs 0 <= a <= b")
        return list(range(a, b + 1))
    if args.n is None:
        raise UsageError("give --n or --n-range")
    return [args.n]


def _emit(args, text: str, payload):
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, default=str))
    else:
        print(text)


# ---------------------------------------------------------------------------
# commands


def cmd_ideal(args) -> int:
    p = args.p
    I = parse_ideal(args.expr, p)
    sub, extra = args.sub, args.args
    need = {"canon": 0, "radical": 0, "prime": 0, "member": 1, "contains": 1, "eval": 2, "hilbert": 2}
    if sub not in need:
        raise UsageError(f"unknown ideal subcommand {sub!r}")
    if len(extra) != need[sub]:
        raise UsageError(f"{sub} takes {need[sub]} argument(s)")
    payload = {"ideal": format_ideal(I), "p": p, "subcommand": sub}
    if sub == "canon":
        text = format_ideal(I)
        payload["result"] = text
    elif sub == "radical":
        text = format_ideal(gl_radical(I))
        payload["result"] = text
    elif sub == "prime":
        if I.is_unit:
            raise DomainError("the unit ideal is not proper")
        prime = is_gl_prime(I)
        text = f"GL-prime: {str(prime).lower()}"
        payload["result"] = prime
        if not prime:
            f, g = non_primality_witness(I)
            # g is written in variables disjoint from those of f
            g = (0,) * len(f) + tuple(g)
            payload["witness"] = [_fmt_monomial(f), _fmt_monomial(g)]
            text += f"\nwitness: {_fmt_monomial(f)} , {_fmt_monomial(g)} (neither in the ideal, product is)"
    elif sub == "member":
        val = ideal_member(parse_monomial(extra[0]), I)
        text = str(val).lower()
        payload["result"] = val
    elif sub == "contains":
        J = parse_ideal(extra[0], p)
        val = ideal_contains(I, J)
        text = str(val).lower()
        payload["result"] = val
    elif sub == "eval":
        n, d = int(extra[0]), int(extra[1])
        if n < 1 or d < 0:
            raise DomainError("eval needs n >= 1 and dmax >= 0")
        gens = sorted(evaluate_ideal(I, n, d), key=lambda a: (sum(a), tuple(-x for x in a)))
        mons = [_fmt_monomial(a) for a in gens]
        text = "\n".join(mons) if mons else "(none)"
        payload["result"] = mons
    else:
        n, d = int(extra[0]), int(extra[1])
        if n < 1 or d < 0:
            raise DomainError("hilbert needs n >= 1 and d >= 0")
        val = hilbert_function(I, n, d)
        text = str(val)
        payload["result"] = val
    _emit(args, text, payload)
    return EXIT_OK


def cmd_betti(args) -> int:
    fam = parse_family(args.descriptor, args.p, args.q)
    out_json, out_text, out_csv = [], [], []
    for n in _n_values(args):
        M = fam.eval(n)
        i_max = args.imax
        if fam.q is None:
            j_max = args.jmax if args.jmax is not None else n
            table = koszul_tor(M, i_max, j_max)
        else:
            j_max = args.jmax if args.jmax is not None else tor_bound_degree(M, i_max)
            table = periodic_tor(M, i_max, j_max)
        t = table.t_sequence()
        sl = str(table.slope()) if not table.is_zero() and t[0] >= 0 else None
        cover = detect_lines(table)
        lines = [[str(s), str(c)] for s, c in cover.lines]
        d = table.to_dict()
        d.update({"t": t, "slope": sl, "lines": lines, "descriptor": fam.descriptor})
        out_json.append(d)
        out_text.append(f"{fam.descriptor}  n={n}  (rows j-i, * = stable)\n{table.render()}\n"
                        f"t: {t}\nslope: {sl}\nlines: " +
                        (", ".join(f"r = {s}*i + {c}" for s, c in lines) or "(none)"))
        out_csv.append("".join(f"{n},{row}\n" for row in table.to_csv().splitlines()[1:]))
    if args.format == "json":
        print(json.dumps(out_json, sort_keys=True))
    elif args.format == "csv":
        sys.stdout.write("n,i,j,dim,stable\n" + "".join(out_csv))
    else:
        print("\n\n".join(out_text))
    return EXIT_OK


def cmd_shift_experiment(args) -> int:
    if args.q is None:
        raise UsageError("shift-experiment needs --q")
    fam = parse_family(args.descriptor, args.p, args.q)
    n_set = _n_values(args) if (args.n is not None or args.n_range) else [2, 3]
    rep = schur.shift_until_flat(fam, args.q, args.lmax, n_set)
    lines = []
    for step in rep["steps"]:
        for n, e in sorted(step["per_n"].items()):
            lines.append(f"l={step['l']} n={n} flat={str(e['flat']).lower()} t0={e['t0']} t1={e['t1']} "
                         f"slope={e['slope']} torsion_free={str(e['torsion_free']).lower()}")
    if rep["status"] == "flat":
        lines.append(f"minimal flat step: l = {rep['minimal_l']}")
    else:
        lines.append(f"inconclusive at lmax = {args.lmax}")
    _emit(args, "\n".join(lines), rep)
    return EXIT_OK if rep["status"] == "flat" else EXIT_EXHAUSTED


def cmd_s_shift(args) -> int:
    fam = parse_family(args.descriptor, args.p, None)
    n_set = _n_values(args) if (args.n is not None or args.n_range) else [4, 5, 6]
    rep = harness.s_shift_experiment(fam, args.q or args.p, args.mmax, n_set)
    lines = [f"m={s['m']} n={n} flat={str(e['flat']).lower()}" for s in rep["steps"] for n, e in sorted(s["per_n"].items())]
    lines.append(f"minimal flat slice: m = {rep['minimal_m']}" if rep["status"] == "flat"
                 else f"inconclusive at mmax = {args.mmax}")
    _emit(args, "\n".join(lines), rep)
    return EXIT_OK if rep["status"] == "flat" else EXIT_EXHAUSTED


def cmd_orbit(args) -> int:
    seeds = [parse_monomial(s) for s in args.monomials]
    if args.n is None:
        raise UsageError("orbit needs --n")
    n = args.n
    if any(len(a) > n for a in seeds):
        raise DomainError("a seed uses more than n variables")
    seeds = [a + (0,) * (n - len(a)) for a in seeds]
    degs = {sum(a) for a in seeds}
    if len(degs) != 1:
        raise DomainError("seeds must share one degree")
    d = degs.pop()
    polys = [dist.PolyFp.monomial(a, args.p) for a in seeds]
    basis = dist.gln_submodule_closure(polys, d, n, args.p, cap=args.cap)
    mons = [_fmt_monomial(a) for a in basis]
    _emit(args, f"dimension: {len(mons)}\n" + "\n".join(mons),
          {"p": args.p, "n": n, "degree": d, "dimension": len(mons), "basis": mons})
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        rep = harness.run_suite(args.suite, seed=args.seed)
    except harness.UnknownSuite:
        print(f"unknown suite {args.suite!r}; known: {', '.join(harness.suite_names())}", file=sys.stderr)
        return EXIT_USAGE
    text = "\n".join(f"{e['status']:>8}  {e['id']}" for e in rep["entries"])
    text += f"\n{rep['suite']}: {rep['passed']} passed, {rep['failed']} failed, {rep['resource']} resource"
    _emit(args, text, rep)
    return EXIT_OK if rep["failed"] == 0 and rep["resource"] == 0 else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument handling


def _env(name: str, cast, default=None):
    val = os.environ.get(ENV_PREFIX + name)
    return default if val is None else cast(val)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=_env("P", int, 2), help="characteristic (prime)")
    common.add_argument("--q", type=int, default=_env("Q", int), help="Frobenius exponent q = p^r; work over S/m^[q]")
    common.add_argument("--n", type=int, default=_env("N", int), help="number of variables")
    common.add_argument("--n-range", dest="n_range", default=_env("N_RANGE", str), help="a..b")
    common.add_argument("--imax", type=int, default=_env("IMAX", int, 8))
    common.add_argument("--jmax", type=int, default=_env("JMAX", int))
    common.add_argument("--lmax", type=int, default=_env("LMAX", int, 12))
    common.add_argument("--format", choices=("text", "json", "csv"), default=_env("FORMAT", str, "text"))
    common.add_argument("--seed", type=int, default=_env("SEED", int, 0))
    common.add_argument("--limit-mem", dest="limit_mem", type=int, default=_env("LIMIT_MEM", int),
                        help="address-space limit in MB")
    common.add_argument("--limit-time", dest="limit_time", type=int, default=_env("LIMIT_TIME", int),
                        help="wall-clock limit in seconds")

    ap = argparse.ArgumentParser(prog="glcharp", description="GL-equivariant commutative algebra in characteristic p")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ideal", parents=[common], help="GL-ideal calculus")
    s.add_argument("expr")
    s.add_argument("sub", help="canon | radical | prime | member | contains | eval | hilbert")
    s.add_argument("args", nargs="*")
    s.set_defaults(func=cmd_ideal)

    s = sub.add_parser("betti", parents=[common], help="Betti tables of a module family")
    s.add_argument("descriptor")
    s.set_defaults(func=cmd_betti)

    s = sub.add_parser("shift-experiment", parents=[common], help="iterate the Sm shift until flat")
    s.add_argument("descriptor")
    s.set_defaults(func=cmd_shift_experiment)

    s = sub.add_parser("s-shift", parents=[common], help="Hasse-Schur slices of an S-module until flat")
    s.add_argument("descriptor")
    s.add_argument("--mmax", type=int, default=_env("MMAX", int, 8))
    s.set_defaults(func=cmd_s_shift)

    s = sub.add_parser("orbit", parents=[common], help="GL_n-submodule generated by monomials")
    s.add_argument("monomials", nargs="+")
    s.add_argument("--cap", type=int, default=_env("CAP", int, 200000))
    s.set_defaults(func=cmd_orbit)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite")
    s.set_defaults(func=cmd_verify)
    return ap


class TimeLimitReached(Exception):
    """Wall-clock limit hit; deliberately not a CutoffError so suites cannot absorb it."""


def _alarm(signum, frame):
    raise TimeLimitReached("time limit reached")


def _validate(args):
    try:
        as_ctx(args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.q is not None and (not as_ctx(args.p).is_power(args.q) or args.q < args.p):
        raise DomainError(f"q={args.q} is not p^r with r >= 1")
    for name in ("imax", "lmax"):
        if getattr(args, name) is not None and getattr(args, name) < 0:
            raise UsageError(f"--{name} must be nonnegative")
    if args.n is not None and args.n < 0:
        raise UsageError("--n must be nonnegative")


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.limit_mem:
        import resource

        lim = args.limit_mem * 1024 * 1024
        resource.setrlimit(resource.RLIMIT_AS, (lim, lim))
    if args.limit_time:
        signal.signal(signal.SIGALRM, _alarm)
        signal.alarm(args.limit_time)
    try:
        _validate(args)
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (CutoffError, MemoryError, dist.ClosureCapExceeded, TimeLimitReached) as exc:
        partial = getattr(exc, "partial", None)
        print(f"cutoff: {exc}", file=sys.stderr)
        if partial is not None:
            print(f"partial: {partial}", file=sys.stderr)
        return EXIT_CUTOFF
    except SearchExhausted as exc:
        print(f"search exhausted: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    finally:
        if args.limit_time:
            signal.alarm(0)


if __name__ == "__main__":
    sys.exit(main())
