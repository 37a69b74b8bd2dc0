"""A small registry language naming module families.

    S                  the ring R (R = S, or S/m^[q] when q is given)
    S/<ideal>          R / I
    ideal:<ideal>      I as an R-module
    ideal:<I>/<J>      I / J
    free:d1,d2,...     R (x) (Sym^d1 + Sym^d2 + ...)
    frob:r             R (x) V^(r), V the standard representation
    k                  the residue field
    delta(q, X)        Delta(X) with X built over S/m^[q]
    shift(q, X)        Sh_{q/p}(X) with X built over S/m^[q]
    gamma(q, X)        torsion submodule of X over S/m^[q]
    kernel(q, X)       kernel of the natural map X -> Sh(X)
    slice(m, X)        Hasse-Schur slice Sh_m(X)
"""

from __future__ import annotations

import re
from typing import Optional

from .combinatorics import as_ctx
from .evaluation import (
    Family,
    FreeFamily,
    SymRep,
    frobenius_standard,
    ideal_family,
    quotient_family,
    residue_field,
    ring_family,
)
from .glideals import DomainError, ParseError, parse_ideal

_FUNCTORS = ("delta", "shift", "gamma", "kernel", "slice")


def _split_args(body: str, pos: int):
    depth = 0
    for k, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            return body[:k].strip(), body[k + 1:].strip()
    raise ParseError("expected two comma-separated arguments", pos)


def _check_q(p: int, q: int, pos: int):
    ctx = as_ctx(p)
    if not ctx.is_power(q) or q < p:
        raise DomainError(f"q={q} is not p^r with r >= 1 for p={p}")


def parse_family(text: str, p: int, q: Optional[int] = None) -> Family:
    from . import schur

    s = text.strip()
    m = re.fullmatch(r"(\w+)\s*\((.*)\)", s, flags=re.S)
    if m and m.group(1) in _FUNCTORS:
        name, body = m.group(1), m.group(2)
        a, b = _split_args(body, len(name) + 1)
        try:
            val = int(a)
        except ValueError:
            raise ParseError(f"expected an integer, got {a!r}", len(name) + 1) from None
        if name == "slice":
            if val < 0:
                raise DomainError("slice index must be nonnegative")
            return schur.hasse_schur(parse_family(b, p, q), val)
        _check_q(p, val, len(name) + 1)
        inner = parse_family(b, p, val)
        return {"delta": schur.delta, "shift": schur.sm_shift, "gamma": schur.gamma,
                "kernel": schur.kq}[name](inner, val)
    if s == "S":
        return ring_family(p, q)
    if s == "k":
        return residue_field(p, q)
    if s.startswith("S/"):
        return quotient_family(parse_ideal(s[2:], p), q)
    if s.startswith("ideal:"):
        body = s[len("ideal:"):]
        depth = 0
        cut = None
        for k, ch in enumerate(body):
            depth += ch == "("
            depth -= ch == ")"
            if ch == "/" and depth == 0:
                cut = k
        if cut is None:
            return ideal_family(parse_ideal(body, p), q=q)
        return ideal_family(parse_ideal(body[:cut], p), parse_ideal(body[cut + 1:], p), q=q)
    if s.startswith("free:"):
        try:
            degs = [int(x) for x in s[5:].split(",")]
        except ValueError:
            raise ParseError("free: expects comma-separated degrees", 5) from None
        if any(d < 0 for d in degs):
            raise DomainError("degrees must be nonnegative")
        return FreeFamily(p, q, [SymRep(d) for d in degs], descriptor=s)
    if s.startswith("frob:"):
        try:
            r = int(s[5:])
        except ValueError:
            raise ParseError("frob: expects an integer", 5) from None
        if r < 0:
            raise DomainError("Frobenius exponent must be nonnegative")
        return FreeFamily(p, q, [frobenius_standard(p, r)], descriptor=s)
    raise ParseError(f"unknown module descriptor {s!r}", 0)
