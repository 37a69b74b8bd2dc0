"""GL-stable monomial ideals of k[x1, x2, ...] encoded by digit vectors.

A digit vector b = (b0, b1, ..., bj) stands for the product ideal

    I(b) = m^b0 (m^[p])^b1 ... (m^[p^j])^bj

and a GLIdeal is a finite sum of such products, kept as a containment antichain.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

from .combinatorics import as_ctx, digits, orbit_size, partitions_of, sorted_weight


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class SearchExhausted(RuntimeError):
    """A bounded search ended without an answer; not a proof of nonexistence."""


@dataclass(frozen=True)
class DigitVector:
    b: tuple = ()

    def __post_init__(self):
        b = [int(x) for x in self.b]
        if any(x < 0 for x in b):
            raise ValueError("digit vector entries are nonnegative")
        while b and b[-1] == 0:
            b.pop()
        object.__setattr__(self, "b", tuple(b))

    @property
    def is_unit(self) -> bool:
        return not self.b

    @property
    def level(self) -> int:
        """Largest m with b_m > 0 (-1 for the unit token)."""
        return len(self.b) - 1

    def degree(self, p: int) -> int:
        return sum(x * p**m for m, x in enumerate(self.b))

    @property
    def weight(self) -> int:
        """Total number of Frobenius-power factors."""
        return sum(self.b)

    def __add__(self, other: "DigitVector") -> "DigitVector":
        n = max(len(self.b), len(other.b))
        a = self.b + (0,) * (n - len(self.b))
        c = other.b + (0,) * (n - len(other.b))
        return DigitVector(tuple(x + y for x, y in zip(a, c)))

    def divides(self, other) -> bool:
        """Componentwise b <= c, i.e. I(c) is a multiple of I(b)."""
        n = max(len(self.b), len(other.b))
        a = self.b + (0,) * (n - len(self.b))
        c = other.b + (0,) * (n - len(other.b))
        return all(x <= y for x, y in zip(a, c))

    def __getitem__(self, m):
        return self.b[m] if m < len(self.b) else 0


def dv(*b) -> DigitVector:
    return DigitVector(tuple(b))


def orbit_ideal(lam: Sequence[int], ctx) -> DigitVector:
    """Digit vector of the GL-ideal generated by the monomial x^lam."""
    p = as_ctx(ctx).p
    lam = sorted_weight(lam)
    if not lam:
        warnings.warn("constant monomial generates the unit ideal")
        return DigitVector(())
    b: list[int] = []
    for a in lam:
        for m, d in enumerate(digits(a, p)):
            while len(b) <= m:
                b.append(0)
            b[m] += d
    return DigitVector(tuple(b))


def canonical_generator(b: DigitVector, ctx) -> tuple:
    """Monomial using b_m fresh variables raised to p^m, sorted descending."""
    p = as_ctx(ctx).p
    out = []
    for m in range(len(b.b) - 1, -1, -1):
        out.extend([p**m] * b.b[m])
    return tuple(out)


@lru_cache(maxsize=1 << 20)
def _member_sorted(lam: tuple, c: tuple, p: int) -> bool:
    sizes = [p**m for m in range(len(c))]
    need = sum(x * s for x, s in zip(c, sizes))
    lam = tuple(min(a, need) for a in lam)
    if sum(lam) < need:
        return False
    suffix = [0] * (len(lam) + 1)
    for i in range(len(lam) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + lam[i]
    levels = len(c)

    @lru_cache(maxsize=None)
    def solve(i: int, res: tuple) -> bool:
        demand = sum(x * s for x, s in zip(res, sizes))
        if demand == 0:
            return True
        if i == len(lam) or suffix[i] < demand:
            return False
        cap = lam[i]
        # choose how many items of each level variable i absorbs, top level first
        def choices(m: int, room: int, acc: list) -> Iterator[tuple]:
            if m < 0:
                yield tuple(acc)
                return
            top = min(res[m], room // sizes[m])
            for a in range(top, -1, -1):
                acc[m] = a
                yield from choices(m - 1, room - a * sizes[m], acc)
            acc[m] = 0

        for a in choices(levels - 1, cap, [0] * levels):
            if solve(i + 1, tuple(r - x for r, x in zip(res, a))):
                return True
        return False

    return solve(0, c)


def monomial_in_product(lam: Sequence[int], c: DigitVector, ctx) -> bool:
    """Is x^lam in the product ideal I(c)?"""
    p = as_ctx(ctx).p
    if c.is_unit:
        return True
    return _member_sorted(sorted_weight(lam), c.b, p)


@dataclass(frozen=True)
class GLIdeal:
    """Sum of product ideals I(b), stored as a containment antichain."""

    p: int
    generators: frozenset = frozenset()

    def __post_init__(self):
        as_ctx(self.p)
        gens = frozenset(g if isinstance(g, DigitVector) else DigitVector(tuple(g)) for g in self.generators)
        object.__setattr__(self, "generators", _antichain(gens, self.p))

    @classmethod
    def zero(cls, p: int) -> "GLIdeal":
        return cls(p, frozenset())

    @classmethod
    def unit(cls, p: int) -> "GLIdeal":
        return cls(p, frozenset([DigitVector(())]))

    @classmethod
    def frobenius_power(cls, p: int, r: int) -> "GLIdeal":
        """m^[p^r]."""
        return cls(p, frozenset([DigitVector((0,) * r + (1,))]))

    @classmethod
    def of(cls, p: int, *gens: Sequence[int]) -> "GLIdeal":
        return cls(p, frozenset(DigitVector(tuple(g)) for g in gens))

    @property
    def is_zero(self) -> bool:
        return not self.generators

    @property
    def is_unit(self) -> bool:
        return any(g.is_unit for g in self.generators)

    def sorted_generators(self) -> list[DigitVector]:
        return sorted(self.generators, key=lambda g: (g.degree(self.p), g.b))

    def __add__(self, other: "GLIdeal") -> "GLIdeal":
        return ideal_sum(self, other)

    def __mul__(self, other: "GLIdeal") -> "GLIdeal":
        return ideal_product(self, other)

    def __contains__(self, lam) -> bool:
        return ideal_member(lam, self, self.p)

    def max_degree(self) -> int:
        return max((g.degree(self.p) for g in self.generators), default=0)

    def __str__(self) -> str:
        return format_ideal(self)


def _antichain(gens: frozenset, p: int) -> frozenset:
    if any(g.is_unit for g in gens):
        return frozenset([DigitVector(())])
    gens = sorted(gens, key=lambda g: (g.degree(p), g.b))
    kept: list[DigitVector] = []
    for g in gens:
        # g is dropped when I(g) lies inside I(h) for an already kept h
        if any(monomial_in_product(canonical_generator(g, p), h, p) for h in kept):
            continue
        kept.append(g)
    # a later generator can never contain an earlier one of smaller degree, but equal
    # degrees need a second pass
    final = [g for g in kept if not any(h != g and monomial_in_product(canonical_generator(g, p), h, p) for h in kept)]
    return frozenset(final)


def _check_same_p(I: GLIdeal, J: GLIdeal):
    if I.p != J.p:
        raise ValueError("ideals over different characteristics")


def ideal_member(lam: Sequence[int], I: GLIdeal, ctx=None) -> bool:
    p = I.p if ctx is None else as_ctx(ctx).p
    return any(monomial_in_product(lam, c, p) for c in I.generators)


def ideal_contains(I: GLIdeal, J: GLIdeal, ctx=None) -> bool:
    """Is J a subset of I?"""
    _check_same_p(I, J)
    return all(ideal_member(canonical_generator(c, I.p), I) for c in J.generators)


def ideal_sum(I: GLIdeal, J: GLIdeal) -> GLIdeal:
    _check_same_p(I, J)
    return GLIdeal(I.p, I.generators | J.generators)


def ideal_product(I: GLIdeal, J: GLIdeal) -> GLIdeal:
    _check_same_p(I, J)
    return GLIdeal(I.p, frozenset(b + c for b in I.generators for c in J.generators))


def ideal_power(I: GLIdeal, k: int) -> GLIdeal:
    if k < 0:
        raise ValueError("negative power")
    out = GLIdeal.unit(I.p)
    for _ in range(k):
        out = ideal_product(out, I)
    return out


def gl_radical(I: GLIdeal, ctx=None) -> GLIdeal:
    """The GL-radical m^[p^r], r = least level among the generators."""
    if I.is_zero:
        raise DomainError("radical is (0)")
    if I.is_unit:
        return I
    r = min(g.level for g in I.generators)
    return GLIdeal.frobenius_power(I.p, r)


def radical_oracle(I: GLIdeal, r_max: Optional[int] = None, n0: Optional[int] = None) -> GLIdeal:
    """Least r with (m^[p^r])^N inside I for some N <= n0, by direct containment tests."""
    if I.is_zero:
        raise DomainError("radical is (0)")
    if I.is_unit:
        return I
    p = I.p
    if n0 is None:
        n0 = sum(g.weight for g in I.generators) + 2
    if r_max is None:
        r_max = max(g.level for g in I.generators) + 1
    for r in range(r_max + 1):
        for N in range(1, n0 + 1):
            lam = (p**r,) * N
            if ideal_member(lam, I):
                return GLIdeal.frobenius_power(p, r)
    raise SearchExhausted(f"no power of m^[p^r] with r <= {r_max}, N <= {n0} lies in the ideal")


def is_gl_prime(I: GLIdeal) -> bool:
    if I.is_zero:
        return True
    if len(I.generators) != 1:
        return False
    (g,) = tuple(I.generators)
    return sum(1 for x in g.b if x) == 1 and g.weight == 1


def digit_vectors_up_to(d: int, p: int) -> Iterator[DigitVector]:
    """All nonzero digit vectors of degree at most d."""
    top = 0
    while p ** (top + 1) <= d:
        top += 1

    def rec(m: int, room: int, acc: list):
        if m < 0:
            yield DigitVector(tuple(acc))
            return
        for a in range(room // p**m + 1):
            acc[m] = a
            yield from rec(m - 1, room - a * p**m, acc)
        acc[m] = 0

    if d < 1:
        return
    for b in rec(top, d, [0] * (top + 1)):
        if not b.is_unit:
            yield b


def find_witness(I: GLIdeal, bound: int) -> Optional[tuple]:
    """Search monomials f, g of total degree <= bound with f, g not in I and f*g (disjoint) in I.

    Monomials are searched through their orbit digit vectors, which is exhaustive since
    membership only depends on the GL-orbit.  Returns None when the bounded search is empty.
    """
    p = I.p
    vecs = sorted(digit_vectors_up_to(bound, p), key=lambda b: (b.degree(p), b.b))
    outside = [b for b in vecs if not ideal_member(canonical_generator(b, p), I)]
    for total in range(2, bound + 1):
        for b1 in outside:
            d1 = b1.degree(p)
            if d1 >= total:
                break
            for b2 in outside:
                d2 = b2.degree(p)
                if d1 + d2 > total:
                    break
                if d1 + d2 < total:
                    continue
                if ideal_member(canonical_generator(b1 + b2, p), I):
                    return canonical_generator(b1, p), canonical_generator(b2, p)
    return None


def non_primality_witness(I: GLIdeal, ctx=None, bound: Optional[int] = None) -> Optional[tuple]:
    """Monomials (f, g) outside I whose variable-disjoint product lies in I.

    Returns None for GL-prime ideals.  The default bound is the largest generator degree:
    splitting any generator with at least two Frobenius factors already gives a witness,
    because the generators form a containment antichain.
    """
    if I.is_unit:
        raise DomainError("the unit ideal is not proper")
    if is_gl_prime(I):
        return None
    if bound is None:
        bound = I.max_degree()
    w = find_witness(I, bound)
    if w is None:
        raise SearchExhausted(f"no witness of total degree <= {bound}")
    return w


def disjoint_product(f: Sequence[int], g: Sequence[int]) -> tuple:
    return sorted_weight(tuple(f) + tuple(g))


def _distinct_permutations(w: tuple, n: int) -> Iterator[tuple]:
    padded = list(w) + [0] * (n - len(w))
    from itertools import permutations

    if len(set(padded)) == len(padded):
        yield from permutations(padded)
        return
    seen = set()
    for perm in permutations(padded):
        if perm not in seen:
            seen.add(perm)
            yield perm


def _multiset_permutations(w: tuple, n: int) -> list[tuple]:
    padded = sorted(list(w) + [0] * (n - len(w)))
    out = []

    def rec(counts: dict, acc: list):
        if len(acc) == n:
            out.append(tuple(acc))
            return
        for v in sorted(counts):
            if counts[v]:
                counts[v] -= 1
                acc.append(v)
                rec(counts, acc)
                acc.pop()
                counts[v] += 1

    counts: dict[int, int] = {}
    for v in padded:
        counts[v] = counts.get(v, 0) + 1
    rec(counts, [])
    return out


def evaluate_ideal(I: GLIdeal, n: int, d_max: int, ctx=None) -> set:
    """Minimal monomial generators of I in n variables, up to degree d_max."""
    if n < 1:
        raise ValueError("n >= 1 required")
    out: set = set()
    if I.is_zero:
        return out
    for d in range(d_max + 1):
        for lam in partitions_of(d, max_len=n):
            if not ideal_member(lam, I):
                continue
            minimal = True
            for i in range(len(lam)):
                if i + 1 < len(lam) and lam[i + 1] == lam[i]:
                    continue
                smaller = list(lam)
                smaller[i] -= 1
                if ideal_member(smaller, I):
                    minimal = False
                    break
            if minimal:
                out.update(_multiset_permutations(lam, n))
    return out


def hilbert_function(I: GLIdeal, n: int, d: int, ctx=None) -> int:
    """dim of (S/I) in n variables and degree d."""
    if n < 1 or d < 0:
        raise ValueError("n >= 1 and d >= 0 required")
    return sum(orbit_size(lam, n) for lam in partitions_of(d, max_len=n) if not ideal_member(lam, I))


def format_digit_vector(b: DigitVector) -> str:
    if b.is_unit:
        return "1"
    parts = []
    for m, x in enumerate(b.b):
        if not x:
            continue
        atom = "m" if m == 0 else f"m[p^{m}]"
        parts.append(atom if x == 1 else f"{atom}^{x}")
    return " * ".join(parts)


def format_ideal(I: GLIdeal) -> str:
    if I.is_zero:
        return "0"
    return " + ".join(format_digit_vector(g) for g in I.sorted_generators())


# ideal expression grammar:
#   expr   := term ('+' term)*
#   term   := factor ('*' factor)*
#   factor := atom ('^' INT)?
#   atom   := 'm' | 'm[p^' INT ']' | '(' expr ')' | '0' | '1'


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class _Parser:
    def __init__(self, text: str, p: int):
        self.text = text
        self.pos = 0
        self.p = p

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, s: str):
        self.skip()
        if not self.text.startswith(s, self.pos):
            raise ParseError(f"expected {s!r}", self.pos)
        self.pos += len(s)

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected an integer", start)
        return int(self.text[start:self.pos])

    def expr(self) -> GLIdeal:
        out = self.term()
        while self.peek() == "+":
            self.pos += 1
            out = ideal_sum(out, self.term())
        return out

    def term(self) -> GLIdeal:
        out = self.factor()
        while self.peek() == "*":
            self.pos += 1
            out = ideal_product(out, self.factor())
        return out

    def factor(self) -> GLIdeal:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            at = self.pos
            k = self.integer()
            if k < 1:
                raise ParseError("powers must be positive", at)
            base = ideal_power(base, k)
        return base

    def atom(self) -> GLIdeal:
        c = self.peek()
        if c == "(":
            self.pos += 1
            out = self.expr()
            self.expect(")")
            return out
        if c == "0":
            self.pos += 1
            return GLIdeal.zero(self.p)
        if c == "1":
            self.pos += 1
            return GLIdeal.unit(self.p)
        if c == "m":
            self.pos += 1
            if self.peek() == "[":
                self.pos += 1
                self.expect("p")
                self.expect("^")
                k = self.integer()
                self.expect("]")
                return GLIdeal.frobenius_power(self.p, k)
            return GLIdeal.frobenius_power(self.p, 0)
        raise ParseError(f"unexpected {c!r}" if c else "unexpected end of input", self.pos)


def parse_ideal(text: str, p: int) -> GLIdeal:
    """Parse an ideal expression such as ``m^2 * m[p^1] + m[p^3]``."""
    as_ctx(p)
    parser = _Parser(text, p)
    out = parser.expr()
    parser.skip()
    if parser.pos != len(text):
        raise ParseError(f"trailing input {text[parser.pos:]!r}", parser.pos)
    return out


def parse_monomial(text: str) -> tuple:
    """Parse ``x1^3*x2`` (or ``x1^3 x2``) into a descending exponent tuple."""
    import re

    s = text.strip()
    if s in ("", "1"):
        return ()
    exps: dict[int, int] = {}
    pos = 0
    token = re.compile(r"\s*\*?\s*x(\d+)(?:\s*\^\s*(\d+))?\s*")
    while pos < len(s):
        m = token.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError("expected a variable like x1 or x2^3", pos)
        i = int(m.group(1))
        if i < 1:
            raise ParseError("variables are numbered from 1", pos)
        e = int(m.group(2)) if m.group(2) else 1
        exps[i] = exps.get(i, 0) + e
        pos = m.end()
    return sorted_weight(exps.values())
