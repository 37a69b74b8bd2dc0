"""Divided-power operators on polynomial rings over F_p and GL_n-submodule closures.

e_{i,j}^{(l)} moves l units of exponent from x_j to x_i with coefficient C(a_j, l);
binom(h_i, l) acts diagonally by C(a_i, l).  Both are computed mod p via Lucas.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set

from .combinatorics import as_ctx, compositions, lucas_binom, partitions_of
from .homology import InvariantViolation


class ClosureCapExceeded(RuntimeError):
    pass


class PolyFp:
    """Sparse polynomial in n variables over F_p; zero coefficients are never stored."""

    __slots__ = ("n", "p", "terms")

    def __init__(self, n: int, p: int, terms: Optional[Dict[tuple, int]] = None):
        self.n, self.p = n, p
        self.terms: Dict[tuple, int] = {}
        for a, c in (terms or {}).items():
            a = tuple(a)
            if len(a) != n or min(a, default=0) < 0:
                raise ValueError(f"bad exponent vector {a} for n={n}")
            c %= p
            if c:
                self.terms[a] = c

    @classmethod
    def monomial(cls, a: Sequence[int], p: int, coeff: int = 1) -> "PolyFp":
        return cls(len(a), p, {tuple(a): coeff})

    @classmethod
    def zero(cls, n: int, p: int) -> "PolyFp":
        return cls(n, p)

    @classmethod
    def random(cls, n: int, d: int, p: int, rng: random.Random, max_terms: int = 6) -> "PolyFp":
        """Random homogeneous polynomial of degree d."""
        mons = list(compositions(d, n))
        k = rng.randint(1, min(max_terms, len(mons)))
        return cls(n, p, {a: rng.randrange(1, p) for a in rng.sample(mons, k)})

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> Optional[int]:
        """Common degree of the terms (None for zero); raises if not homogeneous."""
        degs = {sum(a) for a in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("polynomial is not homogeneous")
        return degs.pop()

    def __add__(self, other: "PolyFp") -> "PolyFp":
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = (out.get(a, 0) + c) % self.p
        return PolyFp(self.n, self.p, out)

    def __sub__(self, other: "PolyFp") -> "PolyFp":
        return self + other.scale(-1)

    def scale(self, c: int) -> "PolyFp":
        return PolyFp(self.n, self.p, {a: v * c for a, v in self.terms.items()})

    def __mul__(self, other: "PolyFp") -> "PolyFp":
        out: Dict[tuple, int] = {}
        for a, c in self.terms.items():
            for b, e in other.terms.items():
                k = tuple(x + y for x, y in zip(a, b))
                out[k] = (out.get(k, 0) + c * e) % self.p
        return PolyFp(self.n, self.p, out)

    def __pow__(self, k: int) -> "PolyFp":
        # honest repeated multiplication; no Frobenius shortcut
        out = PolyFp.monomial((0,) * self.n, self.p)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyFp) and (self.n, self.p, self.terms) == (other.n, other.p, other.terms)

    def __hash__(self):
        return hash((self.n, self.p, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for a in sorted(self.terms, reverse=True):
            mon = "*".join(f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(a) if e)
            c = self.terms[a]
            parts.append(mon if c == 1 and mon else f"{c}*{mon}" if mon else str(c))
        return " + ".join(parts)


@dataclass(frozen=True)
class DividedOp:
    kind: str    # "E" or "H"
    i: int       # 1-based
    j: int       # 1-based; unused for H
    l: int

    def __post_init__(self):
        if self.kind not in ("E", "H"):
            raise ValueError("kind must be E or H")
        if self.l < 1 or self.i < 1 or (self.kind == "E" and (self.j < 1 or self.i == self.j)):
            raise ValueError(f"bad operator {self}")

    def apply(self, f: PolyFp) -> PolyFp:
        if self.kind == "E":
            return apply_e(self.i, self.j, self.l, f)
        return apply_h(self.i, self.l, f)


def E(i: int, j: int, l: int) -> DividedOp:
    return DividedOp("E", i, j, l)


def H(i: int, l: int) -> DividedOp:
    return DividedOp("H", i, 0, l)


def _check_index(i: int, n: int):
    if not 1 <= i <= n:
        raise IndexError(f"variable x{i} out of range for n={n}")


def e_on_monomial(a: tuple, i: int, j: int, l: int, p: int):
    """(coefficient mod p, exponent) of e_{i,j}^{(l)} x^a; 0-based i, j."""
    if l == 0:
        return 1, a
    if a[j] < l:
        return 0, a
    c = lucas_binom(a[j], l, p)
    b = list(a)
    b[j] -= l
    b[i] += l
    return c, tuple(b)


def apply_e(i: int, j: int, l: int, f: PolyFp) -> PolyFp:
    """e_{i,j}^{(l)} f with 1-based indices; l = 0 is the identity."""
    _check_index(i, f.n)
    _check_index(j, f.n)
    if i == j:
        raise ValueError("e_{i,i} is not a divided-power root operator")
    out: Dict[tuple, int] = {}
    for a, c in f.terms.items():
        k, b = e_on_monomial(a, i - 1, j - 1, l, f.p)
        if k:
            out[b] = (out.get(b, 0) + k * c) % f.p
    return PolyFp(f.n, f.p, out)


def apply_h(i: int, l: int, f: PolyFp) -> PolyFp:
    _check_index(i, f.n)
    return PolyFp(f.n, f.p, {a: c * lucas_binom(a[i - 1], l, f.p) for a, c in f.terms.items()})


def composition_check(i: int, j: int, l: int, s: int, f: PolyFp) -> bool:
    """e^{(l)} e^{(s)} f = C(l+s, l) e^{(l+s)} f."""
    lhs = apply_e(i, j, l, apply_e(i, j, s, f))
    rhs = apply_e(i, j, l + s, f).scale(lucas_binom(l + s, l, f.p))
    return lhs == rhs


def divided_leibniz_check(i: int, j: int, l: int, f: PolyFp, g: PolyFp) -> dict:
    """e^{(l)}(fg) = sum_s e^{(s)}(f) e^{(l-s)}(g)."""
    lhs = apply_e(i, j, l, f * g)
    rhs = PolyFp.zero(f.n, f.p)
    for s in range(l + 1):
        rhs = rhs + apply_e(i, j, s, f) * apply_e(i, j, l - s, g)
    report = {"i": i, "j": j, "l": l, "lhs": repr(lhs), "rhs": repr(rhs), "ok": lhs == rhs}
    if not report["ok"]:
        raise InvariantViolation(f"divided-power Leibniz rule fails: {report}")
    return report


def hasse_vanishing_check(f: PolyFp, q: int, l: int, i: int = 1, j: int = 2) -> bool:
    """e_{i,j}^{(l)}(f^q) = 0 when q does not divide l (f of positive degree, q a p-power)."""
    if l % q == 0:
        raise ValueError("vanishing only claimed when q does not divide l")
    return apply_e(i, j, l, f ** q).is_zero()


def frobenius_commutation_check(f: PolyFp, i: int, j: int, l: int) -> bool:
    """e^{(l)}(f^p) is 0 for p not dividing l, and (e^{(l/p)} f)^p otherwise."""
    p = f.p
    lhs = apply_e(i, j, l, f ** p)
    if l % p:
        return lhs.is_zero()
    return lhs == apply_e(i, j, l // p, f) ** p


# ---------------------------------------------------------------------------
# closures


def _p_powers_upto(d: int, p: int) -> List[int]:
    out, t = [], 1
    while t <= d:
        out.append(t)
        t *= p
    return out


def gln_submodule_closure(seeds: Iterable[PolyFp], d: int, n: int, p: int,
                          cap: Optional[int] = None) -> List[tuple]:
    """Monomial basis of the smallest GL_n-stable subspace of degree-d forms containing the seeds.

    The subspace is closed under e_{i,j}^{(p^t)}, binom(h_i, p^t) for p^t <= d, and
    coordinate permutations.  The torus operators separate exponent vectors of
    degree d (Lucas digits), and each weight space of the polynomial ring is one
    dimensional, so the closure is spanned by monomials: those in the seeds'
    supports plus everything reachable by operators with a nonzero coefficient.
    """
    p = as_ctx(p).p
    start: Set[tuple] = set()
    for f in seeds:
        if f.n != n or f.p != p:
            raise ValueError("seed lives in a different ring")
        if not f.is_zero() and f.degree != d:
            raise ValueError("seeds must be homogeneous of degree d")
        start.update(f.terms)
    powers = _p_powers_upto(d, p)
    seen = set(start)
    todo = deque(seen)
    while todo:
        a = todo.popleft()
        nbrs = []
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                for l in powers:
                    c, b = e_on_monomial(a, i, j, l, p)
                    if c:
                        nbrs.append(b)
                # transposition (i j)
                if i < j:
                    b = list(a)
                    b[i], b[j] = b[j], b[i]
                    nbrs.append(tuple(b))
        for b in nbrs:
            if b not in seen:
                seen.add(b)
                if cap is not None and len(seen) > cap:
                    raise ClosureCapExceeded(f"closure exceeds {cap} monomials")
                todo.append(b)
    return sorted(seen)


def symmetric_closure(seed_partitions: Iterable[Sequence[int]], d: int, n: int, p: int) -> Set[tuple]:
    """Closure on sorted exponent vectors (partitions padded to n), for large n.

    Since the closure is permutation stable it is determined by the partitions it contains.
    """
    p = as_ctx(p).p
    powers = _p_powers_upto(d, p)

    def norm(a):
        a = tuple(sorted(a, reverse=True))
        if len(a) > n or sum(a) != d:
            raise ValueError("seed partition does not fit")
        return a + (0,) * (n - len(a))

    seen = {norm(a) for a in seed_partitions}
    todo = deque(seen)
    while todo:
        a = todo.popleft()
        vals = sorted(set(a))
        for vi in vals:
            i = a.index(vi)
            for vj in vals:
                if vj == 0:
                    continue
                # pick a position j != i holding value vj
                j = next((k for k in range(n) if a[k] == vj and k != i), None)
                if j is None:
                    continue
                for l in powers:
                    c, b = e_on_monomial(a, i, j, l, p)
                    if c:
                        b = tuple(sorted(b, reverse=True))
                        if b not in seen:
                            seen.add(b)
                            todo.append(b)
    return seen


def verify_gl_stability(monomials: Iterable[Sequence[int]], d: int, n: int, p: int) -> bool:
    """Is the span of these degree-d monomials stable under e_{i,j}^{(p^t)} and permutations?"""
    p = as_ctx(p).p
    mons = {tuple(a) for a in monomials}
    for a in mons:
        if len(a) != n or sum(a) != d:
            raise ValueError("monomials must be degree-d exponent vectors in n variables")
    sorted_set = {tuple(sorted(a, reverse=True)) for a in mons}
    # permutation stability: every monomial whose sorting lies in sorted_set must be present
    from .combinatorics import orbit_size
    if sum(orbit_size(lam, n) for lam in sorted_set) != len(mons):
        return False
    powers = _p_powers_upto(d, p)
    for a in sorted_set:
        vals = sorted(set(a))
        for vi in vals:
            i = a.index(vi)
            for vj in vals:
                if vj == 0:
                    continue
                j = next((k for k in range(n) if a[k] == vj and k != i), None)
                if j is None:
                    continue
                for l in powers:
                    c, b = e_on_monomial(a, i, j, l, p)
                    if c and tuple(sorted(b, reverse=True)) not in sorted_set:
                        return False
    return True


def ideal_degree_piece(ideal, d: int, n: int) -> Set[tuple]:
    """Sorted exponent vectors (padded to n) of degree d lying in a GL-ideal."""
    from .glideals import ideal_member

    out = set()
    for lam in partitions_of(d, max_len=n):
        a = lam + (0,) * (n - len(lam))
        if ideal_member(a, ideal):
            out.add(a)
    return out


def expand_orbits(sorted_vectors: Iterable[tuple]) -> List[tuple]:
    """All permutations of the given sorted exponent vectors."""
    from .glideals import _multiset_permutations

    out = []
    for a in sorted_vectors:
        out.extend(_multiset_permutations(a, len(a)))
    return sorted(out)


# degree-10 ideals in characteristic 2 generated in degree 10, as digit vectors
DEGREE10_CHAR2 = {
    "m^[8] m^[2]": (0, 1, 0, 1),
    "(m^[4])^2 m^[2]": (0, 1, 2),
    "m^[8] m^2": (2, 0, 0, 1),
    "(m^[4])^2 m^2": (2, 0, 2),
    "m^10": (10,),
}
