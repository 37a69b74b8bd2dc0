"""Base-p arithmetic, partitions, weights and flat-weight combinatorics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeContext:
    """The characteristic p of the ground field F_p."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not _is_prime(self.p):
            raise ValueError(f"p must be a prime, got {self.p!r}")

    def is_power(self, q: int) -> bool:
        """True iff q = p^r for some r >= 0."""
        if q < 1:
            return False
        while q % self.p == 0:
            q //= self.p
        return q == 1

    def log(self, q: int) -> int:
        """Return r with q = p^r."""
        if not self.is_power(q):
            raise ValueError(f"{q} is not a power of {self.p}")
        r = 0
        while q > 1:
            q //= self.p
            r += 1
        return r


def as_ctx(p) -> PrimeContext:
    return p if isinstance(p, PrimeContext) else PrimeContext(int(p))


@dataclass(frozen=True, order=True)
class Partition:
    """Weakly decreasing sequence of positive integers."""

    parts: tuple = ()

    def __post_init__(self):
        parts = tuple(int(a) for a in self.parts)
        if any(a < 0 for a in parts):
            raise ValueError("partition parts must be nonnegative")
        parts = tuple(sorted((a for a in parts if a > 0), reverse=True))
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)


@dataclass(frozen=True)
class Weight:
    """Finitely supported nonnegative integer sequence; trailing zeros trimmed."""

    entries: tuple = ()

    def __post_init__(self):
        entries = [int(a) for a in self.entries]
        if any(a < 0 for a in entries):
            raise ValueError("weights are nonnegative")
        while entries and entries[-1] == 0:
            entries.pop()
        object.__setattr__(self, "entries", tuple(entries))

    @property
    def degree(self) -> int:
        return sum(self.entries)

    def support(self) -> frozenset:
        return frozenset(i for i, a in enumerate(self.entries) if a)

    def padded(self, n: int) -> tuple:
        if len(self.entries) > n:
            raise ValueError(f"weight {self.entries} does not fit in {n} variables")
        return self.entries + (0,) * (n - len(self.entries))


def _entries(w) -> tuple:
    if isinstance(w, Weight):
        return w.entries
    if isinstance(w, Partition):
        return w.parts
    return tuple(w)


def digits(n: int, ctx) -> list[int]:
    """Base-p digits of n, least significant first, trailing zeros trimmed."""
    p = as_ctx(ctx).p
    if n < 0:
        raise ValueError("digits needs n >= 0")
    out = []
    while n:
        n, d = divmod(n, p)
        out.append(d)
    return out


def lucas_binom(a: int, b: int, ctx) -> int:
    """C(a, b) mod p, computed digit by digit."""
    p = as_ctx(ctx).p
    if a < 0 or b < 0:
        raise ValueError("lucas_binom needs a, b >= 0")
    if b > a:
        return 0
    res = 1
    while b:
        a, da = divmod(a, p)
        b, db = divmod(b, p)
        if db > da:
            return 0
        # small binomial of digits, exact then reduced
        num = 1
        den = 1
        for k in range(db):
            num *= da - k
            den *= k + 1
        res = res * ((num // den) % p) % p
    return res


def largest_p_power_dividing(s: int, ctx) -> int:
    p = as_ctx(ctx).p
    if s < 1:
        raise ValueError("largest_p_power_dividing needs s >= 1")
    q = 1
    while s % (q * p) == 0:
        q *= p
    return q


def _is_p_power(a: int, p: int) -> bool:
    if a < 1:
        return False
    while a % p == 0:
        a //= p
    return a == 1


def is_flat(w, ctx) -> bool:
    p = as_ctx(ctx).p
    return all(a == 0 or _is_p_power(a, p) for a in _entries(w))


def pmag(w, ctx) -> tuple:
    """Number of entries equal to p^i, for i = 0, 1, ...; trailing zeros trimmed."""
    p = as_ctx(ctx).p
    ent = _entries(w)
    if not is_flat(ent, p):
        raise ValueError(f"pmag needs a flat weight, got {ent}")
    counts: list[int] = []
    for a in ent:
        if a == 0:
            continue
        level = 0
        while a > 1:
            a //= p
            level += 1
        while len(counts) <= level:
            counts.append(0)
        counts[level] += 1
    return tuple(counts)


def _lex_greater(u: tuple, v: tuple) -> bool:
    n = max(len(u), len(v))
    u = u + (0,) * (n - len(u))
    v = v + (0,) * (n - len(v))
    return u > v


def flat_order_less(lam, mu, ctx) -> bool:
    """lam < mu in the flat-weight order: pmag(lam) is lexicographically larger."""
    return _lex_greater(pmag(lam, ctx), pmag(mu, ctx))


def is_p_restricted(parts: Sequence[int], p: int) -> bool:
    parts = list(parts) + [0]
    return all(parts[i] - parts[i + 1] < p for i in range(len(parts) - 1))


def p_restricted_decomposition(mu, ctx) -> list[Partition]:
    """Write mu = mu0 + p mu1 + p^2 mu2 + ... with every mu_i p-restricted."""
    p = as_ctx(ctx).p
    parts = list(Partition(_entries(mu)).parts)
    orig = list(parts)
    out: list[Partition] = []
    while any(parts):
        k = len(parts)
        diffs = [parts[i] - (parts[i + 1] if i + 1 < k else 0) for i in range(k)]
        low_diffs = [d % p for d in diffs]
        low = [sum(low_diffs[i:]) for i in range(k)]
        out.append(Partition(tuple(low)))
        parts = [(a - b) // p for a, b in zip(parts, low)]
    # reconstruction check
    total = [0] * len(orig)
    for level, piece in enumerate(out):
        for i, a in enumerate(piece.parts):
            total[i] += a * p**level
    if total != orig:
        raise AssertionError("p-restricted decomposition failed to reconstruct input")
    return out


def min_flat_pmag(mu, ctx) -> tuple:
    pieces = p_restricted_decomposition(mu, ctx)
    counts = [piece.size for piece in pieces]
    while counts and counts[-1] == 0:
        counts.pop()
    return tuple(counts)


def weights_disjoint(w1, w2) -> bool:
    a, b = _entries(w1), _entries(w2)
    return not any(x and y for x, y in zip(a, b))


# enumeration helpers used throughout the package

def partitions_of(d: int, max_len: int | None = None, max_part: int | None = None) -> Iterator[tuple]:
    """Partitions of d as descending tuples, optionally bounded in length and part size."""
    if max_part is None:
        max_part = d
    if max_len is None:
        max_len = d

    def rec(rem, cap, slots):
        if rem == 0:
            yield ()
            return
        if slots == 0:
            return
        for a in range(min(rem, cap), 0, -1):
            if a * slots < rem:
                break
            for rest in rec(rem - a, a, slots - 1):
                yield (a,) + rest

    yield from rec(d, max_part, max_len)


def compositions(d: int, n: int, bound: Sequence[int] | int | None = None) -> Iterator[tuple]:
    """All length-n nonnegative vectors summing to d, entrywise at most bound."""
    if n == 0:
        if d == 0:
            yield ()
        return
    if bound is None:
        caps = [d] * n
    elif isinstance(bound, int):
        caps = [bound] * n
    else:
        caps = list(bound)
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + caps[i]

    def rec(i, rem):
        if i == n - 1:
            if rem <= caps[i]:
                yield (rem,)
            return
        lo = max(0, rem - suffix[i + 1])
        for a in range(lo, min(caps[i], rem) + 1):
            for rest in rec(i + 1, rem - a):
                yield (a,) + rest

    if d > suffix[0]:
        return
    yield from rec(0, d)


def orbit_size(w: Sequence[int], n: int) -> int:
    """Number of distinct rearrangements of w padded with zeros to length n."""
    ent = [a for a in w if a]
    if len(ent) > n:
        return 0
    counts: dict[int, int] = {}
    for a in ent:
        counts[a] = counts.get(a, 0) + 1
    counts[0] = n - len(ent)
    from math import factorial

    res = factorial(n)
    for c in counts.values():
        res //= factorial(c)
    return res


def sorted_weight(w: Iterable[int]) -> tuple:
    return tuple(sorted((a for a in w if a), reverse=True))
