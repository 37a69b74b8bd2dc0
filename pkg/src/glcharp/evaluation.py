"""Finite truncations of GL-modules.

A ``Family`` describes a GL-module M over S = k[x1, x2, ...] or over
Sm = S/m^[q] through its evaluations M{k^n}.  Every evaluation has a basis of
weight vectors ("labels") and the variables act on labels monomially: a label is
sent to another label or to zero.  Evaluations are computed lazily, one weight
space at a time, so a family can be queried at large n as long as only a few
weights are touched.

``GradedModule`` is the evaluated object consumed by the homology engines.  It
only needs ``dim(w)`` and ``action_matrix(i, w)``, so explicit (non-monomial)
modules are supported as well through ``ExplicitModule``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence

import numpy as np

from . import linalg
from .combinatorics import as_ctx, compositions, orbit_size, partitions_of
from .glideals import DomainError, GLIdeal, ideal_contains, ideal_member


class CutoffError(RuntimeError):
    """Requested data lies beyond an explicit degree or size cutoff."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


def unit_vector(n: int, i: int) -> tuple:
    return tuple(1 if k == i else 0 for k in range(n))


def add_w(a: Sequence[int], b: Sequence[int]) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def insert_at(t: tuple, pos: int, value=0) -> tuple:
    return t[:pos] + (value,) + t[pos:]


@dataclass(frozen=True)
class FrobeniusQuotientRing:
    """Sm = k[x1..xn]/(x1^q, ..., xn^q)."""

    p: int
    q: int
    n: int

    def __post_init__(self):
        ctx = as_ctx(self.p)
        if not ctx.is_power(self.q) or self.q < self.p:
            raise ValueError(f"q must be a positive power of p, got q={self.q}, p={self.p}")

    @property
    def dimension(self) -> int:
        return self.q**self.n

    @property
    def top_degree(self) -> int:
        return (self.q - 1) * self.n


# ---------------------------------------------------------------------------
# polynomial representations with weight bases (generators of free modules)


class Rep:
    """Homogeneous polynomial representation described by its weight multiplicities."""

    degree: int = 0

    def mult(self, u: tuple) -> int:
        raise NotImplementedError

    def max_entry(self) -> int:
        return self.degree

    def weights_below(self, w: tuple) -> List[tuple]:
        caps = [min(a, self.max_entry()) for a in w]
        return [u for u in compositions(self.degree, len(w), caps) if self.mult(u)]

    def dims(self, n: int) -> int:
        return sum(self.mult(u) for u in compositions(self.degree, n, self.max_entry()))

    name = "rep"


@dataclass(frozen=True)
class SymRep(Rep):
    """Sym^d of the standard representation (monomial basis)."""

    degree: int

    def mult(self, u):
        return 1 if sum(u) == self.degree and min(u, default=0) >= 0 else 0

    @property
    def name(self):
        return f"Sym{self.degree}"


@dataclass(frozen=True)
class ExteriorRep(Rep):
    degree: int

    def mult(self, u):
        return 1 if sum(u) == self.degree and all(a in (0, 1) for a in u) else 0

    def max_entry(self):
        return 1

    @property
    def name(self):
        return f"Wedge{self.degree}"


@dataclass(frozen=True)
class FrobeniusRep(Rep):
    """Frobenius twist W^(r): weights multiplied by p^r."""

    base: Rep
    r: int
    p: int

    @property
    def degree(self):
        return self.base.degree * self.p**self.r

    def mult(self, u):
        s = self.p**self.r
        if any(a % s for a in u):
            return 0
        return self.base.mult(tuple(a // s for a in u))

    def max_entry(self):
        return self.base.max_entry() * self.p**self.r

    def weights_below(self, w):
        s = self.p**self.r
        return [tuple(a * s for a in u) for u in self.base.weights_below(tuple(a // s for a in w))]

    @property
    def name(self):
        return f"{self.base.name}^({self.r})"


@dataclass(frozen=True)
class TensorRep(Rep):
    a: Rep
    b: Rep

    @property
    def degree(self):
        return self.a.degree + self.b.degree

    def mult(self, u):
        total = 0
        for v in self.a.weights_below(tuple(u)):
            rest = tuple(x - y for x, y in zip(u, v))
            total += self.a.mult(v) * self.b.mult(rest)
        return total

    def max_entry(self):
        return self.a.max_entry() + self.b.max_entry()

    @property
    def name(self):
        return f"({self.a.name}x{self.b.name})"


@dataclass(frozen=True)
class IdealPieceRep(Rep):
    """Degree-d piece of a GL-stable monomial ideal, a subrepresentation of Sym^d."""

    ideal: GLIdeal
    degree: int

    def mult(self, u):
        return 1 if sum(u) == self.degree and ideal_member(u, self.ideal) else 0

    @property
    def name(self):
        return f"[{self.ideal}]_{self.degree}"


TRIVIAL = SymRep(0)


def standard_rep() -> Rep:
    return SymRep(1)


def frobenius_standard(p: int, r: int) -> Rep:
    """Span of x_i^{p^r}."""
    return FrobeniusRep(SymRep(1), r, p)


# ---------------------------------------------------------------------------
# families


class Family:
    """A GL-module given by its compatible evaluations over n = 0, 1, 2, ..."""

    p: int
    q: Optional[int]
    descriptor: str = "family"
    symmetric: bool = True

    def __init__(self):
        self._basis_cache: Dict[tuple, tuple] = {}

    # -- to implement
    def _basis(self, n: int, w: tuple) -> tuple:
        raise NotImplementedError

    def act(self, n: int, i: int, label):
        raise NotImplementedError

    def weight(self, n: int, label) -> tuple:
        raise NotImplementedError

    def embed(self, n: int, label, pos: int):
        """Image of a label of eval(n) in eval(n+1), new zero coordinate inserted at pos."""
        raise NotImplementedError

    def coord_bound(self) -> Optional[int]:
        """Largest exponent any coordinate of a weight can have (None if unbounded)."""
        return None

    def gen_bound(self) -> Optional[int]:
        """Upper bound on generation degrees, if known."""
        return None

    # -- derived
    def basis(self, n: int, w: Sequence[int]) -> tuple:
        w = tuple(w)
        if len(w) != n:
            raise ValueError(f"weight {w} has wrong length for n={n}")
        if min(w, default=0) < 0:
            return ()
        key = (n, w)
        got = self._basis_cache.get(key)
        if got is None:
            got = tuple(self._basis(n, w))
            self._basis_cache[key] = got
        return got

    def incl(self, n: int, label):
        return self.embed(n, label, n)

    def eval(self, n: int) -> "FamilyModule":
        return FamilyModule(self, n)

    def act_power(self, n: int, i: int, label, k: int):
        for _ in range(k):
            if label is None:
                return None
            label = self.act(n, i, label)
        return label

    def __repr__(self):
        return f"<{type(self).__name__} {self.descriptor}>"


class FreeFamily(Family):
    """R (x) (V_1 + ... + V_k) with R = S (q None) or R = S/m^[q]."""

    def __init__(self, p: int, q: Optional[int], reps: Sequence[Rep], descriptor: Optional[str] = None):
        super().__init__()
        self.p = as_ctx(p).p
        if q is not None:
            FrobeniusQuotientRing(self.p, q, 1)
        self.q = q
        self.reps = tuple(reps)
        ring = "S" if q is None else f"S/m^[{q}]"
        self.descriptor = descriptor or f"free({ring}; {', '.join(r.name for r in self.reps)})"

    def _basis(self, n, w):
        out = []
        q = self.q
        for ri, rep in enumerate(self.reps):
            for u in rep.weights_below(w):
                c = tuple(a - b for a, b in zip(w, u))
                if q is not None and any(x >= q for x in c):
                    continue
                for k in range(rep.mult(u)):
                    out.append((ri, u, k, c))
        return out

    def act(self, n, i, label):
        ri, u, k, c = label
        if self.q is not None and c[i] + 1 >= self.q:
            return None
        return (ri, u, k, c[:i] + (c[i] + 1,) + c[i + 1:])

    def weight(self, n, label):
        return add_w(label[1], label[3])

    def embed(self, n, label, pos):
        ri, u, k, c = label
        return (ri, insert_at(u, pos), k, insert_at(c, pos))

    def coord_bound(self):
        if self.q is None:
            return None
        return self.q - 1 + max((r.max_entry() for r in self.reps), default=0)

    def gen_bound(self):
        return max((r.degree for r in self.reps), default=-1)


class Subquotient(Family):
    """Labels of a parent family kept by an up-closed ``keep`` and not killed by an up-closed ``kill``."""

    def __init__(self, parent: Family, keep=None, kill=None, descriptor: str = "subquotient",
                 bound: Optional[int] = None):
        super().__init__()
        self.parent = parent
        self._bound = bound
        self.p, self.q = parent.p, parent.q
        self.keep = keep
        self.kill = kill
        self.descriptor = descriptor
        self.symmetric = parent.symmetric

    def _ok(self, n, label):
        if self.keep is not None and not self.keep(n, label):
            return False
        if self.kill is not None and self.kill(n, label):
            return False
        return True

    def _basis(self, n, w):
        return [lab for lab in self.parent.basis(n, w) if self._ok(n, lab)]

    def act(self, n, i, label):
        out = self.parent.act(n, i, label)
        if out is None or (self.kill is not None and self.kill(n, out)):
            return None
        return out

    def weight(self, n, label):
        return self.parent.weight(n, label)

    def embed(self, n, label, pos):
        return self.parent.embed(n, label, pos)

    def coord_bound(self):
        return self._bound if self._bound is not None else self.parent.coord_bound()

    def gen_bound(self):
        return None


class Slice(Family):
    """Weight-m slice in the last adjoined variable of eval(n+1), degrees lowered by m."""

    def __init__(self, parent: Family, m: int, descriptor: Optional[str] = None):
        super().__init__()
        if m < 0:
            raise ValueError("slice index must be nonnegative")
        self.parent = parent
        self.m = m
        self.p, self.q = parent.p, parent.q
        self.symmetric = parent.symmetric
        self.descriptor = descriptor or f"Sh_{m}({parent.descriptor})"

    def _basis(self, n, w):
        return self.parent.basis(n + 1, w + (self.m,))

    def act(self, n, i, label):
        if i >= n:
            raise IndexError("variable out of range")
        return self.parent.act(n + 1, i, label)

    def weight(self, n, label):
        return self.parent.weight(n + 1, label)[:-1]

    def embed(self, n, label, pos):
        if pos > n:
            raise IndexError("insert position out of range")
        return self.parent.embed(n + 1, label, pos)

    def coord_bound(self):
        return self.parent.coord_bound()


class DirectSum(Family):
    def __init__(self, parts: Sequence[Family], descriptor: Optional[str] = None):
        super().__init__()
        if not parts:
            raise ValueError("direct sum of no families; use zero_family")
        self.parts = tuple(parts)
        self.p = parts[0].p
        self.q = parts[0].q
        if any(f.p != self.p or f.q != self.q for f in parts):
            raise ValueError("summands over different rings")
        self.symmetric = all(f.symmetric for f in parts)
        self.descriptor = descriptor or " + ".join(f.descriptor for f in parts)

    def _basis(self, n, w):
        return [(k, lab) for k, f in enumerate(self.parts) for lab in f.basis(n, w)]

    def act(self, n, i, label):
        k, lab = label
        out = self.parts[k].act(n, i, lab)
        return None if out is None else (k, out)

    def weight(self, n, label):
        return self.parts[label[0]].weight(n, label[1])

    def embed(self, n, label, pos):
        return (label[0], self.parts[label[0]].embed(n, label[1], pos))

    def coord_bound(self):
        bounds = [f.coord_bound() for f in self.parts]
        return None if any(b is None for b in bounds) else max(bounds)


class TensorFamily(Family):
    """F (x) G over k: weight spaces only (no module structure), used for dimension identities."""

    def __init__(self, F: Family, G: Family):
        super().__init__()
        self.F, self.G = F, G
        self.p = F.p
        self.q = None
        self.symmetric = F.symmetric and G.symmetric
        self.descriptor = f"({F.descriptor}) (x) ({G.descriptor})"

    def _basis(self, n, w):
        out = []
        bF, bG = self.F.coord_bound(), self.G.coord_bound()
        caps = [a if bF is None else min(a, bF) for a in w]
        for d1 in range(sum(w) + 1):
            for w1 in compositions(d1, n, caps):
                w2 = tuple(a - b for a, b in zip(w, w1))
                if bG is not None and max(w2, default=0) > bG:
                    continue
                left = self.F.basis(n, w1)
                if not left:
                    continue
                right = self.G.basis(n, w2)
                out.extend((x, y) for x in left for y in right)
        return out

    def act(self, n, i, label):
        raise TypeError("a tensor product over k carries no module structure here")

    def weight(self, n, label):
        return add_w(self.F.weight(n, label[0]), self.G.weight(n, label[1]))

    def embed(self, n, label, pos):
        return (self.F.embed(n, label[0], pos), self.G.embed(n, label[1], pos))

    def coord_bound(self):
        a, b = self.F.coord_bound(), self.G.coord_bound()
        return None if a is None or b is None else a + b


# ---------------------------------------------------------------------------
# constructors


def _ring_q(ring) -> Optional[int]:
    if ring is None or ring == "S":
        return None
    if isinstance(ring, FrobeniusQuotientRing):
        return ring.q
    return int(ring)


def free_family(p: int, q: Optional[int], gens: Sequence) -> Family:
    """Free module over S (q=None) or S/m^[q] on the given generator representations.

    ``gens`` entries are Rep objects or integers d (meaning Sym^d).
    """
    reps = [g if isinstance(g, Rep) else SymRep(int(g)) for g in gens]
    if not reps:
        return zero_family(p, q)
    return FreeFamily(p, _ring_q(q), reps)


def zero_family(p: int, q: Optional[int]) -> Family:
    return FreeFamily(p, _ring_q(q), [], descriptor="0")


def ring_family(p: int, q: Optional[int]) -> Family:
    return FreeFamily(p, _ring_q(q), [TRIVIAL], descriptor="S" if q is None else f"S/m^[{q}]")


def _ring_name(q):
    return "S" if q is None else f"S/m^[{q}]"


def quotient_family(I: GLIdeal, q: Optional[int] = None, base: Optional[Family] = None) -> Family:
    """R/I (or base / I*base) with R = S or S/m^[q]."""
    base = base or ring_family(I.p, q)

    def kill(n, label, I=I):
        return ideal_member(label[3], I)

    return Subquotient(base, kill=kill, descriptor=f"{base.descriptor}/({I})")


def ideal_family(I: GLIdeal, J: Optional[GLIdeal] = None, q: Optional[int] = None) -> Family:
    """The module I/J over R = S or S/m^[q] (J defaults to the zero ideal)."""
    if J is None:
        J = GLIdeal.zero(I.p)
    if not ideal_contains(I, J):
        raise DomainError("ideal_family needs J contained in I")
    base = ring_family(I.p, q)

    def keep(n, label, I=I):
        return ideal_member(label[3], I)

    def kill(n, label, J=J):
        return ideal_member(label[3], J)

    desc = f"({I})" if J.is_zero else f"({I})/({J})"
    if q is not None:
        desc += f" in {_ring_name(q)}"
    return Subquotient(base, keep=keep, kill=None if J.is_zero else kill, descriptor=desc)


def rep_family(p: int, rep: Rep) -> Family:
    """A representation viewed as an S-module with zero action."""
    base = FreeFamily(p, None, [rep], descriptor=rep.name)
    return Subquotient(base, kill=lambda n, lab: any(lab[3]), descriptor=rep.name, bound=rep.max_entry())


def residue_field(p: int, q: Optional[int]) -> Family:
    return quotient_family(GLIdeal.frobenius_power(p, 0), q)


# ---------------------------------------------------------------------------
# evaluated modules


class GradedModule:
    """Weight-graded module over k[x1..xn] (q None) or k[x1..xn]/m^[q]."""

    n: int
    p: int
    q: Optional[int]
    symmetric: bool = False
    degree_cap: Optional[int] = None

    def dim(self, w: Sequence[int]) -> int:
        raise NotImplementedError

    def action_matrix(self, i: int, w: Sequence[int]) -> np.ndarray:
        raise NotImplementedError

    def coord_bound(self) -> Optional[int]:
        return None

    # weights -----------------------------------------------------------
    def weights_of_degree(self, d: int) -> Iterator[tuple]:
        b = self.coord_bound()
        for w in compositions(d, self.n, b):
            if self.dim(w):
                yield w

    def sorted_weights_of_degree(self, d: int) -> Iterator[tuple]:
        """Weakly decreasing weights of degree d (representatives of S_n-orbits)."""
        b = self.coord_bound()
        for lam in partitions_of(d, max_len=self.n, max_part=b):
            yield lam + (0,) * (self.n - len(lam))

    def degree_dim(self, d: int) -> int:
        self._check_cap(d)
        if self.symmetric:
            return sum(orbit_size(w, self.n) * self.dim(w) for w in self.sorted_weights_of_degree(d))
        return sum(self.dim(w) for w in self.weights_of_degree(d))

    def degree_dims(self, d_max: int) -> list:
        return [self.degree_dim(d) for d in range(d_max + 1)]

    def top_degree_bound(self) -> Optional[int]:
        b = self.coord_bound()
        if b is not None:
            return b * self.n
        return self.degree_cap

    def _check_cap(self, d: int):
        if self.degree_cap is not None and d > self.degree_cap and not getattr(self, "complete", False):
            raise CutoffError(f"degree {d} beyond the available data (cap {self.degree_cap})")

    def total_dim(self) -> int:
        top = self.top_degree_bound()
        if top is None:
            raise CutoffError("module has no finite degree bound")
        return sum(self.degree_dims(top))

    def check_axioms(self, d_max: Optional[int] = None) -> bool:
        """Commuting actions and vanishing q-th powers, checked weight by weight."""
        top = self.top_degree_bound() if d_max is None else d_max
        if top is None:
            raise CutoffError("need d_max for an unbounded module")
        n, p = self.n, self.p
        for d in range(top + 1):
            for w in self.weights_of_degree(d):
                for i in range(n):
                    Ai = self.action_matrix(i, w)
                    wi = add_w(w, unit_vector(n, i))
                    for j in range(i + 1, n):
                        Aj = self.action_matrix(j, w)
                        wj = add_w(w, unit_vector(n, j))
                        lhs = linalg.matmul(self.action_matrix(j, wi), Ai, p)
                        rhs = linalg.matmul(self.action_matrix(i, wj), Aj, p)
                        if not np.array_equal(lhs, rhs):
                            return False
                    if self.q is not None:
                        P = np.eye(self.dim(w), dtype=np.int64)
                        cur = w
                        for _ in range(self.q):
                            P = linalg.matmul(self.action_matrix(i, cur), P, p)
                            cur = add_w(cur, unit_vector(n, i))
                        if np.any(P):
                            return False
        return True

    def to_json(self, d_max: Optional[int] = None) -> str:
        """Debug dump: weight spaces and action matrices."""
        top = self.top_degree_bound() if d_max is None else d_max
        if top is None:
            raise CutoffError("need d_max for an unbounded module")
        spaces = []
        actions = []
        for d in range(top + 1):
            for w in self.weights_of_degree(d):
                spaces.append({"weight": list(w), "dim": self.dim(w)})
                for i in range(self.n):
                    A = self.action_matrix(i, w)
                    if A.size and np.any(A) and sum(w) < top:
                        actions.append({"i": i, "weight": list(w), "matrix": A.tolist()})
        return json.dumps({"n": self.n, "p": self.p, "q": self.q, "degree_cap": top,
                           "spaces": spaces, "actions": actions}, sort_keys=True)


class FamilyModule(GradedModule):
    """Lazy evaluation of a family at n."""

    def __init__(self, family: Family, n: int):
        self.family = family
        self.n = n
        self.p = family.p
        self.q = family.q
        self.symmetric = family.symmetric
        self._index: Dict[tuple, Dict] = {}
        self._mats: Dict[tuple, np.ndarray] = {}

    def basis(self, w) -> tuple:
        return self.family.basis(self.n, tuple(w))

    def dim(self, w) -> int:
        if min(w, default=0) < 0:
            return 0
        return len(self.basis(w))

    def coord_bound(self):
        return self.family.coord_bound()

    def index(self, w) -> Dict:
        w = tuple(w)
        got = self._index.get(w)
        if got is None:
            got = {lab: k for k, lab in enumerate(self.basis(w))}
            self._index[w] = got
        return got

    def action_matrix(self, i, w) -> np.ndarray:
        w = tuple(w)
        key = (i, w)
        got = self._mats.get(key)
        if got is not None:
            return got
        src = self.basis(w) if min(w, default=0) >= 0 else ()
        tgt_w = add_w(w, unit_vector(self.n, i))
        tgt = self.index(tgt_w) if src else {}
        A = np.zeros((len(tgt) if src else self.dim(tgt_w), len(src)), dtype=np.int64)
        for k, lab in enumerate(src):
            out = self.family.act(self.n, i, lab)
            if out is not None:
                A[tgt[out], k] = 1
        self._mats[key] = A
        return A

    def labels(self, d_max: Optional[int] = None) -> Iterator[tuple]:
        """All (weight, label) pairs up to degree d_max (default: everything, finite case)."""
        top = self.top_degree_bound() if d_max is None else d_max
        if top is None:
            raise CutoffError("need d_max for an unbounded module")
        for d in range(top + 1):
            for w in compositions(d, self.n, self.coord_bound()):
                for lab in self.basis(w):
                    yield w, lab


class ExplicitModule(GradedModule):
    """Module given by explicit weight-space dimensions and action matrices."""

    def __init__(self, n: int, p: int, q: Optional[int], spaces: Dict[tuple, int],
                 actions: Dict[tuple, np.ndarray], degree_cap: Optional[int] = None, check: bool = True,
                 complete: bool = True):
        self.n, self.p, self.q = n, p, q
        # complete: the data is the whole module, so degrees above degree_cap are zero
        self.complete = complete
        self.spaces = {tuple(w): int(d) for w, d in spaces.items() if d}
        self.actions = {(i, tuple(w)): np.asarray(A, dtype=np.int64) % p for (i, w), A in actions.items()}
        if degree_cap is None:
            degree_cap = max((sum(w) for w in self.spaces), default=-1)
        self.degree_cap = degree_cap
        self.symmetric = False
        for (i, w), A in self.actions.items():
            tgt = add_w(w, unit_vector(n, i))
            if A.shape != (self.dim(tgt), self.dim(w)):
                raise ValueError(f"action matrix for x{i + 1} at {w} has shape {A.shape}")
        if check and not self.check_axioms(degree_cap):
            raise ValueError("action maps do not commute or q-th powers do not vanish")

    def dim(self, w):
        return self.spaces.get(tuple(w), 0)

    def action_matrix(self, i, w):
        w = tuple(w)
        A = self.actions.get((i, w))
        if A is not None:
            return A
        return np.zeros((self.dim(add_w(w, unit_vector(self.n, i))), self.dim(w)), dtype=np.int64)

    def weights_of_degree(self, d):
        return iter(sorted(w for w in self.spaces if sum(w) == d))

    def coord_bound(self):
        return max((max(w, default=0) for w in self.spaces), default=0)

    def top_degree_bound(self):
        return self.degree_cap

    @classmethod
    def from_json(cls, text: str) -> "ExplicitModule":
        data = json.loads(text)
        spaces = {tuple(s["weight"]): s["dim"] for s in data["spaces"]}
        actions = {(a["i"], tuple(a["weight"])): np.array(a["matrix"], dtype=np.int64) for a in data["actions"]}
        return cls(data["n"], data["p"], data["q"], spaces, actions, degree_cap=data["degree_cap"])


def materialize(M: GradedModule, d_max: Optional[int] = None) -> ExplicitModule:
    top = M.top_degree_bound() if d_max is None else d_max
    if top is None:
        raise CutoffError("need d_max for an unbounded module")
    spaces, actions = {}, {}
    for d in range(top + 1):
        for w in M.weights_of_degree(d):
            spaces[w] = M.dim(w)
            if d < top:
                for i in range(M.n):
                    A = M.action_matrix(i, w)
                    if A.size and np.any(A):
                        actions[(i, w)] = A
    known = M.top_degree_bound()
    complete = known is not None and top >= known
    return ExplicitModule(M.n, M.p, M.q, spaces, actions, degree_cap=top, check=False, complete=complete)


def truncate_above(M: GradedModule, d: int, q: Optional[int] = None) -> ExplicitModule:
    """M / M_{>= d}: keep degrees < d.  With q given (d <= q) it is a module over Q_n/m^[q]."""
    out = materialize(M, d - 1)
    out.complete = True
    if q is not None:
        if d > q:
            raise ValueError("truncation above degree q is needed for a module over Q_n/m^[q]")
        out.q = q
    return out


# ---------------------------------------------------------------------------
# operations


def maxdeg(M: GradedModule, d_cap: Optional[int] = None) -> int:
    """Largest degree with a nonzero component, -1 for the zero module."""
    top = M.top_degree_bound()
    if top is None:
        if d_cap is None:
            raise CutoffError("maxdeg of an unbounded module needs d_cap")
        top = d_cap
        if M.degree_dim(top) and (M.degree_cap is None or M.degree_cap > top):
            raise CutoffError(f"module is nonzero at the cutoff degree {top}")
    for d in range(top, -1, -1):
        if M.degree_dim(d):
            return d
    return -1


def generator_labels_at(fam: Family, n: int, w: tuple) -> list:
    """Labels at weight w that are not x_i times a label of lower weight."""
    hit = set()
    for i in range(n):
        if w[i] == 0:
            continue
        prev = w[:i] + (w[i] - 1,) + w[i + 1:]
        for lab in fam.basis(n, prev):
            out = fam.act(n, i, lab)
            if out is not None:
                hit.add(out)
    return [lab for lab in fam.basis(n, w) if lab not in hit]


def generation_degrees(fam: Family, n: int, d_max: Optional[int] = None) -> Dict[int, int]:
    """Dimensions of M/mM by degree at n (degrees of a minimal generating set)."""
    M = fam.eval(n)
    top = M.top_degree_bound() if d_max is None else d_max
    if top is None:
        raise CutoffError("generation_degrees of an unbounded family needs d_max")
    out: Dict[int, int] = {}
    for d in range(top + 1):
        if fam.symmetric:
            cnt = sum(orbit_size(w, n) * len(generator_labels_at(fam, n, w)) for w in M.sorted_weights_of_degree(d))
        else:
            cnt = sum(len(generator_labels_at(fam, n, w)) for w in compositions(d, n, M.coord_bound()))
        if cnt:
            out[d] = cnt
    return out


def t0(fam: Family, n: int, d_max: Optional[int] = None) -> int:
    degs = generation_degrees(fam, n, d_max)
    return max(degs) if degs else -1


def truncate_below(fam: Family, d: int):
    """(M^{<d}, M / M^{<d}): the submodule generated in degrees < d and the quotient."""
    memo: Dict[tuple, bool] = {}

    def generated(n, label):
        key = (n, label)
        if key in memo:
            return memo[key]
        w = fam.weight(n, label)
        if sum(w) < d:
            memo[key] = True
            return True
        res = False
        for i in range(n):
            if w[i] == 0:
                continue
            prev = w[:i] + (w[i] - 1,) + w[i + 1:]
            for mu in fam.basis(n, prev):
                if fam.act(n, i, mu) == label and generated(n, mu):
                    res = True
                    break
            if res:
                break
        memo[key] = res
        return res

    sub = Subquotient(fam, keep=generated, descriptor=f"{fam.descriptor}^{{<{d}}}")
    quo = Subquotient(fam, kill=generated, descriptor=f"{fam.descriptor}/{fam.descriptor}^{{<{d}}}")
    return sub, quo


def _fresh_product_kills(fam: Family, n: int, label, N: int, e: int) -> bool:
    """Is (y1...yN)^e * label zero, with y1..yN fresh variables appended after position n?"""
    lab = label
    for k in range(N):
        lab = fam.embed(n + k, lab, n + k)
        lab = fam.act_power(n + k + 1, n + k, lab, e)
        if lab is None:
            return True
    return False


class TorsionFamily(Subquotient):
    """Elements annihilated by a power of m^[q/p].

    An element of M{k^n} is torsion iff it is killed by (y1 ... yN)^{q/p} for fresh
    variables y1..yN and some N; at each n the chain of kernels is followed until it
    stops growing.
    """

    def __init__(self, fam: Family, q: Optional[int] = None):
        q = fam.q if q is None else q
        if q is None:
            raise ValueError("torsion is defined for families over S/m^[q]")
        self.e = q // fam.p
        self._stable: Dict[int, int] = {}
        self.source = fam
        super().__init__(fam, keep=self._is_torsion, descriptor=f"Gamma({fam.descriptor})")

    def stable_power(self, n: int) -> int:
        if n not in self._stable:
            fam = self.source
            labels = [lab for _, lab in fam.eval(n).labels()]
            total = len(labels)
            prev = None
            N = 1
            while True:
                cur = frozenset(lab for lab in labels if _fresh_product_kills(fam, n, lab, N, self.e))
                if cur == prev or len(cur) == total or N > total:
                    break
                prev = cur
                N += 1
            self._stable[n] = N
        return self._stable[n]

    def _is_torsion(self, n, label):
        return _fresh_product_kills(self.source, n, label, self.stable_power(n), self.e)


def torsion_submodule(fam: Family, n: int, q: Optional[int] = None) -> GradedModule:
    return TorsionFamily(fam, q).eval(n)


def tower_consistent(fam: Family, n: int, d_max: Optional[int] = None) -> bool:
    """incl(n) is injective with image the labels of eval(n+1) supported away from the new position."""
    M = fam.eval(n)
    top = M.top_degree_bound() if d_max is None else d_max
    if top is None:
        raise CutoffError("need d_max")
    for d in range(top + 1):
        for w in compositions(d, n, M.coord_bound()):
            src = fam.basis(n, w)
            img = [fam.incl(n, lab) for lab in src]
            if len(set(img)) != len(img):
                return False
            if set(img) != set(fam.basis(n + 1, w + (0,))):
                return False
            # compatibility with the actions
            for i in range(n):
                for lab in src:
                    a = fam.act(n, i, lab)
                    b = fam.act(n + 1, i, fam.incl(n, lab))
                    if (None if a is None else fam.incl(n, a)) != b:
                        return False
    return True
