"""Tor computations, Betti tables, slopes and line supports.

Three independent routes to Betti numbers are implemented:

* ``koszul_tor``: homology of M (x) Lambda(k^n) over the polynomial ring Q_n;
* ``periodic_tor``: Tor over Q_n/m^[q] as homology of M (x) F, where F is the tensor
  product of the minimal periodic resolutions of k over k[x_t]/(x_t^q);
* ``minimal_resolution``: a minimal free resolution over Q_n/m^[q] built weight by
  weight from kernels and minimal generators, returned with a certificate.

All complexes are fine graded by torus weights, so every linear algebra problem lives
in a single weight space.  For S_n-symmetric modules only weakly decreasing weights
are computed and multiplied by orbit sizes.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from . import linalg
from .combinatorics import compositions, orbit_size, partitions_of
from .evaluation import (
    CutoffError,
    Family,
    GradedModule,
    add_w,
    generation_degrees,
    unit_vector,
)
from .glideals import DomainError


class InvariantViolation(AssertionError):
    """A mathematical invariant failed on computed data."""


@dataclass
class BettiTable:
    ring: str
    p: int
    q: Optional[int]
    n: int
    entries: Dict[tuple, int]
    i_max: int
    j_max: int
    fine: Dict[tuple, int] = field(default_factory=dict)

    def __post_init__(self):
        self.entries = {k: v for k, v in self.entries.items() if v}
        for (i, j), v in self.entries.items():
            if i > self.i_max or j > self.j_max or v < 0:
                raise InvariantViolation(f"entry ({i},{j})={v} outside cutoffs or negative")

    def __getitem__(self, key) -> int:
        return self.entries.get(tuple(key), 0)

    def stable(self, i: int, j: int) -> bool:
        return j <= self.n

    def support(self) -> set:
        return set(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    # statistics ------------------------------------------------------
    def t_sequence(self) -> list:
        out = []
        for i in range(self.i_max + 1):
            js = [j for (a, j) in self.entries if a == i]
            out.append(max(js) if js else -1)
        return out

    def slope(self) -> Fraction:
        return slope(self)

    # export ----------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "ring": self.ring,
            "p": self.p,
            "q": self.q,
            "n": self.n,
            "i_max": self.i_max,
            "j_max": self.j_max,
            "entries": [
                {"i": i, "j": j, "dim": v, "stable": self.stable(i, j)}
                for (i, j), v in sorted(self.entries.items())
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "BettiTable":
        d = json.loads(text)
        entries = {(e["i"], e["j"]): e["dim"] for e in d["entries"]}
        return cls(d["ring"], d["p"], d["q"], d["n"], entries, d.get("i_max", 0), d.get("j_max", 0))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "j", "dim", "stable"])
        for (i, j), v in sorted(self.entries.items()):
            w.writerow([i, j, v, str(self.stable(i, j)).lower()])
        return buf.getvalue()

    def render(self) -> str:
        """Text table in row coordinates (row = j - i); '.' for zero, '*' marks stable entries."""
        cols = list(range(self.i_max + 1))
        rows = sorted({j - i for (i, j) in self.entries}) or [0]
        cells = {}
        for (i, j), v in self.entries.items():
            cells[(j - i, i)] = f"{v}{'*' if self.stable(i, j) else ''}"
        width = max([len(s) for s in cells.values()] + [len(str(c)) for c in cols] + [1])
        lines = ["      " + " ".join(str(c).rjust(width) for c in cols)]
        for r in range(rows[0], rows[-1] + 1):
            body = " ".join(cells.get((r, c), ".").rjust(width) for c in cols)
            lines.append(f"{r:>4}: {body}")
        lines.append(f"total: {' '.join(str(sum(v for (i, _), v in self.entries.items() if i == c)).rjust(width) for c in cols)}")
        return "\n".join(lines)


def slope(table: BettiTable) -> Fraction:
    """max over computed i >= 1 with Tor_i != 0 of (t_i - t_0)/i; 0 if there is no such i."""
    if table.is_zero():
        raise DomainError("slope of the zero table")
    t = table.t_sequence()
    if t[0] < 0:
        raise DomainError("table has no Tor_0 entries")
    vals = [Fraction(t[i] - t[0], i) for i in range(1, len(t)) if t[i] >= 0]
    return max(vals) if vals else Fraction(0)


# ---------------------------------------------------------------------------
# weight enumeration helpers


def _weights(M: GradedModule, j: int, part_bound: Optional[int]):
    """(weight, multiplicity) pairs of total degree j covering all weights of k^n."""
    n = M.n
    if M.symmetric:
        for lam in partitions_of(j, max_len=n, max_part=part_bound):
            yield lam + (0,) * (n - len(lam)), orbit_size(lam, n)
    else:
        for w in compositions(j, n, part_bound):
            yield w, 1


def _ring_label(M: GradedModule) -> str:
    return "S" if M.q is None else f"S/m^[{M.q}]"


def _stack_rank(blocks, p):
    return linalg.rank(blocks, p) if blocks.size else 0


# ---------------------------------------------------------------------------
# Koszul engine


def _koszul_weight(M: GradedModule, a: tuple, i_top: int, p: int) -> List[int]:
    """dim H_i of the Koszul complex in weight a, for i = 0..i_top."""
    support = [t for t in range(len(a)) if a[t] > 0]
    comps = {}
    for i in range(min(i_top + 1, len(support)) + 1):
        lst = []
        off = 0
        for T in combinations(support, i):
            w = tuple(a[t] - (1 if t in T else 0) for t in range(len(a)))
            d = M.dim(w)
            if d:
                lst.append((T, w, off, d))
                off += d
        comps[i] = (lst, off)
    ranks = {}
    for i in range(1, min(i_top + 1, len(support)) + 1):
        src, ns = comps[i]
        tgt, nt = comps[i - 1]
        if ns == 0 or nt == 0:
            ranks[i] = 0
            continue
        where = {T: (w, off, d) for T, w, off, d in tgt}
        D = np.zeros((nt, ns), dtype=np.int64)
        for T, w, off, d in src:
            for k, t in enumerate(T):
                T2 = T[:k] + T[k + 1:]
                if T2 not in where:
                    continue
                w2, off2, d2 = where[T2]
                A = M.action_matrix(t, w)
                if k % 2:
                    A = (-A) % p
                D[off2:off2 + d2, off:off + d] = A
        ranks[i] = linalg.rank(D, p)
    out = []
    for i in range(i_top + 1):
        if i not in comps:
            out.append(0)
            continue
        out.append(comps[i][1] - ranks.get(i, 0) - ranks.get(i + 1, 0))
    return out


def koszul_tor(M: GradedModule, i_max: int, j_max: int) -> BettiTable:
    """beta_{i,j} = dim H_i(M (x) Lambda(k^n))_j over the polynomial ring Q_n."""
    if M.q is not None:
        raise DomainError("koszul_tor computes Tor over the polynomial ring; module is over a quotient")
    if M.degree_cap is not None and j_max > M.degree_cap and not getattr(M, "complete", False):
        raise CutoffError(f"j_max={j_max} exceeds available degree {M.degree_cap}")
    p = M.p
    b = M.coord_bound()
    part_bound = None if b is None else b + 1
    entries: Dict[tuple, int] = {}
    fine: Dict[tuple, int] = {}
    i_top = min(i_max, M.n)
    for j in range(j_max + 1):
        for a, mult in _weights(M, j, part_bound):
            h = _koszul_weight(M, a, i_top, p)
            for i, v in enumerate(h):
                if v:
                    entries[(i, j)] = entries.get((i, j), 0) + mult * v
                    if M.symmetric:
                        fine[(i, tuple(x for x in a if x))] = v
    return BettiTable(_ring_label(M), p, None, M.n, entries, i_max, j_max, fine)


# ---------------------------------------------------------------------------
# periodic engine over Q_n/m^[q]


def _pdeg(c: int, q: int) -> int:
    return (c // 2) * q + (c % 2)


def _cmax(a: int, q: int) -> int:
    if a <= 0:
        return 0
    best = 2 * (a // q)
    if a >= 1:
        best = max(best, 2 * ((a - 1) // q) + 1)
    return best


class _PowerCache:
    def __init__(self, M: GradedModule):
        self.M = M
        self.cache: Dict[tuple, np.ndarray] = {}

    def power(self, t: int, w: tuple, e: int) -> np.ndarray:
        key = (t, w, e)
        got = self.cache.get(key)
        if got is None:
            p = self.M.p
            A = np.eye(self.M.dim(w), dtype=np.int64)
            cur = w
            for _ in range(e):
                A = linalg.matmul(self.M.action_matrix(t, cur), A, p)
                cur = cur[:t] + (cur[t] + 1,) + cur[t + 1:]
            got = A
            self.cache[key] = got
        return got


def _periodic_weight(M: GradedModule, pc: _PowerCache, a: tuple, i_top: int, q: int) -> List[int]:
    p = M.p
    n = len(a)
    caps = [_cmax(x, q) for x in a]
    comps = {}
    for i in range(i_top + 2):
        lst = {}
        off = 0
        for c in compositions(i, n, caps):
            w = tuple(x - _pdeg(ci, q) for x, ci in zip(a, c))
            d = M.dim(w)
            if d:
                lst[c] = (w, off, d)
                off += d
        comps[i] = (lst, off)
    ranks = {}
    for i in range(1, i_top + 2):
        src, ns = comps[i]
        tgt, nt = comps[i - 1]
        if ns == 0 or nt == 0:
            ranks[i] = 0
            continue
        D = np.zeros((nt, ns), dtype=np.int64)
        for c, (w, off, d) in src.items():
            sign_exp = 0
            for t in range(n):
                ct = c[t]
                if ct:
                    c2 = c[:t] + (ct - 1,) + c[t + 1:]
                    if c2 in tgt:
                        w2, off2, d2 = tgt[c2]
                        e = 1 if ct % 2 else q - 1
                        A = pc.power(t, w, e)
                        if sign_exp % 2:
                            A = (-A) % p
                        D[off2:off2 + d2, off:off + d] = A
                sign_exp += ct
        ranks[i] = linalg.rank(D, p)
    return [comps[i][1] - ranks.get(i, 0) - ranks.get(i + 1, 0) for i in range(i_top + 1)]


def periodic_tor(M: GradedModule, i_max: int, j_max: int) -> BettiTable:
    """Tor over Q_n/m^[q] via the tensor product of periodic resolutions of k."""
    q = M.q
    if q is None:
        raise DomainError("periodic_tor needs a module over Q_n/m^[q]")
    b = M.coord_bound()
    if b is None:
        b = M.top_degree_bound()
    if b is None:
        raise CutoffError("module has no finite coordinate bound")
    part_bound = b + _pdeg(i_max, q) + 1
    pc = _PowerCache(M)
    entries: Dict[tuple, int] = {}
    fine: Dict[tuple, int] = {}
    for j in range(j_max + 1):
        for a, mult in _weights(M, j, part_bound):
            h = _periodic_weight(M, pc, a, i_max, q)
            for i, v in enumerate(h):
                if v:
                    entries[(i, j)] = entries.get((i, j), 0) + mult * v
                    if M.symmetric:
                        fine[(i, tuple(x for x in a if x))] = v
    return BettiTable(_ring_label(M), M.p, q, M.n, entries, i_max, j_max, fine)


def tor_bound_degree(M: GradedModule, i: int) -> int:
    """Largest degree where Tor_i over Q_n/m^[q] can be nonzero."""
    top = M.top_degree_bound()
    return top + _pdeg(i, M.q) if i else top


# ---------------------------------------------------------------------------
# minimal resolution engine over Q_n/m^[q]


@dataclass
class ResolutionCertificate:
    q: Optional[int]
    n: int
    i_max: int
    j_max: int
    generators: List[List[tuple]]          # generator weights of F_i
    images: List[List[np.ndarray]]         # image of each generator (vector in F_{i-1} or M at its weight)
    d_squared_zero: bool = False
    exact: bool = False
    minimal: bool = False
    complete: bool = True

    def ranks(self) -> list:
        return [len(g) for g in self.generators]

    def shifts(self) -> list:
        return [sorted(sum(g) for g in gens) for gens in self.generators]

    @property
    def valid(self) -> bool:
        return self.d_squared_zero and self.exact and self.minimal


class _Free:
    """Free module over Q_n/m^[q] (Q_n itself when q is None) with generators of given weights."""

    def __init__(self, gens: List[tuple], q: Optional[int]):
        self.gens = gens
        self.q = q
        self._basis: Dict[tuple, list] = {}

    def basis(self, w) -> list:
        got = self._basis.get(w)
        if got is None:
            q = self.q
            got = [k for k, g in enumerate(self.gens)
                   if all(0 <= x - y and (q is None or x - y < q) for x, y in zip(w, g))]
            self._basis[w] = got
        return got

    def dim(self, w):
        return len(self.basis(w))

    def mult(self, src_w, e_w, v):
        """x^(e_w - src_w) applied to v in weight src_w, landing in weight e_w."""
        tb = self.basis(e_w)
        pos = {k: r for r, k in enumerate(tb)}
        out = np.zeros(len(tb), dtype=np.int64)
        for r, k in enumerate(self.basis(src_w)):
            if k in pos:
                out[pos[k]] = v[r]
        return out

    def weights(self, j_max: int) -> List[tuple]:
        ws = set()
        q = self.q
        for g in self.gens:
            room = j_max - sum(g)
            if room < 0:
                continue
            for d in range(room + 1):
                for e in compositions(d, len(g), None if q is None else q - 1):
                    ws.add(add_w(g, e))
        return sorted(ws, key=lambda w: (sum(w), w))


def _module_mult(M: GradedModule, src_w: tuple, dst_w: tuple, v: np.ndarray) -> np.ndarray:
    cur = src_w
    p = M.p
    v = np.asarray(v, dtype=np.int64)
    for t in range(M.n):
        for _ in range(dst_w[t] - src_w[t]):
            v = linalg.matmul(M.action_matrix(t, cur), v.reshape(-1, 1), p).ravel()
            cur = cur[:t] + (cur[t] + 1,) + cur[t + 1:]
    return v


def minimal_resolution(M: GradedModule, i_max: int, j_max: int, max_dim: int = 200000):
    """Minimal free resolution of M over Q_n/m^[q] (or Q_n when M.q is None).

    Only degrees <= j_max and homological degrees <= i_max are built; in that window the
    truncated resolution agrees with the full one.
    """
    q = M.q
    n, p = M.n, M.p
    cert = ResolutionCertificate(q, n, i_max, j_max, [], [])

    # weights of M up to j_max
    mweights = []
    for d in range(j_max + 1):
        mweights.extend(M.weights_of_degree(d))

    def target_dim(level, w):
        return M.dim(w) if level == 0 else cert_free[level - 1].dim(w)

    def target_mult(level, src_w, dst_w, v):
        if level == 0:
            return _module_mult(M, src_w, dst_w, v)
        return cert_free[level - 1].mult(src_w, dst_w, v)

    def phi_matrix(level, F: _Free, images, w):
        """Matrix at weight w of F_level -> (M or F_{level-1})."""
        cols = []
        for k in F.basis(w):
            g = F.gens[k]
            cols.append(target_mult(level, g, w, images[k]))
        rows = target_dim(level, w)
        if not cols:
            return np.zeros((rows, 0), dtype=np.int64)
        return np.stack(cols, axis=1) % p

    cert_free: List[_Free] = []

    # F_0 -> M: minimal generators of M
    gens0, imgs0 = [], []
    for w in mweights:
        d = M.dim(w)
        parts = []
        for t in range(n):
            if w[t] > 0:
                prev = w[:t] + (w[t] - 1,) + w[t + 1:]
                if M.dim(prev):
                    parts.append(M.action_matrix(t, prev))
        mM = np.concatenate(parts, axis=1) if parts else np.zeros((d, 0), dtype=np.int64)
        new = linalg.extend_to_complement(mM, np.eye(d, dtype=np.int64), p)
        for c in range(new.shape[1]):
            gens0.append(w)
            imgs0.append(new[:, c])
    cert.generators.append(gens0)
    cert.images.append(imgs0)
    cert_free.append(_Free(gens0, q))

    total = len(gens0)
    kernels_prev = None
    for level in range(1, i_max + 1):
        F = cert_free[level - 1]
        images = cert.images[level - 1]
        Z: Dict[tuple, np.ndarray] = {}
        gens, imgs = [], []
        for w in F.weights(j_max):
            A = phi_matrix(level - 1, F, images, w)
            K = linalg.nullspace(A, p)
            Z[w] = K
            if K.shape[1] == 0:
                continue
            parts = []
            for t in range(n):
                if w[t] > 0:
                    prev = w[:t] + (w[t] - 1,) + w[t + 1:]
                    Kp = Z.get(prev)
                    if Kp is not None and Kp.shape[1]:
                        parts.append(np.stack([F.mult(prev, w, Kp[:, c]) for c in range(Kp.shape[1])], axis=1))
            mZ = np.concatenate(parts, axis=1) if parts else np.zeros((K.shape[0], 0), dtype=np.int64)
            new = linalg.extend_to_complement(mZ, K, p)
            for c in range(new.shape[1]):
                gens.append(w)
                imgs.append(new[:, c])
            total += new.shape[1]
            if total > max_dim:
                cert.complete = False
                raise CutoffError("resolution exceeds the size budget", partial=cert)
        cert.generators.append(gens)
        cert.images.append(imgs)
        cert_free.append(_Free(gens, q))

    # certificate checks -------------------------------------------------
    ok_d2 = True
    for level in range(2, i_max + 1):
        Fprev = cert_free[level - 1]
        for k, g in enumerate(cert.generators[level]):
            v = cert.images[level][k]
            A = phi_matrix(level - 1, Fprev, cert.images[level - 1], g)
            if np.any(linalg.matmul(A, v.reshape(-1, 1), p)):
                ok_d2 = False
    if i_max >= 1:
        F0 = cert_free[0]
        for k, g in enumerate(cert.generators[1]):
            A = phi_matrix(0, F0, cert.images[0], g)
            if np.any(linalg.matmul(A, cert.images[1][k].reshape(-1, 1), p)):
                ok_d2 = False
    cert.d_squared_zero = ok_d2

    ok_exact = True
    for w in mweights:
        A0 = phi_matrix(0, cert_free[0], cert.images[0], w)
        if linalg.rank(A0, p) != M.dim(w):
            ok_exact = False
    for level in range(1, i_max + 1):
        Fl = cert_free[level]
        Fprev = cert_free[level - 1]
        for w in Fprev.weights(j_max):
            A_prev = phi_matrix(level - 1, Fprev, cert.images[level - 1], w)
            A_here = phi_matrix(level, Fl, cert.images[level], w)
            ker_dim = Fprev.dim(w) - linalg.rank(A_prev, p)
            if linalg.rank(A_here, p) != ker_dim:
                ok_exact = False
    cert.exact = ok_exact

    ok_min = True
    for level in range(1, i_max + 1):
        Fprev = cert_free[level - 1]
        for k, g in enumerate(cert.generators[level]):
            basis = Fprev.basis(g)
            v = cert.images[level][k]
            for r, kk in enumerate(basis):
                if Fprev.gens[kk] == g and v[r] % p:
                    ok_min = False
    cert.minimal = ok_min

    entries: Dict[tuple, int] = {}
    for i, gens in enumerate(cert.generators):
        for g in gens:
            j = sum(g)
            entries[(i, j)] = entries.get((i, j), 0) + 1
    table = BettiTable(_ring_label(M), p, q, n, entries, i_max, j_max)
    return cert, table


# ---------------------------------------------------------------------------
# Euler characteristic checks


def _poly_mul(a: list, b: list, top: int) -> list:
    out = [0] * (top + 1)
    for i, x in enumerate(a[: top + 1]):
        if x:
            for j, y in enumerate(b[: top + 1 - i]):
                out[i + j] += x * y
    return out


def euler_check_polynomial(table: BettiTable, M: GradedModule) -> bool:
    """sum_i (-1)^i beta_{i,j} = [t^j] HS_M(t)(1-t)^n for j up to the reliable range."""
    n = table.n
    top = table.j_max if table.i_max >= min(n, table.j_max) else table.i_max
    hs = M.degree_dims(top)
    one_minus = [(-1) ** k * comb(n, k) for k in range(n + 1)]
    rhs = _poly_mul(hs, one_minus, top)
    for j in range(top + 1):
        lhs = sum((-1) ** i * v for (i, jj), v in table.entries.items() if jj == j)
        if lhs != rhs[j]:
            return False
    return True


def euler_check_artinian(table: BettiTable, M: GradedModule) -> bool:
    """sum_i (-1)^i HS(F_i) = HS_M modulo t^{top+1} over Q_n/m^[q]."""
    q, n = table.q, table.n
    top = min(table.j_max, table.i_max)
    ring = [1]
    base = [1] * q
    for _ in range(n):
        ring = _poly_mul(ring, base, top)
    ring = ring + [0] * (top + 1 - len(ring))
    lhs = [0] * (top + 1)
    for (i, j), v in table.entries.items():
        for d in range(top + 1 - j):
            lhs[j + d] += (-1) ** i * v * ring[d]
    return lhs == M.degree_dims(top)


# ---------------------------------------------------------------------------
# families


def betti_of_family(fam: Family, n_set: Iterable[int], i_max: int, j_max: int):
    """Betti tables of fam at each n with a stable-range agreement report.

    Entries with j <= n are stable.  Raw dimensions grow with n (a degree-j polynomial
    functor evaluated at k^n), so agreement is checked on the weight-resolved data:
    for every partition lambda of j <= min(n, n') the dimension of Tor_i in weight
    lambda is the same at n and n'.
    """
    tables = {}
    for n in sorted(set(n_set)):
        M = fam.eval(n)
        tables[n] = koszul_tor(M, i_max, j_max) if fam.q is None else periodic_tor(M, i_max, j_max)
    ns = sorted(tables)
    compared = 0
    for a_idx, n1 in enumerate(ns):
        for n2 in ns[a_idx + 1:]:
            bound = min(n1, n2)
            f1 = {k: v for k, v in tables[n1].fine.items() if sum(k[1]) <= bound}
            f2 = {k: v for k, v in tables[n2].fine.items() if sum(k[1]) <= bound}
            if f1 != f2:
                diff = sorted(set(f1.items()) ^ set(f2.items()))
                raise InvariantViolation(f"stable entries disagree between n={n1} and n={n2}: {diff[:6]}")
            compared += len(f1)
    report = {"family": fam.descriptor, "n_set": ns, "stable_agree": True, "compared_weights": compared}
    return tables, report


def flatness_report(fam: Family, n: int, j_max: Optional[int] = None) -> dict:
    """Tor_1 at n, cross-validated against the rank criterion for freeness over Sm."""
    M = fam.eval(n)
    if fam.q is None:
        top = j_max if j_max is not None else n + 2
        table = koszul_tor(M, 1, top)
        beta1 = {j: v for (i, j), v in table.entries.items() if i == 1}
        return {"n": n, "flat": not beta1, "beta1": beta1, "j_max": top,
                "stable_beta1": {j: v for j, v in beta1.items() if j <= n}}
    top = tor_bound_degree(M, 1) if j_max is None else j_max
    table = periodic_tor(M, 1, top)
    beta1 = {j: v for (i, j), v in table.entries.items() if i == 1}
    gens = sum(v for (i, _), v in table.entries.items() if i == 0)
    dim = M.total_dim()
    free_by_rank = dim == gens * fam.q**n
    if j_max is None and free_by_rank != (not beta1):
        raise InvariantViolation(f"Tor_1 and rank criteria disagree at n={n} for {fam.descriptor}")
    return {"n": n, "flat": not beta1, "beta1": beta1, "j_max": top, "rank_check": free_by_rank,
            "stable_beta1": {j: v for j, v in beta1.items() if j <= n}}


def flatness_test(fam: Family, n_set: Iterable[int], j_max: Optional[int] = None) -> bool:
    """Flat at every n: Tor_1 vanishes (over Sm this is the full Tor_1, equivalent to freeness)."""
    return all(flatness_report(fam, n, j_max)["flat"] for n in n_set)


# ---------------------------------------------------------------------------
# line covers


@dataclass
class LineCover:
    lines: list          # (slope, intercept) as Fractions, row = slope * i + intercept
    residual: list
    entries: list

    @property
    def size(self) -> int:
        return len(self.lines)

    def covers(self, i: int, r: int) -> bool:
        return any(s * i + c == r for s, c in self.lines)


def detect_lines(table: BettiTable, max_lines: Optional[int] = None) -> LineCover:
    """Minimum number of lines (row coordinates, row = j - i) covering the support."""
    pts = sorted({(i, j - i) for (i, j) in table.entries})
    if not pts:
        return LineCover([], [], [])
    cands = {}
    for a in range(len(pts)):
        i1, r1 = pts[a]
        cands[(Fraction(0), Fraction(r1))] = None
        for b in range(a + 1, len(pts)):
            i2, r2 = pts[b]
            if i2 == i1:
                continue
            s = Fraction(r2 - r1, i2 - i1)
            if s < 0:
                continue
            c = Fraction(r1) - s * i1
            cands[(s, c)] = None
    lines = []
    for s, c in cands:
        cov = frozenset(k for k, (i, r) in enumerate(pts) if s * i + c == r)
        lines.append(((s, c), cov))
    lines.sort(key=lambda x: (-len(x[1]), x[0][0], x[0][1]))
    by_point = {k: [ln for ln in lines if k in ln[1]] for k in range(len(pts))}

    best = [None]

    def search(covered: frozenset, chosen: list):
        if best[0] is not None and len(chosen) >= len(best[0]):
            return
        if len(covered) == len(pts):
            best[0] = list(chosen)
            return
        remaining = len(pts) - len(covered)
        biggest = max(len(ln[1] - covered) for ln in lines)
        if best[0] is not None and len(chosen) + -(-remaining // biggest) >= len(best[0]):
            return
        k = min((k for k in range(len(pts)) if k not in covered), key=lambda k: len(by_point[k]))
        for ln in by_point[k]:
            chosen.append(ln[0])
            search(covered | ln[1], chosen)
            chosen.pop()

    search(frozenset(), [])
    chosen = best[0]
    if max_lines is not None and len(chosen) > max_lines:
        chosen = chosen[:max_lines]
    residual = [pt for pt in pts if not any(s * pt[0] + c == pt[1] for s, c in chosen)]
    return LineCover(chosen, residual, pts)


# ---------------------------------------------------------------------------
# complete-intersection slope audit


def ci_slope_audit(M: GradedModule, i_max: int) -> dict:
    """Growth of t_i over Q_n/m^[q] against the q/2 threshold."""
    q = M.q
    if q is None:
        raise DomainError("ci_slope_audit needs a module over Q_n/m^[q]")
    j_max = tor_bound_degree(M, i_max)
    table = periodic_tor(M, i_max, j_max)
    t = table.t_sequence()
    flat = t[1] < 0 if i_max >= 1 else None
    report = {"q": q, "n": M.n, "i_max": i_max, "t": t, "flat": flat, "violation": False}
    if i_max < 4:
        report["status"] = "inconclusive"
        return report
    half = i_max // 2
    if flat:
        report["observed_b"] = Fraction(0)
        report["status"] = "flat"
        return report
    ob = max(Fraction(t[i] - t[half], i - half) for i in range(half + 1, i_max + 1))
    report["observed_b"] = ob
    # a non-flat module cannot have growth rate below q/2
    if ob < Fraction(q, 2):
        report["violation"] = True
    evens = [(i, t[2 * i] - q * i) for i in range(1, i_max // 2 + 1)]
    report["even_offsets"] = evens
    tail = [v for _, v in evens[-3:]]
    if len(tail) >= 3 and len(set(tail)) == 1:
        report["status"] = "eventually-periodic"
        report["N"] = tail[0]
    else:
        report["status"] = "inconclusive"
    return report
