"""Hasse-Schur derivatives, the shift functor on Sm-modules and its satellites.

Sh_m(M){k^n} is the weight-m part of M{k^(n+1)} in the last (adjoined) variable.
For modules over Sm = S/m^[q] the shift is Sh = Sh_{q/p}; the natural map
i_M : M -> Sh(M) multiplies by y^{q/p} where y is the adjoined variable, and

    Delta(M) = coker(i_M),   K(M) = ker(i_M),   Gamma(M) = torsion submodule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from . import linalg
from .combinatorics import compositions, orbit_size, partitions_of
from .evaluation import (
    CutoffError,
    DirectSum,
    Family,
    FamilyModule,
    GradedModule,
    Slice,
    Subquotient,
    TensorFamily,
    TorsionFamily,
    generation_degrees,
    generator_labels_at,
    t0,
)
from .homology import InvariantViolation, flatness_report, periodic_tor, slope, tor_bound_degree


@dataclass(frozen=True)
class ShiftDescriptor:
    mode: str = "generic-slice"      # generic-slice | sm-shift | block-shift
    m: int = 0
    q: Optional[int] = None
    a: int = 0
    p: Optional[int] = None

    def __post_init__(self):
        if self.mode == "sm-shift":
            if self.q is None or self.p is None or self.q < self.p or self.m != self.q // self.p:
                raise ValueError("sm-shift needs q = p^r with r >= 1 and m = q/p")
        elif self.mode == "block-shift":
            if self.a < 0:
                raise ValueError("block shift needs a >= 0")
        elif self.mode == "generic-slice":
            if self.m < 0:
                raise ValueError("slice index must be nonnegative")
        else:
            raise ValueError(f"unknown shift mode {self.mode!r}")


def _shift_exponent(fam: Family, q: Optional[int]) -> int:
    q = fam.q if q is None else q
    if q is None or q < fam.p:
        raise ValueError("the Sm shift needs a family over S/m^[q] with q >= p")
    return q // fam.p


def hasse_schur(fam: Family, m: int) -> Family:
    return Slice(fam, m)


def sm_shift(fam: Family, q: Optional[int] = None) -> Family:
    e = _shift_exponent(fam, q)
    return Slice(fam, e, descriptor=f"Sh({fam.descriptor})")


def iterate_shift(fam: Family, l: int, q: Optional[int] = None) -> Family:
    for _ in range(l):
        fam = sm_shift(fam, q)
    return fam


def _dims(fam: Family, n: int, d_max: Optional[int]) -> list:
    M = fam.eval(n)
    top = M.top_degree_bound() if d_max is None else d_max
    if top is None:
        raise CutoffError(f"{fam.descriptor} needs an explicit d_max")
    return M.degree_dims(top)


def graded_dims(fam: Family, n: int, d_max: Optional[int] = None) -> list:
    out = _dims(fam, n, d_max)
    while out and out[-1] == 0:
        out.pop()
    return out


def _pad(a: list, k: int) -> list:
    return list(a) + [0] * (k - len(a))


def leibniz_check(F: Family, G: Family, m: int, n: int, d_max: Optional[int] = None) -> dict:
    """dim Sh_m(F (x) G)_d = sum_{i+j=m} sum_e dim Sh_i(F)_e dim Sh_j(G)_{d-e}."""
    T = TensorFamily(F, G)
    top = d_max
    if top is None:
        top = T.eval(n).top_degree_bound()
        if top is None:
            raise CutoffError("leibniz_check needs d_max for unbounded families")
    lhs = _dims(Slice(T, m), n, top)
    rhs = [0] * (top + 1)
    contributing = []
    for i in range(m + 1):
        a = _dims(Slice(F, i), n, top)
        b = _dims(Slice(G, m - i), n, top)
        conv = [sum(a[e] * b[d - e] for e in range(d + 1)) for d in range(top + 1)]
        if any(conv):
            contributing.append((i, m - i))
        rhs = [x + y for x, y in zip(rhs, conv)]
    ok = lhs == rhs
    report = {"m": m, "n": n, "lhs": lhs, "rhs": rhs, "ok": ok, "contributing": contributing}
    if not ok:
        raise InvariantViolation(f"Leibniz identity fails: {report}")
    return report


# ---------------------------------------------------------------------------
# natural map and its kernel / cokernel


def natural_image(fam: Family, n: int, label, e: int):
    """i_M(label): include into eval(n+1) and multiply by y^e, y the new last variable."""
    lab = fam.embed(n, label, n)
    return fam.act_power(n + 1, n, lab, e)


class DeltaFamily(Subquotient):
    """coker(i_M : M -> Sh(M))."""

    def __init__(self, fam: Family, q: Optional[int] = None):
        self.source = fam
        self.e = _shift_exponent(fam, q)
        sh = Slice(fam, self.e)
        super().__init__(sh, kill=self._in_image, descriptor=f"Delta({fam.descriptor})")

    def _in_image(self, n, label):
        fam = self.source
        w = fam.weight(n + 1, label)[:-1]
        return any(natural_image(fam, n, lam, self.e) == label for lam in fam.basis(n, w))


class KFamily(Subquotient):
    """ker(i_M : M -> Sh(M))."""

    def __init__(self, fam: Family, q: Optional[int] = None):
        self.source = fam
        self.e = _shift_exponent(fam, q)
        super().__init__(fam, keep=lambda n, lab: natural_image(fam, n, lab, self.e) is None,
                         descriptor=f"K({fam.descriptor})")


def delta(fam: Family, q: Optional[int] = None) -> Family:
    return DeltaFamily(fam, q)


def kq(fam: Family, q: Optional[int] = None) -> Family:
    return KFamily(fam, q)


def gamma(fam: Family, q: Optional[int] = None) -> Family:
    return TorsionFamily(fam, q)


@dataclass
class NaturalMapData:
    n: int
    e: int
    matrices: Dict[int, np.ndarray]          # degree -> matrix eval(n)_d -> Sh(M)(n)_d
    source_basis: Dict[int, list]
    target_basis: Dict[int, list]
    kernel: List[tuple] = field(default_factory=list)      # labels of eval(n) mapped to zero
    cokernel: List[tuple] = field(default_factory=list)    # labels of Sh(M)(n) not hit


def natural_map(fam: Family, q: Optional[int], n: int, check_torsion: bool = True) -> NaturalMapData:
    e = _shift_exponent(fam, q)
    sh = Slice(fam, e)
    M, SM = fam.eval(n), sh.eval(n)
    top = M.top_degree_bound()
    if top is None:
        raise CutoffError("natural_map needs a finite module (family over Sm)")
    data = NaturalMapData(n, e, {}, {}, {})
    for d in range(top + 1):
        src = [(w, lab) for w in compositions(d, n, M.coord_bound()) for lab in fam.basis(n, w)]
        tgt = [(w, lab) for w in compositions(d, n, SM.coord_bound()) for lab in sh.basis(n, w)]
        pos = {lab: k for k, (_, lab) in enumerate(tgt)}
        A = np.zeros((len(tgt), len(src)), dtype=np.int64)
        hit = set()
        for c, (w, lab) in enumerate(src):
            img = natural_image(fam, n, lab, e)
            if img is None:
                data.kernel.append(lab)
            else:
                A[pos[img], c] = 1
                hit.add(img)
        data.cokernel.extend(lab for _, lab in tgt if lab not in hit)
        data.matrices[d] = A
        data.source_basis[d] = src
        data.target_basis[d] = tgt
    if check_torsion and data.kernel:
        tors = TorsionFamily(fam, q)
        for lab in data.kernel:
            if not tors._is_torsion(n, lab):
                raise InvariantViolation("kernel of the natural map is not torsion")
    return data


def delta_generation_check(fam: Family, q: Optional[int], n: int) -> dict:
    """Delta(M) is generated in degrees <= t0(M) - 1."""
    t_m = t0(fam, n)
    t_d = t0(delta(fam, q), n)
    ok = t_d <= t_m - 1 if t_d >= 0 else True
    return {"n": n, "t0": t_m, "t0_delta": t_d, "ok": ok}


# ---------------------------------------------------------------------------
# maps between families and the six-term sequence


class FamilyMap:
    """A GL-equivariant map given on labels: label -> list of (label, coefficient)."""

    def __init__(self, src: Family, dst: Family, rule: Callable):
        self.src, self.dst, self.rule = src, dst, rule

    def matrix(self, n: int, w: tuple) -> np.ndarray:
        sb = self.src.basis(n, w)
        tb = self.dst.basis(n, w)
        pos = {lab: k for k, lab in enumerate(tb)}
        A = np.zeros((len(tb), len(sb)), dtype=np.int64)
        for c, lab in enumerate(sb):
            for out, coef in self.rule(n, lab):
                A[pos[out], c] = (A[pos[out], c] + coef) % self.src.p
        return A


def label_map(src: Family, dst: Family) -> FamilyMap:
    """Identity on labels, zero on labels missing from the target."""

    def rule(n, lab):
        w = src.weight(n, lab)
        return [(lab, 1)] if lab in set(dst.basis(n, w)) else []

    return FamilyMap(src, dst, rule)


def summand_inclusion(part: Family, total: DirectSum, k: int) -> FamilyMap:
    return FamilyMap(part, total, lambda n, lab: [((k, lab), 1)])


def summand_projection(total: DirectSum, part: Family, k: int) -> FamilyMap:
    return FamilyMap(total, part, lambda n, lab: [(lab[1], 1)] if lab[0] == k else [])


@dataclass
class ShortExactTriple:
    L: Family
    M: Family
    N: Family
    f: FamilyMap
    g: FamilyMap
    name: str = ""


def _slice_matrix(F: FamilyMap, n: int, w: tuple, e: int) -> np.ndarray:
    return F.matrix(n + 1, w + (e,))


def _nat_matrix(fam: Family, n: int, w: tuple, e: int) -> np.ndarray:
    sb = fam.basis(n, w)
    tb = fam.basis(n + 1, w + (e,))
    pos = {lab: k for k, lab in enumerate(tb)}
    A = np.zeros((len(tb), len(sb)), dtype=np.int64)
    for c, lab in enumerate(sb):
        img = natural_image(fam, n, lab, e)
        if img is not None:
            A[pos[img], c] = 1
    return A


def _section(Q: np.ndarray, p: int) -> np.ndarray:
    """S with Q S = I for a surjective Q."""
    k = Q.shape[0]
    if k == 0:
        return np.zeros((Q.shape[1], 0), dtype=np.int64)
    S = linalg.solve(Q, np.eye(k, dtype=np.int64), p)
    if S is None:
        raise InvariantViolation("quotient map is not surjective")
    return S


def _weights_for(triple: ShortExactTriple, n: int):
    fams = [triple.L, triple.M, triple.N]
    bounds = [f.coord_bound() for f in fams]
    if any(b is None for b in bounds):
        raise CutoffError("six_term_check needs families over Sm")
    b = max(bounds)
    for d in range(b * n + 1):
        for lam in partitions_of(d, max_len=n, max_part=b):
            yield lam + (0,) * (n - len(lam))


def verify_short_exact(triple: ShortExactTriple, n: int) -> bool:
    p = triple.M.p
    for w in _weights_for(triple, n):
        F = triple.f.matrix(n, w)
        G = triple.g.matrix(n, w)
        dl, dm, dn = F.shape[1], F.shape[0], G.shape[0]
        if linalg.rank(F, p) != dl or linalg.rank(G, p) != dn or dl + dn != dm:
            return False
        if dm and np.any(linalg.matmul(G, F, p)):
            return False
    return True


def six_term_check(triple: ShortExactTriple, q: Optional[int], n: int) -> dict:
    """Exactness of 0 -> K(L) -> K(M) -> K(N) -> Delta(L) -> Delta(M) -> Delta(N) -> 0 at n."""
    if not verify_short_exact(triple, n):
        raise ValueError(f"{triple.name or 'triple'} is not short exact at n={n}")
    e = _shift_exponent(triple.M, q)
    p = triple.M.p
    L, M, N = triple.L, triple.M, triple.N
    totals = {"K(L)": 0, "K(M)": 0, "K(N)": 0, "D(L)": 0, "D(M)": 0, "D(N)": 0}
    exact = True
    failures = []
    for w in _weights_for(triple, n):
        f, g = triple.f.matrix(n, w), triple.g.matrix(n, w)
        shf, shg = _slice_matrix(triple.f, n, w, e), _slice_matrix(triple.g, n, w, e)
        iL, iM, iN = (_nat_matrix(X, n, w, e) for X in (L, M, N))
        BKL, BKM, BKN = (linalg.nullspace(i, p) for i in (iL, iM, iN))
        QL, QM, QN = (linalg.left_nullspace(i, p) if i.shape[0] else np.zeros((0, 0), dtype=np.int64)
                      for i in (iL, iM, iN))
        kl, km, kn = BKL.shape[1], BKM.shape[1], BKN.shape[1]
        dl, dmm, dn = QL.shape[0], QM.shape[0], QN.shape[0]
        # connecting map K(N) -> Delta(L)
        D = np.zeros((dl, kn), dtype=np.int64)
        for c in range(kn):
            x = linalg.solve(g, BKN[:, c], p)
            y = linalg.matmul(iM, x.reshape(-1, 1), p).ravel()
            u = linalg.solve(shf, y, p)
            if u is None:
                raise InvariantViolation("snake lemma lift failed")
            if dl:
                D[:, c] = linalg.matmul(QL, u.reshape(-1, 1), p).ravel()
        Df = linalg.matmul(linalg.matmul(QM, shf, p), _section(QL, p), p) if dl and dmm else np.zeros((dmm, dl), dtype=np.int64)
        Dg = linalg.matmul(linalg.matmul(QN, shg, p), _section(QM, p), p) if dmm and dn else np.zeros((dn, dmm), dtype=np.int64)
        fK = linalg.matmul(f, BKL, p) if kl else np.zeros((f.shape[0], 0), dtype=np.int64)
        gK = linalg.matmul(g, BKM, p) if km else np.zeros((g.shape[0], 0), dtype=np.int64)
        r_fK, r_gK = linalg.rank(fK, p), linalg.rank(gK, p)
        r_D, r_Df, r_Dg = linalg.rank(D, p), linalg.rank(Df, p), linalg.rank(Dg, p)
        checks = {
            "K(L) injective": r_fK == kl,
            "exact at K(M)": km - r_gK == r_fK,
            "exact at K(N)": kn - r_D == r_gK,
            "exact at D(L)": dl - r_Df == r_D,
            "exact at D(M)": dmm - r_Dg == r_Df,
            "D(N) surjective": r_Dg == dn,
        }
        if not all(checks.values()):
            exact = False
            failures.append({"weight": w, "failed": [k for k, v in checks.items() if not v]})
        mult = orbit_size(w, n)
        for key, val in zip(totals, (kl, km, kn, dl, dmm, dn)):
            totals[key] += mult * val
    torsion_free_N = TorsionFamily(N, q).eval(n).total_dim() == 0
    report = {"name": triple.name, "n": n, "exact": exact, "dims": totals,
              "N_torsion_free": torsion_free_N, "failures": failures[:5]}
    if torsion_free_N:
        report["three_term_exact"] = exact and totals["K(N)"] == 0 and \
            totals["D(L)"] - totals["D(M)"] + totals["D(N)"] == 0
    if not exact:
        raise InvariantViolation(f"six-term sequence not exact: {report}")
    return report


def sh_exactness_check(triple: ShortExactTriple, m: int, n: int) -> bool:
    """Sh_m is exact: graded dimensions are additive on a short exact triple."""
    a = _dims(Slice(triple.L, m), n, None)
    b = _dims(Slice(triple.M, m), n, None)
    c = _dims(Slice(triple.N, m), n, None)
    k = max(len(a), len(b), len(c))
    a, b, c = _pad(a, k), _pad(b, k), _pad(c, k)
    return all(y == x + z for x, y, z in zip(a, b, c))


# ---------------------------------------------------------------------------
# commutation checks


def shift_commute_check(fam: Family, q: Optional[int], n: int) -> dict:
    """Graded dimensions of Sh(Delta M) vs Delta(Sh M), and Sh(Gamma M) vs Gamma(Sh M)."""
    a = graded_dims(sm_shift(delta(fam, q), q), n)
    b = graded_dims(delta(sm_shift(fam, q), q), n)
    c = graded_dims(sm_shift(gamma(fam, q), q), n)
    d = graded_dims(gamma(sm_shift(fam, q), q), n)
    report = {"n": n, "Sh_Delta": a, "Delta_Sh": b, "Sh_Gamma": c, "Gamma_Sh": d,
              "delta_ok": a == b, "gamma_ok": c == d}
    if not (report["delta_ok"] and report["gamma_ok"]):
        raise InvariantViolation(f"shift does not commute: {report}")
    return report


def double_shift_check(fam: Family, q: Optional[int], n: int) -> dict:
    """Sh(i_M) and i_{Sh M} : Sh M -> Sh^2 M have the same graded ranks."""
    e = _shift_exponent(fam, q)
    sh = Slice(fam, e)
    S1 = sh.eval(n)
    top = S1.top_degree_bound()
    r1, r2 = [], []
    for d in range(top + 1):
        ones = twos = 0
        for w in compositions(d, n, S1.coord_bound()):
            for lab in sh.basis(n, w):
                # Sh(i_M): i_M at n+1 on a label of weight (w, e): new variable appended last
                a = natural_image(fam, n + 1, lab, e)
                # i_{Sh M}: new variable inserted before the sliced coordinate
                b = fam.act_power(n + 2, n, fam.embed(n + 1, lab, n), e)
                ones += a is not None
                twos += b is not None
        r1.append(ones)
        r2.append(twos)
    report = {"n": n, "rank_Sh_i": r1, "rank_i_Sh": r2, "ok": r1 == r2}
    if not report["ok"]:
        raise InvariantViolation(f"double shift composites differ: {report}")
    return report


def kernel_torsion_check(fam: Family, q: Optional[int], n: int) -> dict:
    """ker(i_M) is torsion, and i_M is injective iff the torsion vanishes."""
    data = natural_map(fam, q, n)
    torsion_dim = TorsionFamily(fam, q).eval(n).total_dim()
    injective = not data.kernel
    ok = injective == (torsion_dim == 0)
    return {"n": n, "kernel_dim": len(data.kernel), "torsion_dim": torsion_dim, "ok": ok}


# ---------------------------------------------------------------------------
# block shift


def block_shift(fam: Family, a: int, n: int, d_max: Optional[int] = None) -> dict:
    """Regrade fam.eval(a+n) by the degree in the last n variables.

    The piece of top degree in the last n variables (nothing in the first a) has the
    graded dimensions of fam.eval(n).
    """
    if a < 0:
        raise ValueError("block shift needs a >= 0")
    N = a + n
    M = fam.eval(N)
    top = M.top_degree_bound() if d_max is None else d_max
    if top is None:
        raise CutoffError("block_shift needs d_max for unbounded families")
    b = M.coord_bound()
    pieces: Dict[int, Dict[int, int]] = {}
    for D in range(top + 1):
        row: Dict[int, int] = {}
        for e in range(D + 1):
            tot = 0
            for u in partitions_of(D - e, max_len=a, max_part=b):
                uu = u + (0,) * (a - len(u))
                for v in partitions_of(e, max_len=n, max_part=b):
                    vv = v + (0,) * (n - len(v))
                    dim = M.dim(uu + vv) if a + n else M.dim(())
                    if dim:
                        tot += orbit_size(u, a) * orbit_size(v, n) * dim
            if tot:
                row[e] = tot
        if row:
            pieces[D] = row
    original = _dims(fam, n, top)
    top_piece = [pieces.get(D, {}).get(D, 0) for D in range(top + 1)]
    ok = top_piece == original
    return {"a": a, "n": n, "pieces": pieces, "top_piece": top_piece, "original": original, "ok": ok}


# ---------------------------------------------------------------------------
# shift experiments


def step_diagnostics(fam: Family, n: int, i_max: int = 2) -> dict:
    M = fam.eval(n)
    if M.total_dim() == 0:
        return {"t0": -1, "t1": -1, "slope": "0", "zero": True}
    table = periodic_tor(M, i_max, tor_bound_degree(M, i_max))
    t = table.t_sequence()
    return {"t0": t[0], "t1": t[1] if len(t) > 1 else -1, "slope": str(slope(table)), "zero": False}


def shift_until_flat(fam: Family, q: Optional[int], l_max: int, n_set: Sequence[int],
                     diagnostics: bool = True) -> dict:
    """Smallest l <= l_max with Sh^l(fam) flat at every n in n_set."""
    q = fam.q if q is None else q
    n_set = sorted(set(n_set))
    steps = []
    per_n_min: Dict[int, Optional[int]] = {n: None for n in n_set}
    torsion_free_step: Optional[int] = None
    cur = fam
    found = None
    for l in range(l_max + 1):
        step = {"l": l, "per_n": {}}
        all_flat = True
        all_tf = True
        for n in n_set:
            rep = flatness_report(cur, n)
            entry = {"flat": rep["flat"], "rank_check": rep.get("rank_check"),
                     "stable_beta1": rep["stable_beta1"]}
            if diagnostics:
                entry.update(step_diagnostics(cur, n))
            tf = TorsionFamily(cur, q).eval(n).total_dim() == 0
            entry["torsion_free"] = tf
            all_tf &= tf
            step["per_n"][n] = entry
            if rep["flat"] and per_n_min[n] is None:
                per_n_min[n] = l
            all_flat &= rep["flat"]
        steps.append(step)
        if all_tf and torsion_free_step is None:
            torsion_free_step = l
        if all_flat:
            found = l
            break
        cur = sm_shift(cur, q)
    return {
        "family": fam.descriptor,
        "q": q,
        "n_set": n_set,
        "l_max": l_max,
        "status": "flat" if found is not None else "exhausted",
        "minimal_l": found,
        "per_n_minimal_l": per_n_min,
        "torsion_free_step": torsion_free_step,
        "steps": steps,
    }
