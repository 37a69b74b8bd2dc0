"""Corpora, brute-force oracles, golden records and verification suites.

The brute-force oracles here deliberately avoid the fast code paths they check:
membership is decided by enumerating item placements instead of the packing DP,
radicals by brute membership of powers, Tor by an independent resolution engine.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence

from . import dist, schur
from .combinatorics import as_ctx, orbit_size, partitions_of
from .descriptors import parse_family
from .evaluation import (
    CutoffError,
    DirectSum,
    ExteriorRep,
    FreeFamily,
    FrobeniusRep,
    Subquotient,
    SymRep,
    TensorRep,
    free_family,
    frobenius_standard,
    ideal_family,
    quotient_family,
    rep_family,
    residue_field,
    ring_family,
    tower_consistent,
)
from .glideals import (
    DigitVector,
    GLIdeal,
    SearchExhausted,
    canonical_generator,
    digit_vectors_up_to,
    gl_radical,
    ideal_member,
    is_gl_prime,
    non_primality_witness,
    parse_ideal,
)
from .homology import (
    InvariantViolation,
    betti_of_family,
    ci_slope_audit,
    detect_lines,
    euler_check_artinian,
    euler_check_polynomial,
    flatness_report,
    koszul_tor,
    minimal_resolution,
    periodic_tor,
    tor_bound_degree,
)


class GoldenDrift(RuntimeError):
    """A regenerated derived golden differs from the stored value."""


class UnknownSuite(KeyError):
    pass


RESOURCE_ERRORS = (CutoffError, MemoryError, SearchExhausted, dist.ClosureCapExceeded)


# ---------------------------------------------------------------------------
# brute-force oracles


def brute_member(lam: Sequence[int], b: DigitVector, p: int) -> bool:
    """x^lam in I(b), by trying every placement of the factors x_i^{p^m} on coordinates."""
    lam = [x for x in lam if x]
    items = [p**m for m, c in enumerate(b.b) for _ in range(c)]
    if not items:
        return True
    if sum(items) > sum(lam):
        return False
    n = len(lam)
    # placements per level are multisets of coordinates
    per_level = []
    for m, c in enumerate(b.b):
        if c:
            per_level.append((p**m, list(itertools.combinations_with_replacement(range(n), c))))
    for choice in itertools.product(*(opts for _, opts in per_level)):
        used = [0] * n
        for (size, _), coords in zip(per_level, choice):
            for i in coords:
                used[i] += size
        if all(u <= x for u, x in zip(used, lam)):
            return True
    return False


def brute_ideal_member(lam: Sequence[int], I: GLIdeal) -> bool:
    return any(brute_member(lam, g, I.p) for g in I.generators)


def brute_radical(I: GLIdeal, r_max: int = 6, n_max: Optional[int] = None) -> GLIdeal:
    """Least r such that some power of m^[p^r] lies in I (x1^{p^r}...xN^{p^r} in I).

    N = max generator degree suffices: every generator is a product of that many
    or fewer Frobenius factors.
    """
    p = I.p
    if n_max is None:
        n_max = I.max_degree()
    for r in range(r_max + 1):
        for N in range(1, n_max + 1):
            if brute_ideal_member((p**r,) * N, I):
                return GLIdeal.frobenius_power(p, r)
    raise SearchExhausted("no Frobenius power found")


def verify_witness(I: GLIdeal, f: Sequence[int], g: Sequence[int]) -> bool:
    """f, g outside I and their variable-disjoint product inside, all by brute force."""
    return (not brute_ideal_member(f, I) and not brute_ideal_member(g, I)
            and brute_ideal_member(tuple(f) + tuple(g), I))


# ---------------------------------------------------------------------------
# corpora


@dataclass
class CorpusEntry:
    id: str
    p: int
    q: Optional[int]
    descriptor: str
    cutoffs: dict = field(default_factory=dict)

    def build(self):
        return parse_family(self.descriptor, self.p, self.q)


def spectrum_primes() -> List[GLIdeal]:
    out = []
    for p in (2, 3, 5):
        out.append(GLIdeal.zero(p))
        out.extend(GLIdeal.frobenius_power(p, r) for r in range(6))
    return out


def spectrum_nonprimes() -> List[GLIdeal]:
    """Thirty products and sums with total digit weight at least two."""
    exprs = {
        2: ["m^2", "m * m[p^1]", "m[p^1]^2", "m * m[p^2]", "m[p^1] * m[p^2]", "m^3",
            "m^2 * m[p^1]", "m[p^2]^2", "m^2 + m[p^1]^2", "m * m[p^1] + m[p^2]^2",
            "m^3 + m[p^1]^2"],
        3: ["m^2", "m * m[p^1]", "m[p^1]^2", "m * m[p^2]", "m^3", "m^2 * m[p^1]",
            "m[p^1]^3", "m^4 + m[p^1]^2", "m * m[p^1] + m[p^2]^2", "m[p^1] * m[p^2]"],
        5: ["m^2", "m * m[p^1]", "m[p^1]^2", "m^3", "m * m[p^2]", "m^2 + m[p^1]^2",
            "m^2 * m[p^1]", "m[p^1] * m[p^2]", "m^4 * m[p^1] + m[p^1]^3"],
    }
    return [parse_ideal(e, p) for p, es in exprs.items() for e in es]


LINE_CORPUS = [
    CorpusEntry("p2/S/m[p^1]", 2, None, "S/m[p^1]"),
    CorpusEntry("p2/ideal:m[p^1]*m", 2, None, "ideal:m[p^1]*m"),
    CorpusEntry("p2/ideal:m^3", 2, None, "ideal:m^3"),
    CorpusEntry("p2/S/m^2", 2, None, "S/m^2"),
    CorpusEntry("p2/ideal:m^2*m[p^1]", 2, None, "ideal:m^2*m[p^1]"),
    CorpusEntry("p2/S/m[p^1]^2", 2, None, "S/m[p^1]^2"),
    CorpusEntry("p3/S/m[p^1]", 3, None, "S/m[p^1]"),
    CorpusEntry("p3/ideal:m[p^1]*m", 3, None, "ideal:m[p^1]*m"),
    CorpusEntry("p3/ideal:m^2", 3, None, "ideal:m^2"),
    CorpusEntry("p3/S/m*m[p^1]", 3, None, "S/m*m[p^1]"),
    CorpusEntry("p3/ideal:m^2*m[p^1]", 3, None, "ideal:m^2*m[p^1]"),
    CorpusEntry("p3/S/m^2+m[p^1]", 3, None, "S/m^2 + m[p^1]"),
]

SHIFT_CORPUS = [
    CorpusEntry(f"q{q}/{d}", p, q, d)
    for q, p, descs in [
        (2, 2, ["k", "S/m^2", "ideal:m", "ideal:m^2", "S/m^3", "free:1"]),
        (4, 2, ["k", "S/m^2", "ideal:m", "ideal:m[p^1]", "ideal:m*m[p^1]", "S/m^3", "ideal:m^3"]),
        (3, 3, ["k", "S/m^2", "ideal:m", "ideal:m^2", "S/m^3"]),
    ]
    for d in descs
]

S_SHIFT_CORPUS = [
    CorpusEntry("p2/S/m[p^1]", 2, None, "S/m[p^1]"),
    CorpusEntry("p3/S/m[p^1]", 3, None, "S/m[p^1]"),
    CorpusEntry("p2/ideal:m*m[p^1]", 2, None, "ideal:m*m[p^1]"),
    CorpusEntry("p3/ideal:m*m[p^1]", 3, None, "ideal:m*m[p^1]"),
    CorpusEntry("p2/free:1", 2, None, "free:1"),
]

CI_CORPUS = [
    CorpusEntry("q2/k", 2, 2, "k"),
    CorpusEntry("q4/k", 2, 4, "k"),
    CorpusEntry("q4/S/m^2", 2, 4, "S/m^2"),
    CorpusEntry("q4/ideal:m", 2, 4, "ideal:m"),
    CorpusEntry("q3/S/m^2", 3, 3, "S/m^2"),
    CorpusEntry("q4/S", 2, 4, "S"),
]


# ---------------------------------------------------------------------------
# shift experiments over S


def s_shift_experiment(fam, q_probe: int, m_max: int, n_set: Sequence[int]) -> dict:
    """Smallest m <= m_max with Sh_m(fam) flat over Q_n (Koszul Tor_1) at every n in n_set."""
    if fam.q is not None:
        raise ValueError("s_shift_experiment expects a family over S")
    ctx = as_ctx(fam.p)
    if not ctx.is_power(q_probe):
        raise ValueError("q_probe must be a power of p")
    n_set = sorted(set(n_set))
    steps = []
    per_n: Dict[int, Optional[int]] = {n: None for n in n_set}
    found = None
    for m in range(m_max + 1):
        sl = schur.hasse_schur(fam, m) if m else fam
        row = {}
        for n in n_set:
            rep = flatness_report(sl, n)
            row[n] = {"flat": rep["flat"], "beta1": {str(j): v for j, v in sorted(rep["beta1"].items())}}
            if rep["flat"] and per_n[n] is None:
                per_n[n] = m
        steps.append({"m": m, "per_n": row})
        if all(row[n]["flat"] for n in n_set):
            found = m
            break
    return {"family": fam.descriptor, "q_probe": q_probe, "n_set": n_set, "m_max": m_max,
            "status": "flat" if found is not None else "exhausted", "minimal_m": found,
            "per_n_minimal_m": per_n, "steps": steps}


# ---------------------------------------------------------------------------
# golden records


@dataclass
class GoldenRecord:
    id: str
    suite: str
    input: dict
    expected: object
    provenance: str                 # reference | trivial | derived
    oracle: Optional[str] = None    # required for derived records
    source: Optional[str] = None    # where a reference value is stated

    def __post_init__(self):
        if self.provenance not in ("reference", "trivial", "derived"):
            raise ValueError("provenance must be reference, trivial or derived")
        if self.provenance == "derived" and not self.oracle:
            raise ValueError("derived goldens need an oracle name")
        if self.provenance == "reference" and not self.source:
            raise ValueError("reference goldens need a source location")


GOLDEN_PATH = Path(__file__).with_name("data") / "goldens.json"


def _membership_cases():
    rng = random.Random(7)
    cases = []
    for p in (2, 3):
        vecs = [b for b in digit_vectors_up_to(9, p)]
        for _ in range(25):
            b = rng.choice(vecs)
            d = b.degree(p) + rng.randint(-1, 3)
            lam = rng.choice(list(partitions_of(max(d, 0), max_len=4)) or [()])
            cases.append({"p": p, "b": list(b.b), "lam": list(lam)})
    return cases


def _radical_cases():
    return [{"p": p, "expr": e} for p, es in
            [(2, ["m^2", "m * m[p^1]", "m[p^1]^2 + m[p^2]", "m[p^2] * m[p^1]", "m^3 + m[p^1]"]),
             (3, ["m^2", "m[p^1] * m[p^2]", "m[p^1]^2 + m^4", "m[p^2]^3"])] for e in es]


ORACLES: Dict[str, Callable[[dict], object]] = {
    "membership-brute-force": lambda inp: brute_member(inp["lam"], DigitVector(tuple(inp["b"])), inp["p"]),
    "radical-power-containment": lambda inp: str(brute_radical(parse_ideal(inp["expr"], inp["p"]))),
    "shift_until_flat": lambda inp: schur.shift_until_flat(
        parse_family(inp["descriptor"], inp["p"], inp["q"]), inp["q"], inp["l_max"], inp["n_set"],
        diagnostics=False)["minimal_l"],
    "s_shift_experiment": lambda inp: s_shift_experiment(
        parse_family(inp["descriptor"], inp["p"], None), inp["q_probe"], inp["m_max"], inp["n_set"])["minimal_m"],
}


def _reference_records() -> List[GoldenRecord]:
    recs = [
        GoldenRecord("betti/frobenius-quotient-p3", "betti-tables",
                     {"descriptor": "S/m[p^1]", "p": 3, "n": 9, "i_max": 9, "j_max": 9},
                     {f"{i},{3 * i}": math.comb(9, i) for i in range(4)}, "reference",
                     source="Koszul resolution of S/m^[3] for p = 3 (published table)"),
        GoldenRecord("betti/frobenius-times-m-p2", "betti-tables",
                     {"descriptor": "ideal:m[p^1]*m", "p": 2, "n": 8, "i_max": 8, "j_max": 8},
                     sorted([[i, i + 3] for i in range(6)] + [[2, 6], [3, 8]]), "reference",
                     source="support of the Betti table of m^[2] m for p = 2 (published table)"),
        GoldenRecord("degree-ten/char2", "degree-ten", {"p": 2, "d": 10, "n": 10},
                     sorted(list(b) for b in dist.DEGREE10_CHAR2.values()), "reference",
                     source="list of char-2 GL-ideals generated in degree 10"),
        GoldenRecord("spectrum/primes", "spectrum", {"p": [2, 3, 5], "r_max": 5},
                     "(0) and m^[p^r] are GL-prime", "reference",
                     source="classification of GL-prime ideals of S"),
        GoldenRecord("empty", "empty", {}, None, "trivial"),
    ]
    return recs


def _derived_inputs() -> List[GoldenRecord]:
    recs = []
    for k, c in enumerate(_membership_cases()):
        recs.append(GoldenRecord(f"membership/{k:02d}", "oracles", c, None, "derived",
                                 oracle="membership-brute-force"))
    for k, c in enumerate(_radical_cases()):
        recs.append(GoldenRecord(f"radical/{k:02d}", "oracles", c, None, "derived",
                                 oracle="radical-power-containment"))
    for e in SHIFT_CORPUS:
        recs.append(GoldenRecord(f"shift/{e.id}", "shift",
                                 {"descriptor": e.descriptor, "p": e.p, "q": e.q, "l_max": 12,
                                  "n_set": [4, 5, 6]}, None, "derived", oracle="shift_until_flat"))
    for e in S_SHIFT_CORPUS:
        recs.append(GoldenRecord(f"s-shift/{e.id}", "s-shift",
                                 {"descriptor": e.descriptor, "p": e.p, "q_probe": e.p, "m_max": 8,
                                  "n_set": [4, 5, 6]}, None, "derived", oracle="s_shift_experiment"))
    return recs


def compute_goldens() -> List[GoldenRecord]:
    """Every record, with derived values computed from their oracles."""
    recs = _reference_records()
    for r in _derived_inputs():
        r.expected = ORACLES[r.oracle](r.input)
        recs.append(r)
    return sorted(recs, key=lambda r: r.id)


def write_goldens(path: Optional[Path] = None) -> Path:
    path = Path(path or GOLDEN_PATH)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps([asdict(r) for r in compute_goldens()], indent=1, sort_keys=True) + "\n")
    return path


def load_goldens(path: Optional[Path] = None) -> List[GoldenRecord]:
    if path is None:
        text = resources.files("glcharp").joinpath("data/goldens.json").read_text()
    else:
        text = Path(path).read_text()
    return [GoldenRecord(**d) for d in json.loads(text)]


def regenerate_goldens(oracles: Optional[Iterable[str]] = None, path: Optional[Path] = None) -> List[GoldenRecord]:
    """Recompute derived goldens from their oracles; any drift is a hard error.

    Reference and trivial records are returned unchanged.
    """
    wanted = set(ORACLES) if oracles is None else set(oracles)
    unknown = wanted - set(ORACLES)
    if unknown:
        raise KeyError(f"unknown oracles {sorted(unknown)}")
    out = []
    drift = []
    for r in load_goldens(path):
        if r.provenance == "derived" and r.oracle in wanted:
            val = json.loads(json.dumps(ORACLES[r.oracle](r.input)))
            if val != r.expected:
                drift.append((r.id, r.expected, val))
            r = GoldenRecord(**{**asdict(r), "expected": val})
        out.append(r)
    if drift:
        raise GoldenDrift(f"{len(drift)} derived goldens drifted: {drift[:5]}")
    return out


def golden(rid: str) -> GoldenRecord:
    for r in load_goldens():
        if r.id == rid:
            return r
    raise KeyError(rid)


# ---------------------------------------------------------------------------
# suites

Check = Callable[[], Optional[dict]]
SUITES: Dict[str, Callable[[random.Random], Iterable[tuple]]] = {}


def suite(name: str):
    def deco(fn):
        SUITES[name] = fn
        return fn
    return deco


def _expect(ok: bool, **diff) -> Optional[dict]:
    return None if ok else diff


@suite("empty")
def _suite_empty(rng):
    return []


@suite("spectrum")
def _suite_spectrum(rng):
    for I in spectrum_primes():
        yield f"prime/p{I.p}/{I}", lambda I=I: _expect(is_gl_prime(I) and non_primality_witness(I) is None,
                                                         ideal=str(I))
    for k, I in enumerate(spectrum_nonprimes()):
        def check(I=I):
            if is_gl_prime(I):
                return {"ideal": str(I), "error": "reported prime"}
            f, g = non_primality_witness(I)
            return _expect(verify_witness(I, f, g), ideal=str(I), witness=[list(f), list(g)])
        yield f"nonprime/{k:02d}/p{I.p}/{I}", check


@suite("degree-ten")
def _suite_degree_ten(rng):
    p, d, n = 2, 10, 10
    ideals = {name: GLIdeal(p, [DigitVector(b)]) for name, b in dist.DEGREE10_CHAR2.items()}
    pieces = {name: dist.ideal_degree_piece(I, d, n) for name, I in ideals.items()}
    names = sorted(ideals)
    yield "distinct-ideals", lambda: _expect(len({ideals[a] for a in names}) == 5)
    yield "distinct-pieces", lambda: _expect(len({frozenset(pieces[a]) for a in names}) == 5,
                                             sizes={a: len(pieces[a]) for a in names})
    for name in names:
        def stable(name=name):
            ok = dist.verify_gl_stability(dist.expand_orbits(pieces[name]), d, n, p)
            gen = canonical_generator(DigitVector(dist.DEGREE10_CHAR2[name]), p)
            gen = gen + (0,) * (n - len(gen))
            closure = dist.symmetric_closure([gen], d, n, p)
            return _expect(ok and closure == pieces[name], ideal=name, stable=ok,
                           closure_matches=closure == pieces[name])
        yield f"stable/{name}", stable
    # generated in degree 10: nothing of lower degree
    for name in names:
        yield f"generated-in-10/{name}", lambda name=name: _expect(
            not any(dist.ideal_degree_piece(ideals[name], e, n) for e in range(d)))


@suite("betti-tables")
def _suite_betti_tables(rng):
    left = golden("betti/frobenius-quotient-p3")

    def check_left():
        M = parse_family(left.input["descriptor"], 3).eval(9)
        table = koszul_tor(M, left.input["i_max"], left.input["j_max"])
        got = {f"{i},{j}": v for (i, j), v in sorted(table.entries.items())}
        return _expect(got == left.expected and euler_check_polynomial(table, M), got=got)

    right = golden("betti/frobenius-times-m-p2")

    def check_right():
        M = parse_family(right.input["descriptor"], 2).eval(8)
        table = koszul_tor(M, right.input["i_max"], right.input["j_max"])
        got = sorted([i, j] for (i, j) in table.support())
        cover = detect_lines(table)
        slopes = sorted(s for s, _ in cover.lines)
        return _expect(got == right.expected and len(cover.lines) == 2 and slopes == [0, 1]
                       and not cover.residual, got=got, lines=[[str(s), str(c)] for s, c in cover.lines])

    yield "left", check_left
    yield "right", check_right


def line_check(entry: CorpusEntry, n: int = 10, i_max: int = 8, j_max: int = 10, max_lines: int = 4):
    M = entry.build().eval(n)
    table = koszul_tor(M, i_max, j_max)
    cover = detect_lines(table, max_lines=max_lines)
    return _expect(not cover.residual and len(cover.lines) <= max_lines,
                   residual=cover.residual, lines=[[str(s), str(c)] for s, c in cover.lines])


@suite("lines")
def _suite_lines(rng):
    for e in LINE_CORPUS:
        yield e.id, lambda e=e: line_check(e)


def _hasse_schur_families(p: int, q: int):
    return [
        ring_family(p, q),
        residue_field(p, q),
        quotient_family(parse_ideal("m^2", p), q),
        ideal_family(parse_ideal("m", p), q=q),
        free_family(p, q, [SymRep(1)]),
        FreeFamily(p, q, [frobenius_standard(p, 1)]),
        rep_family(p, SymRep(2)),
        rep_family(p, ExteriorRep(2)),
        rep_family(p, frobenius_standard(p, 1)),
    ]


def induced_delta_check(p: int, q: int, rep, n: int) -> Optional[dict]:
    """dims Delta(Sm (x) V) = sum_{i=1}^{q/p} dims(Sm (x) Sh_i V)."""
    e = q // p
    F = FreeFamily(p, q, [rep])
    lhs = schur.graded_dims(schur.delta(F, q), n)
    sm = schur.graded_dims(ring_family(p, q), n)
    V = rep_family(p, rep)
    rhs = [0] * (len(sm) + rep.max_entry() * n + 1)
    for i in range(1, e + 1):
        w = schur.graded_dims(schur.hasse_schur(V, i), n, rep.degree)
        for a, x in enumerate(sm):
            for b, y in enumerate(w):
                rhs[a + b] += x * y
    while rhs and rhs[-1] == 0:
        rhs.pop()
    return _expect(lhs == rhs, lhs=lhs, rhs=rhs, rep=rep.name, q=q, n=n)


@suite("hasse-schur")
def _suite_hasse_schur(rng):
    for p, q in ((2, 4), (3, 3)):
        for k, F in enumerate(_hasse_schur_families(p, q)):
            def sh0(F=F):
                bad = [n for n in (1, 2, 3) if schur.graded_dims(schur.hasse_schur(F, 0), n, 6) !=
                       schur.graded_dims(F, n, 6) or not tower_consistent(F, n, 6)]
                return _expect(not bad, family=F.descriptor, bad_n=bad)
            yield f"sh0/p{p}/{k}", sh0
    for p in (2, 3):
        for r in (1, 2, 3):
            for base in (SymRep(1), SymRep(2), ExteriorRep(2)):
                rep = FrobeniusRep(base, r, p)
                V = rep_family(p, rep)

                def frob(V=V, r=r, rep=rep, p=p):
                    n = 2 if rep.degree > 9 else 3
                    nz = [m for m in range(1, p**r) if any(schur.graded_dims(schur.hasse_schur(V, m), n, rep.degree))]
                    top = schur.graded_dims(schur.hasse_schur(V, p**r), n, rep.degree)
                    return _expect(not nz and any(top), rep=rep.name, nonzero_slices=nz)
                yield f"frobenius/p{p}/r{r}/{base.name}", frob
    # Leibniz identity on family pairs
    pairs = []
    for p, q in ((2, 4), (3, 3)):
        fams = _hasse_schur_families(p, q)
        pairs += [(fams[a], fams[b], m) for a, b, m in
                  [(0, 1, 1), (0, 2, 2), (2, 3, 1), (4, 5, 2), (6, 7, 1), (1, 8, 2), (3, 3, 1)]]
    for k, (F, G, m) in enumerate(pairs):
        yield f"leibniz/{k:02d}", lambda F=F, G=G, m=m: _expect(
            all(schur.leibniz_check(F, G, m, n, 8)["ok"] for n in (1, 2, 3)))
    # Delta of induced modules
    for p, q in ((2, 2), (2, 4), (2, 8), (3, 3), (3, 9)):
        e = q // p
        for r in range(0, 3):
            rep = frobenius_standard(p, r)
            if p**r > e:
                yield f"delta-frobenius-zero/q{q}/r{r}", lambda p=p, q=q, rep=rep: _expect(
                    all(schur.graded_dims(schur.delta(FreeFamily(p, q, [rep]), q), n) == [] for n in (1, 2, 3, 4)),
                    rep=rep.name)
        for rep in (SymRep(1), SymRep(2), ExteriorRep(2), frobenius_standard(p, 1),
                    TensorRep(SymRep(1), frobenius_standard(p, 1))):
            for n in (2, 3):
                yield f"delta-induced/q{q}/{rep.name}/n{n}", lambda p=p, q=q, rep=rep, n=n: induced_delta_check(p, q, rep, n)


def short_exact_triples(p: int, q: int) -> List[schur.ShortExactTriple]:
    Sm = ring_family(p, q)
    k = residue_field(p, q)
    mI = ideal_family(parse_ideal("m", p), q=q)
    out = [schur.ShortExactTriple(mI, Sm, k, schur.label_map(mI, Sm), schur.label_map(Sm, k), "m -> Sm -> k")]
    fr = parse_ideal("m[p^1]", p) if q > p else parse_ideal("m^2", p)
    J = ideal_family(fr, q=q)
    Q = quotient_family(fr, q)
    out.append(schur.ShortExactTriple(J, Sm, Q, schur.label_map(J, Sm), schur.label_map(Sm, Q), f"({fr}) -> Sm -> Sm/({fr})"))
    m2 = ideal_family(parse_ideal("m^2", p), q=q)
    mm2 = ideal_family(parse_ideal("m", p), parse_ideal("m^2", p), q=q)
    out.append(schur.ShortExactTriple(m2, mI, mm2, schur.label_map(m2, mI), schur.label_map(mI, mm2), "m^2 -> m -> m/m^2"))
    S = DirectSum([mI, k])
    out.append(schur.ShortExactTriple(mI, S, k, schur.summand_inclusion(mI, S, 0), schur.summand_projection(S, k, 1), "split"))
    # Sm (x) V^(1) inside Sm (x) Sym^p, with free quotient
    big = FreeFamily(p, q, [SymRep(p)])

    def frob(n, lab):
        u = lab[1]
        return sum(1 for x in u if x) == 1

    sub = Subquotient(big, keep=frob, descriptor="Sm (x) V^(1)")
    quo = Subquotient(big, kill=frob, descriptor="Sm (x) Sym^p / V^(1)")
    out.append(schur.ShortExactTriple(sub, big, quo, schur.label_map(sub, big), schur.label_map(big, quo),
                                      "Sm(x)V^(1) -> Sm(x)Sym^p -> free quotient"))
    return out


STRUCTURE_MODULES = [("S/m^2", 2, 4), ("S/m^3", 2, 4), ("ideal:m", 2, 4), ("k", 2, 4), ("S/m*m[p^1]", 2, 4),
                     ("free:1", 2, 4), ("S/m^2", 3, 3), ("ideal:m^2", 3, 9), ("S/m^2", 2, 2), ("S/m^4", 3, 9)]


@suite("shift-structure")
def _suite_shift_structure(rng):
    for d, p, q in STRUCTURE_MODULES:
        fam = parse_family(d, p, q)
        tag = f"q{q}/{d}"
        for n in (1, 2, 3):
            yield f"kernel-torsion/{tag}/n{n}", lambda fam=fam, q=q, n=n: _expect(
                schur.kernel_torsion_check(fam, q, n)["ok"])
            yield f"delta-degree/{tag}/n{n}", lambda fam=fam, q=q, n=n: _expect(
                schur.delta_generation_check(fam, q, n)["ok"])
        for n in (1, 2):
            yield f"commute/{tag}/n{n}", lambda fam=fam, q=q, n=n: _expect(
                schur.shift_commute_check(fam, q, n)["delta_ok"])
            yield f"double-shift/{tag}/n{n}", lambda fam=fam, q=q, n=n: _expect(
                schur.double_shift_check(fam, q, n)["ok"])
    for p, q in ((2, 4), (3, 9), (2, 2)):
        for t in short_exact_triples(p, q):
            for n in (1, 2, 3):
                def six(t=t, q=q, n=n):
                    rep = schur.six_term_check(t, q, n)
                    ok = rep["exact"] and rep.get("three_term_exact", True)
                    return _expect(ok and schur.sh_exactness_check(t, q // t.M.p, n), report=rep)
                yield f"six-term/q{q}/{t.name}/n{n}", six


@suite("shift")
def _suite_shift(rng):
    goldens = {r.id: r for r in load_goldens() if r.suite == "shift"}
    for e in SHIFT_CORPUS:
        rec = goldens[f"shift/{e.id}"]

        def check(e=e, rec=rec):
            rep = schur.shift_until_flat(e.build(), e.q, rec.input["l_max"], rec.input["n_set"], diagnostics=False)
            same = len(set(rep["per_n_minimal_l"].values())) == 1
            return _expect(rep["status"] == "flat" and same and rep["minimal_l"] == rec.expected,
                           status=rep["status"], per_n=rep["per_n_minimal_l"], golden=rec.expected)
        yield e.id, check


@suite("s-shift")
def _suite_s_shift(rng):
    goldens = {r.id: r for r in load_goldens() if r.suite == "s-shift"}
    for e in S_SHIFT_CORPUS:
        rec = goldens[f"s-shift/{e.id}"]

        def check(e=e, rec=rec):
            rep = s_shift_experiment(e.build(), rec.input["q_probe"], rec.input["m_max"], rec.input["n_set"])
            same = len(set(rep["per_n_minimal_m"].values())) == 1
            return _expect(rep["status"] == "flat" and same and rep["minimal_m"] == rec.expected,
                           per_n=rep["per_n_minimal_m"], golden=rec.expected)
        yield e.id, check


@suite("divided-powers")
def _suite_divided_powers(rng):
    qs = [q for q in range(2, 10) if any(as_ctx(p).is_power(q) for p in (2, 3, 5, 7) if q % p == 0)]

    def vanishing():
        bad = []
        for q in qs:
            p = next(p for p in (2, 3, 5, 7) if q % p == 0)
            local = random.Random(q)
            polys = [dist.PolyFp.monomial((0, 1), p), dist.PolyFp.monomial((0, 1, 0), p)]
            polys += [dist.PolyFp.random(3, local.randint(1, 2), p, local, 3) for _ in range(3)]
            for f in polys:
                fq = f ** q
                for l in range(1, 28):
                    if l % q and not dist.apply_e(1, 2, l, fq).is_zero():
                        bad.append((q, l, repr(f)))
        return _expect(not bad, failures=bad[:5])

    yield "hasse-vanishing", vanishing

    def identities():
        bad = []
        for t in range(200):
            p = rng.choice((2, 3, 5))
            n = rng.randint(2, 4)
            f = dist.PolyFp.random(n, rng.randint(1, 5), p, rng)
            g = dist.PolyFp.random(n, rng.randint(0, 5), p, rng)
            i, j = rng.sample(range(1, n + 1), 2)
            l, s = rng.randint(0, 6), rng.randint(0, 6)
            if not dist.composition_check(i, j, l, s, f):
                bad.append(("composition", t))
            try:
                dist.divided_leibniz_check(i, j, l, f, g)
            except InvariantViolation:
                bad.append(("leibniz", t))
            if not dist.frobenius_commutation_check(f, i, j, rng.randint(1, 3 * p)):
                bad.append(("frobenius", t))
        return _expect(not bad, failures=bad[:5])

    yield "composition-comodule-frobenius", identities

    for p in (2, 3):
        def agreement(p=p):
            bad = []
            for d in range(1, 13):
                for lam in partitions_of(d):
                    from .glideals import orbit_ideal
                    b = orbit_ideal(lam, p)
                    I = GLIdeal(p, [b])
                    g = canonical_generator(b, p)
                    if len(g) <= 5:
                        n = len(g) + 1
                        clo = dist.gln_submodule_closure([dist.PolyFp.monomial(g + (0,) * (n - len(g)), p)], d, n, p)
                        got = {tuple(sorted(a, reverse=True)) for a in clo}
                    else:
                        n = len(g)
                        got = dist.symmetric_closure([g], d, n, p)
                    if got != dist.ideal_degree_piece(I, d, n):
                        bad.append(lam)
            return _expect(not bad, failures=bad[:5])
        yield f"closure-vs-ideal/p{p}", agreement


@suite("oracles")
def _suite_oracles(rng):
    def membership():
        bad = []
        for p in (2, 3):
            for b in digit_vectors_up_to(8, p):
                I = GLIdeal(p, [b])
                for d in range(b.degree(p) - 1, b.degree(p) + 3):
                    for lam in partitions_of(max(d, 0), max_len=4):
                        if ideal_member(lam, I) != brute_member(lam, b, p):
                            bad.append((p, b.b, lam))
        return _expect(not bad, failures=bad[:5])

    yield "membership-dp-vs-brute", membership

    def radical():
        bad = []
        for p in (2, 3):
            vecs = list(digit_vectors_up_to(9, p))
            for a in vecs:
                for b in vecs[:12]:
                    I = GLIdeal(p, [a, b])
                    if gl_radical(I) != brute_radical(I):
                        bad.append(str(I))
        return _expect(not bad, failures=bad[:5])

    yield "radical-formula-vs-power-containment", radical

    for d, p, n, j in [("S/m[p^1]", 2, 3, 6), ("ideal:m[p^1]*m", 2, 3, 7), ("S/m^2", 3, 3, 5),
                       ("ideal:m^2", 2, 4, 6), ("S/m*m[p^1]", 3, 2, 8)]:
        def koszul_vs_res(d=d, p=p, n=n, j=j):
            M = parse_family(d, p).eval(n)
            cert, res = minimal_resolution(M, n, j)
            kos = koszul_tor(M, n, j)
            return _expect(cert.valid and res.entries == kos.entries and euler_check_polynomial(kos, M),
                           resolution=sorted(res.entries.items()), koszul=sorted(kos.entries.items()))
        yield f"koszul-vs-resolution/{d}/p{p}/n{n}", koszul_vs_res
    for d, p, q, n in [("k", 2, 4, 2), ("S/m^2", 2, 4, 2), ("ideal:m", 3, 3, 2), ("S/m^2", 2, 2, 3), ("k", 3, 9, 1)]:
        def periodic_vs_res(d=d, p=p, q=q, n=n):
            M = parse_family(d, p, q).eval(n)
            i_max = 4
            j = tor_bound_degree(M, i_max)
            cert, res = minimal_resolution(M, i_max, j)
            per = periodic_tor(M, i_max, j)
            return _expect(cert.valid and res.entries == per.entries and euler_check_artinian(per, M),
                           resolution=sorted(res.entries.items()), periodic=sorted(per.entries.items()))
        yield f"periodic-vs-resolution/{d}/q{q}/n{n}", periodic_vs_res
    for e in LINE_CORPUS[:6]:
        def euler(e=e):
            fam = e.build()
            tables, _ = betti_of_family(fam, (4, 5), 5, 5)
            return _expect(all(euler_check_polynomial(t, fam.eval(n)) for n, t in tables.items()))
        yield f"euler-stable/{e.id}", euler


@suite("ci-slope")
def _suite_ci_slope(rng):
    for e in CI_CORPUS:
        def check(e=e):
            fam = e.build()
            bad = []
            for n in (1, 2):
                rep = ci_slope_audit(fam.eval(n), 6)
                if rep["violation"]:
                    bad.append((n, rep["t"]))
                if not rep["flat"] and rep["observed_b"] < Fraction(rep["q"], 2):
                    bad.append((n, "slope below q/2"))
            return _expect(not bad, failures=bad)
        yield e.id, check
    for p, q in ((2, 2), (2, 4), (3, 3), (2, 8), (3, 9)):
        def periodic(p=p, q=q):
            rep = ci_slope_audit(residue_field(p, q).eval(1), 16)
            return _expect(rep["status"] == "eventually-periodic", t=rep["t"], offsets=rep.get("even_offsets"))
        yield f"k-over-truncated/q{q}", periodic


@suite("goldens")
def _suite_goldens(rng):
    def regen():
        regenerate_goldens()
        return None
    yield "regenerate", regen


ALIASES = {"leibniz": "hasse-schur"}


def suite_names() -> List[str]:
    return sorted(set(SUITES) | set(ALIASES))


def run_suite(name: str, seed: int = 0) -> dict:
    """Run every check of a suite; entries sorted by id, resource exhaustion kept apart from failures."""
    key = ALIASES.get(name, name)
    if key not in SUITES:
        raise UnknownSuite(name)
    rng = random.Random(seed)
    entries = []
    for cid, check in SUITES[key](rng):
        try:
            diff = check()
            status = "pass" if diff is None else "fail"
        except RESOURCE_ERRORS as exc:
            status, diff = "resource", {"error": f"{type(exc).__name__}: {exc}"}
        except (InvariantViolation, AssertionError, GoldenDrift) as exc:
            status, diff = "fail", {"error": f"{type(exc).__name__}: {exc}"}
        entry = {"id": cid, "status": status}
        if diff is not None:
            entry["diff"] = json.loads(json.dumps(diff, default=str))
        entries.append(entry)
    entries.sort(key=lambda e: e["id"])
    counts = {s: sum(1 for e in entries if e["status"] == s) for s in ("pass", "fail", "resource")}
    return {"suite": name, "seed": seed, "passed": counts["pass"], "failed": counts["fail"],
            "resource": counts["resource"], "entries": entries}
