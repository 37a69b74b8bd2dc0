import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glcharp.combinatorics import compositions, lucas_binom
from glcharp.dist import (
    DEGREE10_CHAR2,
    ClosureCapExceeded,
    E,
    H,
    PolyFp,
    apply_e,
    apply_h,
    composition_check,
    divided_leibniz_check,
    expand_orbits,
    frobenius_commutation_check,
    gln_submodule_closure,
    hasse_vanishing_check,
    ideal_degree_piece,
    symmetric_closure,
    verify_gl_stability,
)
from glcharp.glideals import DigitVector, GLIdeal, canonical_generator, evaluate_ideal, orbit_ideal


def mono(*a, p=2):
    return PolyFp.monomial(a, p)


def test_e_examples():
    assert apply_e(1, 2, 2, mono(0, 2)) == mono(2, 0)
    assert apply_e(1, 2, 3, mono(0, 4)).is_zero()   # C(4,3) = 0 mod 2
    assert E(1, 2, 2).apply(mono(0, 2)) == mono(2, 0)
    with pytest.raises(ValueError):
        E(1, 1, 1)
    with pytest.raises(IndexError):
        apply_e(1, 3, 1, mono(0, 1))


def test_h_examples():
    assert apply_h(1, 1, mono(1, 1, p=3)) == mono(1, 1, p=3)
    assert apply_h(1, 2, mono(0, 3, p=3)).is_zero()
    f = PolyFp(2, 5, {(3, 1): 1, (2, 2): 2, (0, 4): 3})
    g = H(1, 2).apply(f)
    assert set(g.terms) <= set(f.terms)
    for a, c in g.terms.items():
        assert c == f.terms[a] * lucas_binom(a[0], 2, 5) % 5


@pytest.mark.parametrize("p,q", [(2, 2), (2, 4), (3, 3), (3, 9)])
def test_frobenius_powers_vanish(p, q):
    f = PolyFp(2, p, {(1, 0): 1, (0, 1): 1})
    for l in range(1, 2 * q + 1):
        if l % q:
            assert hasse_vanishing_check(f, q, l)
    with pytest.raises(ValueError):
        hasse_vanishing_check(f, q, q)


def test_divided_leibniz_examples():
    x2 = mono(0, 1)
    rep = divided_leibniz_check(1, 2, 2, x2, x2)
    assert rep["ok"] and rep["lhs"] == repr(mono(2, 0))
    f = mono(1, 1)
    assert divided_leibniz_check(1, 2, 0, f, f)["ok"]


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(2, 4), p=st.sampled_from([2, 3, 5]),
       d1=st.integers(0, 5), d2=st.integers(0, 5), l=st.integers(0, 6))
def test_divided_leibniz_property(seed, n, p, d1, d2, l):
    rng = random.Random(seed)
    f, g = PolyFp.random(n, d1, p, rng), PolyFp.random(n, d2, p, rng)
    i, j = rng.sample(range(1, n + 1), 2)
    assert divided_leibniz_check(i, j, l, f, g)["ok"]


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(2, 4), p=st.sampled_from([2, 3]),
       d=st.integers(1, 8), l=st.integers(0, 5), s=st.integers(0, 5))
def test_composition_identity(seed, n, p, d, l, s):
    rng = random.Random(seed)
    f = PolyFp.random(n, d, p, rng)
    i, j = rng.sample(range(1, n + 1), 2)
    assert composition_check(i, j, l, s, f)


@settings(max_examples=100, deadline=None)
@given(a=st.lists(st.integers(0, 4), min_size=2, max_size=3), p=st.sampled_from([2, 3]),
       l=st.integers(1, 9))
def test_frobenius_commutation(a, p, l):
    assert frobenius_commutation_check(PolyFp.monomial(a, p), 1, 2, l)


def test_closure_examples():
    for n in (2, 3, 4):
        got = gln_submodule_closure([PolyFp.monomial((2,) + (0,) * (n - 1), 2)], 2, n, 2)
        assert got == sorted(tuple(2 * (k == i) for k in range(n)) for i in range(n))
    got = gln_submodule_closure([mono(2, 0, 0, p=3)], 2, 3, 3)
    assert got == sorted(compositions(2, 3))
    with pytest.raises(ClosureCapExceeded):
        gln_submodule_closure([mono(2, 0, 0, p=3)], 2, 3, 3, cap=2)


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("d", range(1, 9))
def test_closure_of_power_of_x1_matches_ideal(p, d):
    n = min(d, 4)
    I = GLIdeal.of(p, orbit_ideal((d,), p).b)
    expected = sorted(a for a in compositions(d, n) if a in evaluate_ideal(I, n, d))
    assert gln_submodule_closure([PolyFp.monomial((d,) + (0,) * (n - 1), p)], d, n, p) == expected


def _digit_vectors(max_deg, p):
    out = []
    for length in (1, 2, 3):
        for b in __import__("itertools").product(range(max_deg + 1), repeat=length):
            if b[-1] and sum(x * p**k for k, x in enumerate(b)) <= max_deg:
                out.append(DigitVector(b))
    return out


@pytest.mark.parametrize("p", [2, 3])
def test_closure_of_canonical_generator_matches_ideal(p):
    for b in _digit_vectors(7, p):
        gen = canonical_generator(b, p)
        d = sum(gen)
        n = max(len(gen), 2)
        if n > 5:
            continue
        seed = PolyFp.monomial(tuple(gen) + (0,) * (n - len(gen)), p)
        expected = sorted(a for a in compositions(d, n) if a in evaluate_ideal(GLIdeal.of(p, b.b), n, d))
        assert gln_submodule_closure([seed], d, n, p) == expected, b


@settings(max_examples=40, deadline=None)
@given(a=st.lists(st.integers(0, 4), min_size=3, max_size=3), p=st.sampled_from([2, 3]))
def test_closure_idempotent_and_stable(a, p):
    d = sum(a)
    if d == 0:
        return
    once = gln_submodule_closure([PolyFp.monomial(a, p)], d, 3, p)
    twice = gln_submodule_closure([PolyFp.monomial(b, p) for b in once], d, 3, p)
    assert once == twice
    assert verify_gl_stability(once, d, 3, p)


def test_symmetric_closure_matches_full():
    for lam in [(3, 1), (2, 2), (4,), (2, 1, 1)]:
        d = sum(lam)
        full = gln_submodule_closure([PolyFp.monomial(lam + (0,) * (4 - len(lam)), 2)], d, 4, 2)
        sym = symmetric_closure([lam], d, 4, 2)
        assert expand_orbits(sym) == full


def test_degree_ten_pieces():
    n, d = 10, 10
    pieces = {}
    for name, b in DEGREE10_CHAR2.items():
        piece = ideal_degree_piece(GLIdeal.of(2, b), d, n)
        assert verify_gl_stability(expand_orbits(piece), d, n, 2)
        pieces[name] = frozenset(piece)
    assert len(set(pieces.values())) == 5


def test_stability_negative_and_full():
    orbit = sorted({(3, 1, 0, 0)[k:] + (3, 1, 0, 0)[:k] for k in range(4)} |
                   set(expand_orbits([(3, 1, 0, 0)])))
    assert not verify_gl_stability(orbit, 4, 4, 2)
    assert verify_gl_stability(list(compositions(4, 3)), 4, 3, 2)
    assert not verify_gl_stability([(3, 1, 0)], 4, 3, 2)


def test_poly_arithmetic():
    p = 3
    x, y = mono(1, 0, p=p), mono(0, 1, p=p)
    s = x + y
    assert (s ** 3) == mono(3, 0, p=p) + mono(0, 3, p=p)
    assert (s - s).is_zero()
    assert s.scale(3).is_zero()
    assert (x * y).degree == 2
    with pytest.raises(ValueError):
        PolyFp(2, 3, {(1,): 1})
