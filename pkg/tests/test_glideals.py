import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from glcharp.glideals import (
    DigitVector,
    DomainError,
    GLIdeal,
    ParseError,
    SearchExhausted,
    canonical_generator,
    digit_vectors_up_to,
    dv,
    evaluate_ideal,
    format_ideal,
    gl_radical,
    hilbert_function,
    ideal_contains,
    ideal_member,
    ideal_power,
    ideal_product,
    ideal_sum,
    is_gl_prime,
    monomial_in_product,
    non_primality_witness,
    orbit_ideal,
    parse_ideal,
    parse_monomial,
    radical_oracle,
)
from glcharp.harness import brute_ideal_member, brute_member, brute_radical, verify_witness


def test_orbit_ideal_examples():
    assert orbit_ideal((10,), 2) == dv(0, 1, 0, 1)
    assert orbit_ideal((1,), 5) == dv(1)
    assert orbit_ideal((3, 2), 2) == dv(1, 2)


def test_canonical_generator_examples():
    assert canonical_generator(dv(0, 1, 0, 1), 2) == (8, 2)
    assert canonical_generator(dv(2), 3) == (1, 1)
    assert canonical_generator(dv(1, 1), 3) == (3, 1)


@settings(max_examples=100)
@given(b=st.lists(st.integers(0, 3), min_size=1, max_size=3), p=st.sampled_from([2, 3]))
def test_generator_roundtrip(b, p):
    assume(any(b))
    v = DigitVector(tuple(b))
    assert orbit_ideal(canonical_generator(v, p), p) == v


def test_membership_examples():
    assert monomial_in_product((2,), dv(2), 2)
    assert not monomial_in_product((1, 1, 1, 1), dv(0, 1), 3)
    assert monomial_in_product((4, 2), dv(0, 3), 2)
    assert not ideal_member((1,), GLIdeal.frobenius_power(2, 1))
    assert ideal_member((2,), parse_ideal("m^2 + m[p^2]", 2))


@settings(max_examples=300)
@given(b=st.lists(st.integers(0, 3), min_size=1, max_size=3),
       lam=st.lists(st.integers(0, 9), max_size=4), p=st.sampled_from([2, 3]))
def test_membership_matches_brute_force(b, lam, p):
    v = DigitVector(tuple(b))
    assert monomial_in_product(lam, v, p) == brute_member(lam, v, p)


def test_containment():
    m = GLIdeal.frobenius_power(3, 0)
    mp = GLIdeal.frobenius_power(3, 1)
    assert ideal_contains(m, mp)
    assert not ideal_contains(mp, m)
    assert ideal_contains(parse_ideal("m^2", 2), parse_ideal("m[p^1]", 2))


def test_products_and_canonical_form():
    I = ideal_product(GLIdeal.frobenius_power(2, 1), GLIdeal.frobenius_power(2, 3))
    assert I.generators == {dv(0, 1, 0, 1)}
    J = parse_ideal("m^2 * m[p^1]", 3)
    assert ideal_product(J, GLIdeal.unit(3)) == J
    assert ideal_sum(parse_ideal("m", 2), parse_ideal("m[p^1]", 2)) == parse_ideal("m", 2)
    assert ideal_power(parse_ideal("m", 2), 3) == parse_ideal("m^3", 2)


def test_radical_examples():
    assert gl_radical(parse_ideal("m[p^1]", 3)) == GLIdeal.frobenius_power(3, 1)
    assert gl_radical(parse_ideal("m * m[p^1]", 3)) == GLIdeal.frobenius_power(3, 1)
    assert gl_radical(parse_ideal("m^2", 2)) == GLIdeal.frobenius_power(2, 0)
    with pytest.raises(DomainError):
        gl_radical(GLIdeal.zero(2))


@settings(max_examples=60, deadline=None)
@given(gens=st.lists(st.lists(st.integers(0, 2), min_size=1, max_size=3), min_size=1, max_size=3),
       p=st.sampled_from([2, 3]))
def test_radical_matches_oracles(gens, p):
    I = GLIdeal.of(p, *[tuple(g) for g in gens])
    if I.is_unit:
        return
    assert gl_radical(I) == radical_oracle(I) == brute_radical(I)


def test_spectrum():
    assert is_gl_prime(GLIdeal.frobenius_power(2, 2))
    assert is_gl_prime(GLIdeal.zero(3))
    assert not is_gl_prime(parse_ideal("m * m[p^1]", 2))
    assert not is_gl_prime(parse_ideal("m^2", 5))


def test_witness_examples():
    I = parse_ideal("m^2", 2)
    f, g = non_primality_witness(I)
    assert verify_witness(I, f, g)
    assert non_primality_witness(GLIdeal.frobenius_power(3, 1)) is None
    J = parse_ideal("m * m[p^1]", 2)
    f, g = non_primality_witness(J)
    assert verify_witness(J, f, g)
    with pytest.raises(DomainError):
        non_primality_witness(GLIdeal.unit(2))


@settings(max_examples=60, deadline=None)
@given(gens=st.lists(st.lists(st.integers(0, 2), min_size=1, max_size=3), min_size=1, max_size=2),
       p=st.sampled_from([2, 3]))
def test_nonprime_ideals_have_verified_witnesses(gens, p):
    I = GLIdeal.of(p, *[tuple(g) for g in gens])
    if I.is_unit or is_gl_prime(I):
        return
    f, g = non_primality_witness(I)
    assert verify_witness(I, f, g)


def test_evaluation_and_hilbert():
    assert evaluate_ideal(GLIdeal.frobenius_power(2, 1), 2, 4) == {(2, 0), (0, 2)}
    assert evaluate_ideal(parse_ideal("m * m[p^1]", 2), 2, 4) == {(3, 0), (2, 1), (1, 2), (0, 3)}
    assert evaluate_ideal(GLIdeal.zero(2), 3, 5) == set()
    assert [hilbert_function(GLIdeal.frobenius_power(2, 1), 2, d) for d in range(4)] == [1, 2, 1, 0]
    assert hilbert_function(GLIdeal.zero(2), 2, 7) == 8
    assert hilbert_function(GLIdeal.frobenius_power(3, 1), 3, 6) == 1


def test_parse_and_format():
    assert format_ideal(parse_ideal("m^2 * m[p^1] + m[p^2]^3", 2)) == "m^2 * m[p^1]"
    assert format_ideal(parse_ideal("(m + m[p^1])^2", 3)) == "m^2"
    assert format_ideal(GLIdeal.zero(2)) == "0"
    assert parse_monomial("x1^3*x2") == (3, 1)
    with pytest.raises(ParseError) as err:
        parse_ideal("m^(2", 2)
    assert err.value.pos == 2


def test_digit_vector_enumeration():
    vecs = list(digit_vectors_up_to(4, 2))
    assert dv(0, 0, 1) in vecs and dv(4) in vecs
    assert all(v.degree(2) <= 4 for v in vecs)


@settings(max_examples=100, deadline=None)
@given(gens=st.lists(st.lists(st.integers(0, 3), min_size=1, max_size=3), min_size=1, max_size=3),
       p=st.sampled_from([2, 3, 5]))
def test_format_parse_roundtrip(gens, p):
    I = GLIdeal.of(p, *[tuple(g) for g in gens])
    assert parse_ideal(format_ideal(I), p) == I
