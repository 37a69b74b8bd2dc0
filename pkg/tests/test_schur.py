import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glcharp.evaluation import (
    FreeFamily,
    SymRep,
    frobenius_standard,
    free_family,
    generation_degrees,
    ideal_family,
    quotient_family,
    rep_family,
    ring_family,
    standard_rep,
)
from glcharp.glideals import GLIdeal, parse_ideal
from glcharp.harness import short_exact_triples
from glcharp.homology import InvariantViolation
from glcharp.schur import (
    ShiftDescriptor,
    block_shift,
    delta,
    delta_generation_check,
    double_shift_check,
    gamma,
    graded_dims,
    hasse_schur,
    iterate_shift,
    kernel_torsion_check,
    kq,
    leibniz_check,
    natural_map,
    sh_exactness_check,
    shift_commute_check,
    shift_until_flat,
    six_term_check,
    sm_shift,
)
from glcharp.evaluation import FrobeniusRep


def test_descriptor_validation():
    ShiftDescriptor("sm-shift", m=2, q=4, p=2)
    with pytest.raises(ValueError):
        ShiftDescriptor("sm-shift", m=1, q=4, p=2)
    with pytest.raises(ValueError):
        ShiftDescriptor("block-shift", a=-1)
    with pytest.raises(ValueError):
        ShiftDescriptor("sideways")


@pytest.mark.parametrize("n", range(1, 6))
def test_slice_zero_is_identity(n):
    fam = quotient_family(parse_ideal("m^2", 2), 4)
    assert graded_dims(hasse_schur(fam, 0), n) == graded_dims(fam, n)


@pytest.mark.parametrize("p,r", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)])
def test_frobenius_twist_slices_vanish(p, r):
    fam = rep_family(p, frobenius_standard(p, r))
    for m in range(1, p**r):
        assert graded_dims(hasse_schur(fam, m), 3) == []
    assert graded_dims(hasse_schur(fam, p**r), 3) != []


@pytest.mark.parametrize("q,p", [(2, 2), (4, 2), (3, 3)])
def test_small_slices_of_ring(q, p):
    R = ring_family(p, q)
    for i in range(q):
        assert graded_dims(hasse_schur(R, i), 3) == graded_dims(R, 3)


def test_leibniz_examples():
    R = ring_family(2, 2)
    assert leibniz_check(R, R, 1, 2)["ok"]
    triv = rep_family(2, SymRep(0))
    F = quotient_family(parse_ideal("m^2", 3), 3)
    assert leibniz_check(F, triv, 2, 2)["ok"]
    rep = leibniz_check(rep_family(2, frobenius_standard(2, 1)), rep_family(2, standard_rep()), 2, 3)
    # Sh_2(V) = 0 since V has weight entries <= 1, and Sh_1(V^(1)) = 0
    assert rep["contributing"] == [(2, 0)]
    assert graded_dims(hasse_schur(rep_family(2, standard_rep()), 2), 3) == []


@settings(max_examples=20, deadline=None)
@given(a=st.integers(0, 3), b=st.integers(0, 3), m=st.integers(0, 4), p=st.sampled_from([2, 3]))
def test_leibniz_property(a, b, m, p):
    F, G = rep_family(p, SymRep(a)), rep_family(p, SymRep(b))
    assert leibniz_check(F, G, m, 2)["ok"]


def test_natural_map_kernels():
    assert not natural_map(free_family(2, 4, [0, 1]), 4, 2).kernel
    fam = quotient_family(GLIdeal.frobenius_power(2, 1), 4)
    data = natural_map(fam, 4, 2)
    assert len(data.kernel) == fam.eval(2).total_dim()
    assert not natural_map(ring_family(3, 3), 3, 3).kernel


@pytest.mark.parametrize("fam", [
    free_family(2, 4, [1]),
    quotient_family(parse_ideal("m^2", 2), 4),
    ideal_family(parse_ideal("m", 2), q=2),
    quotient_family(parse_ideal("m[p^1]", 3), 9),
])
def test_kernel_is_torsion(fam):
    for n in (1, 2, 3):
        assert kernel_torsion_check(fam, fam.q, n)["ok"]


def test_delta_examples():
    assert graded_dims(delta(FreeFamily(2, 4, [frobenius_standard(2, 2)]), 4), 2) == []
    assert graded_dims(delta(ring_family(2, 4), 4), 3) == []
    q, p = 4, 2
    V = SymRep(2)
    lhs = graded_dims(delta(free_family(p, q, [V]), q), 2)
    rhs = []
    for i in range(1, q // p + 1):
        part = graded_dims(_induced(p, q, hasse_schur(rep_family(p, V), i)), 2)
        rhs = [x + y for x, y in zip(_pad(rhs, len(part)), _pad(part, len(rhs)))]
    assert lhs == rhs


def _pad(a, k):
    return list(a) + [0] * (k - len(a))


def _induced(p, q, fam):
    from glcharp.evaluation import TensorFamily
    return TensorFamily(ring_family(p, q), fam)


def test_delta_lowers_generation_degree():
    for desc in ["m", "m^2", "m[p^1] * m"]:
        fam = ideal_family(parse_ideal(desc, 2), q=4)
        assert delta_generation_check(fam, 4, 2)["ok"]


def test_six_term_examples():
    triples = {t.name: t for t in short_exact_triples(2, 2)}
    rep = six_term_check(triples["m -> Sm -> k"], 2, 4)
    assert rep["exact"]
    rep = six_term_check(triples["split"], 2, 3)
    assert rep["dims"]["K(M)"] == rep["dims"]["K(L)"] + rep["dims"]["K(N)"]
    assert rep["dims"]["D(M)"] == rep["dims"]["D(L)"] + rep["dims"]["D(N)"]
    rep = six_term_check(triples["Sm(x)V^(1) -> Sm(x)Sym^p -> free quotient"], 2, 3)
    assert rep["N_torsion_free"] and rep["three_term_exact"]


@pytest.mark.parametrize("p,q", [(2, 2), (2, 4), (3, 3)])
def test_slices_are_exact(p, q):
    for t in short_exact_triples(p, q):
        for m in range(q + 1):
            assert sh_exactness_check(t, m, 2)


def test_shift_commutes_with_delta_and_gamma():
    for n in range(1, 5):
        rep = shift_commute_check(ideal_family(parse_ideal("m", 2), q=2), 2, n)
        assert rep["delta_ok"] and rep["gamma_ok"]
    assert shift_commute_check(free_family(2, 4, [0, 2]), 4, 2)["delta_ok"]
    assert shift_commute_check(free_family(2, 4, []), 4, 2)["Sh_Delta"] == []


def test_double_shift():
    for fam in (ring_family(2, 4), quotient_family(parse_ideal("m^2", 3), 3)):
        assert double_shift_check(fam, fam.q, 2)["ok"]


def test_shift_until_flat():
    assert shift_until_flat(free_family(2, 4, [0]), 4, 3, [2])["minimal_l"] == 0
    tors = quotient_family(GLIdeal.frobenius_power(2, 1), 4)
    res = shift_until_flat(tors, 4, 4, [2])
    assert res["status"] == "flat"
    assert graded_dims(iterate_shift(tors, res["minimal_l"], 4), 2) == []
    res = shift_until_flat(ideal_family(parse_ideal("m", 2), q=2), 2, 6, [4, 5, 6])
    assert res["minimal_l"] == 1 and set(res["per_n_minimal_l"].values()) == {1}


def test_block_shift():
    fam = quotient_family(parse_ideal("m^2", 2), 4)
    assert block_shift(fam, 0, 2)["pieces"] == {d: {d: v} for d, v in enumerate(graded_dims(fam, 2)) if v}
    rep = block_shift(rep_family(2, SymRep(3)), 2, 2)
    assert rep["ok"]
    assert all(e <= 3 for e in rep["pieces"][3])
    R = ring_family(2, 2)
    rep = block_shift(R, 1, 2)
    assert rep["ok"]
    assert [sum(row.values()) for _, row in sorted(rep["pieces"].items())] == graded_dims(R, 3)


def test_kernel_and_gamma_families():
    fam = quotient_family(GLIdeal.frobenius_power(2, 1), 4)
    assert graded_dims(kq(fam, 4), 2) == graded_dims(fam, 2)
    assert graded_dims(gamma(fam, 4), 2) == graded_dims(fam, 2)
    assert graded_dims(kq(ring_family(2, 4), 4), 2) == []
