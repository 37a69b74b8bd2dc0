import json
from dataclasses import asdict

import pytest

from glcharp.evaluation import free_family, ideal_family, quotient_family
from glcharp.glideals import GLIdeal, dv, is_gl_prime, parse_ideal
from glcharp.harness import (
    CI_CORPUS,
    LINE_CORPUS,
    SHIFT_CORPUS,
    GoldenDrift,
    UnknownSuite,
    brute_member,
    brute_radical,
    golden,
    load_goldens,
    regenerate_goldens,
    run_suite,
    s_shift_experiment,
    short_exact_triples,
    spectrum_nonprimes,
    spectrum_primes,
    suite_names,
    verify_witness,
)


def test_empty_suite_is_vacuous():
    rep = run_suite("empty")
    assert rep["failed"] == 0 and rep["resource"] == 0 and rep["suite"] == "empty"


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("nosuchsuite")


def test_registered_suites():
    names = set(suite_names())
    for n in ["spectrum", "degree-ten", "betti-tables", "lines", "hasse-schur", "shift-structure",
              "shift", "s-shift", "divided-powers", "oracles", "ci-slope", "goldens", "empty"]:
        assert n in names


def test_spectrum_suite_report_shape():
    rep = run_suite("spectrum", seed=3)
    assert rep["seed"] == 3 and rep["failed"] == 0
    ids = [e["id"] for e in rep["entries"]]
    assert ids == sorted(ids)
    assert set(rep) == {"suite", "seed", "passed", "failed", "resource", "entries"}


def test_suites_are_deterministic():
    assert run_suite("betti-tables") == run_suite("betti-tables")


def test_corpus_sizes():
    assert len(spectrum_nonprimes()) == 30
    assert all(not is_gl_prime(I) for I in spectrum_nonprimes())
    assert all(is_gl_prime(I) for I in spectrum_primes())
    assert len(LINE_CORPUS) == 12
    assert len(CI_CORPUS) == 6
    assert len(short_exact_triples(2, 2)) == 5
    assert {e.q for e in SHIFT_CORPUS} == {2, 3, 4}


def test_brute_oracles():
    assert brute_member((2,), dv(2), 2)
    assert not brute_member((1, 1, 1, 1), dv(0, 1), 3)
    assert brute_radical(parse_ideal("m^2", 2)) == GLIdeal.frobenius_power(2, 0)


def test_witness_verifier_rejects_bad_witness():
    I = parse_ideal("m^2", 2)
    assert not verify_witness(I, (2,), (1,))   # f already in I


def test_goldens_provenance():
    recs = load_goldens()
    assert recs
    for r in recs:
        assert r.provenance in {"reference", "trivial", "derived"}
        if r.provenance == "derived":
            assert r.oracle
        if r.provenance == "reference":
            assert r.source
    assert golden("betti/frobenius-quotient-p3").expected == {"0,0": 1, "1,3": 9, "2,6": 36, "3,9": 84}


def test_regenerate_fast_goldens():
    recs = regenerate_goldens(["membership-brute-force", "radical-power-containment"])
    assert [asdict(r) for r in recs] == [asdict(r) for r in load_goldens()]


def test_regenerate_detects_drift(tmp_path):
    data = [asdict(r) for r in load_goldens()]
    for d in data:
        if d["oracle"] == "membership-brute-force":
            d["expected"] = not d["expected"]
            break
    path = tmp_path / "goldens.json"
    path.write_text(json.dumps(data))
    with pytest.raises(GoldenDrift):
        regenerate_goldens(["membership-brute-force"], path=path)


def test_reference_goldens_never_regenerated(tmp_path):
    data = [asdict(r) for r in load_goldens()]
    for d in data:
        if d["provenance"] == "reference":
            d["expected"] = {"tampered": True}
    path = tmp_path / "goldens.json"
    path.write_text(json.dumps(data))
    out = regenerate_goldens(["membership-brute-force"], path=path)
    assert all(r.expected == {"tampered": True} for r in out if r.provenance == "reference")


def test_s_shift_experiment():
    assert s_shift_experiment(free_family(2, None, [0]), 2, 3, [3])["minimal_m"] == 0
    rep = s_shift_experiment(quotient_family(GLIdeal.frobenius_power(2, 1)), 2, 4, [4, 5])
    assert rep["minimal_m"] == 2
    rep = s_shift_experiment(ideal_family(parse_ideal("m * m[p^1]", 3)), 3, 6, [4])
    assert rep["minimal_m"] == 4
    with pytest.raises(ValueError):
        s_shift_experiment(free_family(2, 4, [0]), 2, 3, [2])
