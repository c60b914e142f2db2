from fractions import Fraction
from pathlib import Path

import pytest

import ensemble_lab as el

DATA = Path(__file__).resolve().parents[2] / "examples_data"


def test_space_and_cylinders():
    p = el.Space({"a": "1/2", "b": "1/3", "c": Fraction(1, 6)})
    assert p.weights["b"] == Fraction(1, 3)
    assert p.string_prob("abc") == Fraction(1, 36)
    assert el.open_measure(p, ["a", "ab"]) == Fraction(1, 2)
    assert p.conditional(["b", "c"]).weights == {"b": Fraction(2, 3), "c": Fraction(1, 3)}


def test_space_errors_carry_kind():
    with pytest.raises(el.EnsembleError) as info:
        el.Space({"a": "2/3", "b": "2/3"})
    assert info.value.kind == "SumNotOne"


def test_certify_level():
    u2 = el.Space.uniform(["0", "1"])
    good = el.certify_level(u2, 2, ["000", "1111"])
    assert good["certified"] and good["measure"] == Fraction(3, 16)
    bad = el.certify_level(u2, 2, ["0"])
    assert not bad["certified"] and bad["bound"] == Fraction(1, 4)
    assert el.member(u2, ["01"], "0110")
    assert el.lln_parameters(u2, "1/4")["c"] == Fraction(1, 16)


def test_streams_are_deterministic_and_single_use():
    p3 = el.Space({"x": "1/2", "y": "1/3", "z": "1/6"})
    first = el.pseudo_ensemble(p3, 7).take(1000).symbols
    assert first == el.pseudo_ensemble(p3, 7).take(1000).symbols
    s = el.pseudo_ensemble(p3, 7)
    kept = el.filter_event(s, ["x", "y"], 10000)
    assert set(kept.take(100).symbols) <= {"x", "y"}
    with pytest.raises(el.EnsembleError):
        s.take(1)


def test_von_neumann_and_lln():
    biased = el.Space({"0": "3/10", "1": "7/10"})
    bits = el.von_neumann(el.pseudo_ensemble(biased, 3), 10**6).take(20000)
    report = el.lln_report(el.Space.uniform(["0", "1"]), bits, 0.02)
    assert report.passed
    assert "statistic" in report.render_table()


def test_interleave_and_shuffle():
    a = el.prefix(list("abab"))
    b = el.prefix(list("baba"), alphabet=["a", "b"])
    merged = el.interleave(el.from_prefix(a), el.from_prefix(b)).take(8)
    assert merged.render() == "abbaabba"
    assert el.shuffle(el.from_prefix(merged), "odd").take(4).render() == "abab"


def test_chernoff_and_compression():
    u2 = el.Space.uniform(["0", "1"])
    assert el.chernoff_bound(u2, "1/4", 8) == pytest.approx(0.7357588823428846, rel=1e-15)
    zeros = el.prefix(["0"] * 100000, alphabet=["0", "1"])
    assert el.incompressibility_proxy(zeros) < 0.05
    with pytest.raises(el.EnsembleError) as info:
        el.incompressibility_proxy(el.prefix(["0"] * 10, alphabet=["0", "1"]))
    assert info.value.kind == "Inconclusive"


def test_codes():
    p = el.Space({"a": "1/2", "b": "1/4", "c": "1/4"})
    code = el.build_dyadic_code(p)
    assert code.table == {"a": "0", "b": "10", "c": "11"}
    assert el.is_abs_optimal(p, code)
    assert el.avg_length(p, code) == el.shannon_entropy(p)["exact"] == Fraction(3, 2)
    bits = el.encode(code, ["a", "c", "b"])
    assert bits == "01110"
    assert el.decode(code, bits + "1") == (["a", "c", "b"], "1")
    audit = el.validate_code(el.Code({"a": "0", "b": "01"}))
    assert audit["violation"] == "PrefixViolation"


def test_secrecy():
    assert el.is_perfectly_secret(el.otp_scheme(5))["secret"]
    leaky = el.read_scheme(DATA / "leaky.scheme")
    verdict = el.is_perfectly_secret(leaky)
    assert not verdict["secret"]
    assert verdict["joint"] != verdict["product"]


def test_file_readers():
    assert el.read_space(DATA / "p3.space").weights
    assert el.read_code(DATA / "dyadic3.code").table
    seq = el.read_sequence(DATA / "abc.seq")
    assert seq.render() == "abcab"
