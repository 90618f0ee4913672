import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cayley_auto import semidirect as sd
from cayley_auto.fsa import Fsa, convolve
from cayley_auto.relations import CoupledRelation, coupled_equivalent
from cayley_auto.zd import enc_int

from conftest import structure_for


def G(b, a):
    return sd.GElement(tuple(b), tuple(a))


def elements(spec, max_len=6, bound=20):
    word = st.lists(st.sampled_from(spec.free_letters()), max_size=max_len)
    vec = st.lists(st.integers(-bound, bound), min_size=spec.d, max_size=spec.d)
    return st.builds(lambda w, v: G(sd.fg.reduce(w), v), word, vec)


UNI = sd.unipotent_spec()
SANOV = sd.sanov_spec()


def test_product_and_inverse_examples(unipotent):
    f = ("f1",)
    assert sd.multiply(G(f, (1, 0)), G(f, (0, 0)), unipotent) == G(f * 2, (1, 1))
    assert sd.inverse(G(f, (1, 0)), unipotent) == G(("F1",), (-1, 1))
    assert sd.tau_of(f * 2, unipotent) == ((1, 2), (0, 1))
    assert sd.tau_of((), unipotent) == ((1, 0), (0, 1))


@given(elements(SANOV), elements(SANOV), elements(SANOV))
def test_group_laws_sanov(g, h, k):
    m = lambda x, y: sd.multiply(x, y, SANOV)  # noqa: E731
    assert m(m(g, h), k) == m(g, m(h, k))
    e = sd.identity(SANOV)
    assert m(g, sd.inverse(g, SANOV)) == e
    assert m(sd.inverse(g, SANOV), g) == e
    assert m(e, g) == g == m(g, e)


@given(elements(UNI))
def test_encode_decode_roundtrip(g):
    assert sd.decode(sd.encode(g), UNI) == g


def test_encoding_examples(unipotent):
    assert sd.encode(sd.identity(unipotent)) == (("_", "0", "0"),)
    assert sd.encode(G(("f1",), (1, 0))) == convolve([("f1",), enc_int(1), enc_int(0)])
    with pytest.raises(ValueError):
        sd.decode(convolve([("f1", "F1"), "0", "0"]), unipotent)


def test_corrected_action_examples(unipotent, uni_structure):
    g = G(("f1",), (1, 0))
    assert sd.multiply(g, sd.generator("e1", unipotent), unipotent) == G(("f1",), (2, 0))
    assert sd.step(uni_structure, sd.encode(g), "e1") == sd.encode(G(("f1",), (2, 0)))
    assert sd.evaluate(sd.parse_group_word("F e1 f", unipotent), unipotent) == G((), (1, 1))
    assert sd.evaluate(sd.parse_group_word("f e1 F", unipotent), unipotent) == G((), (1, -1))


def test_conjugated_translation_equalities(unipotent, uni_structure):
    parse = lambda t: sd.parse_group_word(t, unipotent)  # noqa: E731
    assert sd.equal(parse("F e1 f"), parse("e1 e2"), unipotent, uni_structure)
    assert not sd.equal(parse("f e1 F"), parse("e1 e2"), unipotent, uni_structure)
    assert sd.is_identity(parse("e1 e2 E1 E2"), unipotent, uni_structure)
    rel = uni_structure.right["e1"]
    assert not rel.accepts([sd.encode(G(("f1",), (1, 0))), sd.encode(G(("f1",), (1, 1)))])
    assert rel.accepts([sd.encode(G(("f1",), (1, 0))), sd.encode(G(("f1",), (2, 0)))])


def test_left_action_example(unipotent, uni_structure):
    g = G(("f1",), (0, 0))
    h = sd.multiply(sd.generator("f1", unipotent), g, unipotent)
    assert sd.step(uni_structure, sd.encode(g), "f1", side="left") == sd.encode(h)


def test_parse_group_word(unipotent, sanov):
    assert sd.parse_group_word("f1e1F1E1", sanov) == ("f1", "e1", "F1", "E1")
    assert sd.parse_group_word("1", sanov) == ()
    for bad in ("f e1", "f3", "x1", "e3"):
        with pytest.raises(ValueError):
            sd.parse_group_word(bad, sanov)
    assert sd.parse_group_word("f E2", unipotent) == ("f1", "E2")


@pytest.mark.parametrize("name", ["unipotent", "sanov"])
def test_word_problem_matches_oracle(name):
    spec = {"unipotent": UNI, "sanov": SANOV}[name]
    st_ = structure_for(spec)
    rng = random.Random(7)
    for _ in range(60):
        w = sd.random_word(spec, rng.randint(0, 40), rng)
        assert sd.decode(sd.word_problem(w, spec, st_), spec) == sd.evaluate(w, spec)


def test_identity_and_equality(sanov, sanov_structure):
    w = ("f1", "e1", "F1", "E1")
    assert not sd.is_identity(w, sanov, sanov_structure)
    assert sd.is_identity(w + sd.inverse_word(w), sanov, sanov_structure)
    # f1 and e1 do not commute, e1 and e2 do
    assert sd.equal(("e1", "e2"), ("e2", "e1"), sanov, sanov_structure)
    assert not sd.equal(("f1", "e1"), ("e1", "f1"), sanov, sanov_structure)


@pytest.mark.parametrize("name", ["unipotent", "sanov"])
def test_verify_structure_passes(name):
    spec = {"unipotent": UNI, "sanov": SANOV}[name]
    report = sd.verify_structure(spec, structure_for(spec), 3)
    assert all(report.values()), [k for k, v in report.items() if not v]


@pytest.mark.parametrize("x", ["f1", "e1", "e2"])
def test_group_axioms(uni_structure, x):
    assert sd.group_axiom_check(uni_structure, x)


def test_ball_sizes(unipotent, sanov):
    assert [len(sd.ball(unipotent, r)) for r in range(4)] == [1, 7, 29, 83]
    assert [len(sd.ball(sanov, r)) for r in range(3)] == [1, 9, 53]


def test_domain_counts_match_closed_form(sanov, sanov_structure):
    for m in range(8):
        assert sd.domain_count(sanov_structure.domain, m) == sd.encoding_length_count(sanov, m)


def _drop_one_transition(fsa: Fsa) -> Fsa:
    table = [dict(r) for r in fsa.table()]
    q = next(i for i, row in enumerate(table) if row)
    del table[q][sorted(table[q], key=str)[0]]
    return Fsa.from_table(fsa.alphabet, table, fsa.start, fsa.accepting)


def test_fault_injection_is_detected(unipotent, uni_structure):
    rel = uni_structure.right["e1"]
    factors = list(rel.factors)
    fi = len(factors) - 1
    fsa, tr = factors[fi]
    factors[fi] = (_drop_one_transition(fsa), tr)
    broken = sd.CayleyStructure(unipotent, uni_structure.domain, dict(uni_structure.right), {})
    broken.right["e1"] = CoupledRelation(rel.alphabet, rel.groups, factors)
    report = sd.verify_structure(unipotent, broken, 2)
    assert not report["total:right:e1"]
    assert report["total:right:f1"]


def test_non_unimodular_spec_rejected():
    with pytest.raises(ValueError):
        sd.GroupSpec(2, 1, (((2, 0), (0, 1)),))
    with pytest.raises(ValueError):
        sd.GroupSpec(2, 1, (((0, 0), (0, 0)),))
    with pytest.raises(ValueError):
        sd.GroupSpec(2, 2, (((1, 0), (0, 1)),))


def test_export_load_roundtrip(tmp_path, uni_structure):
    out = sd.export_structure(uni_structure, tmp_path / "s")
    loaded = sd.load_structure(out)
    assert loaded.spec == uni_structure.spec
    assert set(loaded.right) == set(uni_structure.right)
    for name in uni_structure.right:
        assert coupled_equivalent(loaded.right[name], uni_structure.right[name])
    out2 = sd.export_structure(loaded, tmp_path / "t")
    for f in sorted(out.iterdir()):
        assert f.read_bytes() == (out2 / f.name).read_bytes()


def test_spec_json_roundtrip(tmp_path, sanov):
    p = tmp_path / "g.json"
    sanov.dump(p)
    assert sd.GroupSpec.load(p) == sanov
