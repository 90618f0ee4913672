import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cayley_auto import nerode as nr
from cayley_auto import semidirect as sd
from cayley_auto.fsa import Alphabet, Fsa, complete_size
from cayley_auto.relations import join

AB = Alphabet(("a", "b"))
WORDS = [w for n in range(7) for w in itertools.product("ab", repeat=n)]


@st.composite
def dfa_and_sample(draw):
    n = draw(st.integers(1, 5))
    table = [{s: draw(st.integers(0, n - 1)) for s in "ab"} for _ in range(n)]
    acc = draw(st.lists(st.integers(0, n - 1), max_size=n))
    dfa = Fsa.from_table(AB, table, 0, acc)
    ws = draw(st.lists(st.sampled_from(WORDS), min_size=1, max_size=60, unique=True))
    pos = [w for w in ws if dfa.accepts(w)]
    neg = [w for w in ws if not dfa.accepts(w)]
    return dfa, nr.sample_from_words(pos, neg)


@given(dfa_and_sample())
def test_bound_never_exceeds_a_consistent_dfa(case):
    dfa, sample = case
    nb = nr.nerode_lower_bound(sample)
    assert 1 <= nb.bound <= complete_size(dfa)
    assert nr.verify_witnesses(sample, nb)


def test_singleton_sample_has_bound_one():
    nb = nr.nerode_lower_bound(nr.sample_from_words([("a", "b")], []))
    assert nb.bound == 1 and nb.prefixes == [()]


def test_known_residuals_are_found():
    # (ab)* up to length 6: empty, a, and the dead prefix b are pairwise distinct
    pos = [("a", "b") * k for k in range(4)]
    neg = [w for w in WORDS if w not in pos]
    nb = nr.nerode_lower_bound(nr.sample_from_words(pos, neg))
    assert nb.bound == 3
    assert nr.verify_witnesses(nr.sample_from_words(pos, neg), nb)


def test_sample_rejects_overlap_and_empty():
    with pytest.raises(ValueError):
        nr.sample_from_words([("a",)], [("a",)])
    with pytest.raises(ValueError):
        nr.nerode_lower_bound(nr.sample_from_words([], []))


def test_radius_zero_sample(unipotent):
    sample = nr.generate_left_sample(unipotent, "e1", 0)
    e = sd.identity(unipotent)
    img = sd.GElement((), (1, 0))
    assert sample.positives == {join((sd.encode(e), sd.encode(img)), (3, 3))}
    assert sample.label(join((sd.encode(e), sd.encode(e)), (3, 3))) == -1


def test_left_sample_positives_are_left_products(unipotent):
    sample = nr.generate_left_sample(unipotent, "e1", 2)
    g = sd.GElement(("f1",), (0, 0))
    h = sd.GElement(("f1",), (1, 1))
    assert sd.multiply(sd.generator("e1", unipotent), g, unipotent) == h
    assert join((sd.encode(g), sd.encode(h)), (3, 3)) in sample.positives
    assert len(sample.positives) == len(sd.ball(unipotent, 2))
    assert len(sample.negatives) <= 10 * len(sample.positives)


def test_samples_are_nested_and_deterministic(sanov):
    a, b, c = nr.nested_samples(sanov, "e1", [1, 2, 3])
    assert a.positives <= b.positives <= c.positives
    assert a.negatives <= b.negatives <= c.negatives
    again = nr.generate_sample(sanov, "e1", 2)
    assert again.positives == b.positives and again.negatives == b.negatives
    other = nr.generate_sample(sanov, "e1", 2, seed=5)
    assert other.positives == b.positives


def test_bad_sample_arguments(unipotent):
    with pytest.raises(ValueError):
        nr.generate_sample(unipotent, "e9", 1)
    with pytest.raises(ValueError):
        nr.generate_sample(unipotent, "e1", 1, side="up")
    with pytest.raises(ValueError):
        nr.nested_samples(unipotent, "e1", [2, 1])


def test_series_is_monotone_and_seeded(unipotent):
    rows = nr.probe_series(unipotent, "e1", [1, 2, 3, 4])
    bounds = [r.bound for r in rows]
    assert bounds == sorted(bounds)
    s3, s4 = nr.nested_samples(unipotent, "e1", [3, 4])
    nb3 = nr.nerode_lower_bound(s3)
    nb4 = nr.nerode_lower_bound(s4, seed=nb3)
    assert nb4.bound >= nb3.bound
    assert nr.verify_witnesses(s4, nb4)


@pytest.mark.parametrize("name", ["right:f1", "right:e1", "right:E2", "left:f1", "left:F1"])
def test_bounds_are_sound_for_unipotent_relations(uni_structure, name):
    side, x = name.split(":")
    exact = dict(uni_structure.relations())[name].minimal_size()
    prev = None
    for sample in nr.nested_samples(uni_structure.spec, x, [1, 2, 3, 4], side):
        prev = nr.nerode_lower_bound(sample, seed=prev)
        assert prev.bound <= exact
        assert nr.verify_witnesses(sample, prev)


def test_report_framing_and_controls(uni_structure):
    rep = nr.probe_report(uni_structure.spec, "e1", [1, 2], uni_structure)
    tsv = rep.to_tsv()
    assert tsv.startswith(nr.FRAMING)
    assert "evidence, never proof" in tsv
    names = {r.relation for r in rep.rows}
    assert names == {"left:e1", "control:right:e1", "control:left:f1"}
    for r in rep.rows:
        if r.exact is not None:
            assert r.bound <= r.exact
    assert '"framing"' in rep.to_json()
