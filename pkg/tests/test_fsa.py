import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cayley_auto.fsa import (
    PAD,
    Alphabet,
    AlphabetMismatch,
    AmbiguousLanguage,
    ConvAlphabet,
    EmptyLanguage,
    Fsa,
    ValidityError,
    check_conv_word,
    complement,
    complete,
    complete_size,
    convolve,
    deconvolve,
    determinize,
    determinize_minimize,
    difference,
    equivalent,
    finite_language,
    format_conv_word,
    intersect,
    is_empty,
    minimize,
    parse_conv_word,
    single_word,
    union,
    unique_member,
)

AB = Alphabet(("a", "b"))


def all_words(syms, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(syms, repeat=n)


@st.composite
def automata(draw, max_states=6, alphabet=AB):
    """Random (possibly nondeterministic) automata over ``alphabet``."""
    n = draw(st.integers(1, max_states))
    delta = []
    for _ in range(n):
        row = {}
        for s in alphabet:
            row[s] = draw(st.lists(st.integers(0, n - 1), max_size=2))
        delta.append(row)
    initial = draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=2))
    accepting = draw(st.lists(st.integers(0, n - 1), max_size=n))
    return Fsa(alphabet, delta, initial, accepting)


def language(a, max_len):
    return {w for w in all_words(list(a.alphabet), max_len) if a.accepts(w)}


# ---------------------------------------------------------------- convolution


def test_convolve_examples():
    assert convolve(["aaa", "babaa", ""]) == (
        ("a", "b", PAD), ("a", "a", PAD), ("a", "b", PAD), (PAD, "a", PAD), (PAD, "a", PAD)
    )
    assert convolve(["", ""]) == ()
    assert convolve(["ab", "b"]) == (("a", "b"), ("b", PAD))


def test_deconvolve_examples():
    assert deconvolve((("a", "b"), ("b", PAD))) == (("a", "b"), ("b",))
    assert deconvolve((), 3) == ((), (), ())
    with pytest.raises(ValueError):
        deconvolve(())


def test_convolution_roundtrip_exhaustive():
    words = list(all_words("ab", 8))
    for a in words:
        for b in (w for w in words if len(w) <= 3):
            c = convolve([a, b])
            assert deconvolve(c, 2) == (a, b)
            check_conv_word(c, 2)


def test_convolution_injective_two_tracks():
    words = list(all_words("ab", 5))
    seen = {}
    for a in words:
        for b in words:
            c = convolve([a, b])
            assert seen.setdefault(c, (a, b)) == (a, b)


@given(st.lists(st.text(alphabet="ab", max_size=8), min_size=1, max_size=4))
def test_convolution_roundtrip_property(ws):
    ws = [tuple(w) for w in ws]
    assert deconvolve(convolve(ws), len(ws)) == tuple(ws)


@pytest.mark.parametrize(
    "word",
    [
        (("a", PAD), ("a", "b")),  # padding resumes
        (("a", "b"), (PAD, PAD)),  # all-pad column
        (("a", "b"), ("a",)),  # ragged
    ],
)
def test_malformed_convolutions_rejected(word):
    with pytest.raises(ValidityError):
        deconvolve(word)


def test_format_roundtrip():
    w = convolve(["aaa", "babaa", ""])
    text = format_conv_word(w)
    assert text == "a,b,_ a,a,_ a,b,_ _,a,_ _,a,_"
    assert parse_conv_word(text) == w


def test_conv_alphabet_excludes_allpad():
    ca = ConvAlphabet((AB, AB))
    assert len(ca) == 8
    assert (PAD, PAD) not in ca
    assert (PAD, "a") in ca
    assert set(ca) == {c for c in itertools.product(("a", "b", PAD), repeat=2)} - {(PAD, PAD)}


def test_alphabet_rejects_padding_symbol():
    with pytest.raises(ValueError):
        Alphabet(("a", PAD))


# ---------------------------------------------------------------- minimization


def test_redundant_universal_automaton_minimizes_to_one_state():
    table = [{"a": 1, "b": 2}, {"a": 2, "b": 0}, {"a": 0, "b": 1}]
    a = Fsa.from_table(AB, table, 0, [0, 1, 2])
    m = determinize_minimize(a)
    assert m.n_states == 1
    assert complete_size(a) == 1


def test_contains_a_nfa_gives_two_state_dfa():
    nfa = Fsa(AB, [{"a": [0, 1], "b": [0]}, {"a": [1], "b": [1]}], [0], [1])
    m = determinize_minimize(nfa)
    assert m.n_states == 2
    assert complete_size(nfa) == 2
    for w in all_words("ab", 8):
        assert m.accepts(w) == ("a" in w)


def moore_class_count(a: Fsa) -> int:
    """Distinct residuals among reachable states, by brute-force signatures."""
    d = complete(determinize(a))
    tab = d.table()
    n = d.n_states
    reach = {d.start}
    todo = [d.start]
    while todo:
        q = todo.pop()
        for t in tab[q].values():
            if t not in reach:
                reach.add(t)
                todo.append(t)
    probes = list(all_words("ab", n))

    def run(q, w):
        for s in w:
            q = tab[q][s]
        return q in d.accepting

    return len({tuple(run(q, w) for w in probes) for q in reach})


@given(automata(max_states=5))
def test_minimize_preserves_language_and_is_minimal(a):
    m = minimize(a)
    assert equivalent(a, m)
    assert language(a, 7) == language(m, 7)
    assert complete_size(a) == moore_class_count(a)
    mm = minimize(m)
    assert mm.n_states == m.n_states
    assert [dict(r) for r in mm.table()] == [dict(r) for r in m.table()]


@given(automata())
def test_determinize_preserves_language(a):
    d = determinize(a)
    assert d.deterministic
    assert language(a, 6) == language(d, 6)


# ---------------------------------------------------------------- boolean algebra


@given(automata(), automata())
def test_boolean_operations_match_enumeration(a, b):
    words = list(all_words("ab", 7))
    i, u, df, ca = intersect(a, b), union(a, b), difference(a, b), complement(a)
    for w in words:
        x, y = a.accepts(w), b.accepts(w)
        assert i.accepts(w) == (x and y)
        assert u.accepts(w) == (x or y)
        assert df.accepts(w) == (x and not y)
        assert ca.accepts(w) == (not x)


@given(automata())
def test_boolean_identities(a):
    assert is_empty(intersect(a, complement(a)))
    empty = Fsa(AB, [{}], [0], [])
    assert equivalent(union(empty, a), a)
    assert equivalent(complement(complement(a)), a)


def test_unreachable_accepting_state_is_empty():
    a = Fsa.from_table(AB, [{"a": 0}, {}], 0, [1])
    assert is_empty(a)


def test_equivalence_detects_one_extra_word():
    L = finite_language(AB, [("a",), ("a", "b")])
    L2 = union(L, single_word(AB, ("b", "b", "b")))
    assert not equivalent(L, L2)
    assert equivalent(L, finite_language(AB, [("a", "b"), ("a",)]))


def test_alphabet_mismatch():
    other = Fsa.from_table(Alphabet(("x",)), [{}], 0, [0])
    with pytest.raises(AlphabetMismatch):
        intersect(other, Fsa.from_table(AB, [{}], 0, [0]))


def test_unique_member():
    w = ("a", "b", "b")
    assert unique_member(single_word(AB, w)) == w
    universal = Fsa.from_table(AB, [{"a": 0, "b": 0}], 0, [0])
    with pytest.raises(AmbiguousLanguage):
        unique_member(universal)
    with pytest.raises(EmptyLanguage):
        unique_member(Fsa.from_table(AB, [{}], 0, []))
    with pytest.raises(AmbiguousLanguage):
        unique_member(finite_language(AB, [("a",), ("a", "a")]))


@given(st.sets(st.text(alphabet="ab", max_size=5), min_size=1, max_size=6))
def test_finite_language_exact(ws):
    words = {tuple(w) for w in ws}
    a = finite_language(AB, words)
    assert language(a, 5) == words
    if len(words) == 1:
        assert unique_member(a) == next(iter(words))
    else:
        with pytest.raises(AmbiguousLanguage):
            unique_member(a)
