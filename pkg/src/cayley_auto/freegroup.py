"""Free groups: reduced words and single-letter multiplication automata.

A letter is a string; its inverse is the same string with the case of
every character swapped (``f1`` / ``F1``, ``a`` / ``A``).  Words are tuples
of letters.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Sequence

from .fsa import PAD, Alphabet, ConvAlphabet, Fsa, determinize_minimize, union
from .relations import RegularRelation, identity_relation


def inv_letter(x: str) -> str:
    return x.swapcase()


def generators(n: int, prefix: str = "f") -> tuple:
    return tuple(f"{prefix}{i}" for i in range(1, n + 1))


def letters(n: int, prefix: str = "f") -> tuple:
    """Letters in the fixed order f1, F1, f2, F2, ..."""
    out = []
    for g in generators(n, prefix):
        out += [g, inv_letter(g)]
    return tuple(out)


def letter_alphabet(n: int, prefix: str = "f") -> Alphabet:
    return Alphabet(letters(n, prefix))


def reduce(word: Iterable[str]) -> tuple:
    stack: list[str] = []
    for x in word:
        if stack and stack[-1] == inv_letter(x):
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def inverse(word: Sequence[str]) -> tuple:
    return tuple(inv_letter(x) for x in reversed(word))


def mul(u: Sequence[str], v: Sequence[str]) -> tuple:
    return reduce(tuple(u) + tuple(v))


def is_reduced(word: Sequence[str]) -> bool:
    return all(word[i + 1] != inv_letter(word[i]) for i in range(len(word) - 1))


def power(word: Sequence[str], k: int) -> tuple:
    if k < 0:
        word, k = inverse(word), -k
    out: tuple = ()
    for _ in range(k):
        out = mul(out, word)
    return out


_TOKEN = re.compile(r"[A-Za-z]\d*")


def parse_word(text: str) -> tuple:
    """``"f1 F2 f1"`` or ``"f1F2f1"`` or ``"abAB"`` -> tuple of letters."""
    text = text.replace("^-1", "'").strip()
    if text in ("", "1", "e", "ε"):
        return ()
    toks = _TOKEN.findall(text)
    if "".join(toks) != re.sub(r"\s+", "", text):
        raise ValueError(f"cannot parse word {text!r}")
    return tuple(toks)


def format_word(word: Sequence[str]) -> str:
    return "".join(word) if word else "1"


def reduced_words(n: int, max_len: int, prefix: str = "f") -> Iterator[tuple]:
    """All reduced words of length <= max_len, by length then letter order."""
    letts = letters(n, prefix)
    level: list[tuple] = [()]
    for _ in range(max_len + 1):
        yield from level
        nxt = []
        for w in level:
            for x in letts:
                if not w or w[-1] != inv_letter(x):
                    nxt.append(w + (x,))
        level = nxt


def sphere_size(n: int, length: int) -> int:
    return 1 if length == 0 else 2 * n * (2 * n - 1) ** (length - 1)


def reduced_language(n: int, prefix: str = "f") -> Fsa:
    """DFA remembering the last letter read (2n + 1 states)."""
    letts = letters(n, prefix)
    idx = {x: i + 1 for i, x in enumerate(letts)}
    table: list[dict] = [{x: idx[x] for x in letts}]
    for last in letts:
        table.append({x: idx[x] for x in letts if x != inv_letter(last)})
    return Fsa.from_table(Alphabet(letts), table, 0, range(len(table)))


def identity(n: int, prefix: str = "f") -> RegularRelation:
    return identity_relation(reduced_language(n, prefix))


def _pair_alphabet(n, prefix):
    a = letter_alphabet(n, prefix)
    return ConvAlphabet((a, a))


def right_mult_relation(s: str, n: int, prefix: str = "f") -> RegularRelation:
    """``{(w, reduce(w s))}``: copy, then either append ``s`` or drop a final ``s^-1``."""
    letts = letters(n, prefix)
    if s not in letts:
        raise ValueError(f"{s!r} is not a letter of F_{n}")
    si = inv_letter(s)
    # 0: start, 1..2n: copying with given last letter, END: accepting sink
    idx = {x: i + 1 for i, x in enumerate(letts)}
    END = len(letts) + 1
    table: list[dict] = [{} for _ in range(END + 1)]
    for q, last in [(0, None)] + [(idx[x], x) for x in letts]:
        row = table[q]
        for x in letts:
            if last is None or x != inv_letter(last):
                row[(x, x)] = idx[x]
        if last != si:
            row[(PAD, s)] = END
        if last != s:
            row[(si, PAD)] = END
    fsa = Fsa.from_table(_pair_alphabet(n, prefix), table, 0, [END])
    return RegularRelation(determinize_minimize(fsa), (1, 1))


def left_mult_relation(s: str, n: int, prefix: str = "f") -> RegularRelation:
    """``{(w, reduce(s w))}``.

    Prepend case: the output is the input delayed by one column.
    Cancellation case (w starts with ``s^-1``): the input is the output
    delayed by one column.  The two automata are built separately and
    joined with :func:`union`.
    """
    letts = letters(n, prefix)
    if s not in letts:
        raise ValueError(f"{s!r} is not a letter of F_{n}")
    si = inv_letter(s)
    alpha = _pair_alphabet(n, prefix)
    idx = {x: i + 1 for i, x in enumerate(letts)}
    END = len(letts) + 1

    # prepend: state = previous input letter still owed to the output
    shift: list[dict] = [{} for _ in range(END + 1)]
    shift[0][(PAD, s)] = END
    for x in letts:
        if x != si:
            shift[0][(x, s)] = idx[x]
    for prev in letts:
        for x in letts:
            if x != inv_letter(prev):
                shift[idx[prev]][(x, prev)] = idx[x]
        shift[idx[prev]][(PAD, prev)] = END
    prepend = Fsa.from_table(alpha, shift, 0, [END])

    # cancellation: state = last output letter, which the input must repeat next
    back: list[dict] = [{} for _ in range(END + 1)]
    back[0][(si, PAD)] = END
    for y in letts:
        if y != s:
            back[0][(si, y)] = idx[y]
    for prev in letts:
        for y in letts:
            if y != inv_letter(prev):
                back[idx[prev]][(prev, y)] = idx[y]
        back[idx[prev]][(prev, PAD)] = END
    cancel = Fsa.from_table(alpha, back, 0, [END])

    return RegularRelation(determinize_minimize(union(prepend, cancel)), (1, 1))
