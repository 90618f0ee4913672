"""Finite automata over plain and convolution alphabets.

Automata are stored sparsely: ``delta[q]`` maps a symbol to the tuple of
successor states, and a missing symbol means "no transition".  Every
boolean operation works directly on the sparse form so that convolution
alphabets with millions of symbols never have to be enumerated; only
:func:`complement` and :func:`complete` touch the full alphabet.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Sequence

PAD = "_"

Symbol = Hashable
Column = tuple  # one symbol of a convolution alphabet
ConvWord = tuple  # tuple of Columns


class AlphabetMismatch(ValueError):
    pass


class ValidityError(ValueError):
    """A word is not a well-formed convolution."""


class EmptyLanguage(LookupError):
    pass


class AmbiguousLanguage(LookupError):
    pass


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple
    padding: str = PAD

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if not self.symbols:
            raise ValueError("alphabet must be non-empty")
        if self.padding in self.symbols:
            raise ValueError(f"padding symbol {self.padding!r} inside alphabet")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("duplicate symbols")

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __contains__(self, sym):
        return sym in self.symbols


@dataclass(frozen=True)
class ConvAlphabet:
    """``(Σ_1 ∪ {⋄}) × ... × (Σ_k ∪ {⋄})`` minus the all-padding column."""

    tracks: tuple

    def __post_init__(self):
        object.__setattr__(self, "tracks", tuple(self.tracks))
        if not self.tracks:
            raise ValueError("need at least one track")

    @property
    def k(self) -> int:
        return len(self.tracks)

    def __contains__(self, col) -> bool:
        if not isinstance(col, tuple) or len(col) != self.k:
            return False
        if all(c == PAD for c in col):
            return False
        return all(c == PAD or c in t for c, t in zip(col, self.tracks))

    def __iter__(self) -> Iterator[Column]:
        allpad = (PAD,) * self.k
        for col in itertools.product(*[(*t.symbols, PAD) for t in self.tracks]):
            if col != allpad:
                yield col

    def __len__(self):
        n = 1
        for t in self.tracks:
            n *= len(t) + 1
        return n - 1

    def sub(self, idx: Sequence[int]) -> "ConvAlphabet":
        return ConvAlphabet(tuple(self.tracks[i] for i in idx))

    def __add__(self, other: "ConvAlphabet") -> "ConvAlphabet":
        return ConvAlphabet(self.tracks + other.tracks)


def is_allpad(col) -> bool:
    return all(c == PAD for c in col)


# ---------------------------------------------------------------- convolution


def convolve(words: Sequence[Sequence]) -> ConvWord:
    if len(words) < 1:
        raise ValueError("convolve needs at least one word")
    words = [tuple(w) for w in words]
    n = max(len(w) for w in words)
    return tuple(
        tuple(w[j] if j < len(w) else PAD for w in words) for j in range(n)
    )


def check_conv_word(w: ConvWord, k: int | None = None) -> None:
    """Raise :class:`ValidityError` unless ``w`` is a well-formed convolution."""
    done: list[bool] | None = None
    for j, col in enumerate(w):
        if done is None:
            if k is not None and len(col) != k:
                raise ValidityError(f"column {j} has {len(col)} tracks, expected {k}")
            done = [False] * len(col)
        elif len(col) != len(done):
            raise ValidityError(f"column {j} has inconsistent track count")
        if is_allpad(col):
            raise ValidityError(f"column {j} is all padding")
        for i, c in enumerate(col):
            if c == PAD:
                done[i] = True
            elif done[i]:
                raise ValidityError(f"track {i} resumes after padding at column {j}")


def deconvolve(w: ConvWord, k: int | None = None) -> tuple:
    w = tuple(tuple(c) for c in w)
    check_conv_word(w, k)
    if not w:
        if k is None:
            raise ValueError("track count of the empty convolution is ambiguous; pass k")
        return ((),) * k
    k = len(w[0])
    return tuple(tuple(col[i] for col in w if col[i] != PAD) for i in range(k))


def format_conv_word(w: ConvWord) -> str:
    return " ".join(",".join(col) for col in w)


def parse_conv_word(text: str) -> ConvWord:
    text = text.strip()
    if not text:
        return ()
    return tuple(tuple(col.split(",")) for col in text.split())


# ---------------------------------------------------------------- automaton


class Fsa:
    """Sparse finite automaton.

    ``delta[q]`` is a dict ``symbol -> tuple of successor states``.  The
    object is treated as immutable once built.
    """

    __slots__ = ("alphabet", "delta", "initial", "accepting", "_table")

    def __init__(self, alphabet, delta, initial, accepting):
        self.alphabet = alphabet
        self.delta = tuple(
            {s: tuple(sorted(set(t))) for s, t in row.items() if t} for row in delta
        )
        self.initial = frozenset(initial)
        self.accepting = frozenset(accepting)
        n = len(self.delta)
        for q in itertools.chain(self.initial, self.accepting):
            if not 0 <= q < n:
                raise ValueError(f"state {q} out of range")
        for row in self.delta:
            for t in row.values():
                if t[0] < 0 or t[-1] >= n:
                    raise ValueError("transition to unknown state")
        self._table = None

    @classmethod
    def from_table(cls, alphabet, table, start, accepting) -> "Fsa":
        """Build a deterministic automaton from ``table[q][sym] = q'``."""
        a = cls.__new__(cls)
        a.alphabet = alphabet
        a.delta = tuple({s: (t,) for s, t in row.items()} for row in table)
        a.initial = frozenset([start])
        a.accepting = frozenset(accepting)
        a._table = [dict(row) for row in table]
        return a

    @property
    def n_states(self) -> int:
        return len(self.delta)

    @property
    def n_transitions(self) -> int:
        return sum(len(r) for r in self.delta)

    @property
    def deterministic(self) -> bool:
        if self._table is not None:
            return True
        return len(self.initial) == 1 and all(
            len(t) == 1 for row in self.delta for t in row.values()
        )

    @property
    def start(self) -> int:
        (q,) = self.initial
        return q

    def table(self) -> list:
        if self._table is None:
            if not self.deterministic:
                raise ValueError("automaton is not deterministic")
            self._table = [{s: t[0] for s, t in row.items()} for row in self.delta]
        return self._table

    def transitions(self) -> Iterator[tuple]:
        for q, row in enumerate(self.delta):
            for s, ts in row.items():
                for t in ts:
                    yield q, s, t

    def accepts(self, word: Iterable) -> bool:
        cur = set(self.initial)
        for sym in word:
            nxt = set()
            for q in cur:
                nxt.update(self.delta[q].get(sym, ()))
            if not nxt:
                return False
            cur = nxt
        return not cur.isdisjoint(self.accepting)

    def words(self, max_len: int) -> Iterator[tuple]:
        """All accepted words of length <= max_len (explicit enumeration)."""
        syms = list(self.alphabet)
        for n in range(max_len + 1):
            for w in itertools.product(syms, repeat=n):
                if self.accepts(w):
                    yield w

    def count_words(self, length: int) -> int:
        """Number of accepted words of exactly ``length`` (deterministic form)."""
        d = determinize(self)
        tab = d.table()
        vec = {d.start: 1}
        for _ in range(length):
            nxt: dict = {}
            for q, c in vec.items():
                for t in tab[q].values():
                    nxt[t] = nxt.get(t, 0) + c
            vec = nxt
        return sum(c for q, c in vec.items() if q in d.accepting)

    def __repr__(self):
        return (
            f"Fsa(states={self.n_states}, transitions={self.n_transitions}, "
            f"accepting={len(self.accepting)})"
        )


def _same_alphabet(a: Fsa, b: Fsa) -> None:
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch(f"{a.alphabet!r} != {b.alphabet!r}")


def _sort_key(sym):
    return sym if isinstance(sym, tuple) else (sym,)


# ---------------------------------------------------------------- determinize / minimize


def determinize(a: Fsa) -> Fsa:
    if a.deterministic:
        return a
    start = frozenset(a.initial)
    index = {start: 0}
    sets = [start]
    table: list[dict] = []
    i = 0
    while i < len(sets):
        S = sets[i]
        row: dict = {}
        for q in S:
            for sym, ts in a.delta[q].items():
                row.setdefault(sym, set()).update(ts)
        out = {}
        for sym in sorted(row, key=_sort_key):
            T = frozenset(row[sym])
            if T not in index:
                index[T] = len(sets)
                sets.append(T)
            out[sym] = index[T]
        table.append(out)
        i += 1
    acc = [j for j, S in enumerate(sets) if not S.isdisjoint(a.accepting)]
    return Fsa.from_table(a.alphabet, table, 0, acc)


def _reachable(a: Fsa) -> set:
    seen = set(a.initial)
    todo = list(seen)
    while todo:
        q = todo.pop()
        for ts in a.delta[q].values():
            for t in ts:
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
    return seen


def _coreachable(a: Fsa) -> set:
    rev: list[list[int]] = [[] for _ in range(a.n_states)]
    for q, _, t in a.transitions():
        rev[t].append(q)
    seen = set(a.accepting)
    todo = list(seen)
    while todo:
        q = todo.pop()
        for p in rev[q]:
            if p not in seen:
                seen.add(p)
                todo.append(p)
    return seen


def trim(a: Fsa) -> Fsa:
    """Drop states that are unreachable or cannot reach acceptance.

    The empty language is returned as a single non-accepting state.
    """
    keep = _reachable(a) & _coreachable(a)
    if not keep:
        return Fsa(a.alphabet, [{}], [0], [])
    order = sorted(keep)
    ren = {q: i for i, q in enumerate(order)}
    delta = []
    for q in order:
        row = {}
        for s, ts in a.delta[q].items():
            ts2 = [ren[t] for t in ts if t in ren]
            if ts2:
                row[s] = ts2
        delta.append(row)
    return Fsa(
        a.alphabet,
        delta,
        [ren[q] for q in a.initial if q in ren],
        [ren[q] for q in a.accepting if q in ren],
    )


def _canonical(alphabet, table, start, accepting) -> Fsa:
    """Renumber states breadth-first from ``start``, symbols in sorted order."""
    ren = {start: 0}
    order = [start]
    i = 0
    while i < len(order):
        q = order[i]
        for sym in sorted(table[q], key=_sort_key):
            t = table[q][sym]
            if t not in ren:
                ren[t] = len(order)
                order.append(t)
        i += 1
    new = []
    for q in order:
        new.append({s: ren[table[q][s]] for s in sorted(table[q], key=_sort_key)})
    return Fsa.from_table(alphabet, new, 0, sorted(ren[q] for q in accepting if q in ren))


def minimize(a: Fsa) -> Fsa:
    """Minimal trim DFA, canonically numbered (Moore refinement)."""
    d = trim(determinize(a))
    if not d.accepting:
        return Fsa.from_table(d.alphabet, [{}], 0, [])
    tab = d.table()
    n = d.n_states
    cls = [1 if q in d.accepting else 0 for q in range(n)]
    n_cls = len(set(cls))
    while True:
        sigs = {}
        new = []
        for q in range(n):
            sig = (cls[q], frozenset((s, cls[t]) for s, t in tab[q].items()))
            new.append(sigs.setdefault(sig, len(sigs)))
        stable = len(sigs) == n_cls
        cls, n_cls = new, len(sigs)
        if stable:
            break
    qtable: list[dict] = [None] * n_cls  # type: ignore[list-item]
    for q in range(n):
        c = cls[q]
        if qtable[c] is None:
            qtable[c] = {s: cls[t] for s, t in tab[q].items()}
    acc = {cls[q] for q in d.accepting}
    return _canonical(d.alphabet, qtable, cls[d.start], acc)


def determinize_minimize(a: Fsa) -> Fsa:
    """Deterministic, trim, state-minimal, canonically numbered automaton.

    The dead state is left implicit (a missing transition rejects); call
    :func:`complete` for a complete automaton over the alphabet.
    """
    return minimize(a)


def complete_size(a: Fsa) -> int:
    """State count of the minimal *complete* DFA for the language of ``a``."""
    m = minimize(a)
    alpha = len(a.alphabet)
    if not m.accepting:
        return 1
    full = all(len(row) == alpha for row in m.delta)
    return m.n_states + (0 if full else 1)


def complete(a: Fsa) -> Fsa:
    d = determinize(a)
    tab = [dict(r) for r in d.table()]
    syms = list(d.alphabet)
    sink = len(tab)
    needs = any(len(r) < len(syms) for r in tab)
    if needs:
        tab.append({})
        for r in tab:
            for s in syms:
                r.setdefault(s, sink)
    return Fsa.from_table(d.alphabet, tab, d.start, d.accepting)


# ---------------------------------------------------------------- boolean algebra


def _product(a: Fsa, b: Fsa, mode: str) -> Fsa:
    """Sparse product of two automata; ``None`` stands for the dead state."""
    _same_alphabet(a, b)
    da, db = determinize(a), determinize(b)
    ta, tb = da.table(), db.table()
    sa, sb = da.start, db.start
    fa, fb = da.accepting, db.accepting
    need_both = mode == "and"
    start = (sa, sb)
    index = {start: 0}
    pairs = [start]
    table: list[dict] = []
    i = 0
    while i < len(pairs):
        p, q = pairs[i]
        ra = ta[p] if p is not None else {}
        rb = tb[q] if q is not None else {}
        if need_both:
            syms = [s for s in ra if s in rb]
        else:
            syms = list(ra) + [s for s in rb if s not in ra]
        row = {}
        for s in syms:
            nxt = (ra.get(s), rb.get(s))
            if mode == "diff" and nxt[0] is None:
                continue
            if nxt not in index:
                index[nxt] = len(pairs)
                pairs.append(nxt)
            row[s] = index[nxt]
        table.append(row)
        i += 1

    def acc(pq):
        x = pq[0] is not None and pq[0] in fa
        y = pq[1] is not None and pq[1] in fb
        return {"and": x and y, "or": x or y, "diff": x and not y, "xor": x != y}[mode]

    return Fsa.from_table(a.alphabet, table, 0, [i for i, pq in enumerate(pairs) if acc(pq)])


def intersect(a: Fsa, b: Fsa) -> Fsa:
    return _product(a, b, "and")


def union(a: Fsa, b: Fsa) -> Fsa:
    return _product(a, b, "or")


def difference(a: Fsa, b: Fsa) -> Fsa:
    return _product(a, b, "diff")


def complement(a: Fsa) -> Fsa:
    c = complete(a)
    tab = c.table()
    return Fsa.from_table(
        c.alphabet, tab, c.start, [q for q in range(c.n_states) if q not in c.accepting]
    )


def is_empty(a: Fsa) -> bool:
    return _reachable(a).isdisjoint(a.accepting)


def equivalent(a: Fsa, b: Fsa) -> bool:
    return is_empty(_product(a, b, "xor"))


def unique_member(a: Fsa) -> tuple:
    """The single word accepted by ``a``.

    On the trim DFA a one-word language is exactly a simple path: no state
    branches and the only accepting state is the last one.
    """
    t = trim(determinize(a))
    if not t.accepting:
        raise EmptyLanguage("automaton accepts no word")
    tab = t.table()
    q = t.start
    word = []
    seen = {q}
    while True:
        row = tab[q]
        if q in t.accepting:
            if row:
                raise AmbiguousLanguage("accepting state has continuations")
            return tuple(word)
        if len(row) != 1:
            raise AmbiguousLanguage(f"state {q} branches on {len(row)} symbols")
        ((sym, q),) = row.items()
        if q in seen:
            raise AmbiguousLanguage("cycle on the accepting path")
        seen.add(q)
        word.append(sym)


def single_word(alphabet, word: Sequence) -> Fsa:
    table = [{sym: i + 1} for i, sym in enumerate(word)] + [{}]
    return Fsa.from_table(alphabet, table, 0, [len(word)])


def finite_language(alphabet, words: Iterable[Sequence]) -> Fsa:
    """Trie automaton accepting exactly ``words``."""
    table: list[dict] = [{}]
    acc = set()
    for w in words:
        q = 0
        for sym in w:
            if sym not in table[q]:
                table[q][sym] = len(table)
                table.append({})
            q = table[q][sym]
        acc.add(q)
    return Fsa.from_table(alphabet, table, 0, acc)


def reachable_states(a: Fsa) -> set:
    return _reachable(a)


def bfs_accepting_word(a: Fsa) -> tuple | None:
    """A shortest accepted word, or None."""
    prev = {q: None for q in a.initial}
    todo = deque(sorted(a.initial))
    while todo:
        q = todo.popleft()
        if q in a.accepting:
            w = []
            while prev[q] is not None:
                q, s = prev[q]
                w.append(s)
            return tuple(reversed(w))
        for s in sorted(a.delta[q], key=_sort_key):
            for t in a.delta[q][s]:
                if t not in prev:
                    prev[t] = (q, s)
                    todo.append(t)
    return None
