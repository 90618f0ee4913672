"""Synchronous regular relations and the track-product machinery.

A relation of arity ``n`` is an automaton over a convolution alphabet whose
tracks are split into ``n`` consecutive groups (one group per component;
a component that is itself a convolution of ``g`` words occupies ``g``
tracks).  Flattening nested convolutions this way is lossless: the outer
padding symbol of a component corresponds to all of its tracks padding.

Products of automata reading possibly overlapping track subsets are built
by :func:`synchronized`.  Each part runs on its own tracks; once all of its
tracks have ended it must be accepting and then absorbs padding columns
(state ``DONE``).  Composition, functionality testing and the coupling of
independent relations are all instances of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .fsa import (
    PAD,
    Alphabet,
    ConvAlphabet,
    Fsa,
    check_conv_word,
    convolve,
    deconvolve,
    determinize,
    equivalent,
    is_allpad,
    minimize,
)

DONE = -1


def as_conv(a: Fsa) -> Fsa:
    """View an automaton over a plain alphabet as a one-track convolution automaton."""
    if isinstance(a.alphabet, ConvAlphabet):
        return a
    d = determinize(a)
    tab = [{(s,): t for s, t in row.items()} for row in d.table()]
    return Fsa.from_table(ConvAlphabet((a.alphabet,)), tab, d.start, d.accepting)


def as_plain(a: Fsa) -> Fsa:
    """Inverse of :func:`as_conv` for one-track automata."""
    if not isinstance(a.alphabet, ConvAlphabet):
        return a
    if a.alphabet.k != 1:
        raise ValueError("only one-track automata have a plain form")
    d = determinize(a)
    tab = [{s[0]: t for s, t in row.items()} for row in d.table()]
    return Fsa.from_table(a.alphabet.tracks[0], tab, d.start, d.accepting)


def permute_tracks(a: Fsa, order: Sequence[int]) -> Fsa:
    """Automaton whose track ``i`` is track ``order[i]`` of ``a``."""
    a = as_conv(a)
    order = tuple(order)
    if sorted(order) != list(range(a.alphabet.k)):
        raise ValueError(f"{order} is not a permutation of the tracks")
    alpha = a.alphabet.sub(order)
    delta = [
        {tuple(s[i] for i in order): ts for s, ts in row.items()} for row in a.delta
    ]
    return Fsa(alpha, delta, a.initial, a.accepting)


# ---------------------------------------------------------------- product engine


@dataclass
class Part:
    """A deterministic automaton reading the global tracks ``tracks`` (in order)."""

    table: list
    start: int
    accepting: frozenset
    tracks: tuple

    @classmethod
    def of(cls, a: Fsa, tracks: Sequence[int]) -> "Part":
        d = determinize(as_conv(a))
        if d.alphabet.k != len(tracks):
            raise ValueError("track map does not match automaton arity")
        return cls(d.table(), d.start, d.accepting, tuple(tracks))


class NotEqual:
    """Lazy two-track-group automaton accepting pairs of distinct words."""

    def __init__(self, tracks: Sequence[int], h: int):
        self.tracks = tuple(tracks)
        self.h = h
        self.start = 0

    def step(self, q, sub):
        return 1 if q or sub[: self.h] != sub[self.h :] else 0

    def final(self, q):
        return q == 1


def synchronized(
    parts: Sequence[Part], alphabet: ConvAlphabet, lazy=(), stop_on_accept=False
):
    """Explore the synchronized product of ``parts``.

    Returns a deterministic :class:`Fsa` over ``alphabet`` (or, with
    ``stop_on_accept``, a bool telling whether any word is accepted).
    Every track must be read by at least one table part.
    """
    k = alphabet.k
    covered = set()
    plans = []
    for p in parts:
        shared = tuple(i for i, t in enumerate(p.tracks) if t in covered)
        fresh = tuple(i for i, t in enumerate(p.tracks) if t not in covered)
        plans.append((shared, fresh))
        covered.update(p.tracks)
    if covered != set(range(k)):
        raise ValueError("some tracks are read by no part")
    caches: list[dict] = [{} for _ in parts]

    def options(pi, q):
        c = caches[pi]
        if q in c:
            return c[q]
        p = parts[pi]
        shared, fresh = plans[pi]
        allpad = (PAD,) * len(p.tracks)
        if q == DONE:
            opts = [(allpad, DONE)]
        else:
            opts = list(p.table[q].items())
            if q in p.accepting:
                opts.append((allpad, DONE))
        idx: dict = {}
        for sub, nxt in opts:
            key = tuple(sub[i] for i in shared)
            idx.setdefault(key, []).append((tuple(sub[i] for i in fresh), nxt))
        c[q] = idx
        return idx

    def final(states):
        for p, q in zip(parts, states[: len(parts)]):
            if q != DONE and q not in p.accepting:
                return False
        for lz, q in zip(lazy, states[len(parts) :]):
            if q != DONE and not lz.final(q):
                return False
        return True

    start = tuple(p.start for p in parts) + tuple(lz.start for lz in lazy)
    index = {start: 0}
    order = [start]
    table: list[dict] = []
    allpad_k = (PAD,) * k
    i = 0
    while i < len(order):
        st = order[i]
        if stop_on_accept and final(st):
            return True
        partial = [([None] * k, ())]
        for pi, p in enumerate(parts):
            shared, fresh = plans[pi]
            idx = options(pi, st[pi])
            ext = []
            for assign, nxts in partial:
                key = tuple(assign[p.tracks[j]] for j in shared)
                for vals, nq in idx.get(key, ()):
                    a2 = assign[:]
                    for j, v in zip(fresh, vals):
                        a2[p.tracks[j]] = v
                    ext.append((a2, nxts + (nq,)))
            partial = ext
            if not partial:
                break
        row = {}
        for assign, nxts in partial:
            col = tuple(assign)
            if col == allpad_k:
                continue
            ok = True
            lz_states = []
            for lz, q in zip(lazy, st[len(parts) :]):
                sub = tuple(col[t] for t in lz.tracks)
                if is_allpad(sub):
                    if q == DONE or lz.final(q):
                        lz_states.append(DONE)
                    else:
                        ok = False
                        break
                elif q == DONE:
                    ok = False
                    break
                else:
                    lz_states.append(lz.step(q, sub))
            if not ok:
                continue
            nst = nxts + tuple(lz_states)
            if nst not in index:
                index[nst] = len(order)
                order.append(nst)
            row[col] = index[nst]
        table.append(row)
        i += 1
    if stop_on_accept:
        return False
    acc = [j for j, st in enumerate(order) if final(st)]
    return Fsa.from_table(alphabet, table, 0, acc)


def hide_tracks(a: Fsa, keep: Sequence[int]) -> Fsa:
    """Existentially quantify away every track not in ``keep``.

    Columns that become all padding can only form a suffix of a valid
    word; they are removed and their effect folded into acceptance.
    """
    a = as_conv(a)
    keep = tuple(keep)
    alpha = a.alphabet.sub(keep)
    delta: list[dict] = [{} for _ in range(a.n_states)]
    eps: list[set] = [set() for _ in range(a.n_states)]
    for q, s, t in a.transitions():
        sub = tuple(s[i] for i in keep)
        if is_allpad(sub):
            eps[q].add(t)
        else:
            delta[q].setdefault(sub, set()).add(t)
    # states that reach acceptance through padding-only columns
    acc = set(a.accepting)
    changed = True
    while changed:
        changed = False
        for q in range(a.n_states):
            if q not in acc and not eps[q].isdisjoint(acc):
                acc.add(q)
                changed = True
    return Fsa(alpha, delta, a.initial, acc)


# ---------------------------------------------------------------- relations


def _component_tracks(comp, g: int) -> tuple:
    if g == 1:
        return (tuple(comp),)
    return deconvolve(tuple(comp), g)


def join(components: Sequence, groups: Sequence[int]):
    """Convolution of a tuple of components (nested convolutions are flattened)."""
    tracks = []
    for comp, g in zip(components, groups):
        tracks.extend(_component_tracks(comp, g))
    return convolve(tracks)


def split(w, groups: Sequence[int]) -> tuple:
    """Inverse of :func:`join`."""
    k = sum(groups)
    tracks = deconvolve(tuple(w), k)
    out = []
    pos = 0
    for g in groups:
        tr = tracks[pos : pos + g]
        out.append(tr[0] if g == 1 else convolve(tr))
        pos += g
    return tuple(out)


class _Cursor:
    """Step interface used by :func:`_restrict` (state, input column) -> moves."""

    in_tracks: tuple
    out_tracks: tuple

    def moves(self, state, sub_in):  # pragma: no cover - interface
        raise NotImplementedError

    def final(self, state) -> bool:  # pragma: no cover - interface
        raise NotImplementedError


def _restrict(cursor, start, w_cols: Sequence[tuple], n_in: int, out_alpha) -> Fsa:
    L = len(w_cols)
    pad_in = (PAD,) * n_in
    plain = not isinstance(out_alpha, ConvAlphabet)
    index = {(start, 0): 0}
    order = [(start, 0)]
    delta: list[dict] = []
    eps: list[set] = []
    i = 0
    while i < len(order):
        q, pos = order[i]
        sub = w_cols[pos] if pos < L else pad_in
        row: dict = {}
        ep: set = set()
        for out, q2 in cursor.moves(q, sub):
            npos = min(pos + 1, L)
            key = (q2, npos)
            if key not in index:
                index[key] = len(order)
                order.append(key)
            if is_allpad(out):
                if pos < L:
                    ep.add(index[key])
                continue
            sym = out[0] if plain else out
            row.setdefault(sym, set()).add(index[key])
        delta.append(row)
        eps.append(ep)
        i += 1
    acc = {j for j, (q, pos) in enumerate(order) if pos == L and cursor.final(q)}
    changed = True
    while changed:
        changed = False
        for j in range(len(order)):
            if j not in acc and not eps[j].isdisjoint(acc):
                acc.add(j)
                changed = True
    return Fsa(out_alpha, delta, [0], acc)


def _input_columns(w, g: int) -> list:
    if g == 1:
        return [(s,) for s in w]
    w = tuple(tuple(c) for c in w)
    check_conv_word(w, g)
    return list(w)


class RegularRelation(_Cursor):
    """An ``n``-ary relation given by an automaton over its convolution."""

    def __init__(self, fsa: Fsa, groups: Sequence[int]):
        fsa = determinize(as_conv(fsa))
        self.groups = tuple(groups)
        if fsa.alphabet.k != sum(self.groups):
            raise ValueError("groups do not add up to the track count")
        self.fsa = fsa
        self._by_input: dict = {}

    @property
    def arity(self) -> int:
        return len(self.groups)

    @property
    def alphabet(self) -> ConvAlphabet:
        return self.fsa.alphabet

    def group_tracks(self, i: int) -> tuple:
        start = sum(self.groups[:i])
        return tuple(range(start, start + self.groups[i]))

    def group_alphabet(self, i: int):
        sub = self.alphabet.sub(self.group_tracks(i))
        return sub.tracks[0] if self.groups[i] == 1 else sub

    def accepts(self, components: Sequence) -> bool:
        return self.fsa.accepts(join(components, self.groups))

    def minimized(self) -> "RegularRelation":
        return RegularRelation(minimize(self.fsa), self.groups)

    # cursor interface: group 0 is the input, the rest is output
    @property
    def n_in(self):
        return self.groups[0]

    def moves(self, q, sub_in):
        idx = self._by_input.get(q)
        if idx is None:
            n = self.n_in
            idx = {}
            for s, t in self.fsa.table()[q].items():
                idx.setdefault(s[:n], []).append((s[n:], t))
            self._by_input[q] = idx
        return idx.get(sub_in, ())

    def final(self, q):
        return q in self.fsa.accepting

    def restrict_first(self, w) -> Fsa:
        """Automaton for ``{rest : (w, *rest) in self}``."""
        out_tracks = tuple(range(self.n_in, self.alphabet.k))
        out_alpha = self.alphabet.sub(out_tracks)
        if len(out_tracks) == 1:
            out_alpha = out_alpha.tracks[0]
        cols = _input_columns(w, self.n_in)
        return _restrict(self, self.fsa.start, cols, self.n_in, out_alpha)

    def __repr__(self):
        return f"RegularRelation(groups={self.groups}, fsa={self.fsa!r})"


def identity_relation(language: Fsa) -> RegularRelation:
    """``{(w, w) : w in language}``."""
    lang = determinize(as_conv(language))
    g = lang.alphabet.k
    tab = [{s + s: t for s, t in row.items()} for row in lang.table()]
    fsa = Fsa.from_table(lang.alphabet + lang.alphabet, tab, lang.start, lang.accepting)
    return RegularRelation(fsa, (g, g))


def project(r: RegularRelation, group: int) -> RegularRelation:
    if r.arity < 2:
        raise ValueError("projection needs arity >= 2")
    keep = [t for i in range(r.arity) if i != group for t in r.group_tracks(i)]
    groups = tuple(g for i, g in enumerate(r.groups) if i != group)
    return RegularRelation(minimize(hide_tracks(r.fsa, keep)), groups)


def domain(r: RegularRelation, group: int = 0) -> Fsa:
    """The language of one component (other components quantified away)."""
    fsa = minimize(hide_tracks(r.fsa, r.group_tracks(group)))
    return fsa if r.groups[group] > 1 else as_plain(fsa)


def converse(r: RegularRelation, perm: Sequence[int] | None = None) -> RegularRelation:
    """Reorder components; ``perm[i]`` is the old index of new component ``i``."""
    if perm is None:
        if r.arity != 2:
            raise ValueError("default converse is only defined for binary relations")
        perm = (1, 0)
    perm = tuple(perm)
    if sorted(perm) != list(range(r.arity)):
        raise ValueError(f"{perm} is not a permutation")
    order = [t for i in perm for t in r.group_tracks(i)]
    return RegularRelation(permute_tracks(r.fsa, order), [r.groups[i] for i in perm])


def compose(r1: RegularRelation, r2: RegularRelation) -> RegularRelation:
    """``{(x, z) : (x, y) in r1 and (y, z) in r2 for some y}``."""
    if r1.arity != 2 or r2.arity != 2:
        raise ValueError("compose needs binary relations")
    g, h = r1.groups
    h2, m = r2.groups
    if h != h2 or r1.alphabet.sub(r1.group_tracks(1)) != r2.alphabet.sub(r2.group_tracks(0)):
        raise ValueError("middle components do not match")
    alpha = r1.alphabet + r2.alphabet.sub(r2.group_tracks(1))
    x = tuple(range(g))
    y = tuple(range(g, g + h))
    z = tuple(range(g + h, g + h + m))
    prod = synchronized([Part.of(r1.fsa, x + y), Part.of(r2.fsa, y + z)], alpha)
    return RegularRelation(minimize(hide_tracks(prod, x + z)), (g, m))


def restrict_first(r, w) -> Fsa:
    return r.restrict_first(w)


def is_functional(r: RegularRelation) -> bool:
    """No first component has two distinct images (exact)."""
    if r.arity != 2:
        raise ValueError("functionality is defined for binary relations")
    g, h = r.groups
    x = tuple(range(g))
    y = tuple(range(g, g + h))
    z = tuple(range(g + h, g + 2 * h))
    alpha = r.alphabet + r.alphabet.sub(r.group_tracks(1))
    parts = [Part.of(r.fsa, x + y), Part.of(r.fsa, x + z)]
    return not synchronized(parts, alpha, lazy=[NotEqual(y + z, h)], stop_on_accept=True)


def is_total(r: RegularRelation, dom: Fsa) -> bool:
    """Every word of ``dom`` has an image, and nothing outside ``dom`` does."""
    return equivalent(as_conv(domain(r, 0)), as_conv(dom))


def verify_validity(r) -> bool:
    """Every accepted word is a well-formed convolution (exact).

    Runs the automaton against the padding-discipline checker: a set of
    tracks already padded, plus a sticky failure flag.
    """
    if isinstance(r, CoupledRelation):
        return all(verify_validity(fsa) for fsa, _ in r.factors)
    a = r.fsa if isinstance(r, RegularRelation) else as_conv(r)
    seen = {(q, 0, False) for q in a.initial}
    todo = list(seen)
    while todo:
        q, mask, bad = todo.pop()
        if bad and q in a.accepting:
            return False
        for s, ts in a.delta[q].items():
            m2, b2 = mask, bad or is_allpad(s)
            for i, c in enumerate(s):
                if c == PAD:
                    m2 |= 1 << i
                elif mask >> i & 1:
                    b2 = True
            for t in ts:
                key = (t, m2, b2)
                if key not in seen:
                    seen.add(key)
                    todo.append(key)
    return True


# ---------------------------------------------------------------- coupled relations


class CoupledRelation(_Cursor):
    """Track-group product of independent relations.

    ``factors`` is a list of ``(fsa, tracks)``: the automaton reads the
    global tracks ``tracks`` in that order, and the tracks of all factors
    partition the global track set.  A word belongs to the relation iff
    every factor accepts its own tracks with trailing padding removed, so
    functionality, totality and validity hold for the product exactly when
    they hold for each factor.  :meth:`materialize` builds the single
    synchronous automaton.
    """

    def __init__(self, alphabet: ConvAlphabet, groups: Sequence[int], factors):
        self.alphabet = alphabet
        self.groups = tuple(groups)
        if sum(self.groups) != alphabet.k:
            raise ValueError("groups do not add up to the track count")
        fs = []
        seen: list[int] = []
        for fsa, tracks in factors:
            tracks = tuple(tracks)
            fsa = determinize(as_conv(fsa))
            if fsa.alphabet != alphabet.sub(tracks):
                raise ValueError(f"factor on tracks {tracks} has the wrong alphabet")
            fs.append((fsa, tracks))
            seen.extend(tracks)
        if sorted(seen) != list(range(alphabet.k)):
            raise ValueError("factor tracks must partition the tracks")
        self.factors = tuple(fs)
        self._by_input: list[dict] = [{} for _ in fs]
        n_in = self.groups[0]
        self._io = [
            (
                tuple(j for j, t in enumerate(tr) if t < n_in),
                tuple(t for t in tr if t < n_in),
                tuple(j for j, t in enumerate(tr) if t >= n_in),
                tuple(t - n_in for t in tr if t >= n_in),
            )
            for _, tr in fs
        ]

    @property
    def arity(self) -> int:
        return len(self.groups)

    def group_tracks(self, i: int) -> tuple:
        start = sum(self.groups[:i])
        return tuple(range(start, start + self.groups[i]))

    def parts(self) -> list:
        return [Part.of(fsa, tracks) for fsa, tracks in self.factors]

    def accepts(self, components: Sequence) -> bool:
        w = join(components, self.groups)
        return self.accepts_conv(w)

    def accepts_conv(self, w) -> bool:
        check_conv_word(w, self.alphabet.k)
        for fsa, tracks in self.factors:
            sub = [tuple(col[t] for t in tracks) for col in w]
            while sub and is_allpad(sub[-1]):
                sub.pop()
            if not fsa.accepts(sub):
                return False
        return True

    def materialize(self) -> RegularRelation:
        return RegularRelation(minimize(synchronized(self.parts(), self.alphabet)), self.groups)

    def materialize_fsa(self) -> Fsa:
        return minimize(synchronized(self.parts(), self.alphabet))

    def converse(self, perm: Sequence[int] | None = None) -> "CoupledRelation":
        if perm is None:
            perm = (1, 0)
        order = [t for i in perm for t in self.group_tracks(i)]
        where = {old: new for new, old in enumerate(order)}
        factors = [(fsa, tuple(where[t] for t in tr)) for fsa, tr in self.factors]
        return CoupledRelation(
            self.alphabet.sub(order), [self.groups[i] for i in perm], factors
        )

    # cursor interface (binary relations: group 0 input, group 1 output)
    @property
    def n_in(self):
        return self.groups[0]

    def _factor_moves(self, fi, q, sub):
        c = self._by_input[fi]
        idx = c.get(q)
        if idx is None:
            fsa, tracks = self.factors[fi]
            in_pos, _, out_pos, _ = self._io[fi]
            idx = {}
            if q == DONE:
                idx[(PAD,) * len(in_pos)] = [((PAD,) * len(out_pos), DONE)]
            else:
                for s, t in fsa.table()[q].items():
                    key = tuple(s[j] for j in in_pos)
                    idx.setdefault(key, []).append((tuple(s[j] for j in out_pos), t))
                if q in fsa.accepting:
                    idx.setdefault((PAD,) * len(in_pos), []).append(
                        ((PAD,) * len(out_pos), DONE)
                    )
            c[q] = idx
        return idx.get(sub, ())

    def moves(self, state, sub_in):
        n_out = self.alphabet.k - self.n_in
        partial = [([PAD] * n_out, ())]
        for fi in range(len(self.factors)):
            _, in_tr, _, out_tr = self._io[fi]
            sub = tuple(sub_in[t] for t in in_tr)
            opts = self._factor_moves(fi, state[fi], sub)
            if not opts:
                return []
            ext = []
            for out, nxt in partial:
                for o, q in opts:
                    o2 = out[:]
                    for t, v in zip(out_tr, o):
                        o2[t] = v
                    ext.append((o2, nxt + (q,)))
            partial = ext
        res = []
        for out, nxt in partial:
            out = tuple(out)
            if is_allpad(out) and is_allpad(sub_in):
                continue
            res.append((out, nxt))
        return res

    def final(self, state) -> bool:
        return all(q == DONE or q in fsa.accepting for (fsa, _), q in zip(self.factors, state))

    def restrict_first(self, w) -> Fsa:
        if self.arity != 2:
            raise ValueError("restrict_first is implemented for binary relations")
        out_tracks = self.group_tracks(1)
        out_alpha = self.alphabet.sub(out_tracks)
        if len(out_tracks) == 1:
            out_alpha = out_alpha.tracks[0]
        start = tuple(fsa.start for fsa, _ in self.factors)
        cols = _input_columns(w, self.n_in)
        return _restrict(self, start, cols, self.n_in, out_alpha)

    # -- factor-level views

    def coords(self, tracks: Sequence[int]) -> frozenset:
        """Coordinates (track index within its group) touched by ``tracks``."""
        offs = [sum(self.groups[:i]) for i in range(self.arity)]
        out = set()
        for t in tracks:
            gi = max(i for i, o in enumerate(offs) if o <= t)
            out.add(t - offs[gi])
        return frozenset(out)

    def factor_relation(self, fi: int) -> RegularRelation:
        """Factor ``fi`` as a relation between its input tracks and its output tracks."""
        fsa, tracks = self.factors[fi]
        if self.arity == 1:
            return RegularRelation(fsa, (len(tracks),))
        in_pos, _, out_pos, _ = self._io[fi]
        return RegularRelation(permute_tracks(fsa, in_pos + out_pos), (len(in_pos), len(out_pos)))

    def block(self, coords: Sequence[int]) -> "CoupledRelation":
        """Restriction to the factors living on the coordinate set ``coords``.

        Requires the groups to have equal size (relations on one encoding).
        """
        g = self.groups[0]
        if any(x != g for x in self.groups):
            raise ValueError("block() needs equal group sizes")
        coords = sorted(coords)
        glob = [gi * g + c for gi in range(self.arity) for c in coords]
        where = {t: i for i, t in enumerate(glob)}
        fs = []
        for fsa, tr in self.factors:
            if all(t in where for t in tr):
                fs.append((fsa, tuple(where[t] for t in tr)))
            elif any(t in where for t in tr):
                raise ValueError("coordinate set cuts through a factor")
        return CoupledRelation(self.alphabet.sub(glob), [len(coords)] * self.arity, fs)

    def partition(self) -> list:
        g = self.groups[0]
        return [frozenset(t % g for t in tr) for _, tr in self.factors]

    def minimal_size(self) -> int:
        """State count of the minimal complete DFA of the product language.

        Computed from the factors without building the product.  Once every
        factor residual is non-empty, a residual of the product is the tuple
        of factor residuals (a factor whose tracks have ended has the same
        residual as an accepting state with no moves), so the answer is the
        number of such tuples reachable by words of one common length with
        at least one non-padding sub-column at every step, plus the dead
        state when some reachable tuple lacks a move.
        """
        profiles = []
        for fsa, _ in self.factors:
            m = minimize(fsa)
            if not m.accepting:
                return 1
            profiles.append(_factor_profile(m, single=len(self.factors) == 1))
        masks = _length_masks(profiles)
        groups = [_signature_groups(mk) for mk in masks]
        total = _count_tuples(groups)
        dead = False
        for i, (prof, mk) in enumerate(zip(profiles, masks)):
            sigs = {(mk[0][c], mk[1][c]) for c in range(prof["n_cls"]) if not prof["complete"][c]}
            for sig in sigs:
                trial = groups[:i] + [{sig: 1}] + groups[i + 1 :]
                if _count_tuples(trial):
                    dead = True
                    break
            if dead:
                break
        return total + int(dead)

    def __repr__(self):
        return f"CoupledRelation(groups={self.groups}, factors={[f.n_states for f, _ in self.factors]})"


def _factor_profile(m: Fsa, single: bool) -> dict:
    tab = m.table()
    n_sym = len(m.alphabet)
    eps = [q for q in range(m.n_states) if q in m.accepting and not tab[q]]
    done = eps[0] if eps else m.n_states
    n_cls = m.n_states + (0 if eps else 1)
    complete = [len(tab[q]) == n_sym and (single or q in m.accepting) for q in range(m.n_states)]
    complete += [False] * (n_cls - m.n_states)
    return {"fsa": m, "table": tab, "done": done, "n_cls": n_cls, "complete": complete}


def _length_masks(profiles: list, limit: int = 100000) -> list:
    """Per factor, bit masks over word lengths: where each class is reachable
    at all, and where it is reachable by a non-padding step."""

    def advance(prof, cur):
        tab, done, acc = prof["table"], prof["done"], prof["fsa"].accepting
        out = set()
        for c, _ in cur:
            if c == done:
                out.add((done, False))
                continue
            out.update((t, True) for t in tab[c].values())
            if c in acc:
                out.add((done, False))
        return frozenset(out)

    cur = tuple(frozenset({(p["fsa"].start, True)}) for p in profiles)
    seen: dict = {}
    seq = []
    while cur not in seen:
        if len(seq) > limit:
            raise RuntimeError("length profile did not become periodic")
        seen[cur] = len(seq)
        seq.append(cur)
        cur = tuple(advance(p, S) for p, S in zip(profiles, cur))
    out = []
    for i, p in enumerate(profiles):
        anyk = [0] * p["n_cls"]
        real = [0] * p["n_cls"]
        for n, joint in enumerate(seq):
            for c, r in joint[i]:
                anyk[c] |= 1 << n
                if r:
                    real[c] |= 1 << n
        out.append((anyk, real))
    return out


def _signature_groups(mask) -> dict:
    anyk, real = mask
    groups: dict = {}
    for a, r in zip(anyk, real):
        if a:
            groups[(a, r)] = groups.get((a, r), 0) + 1
    return groups


def _count_tuples(groups: list) -> int:
    """Tuples with a common length at which all are reachable and one by a real step."""
    full = -1
    dp = {(full, 0): 1}
    for g in groups:
        nxt: dict = {}
        for (a, r), cnt in dp.items():
            for (ga, gr), k in g.items():
                na = a & ga
                if not na:
                    continue
                key = (na, r | gr)
                nxt[key] = nxt.get(key, 0) + cnt * k
        dp = nxt
    return sum(cnt for (a, r), cnt in dp.items() if a & r)


def join_partitions(*parts: Sequence[frozenset]) -> list:
    blocks: list[set] = []
    for p in parts:
        for b in p:
            b = set(b)
            merged = [x for x in blocks if x & b]
            for x in merged:
                blocks.remove(x)
                b |= x
            blocks.append(b)
    return sorted((frozenset(b) for b in blocks), key=min)


def coupled_compose(a: CoupledRelation, b: CoupledRelation) -> CoupledRelation:
    """Blockwise composition of two coupled binary relations."""
    g = a.groups[0]
    blocks = join_partitions(a.partition(), b.partition())
    factors = []
    for blk in blocks:
        ra = a.block(blk).materialize()
        rb = b.block(blk).materialize()
        c = compose(ra, rb)
        cs = sorted(blk)
        factors.append((c.fsa, tuple(cs) + tuple(g + x for x in cs)))
    return CoupledRelation(a.alphabet, a.groups, factors)


def coupled_equivalent(a: CoupledRelation, b: CoupledRelation) -> bool:
    """Language equality, decided block by block on the joined partition.

    Exact when both relations have non-empty factors: a track-product
    language determines each of its factors.
    """
    if a.alphabet != b.alphabet or a.groups != b.groups:
        return False
    for blk in join_partitions(a.partition(), b.partition()):
        if not equivalent(a.block(blk).materialize().fsa, b.block(blk).materialize().fsa):
            return False
    return True
