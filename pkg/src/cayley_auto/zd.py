"""Automatic presentation of Z^d.

Integers are written in two's complement, least significant digit first,
in the shortest form (length 1, or the last two digits differ).  Vectors
are the convolution of their coordinates' encodings.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from .fsa import PAD, Alphabet, ConvAlphabet, Fsa, convolve, deconvolve, minimize
from .relations import Part, RegularRelation, synchronized

BITS = Alphabet(("0", "1"))


def enc_int(n: int) -> str:
    digits = []
    while True:
        d = n & 1
        digits.append("1" if d else "0")
        n >>= 1
        if (n == 0 and d == 0) or (n == -1 and d == 1):
            return "".join(digits)


def dec_int(w) -> int:
    w = "".join(w)
    if not w:
        raise ValueError("empty integer encoding")
    if any(c not in "01" for c in w):
        raise ValueError(f"bad digit in {w!r}")
    if len(w) > 1 and w[-1] == w[-2]:
        raise ValueError(f"{w!r} has a redundant sign digit")
    value = sum(1 << i for i, c in enumerate(w[:-1]) if c == "1")
    if w[-1] == "1":
        value -= 1 << (len(w) - 1)
    return value


def enc_vec(v: Sequence[int]):
    return convolve([enc_int(x) for x in v])


def dec_vec(w, d: int | None = None) -> tuple:
    tracks = deconvolve(w, d)
    return tuple(dec_int(t) for t in tracks)


def bits_alphabet(d: int) -> ConvAlphabet:
    return ConvAlphabet((BITS,) * d)


def canonical_int_language() -> Fsa:
    """One track: non-empty, and the last two digits differ unless length 1."""
    # state 0: nothing read; 1 + 2*last + ok otherwise
    table: list[dict] = [{} for _ in range(5)]
    for x in (0, 1):
        table[0][str(x)] = 1 + 2 * x + 1
    for last in (0, 1):
        for ok in (0, 1):
            q = 1 + 2 * last + ok
            for x in (0, 1):
                table[q][str(x)] = 1 + 2 * x + (x != last)
    acc = [1 + 2 * last + 1 for last in (0, 1)]
    return minimize(Fsa.from_table(BITS, table, 0, acc))


def canonical_language(d: int) -> Fsa:
    if d < 1:
        raise ValueError("d >= 1")
    one = canonical_int_language()
    parts = [Part.of(one, (i,)) for i in range(d)]
    return minimize(synchronized(parts, bits_alphabet(d)))


def carry_bound(M, t) -> list:
    d = len(M)
    return [sum(abs(M[i][j]) for i in range(d)) + abs(t[j]) + 1 for j in range(d)]


def affine_relation(M, t=None, return_stats: bool = False):
    """Synchronous automaton for ``v -> v M + t`` on canonical encodings.

    Digit-serial: each state holds the carry vector, a saturating position
    counter (for the digits of ``t``) and, per track, either "nothing read",
    ``(last digit, may end here)`` or "padded with sign s".  A padded input
    track keeps contributing its sign digit.
    """
    d = len(M)
    M = [list(map(int, row)) for row in M]
    if any(len(row) != d for row in M):
        raise ValueError("matrix must be square")
    t = [0] * d if t is None else [int(x) for x in t]
    if len(t) != d:
        raise ValueError("translation has wrong dimension")
    t_enc = [enc_int(x) for x in t]
    t_len = max(len(s) for s in t_enc)
    t_sign = [int(s[-1]) for s in t_enc]

    def tbit(j, pos):
        s = t_enc[j]
        return int(s[pos]) if pos < len(s) else t_sign[j]

    START = None  # phase of a track before its first digit

    def track_opts(ph):
        # (symbol, digit value, new phase)
        if ph is START:
            return [("0", 0, (0, True)), ("1", 1, (1, True))]
        if ph[0] == "p":
            return [(PAD, ph[1], ph)]
        last, ok = ph
        opts = [("0", 0, (0, last != 0)), ("1", 1, (1, last != 1))]
        if ok:
            opts.append((PAD, last, ("p", last)))
        return opts

    def out_opts(ph, y):
        if ph is START:
            return [(str(y), (y, True))]
        if ph[0] == "p":
            return [(PAD, ph)] if ph[1] == y else []
        last, ok = ph
        opts = [(str(y), (y, y != last))]
        if ok and y == last:
            opts.append((PAD, ("p", last)))
        return opts

    def sign(ph):
        return ph[1] if ph[0] == "p" else ph[0]

    def accepting(state):
        pos, carry, ins, outs = state
        for ph in ins + outs:
            if ph is START or (ph[0] != "p" and not ph[1]):
                return False
        sig = [sign(ph) for ph in ins]
        rho = [sign(ph) for ph in outs]
        c = list(carry)
        base = [sum(sig[i] * M[i][j] for i in range(d)) for j in range(d)]
        while pos < t_len:
            for j in range(d):
                s = base[j] + tbit(j, pos) + c[j]
                if s & 1 != rho[j]:
                    return False
                c[j] = (s - rho[j]) >> 1
            pos += 1
        return all(c[j] == base[j] + t_sign[j] - rho[j] for j in range(d))

    start = (0, (0,) * d, (START,) * d, (START,) * d)
    index = {start: 0}
    order = [start]
    table: list[dict] = []
    max_carry = [0] * d
    i = 0
    while i < len(order):
        pos, carry, ins, outs = order[i]
        row: dict = {}
        for choice in itertools.product(*[track_opts(ph) for ph in ins]):
            in_syms = tuple(c[0] for c in choice)
            xs = [c[1] for c in choice]
            new_ins = tuple(c[2] for c in choice)
            sums = [
                sum(xs[k] * M[k][j] for k in range(d)) + tbit(j, pos) + carry[j]
                for j in range(d)
            ]
            per_out = [out_opts(outs[j], sums[j] & 1) for j in range(d)]
            for ochoice in itertools.product(*per_out):
                out_syms = tuple(o[0] for o in ochoice)
                col = in_syms + out_syms
                if all(c == PAD for c in col):
                    continue
                new_outs = tuple(o[1] for o in ochoice)
                ys = [sign(ph) for ph in new_outs]
                new_carry = tuple((sums[j] - ys[j]) >> 1 for j in range(d))
                for j in range(d):
                    max_carry[j] = max(max_carry[j], abs(new_carry[j]))
                nst = (min(pos + 1, t_len), new_carry, new_ins, new_outs)
                if nst not in index:
                    index[nst] = len(order)
                    order.append(nst)
                row[col] = index[nst]
        table.append(row)
        i += 1
    acc = [j for j, st in enumerate(order) if accepting(st)]
    raw = Fsa.from_table(bits_alphabet(2 * d), table, 0, acc)
    rel = RegularRelation(minimize(raw), (d, d))
    if return_stats:
        return rel, {"raw_states": len(order), "max_carry": max_carry}
    return rel


def coordinate_blocks(M) -> list:
    """Connected components of coordinates coupled by non-zero entries of ``M``."""
    d = len(M)
    parent = list(range(d))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(d):
        for j in range(d):
            if M[i][j]:
                parent[find(i)] = find(j)
    blocks: dict = {}
    for i in range(d):
        blocks.setdefault(find(i), []).append(i)
    return sorted((tuple(b) for b in blocks.values()), key=lambda b: b[0])
