"""Text and DOT formats for automata.

Text format (UTF-8, one item per line)::

    # cayley-auto automaton v1
    arity 2
    groups 1 1
    tracks 2
    track 0 f1 F1
    track 1 f1 F1
    states 3
    initial 0
    accepting 2
    0<TAB>f1,f1<TAB>1

Plain (non-convolution) automata write ``tracks 0`` and one ``alphabet``
line instead of the track lines.  Padding is written ``_``.  Transitions
are sorted, so equal automata serialize to equal bytes.
"""

from __future__ import annotations

from .fsa import Alphabet, ConvAlphabet, Fsa, _sort_key

HEADER = "# cayley-auto automaton v1"


class FormatError(ValueError):
    pass


def dumps(a: Fsa, groups=None) -> str:
    alpha = a.alphabet
    lines = [HEADER]
    if isinstance(alpha, ConvAlphabet):
        groups = tuple(groups) if groups else (alpha.k,)
        if sum(groups) != alpha.k:
            raise ValueError("groups do not add up to the track count")
        lines.append(f"arity {len(groups)}")
        lines.append("groups " + " ".join(map(str, groups)))
        lines.append(f"tracks {alpha.k}")
        for i, t in enumerate(alpha.tracks):
            lines.append(f"track {i} " + " ".join(t.symbols))
    else:
        lines += ["arity 1", "groups 1", "tracks 0", "alphabet " + " ".join(alpha.symbols)]
    lines.append(f"states {a.n_states}")
    lines.append("initial " + " ".join(map(str, sorted(a.initial))))
    lines.append("accepting " + " ".join(map(str, sorted(a.accepting))).rstrip())
    rows = []
    for q, s, t in a.transitions():
        rows.append((q, _sort_key(s), t, s))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    for q, _, t, s in rows:
        sym = ",".join(s) if isinstance(s, tuple) else s
        lines.append(f"{q}\t{sym}\t{t}")
    return "\n".join(lines) + "\n"


def loads(text: str):
    """Parse text; returns ``(fsa, groups)``.  Any malformation raises FormatError."""
    try:
        return _loads(text)
    except FormatError:
        raise
    except (ValueError, IndexError) as exc:
        raise FormatError(str(exc)) from None


def _loads(text: str):
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != HEADER:
        raise FormatError("missing header")
    it = iter(lines[1:])

    def field(name):
        try:
            line = next(it)
        except StopIteration:
            raise FormatError(f"missing {name!r} line") from None
        key, _, rest = line.partition(" ")
        if key != name:
            raise FormatError(f"expected {name!r}, got {line!r}")
        return rest

    field("arity")
    groups = tuple(int(x) for x in field("groups").split())
    k = int(field("tracks"))
    if k == 0:
        alpha = Alphabet(tuple(field("alphabet").split()))
    else:
        tracks = []
        for i in range(k):
            rest = field("track")
            idx, _, syms = rest.partition(" ")
            if int(idx) != i:
                raise FormatError(f"track {idx} out of order")
            tracks.append(Alphabet(tuple(syms.split())))
        alpha = ConvAlphabet(tuple(tracks))
        if sum(groups) != k:
            raise FormatError("groups do not add up to the track count")
    n = int(field("states"))
    initial = [int(x) for x in field("initial").split()]
    accepting = [int(x) for x in field("accepting").split()]
    delta: list[dict] = [{} for _ in range(n)]
    for line in it:
        try:
            q, sym, t = line.split("\t")
        except ValueError:
            raise FormatError(f"bad transition line {line!r}") from None
        s = tuple(sym.split(",")) if k else sym
        if s not in alpha:
            raise FormatError(f"symbol {sym!r} not in alphabet")
        q, t = int(q), int(t)
        if not (0 <= q < n and 0 <= t < n):
            raise FormatError(f"state out of range in {line!r}")
        delta[q].setdefault(s, []).append(t)
    a = Fsa(alpha, delta, initial, accepting)
    if a.deterministic:
        a = Fsa.from_table(alpha, [{s: ts[0] for s, ts in row.items()} for row in a.delta], a.start, a.accepting)
    return a, groups


def to_dot(a: Fsa, name: str = "fsa") -> str:
    out = [f'digraph "{name}" {{', "  rankdir=LR;", '  node [shape=circle];', '  __start [shape=point];']
    for q in range(a.n_states):
        shape = "doublecircle" if q in a.accepting else "circle"
        out.append(f"  {q} [shape={shape}];")
    for q in sorted(a.initial):
        out.append(f"  __start -> {q};")
    edges: dict = {}
    for q, s, t in a.transitions():
        label = "(" + ",".join(s) + ")" if isinstance(s, tuple) else str(s)
        edges.setdefault((q, t), []).append(label)
    for (q, t), labels in sorted(edges.items()):
        text = "\\n".join(sorted(labels))
        out.append(f'  {q} -> {t} [label="{text}"];')
    out.append("}")
    return "\n".join(out) + "\n"
