"""Myhill-Nerode lower bounds from finite classified samples.

A sample is a set of positive and a set of negative convolution words.
Two prefixes are distinguished when one extension sends the first to a
positive word and the second to a negative word (or vice versa).  Any DFA
that accepts every positive and rejects every negative needs a separate
state for each member of a pairwise-distinguished prefix set, so the size
of such a set is a lower bound on the state count of every consistent
complete DFA.

The bound only speaks about the finite sample.  A plateau across radii
does not prove that a relation is regular and growth does not prove that
it is not.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .fsa import is_allpad
from .relations import join
from .semidirect import GElement, GroupSpec, build_structure, encode, generator, identity, multiply

FRAMING = (
    "# Lower bounds hold for DFAs consistent with the finite sample only. "
    "A plateau is evidence, never proof, of regularity; "
    "growth is evidence, never proof, of non-regularity."
)


@dataclass(frozen=True)
class ClassifiedSample:
    positives: frozenset
    negatives: frozenset
    spec: GroupSpec | None = None
    generator: str = ""
    radius: int = 0
    side: str = "left"

    def __post_init__(self):
        if self.positives & self.negatives:
            raise ValueError("a word is classified both ways")

    def label(self, w) -> int | None:
        if w in self.positives:
            return 1
        if w in self.negatives:
            return -1
        return None

    def __len__(self):
        return len(self.positives) + len(self.negatives)


@dataclass
class NerodeBound:
    bound: int
    prefixes: list
    # (i, j) -> extension e with prefixes[i] + e and prefixes[j] + e classified differently
    witnesses: dict = field(default_factory=dict)
    candidates: int = 0


@lru_cache(maxsize=8)
def _ball_levels(spec: GroupSpec, radius: int) -> tuple:
    gens = spec.generators()
    e = identity(spec)
    seen = {e}
    levels = [(e,)]
    for _ in range(radius):
        nxt = []
        for g in levels[-1]:
            for x in gens:
                h = multiply(g, generator(x, spec), spec)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        levels.append(tuple(nxt))
    return tuple(levels)


def ball_levels(spec: GroupSpec, radius: int) -> list:
    """Elements grouped by word length, breadth-first."""
    return [list(lv) for lv in _ball_levels(spec, radius)]


def _image(g: GElement, s: str, spec: GroupSpec, side: str) -> GElement:
    x = generator(s, spec)
    return multiply(x, g, spec) if side == "left" else multiply(g, x, spec)


def _components(w, D: int) -> tuple:
    """The two element encodings inside a pair word (trailing padding removed)."""
    out = []
    for lo in (0, D):
        part = [col[lo : lo + D] for col in w]
        while part and is_allpad(part[-1]):
            part.pop()
        out.append(tuple(part))
    return tuple(out)


def _sample_levels(spec: GroupSpec, s: str, radius: int, side: str, seed: int, neg_ratio: int):
    """Yield ``(positives, negatives)`` added by each ball level in turn."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if s not in spec.generators():
        raise ValueError(f"{s!r} is not a generator")
    D = 1 + spec.d
    groups = (D, D)
    gens = spec.generators()
    n_near = min(2, neg_ratio)
    flat: list = []
    image: dict = {}
    by_code: dict = {}
    pos: list = []
    idx = 0
    for lv in _ball_levels(spec, radius):
        flat.extend(lv)
        for g in lv:
            image[g] = _image(g, s, spec, side)
            by_code[encode(g)] = g
        start = len(pos)
        pos.extend(join((encode(g), encode(image[g])), groups) for g in lv)
        n_pool = len(flat)
        neg: list = []
        for g in lv:
            img = image[g]
            eg = encode(g)
            w = pos[idx]
            rng = random.Random(seed * 1_000_003 + idx)
            idx += 1
            picked: dict = {}  # insertion-ordered set of wrong pairs
            near = [multiply(img, generator(x, spec), spec) for x in gens]
            near = [h for h in near if h in image and h != img]
            rng.shuffle(near)
            for h in near[:n_near]:
                picked[join((eg, encode(h)), groups)] = None
            tries = 0
            while len(picked) < neg_ratio - 1 and tries < 6 * neg_ratio and len(w) > 1:
                tries += 1
                other = pos[rng.randrange(n_pool)]
                cut = rng.randrange(1, len(w))
                cand = w[:cut] + other[cut:]
                c1, c2 = _components(cand, D)
                g2, h2 = by_code.get(c1), by_code.get(c2)
                if g2 is not None and h2 is not None and h2 != image[g2]:
                    picked[cand] = None
            tries = 0
            while len(picked) < neg_ratio and tries < 4 * neg_ratio:
                tries += 1
                h = flat[rng.randrange(n_pool)]
                if h != img:
                    picked[join((eg, encode(h)), groups)] = None
            neg.extend(picked)
        yield pos[start:], neg


def generate_sample(
    spec: GroupSpec,
    s: str,
    radius: int,
    side: str = "left",
    seed: int = 0,
    neg_ratio: int = 10,
) -> ClassifiedSample:
    """Classified sample of the multiplication relation for ``s`` on a ball.

    Positives are ``(g, s g)`` (left) or ``(g, g s)`` (right) for every ``g``
    in the ball.  Each ``g`` gets up to ``neg_ratio`` negatives ``(g', h)``
    with ``g'`` and ``h`` in the ball of radius ``|g|`` and ``h`` not the
    image of ``g'``.  They come from three sources, in order: neighbours of
    the true image, splices of the positive word of ``g`` with the suffix
    of an earlier positive (these are what separate prefixes), and uniform
    draws.  Choices for ``g`` depend only on ``seed`` and the position of
    ``g``, so samples for growing radii are nested.
    """
    return nested_samples(spec, s, [radius], side, seed, neg_ratio)[0]


def nested_samples(
    spec: GroupSpec,
    s: str,
    radii: Sequence[int],
    side: str = "left",
    seed: int = 0,
    neg_ratio: int = 10,
) -> list:
    """``generate_sample`` for each radius, sharing one pass over the ball."""
    radii = list(radii)
    if radii != sorted(radii) or not radii or radii[0] < 0:
        raise ValueError("radii must be ascending and non-negative")
    pos: set = set()
    neg: set = set()
    out = []
    want = set(radii)
    for r, (p, n) in enumerate(_sample_levels(spec, s, radii[-1], side, seed, neg_ratio)):
        pos.update(p)
        neg.update(n)
        if r in want:
            out.append(ClassifiedSample(frozenset(pos), frozenset(neg), spec, s, r, side))
    return out


def generate_left_sample(spec: GroupSpec, s: str, radius: int, seed: int = 0) -> ClassifiedSample:
    return generate_sample(spec, s, radius, "left", seed)


def sample_from_words(positives, negatives) -> ClassifiedSample:
    norm = lambda ws: frozenset(tuple(w) for w in ws)  # noqa: E731
    return ClassifiedSample(norm(positives), norm(negatives))


class _Trie:
    def __init__(self, sample: ClassifiedSample):
        self.children: list[dict] = [{}]
        self.label: list = [None]
        for words, lab in ((sample.positives, 1), (sample.negatives, -1)):
            for w in words:
                node = 0
                for c in w:
                    nxt = self.children[node].get(c)
                    if nxt is None:
                        nxt = len(self.children)
                        self.children[node][c] = nxt
                        self.children.append({})
                        self.label.append(None)
                    node = nxt
                self.label[node] = lab
        # live[node]: some positive word passes through node
        self.live = [False] * len(self.children)
        for w in sample.positives:
            node = 0
            self.live[0] = True
            for c in w:
                node = self.children[node][c]
                self.live[node] = True

    def find(self, prefix) -> int | None:
        node = 0
        for c in prefix:
            node = self.children[node].get(c)
            if node is None:
                return None
        return node

    def breadth_first(self):
        """(node, prefix) pairs, shorter prefixes first, columns sorted."""
        frontier = [(0, ())]
        while frontier:
            nxt = []
            for node, p in frontier:
                yield node, p
                for c in sorted(self.children[node]):
                    nxt.append((self.children[node][c], p + (c,)))
            frontier = nxt

    def distinguish(self, u: int, v: int):
        """An extension classified differently after ``u`` and ``v``, or None."""
        ch, lab = self.children, self.label
        stack = [(u, v, ())]
        while stack:
            a, b, ext = stack.pop()
            la, lb = lab[a], lab[b]
            if la is not None and lb is not None and la != lb:
                return ext
            ca, cb = ch[a], ch[b]
            if len(ca) > len(cb):
                ca, cb = cb, ca
                for c, x in ca.items():
                    y = cb.get(c)
                    if y is not None:
                        stack.append((y, x, ext + (c,)))
            else:
                for c, x in ca.items():
                    y = cb.get(c)
                    if y is not None:
                        stack.append((x, y, ext + (c,)))
        return None


def nerode_lower_bound(
    sample: ClassifiedSample, max_prefixes: int = 2000, seed: NerodeBound | None = None
) -> NerodeBound:
    """Greedy pairwise-distinguished prefix set.

    ``seed`` (a bound computed on a sub-sample) is kept as the starting set,
    which makes the bound nondecreasing along nested samples.  At most
    ``max_prefixes`` prefixes are examined in breadth-first order.
    """
    if not len(sample):
        raise ValueError("empty sample")
    trie = _Trie(sample)
    chosen: list[int] = []
    prefixes: list = []
    witnesses: dict = {}
    if seed is not None:
        for p in seed.prefixes:
            node = trie.find(p)
            if node is None:
                raise ValueError("seed prefix does not occur in the sample")
            chosen.append(node)
            prefixes.append(tuple(p))
        witnesses.update(seed.witnesses)
    taken = set(chosen)

    def try_add(node, p) -> bool:
        found = {}
        for i, other in enumerate(chosen):
            e = trie.distinguish(other, node)
            if e is None:
                return False
            found[(i, len(chosen))] = e
        chosen.append(node)
        prefixes.append(p)
        taken.add(node)
        witnesses.update(found)
        return True

    # Prefixes without a positive continuation all share one residual as far
    # as the sample can tell, so at most one of them can join the set; the
    # candidates are the prefixes of positive words, plus a few of the others.
    examined = 0
    dead: list = []
    for node, p in trie.breadth_first():
        if examined >= max_prefixes:
            break
        if not trie.live[node]:
            if len(dead) < 64:
                dead.append((node, p))
            continue
        examined += 1
        if node not in taken:
            try_add(node, p)
    if not any(not trie.live[q] for q in chosen):
        for node, p in dead:
            if try_add(node, p):
                break
    return NerodeBound(len(chosen), prefixes, witnesses, examined)


def verify_witnesses(sample: ClassifiedSample, nb: NerodeBound) -> bool:
    """Every pair in the prefix set carries a valid distinguishing extension."""
    k = len(nb.prefixes)
    for i in range(k):
        for j in range(i + 1, k):
            e = nb.witnesses.get((i, j))
            if e is None:
                return False
            a = sample.label(tuple(nb.prefixes[i]) + tuple(e))
            b = sample.label(tuple(nb.prefixes[j]) + tuple(e))
            if a is None or b is None or a == b:
                return False
    return True


@dataclass
class ProbeRow:
    relation: str
    radius: int
    bound: int
    positives: int
    negatives: int
    exact: int | None = None


@dataclass
class ProbeReport:
    spec: GroupSpec
    generator: str
    rows: list = field(default_factory=list)

    def series(self, relation: str) -> list:
        return [r.bound for r in self.rows if r.relation == relation]

    def to_tsv(self) -> str:
        lines = [FRAMING, "relation\tradius\tbound\tpositives\tnegatives\texact_min_dfa"]
        for r in self.rows:
            ex = "" if r.exact is None else str(r.exact)
            lines.append(f"{r.relation}\t{r.radius}\t{r.bound}\t{r.positives}\t{r.negatives}\t{ex}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "framing": FRAMING.lstrip("# "),
                "spec": self.spec.to_dict(),
                "generator": self.generator,
                "rows": [r.__dict__ for r in self.rows],
            },
            indent=2,
        )


def probe_series(
    spec: GroupSpec,
    s: str,
    radii: Sequence[int],
    side: str = "left",
    seed: int = 0,
    max_prefixes: int = 2000,
    exact: int | None = None,
    name: str | None = None,
) -> list:
    name = name or f"{side}:{s}"
    rows = []
    prev = None
    for r, sample in zip(radii, nested_samples(spec, s, radii, side, seed)):
        nb = nerode_lower_bound(sample, max_prefixes, prev)
        prev = nb
        rows.append(ProbeRow(name, r, nb.bound, len(sample.positives), len(sample.negatives), exact))
    return rows


def probe_report(
    spec: GroupSpec,
    s: str,
    radii: Sequence[int],
    structure=None,
    seed: int = 0,
    max_prefixes: int = 2000,
    controls: bool = True,
) -> ProbeReport:
    """Bounds for left multiplication by ``s`` per radius, plus regular controls.

    Controls are right multiplication by ``s`` and left multiplication by
    ``f1``; both have automata, whose exact minimal sizes are reported.
    """
    rep = ProbeReport(spec, s)
    if controls and structure is None:
        structure = build_structure(spec, check=False)
    target_exact = None
    if structure is not None and s in structure.left:
        target_exact = structure.left[s].minimal_size()
    rep.rows += probe_series(spec, s, radii, "left", seed, max_prefixes, target_exact)
    if controls:
        for side, x in (("right", s), ("left", "f1")):
            if side == "left" and x == s:
                continue
            rel = (structure.right if side == "right" else structure.left)[x]
            rep.rows += probe_series(
                spec, x, radii, side, seed, max_prefixes, rel.minimal_size(), f"control:{side}:{x}"
            )
    return rep
