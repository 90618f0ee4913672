"""From word-problem instances to orbit and conjugacy instances.

Mikhailova subgroups of F2 × F2, a matrix embedding of F2 × F2 into
GL_4(Z), the block-diagonal trick that makes τ injective, and sound
semi-decision searches for membership, orbits and conjugacy.  Nothing
here claims a negative answer: every search either returns a witness that
re-verifies by exact arithmetic, or ``None`` for "not found at this depth".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Sequence

from . import freegroup as fg
from . import matrices as mx
from .semidirect import GElement, GroupSpec, identity, inverse, multiply, tau_of

SANOV_A = ((1, 2), (0, 1))
SANOV_B = ((1, 0), (2, 1))

F2_LETTERS = ("a", "A", "b", "B")


@dataclass(frozen=True)
class Presentation:
    relators: tuple

    def __post_init__(self):
        rels = tuple(tuple(r) for r in self.relators)
        for r in rels:
            if not r:
                raise ValueError("empty relator")
            if any(x not in F2_LETTERS for x in r):
                raise ValueError(f"relator {fg.format_word(r)} uses letters outside a, b")
            if not fg.is_reduced(r):
                raise ValueError(f"relator {fg.format_word(r)} is not reduced")
        object.__setattr__(self, "relators", rels)

    @classmethod
    def from_dict(cls, data: dict) -> "Presentation":
        gens = data.get("generators", ["a", "b"])
        if list(gens) != ["a", "b"]:
            raise ValueError("presentations must use the generators a, b")
        return cls(tuple(fg.parse_word(r) for r in data.get("relators", [])))

    @classmethod
    def load(cls, path) -> "Presentation":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        return {"generators": ["a", "b"], "relators": [fg.format_word(r) for r in self.relators]}


def z2_presentation() -> Presentation:
    return Presentation((fg.parse_word("abAB"),))


def free_presentation() -> Presentation:
    return Presentation(())


# ---------------------------------------------------------------- Mikhailova


Pair = tuple  # (word, word) in F2 x F2


def mikhailova_generators(p: Presentation) -> tuple:
    a, b = ("a",), ("b",)
    return ((a, a), (b, b)) + tuple(((), r) for r in p.relators)


def pair_mul(x: Pair, y: Pair) -> Pair:
    return (fg.mul(x[0], y[0]), fg.mul(x[1], y[1]))


def pair_inv(x: Pair) -> Pair:
    return (fg.inverse(x[0]), fg.inverse(x[1]))


def gen_letters(m: int) -> tuple:
    """Letters x1, X1, x2, X2, ... naming the generators and their inverses."""
    return fg.letters(m, "x")


def evaluate_gens(word: Sequence[str], gens: Sequence[Pair]) -> Pair:
    out: Pair = ((), ())
    for t in word:
        g = gens[int(t[1:]) - 1]
        out = pair_mul(out, g if t[0] == "x" else pair_inv(g))
    return out


@lru_cache(maxsize=8)
def _levels(gens: tuple, k: int) -> tuple:
    """Per length j: (element -> first reduced word of length j, those words sorted)."""
    letts = gen_letters(len(gens))
    values = {t: gens[int(t[1:]) - 1] if t[0] == "x" else pair_inv(gens[int(t[1:]) - 1]) for t in letts}
    levels = [{((), ()): ()}]
    frontier = [((), ((), ()))]
    for _ in range(k):
        table: dict = {}
        nxt = []
        for w, el in frontier:
            for t in letts:
                if w and w[-1] == fg.inv_letter(t):
                    continue
                w2 = w + (t,)
                e2 = pair_mul(el, values[t])
                nxt.append((w2, e2))
                table.setdefault(e2, w2)
        levels.append(table)
        frontier = nxt
    return tuple((t, sorted((w, el) for el, w in t.items())) for t in levels)


def mikhailova_membership_semidecide(x: Pair, gens: Sequence[Pair], depth: int):
    """Shortest word over the generators evaluating to ``x``, if one has length <= depth.

    Meet in the middle: a witness of length l splits as a left half of
    length ceil(l/2) and a right half of length floor(l/2); the right half
    is looked up by the element it must equal.  Among shortest witnesses
    the one with the lexicographically first left half is returned.
    """
    if depth < 0:
        raise ValueError("depth >= 0")
    x = (fg.reduce(x[0]), fg.reduce(x[1]))
    gens = tuple(gens)
    half = (depth + 1) // 2
    levels = _levels(gens, half)
    for length in range(depth + 1):
        lk, rk = (length + 1) // 2, length // 2
        right = levels[rk][0]
        for w, el in levels[lk][1]:
            need = pair_mul(pair_inv(el), x)
            r = right.get(need)
            if r is None:
                continue
            cand = w + r
            if fg.is_reduced(cand):
                return cand
    return None


# ---------------------------------------------------------------- embeddings


@dataclass(frozen=True)
class EmbeddingSpec:
    a: tuple = SANOV_A
    b: tuple = SANOV_B

    def __post_init__(self):
        for m in (self.a, self.b):
            if mx.det(mx.as_matrix(m)) not in (1, -1):
                raise ValueError("embedding matrices must be unimodular")

    def image(self, word: Sequence[str]):
        out = mx.identity(len(self.a))
        mats = {"a": self.a, "b": self.b, "A": mx.inverse(self.a), "B": mx.inverse(self.b)}
        for x in word:
            out = mx.mat_mul(out, mats[x])
        return out


def freeness_check(e: EmbeddingSpec, max_len: int = 8) -> bool:
    """Distinct reduced words of length <= max_len have distinct images."""
    seen = set()
    for w in f2_words(max_len):
        m = e.image(w)
        if m in seen:
            return False
        seen.add(m)
    return True


def f2_words(max_len: int):
    """Reduced words over a, b of length <= max_len, by length."""
    level = [()]
    for _ in range(max_len + 1):
        yield from level
        level = [w + (x,) for w in level for x in F2_LETTERS if not w or w[-1] != fg.inv_letter(x)]


def embed_pair(x: Pair, e: EmbeddingSpec | None = None):
    e = e or EmbeddingSpec()
    return mx.block_diag(e.image(x[0]), e.image(x[1]))


def aux_free_family(n: int):
    """``g'_i = S_a^i S_b S_a^{-i}``, a free family of rank n in GL_2(Z)."""
    out = []
    for i in range(1, n + 1):
        p = mx.mat_pow(SANOV_A, i)
        out.append(mx.mat_mul(mx.mat_mul(p, SANOV_B), mx.mat_pow(SANOV_A, -i)))
    return tuple(out)


@dataclass(frozen=True)
class InjectivizedTau:
    base: tuple
    aux: tuple
    assembled: tuple

    def spec(self) -> GroupSpec:
        return GroupSpec(len(self.assembled[0]), len(self.assembled), self.assembled)


def injectivize(base: Sequence, n: int | None = None, aux: Sequence | None = None) -> InjectivizedTau:
    base = tuple(mx.as_matrix(m) for m in base)
    n = len(base) if n is None else n
    if len(base) != n:
        raise ValueError(f"expected {n} base matrices, got {len(base)}")
    d = len(base[0])
    if any(len(m) != d for m in base):
        raise ValueError("base matrices have different sizes")
    aux = aux_free_family(n) if aux is None else tuple(mx.as_matrix(m) for m in aux)
    if len(aux) != n or any(len(m) != 2 for m in aux):
        raise ValueError("need n auxiliary 2x2 matrices")
    assembled = tuple(mx.block_diag(g, h) for g, h in zip(base, aux))
    return InjectivizedTau(base, aux, assembled)


def blocks_of(m, d: int):
    """Split a (d+2)x(d+2) matrix into (top-left, top-right, bottom-left, bottom-right)."""
    D = len(m)
    return (
        mx.submatrix(m, range(d), range(d)),
        mx.submatrix(m, range(d), range(d, D)),
        mx.submatrix(m, range(d, D), range(d)),
        mx.submatrix(m, range(d, D), range(d, D)),
    )


def injective_on_ball(spec: GroupSpec, max_len: int) -> bool:
    seen = set()
    for w in fg.reduced_words(spec.n, max_len):
        m = tau_of(w, spec)
        if m in seen:
            return False
        seen.add(m)
    return True


# ---------------------------------------------------------------- orbits and conjugacy


def orbit_semidecide(u, v, spec: GroupSpec, depth: int):
    """Shortest (then lexicographically first) reduced b with u τ(b) = v, or None."""
    u, v = tuple(u), tuple(v)
    if len(u) != spec.d or len(v) != spec.d:
        raise ValueError("dimension mismatch")
    if u == v:
        return ()
    letts = spec.free_letters()
    seen = {u}
    level = [((), u)]
    for _ in range(depth):
        nxt = []
        for w, x in level:
            for t in letts:
                if w and w[-1] == fg.inv_letter(t):
                    continue
                y = mx.vec_mat(x, spec.letter_matrix(t))
                if y in seen:
                    continue
                w2 = w + (t,)
                if y == v:
                    return w2
                seen.add(y)
                nxt.append((w2, y))
        level = nxt
    return None


def conjugate_by(x: GElement, g: GElement, spec: GroupSpec) -> GElement:
    """``g^-1 x g``."""
    return multiply(multiply(inverse(g, spec), x, spec), g, spec)


def _box(d: int, bound: int):
    pts = [()]
    for _ in range(d):
        pts = [p + (c,) for p in pts for c in range(-bound, bound + 1)]
    return sorted(pts, key=lambda p: (max(map(abs, p), default=0), p))


def conjugator_search(u, v, spec: GroupSpec, depth: int, bound: int = 1):
    """Brute force over (b, a), |b| <= depth, ‖a‖∞ <= bound, testing g^-1 (1,u) g = (1,v)."""
    xu = GElement((), tuple(u))
    xv = GElement((), tuple(v))
    words = list(fg.reduced_words(spec.n, depth))
    for a in _box(spec.d, bound):
        for b in words:
            g = GElement(b, a)
            if conjugate_by(xu, g, spec) == xv:
                return g
    return None


def conjugacy_cross_check(u, v, spec: GroupSpec, depth: int, bound: int = 1) -> dict:
    w = orbit_semidecide(u, v, spec, depth)
    g = conjugator_search(u, v, spec, depth, bound)
    orbit_ok = w is not None and mx.vec_mat(tuple(u), tau_of(w, spec)) == tuple(v)
    conj_ok = g is not None and conjugate_by(GElement((), tuple(u)), g, spec) == GElement((), tuple(v))
    return {
        "orbit_witness": w,
        "conjugator": g,
        "orbit_verified": orbit_ok,
        "conjugator_verified": conj_ok,
        "consistent": (w is None) == (g is None),
    }


# ---------------------------------------------------------------- pipeline


InstanceMap = Callable[["ReductionArtifacts"], tuple]


@dataclass
class ReductionArtifacts:
    presentation: Presentation
    word: tuple
    mikhailova: tuple
    embeddings: tuple
    tau: InjectivizedTau
    spec: GroupSpec
    membership_query: Pair
    orbit_instance: tuple | None = None
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        mat = lambda m: [list(r) for r in m]  # noqa: E731
        return {
            "presentation": self.presentation.to_dict(),
            "word": fg.format_word(self.word),
            "mikhailova_generators": [[fg.format_word(x), fg.format_word(y)] for x, y in self.mikhailova],
            "embeddings_gl4": [mat(m) for m in self.embeddings],
            "aux_gl2": [mat(m) for m in self.tau.aux],
            "group_spec": self.spec.to_dict(),
            "membership_query": [fg.format_word(self.membership_query[0]), fg.format_word(self.membership_query[1])],
            "orbit_instance": None
            if self.orbit_instance is None
            else [list(self.orbit_instance[0]), list(self.orbit_instance[1])],
            "notes": list(self.notes),
        }


def wp_instance_pipeline(
    p: Presentation,
    w: Sequence[str] = (),
    embedding: EmbeddingSpec | None = None,
    instance_map: InstanceMap | None = None,
) -> ReductionArtifacts:
    """Mikhailova generators -> GL_4 images -> injective GL_6 τ, plus the query (1, w).

    No vector map from ``w`` to an orbit instance is built in; pass
    ``instance_map`` to supply one.
    """
    e = embedding or EmbeddingSpec()
    gens = mikhailova_generators(p)
    embs = tuple(embed_pair(g, e) for g in gens)
    tau = injectivize(embs, len(embs))
    art = ReductionArtifacts(
        presentation=p,
        word=fg.reduce(w),
        mikhailova=gens,
        embeddings=embs,
        tau=tau,
        spec=tau.spec(),
        membership_query=((), fg.reduce(w)),
    )
    if instance_map is not None:
        art.orbit_instance = tuple(tuple(x) for x in instance_map(art))
    else:
        art.notes.append("orbit instance map not supplied")
    return art


def injectivized_reference_spec() -> GroupSpec:
    """d = 6, n = 2: the pipeline applied to the relator-free presentation of F2."""
    return wp_instance_pipeline(free_presentation()).spec
