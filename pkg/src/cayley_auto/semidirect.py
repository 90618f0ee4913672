"""Cayley automatic structure of G = Z^d ⋊_τ F_n.

Elements are pairs ``(b, a)`` with ``b`` a reduced word in ``f1..fn`` and
``a`` an integer vector; the product is

    (b1, a1)(b2, a2) = (b1 b2, a1 τ(b2) + a2)

with τ(f_i) = M_i acting on row vectors from the right.  An element is
encoded as the convolution of ``b`` with the encodings of the entries of
``a`` (1 + d tracks).  The generating set is {f_i^±1} ∪ {e_j^±1}.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Sequence

from . import freegroup as fg
from . import matrices as mx
from . import serialize
from .fsa import ConvAlphabet, ValidityError, check_conv_word, deconvolve, convolve, unique_member
from .relations import (
    CoupledRelation,
    coupled_compose,
    coupled_equivalent,
    is_functional,
    is_total,
    verify_validity,
)
from .zd import BITS, affine_relation, canonical_int_language, canonical_language, coordinate_blocks, dec_int, enc_int


class StructureError(RuntimeError):
    """An exact check on a constructed relation failed."""


@dataclass(frozen=True)
class GroupSpec:
    d: int
    n: int
    matrices: tuple

    def __post_init__(self):
        mats = tuple(mx.as_matrix(m) for m in self.matrices)
        object.__setattr__(self, "matrices", mats)
        if self.d < 1 or self.n < 1:
            raise ValueError("need d >= 1 and n >= 1")
        if len(mats) != self.n:
            raise ValueError(f"expected {self.n} matrices, got {len(mats)}")
        for i, m in enumerate(mats):
            if len(m) != self.d:
                raise ValueError(f"matrix {i + 1} is not {self.d}x{self.d}")
            if mx.det(m) not in (1, -1):
                raise ValueError(f"matrix {i + 1} is not unimodular (det {mx.det(m)})")
        object.__setattr__(self, "_inverses", tuple(mx.inverse(m) for m in mats))

    @classmethod
    def from_dict(cls, data: dict) -> "GroupSpec":
        return cls(int(data["d"]), int(data["n"]), tuple(data["matrices"]))

    @classmethod
    def load(cls, path) -> "GroupSpec":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        return {"d": self.d, "n": self.n, "matrices": [[list(r) for r in m] for m in self.matrices]}

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    # generator letters
    def free_letters(self) -> tuple:
        return fg.letters(self.n)

    def translation_letters(self) -> tuple:
        out = []
        for j in range(1, self.d + 1):
            out += [f"e{j}", f"E{j}"]
        return tuple(out)

    def generators(self) -> tuple:
        return self.free_letters() + self.translation_letters()

    def letter_matrix(self, x: str):
        i = int(x[1:]) - 1
        return self.matrices[i] if x[0] == "f" else self._inverses[i]


@dataclass(frozen=True)
class GElement:
    b: tuple = ()
    a: tuple = ()

    def __str__(self):
        return f"({fg.format_word(self.b)}, ({', '.join(map(str, self.a))}))"


def identity(spec: GroupSpec) -> GElement:
    return GElement((), (0,) * spec.d)


def tau_of(b: Sequence[str], spec: GroupSpec):
    m = mx.identity(spec.d)
    for x in b:
        m = mx.mat_mul(m, spec.letter_matrix(x))
    return m


def multiply(g1: GElement, g2: GElement, spec: GroupSpec) -> GElement:
    if len(g1.a) != spec.d or len(g2.a) != spec.d:
        raise ValueError("dimension mismatch")
    return GElement(fg.mul(g1.b, g2.b), mx.vec_add(mx.vec_mat(g1.a, tau_of(g2.b, spec)), g2.a))


def inverse(g: GElement, spec: GroupSpec) -> GElement:
    binv = fg.inverse(g.b)
    return GElement(binv, mx.vec_neg(mx.vec_mat(g.a, tau_of(binv, spec))))


def generator(x: str, spec: GroupSpec) -> GElement:
    if x[0] in "fF":
        i = int(x[1:])
        if not 1 <= i <= spec.n:
            raise ValueError(f"unknown generator {x!r}")
        return GElement((x,), (0,) * spec.d)
    if x[0] in "eE":
        j = int(x[1:])
        if not 1 <= j <= spec.d:
            raise ValueError(f"unknown generator {x!r}")
        v = [0] * spec.d
        v[j - 1] = 1 if x[0] == "e" else -1
        return GElement((), tuple(v))
    raise ValueError(f"unknown generator {x!r}")


def right_act(g: GElement, x: str, spec: GroupSpec) -> GElement:
    """``g · x`` for a single generator letter (fast path of :func:`multiply`)."""
    if x[0] in "fF":
        return GElement(fg.mul(g.b, (x,)), mx.vec_mat(g.a, spec.letter_matrix(x)))
    j = int(x[1:]) - 1
    a = list(g.a)
    a[j] += 1 if x[0] == "e" else -1
    return GElement(g.b, tuple(a))


def evaluate(word: Sequence[str], spec: GroupSpec) -> GElement:
    g = identity(spec)
    for x in word:
        g = right_act(g, x, spec)
    return g


_GEN = re.compile(r"[fFeE]\d*")


def parse_group_word(text: str, spec: GroupSpec) -> tuple:
    """``"f e1 F E1"`` / ``"f1e1F1E1"`` -> letters; a bare ``f``/``e`` means index 1
    when the rank/dimension is 1."""
    text = text.strip()
    if text in ("", "1"):
        return ()
    toks = _GEN.findall(text)
    if "".join(toks) != re.sub(r"\s+", "", text):
        raise ValueError(f"cannot parse {text!r}")
    out = []
    for t in toks:
        if len(t) == 1:
            bound = spec.n if t in "fF" else spec.d
            if bound != 1:
                raise ValueError(f"letter {t!r} needs an index")
            t = t + "1"
        if t not in spec.generators():
            raise ValueError(f"unknown generator {t!r}")
        out.append(t)
    return tuple(out)


def inverse_word(word: Sequence[str]) -> tuple:
    return tuple(x.swapcase() for x in reversed(word))


# ---------------------------------------------------------------- encoding


def element_alphabet(spec: GroupSpec) -> ConvAlphabet:
    return ConvAlphabet((fg.letter_alphabet(spec.n),) + (BITS,) * spec.d)


def encode(g: GElement):
    return convolve([g.b] + [enc_int(x) for x in g.a])


def decode(w, spec: GroupSpec) -> GElement:
    w = tuple(tuple(c) for c in w)
    tracks = deconvolve(w, 1 + spec.d)
    b = tracks[0]
    letts = set(spec.free_letters())
    if any(x not in letts for x in b):
        raise ValidityError(f"bad free letter in {b}")
    if not fg.is_reduced(b):
        raise ValidityError(f"free word {b} is not reduced")
    return GElement(tuple(b), tuple(dec_int(t) for t in tracks[1:]))


# ---------------------------------------------------------------- structure


@dataclass
class CayleyStructure:
    spec: GroupSpec
    domain: CoupledRelation
    right: dict = field(default_factory=dict)
    left: dict = field(default_factory=dict)

    def relations(self):
        for s, r in self.right.items():
            yield f"right:{s}", r
        for s, r in self.left.items():
            yield f"left:{s}", r


@lru_cache(maxsize=None)
def _affine(M: tuple, t: tuple):
    return affine_relation(M, t)


def _domain(spec: GroupSpec) -> CoupledRelation:
    factors = [(fg.reduced_language(spec.n), (0,))]
    factors += [(canonical_int_language(), (j,)) for j in range(1, spec.d + 1)]
    return CoupledRelation(element_alphabet(spec), (1 + spec.d,), factors)


def _coupled(spec: GroupSpec, free_rel, affine_parts) -> CoupledRelation:
    """Couple a free-group relation on track 0 with affine maps on coordinate blocks."""
    D = 1 + spec.d
    alpha = element_alphabet(spec)
    factors = [(free_rel.fsa, (0, D))]
    for block, rel in affine_parts:
        tr = tuple(1 + j for j in block) + tuple(D + 1 + j for j in block)
        factors.append((rel.fsa, tr))
    return CoupledRelation(alpha + alpha, (D, D), factors)


def _affine_parts(M, t):
    parts = []
    for block in coordinate_blocks(M):
        sub = mx.submatrix(M, block, block)
        parts.append((block, _affine(sub, tuple(t[j] for j in block))))
    return parts


def factor_domains(spec: GroupSpec, rel: CoupledRelation, fi: int):
    """Domain automaton for the input tracks of factor ``fi``."""
    _, tr = rel.factors[fi]
    D = rel.groups[0]
    ins = sorted({t % D for t in tr})
    if ins == [0]:
        return fg.reduced_language(spec.n)
    if 0 in ins:
        raise ValueError("factor mixes free and integer tracks")
    return canonical_language(len(ins))


def exact_checks(spec: GroupSpec, rel: CoupledRelation) -> dict:
    """Validity, functionality and totality of every factor (exact)."""
    out = {"validity": True, "functional": True, "total": True}
    for fi in range(len(rel.factors)):
        r = rel.factor_relation(fi)
        out["validity"] &= verify_validity(r)
        out["functional"] &= is_functional(r)
        out["total"] &= is_total(r, factor_domains(spec, rel, fi))
    return out


def build_structure(spec: GroupSpec, check: bool = True) -> CayleyStructure:
    n, d = spec.n, spec.d
    st = CayleyStructure(spec, _domain(spec))
    zero = (0,) * d
    for i in range(1, n + 1):
        s = f"f{i}"
        M = spec.matrices[i - 1]
        rel = _coupled(spec, fg.right_mult_relation(s, n), _affine_parts(M, zero))
        st.right[s] = rel
        st.right[s.upper()] = rel.converse()
    free_id = fg.identity(n)
    for j in range(1, d + 1):
        t = tuple(int(c == j - 1) for c in range(d))
        rel = _coupled(spec, free_id, _affine_parts(mx.identity(d), t))
        st.right[f"e{j}"] = rel
        st.right[f"E{j}"] = rel.converse()
    id_parts = _affine_parts(mx.identity(d), zero)
    for x in spec.free_letters():
        st.left[x] = _coupled(spec, fg.left_mult_relation(x, n), id_parts)
    if check:
        for name, rel in st.relations():
            res = exact_checks(spec, rel)
            bad = [k for k, v in res.items() if not v]
            if bad:
                raise StructureError(f"relation {name} fails exact checks: {', '.join(bad)}")
    return st


def step(structure: CayleyStructure, w, x: str, side: str = "right"):
    rel = (structure.right if side == "right" else structure.left)[x]
    return unique_member(rel.restrict_first(w))


def word_problem(word: Sequence[str], spec: GroupSpec, structure: CayleyStructure):
    cur = encode(identity(spec))
    for x in word:
        cur = step(structure, cur, x)
    return cur


def is_identity(word, spec, structure) -> bool:
    return word_problem(word, spec, structure) == encode(identity(spec))


def equal(w1, w2, spec, structure) -> bool:
    return is_identity(tuple(w1) + inverse_word(w2), spec, structure)


# ---------------------------------------------------------------- verification


def ball(spec: GroupSpec, radius: int) -> list:
    """Elements at word distance <= radius, in breadth-first order."""
    gens = spec.generators()
    seen = {identity(spec)}
    out = [identity(spec)]
    frontier = [identity(spec)]
    for _ in range(radius):
        nxt = []
        for g in frontier:
            for x in gens:
                h = right_act(g, x, spec)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    out.append(h)
        frontier = nxt
    return out


def encoding_length_count(spec: GroupSpec, length: int) -> int:
    """Number of elements whose encoding has exactly ``length`` columns (closed form)."""

    def upto(m):
        if m < 0:
            return 0
        free = sum(fg.sphere_size(spec.n, k) for k in range(m + 1))
        ints = (1 << m) if m >= 1 else 0
        return free * ints**spec.d

    return upto(length) - upto(length - 1)


def domain_count(dom: CoupledRelation, length: int) -> int:
    """Accepted words of exactly ``length`` columns, from the factor automata."""

    def upto(m):
        prod = 1
        for fsa, _ in dom.factors:
            prod *= sum(fsa.count_words(k) for k in range(m + 1))
        return prod

    return upto(length) - (upto(length - 1) if length > 0 else 0)


def _mutations(w, spec):
    """Invalid near-misses of a valid encoding."""
    out = []
    # redundant sign digit on the first integer track
    tr = deconvolve(tuple(tuple(c) for c in w), 1 + spec.d)
    ints = list(tr[1:])
    ints[0] = ints[0] + (ints[0][-1],)
    out.append(convolve([tr[0]] + ints))
    # free track gets a cancelling pair appended
    x = spec.free_letters()[0]
    out.append(convolve([tr[0] + (x, x.swapcase())] + list(tr[1:])))
    return out


def verify_structure(spec: GroupSpec, structure: CayleyStructure, radius: int) -> dict:
    """Ball-based and exact verification; returns ``{check: bool}``."""
    report: dict = {}
    B = ball(spec, radius)
    encs = [encode(g) for g in B]
    report["encode_injective"] = len(set(encs)) == len(encs) and all(
        decode(w, spec) == g for w, g in zip(encs, B)
    )
    dom = structure.domain
    L = max(len(w) for w in encs)
    report["domain_accepts_ball"] = all(dom.accepts_conv(w) for w in encs)
    report["domain_rejects_mutations"] = not any(
        dom.accepts_conv(m) for w in encs[:200] for m in _mutations(w, spec)
    )
    report["domain_counts"] = all(
        domain_count(dom, m) == encoding_length_count(spec, m) for m in range(L + 1)
    )
    for name, rel in structure.relations():
        side, x = name.split(":")
        ok = True
        for g, w in zip(B, encs):
            h = multiply(g, generator(x, spec), spec) if side == "right" else multiply(
                generator(x, spec), g, spec
            )
            try:
                got = unique_member(rel.restrict_first(w))
            except LookupError:
                ok = False
                break
            if got != encode(h):
                ok = False
                break
        report[f"oracle:{name}"] = ok
        ex = exact_checks(spec, rel)
        for k, v in ex.items():
            report[f"{k}:{name}"] = v
    return report


def group_axiom_check(structure: CayleyStructure, x: str) -> bool:
    """compose(E_x, E_x^-1) equals the identity relation on the domain (exact)."""
    spec = structure.spec
    rel = coupled_compose(structure.right[x], structure.right[x.swapcase()])
    ident = _coupled(spec, fg.identity(spec.n), _affine_parts(mx.identity(spec.d), (0,) * spec.d))
    return coupled_equivalent(rel, ident)


# ---------------------------------------------------------------- export / import


def export_structure(structure: CayleyStructure, directory) -> Path:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    structure.spec.dump(out / "spec.json")
    manifest: dict = {"format": "cayley-auto structure v1", "relations": {}}
    written: dict = {}

    def put(fsa, groups_hint):
        text = serialize.dumps(fsa, groups_hint)
        name = written.get(text)
        if name is None:
            name = f"a{len(written):03d}.fsa"
            (out / name).write_text(text)
            written[text] = name
        return name

    entries = [("domain", structure.domain)] + list(structure.relations())
    for name, rel in entries:
        facs = []
        for fsa, tr in rel.factors:
            facs.append({"file": put(fsa, None), "tracks": list(tr)})
        manifest["relations"][name] = {"groups": list(rel.groups), "factors": facs}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return out


def load_structure(directory) -> CayleyStructure:
    src = Path(directory)
    spec = GroupSpec.load(src / "spec.json")
    manifest = json.loads((src / "manifest.json").read_text())
    cache: dict = {}
    alpha = element_alphabet(spec)

    def get(name):
        if name not in cache:
            cache[name] = serialize.loads((src / name).read_text())[0]
        return cache[name]

    rels = {}
    for name, ent in manifest["relations"].items():
        groups = tuple(ent["groups"])
        full = alpha if len(groups) == 1 else alpha + alpha
        factors = [(get(f["file"]), tuple(f["tracks"])) for f in ent["factors"]]
        rels[name] = CoupledRelation(full, groups, factors)
    st = CayleyStructure(spec, rels.pop("domain"))
    for name, rel in rels.items():
        side, x = name.split(":")
        (st.right if side == "right" else st.left)[x] = rel
    return st


# ---------------------------------------------------------------- reference specs


def unipotent_spec() -> GroupSpec:
    return GroupSpec(2, 1, (((1, 1), (0, 1)),))


def sanov_spec() -> GroupSpec:
    return GroupSpec(2, 2, (((1, 2), (0, 1)), ((1, 0), (2, 1))))


def random_word(spec: GroupSpec, length: int, rng: random.Random) -> tuple:
    gens = spec.generators()
    return tuple(rng.choice(gens) for _ in range(length))
