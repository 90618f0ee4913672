"""Command-line interface.

Exit codes: 0 success, 1 verification failure or mismatch, 2 bad input,
64 usage error.  Words use ``f1..fn`` and ``e1..ed``; capitals are
inverses (``F1``, ``E2``).  A bare ``f`` or ``e`` is accepted when the
rank or dimension is 1.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import freegroup as fg
from . import nerode, pipeline, serialize
from . import semidirect as sd
from .fsa import format_conv_word

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _parse_vector(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.replace("(", "").replace(")", "").split(","))
    except ValueError:
        raise InputError(f"bad vector {text!r}") from None


def _parse_radii(text: str) -> list:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            radii = list(range(int(lo), int(hi) + 1))
        else:
            radii = [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"bad radii {text!r}") from None
    if not radii or radii != sorted(radii) or radii[0] < 0:
        raise InputError("radii must be a non-empty ascending list of non-negative integers")
    return radii


def _load_spec(path) -> sd.GroupSpec:
    try:
        return sd.GroupSpec.load(path)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad group spec {path}: {exc}") from None


def _load_structure(directory) -> sd.CayleyStructure:
    d = Path(directory)
    if not (d / "manifest.json").is_file():
        raise InputError(f"{directory} does not hold an exported structure")
    try:
        return sd.load_structure(d)
    except (ValueError, KeyError) as exc:
        raise InputError(f"cannot load structure from {directory}: {exc}") from None


def _word(text: str, spec: sd.GroupSpec) -> tuple:
    try:
        return sd.parse_group_word(text, spec)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _emit(args, rows: list, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for row in rows:
            print("\t".join(str(x) for x in row))


def _element_fields(g: sd.GElement) -> dict:
    return {"free": fg.format_word(g.b), "vector": list(g.a)}


def _evaluate_with_automata(word, st: sd.CayleyStructure, args, label: str) -> int:
    spec = st.spec
    enc = sd.word_problem(word, spec, st)
    got = sd.decode(enc, spec)
    want = sd.evaluate(word, spec)
    ok = got == want
    text = format_conv_word(enc)
    _emit(
        args,
        [(label, fg.format_word(word)), ("encoding", text), ("free", fg.format_word(got.b)),
         ("vector", ",".join(map(str, got.a))), ("oracle", "match" if ok else "MISMATCH")],
        {label: fg.format_word(word), "encoding": text, **_element_fields(got),
         "oracle": _element_fields(want), "match": ok},
    )
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------- commands


def cmd_build(args) -> int:
    spec = _load_spec(args.spec)
    try:
        st = sd.build_structure(spec, check=not args.no_check)
    except sd.StructureError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    out = sd.export_structure(st, args.output)
    rows = [("relation", "factor_states")]
    rels = [("domain", st.domain)] + list(st.relations())
    for name, rel in rels:
        rows.append((name, ",".join(str(f.n_states) for f, _ in rel.factors)))
    _emit(
        args,
        rows,
        {"directory": str(out), "checked": not args.no_check,
         "relations": {n: [f.n_states for f, _ in r.factors] for n, r in rels}},
    )
    return EXIT_OK


def cmd_wp(args) -> int:
    st = _load_structure(args.dir)
    return _evaluate_with_automata(_word(args.word, st.spec), st, args, "word")


def cmd_mul(args) -> int:
    st = _load_structure(args.dir)
    word: tuple = ()
    for w in args.words:
        word += _word(w, st.spec)
    return _evaluate_with_automata(word, st, args, "product")


def cmd_inv(args) -> int:
    st = _load_structure(args.dir)
    word = sd.inverse_word(_word(args.word, st.spec))
    return _evaluate_with_automata(word, st, args, "inverse")


def cmd_verify(args) -> int:
    st = _load_structure(args.dir)
    report = sd.verify_structure(st.spec, st, args.radius)
    if args.axioms:
        for x in st.spec.generators():
            report[f"axiom:{x}"] = sd.group_axiom_check(st, x)
    ok = all(report.values())
    _emit(args, [(k, "pass" if v else "FAIL") for k, v in report.items()],
          {"radius": args.radius, "passed": ok, "checks": report})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_reduce(args) -> int:
    try:
        pres = pipeline.Presentation.load(args.presentation)
    except FileNotFoundError:
        raise InputError(f"no such file: {args.presentation}") from None
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad presentation: {exc}") from None
    try:
        w = fg.parse_word(args.word) if args.word else ()
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if any(x not in pipeline.F2_LETTERS for x in w):
        raise InputError("the word must use the letters a, b, A, B")
    art = pipeline.wp_instance_pipeline(pres, w)
    data = art.to_dict()
    if args.depth is not None:
        found = pipeline.mikhailova_membership_semidecide(art.membership_query, art.mikhailova, args.depth)
        data["membership_depth"] = args.depth
        data["membership_witness"] = None if found is None else " ".join(found)
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        for k, v in data.items():
            print(f"{k}\t{json.dumps(v)}")
    return EXIT_OK


def cmd_orbit(args) -> int:
    spec = _load_spec(args.spec)
    u, v = _parse_vector(args.u), _parse_vector(args.v)
    if len(u) != spec.d or len(v) != spec.d:
        raise InputError(f"vectors must have {spec.d} entries")
    if args.conjugator:
        res = pipeline.conjugacy_cross_check(u, v, spec, args.depth, args.bound)
        w, g = res["orbit_witness"], res["conjugator"]
        ok = res["consistent"] and (w is None or (res["orbit_verified"] and res["conjugator_verified"]))
        _emit(
            args,
            [("witness", "none" if w is None else fg.format_word(w)),
             ("conjugator", "none" if g is None else str(g)),
             ("verified", "yes" if ok else "no")],
            {"witness": None if w is None else fg.format_word(w),
             "conjugator": None if g is None else _element_fields(g), "verified": ok},
        )
        return EXIT_OK if ok else EXIT_FAIL
    w = pipeline.orbit_semidecide(u, v, spec, args.depth)
    _emit(args, [("witness", "none" if w is None else fg.format_word(w))],
          {"witness": None if w is None else fg.format_word(w), "depth": args.depth})
    return EXIT_OK


def cmd_probe(args) -> int:
    st = _load_structure(args.dir)
    if args.s not in st.spec.generators():
        raise InputError(f"unknown generator {args.s!r}")
    radii = _parse_radii(args.radii)
    rep = nerode.probe_report(st.spec, args.s, radii, st, seed=args.seed,
                              max_prefixes=args.max_prefixes, controls=not args.no_controls)
    sys.stdout.write(rep.to_json() + "\n" if args.json else rep.to_tsv())
    return EXIT_OK


def cmd_export_dot(args) -> int:
    src = Path(args.dir)
    files = sorted(src.glob("*.fsa"))
    if not files:
        raise InputError(f"no automata in {args.dir}")
    out = Path(args.output) if args.output else src
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for f in files:
        try:
            a, _ = serialize.loads(f.read_text())
        except serialize.FormatError as exc:
            raise InputError(f"{f}: {exc}") from None
        target = out / (f.stem + ".dot")
        target.write_text(serialize.to_dot(a, f.stem))
        written.append(str(target))
    _emit(args, [(p,) for p in written], {"written": written})
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="JSON output instead of tab-separated")
    p = _Parser(prog="cayley-auto", description="Cayley automatic structures for Z^d semidirect F_n.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("build", parents=[common], help="construct, verify and export a structure")
    s.add_argument("spec")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--no-check", action="store_true", help="skip the exact checks")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("wp", parents=[common], help="normal form of a word through the automata")
    s.add_argument("dir")
    s.add_argument("word")
    s.set_defaults(func=cmd_wp)

    s = sub.add_parser("mul", parents=[common], help="product of words")
    s.add_argument("dir")
    s.add_argument("words", nargs="+")
    s.set_defaults(func=cmd_mul)

    s = sub.add_parser("inv", parents=[common], help="inverse of a word")
    s.add_argument("dir")
    s.add_argument("word")
    s.set_defaults(func=cmd_inv)

    s = sub.add_parser("verify", parents=[common], help="ball and exact verification")
    s.add_argument("dir")
    s.add_argument("--radius", type=int, default=3)
    s.add_argument("--axioms", action="store_true", help="also check compose(E_s, E_s^-1) = identity")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("reduce", parents=[common], help="word-problem reduction artifacts")
    s.add_argument("presentation")
    s.add_argument("-w", "--word", default="")
    s.add_argument("--depth", type=int, default=None, help="also search a membership witness")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("orbit", parents=[common], help="bounded orbit search")
    s.add_argument("spec")
    s.add_argument("-u", required=True)
    s.add_argument("-v", required=True)
    s.add_argument("--depth", type=int, default=4)
    s.add_argument("--conjugator", action="store_true", help="also search a conjugator and cross-check")
    s.add_argument("--bound", type=int, default=1, help="translation box for the conjugator search")
    s.set_defaults(func=cmd_orbit)

    s = sub.add_parser("probe", parents=[common], help="Myhill-Nerode lower bounds")
    s.add_argument("dir")
    s.add_argument("-s", required=True, help="generator letter")
    s.add_argument("--radii", default="1..3")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-prefixes", type=int, default=2000)
    s.add_argument("--no-controls", action="store_true")
    s.set_defaults(func=cmd_probe)

    s = sub.add_parser("export-dot", parents=[common], help="write Graphviz files")
    s.add_argument("dir")
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_export_dot)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    for name in ("radius", "depth"):
        val = getattr(args, name, None)
        if val is not None and val < 0:
            print(f"--{name} must be non-negative", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
