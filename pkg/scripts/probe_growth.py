"""Myhill-Nerode growth report for left multiplication, with regular controls.

    python3 scripts/probe_growth.py --spec unipotent --generator e1 --radii 1..6
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from cayley_auto import nerode
from cayley_auto.pipeline import injectivized_reference_spec
from cayley_auto.semidirect import build_structure, sanov_spec, unipotent_spec

SPECS = {"unipotent": unipotent_spec, "sanov": sanov_spec, "injectivized": injectivized_reference_spec}


@dataclass
class ProbeConfig:
    spec: str = "unipotent"
    generator: str = "e1"
    radii: tuple = (1, 2, 3, 4, 5)
    seed: int = 0
    max_prefixes: int = 2000
    json: bool = False


def parse_args(argv=None) -> ProbeConfig:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--spec", choices=sorted(SPECS), default="unipotent")
    p.add_argument("--generator", default="e1")
    p.add_argument("--radii", default="1..5", help="lo..hi or a comma list")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-prefixes", type=int, default=2000)
    p.add_argument("--json", action="store_true")
    a = p.parse_args(argv)
    if ".." in a.radii:
        lo, hi = a.radii.split("..")
        radii = tuple(range(int(lo), int(hi) + 1))
    else:
        radii = tuple(int(x) for x in a.radii.split(","))
    return ProbeConfig(a.spec, a.generator, radii, a.seed, a.max_prefixes, a.json)


def main(argv=None) -> int:
    cfg = parse_args(argv)
    spec = SPECS[cfg.spec]()
    st = build_structure(spec, check=False)
    rep = nerode.probe_report(spec, cfg.generator, cfg.radii, st, cfg.seed, cfg.max_prefixes)
    sys.stdout.write(rep.to_json() + "\n" if cfg.json else rep.to_tsv())
    return 0


if __name__ == "__main__":
    sys.exit(main())
