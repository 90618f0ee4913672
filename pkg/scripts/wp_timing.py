"""Word-problem timing through the automata: t(n) and t(2n)/t(n).

    python3 scripts/wp_timing.py --spec sanov --words 24
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import dataclass

from cayley_auto import semidirect as sd
from cayley_auto.pipeline import injectivized_reference_spec

SPECS = {"unipotent": sd.unipotent_spec, "sanov": sd.sanov_spec, "injectivized": injectivized_reference_spec}


@dataclass
class TimingConfig:
    spec: str = "sanov"
    words: int = 24
    sizes: tuple = (100, 200, 400, 800)
    seed: int = 0


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--spec", choices=sorted(SPECS), default="sanov")
    p.add_argument("--words", type=int, default=24)
    p.add_argument("--sizes", default="100,200,400,800")
    p.add_argument("--seed", type=int, default=0)
    a = p.parse_args(argv)
    cfg = TimingConfig(a.spec, a.words, tuple(int(x) for x in a.sizes.split(",")), a.seed)

    spec = SPECS[cfg.spec]()
    st = sd.build_structure(spec, check=False)
    rng = random.Random(cfg.seed)
    words = [sd.random_word(spec, max(cfg.sizes), rng) for _ in range(cfg.words)]
    print("n\tseconds\tcolumns\tratio_time\tratio_columns")
    prev = None
    for n in cfg.sizes:
        secs, cols = 0.0, 0
        for w in words:
            t0 = time.perf_counter()
            sd.word_problem(w[:n], spec, st)
            secs += time.perf_counter() - t0
            g = sd.identity(spec)
            for x in w[:n]:
                cols += len(sd.encode(g))
                g = sd.right_act(g, x, spec)
        rt = "" if prev is None else f"{secs / prev[0]:.2f}"
        rc = "" if prev is None else f"{cols / prev[1]:.2f}"
        print(f"{n}\t{secs:.3f}\t{cols}\t{rt}\t{rc}", flush=True)
        prev = (secs, cols)
    return 0


if __name__ == "__main__":
    sys.exit(main())
