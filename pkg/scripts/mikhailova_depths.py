"""Shortest membership witnesses for words trivial in Z^2.

For every reduced w over a, b with |w| <= max-len and both exponent sums
zero, find the shortest word over the Mikhailova generators of
<a, b | abAB> equal to (1, w), and print the histogram of witness lengths.

    python3 scripts/mikhailova_depths.py --max-len 8 --depth 16
"""

from __future__ import annotations

import argparse
import collections
import sys

from cayley_auto import freegroup as fg
from cayley_auto import pipeline as pl


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-len", type=int, default=8)
    p.add_argument("--depth", type=int, default=16)
    a = p.parse_args(argv)
    gens = pl.mikhailova_generators(pl.z2_presentation())
    words = [w for w in pl.f2_words(a.max_len) if w.count("a") == w.count("A") and w.count("b") == w.count("B")]
    hist: collections.Counter = collections.Counter()
    deepest = []
    for w in words:
        wit = pl.mikhailova_membership_semidecide(((), w), gens, a.depth)
        k = None if wit is None else len(wit)
        hist[k] += 1
        if wit is not None and pl.evaluate_gens(wit, gens) != ((), w):
            print(f"unsound witness for {fg.format_word(w)}", file=sys.stderr)
            return 1
        deepest.append((k if k is not None else a.depth + 1, fg.format_word(w)))
    print(f"{len(words)} words; witness length histogram (None = not found at depth {a.depth}):")
    for k in sorted(hist, key=lambda x: (x is None, x)):
        print(f"  {k}\t{hist[k]}")
    deepest.sort(reverse=True)
    print("deepest:", ", ".join(f"{w} ({k})" for k, w in deepest[:5]))
    return 0


if __name__ == "__main__":
    sys.exit(main())
