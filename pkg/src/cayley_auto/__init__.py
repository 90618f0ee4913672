"""Cayley automatic structures for semidirect products Z^d ⋊ F_n.

Modules:

- ``fsa``: finite automata over plain and convolution alphabets.
- ``relations``: synchronous relations, composition, exact checks.
- ``zd``: two's complement codec and affine maps on Z^d as relations.
- ``freegroup``: reduced words and multiplication automata of F_n.
- ``semidirect``: the group, its encoding and automatic structure.
- ``pipeline``: word problem to orbit and conjugacy instances.
- ``nerode``: sample-based lower bounds on automaton size.
"""

from .fsa import PAD, Alphabet, ConvAlphabet, Fsa, convolve, deconvolve, format_conv_word
from .semidirect import (
    CayleyStructure,
    GElement,
    GroupSpec,
    build_structure,
    decode,
    encode,
    evaluate,
    multiply,
    sanov_spec,
    unipotent_spec,
    verify_structure,
    word_problem,
)

__version__ = "0.1.0"

__all__ = [
    "PAD",
    "Alphabet",
    "CayleyStructure",
    "ConvAlphabet",
    "Fsa",
    "GElement",
    "GroupSpec",
    "build_structure",
    "convolve",
    "deconvolve",
    "decode",
    "encode",
    "evaluate",
    "format_conv_word",
    "multiply",
    "sanov_spec",
    "unipotent_spec",
    "verify_structure",
    "word_problem",
]
