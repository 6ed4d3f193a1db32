"""The annular Temperley-Lieb category: tangles, words, functors and homology."""

from .errors import AnnularError
from .tangle_core import AtlMorphism, AtlTangle, BoundaryObject, N, ZERO_MINUS, ZERO_PLUS, compose, generator
from .presentation import Word, parse_word, standard_form, words_equal

__all__ = [
    "AnnularError",
    "AtlMorphism",
    "AtlTangle",
    "BoundaryObject",
    "N",
    "ZERO_MINUS",
    "ZERO_PLUS",
    "Word",
    "compose",
    "generator",
    "parse_word",
    "standard_form",
    "words_equal",
]

__version__ = "0.1.0"
