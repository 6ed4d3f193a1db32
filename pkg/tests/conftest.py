from __future__ import annotations

import random

import pytest
from hypothesis import strategies as st

from anntl.functors import _generators_at
from anntl.presentation import Generator, Word
from anntl.tangle_core import N, ZERO_MINUS, ZERO_PLUS

OBJECTS = [ZERO_PLUS, ZERO_MINUS, N(1), N(2), N(3), N(4)]


def random_word(rng: random.Random, source, length: int, max_n: int = 4) -> Word:
    gens = []
    obj = source
    for _ in range(length):
        kind, index = rng.choice(_generators_at(obj, max_n))
        gens.append((kind, index))
        obj = Generator(kind, index, obj).target
    return Word.from_applied(source, gens)


@st.composite
def words(draw, max_length: int = 6, max_n: int = 4, sources=None):
    source = draw(st.sampled_from(sources or OBJECTS))
    length = draw(st.integers(0, max_length))
    gens = []
    obj = source
    for _ in range(length):
        kind, index = draw(st.sampled_from(_generators_at(obj, max_n)))
        gens.append((kind, index))
        obj = Generator(kind, index, obj).target
    return Word.from_applied(source, gens)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)
