from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anntl.functors import (
    CyclicWord,
    QGenerator,
    corrupted_table,
    cyclic_relations,
    cyclic_standard_form,
    embed_Hminus,
    embed_Hplus,
    eval_F,
    from_pushout_presentation,
    normalizer_sweep,
    parse_cyclic_word,
    read_G,
    to_pushout_presentation,
    verify_relations,
)
from anntl.presentation import ALPHA, involute_word, parse_word, standard_form, words_equal
from anntl.tangle_core import AtlMorphism, N, ZERO_MINUS, ZERO_PLUS, generator, identity_morphism, involute
from conftest import random_word, words


# -- F and G -----------------------------------------------------------------


def test_F_of_loop_word():
    assert eval_F(parse_word("a1 b1", "0+")) == AtlMorphism(identity_morphism(ZERO_PLUS).tangle, 1, 0)


def test_F_of_identity_word():
    assert eval_F(parse_word("id", 3)) == identity_morphism(N(3))


@settings(max_examples=150, deadline=None)
@given(words(max_length=6))
def test_F_commutes_with_involution(w):
    assert eval_F(involute_word(w)) == involute(eval_F(w))


def test_G_of_counters_only():
    m = AtlMorphism(identity_morphism(N(1)).tangle, 2, 0)
    assert read_G(m).text() == "d+ d+"


def test_G_of_rotation():
    assert read_G(generator("t", None, N(3))).text() == "t"


def test_F_after_G_on_random_composites(rng):
    for _ in range(300):
        w = random_word(rng, rng.choice([ZERO_PLUS, ZERO_MINUS, N(1), N(2), N(3), N(4)]), rng.randint(0, 6))
        m = eval_F(w)
        back = read_G(m)
        assert eval_F(back) == m
        assert standard_form(back).to_word() == back


# -- cyclic category ---------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_first_face_after_rotation_is_last_face(n):
    assert str(cyclic_standard_form(parse_cyclic_word("d0 t", n))) == f"d{n}"


@pytest.mark.parametrize("n", [1, 2, 3])
def test_first_degeneracy_after_rotation(n):
    # the normal form keeps the shape (degeneracies)(rotation)(faces): "s0 t" already has it
    lhs = cyclic_standard_form(parse_cyclic_word("s0 t", n))
    rhs = cyclic_standard_form(parse_cyclic_word(f"t t s{n}", n))
    assert lhs == rhs
    assert str(lhs) == "s0 t"


@pytest.mark.parametrize("n", [1, 2, 3])
def test_top_face_after_extra_degeneracy_is_rotation(n):
    assert str(cyclic_standard_form(parse_cyclic_word(f"d{n + 1} s-1", n))) == "t"


def _cyclic_word(rng: random.Random, degree: int, length: int, extra: bool = True) -> CyclicWord:
    gens, n = [], degree
    for _ in range(length):
        options = [("t", None)]
        if n >= 1:
            options += [("d", i) for i in range(n + 1)]
        if n < 4:
            options += [("s", j) for j in range(-1 if extra else 0, n + 1)]
        kind, index = rng.choice(options)
        gens.append((kind, index))
        n += {"d": -1, "s": 1, "t": 0}[kind]
    return CyclicWord.from_applied(degree, gens)


def test_cyclic_forms_are_sound_through_both_embeddings(rng):
    for _ in range(400):
        w = _cyclic_word(rng, rng.randint(0, 3), rng.randint(0, 5))
        form = cyclic_standard_form(w).to_word()
        assert words_equal(embed_Hplus(form), embed_Hplus(w))
        assert words_equal(embed_Hminus(form), embed_Hminus(w))


def test_cyclic_forms_are_unique(rng):
    seen = {}
    for _ in range(600):
        w = _cyclic_word(rng, rng.randint(0, 2), rng.randint(0, 4))
        form = cyclic_standard_form(w)
        key = (w.source, standard_form(embed_Hplus(w)))
        if key in seen:
            assert seen[key] == form
        seen[key] = form


def test_cyclic_relations_hold_after_embedding():
    for name, lhs, rhs in cyclic_relations(4):
        assert cyclic_standard_form(lhs) == cyclic_standard_form(rhs), name


# -- embeddings --------------------------------------------------------------


def test_embedding_examples():
    assert embed_Hplus(parse_cyclic_word("d1", 2)).text() == "a3"
    assert embed_Hplus(parse_cyclic_word("d1", 2)).source == N(3)
    assert embed_Hminus(parse_cyclic_word("s-1", 2)).text() == "b1"
    assert words_equal(embed_Hplus(parse_cyclic_word("s-1", 2)), parse_word("t b6", 3))


def test_embeddings_are_functorial(rng):
    for _ in range(200):
        v = _cyclic_word(rng, rng.randint(0, 3), rng.randint(0, 3))
        w = _cyclic_word(rng, v.target, rng.randint(0, 3))
        both = v.then(w)
        for embed in (embed_Hplus, embed_Hminus):
            assert words_equal(embed(both), embed(v).then(embed(w)))


def _mirror(w: CyclicWord) -> CyclicWord:
    """The cyclic word predicted for the involute of the plus embedding:
    reversed, with d_j -> s_(j-1), s_j -> d_j and t -> t^-1."""
    gens = []
    for g in reversed(w.applied()):
        if g.kind == "d":
            gens.append(("s", g.index - 1))
        elif g.kind == "s":
            gens.append(("d", g.index))
        else:
            gens += [("t", None)] * g.degree
    return CyclicWord.from_applied(w.target, gens)


def test_involution_swaps_the_embeddings(rng):
    for _ in range(200):
        w = _cyclic_word(rng, rng.randint(0, 3), rng.randint(0, 4), extra=False)
        assert words_equal(involute_word(embed_Hplus(w)), embed_Hminus(_mirror(w)))


# -- pushout relabeling ------------------------------------------------------


def test_relabel_examples():
    q = to_pushout_presentation(parse_word("a3", 3))
    assert q.factors == (QGenerator("s*", 0, 2),)
    # the bottom level follows the same parity rule as every other level
    assert to_pushout_presentation(parse_word("a2", 1)).text() == "d0"
    assert to_pushout_presentation(parse_word("a1", 1)).text() == "s*-1"
    assert to_pushout_presentation(parse_word("b1", "0+")).text() == "s-1"


@settings(max_examples=200, deadline=None)
@given(words(max_length=6))
def test_relabel_round_trip(w):
    w = parse_word(w.text() or "id", w.source)
    assert from_pushout_presentation(to_pushout_presentation(w)) == w


# -- relation verification ---------------------------------------------------


def test_all_relations_hold_up_to_three():
    results = verify_relations(3)
    assert results
    assert all(r.status == "pass" for r in results)


@pytest.mark.parametrize("kind, index, source", [(ALPHA, 1, N(2)), ("beta", 3, N(1)), ("tau", None, N(2))])
def test_corrupted_generator_failures_are_localized(kind, index, source):
    results = verify_relations(3, corrupted_table(kind, index, source))
    failed = [r for r in results if r.status == "fail"]
    assert failed
    from anntl.functors import all_relation_checks

    involved = {}
    for name, inst, lhs, rhs in all_relation_checks(3):
        gens = [(g.kind, g.index, g.source) for g in lhs.factors + rhs.factors]
        involved[(name, inst)] = (kind, index, source) in gens
    assert all(involved[(r.relation, r.instance)] for r in failed)


def test_json_report_entries():
    entry = verify_relations(1)[0].to_json()
    assert set(entry) == {"relation", "instance", "status"}


# -- the two normalizers -----------------------------------------------------


def test_normalizers_agree_on_short_words():
    report = normalizer_sweep([ZERO_PLUS, ZERO_MINUS, N(1), N(2), N(3)], 3, 3)
    assert report.words > 3000
    assert report.mismatches == []


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10_000))
def test_normalizers_agree_on_longer_random_words(seed):
    rng = random.Random(seed)
    w = random_word(rng, rng.choice([ZERO_PLUS, N(1), N(2), N(3), N(4)]), rng.randint(6, 12), max_n=5)
    assert standard_form(w) == standard_form(read_G(eval_F(w)))
