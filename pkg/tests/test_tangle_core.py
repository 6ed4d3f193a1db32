from __future__ import annotations

import itertools
import json

import pytest
from hypothesis import given, settings

from anntl.errors import (
    CrossingStrings,
    IndexOutOfRange,
    LoopsWithThroughStrings,
    NotPerfectMatching,
    ObjectMismatch,
    ParityViolation,
    ShadingMismatch,
    WrongObjectForSign,
)
from anntl.functors import eval_F
from anntl.tangle_core import (
    AtlMorphism,
    BoundaryObject,
    N,
    ZERO_MINUS,
    ZERO_PLUS,
    compose,
    equal,
    generator,
    identity_morphism,
    involute,
    morphism_from_json,
    validate_tangle,
)
from conftest import words


def through(*pairs):
    return [(("i", a), ("o", b)) for a, b in pairs]


# -- objects -----------------------------------------------------------------


@pytest.mark.parametrize(
    "text, points, zero",
    [("3", 6, False), ("0+", 0, True), ("0-", 0, True), (1, 2, False)],
)
def test_boundary_object_parse(text, points, zero):
    obj = BoundaryObject.parse(text)
    assert obj.points == points
    assert obj.is_zero == zero
    assert BoundaryObject.parse(str(obj)) == obj


def test_zero_objects_have_opposite_core_shading():
    assert not ZERO_PLUS.core_shaded
    assert ZERO_MINUS.core_shaded


# -- validation --------------------------------------------------------------


def test_identity_matching_is_valid():
    t = validate_tangle(2, 2, through((1, 1), (2, 2), (3, 3), (4, 4)))
    assert t == identity_morphism(N(2)).tangle


def test_through_string_joining_odd_to_even_is_a_parity_violation():
    with pytest.raises(ParityViolation):
        validate_tangle(1, 1, through((1, 2), (2, 1)))


def test_single_loop_between_zero_objects_is_valid():
    t = validate_tangle("0+", "0-", [], 1)
    assert t.loops == 1
    assert equal(AtlMorphism(t), compose(generator("a", 2, N(1)), generator("b", 1, ZERO_PLUS)))


@pytest.mark.parametrize(
    "inner, outer, pairs, loops, error",
    [
        (1, 1, through((1, 1)), 0, NotPerfectMatching),
        (2, 1, [(("i", 1), ("i", 2))] + through((3, 1)), 0, NotPerfectMatching),
        (3, 0, [(("i", 1), ("i", 4)), (("i", 2), ("i", 5)), (("i", 3), ("i", 6))], 0, CrossingStrings),
        (1, 1, through((1, 1), (2, 2)), 1, LoopsWithThroughStrings),
        ("0+", "0-", [], 0, ShadingMismatch),
        ("0+", "0+", [], 1, ShadingMismatch),
        (2, 2, through((1, 3), (2, 2), (3, 1), (4, 4)), 0, CrossingStrings),
    ],
)
def test_invalid_tangles_are_rejected(inner, outer, pairs, loops, error):
    if outer == 0:
        outer = "0+"
    with pytest.raises(error):
        validate_tangle(inner, outer, pairs, loops)


def test_json_round_trip_is_canonical():
    m = AtlMorphism(generator("b", 6, N(2)).tangle, 2, 1)
    text = json.dumps(m.to_json())
    back = morphism_from_json(json.loads(text))
    assert back == m
    pairs = m.to_json()["pairs"]
    assert pairs == sorted(pairs)


# -- identities and generators -----------------------------------------------


def test_identity_at_three_has_six_straight_strings():
    t = identity_morphism(N(3)).tangle
    assert t.through == tuple((j, j) for j in range(1, 7))
    assert not t.caps and not t.cups and t.loops == 0


def test_identity_at_zero_plus_is_empty():
    t = identity_morphism(ZERO_PLUS).tangle
    assert (t.through, t.caps, t.cups, t.loops) == ((), (), (), 0)


def test_a3_at_three():
    t = generator("a", 3, N(3)).tangle
    assert t.caps == ((3, 4),)
    assert (1, 1) in t.through


def test_a1_at_three():
    t = generator("a", 1, N(3)).tangle
    assert t.caps == ((1, 2),)
    assert (3, 1) in t.through


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_top_cup_generator(n):
    t = generator("b", 2 * n + 2, N(n)).tangle
    assert t.cups == ((2 * n + 2, 1),)
    assert (1, 2 * n + 1) in t.through


@pytest.mark.parametrize(
    "kind, index, at, error",
    [
        ("a", 3, N(1), IndexOutOfRange),
        ("a", 0, N(2), IndexOutOfRange),
        ("b", 7, N(2), IndexOutOfRange),
        ("b", 2, ZERO_PLUS, WrongObjectForSign),
        ("b", 1, ZERO_MINUS, WrongObjectForSign),
        ("t", None, ZERO_PLUS, IndexOutOfRange),
    ],
)
def test_generator_index_errors(kind, index, at, error):
    with pytest.raises(error):
        generator(kind, index, at)


# -- composition -------------------------------------------------------------


def test_a1_after_b1_removes_a_shaded_loop():
    m = compose(generator("a", 1, N(1)), generator("b", 1, ZERO_PLUS))
    assert m == AtlMorphism(identity_morphism(ZERO_PLUS).tangle, 1, 0)


def test_a2_after_b2_removes_an_unshaded_loop():
    m = compose(generator("a", 2, N(1)), generator("b", 2, ZERO_MINUS))
    assert m == AtlMorphism(identity_morphism(ZERO_MINUS).tangle, 0, 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_top_cap_after_first_cup_is_rotation(n):
    m = compose(generator("a", 2 * n + 2, N(n + 1)), generator("b", 1, N(n)))
    assert m == generator("t", None, N(n))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_rotation_has_order_n(n):
    t = generator("t", None, N(n))
    power = identity_morphism(N(n))
    for _ in range(n):
        power = compose(t, power)
    assert power == identity_morphism(N(n))


def test_compose_rejects_mismatched_objects():
    with pytest.raises(ObjectMismatch):
        compose(generator("a", 1, N(3)), generator("a", 1, N(3)))


def test_identity_is_neutral():
    x = compose(generator("b", 3, N(1)), generator("a", 2, N(2)))
    assert compose(identity_morphism(N(2)), x) == x
    assert compose(x, identity_morphism(N(2))) == x


def _all_generators(n_max: int):
    out = []
    for obj in [ZERO_PLUS, ZERO_MINUS] + [N(n) for n in range(1, n_max + 1)]:
        if obj.is_zero:
            out.append(generator("b", 1 if obj == ZERO_PLUS else 2, obj))
            continue
        out += [generator("a", i, obj) for i in range(1, obj.points + 1)]
        out += [generator("b", i, obj) for i in range(1, obj.points + 3)]
        out.append(generator("t", None, obj))
    return out


def test_associativity_on_generator_triples():
    gens = _all_generators(4)
    count = 0
    for x, y, z in itertools.product(gens, repeat=3):
        if x.source != y.target or y.source != z.target:
            continue
        count += 1
        assert compose(compose(x, y), z) == compose(x, compose(y, z))
    assert count > 1000


def test_composites_validate():
    gens = _all_generators(3)
    for x, y in itertools.product(gens, repeat=2):
        if x.source == y.target:
            m = compose(x, y)
            t = m.tangle
            again = validate_tangle(t.inner, t.outer, t.pairs(), t.loops)
            assert again == t


# -- involution and equality -------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_involute_cap_is_cup(n):
    for i in range(1, 2 * n + 1):
        a = generator("a", i, N(n))
        assert involute(a) == generator("b", i, a.target)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_involute_rotation_is_inverse(n):
    t = generator("t", None, N(n))
    inverse = identity_morphism(N(n))
    for _ in range(n - 1):
        inverse = compose(t, inverse)
    assert involute(t) == inverse


@settings(max_examples=150, deadline=None)
@given(words(max_length=6))
def test_involution_is_an_involution(w):
    m = eval_F(w)
    assert involute(involute(m)) == m


@settings(max_examples=150, deadline=None)
@given(words(max_length=4), words(max_length=4))
def test_involution_reverses_composition(v, w):
    x, y = eval_F(v), eval_F(w)
    if x.source != y.target:
        return
    assert involute(compose(x, y)) == compose(involute(y), involute(x))


def test_equal_examples():
    x = compose(generator("b", 3, N(1)), generator("a", 2, N(2)))
    assert equal(x, x)
    for n in (1, 2, 3):
        assert equal(compose(generator("a", 1, N(n + 1)), generator("b", 2, N(n))), identity_morphism(N(n)))
    assert not equal(generator("t", None, N(2)), identity_morphism(N(2)))
