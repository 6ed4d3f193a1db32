from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from anntl.functors import presentation_relations
from anntl.homology import (
    KINDS,
    TLModule,
    connes_B,
    cyclic_homology,
    diagram_tangle,
    extra_degeneracy,
    hochschild_boundary,
    hochschild_complex,
    homology_table,
    reduced_hochschild,
    tl_basis,
    total_complex,
    verify_homotopy_identities,
    word_matrix,
)
from anntl.intlinalg import AbGroup, homology_at
from anntl.presentation import parse_word
from anntl.tangle_core import N, ZERO_MINUS, ZERO_PLUS, validate_tangle

TL2 = [((1, 2), (3, 4)), ((1, 4), (2, 3))]


def _crossing_free_matchings(points: int) -> int:
    """Count perfect matchings of 1..points with no two chords interleaved."""

    def matchings(rest):
        if not rest:
            yield []
            return
        first = rest[0]
        for k in range(1, len(rest)):
            for m in matchings(rest[1:k] + rest[k + 1 :]):
                yield [(first, rest[k])] + m

    def crosses(p, q):
        (a, b), (c, d) = p, q
        return a < c < b < d or c < a < d < b

    return sum(
        1 for m in matchings(list(range(1, points + 1))) if not any(crosses(p, q) for p, q in itertools.combinations(m, 2))
    )


# -- basis -------------------------------------------------------------------


@pytest.mark.parametrize("obj, count", [(ZERO_PLUS, 1), (ZERO_MINUS, 1), (N(1), 1), (N(2), 2), (N(3), 5)])
def test_basis_sizes(obj, count):
    assert len(tl_basis(obj)) == count


@pytest.mark.parametrize("n", range(1, 6))
def test_basis_counts_match_brute_force(n):
    assert len(tl_basis(N(n))) == _crossing_free_matchings(2 * n)


def test_basis_order_at_two():
    assert tl_basis(N(2)) == TL2


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_diagrams_are_valid_tangles(n):
    for m in tl_basis(N(n)):
        t = diagram_tangle(N(n), m)
        assert validate_tangle(t.inner, t.outer, t.pairs(), t.loops) == t


# -- generator matrices ------------------------------------------------------


def test_cap_matrices_at_two():
    # a1 closes (1,2) into a shaded loop on the first diagram and joins 4-1-2-3 on the second
    m = TLModule("Z", 2, 5)
    assert m.matrix("a", 1, N(2)).tolist() == [[2, 1]]
    # a2 joins 1-2-3-4 on the first diagram and closes (2,3) into an unshaded loop on the second
    assert m.matrix("a", 2, N(2)).tolist() == [[1, 5]]


def test_rotation_at_two_carries_a_sign():
    assert TLModule("Z", 2, 5).matrix("t", None, N(2)).tolist() == [[-1, 0], [0, -1]]
    assert TLModule("Z", 2, 5, signed_tau=False).matrix("t", None, N(2)).tolist() == [[1, 0], [0, 1]]


def test_cap_on_one_kills_the_loop_when_delta_is_zero():
    assert TLModule().matrix("a", 1, N(1)).tolist() == [[0]]
    assert TLModule("Z", 3, 0).matrix("a", 1, N(1)).tolist() == [[3]]


def test_counter_generators_scale_by_the_loop_values():
    m = TLModule("Z", 2, 5)
    assert m.matrix("delta_plus", None, N(2)).tolist() == [[2, 0], [0, 2]]
    assert TLModule().matrix("delta_minus", None, N(3)).tolist() == [[0] * 5] * 5


def test_identity_word_gives_identity():
    m = TLModule("Z", 2, 5)
    assert word_matrix(m, parse_word("id", 3)).tolist() == np.identity(5, dtype=int).tolist()


def test_rational_loop_values():
    m = TLModule("Q", Fraction(1, 2), 3)
    assert m.matrix("a", 1, N(2)).tolist() == [[Fraction(1, 2), 1]]


def test_integer_ring_rejects_fractions():
    with pytest.raises(ValueError):
        TLModule("Z", Fraction(1, 2), 0)
    with pytest.raises(ValueError):
        TLModule("R", 0, 0)


def test_unsigned_matrices_respect_every_relation():
    m = TLModule("Z", 2, 5)
    for inst in presentation_relations(3):
        lhs = word_matrix(m, inst.lhs, signed=False)
        rhs = word_matrix(m, inst.rhs, signed=False)
        assert np.array_equal(lhs, rhs), (inst.relation, inst.instance)


@pytest.mark.parametrize("n", [2, 4])
def test_signed_rotation_is_not_the_plain_action(n):
    # the top cap after the first cup is the unsigned rotation
    m = TLModule("Z", 2, 5)
    w = parse_word(f"a{2 * n + 2} b1", n)
    assert np.array_equal(word_matrix(m, w), word_matrix(m, parse_word("t", n), signed=False))
    assert not np.array_equal(word_matrix(m, w), word_matrix(m, parse_word("t", n)))


# -- complexes ---------------------------------------------------------------


def test_boundary_in_degree_one_by_hand():
    # b = a1 - a3 at [2]; both caps send the second diagram to the single arc
    assert hochschild_boundary(TLModule(), 1, 1).tolist() == [[0, 0]]
    assert hochschild_boundary(TLModule("Z", 2, 5), 1, 1).tolist() == [[2 - 2, 1 - 1]]


def test_first_groups_by_hand():
    table = reduced_hochschild(TLModule(), 1, 1)
    assert table.entries[0] == AbGroup(1)
    assert table.entries[1] == AbGroup(1)


@pytest.mark.parametrize("module", [TLModule(), TLModule("Z", 2, 5), TLModule("Q", 3, 3)])
def test_homotopy_identities(module):
    failed = [c for c in verify_homotopy_identities(module, 4) if not c.ok]
    assert failed == []


def test_unsigned_rotation_breaks_the_contraction():
    failed = {c.identity for c in verify_homotopy_identities(TLModule(signed_tau=False), 3) if not c.ok}
    assert "b'+ s-1 + s-1 b'+ = id" in failed
    assert "b- B- + B- b- = 0" in failed


def test_extra_degeneracy_for_minus_is_the_first_cup():
    m = TLModule("Z", 2, 5)
    for k in range(4):
        assert np.array_equal(extra_degeneracy(m, -1, k), m.matrix("b", 1, N(k + 1)))


def test_total_complex_shapes():
    c = total_complex(TLModule(), 1, 4)
    sizes = [len(tl_basis(N(k + 1))) for k in range(5)]
    assert c.ranks[4] == sizes[4] + sizes[2] + sizes[0]
    assert c.boundaries[4].shape == (sizes[3] + sizes[1], c.ranks[4])
    assert connes_B(TLModule(), 1, 2).shape == (sizes[3], sizes[2])


def test_homology_ignores_the_order_of_basis_diagrams():
    c = hochschild_complex(TLModule(), 1, 5)
    rng = random.Random(7)
    perms = {k: np.identity(c.ranks[k], dtype=np.int64)[rng.sample(range(c.ranks[k]), c.ranks[k])] for k in c.ranks}
    for k in range(1, 5):
        a = perms[k] @ c.boundaries[k + 1] @ perms[k + 1].T
        b = perms[k - 1] @ c.boundaries[k] @ perms[k].T
        assert homology_at(a, b) == c.homology(k)


@pytest.mark.parametrize("sign", [1, -1])
def test_small_degree_tables(sign):
    z = TLModule()
    assert [str(g) for g in reduced_hochschild(z, sign, 3).entries.values()] == ["Z", "Z", "Z/2", "Z/2"]
    assert [str(g) for g in cyclic_homology(z, sign, 3).entries.values()] == ["Z", "Z/2", "Z ⊕ Z/2"]


def test_unit_loop_values_over_Q():
    q = TLModule("Q", 3, 3)
    for sign in (1, -1):
        assert all(g.is_zero() for g in reduced_hochschild(q, sign, 4).entries.values())
        hc = cyclic_homology(q, sign, 4).entries
        assert [hc[d].free_rank for d in range(1, 5)] == [1, 0, 1, 0]


def test_table_text_and_json():
    table = homology_table(TLModule(), "hc+", 3)
    assert table.lines() == ["HC+_1 = Z", "HC+_2 = Z/2", "HC+_3 = Z ⊕ Z/2"]
    assert table.to_json()["entries"]["3"] == {"rank": 1, "torsion": [2]}
    assert homology_table(TLModule("Q", 3, 3), "hc-", 1).lines() == ["HC-_1 = Q"]
    assert homology_table(TLModule(), "hhred-", 0).lines() == ["~HH-_0 = Z"]


def test_unknown_kind():
    assert "hh+" in KINDS
    with pytest.raises(ValueError):
        homology_table(TLModule(), "hx+", 2)


def test_threads_do_not_change_results(monkeypatch):
    single = homology_table(TLModule(), "hh+", 5).to_json()
    monkeypatch.setenv("ANNTL_THREADS", "3")
    assert homology_table(TLModule(), "hh+", 5).to_json() == single
