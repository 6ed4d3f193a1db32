"""Cap/cup statistics, tangle types, irreducible factorization and the
three-way decomposition of annular tangles."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import NotTypeI, UnrealizableIndexSet
from .tangle_core import (
    ZERO_MINUS,
    ZERO_PLUS,
    AtlMorphism,
    AtlTangle,
    BoundaryObject,
    N,
    _arc_mask,
    _cap_tangle,
    compose,
    identity_tangle,
    involute_tangle,
    tau_tangle,
)


@dataclass(frozen=True)
class RelStar:
    """Relative star position.

    ``offset`` is set when the tangle has through strings.  Otherwise the value
    is a loop symbol: the shading of the region next to the inner circle and the
    number of non-contractible loops.
    """

    offset: int | None = None
    region_unshaded: bool | None = None
    k: int = 0

    @classmethod
    def through(cls, offset: int) -> RelStar:
        return cls(offset=offset)

    @classmethod
    def loop_symbol(cls, region_unshaded: bool, k: int) -> RelStar:
        return cls(region_unshaded=region_unshaded, k=k)

    @property
    def is_through(self) -> bool:
        return self.offset is not None

    @property
    def switches_shading(self) -> bool:
        return not self.is_through and self.k % 2 == 1

    def symbol(self) -> str:
        if self.is_through:
            return str(self.offset)
        if self.switches_shading:
            sign = "±" if self.region_unshaded else "∓"
        else:
            sign = "+" if self.region_unshaded else "-"
        return f"{sign}({self.k})"

    def __str__(self) -> str:
        return self.symbol()


class TangleType(Enum):
    TypeI = "I"
    TypeII = "II"
    TypeIII = "III"


def cap_indices(t: AtlTangle) -> tuple[int, ...]:
    return tuple(sorted(p for p, _ in t.caps))


def cup_indices(t: AtlTangle) -> tuple[int, ...]:
    return tuple(sorted(p for p, _ in t.cups))


def first_through_from_inner_star(t: AtlTangle) -> tuple[int, int]:
    """The through string met first going counterclockwise from the inner star."""
    return max(t.through)


def rel_star(t: AtlTangle) -> RelStar:
    """Relative star position.

    With through strings the offset counts, in pairs, how far the through string
    nearest the inner star (going counterclockwise) sits from the outer star.
    The raw rank of its outer end is corrected by the parity of the points next
    to each star, so Type I and Type III tangles always get offset 0 and
    ``t^k`` gets offset ``k``.
    """
    if t.through:
        inner_end, outer_end = first_through_from_inner_star(t)
        outer_points = sorted(b for _, b in t.through)
        number = outer_points.index(outer_end) + 1
        inner_shift = inner_end % 2
        outer_shift = outer_points[-1] % 2
        return RelStar.through(((number + outer_shift - inner_shift) // 2) % (len(t.through) // 2))
    return RelStar.loop_symbol(not t.inner_region_shaded(), t.loops)


def _star_condition_holds(t: AtlTangle) -> bool:
    """Outer star sits next to the end of the first through string (inner star
    as reference); with no through strings it is automatic."""
    if not t.through:
        return True
    a, b = first_through_from_inner_star(t)
    return b == (t.outer.points if a % 2 == 0 else 1)


def is_identity(t: AtlTangle) -> bool:
    return t == identity_tangle(t.inner) if t.inner == t.outer else False


def is_type1(t: AtlTangle) -> bool:
    if is_identity(t):
        return True
    return not t.cups and not t.loops and bool(t.caps) and _star_condition_holds(t)


def is_type2(t: AtlTangle) -> bool:
    return not t.caps and not t.cups


def is_type3(t: AtlTangle) -> bool:
    return is_type1(involute_tangle(t))


def classify(t: AtlTangle) -> frozenset[TangleType]:
    found = set()
    if is_type1(t):
        found.add(TangleType.TypeI)
    if is_type2(t):
        found.add(TangleType.TypeII)
    if is_type3(t):
        found.add(TangleType.TypeIII)
    return frozenset(found)


def _match_cyclic(m: int, caps: Sequence[int]) -> tuple[dict[int, int], list[int]]:
    """Pair every cap index with the point closing it, reading clockwise.

    Returns the cap map and the leftover (through-string) points.
    """
    size = 2 * m
    opens = set(caps)
    partner: dict[int, int] = {}
    stack: list[int] = []
    for _ in range(2):
        for j in range(1, size + 1):
            if j in partner or j in partner.values():
                continue
            if j in opens:
                if j not in stack:
                    stack.append(j)
            elif stack:
                partner[stack.pop()] = j
    if stack:
        raise UnrealizableIndexSet(f"cap starting at {stack[-1]} never closes")
    used = set(partner) | set(partner.values())
    return partner, [j for j in range(1, size + 1) if j not in used]


def build_type1_from_capind(
    m: BoundaryObject | str | int, caps: Iterable[int], target: BoundaryObject | str | int
) -> AtlTangle:
    """The unique Type I tangle from ``m`` to ``target`` with the given cap indices."""
    m = BoundaryObject.parse(m)
    target = BoundaryObject.parse(target)
    caps = sorted(caps)
    if len(set(caps)) != len(caps):
        raise UnrealizableIndexSet(f"repeated cap index in {caps}")
    if not caps:
        if m != target:
            raise UnrealizableIndexSet(f"no caps but objects differ: {m} vs {target}")
        return identity_tangle(m)
    if m.is_zero:
        raise UnrealizableIndexSet(f"no caps exist at {m}")
    for c in caps:
        if not 1 <= c <= m.points:
            raise UnrealizableIndexSet(f"cap index {c} outside 1..{m.points}")
    partner, free = _match_cyclic(m.n, caps)
    if len(free) != target.points:
        raise UnrealizableIndexSet(f"{len(free)} points left for through strings but {target} needs {target.points}")
    cap_pairs = tuple(sorted(partner.items()))
    if not free:
        t = AtlTangle(m, target, caps=cap_pairs)
        if t.inner_region_shaded() != target.core_shaded:
            raise UnrealizableIndexSet(f"caps leave a {'shaded' if t.inner_region_shaded() else 'unshaded'} core, not {target}")
        return t
    shift = 0 if free[-1] % 2 == 0 else 1
    through = tuple((a, (r + shift) % len(free) + 1) for r, a in enumerate(free))
    return AtlTangle(m, target, caps=cap_pairs, through=through)


def _caps_bounded_by(t: AtlTangle, cap: tuple[int, int]) -> list[tuple[int, int]]:
    size = t.inner.points
    outer_mask = _arc_mask(*cap, size)
    return [c for c in t.caps if _arc_mask(*c, size) & ~outer_mask == 0]


def _renumber_after(t: AtlTangle, factor: AtlTangle) -> AtlTangle:
    """The tangle ``rest`` with ``t = rest o factor`` for a Type I ``factor``
    whose caps are among the caps of ``t``."""
    if not set(factor.caps) <= set(t.caps):
        raise AssertionError(f"factor {factor} does not peel caps of {t}")
    relabel = dict(factor.through)
    caps = tuple(sorted((relabel[p], relabel[q]) for p, q in t.caps if (p, q) not in factor.caps))
    through = tuple(sorted((relabel[a], b) for a, b in t.through))
    return AtlTangle(factor.outer, t.outer, caps=caps, through=through)


def irreducible_factorization(t: AtlTangle) -> list[list[int]]:
    """Split a Type I tangle into irreducible factors ``W_r ... W_1``.

    Each factor is the list of ``a`` indices of its word, leftmost applied last;
    the factors are returned in written order, so concatenating them gives a
    word for ``t``.
    """
    if not is_type1(t):
        raise NotTypeI(f"{t} is not of Type I")
    factors: list[list[int]] = []
    current = t
    while current.caps:
        m = current.inner.n
        star = 1 << (2 * m - 1)
        bounding = [c for c in current.caps if _arc_mask(*c, 2 * m) & star and c[0] % 2 == 0]
        if bounding:
            lam = max(bounding)
            inside = [c for c in _caps_bounded_by(current, lam) if c != lam]
            before = sorted((c[0] for c in inside if c[0] < lam[0]), reverse=True)
            after = sorted((c[0] for c in inside if c[0] > lam[0]), reverse=True)
            # written order: a_q, then the smaller indices, then the larger ones
            word = [lam[0] - 2 * len(before)] + sorted(before) + sorted(after)
            factor_tangle = _word_tangle(m, word)
            factors.append(word)
            current = _renumber_after(current, factor_tangle)
            continue
        indices = sorted(c[0] for c in current.caps)
        if len(indices) < m:
            word = indices
        else:
            last = 2 if current.outer_region_shaded() else 1
            word = [last] + indices[1:]
        factors.append(word)
        current = _renumber_after(current, _word_tangle(m, word))
        break
    if current.caps or current != identity_tangle(current.inner):
        raise AssertionError(f"factorization left {current}")
    factors.reverse()
    return factors


def _word_tangle(m: int, word: Sequence[int]) -> AtlTangle:
    """Tangle of ``a_{w_0} ... a_{w_last}`` starting at ``[m]``."""
    result = AtlMorphism(identity_tangle(N(m)))
    size = m
    for i in reversed(word):
        result = compose(AtlMorphism(_cap_tangle(size, i)), result)
        size -= 1
    return result.tangle


def type2_from_rel_star(source: BoundaryObject, rel: RelStar, target: BoundaryObject | None = None) -> AtlTangle:
    """The unique Type II tangle at ``source`` with the given relative star position."""
    if rel.is_through:
        if source.is_zero:
            raise ValueError("through-string offset needs a positive object")
        return tau_tangle(source.n, rel.offset)
    inner = ZERO_PLUS if rel.region_unshaded else ZERO_MINUS
    if source != inner:
        raise ValueError(f"loop symbol {rel} needs inner object {inner}, not {source}")
    outer = inner if rel.k % 2 == 0 else (ZERO_MINUS if inner == ZERO_PLUS else ZERO_PLUS)
    if target is not None and target != outer:
        raise ValueError(f"loop symbol {rel} ends at {outer}, not {target}")
    return AtlTangle(inner, outer, loops=rel.k)


@dataclass(frozen=True)
class Decomposition:
    type1: AtlTangle
    type2: AtlTangle
    type3: AtlTangle
    c_plus: int = 0
    c_minus: int = 0

    def recompose(self) -> AtlMorphism:
        inner = compose(AtlMorphism(self.type2), AtlMorphism(self.type1))
        whole = compose(AtlMorphism(self.type3), inner)
        return AtlMorphism(whole.tangle, whole.c_plus + self.c_plus, whole.c_minus + self.c_minus)

    def to_json(self) -> dict:
        return {
            "type1": self.type1.to_json(),
            "type2": self.type2.to_json(),
            "type3": self.type3.to_json(),
            "c_plus": self.c_plus,
            "c_minus": self.c_minus,
        }


def middle_objects(t: AtlTangle) -> tuple[BoundaryObject, BoundaryObject]:
    """Objects between the Type I, II and III parts of ``t``."""
    if t.through:
        obj = N(len(t.through) // 2)
        return obj, obj
    low = ZERO_MINUS if t.inner_region_shaded() else ZERO_PLUS
    high = ZERO_MINUS if t.outer_region_shaded() else ZERO_PLUS
    return low, high


def decompose(m: AtlMorphism | AtlTangle) -> Decomposition:
    if isinstance(m, AtlTangle):
        m = AtlMorphism(m)
    t = m.tangle
    low, high = middle_objects(t)
    first = build_type1_from_capind(t.inner, cap_indices(t), low)
    middle = type2_from_rel_star(low, rel_star(t), high)
    last = involute_tangle(build_type1_from_capind(t.outer, cup_indices(t), high))
    return Decomposition(first, middle, last, m.c_plus, m.c_minus)


def caps_bounding_inner_star(t: AtlTangle) -> list[tuple[int, int]]:
    if t.inner.is_zero:
        return []
    star = 1 << (t.inner.points - 1)
    return [c for c in t.caps if _arc_mask(*c, t.inner.points) & star]


def is_irreducible(t: AtlTangle) -> bool:
    """Type I with at most one cap around the inner star, bounding all others."""
    if not is_type1(t):
        return False
    around = caps_bounding_inner_star(t)
    if len(around) > 1:
        return False
    if around:
        return len(_caps_bounded_by(t, around[0])) == len(t.caps)
    return True


def factor_tangles(t: AtlTangle) -> list[AtlTangle]:
    """Tangles of the irreducible factors, in application order."""
    out = []
    m = t.inner.n
    for word in reversed(irreducible_factorization(t)):
        w = _word_tangle(m, word)
        out.append(w)
        m = w.outer.n
    return out
