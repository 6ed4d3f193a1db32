"""Annular Temperley-Lieb tangles: encoding, validation, composition, involution.

Conventions
-----------
An object ``N(n)`` carries ``2n`` marked points on its circle, numbered ``1..2n``
clockwise starting just after the star interval ``(2n, 1)``.  The elementary
interval ``(j, j+1)`` is shaded exactly when ``j`` is odd, so the star interval
always touches an unshaded region.  The objects ``0+`` and ``0-`` carry no points
and record the shading of the region touching that circle.

A cap (string joining two inner points) is stored as an ordered pair
``(p, q)``: the boundary interval it cuts off runs clockwise from ``p`` to ``q``.
The first entry is therefore the cap index.  Cups on the outer circle use the
same convention.  When the tangle has through strings the orientation is forced
by planarity; without through strings it distinguishes tangles whose unordered
matchings coincide (for example the two loop-free caps at ``[1] -> [0+]`` and the
cap ``(2, 1)`` at ``[1] -> [0-]``), so it is part of the canonical encoding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    CrossingStrings,
    IndexOutOfRange,
    LoopsWithThroughStrings,
    NotPerfectMatching,
    ObjectMismatch,
    ParityViolation,
    ShadingMismatch,
    WrongObjectForSign,
)

Pair = tuple[int, int]
Endpoint = tuple[str, int]

INNER = "i"
OUTER = "o"


@dataclass(frozen=True, order=True)
class BoundaryObject:
    """``N(n)`` for ``n >= 1`` (sign 0), or ``0+`` / ``0-`` (n = 0, sign +1 / -1)."""

    n: int
    sign: int = 0

    def __post_init__(self) -> None:
        if self.n < 0 or (self.n == 0 and self.sign not in (1, -1)) or (self.n > 0 and self.sign != 0):
            raise ValueError(f"invalid boundary object n={self.n} sign={self.sign}")

    @classmethod
    def parse(cls, text: str | int | BoundaryObject) -> BoundaryObject:
        if isinstance(text, BoundaryObject):
            return text
        if isinstance(text, int):
            return cls(text)
        s = str(text).strip()
        if s in ("0+", "+"):
            return ZERO_PLUS
        if s in ("0-", "-"):
            return ZERO_MINUS
        try:
            n = int(s)
        except ValueError:
            raise ValueError(f"cannot parse object {text!r}; expected a positive integer, 0+ or 0-") from None
        if n < 1:
            raise ValueError(f"object {text!r} must be a positive integer, 0+ or 0-")
        return cls(n)

    @property
    def points(self) -> int:
        return 2 * self.n

    @property
    def is_zero(self) -> bool:
        return self.n == 0

    @property
    def core_shaded(self) -> bool:
        """Shading of the region touching a pointless circle."""
        if not self.is_zero:
            raise ValueError("only 0+ and 0- have a core shading")
        return self.sign < 0

    def shift(self, z: int) -> BoundaryObject:
        """Object arithmetic where ``0+`` and ``0-`` both behave as 0."""
        return BoundaryObject.parse(self.n + z)

    def __str__(self) -> str:
        if self.n == 0:
            return "0+" if self.sign > 0 else "0-"
        return str(self.n)

    def __repr__(self) -> str:
        return f"[{self}]"


ZERO_PLUS = BoundaryObject(0, 1)
ZERO_MINUS = BoundaryObject(0, -1)


def N(n: int) -> BoundaryObject:
    return BoundaryObject(n)


def interval_shaded(j: int) -> bool:
    """Shading of the elementary interval ``(j, j+1)``."""
    return j % 2 == 1


def _arc_mask(p: int, q: int, size: int) -> int:
    """Bitmask of elementary intervals on the clockwise arc from ``p`` to ``q``."""
    mask = 0
    j = p
    while j != q:
        mask |= 1 << (j - 1)
        j = j % size + 1
    return mask


def _arc_interior(p: int, q: int, size: int) -> list[int]:
    out = []
    j = p % size + 1
    while j != q:
        out.append(j)
        j = j % size + 1
    return out


def _uncovered_interval(arcs: Sequence[Pair], size: int) -> int:
    covered = 0
    for p, q in arcs:
        covered |= _arc_mask(p, q, size)
    for j in range(1, size + 1):
        if not covered >> (j - 1) & 1:
            return j
    raise CrossingStrings("arcs cover the whole circle")


@dataclass(frozen=True)
class AtlTangle:
    """An annular tangle without contractible loops, in canonical encoding.

    ``caps`` and ``cups`` hold oriented pairs (index first), ``through`` holds
    ``(inner, outer)`` pairs; all three are sorted.
    """

    inner: BoundaryObject
    outer: BoundaryObject
    caps: tuple[Pair, ...] = ()
    cups: tuple[Pair, ...] = ()
    through: tuple[Pair, ...] = ()
    loops: int = 0

    @property
    def source(self) -> BoundaryObject:
        return self.inner

    @property
    def target(self) -> BoundaryObject:
        return self.outer

    def pairs(self) -> list[tuple[Endpoint, Endpoint]]:
        """All strings as endpoint pairs, sorted lexicographically."""
        out = [((INNER, p), (INNER, q)) for p, q in self.caps]
        out += [((OUTER, p), (OUTER, q)) for p, q in self.cups]
        out += [((INNER, a), (OUTER, b)) for a, b in self.through]
        return sorted(out)

    def inner_region_shaded(self) -> bool:
        """Shading of the region next to the inner circle outside every cap.

        Only meaningful when there are no through strings.
        """
        if self.inner.is_zero:
            return self.inner.core_shaded
        return interval_shaded(_uncovered_interval(self.caps, self.inner.points))

    def outer_region_shaded(self) -> bool:
        if self.outer.is_zero:
            return self.outer.core_shaded
        return interval_shaded(_uncovered_interval(self.cups, self.outer.points))

    def to_json(self) -> dict:
        return {
            "inner": str(self.inner),
            "outer": str(self.outer),
            "pairs": [[list(a), list(b)] for a, b in self.pairs()],
            "loops": self.loops,
        }

    def __str__(self) -> str:
        parts = [f"cap{p}-{q}" for p, q in self.caps]
        parts += [f"cup{p}-{q}" for p, q in self.cups]
        parts += [f"{a}->{b}" for a, b in self.through]
        if self.loops:
            parts.append(f"loops={self.loops}")
        return f"[{self.inner}->{self.outer}: {' '.join(parts) or 'empty'}]"


@dataclass(frozen=True)
class AtlMorphism:
    """A tangle together with counts of removed shaded and unshaded loops."""

    tangle: AtlTangle
    c_plus: int = 0
    c_minus: int = 0

    @property
    def source(self) -> BoundaryObject:
        return self.tangle.inner

    @property
    def target(self) -> BoundaryObject:
        return self.tangle.outer

    def to_json(self) -> dict:
        data = self.tangle.to_json()
        data["c_plus"] = self.c_plus
        data["c_minus"] = self.c_minus
        return data

    def __str__(self) -> str:
        extra = ""
        if self.c_plus or self.c_minus:
            extra = f" (c+={self.c_plus}, c-={self.c_minus})"
        return f"{self.tangle}{extra}"


def _parse_endpoint(raw) -> Endpoint:
    side, idx = raw
    side = str(side).lower()
    if side in ("i", "inner"):
        side = INNER
    elif side in ("o", "outer"):
        side = OUTER
    else:
        raise NotPerfectMatching(f"unknown endpoint side {raw[0]!r}")
    return side, int(idx)


def validate_tangle(
    inner: BoundaryObject | str | int,
    outer: BoundaryObject | str | int,
    pairs: Iterable,
    loops: int = 0,
) -> AtlTangle:
    """Check every tangle invariant and return the canonical encoding.

    ``pairs`` is an iterable of endpoint pairs ``(("i", 1), ("o", 3))``.  For
    caps and cups the endpoint listed first is taken as the index when the
    tangle has no through strings; otherwise orientation is inferred.
    """
    inner = BoundaryObject.parse(inner)
    outer = BoundaryObject.parse(outer)
    loops = int(loops)
    if loops < 0:
        raise NotPerfectMatching("loop count must be non-negative")
    seen: set[Endpoint] = set()
    caps: list[Pair] = []
    cups: list[Pair] = []
    through: list[Pair] = []
    for raw in pairs:
        if len(raw) != 2:
            raise NotPerfectMatching(f"string {raw!r} must have two endpoints")
        a, b = (_parse_endpoint(e) for e in raw)
        for side, idx in (a, b):
            size = inner.points if side == INNER else outer.points
            if not 1 <= idx <= size:
                raise NotPerfectMatching(f"endpoint {side}{idx} does not exist on object {inner if side == INNER else outer}")
            if (side, idx) in seen:
                raise NotPerfectMatching(f"endpoint {side}{idx} used twice")
            seen.add((side, idx))
        if a[0] == b[0]:
            if (a[1] - b[1]) % 2 == 0:
                raise ParityViolation(f"{a[0]}{a[1]} and {b[0]}{b[1]} have the same parity")
            (caps if a[0] == INNER else cups).append((a[1], b[1]))
        else:
            if a[0] == OUTER:
                a, b = b, a
            if (a[1] - b[1]) % 2 != 0:
                raise ParityViolation(f"through string {a[1]}->{b[1]} joins points of different parity")
            through.append((a[1], b[1]))
    if len(seen) != inner.points + outer.points:
        raise NotPerfectMatching(f"{inner.points + outer.points - len(seen)} endpoints are unmatched")
    if through and loops:
        raise LoopsWithThroughStrings(f"{loops} loops with {len(through)} through strings")

    inner_ts = {a for a, _ in through}
    outer_ts = {b for _, b in through}
    caps = _orient(caps, inner.points, inner_ts, "cap")
    cups = _orient(cups, outer.points, outer_ts, "cup")
    _check_laminar(caps, inner.points, "cap")
    _check_laminar(cups, outer.points, "cup")
    through.sort()
    _check_cyclic_order(through)

    tangle = AtlTangle(inner, outer, tuple(sorted(caps)), tuple(sorted(cups)), tuple(through), loops)
    if not through:
        if tangle.inner_region_shaded() ^ (loops % 2 == 1) != tangle.outer_region_shaded():
            raise ShadingMismatch(
                f"core region is {'shaded' if tangle.inner_region_shaded() else 'unshaded'} from the inside "
                f"but {loops} loops lead to {'shaded' if tangle.outer_region_shaded() else 'unshaded'} outside"
            )
    return tangle


def _orient(arcs: list[Pair], size: int, blocked: set[int], what: str) -> list[Pair]:
    if not blocked:
        return arcs
    out = []
    for p, q in arcs:
        if not blocked.intersection(_arc_interior(p, q, size)):
            out.append((p, q))
        elif not blocked.intersection(_arc_interior(q, p, size)):
            out.append((q, p))
        else:
            raise CrossingStrings(f"{what} {p}-{q} separates through strings")
    return out


def _check_laminar(arcs: list[Pair], size: int, what: str) -> None:
    masks = [(_arc_mask(p, q, size), (p, q)) for p, q in arcs]
    for x in range(len(masks)):
        for y in range(x + 1, len(masks)):
            mx, my = masks[x][0], masks[y][0]
            inter = mx & my
            if inter and inter != mx and inter != my:
                raise CrossingStrings(f"{what}s {masks[x][1]} and {masks[y][1]} cross")


def _check_cyclic_order(through: list[Pair]) -> None:
    outs = [b for _, b in through]
    k = len(outs)
    if k < 3:
        return
    descents = sum(1 for r in range(k) if outs[(r + 1) % k] < outs[r])
    if descents != 1:
        raise CrossingStrings("through strings do not preserve cyclic order")


def tangle_from_json(data: dict) -> AtlTangle:
    return validate_tangle(data["inner"], data["outer"], data.get("pairs", []), data.get("loops", 0))


def morphism_from_json(data: dict) -> AtlMorphism:
    c_plus = int(data.get("c_plus", 0))
    c_minus = int(data.get("c_minus", 0))
    if c_plus < 0 or c_minus < 0:
        raise NotPerfectMatching("loop counters must be non-negative")
    return AtlMorphism(tangle_from_json(data), c_plus, c_minus)


# ---------------------------------------------------------------------------
# identities and generators


def identity_tangle(obj: BoundaryObject) -> AtlTangle:
    obj = BoundaryObject.parse(obj)
    return AtlTangle(obj, obj, through=tuple((j, j) for j in range(1, obj.points + 1)))


def identity_morphism(obj: BoundaryObject | str | int) -> AtlMorphism:
    return AtlMorphism(identity_tangle(BoundaryObject.parse(obj)))


def _cap_tangle(n: int, i: int) -> AtlTangle:
    """The tangle ``a_i`` from ``N(n)`` down to the object with one fewer pair."""
    size = 2 * n
    partner = i % size + 1
    if n == 1:
        target = ZERO_PLUS if i == 1 else ZERO_MINUS
        return AtlTangle(N(1), target, caps=((i, partner),))
    rest = [j for j in range(1, size + 1) if j not in (i, partner)]
    first = 3 if i == 1 else (size - 1 if i == size else 1)
    start = rest.index(first)
    rest = rest[start:] + rest[:start]
    through = tuple(sorted((a, b) for b, a in enumerate(rest, start=1)))
    return AtlTangle(N(n), N(n - 1), caps=((i, partner),), through=through)


def tau_tangle(n: int, power: int = 1) -> AtlTangle:
    size = 2 * n
    shift = (2 * power) % size
    return AtlTangle(N(n), N(n), through=tuple((j, (j - 1 + shift) % size + 1) for j in range(1, size + 1)))


def generator(kind: str, index: int | None, at: BoundaryObject | str | int) -> AtlMorphism:
    """Distinguished tangles ``a_i``, ``b_i``, ``t`` and the loop scalars at ``at``.

    ``at`` is always the source object.
    """
    at = BoundaryObject.parse(at)
    kind = {"delta+": "delta_plus", "d+": "delta_plus", "delta-": "delta_minus", "d-": "delta_minus"}.get(kind, kind)
    if kind == "delta_plus":
        return AtlMorphism(identity_tangle(at), 1, 0)
    if kind == "delta_minus":
        return AtlMorphism(identity_tangle(at), 0, 1)
    if kind == "id":
        return identity_morphism(at)
    if kind == "t":
        if at.is_zero:
            raise IndexOutOfRange(f"t is not defined at {at}")
        return AtlMorphism(tau_tangle(at.n, 1 if index is None else index))
    if index is None:
        raise IndexOutOfRange(f"{kind} needs an index")
    if kind == "a":
        if at.is_zero:
            raise IndexOutOfRange(f"a_{index} is not defined at {at}")
        if not 1 <= index <= at.points:
            raise IndexOutOfRange(f"a_{index} needs 1 <= i <= {at.points} at {at}")
        return AtlMorphism(_cap_tangle(at.n, index))
    if kind == "b":
        if at.is_zero:
            wanted = 1 if at.sign > 0 else 2
            if index != wanted:
                raise WrongObjectForSign(f"only b_{wanted} starts at {at}")
            return involute(AtlMorphism(_cap_tangle(1, index)))
        if not 1 <= index <= at.points + 2:
            raise IndexOutOfRange(f"b_{index} needs 1 <= i <= {at.points + 2} at {at}")
        return involute(AtlMorphism(_cap_tangle(at.n + 1, index)))
    raise ValueError(f"unknown generator kind {kind!r}")


# ---------------------------------------------------------------------------
# involution


def involute_tangle(t: AtlTangle) -> AtlTangle:
    return AtlTangle(
        t.outer,
        t.inner,
        caps=t.cups,
        cups=t.caps,
        through=tuple(sorted((b, a) for a, b in t.through)),
        loops=t.loops,
    )


def involute(m: AtlMorphism) -> AtlMorphism:
    """Reflect across the annulus core: sides swap, indices and counters stay."""
    return AtlMorphism(involute_tangle(m.tangle), m.c_plus, m.c_minus)


def equal(x: AtlMorphism, y: AtlMorphism) -> bool:
    return x == y


# ---------------------------------------------------------------------------
# composition


@dataclass
class _Glue:
    """Working state for gluing two tangles along the middle circle.

    Angles are integers in units of ``1/unit`` of a full clockwise turn.
    """

    inner: BoundaryObject
    middle: BoundaryObject
    outer: BoundaryObject
    unit: int = 0
    # node -> (other node, displacement travelling from node to other)
    lower: dict = field(default_factory=dict)
    upper: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        sizes = [max(o.n, 1) for o in (self.inner, self.middle, self.outer)]
        self.unit = 4 * math.lcm(*sizes)

    def angle(self, obj: BoundaryObject, j: int) -> int:
        return (2 * j - 1) * self.unit // (4 * obj.n)

    def step(self, obj: BoundaryObject) -> int:
        return self.unit // (2 * obj.n)

    def add_arc(self, table: dict, side: str, obj: BoundaryObject, p: int, q: int) -> None:
        d = ((q - p) % obj.points) * self.step(obj)
        table[(side, p)] = ((side, q), d)
        table[(side, q)] = ((side, p), -d)

    def add_through(self, table: dict, lo_side: str, lo: BoundaryObject, hi_side: str, hi: BoundaryObject, through) -> None:
        wraps = 0
        prev = None
        for a, b in through:
            if prev is not None and b < prev:
                wraps += 1
            prev = b
            d = self.angle(hi, b) + wraps * self.unit - self.angle(lo, a)
            table[(lo_side, a)] = ((hi_side, b), d)
            table[(hi_side, b)] = ((lo_side, a), -d)


def compose(outer_m: AtlMorphism, inner_m: AtlMorphism) -> AtlMorphism:
    """``outer_m`` after ``inner_m``: glue, trace strings, classify closed loops."""
    upper_t, lower_t = outer_m.tangle, inner_m.tangle
    if upper_t.inner != lower_t.outer:
        raise ObjectMismatch(f"cannot compose {upper_t.inner}<-{upper_t.outer} after {lower_t.inner}->{lower_t.outer}")
    g = _Glue(lower_t.inner, lower_t.outer, upper_t.outer)
    lo, mid, hi = g.inner, g.middle, g.outer
    for p, q in lower_t.caps:
        g.add_arc(g.lower, "i", lo, p, q)
    for p, q in lower_t.cups:
        g.add_arc(g.lower, "m", mid, p, q)
    g.add_through(g.lower, "i", lo, "m", mid, lower_t.through)
    for p, q in upper_t.caps:
        g.add_arc(g.upper, "m", mid, p, q)
    for p, q in upper_t.cups:
        g.add_arc(g.upper, "o", hi, p, q)
    g.add_through(g.upper, "m", mid, "o", hi, upper_t.through)

    caps: list[Pair] = []
    cups: list[Pair] = []
    through: list[Pair] = []
    done: set = set()
    visited: set = set()
    starts = [("i", j) for j in range(1, lo.points + 1)] + [("o", j) for j in range(1, hi.points + 1)]
    for start in starts:
        if start in done:
            continue
        table = g.lower if start[0] == "i" else g.upper
        node, disp = start, 0
        while True:
            node, d = table[node]
            disp += d
            if node[0] != "m":
                break
            visited.add(node)
            table = g.upper if table is g.lower else g.lower
        done.add(start)
        done.add(node)
        if start[0] == node[0]:
            if disp == 0:
                raise AssertionError("open string with zero displacement")
            pair = (start[1], node[1]) if disp > 0 else (node[1], start[1])
            (caps if start[0] == "i" else cups).append(pair)
        else:
            through.append((start[1], node[1]) if start[0] == "i" else (node[1], start[1]))

    new_loops = shaded_loops = unshaded_loops = 0
    for p0 in range(1, mid.points + 1):
        if ("m", p0) in visited:
            continue
        node, winding, cup_hits = ("m", p0), 0, 0
        while True:
            visited.add(node)
            node, d = g.upper[node]
            winding += d
            visited.add(node)
            nxt, d = g.lower[node]
            if nxt[0] != "m":
                raise AssertionError("closed cycle left the middle circle")
            winding += d
            # the lower cup from node to nxt covers interval p0 when p0 lies on its arc
            a, b = (node[1], nxt[1]) if d > 0 else (nxt[1], node[1])
            if _arc_mask(a, b, mid.points) >> (p0 - 1) & 1:
                cup_hits += 1
            node = nxt
            if node == ("m", p0):
                break
        if winding % g.unit:
            raise AssertionError("closed cycle with fractional winding")
        turns = winding // g.unit
        if abs(turns) > 1:
            raise AssertionError(f"closed cycle winds {turns} times")
        if turns:
            new_loops += 1
            continue
        inside_shaded = interval_shaded(p0) == (cup_hits % 2 == 1)
        if inside_shaded:
            shaded_loops += 1
        else:
            unshaded_loops += 1

    tangle = AtlTangle(
        lo,
        hi,
        tuple(sorted(caps)),
        tuple(sorted(cups)),
        tuple(sorted(through)),
        upper_t.loops + lower_t.loops + new_loops,
    )
    return AtlMorphism(
        tangle,
        outer_m.c_plus + inner_m.c_plus + shaded_loops,
        outer_m.c_minus + inner_m.c_minus + unshaded_loops,
    )


def compose_all(factors: Sequence[AtlMorphism], at: BoundaryObject | None = None) -> AtlMorphism:
    """Compose a right-to-left sequence (last factor applied first)."""
    if not factors:
        if at is None:
            raise ValueError("empty composite needs an object")
        return identity_morphism(at)
    result = factors[-1]
    for f in reversed(factors[:-1]):
        result = compose(f, result)
    return result


def revalidate(t: AtlTangle) -> AtlTangle:
    """Round-trip a tangle through validation; used as a consistency check."""
    return validate_tangle(t.inner, t.outer, t.pairs(), t.loops)
