"""The presented annular category: typed words, involution and rewriting to
standard form.

Words are written as in composition notation: the leftmost factor is applied
last.  Internally the rewriting works on index lists in application order
(first applied first), which is the order the relations are easiest to read in.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from typing import Sequence

from .errors import IndexOutOfRange, NotTypeI, ObjectMismatch, PreconditionViolated, WordSyntaxError
from .tangle_core import ZERO_MINUS, ZERO_PLUS, BoundaryObject, N

ALPHA = "alpha"
BETA = "beta"
TAU = "tau"
DELTA_PLUS = "delta_plus"
DELTA_MINUS = "delta_minus"
ID = "id"


def alpha_target(obj: BoundaryObject, i: int) -> BoundaryObject:
    if obj.n == 1:
        return ZERO_PLUS if i == 1 else ZERO_MINUS
    return N(obj.n - 1)


def beta_target(obj: BoundaryObject) -> BoundaryObject:
    return N(obj.n + 1)


def check_generator(kind: str, index: int | None, source: BoundaryObject) -> None:
    if kind == ALPHA:
        if source.is_zero or not 1 <= index <= source.points:
            raise IndexOutOfRange(f"a{index} does not exist at {source}")
    elif kind == BETA:
        if source.is_zero:
            wanted = 1 if source.sign > 0 else 2
            if index != wanted:
                raise IndexOutOfRange(f"only b{wanted} exists at {source}")
        elif not 1 <= index <= source.points + 2:
            raise IndexOutOfRange(f"b{index} does not exist at {source}")
    elif kind == TAU:
        if source.is_zero:
            raise IndexOutOfRange(f"t does not exist at {source}")
    elif kind not in (DELTA_PLUS, DELTA_MINUS, ID):
        raise ValueError(f"unknown generator kind {kind!r}")


@dataclass(frozen=True)
class Generator:
    kind: str
    index: int | None
    source: BoundaryObject

    def __post_init__(self) -> None:
        check_generator(self.kind, self.index, self.source)

    @property
    def target(self) -> BoundaryObject:
        if self.kind == ALPHA:
            return alpha_target(self.source, self.index)
        if self.kind == BETA:
            return beta_target(self.source)
        return self.source

    def __str__(self) -> str:
        return {
            ALPHA: f"a{self.index}",
            BETA: f"b{self.index}",
            TAU: "t",
            DELTA_PLUS: "d+",
            DELTA_MINUS: "d-",
            ID: "id",
        }[self.kind]


@dataclass(frozen=True)
class Word:
    """A composable chain of generators; ``factors[0]`` is applied last."""

    factors: tuple[Generator, ...]
    source: BoundaryObject
    target: BoundaryObject

    def __post_init__(self) -> None:
        obj = self.source
        for g in reversed(self.factors):
            if g.source != obj:
                raise ObjectMismatch(f"{g} starts at {g.source}, expected {obj}")
            obj = g.target
        if obj != self.target:
            raise ObjectMismatch(f"word ends at {obj}, not {self.target}")

    @classmethod
    def identity(cls, obj: BoundaryObject) -> Word:
        return cls((), obj, obj)

    @classmethod
    def from_applied(cls, source: BoundaryObject, gens: Sequence[tuple[str, int | None]]) -> Word:
        """Build from ``(kind, index)`` pairs listed in application order."""
        obj = source
        built = []
        for kind, index in gens:
            g = Generator(kind, index, obj)
            built.append(g)
            obj = g.target
        return cls(tuple(reversed(built)), source, obj)

    def applied(self) -> list[Generator]:
        return list(reversed(self.factors))

    def then(self, later: Word) -> Word:
        """``later`` composed after ``self``."""
        if later.source != self.target:
            raise ObjectMismatch(f"cannot apply a word at {later.source} after one ending at {self.target}")
        return Word(later.factors + self.factors, self.source, later.target)

    def __len__(self) -> int:
        return len(self.factors)

    def text(self) -> str:
        """Grammar text; ``t`` runs are collapsed to ``t^k``."""
        out: list[str] = []
        run = 0
        for g in self.factors:
            if g.kind == TAU:
                run += 1
                continue
            if run:
                out.append("t" if run == 1 else f"t^{run}")
                run = 0
            out.append(str(g))
        if run:
            out.append("t" if run == 1 else f"t^{run}")
        return " ".join(out)

    def __str__(self) -> str:
        return self.text() or "id"


_TOKEN = re.compile(r"\S+")
_TERM = re.compile(r"^(?:a(\d+)|b(\d+)|t|t\^(-?\d+)|d\+|d-|id)$")


def parse_word(text: str, at: BoundaryObject | str | int) -> Word:
    """Parse ``term (" " term)*``; the source object ``at`` is given separately."""
    at = BoundaryObject.parse(at)
    tokens = [(m.start(), m.group()) for m in _TOKEN.finditer(text)]
    parsed = []
    for pos, tok in tokens:
        m = _TERM.match(tok)
        if not m:
            raise WordSyntaxError(f"unexpected term {tok!r}", position=pos)
        parsed.append((pos, tok, m))
    obj = at
    built: list[Generator] = []
    for pos, tok, m in reversed(parsed):
        try:
            if m.group(1) is not None:
                gens = [Generator(ALPHA, int(m.group(1)), obj)]
            elif m.group(2) is not None:
                gens = [Generator(BETA, int(m.group(2)), obj)]
            elif tok == "t" or m.group(3) is not None:
                if obj.is_zero:
                    raise IndexOutOfRange(f"t does not exist at {obj}")
                power = 1 if tok == "t" else int(m.group(3)) % obj.n
                gens = [Generator(TAU, None, obj)] * power
            elif tok == "d+":
                gens = [Generator(DELTA_PLUS, None, obj)]
            elif tok == "d-":
                gens = [Generator(DELTA_MINUS, None, obj)]
            else:
                gens = []
        except IndexOutOfRange as exc:
            raise IndexOutOfRange(exc.message, position=pos) from None
        for g in gens:
            built.append(g)
            obj = g.target
    return Word(tuple(reversed(built)), at, obj)


def involute_word(w: Word) -> Word:
    out = []
    for g in w.factors:  # applied last first, so this builds the reversed word in application order
        if g.kind == ALPHA:
            out.append((BETA, g.index))
        elif g.kind == BETA:
            out.append((ALPHA, g.index))
        elif g.kind == TAU:
            out.extend([(TAU, None)] * (g.source.n - 1))
        else:
            out.append((g.kind, g.index))
    return Word.from_applied(w.target, out)


# ---------------------------------------------------------------------------
# Type I words as application-ordered index lists


def objects_along(m: BoundaryObject, applied: Sequence[int]) -> list[BoundaryObject]:
    """Source object of each ``a`` in ``applied``, plus the final target."""
    objs = [m]
    for i in applied:
        check_generator(ALPHA, i, objs[-1])
        objs.append(alpha_target(objs[-1], i))
    return objs


def _is_ordered(m: int, applied: Sequence[int]) -> bool:
    for t, x in enumerate(applied, start=1):
        if x >= 2 * (m - t) + 2:
            return False
        if t > 1 and applied[t - 2] <= x:
            return False
    return True


def cap_intervals(m: BoundaryObject | int, applied: Sequence[int]) -> list[tuple[int, int]]:
    """Each ``a`` of the word as a cap on the labels ``1..2m`` of the source."""
    m = BoundaryObject.parse(m)
    labels = list(range(1, m.points + 1))
    caps = []
    for x in applied:
        check_generator(ALPHA, x, N(len(labels) // 2) if labels else m)
        if x == len(labels):
            caps.append((labels[-1], labels[0]))
            del labels[-1], labels[0]
        else:
            caps.append((labels[x - 1], labels[x]))
            del labels[x - 1 : x + 1]
    return caps


def _outermost(caps: Sequence[tuple[int, int]]) -> list[int]:
    """Positions of caps not nested inside another cap of the list."""
    return [t for t, (a, b) in enumerate(caps) if not any(c < a and b < d for c, d in caps)]


def _stray_group(m: int, body: Sequence[int]) -> list[int] | None:
    """Positions of the first nested group that neither continues the run of
    caps from label 1 nor the run ending at label 2m; None if there is none."""
    caps = cap_intervals(m, body)
    top = {caps[t]: t for t in _outermost(caps)}
    attached = set()
    edge = 1
    while any(a == edge for a, _ in top):
        a, b = next(c for c in top if c[0] == edge)
        attached.add(top[(a, b)])
        edge = b + 1
    edge = 2 * m
    while any(b == edge for _, b in top):
        a, b = next(c for c in top if c[1] == edge)
        attached.add(top[(a, b)])
        edge = a - 1
    stray = sorted(t for t in top.values() if t not in attached)
    if not stray:
        return None
    a, b = caps[stray[0]]
    return [t for t, (c, d) in enumerate(caps) if a <= c and d <= b]


def is_irreducible_word(m: BoundaryObject | int, applied: Sequence[int]) -> bool:
    """Syntactic irreducibility of an ``a``-word in application order.

    Either the word is ordered, or it is an ordered body followed by the star
    cap, where the body's caps fill a run of labels from 1 and a run ending at
    2m (nesting allowed inside each run).
    """
    m = BoundaryObject.parse(m).n
    if not applied:
        return False
    if _is_ordered(m, applied):
        return True
    *body, q = applied
    if q != 2 * (m - len(body)) or not _is_ordered(m, body):
        return False
    return _stray_group(m, body) is None


def sort_type1(m: BoundaryObject, applied: Sequence[int]) -> list[int]:
    """Apply relation (1') ``a_j a_i -> a_i a_{j+2}`` (j >= i) until it no longer
    fires; the pair where ``a_j`` is the star cap above ``a_1`` is left alone."""
    a = list(applied)
    objs = objects_along(m, a)
    changed = True
    while changed:
        changed = False
        for t in range(len(a) - 1):
            i, j = a[t], a[t + 1]
            if j >= i and not (i == 1 and j == objs[t + 1].points):
                a[t], a[t + 1] = j + 2, i
                changed = True
    return a


@dataclass
class IrredResult:
    """``a_{2n} w = u2 u1`` with ``u1`` irreducible (both in application order)."""

    u1: list[int]
    u2: list[int]
    steps: list[str] = field(default_factory=list)


def irredalg(m: BoundaryObject, ordered: Sequence[int]) -> IrredResult:
    """Make ``a_{2n}`` applied after the ordered word ``ordered`` irreducible.

    Each round takes the first nested group of caps that is attached to
    neither end of the label run, moves it past the later caps with
    relation (1) and then past the star cap with relation (1').
    """
    m = BoundaryObject.parse(m)
    body = list(ordered)
    if not _is_ordered(m.n, body):
        raise PreconditionViolated(f"{body} is not ordered at {m}")
    n = m.n - len(body)
    if n < 1:
        raise PreconditionViolated("no star cap exists after the ordered word")
    after: list[int] = []
    steps = []
    while (group := _stray_group(m.n, body)) is not None:
        for pos in reversed(group):
            # carry body[pos] to the end of the unmoved part with relation (1)
            stop = len(body) - (len(group) - group.index(pos))
            for t in range(pos, stop):
                z, w = body[t], body[t + 1]
                if not w < z - 1:
                    raise PreconditionViolated(f"relation (1) cannot move a{z} past a{w}")
                body[t], body[t + 1] = w, z - 2
        moved = body[len(body) - len(group) :]
        del body[len(body) - len(group) :]
        for y in reversed(moved):
            if y > 2 * n or y == 1:
                raise PreconditionViolated(f"relation (1') cannot move a{2 * n} past a{y}")
            n += 1
        steps.append(f"moved {moved} past the star cap, now a{2 * n}")
        after = moved + after
    return IrredResult(body + [2 * n], after, steps)


def standard_decomposition(m: BoundaryObject, applied: Sequence[int]) -> list[list[int]]:
    """Irreducible pieces of an ``a``-word, first applied first."""
    m = BoundaryObject.parse(m)
    pieces: list[list[int]] = []
    current = list(applied)
    obj = m
    while current:
        current = sort_type1(obj, current)
        objs = objects_along(obj, current)
        star = next((t for t, x in enumerate(current) if x == objs[t].points), None)
        if star is None:
            pieces.append(current)
            break
        prefix = current[:star]
        result = irredalg(obj, prefix)
        pieces.append(result.u1)
        obj = objects_along(obj, result.u1)[-1]
        current = result.u2 + current[star + 1 :]
    return pieces


def standardize_type1(w: Word) -> list[Word]:
    """Standard decomposition of a Type I word into irreducible words."""
    if any(g.kind not in (ALPHA, ID) for g in w.factors):
        raise NotTypeI(f"{w} contains non-alpha factors")
    applied = [g.index for g in w.applied() if g.kind == ALPHA]
    out = []
    obj = w.source
    for piece in standard_decomposition(w.source, applied):
        word = Word.from_applied(obj, [(ALPHA, i) for i in piece])
        out.append(word)
        obj = word.target
    return out


def reduce_irredalg(w: Word) -> tuple[Word, Word]:
    """Split ``a_{2n} w'`` (``w'`` ordered) into ``u2 u1`` with ``u1`` irreducible."""
    applied = w.applied()
    if not applied or any(g.kind != ALPHA for g in applied):
        raise PreconditionViolated("expected a nonempty word of a's")
    last = applied[-1]
    if last.index != last.source.points:
        raise PreconditionViolated(f"leftmost factor {last} is not a{last.source.points}")
    result = irredalg(w.source, [g.index for g in applied[:-1]])
    u1 = Word.from_applied(w.source, [(ALPHA, i) for i in result.u1])
    u2 = Word.from_applied(u1.target, [(ALPHA, i) for i in result.u2])
    return u1, u2


# ---------------------------------------------------------------------------
# standard forms


@dataclass(frozen=True)
class StandardForm:
    c_plus: int
    c_minus: int
    w3: Word
    w2: Word
    w1: Word

    @property
    def source(self) -> BoundaryObject:
        return self.w1.source

    @property
    def target(self) -> BoundaryObject:
        return self.w3.target

    def to_word(self) -> Word:
        deltas = [(DELTA_MINUS, None)] * self.c_minus + [(DELTA_PLUS, None)] * self.c_plus
        scal = Word.from_applied(self.target, deltas)
        return self.w1.then(self.w2).then(self.w3).then(scal)

    def to_json(self) -> dict:
        return {
            "c_plus": self.c_plus,
            "c_minus": self.c_minus,
            "w3": self.w3.text(),
            "w2": self.w2.text(),
            "w1": self.w1.text(),
        }

    def __str__(self) -> str:
        parts = ["d+"] * self.c_plus + ["d-"] * self.c_minus
        parts += [x.text() for x in (self.w3, self.w2, self.w1) if x.factors]
        return " ".join(parts) or "id"


@dataclass
class _Normalizer:
    """Incremental form ``d+^c+ d-^c- w3 w2 w1`` built one generator at a time."""

    source: BoundaryObject
    c_plus: int = 0
    c_minus: int = 0
    w1: list[int] = field(default_factory=list)
    mid: BoundaryObject | None = None  # target of w1
    tau_power: int = 0
    sigmas: list[int] = field(default_factory=list)  # +1 for a2 b1, -1 for a1 b2
    low: BoundaryObject | None = None  # target of w2
    w3: list[int] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.mid = self.source
        self.low = self.source

    def w3_source(self, pos: int) -> BoundaryObject:
        if pos == 0:
            return self.low
        return N(self.low.n + pos)

    @property
    def target(self) -> BoundaryObject:
        return self.w3_source(len(self.w3))

    def push_tau(self, pos: int) -> None:
        """A single ``t`` sits after ``w3[:pos]``; move it toward ``w2``."""
        while pos > 0:
            c = self.w3_source(pos - 1)
            y = self.w3[pos - 1]
            if c.is_zero:
                return
            if y <= c.points:
                self.w3[pos - 1] = y + 2
                pos -= 1
                continue
            self.w3[pos - 1] = y - c.points
            return
        if self.low.n > 1:
            self.tau_power = (self.tau_power + 1) % self.low.n

    def add_alpha(self, q: int) -> None:
        pos = len(self.w3)
        i = q
        while pos > 0:
            c = self.w3_source(pos - 1)
            y = self.w3[pos - 1]
            if c.is_zero:
                del self.w3[pos - 1]
                if i == y:
                    if i == 1:
                        self.c_plus += 1
                    else:
                        self.c_minus += 1
                else:
                    self.sigmas.append(1 if i == 2 else -1)
                    self.low = ZERO_MINUS if self.low == ZERO_PLUS else ZERO_PLUS
                return
            n = c.n
            if (i, y) == (1, 2 * n + 2):
                del self.w3[pos - 1]
                for _ in range(n - 1):
                    self.push_tau(pos - 1)
                return
            if (i, y) == (2 * n + 2, 1):
                del self.w3[pos - 1]
                self.push_tau(pos - 1)
                return
            if i == y - 1 or i == y + 1:
                del self.w3[pos - 1]
                return
            if i == y:
                del self.w3[pos - 1]
                if i % 2:
                    self.c_plus += 1
                else:
                    self.c_minus += 1
                return
            if i < y - 1:
                self.w3[pos - 1] = y - 2
            else:
                i -= 2
            pos -= 1
        # the a reached w2, which is a power of t at low = [k]
        k = self.low.n
        emitted = 0
        for _ in range(self.tau_power):
            if i >= 3:
                i -= 2
                emitted += 1
            else:
                i += 2 * k - 2
        self.w1.append(i)
        self.mid = alpha_target(self.low, i)
        self.low = self.mid
        self.tau_power = emitted % self.low.n if not self.low.is_zero else 0

    def add(self, g: Generator) -> None:
        if g.source != self.target:
            raise ObjectMismatch(f"{g} applied at {self.target}")
        if g.kind == DELTA_PLUS:
            self.c_plus += 1
        elif g.kind == DELTA_MINUS:
            self.c_minus += 1
        elif g.kind == BETA:
            self.w3.append(g.index)
        elif g.kind == TAU:
            self.push_tau(len(self.w3))
        elif g.kind == ALPHA:
            self.add_alpha(g.index)

    def raw_words(self) -> tuple[Word, Word, Word]:
        w1 = Word.from_applied(self.source, [(ALPHA, i) for i in self.w1])
        if self.mid.is_zero:
            gens = []
            for s in self.sigmas:
                gens += [(BETA, 1), (ALPHA, 2)] if s > 0 else [(BETA, 2), (ALPHA, 1)]
        else:
            gens = [(TAU, None)] * self.tau_power
        w2 = Word.from_applied(self.mid, gens)
        w3 = Word.from_applied(self.low, [(BETA, y) for y in self.w3])
        return w3, w2, w1

    def result(self) -> StandardForm:
        w1_pieces = standard_decomposition(self.source, self.w1)
        w1 = Word.from_applied(self.source, [(ALPHA, i) for piece in w1_pieces for i in piece])
        _, w2, _ = self.raw_words()
        target = self.target
        mirrored = standard_decomposition(target, list(reversed(self.w3)))
        flat = [i for piece in mirrored for i in piece]
        w3 = Word.from_applied(self.low, [(BETA, y) for y in reversed(flat)])
        return StandardForm(self.c_plus, self.c_minus, w3, w2, w1)


def _debug_enabled() -> bool:
    return os.environ.get("ANNTL_DEBUG", "") not in ("", "0")


def standard_form(w: Word, check: bool | None = None) -> StandardForm:
    """Rewrite ``w`` to ``d+^c+ d-^c- w3 w2 w1`` using the defining relations.

    With ``check`` (or ``ANNTL_DEBUG=1``) the tangle image is compared after
    every generator, so a relation applied wrongly is caught where it happens.
    """
    if check is None:
        check = _debug_enabled()
    state = _Normalizer(w.source)
    if check:
        from .functors import eval_F

        prefix = Word.identity(w.source)
    for g in w.applied():
        state.add(g)
        if check:
            prefix = prefix.then(Word((g,), g.source, g.target))
            w3, w2, w1 = state.raw_words()
            got = StandardForm(state.c_plus, state.c_minus, w3, w2, w1).to_word()
            if eval_F(got) != eval_F(prefix):
                raise AssertionError(f"rewriting changed the tangle after {g}: {prefix} -> {got}")
    result = state.result()
    if check and eval_F(result.to_word()) != eval_F(w):
        raise AssertionError(f"type I/III standardization changed the tangle of {w}")
    return result


def words_equal(v: Word, w: Word) -> bool:
    if v.source != w.source or v.target != w.target:
        raise ObjectMismatch(f"{v.source}->{v.target} vs {w.source}->{w.target}")
    return standard_form(v) == standard_form(w)
