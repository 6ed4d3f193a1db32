"""Functors between the presented category and annular tangles.

``eval_F`` sends a word to its tangle, ``read_G`` reads a tangle back as a
standard-form word.  The module also carries the cyclic category (its words,
standard forms and the two embeddings H+ and H-), the relabeling into the
pushout presentation, and the relation checker that exercises all of them
against the diagram calculus.
"""

from __future__ import annotations

import copy
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .errors import IndexOutOfRange, ObjectMismatch, WordSyntaxError
from .presentation import (
    ALPHA,
    BETA,
    DELTA_MINUS,
    DELTA_PLUS,
    ID,
    TAU,
    Generator,
    StandardForm,
    Word,
    _Normalizer,
    involute_word,
    standard_form,
)
from .tangle_analysis import decompose, irreducible_factorization
from .tangle_core import (
    ZERO_MINUS,
    ZERO_PLUS,
    AtlMorphism,
    AtlTangle,
    BoundaryObject,
    N,
    compose,
    generator,
    identity_morphism,
    involute_tangle,
)

_KIND_NAMES = {ALPHA: "a", BETA: "b", TAU: "t", DELTA_PLUS: "delta_plus", DELTA_MINUS: "delta_minus", ID: "id"}


@lru_cache(maxsize=None)
def generator_image(kind: str, index: int | None, source: BoundaryObject) -> AtlMorphism:
    return generator(_KIND_NAMES[kind], index, source)


def eval_F(w: Word, table: Callable[[str, int | None, BoundaryObject], AtlMorphism] | None = None) -> AtlMorphism:
    """Tangle of a word; ``table`` overrides the generator images (for negative controls)."""
    table = table or generator_image
    result = identity_morphism(w.source)
    for g in w.applied():
        result = compose(table(g.kind, g.index, g.source), result)
    return result


# ---------------------------------------------------------------------------
# reading tangles back as words


def _type1_word(t: AtlTangle) -> Word:
    written = [i for factor in irreducible_factorization(t) for i in factor]
    return Word.from_applied(t.inner, [(ALPHA, i) for i in reversed(written)])


def _type2_word(t: AtlTangle) -> Word:
    if t.through:
        # tau^k sends inner point 1 to outer point 2k+1
        first = dict(t.through)[1]
        power = (first - 1) // 2
        return Word.from_applied(t.inner, [(TAU, None)] * power)
    gens: list[tuple[str, int]] = []
    obj = t.inner
    for _ in range(t.loops):
        if obj == ZERO_PLUS:
            gens += [(BETA, 1), (ALPHA, 2)]
            obj = ZERO_MINUS
        else:
            gens += [(BETA, 2), (ALPHA, 1)]
            obj = ZERO_PLUS
    return Word.from_applied(t.inner, gens)


def read_G_form(m: AtlMorphism) -> StandardForm:
    parts = decompose(m)
    w1 = _type1_word(parts.type1)
    w2 = _type2_word(parts.type2)
    w3 = involute_word(_type1_word(involute_tangle(parts.type3)))
    return StandardForm(m.c_plus, m.c_minus, w3, w2, w1)


def read_G(m: AtlMorphism) -> Word:
    """The standard-form word of a morphism; ``eval_F(read_G(m)) == m``."""
    return read_G_form(m).to_word()


# ---------------------------------------------------------------------------
# the cyclic category


@dataclass(frozen=True)
class CyclicGenerator:
    kind: str  # "d", "s" or "t"
    index: int | None
    degree: int

    def __post_init__(self) -> None:
        n = self.degree
        if n < 0:
            raise IndexOutOfRange(f"negative degree {n}")
        if self.kind == "d" and not (n >= 1 and 0 <= self.index <= n):
            raise IndexOutOfRange(f"d{self.index} does not exist in degree {n}")
        if self.kind == "s" and not -1 <= self.index <= n:
            raise IndexOutOfRange(f"s{self.index} does not exist in degree {n}")
        if self.kind not in ("d", "s", "t"):
            raise ValueError(f"unknown cyclic generator {self.kind!r}")

    @property
    def target(self) -> int:
        return self.degree + {"d": -1, "s": 1, "t": 0}[self.kind]

    def __str__(self) -> str:
        return "t" if self.kind == "t" else f"{self.kind}{self.index}"


@dataclass(frozen=True)
class CyclicWord:
    factors: tuple[CyclicGenerator, ...]  # leftmost applied last
    source: int
    target: int

    @classmethod
    def from_applied(cls, source: int, gens: Sequence[tuple[str, int | None]]) -> CyclicWord:
        deg = source
        built = []
        for kind, index in gens:
            g = CyclicGenerator(kind, index, deg)
            built.append(g)
            deg = g.target
        return cls(tuple(reversed(built)), source, deg)

    def applied(self) -> list[CyclicGenerator]:
        return list(reversed(self.factors))

    def then(self, later: CyclicWord) -> CyclicWord:
        if later.source != self.target:
            raise ObjectMismatch(f"degree {later.source} after degree {self.target}")
        return CyclicWord(later.factors + self.factors, self.source, later.target)

    def text(self) -> str:
        return " ".join(str(g) for g in self.factors)

    def __str__(self) -> str:
        return self.text() or "id"


_CTERM = re.compile(r"^(?:([ds])_?(-?\d+)|t(?:\^(\d+))?|id)$")


def parse_cyclic_word(text: str, degree: int) -> CyclicWord:
    tokens = [(m.start(), m.group()) for m in re.finditer(r"\S+", text)]
    gens: list[tuple[int, str, int | None]] = []
    for pos, tok in tokens:
        m = _CTERM.match(tok)
        if not m:
            raise WordSyntaxError(f"unexpected term {tok!r}", position=pos)
        if m.group(1):
            gens.append((pos, m.group(1), int(m.group(2))))
        elif tok.startswith("t"):
            gens += [(pos, "t", None)] * (int(m.group(3)) if m.group(3) else 1)
    deg = degree
    built = []
    for pos, kind, index in reversed(gens):
        try:
            g = CyclicGenerator(kind, index, deg)
        except IndexOutOfRange as exc:
            raise IndexOutOfRange(exc.message, position=pos) from None
        built.append(g)
        deg = g.target
    return CyclicWord(tuple(reversed(built)), degree, deg)


@dataclass(frozen=True)
class CyclicStandardForm:
    """``w3 w2 w1``: s-indices increasing in application order, ``t^k`` with
    ``0 <= k <= degree``, d-indices decreasing in application order."""

    w3: CyclicWord
    w2: CyclicWord
    w1: CyclicWord

    def to_word(self) -> CyclicWord:
        return self.w1.then(self.w2).then(self.w3)

    def __str__(self) -> str:
        return " ".join(x.text() for x in (self.w3, self.w2, self.w1) if x.factors) or "id"


def cyclic_standard_form(w: CyclicWord) -> CyclicStandardForm:
    """Rewrite with the cyclic relations, treating ``s-1`` as a generator.

    ``t`` moves right through the s's (``t s_j = s_{j+1} t``, ``t s_n = s_{-1}``,
    ``t s_{-1} = s_0 t``); a ``d`` moves right through the s's with the face and
    degeneracy relations and through ``t`` with ``d_i t = t d_{i-1}``,
    ``d_0 t = d_n``.
    """
    d_word: list[int] = []  # application order, degrees from w.source down
    mid = w.source
    power = 0
    s_word: list[int] = []  # application order from mid upward

    def push_t(pos: int) -> None:
        nonlocal power
        while pos > 0:
            deg = mid + pos - 1  # source degree of s_word[pos - 1]
            j = s_word[pos - 1]
            if j == deg:
                s_word[pos - 1] = -1
                return
            s_word[pos - 1] = j + 1
            pos -= 1
        power = (power + 1) % (mid + 1)

    for g in w.applied():
        if g.kind == "s":
            s_word.append(g.index)
        elif g.kind == "t":
            push_t(len(s_word))
        else:
            i = g.index
            pos = len(s_word)
            absorbed = False
            while pos > 0:
                deg = mid + pos - 1
                j = s_word[pos - 1]
                if j == -1:
                    if i == 0:
                        del s_word[pos - 1]
                        absorbed = True
                        break
                    if i == deg + 1:
                        del s_word[pos - 1]
                        push_t(pos - 1)
                        absorbed = True
                        break
                    i -= 1
                elif i < j:
                    s_word[pos - 1] = j - 1
                elif i in (j, j + 1):
                    del s_word[pos - 1]
                    absorbed = True
                    break
                else:
                    i -= 1
                pos -= 1
            if absorbed:
                continue
            emitted = 0
            for _ in range(power):
                if i >= 1:
                    i -= 1
                    emitted += 1
                else:
                    i = mid
            d_word.append(i)
            mid -= 1
            power = emitted % (mid + 1)
    d_word = _sort_faces(w.source, d_word)
    s_word = _sort_degeneracies(s_word)
    w1 = CyclicWord.from_applied(w.source, [("d", i) for i in d_word])
    w2 = CyclicWord.from_applied(mid, [("t", None)] * power)
    w3 = CyclicWord.from_applied(mid, [("s", j) for j in s_word])
    return CyclicStandardForm(w3, w2, w1)


def _sort_faces(source: int, applied: list[int]) -> list[int]:
    # written d_x d_y with x >= y becomes d_y d_{x+1}
    a = list(applied)
    changed = True
    while changed:
        changed = False
        for t in range(len(a) - 1):
            y, x = a[t], a[t + 1]
            if x >= y:
                a[t], a[t + 1] = x + 1, y
                changed = True
    return a


def _sort_degeneracies(applied: list[int]) -> list[int]:
    # written s_i s_j with i <= j becomes s_{j+1} s_i
    a = list(applied)
    changed = True
    while changed:
        changed = False
        for t in range(len(a) - 1):
            j, i = a[t], a[t + 1]
            if i <= j:
                a[t], a[t + 1] = i, j + 1
                changed = True
    return a


def _embed(w: CyclicWord, sign: int) -> Word:
    gens: list[tuple[str, int | None]] = []
    for g in w.applied():
        n = g.degree
        if g.kind == "d":
            gens.append((ALPHA, 2 * g.index + (1 if sign > 0 else 2)))
        elif g.kind == "t":
            gens.append((TAU, None))
        elif g.index == -1:
            if sign > 0:
                gens += [(BETA, 2 * n + 2), (TAU, None)]
            else:
                gens.append((BETA, 1))
        else:
            gens.append((BETA, 2 * g.index + (2 if sign > 0 else 3)))
    return Word.from_applied(N(w.source + 1), gens)


def embed_Hplus(w: CyclicWord) -> Word:
    return _embed(w, +1)


def embed_Hminus(w: CyclicWord) -> Word:
    return _embed(w, -1)


# ---------------------------------------------------------------------------
# pushout presentation


@dataclass(frozen=True)
class QGenerator:
    """A generator of the pushout presentation: ``d``, ``s``, ``d*``, ``s*``,
    ``t`` or a coupling constant, with its source object (an integer degree
    or ``"+"``/``"-"``)."""

    name: str
    index: int | None
    source: int | str

    def __str__(self) -> str:
        if self.name in ("t", "d+", "d-"):
            return self.name
        return f"{self.name}{self.index}"


@dataclass(frozen=True)
class QWord:
    factors: tuple[QGenerator, ...]  # leftmost applied last
    source: int | str
    target: int | str

    def text(self) -> str:
        return " ".join(str(g) for g in self.factors)

    def __str__(self) -> str:
        return self.text() or "id"


def _q_object(obj: BoundaryObject) -> int | str:
    # the shaded-core object 0- plays the role of the augmentation [+]
    if obj.is_zero:
        return "+" if obj == ZERO_MINUS else "-"
    return obj.n - 1


def _a_object(q: int | str) -> BoundaryObject:
    if q == "+":
        return ZERO_MINUS
    if q == "-":
        return ZERO_PLUS
    return N(q + 1)


def _psi(g: Generator) -> QGenerator:
    q = _q_object(g.source)
    i = g.index
    if g.kind == ALPHA:
        return QGenerator("s*", (i - 3) // 2, q) if i % 2 else QGenerator("d", (i - 2) // 2, q)
    if g.kind == BETA:
        return QGenerator("s", (i - 3) // 2, q) if i % 2 else QGenerator("d*", (i - 2) // 2, q)
    if g.kind == TAU:
        return QGenerator("t", None, q)
    if g.kind == DELTA_PLUS:
        return QGenerator("d+", None, q)
    if g.kind == DELTA_MINUS:
        return QGenerator("d-", None, q)
    raise ValueError("identity generators are dropped by the relabeling")


def to_pushout_presentation(w: Word) -> QWord:
    factors = tuple(_psi(g) for g in w.factors if g.kind != ID)
    return QWord(factors, _q_object(w.source), _q_object(w.target))


def _psi_inverse(g: QGenerator) -> tuple[str, int | None]:
    i = g.index
    return {
        "d": lambda: (ALPHA, 2 * i + 2),
        "s*": lambda: (ALPHA, 2 * i + 3),
        "s": lambda: (BETA, 2 * i + 3),
        "d*": lambda: (BETA, 2 * i + 2),
        "t": lambda: (TAU, None),
        "d+": lambda: (DELTA_PLUS, None),
        "d-": lambda: (DELTA_MINUS, None),
    }[g.name]()


def from_pushout_presentation(w: QWord) -> Word:
    gens = [_psi_inverse(g) for g in reversed(w.factors)]
    return Word.from_applied(_a_object(w.source), gens)


def q_word(source: int | str, applied: Sequence[tuple[str, int | None]]) -> QWord:
    """Build a pushout word from generators in application order; the objects
    are inferred through the relabeling, which also type-checks the word."""
    word = Word.from_applied(_a_object(source), [_psi_inverse(QGenerator(n, i, source)) for n, i in applied])
    return to_pushout_presentation(word)


# ---------------------------------------------------------------------------
# relation checking


@dataclass(frozen=True)
class RelationInstance:
    relation: str
    instance: str
    lhs: Word
    rhs: Word


@dataclass(frozen=True)
class RelationResult:
    relation: str
    instance: str
    status: str

    def to_json(self) -> dict:
        return {"relation": self.relation, "instance": self.instance, "status": self.status}


def _w(at: BoundaryObject, applied: Sequence[tuple[str, int | None]]) -> Word | None:
    """A word from application-ordered generators, or None if it does not type-check."""
    try:
        return Word.from_applied(at, applied)
    except (IndexOutOfRange, ObjectMismatch):
        return None


def _objects(max_n: int) -> list[BoundaryObject]:
    return [ZERO_PLUS, ZERO_MINUS] + [N(n) for n in range(1, max_n + 1)]


def _instance(rel: str, lhs: Word | None, rhs: Word | None) -> RelationInstance | None:
    if lhs is None or rhs is None or lhs.target != rhs.target:
        return None
    return RelationInstance(rel, f"{lhs} = {rhs} at {lhs.source}", lhs, rhs)


def presentation_relations(max_n: int) -> list[RelationInstance]:
    """Every instance of the defining and additional relations with n <= max_n."""
    out: list[RelationInstance | None] = []
    a, b, t = ALPHA, BETA, (TAU, None)
    for n in range(1, max_n + 1):
        at = N(n)
        # (1) a_i a_j = a_{j-2} a_i, a_j applied at [n]
        for j in range(1, 2 * n + 1):
            for i in range(1, j - 1):
                if (i, j) != (1, 2 * n) and n >= 2:
                    out.append(_instance("(1)", _w(at, [(a, j), (a, i)]), _w(at, [(a, i), (a, j - 2)])))
        # (2) b_i b_j = b_{j+2} b_i, b_j applied at [n]
        for j in range(1, 2 * n + 3):
            for i in range(1, j + 1):
                if (i, j) != (1, 2 * n + 2):
                    out.append(_instance("(2)", _w(at, [(b, j), (b, i)]), _w(at, [(b, i), (b, j + 2)])))
        out.append(_instance("(3)", _w(at, [t] * n), Word.identity(at)))
        for i in range(3, 2 * n + 1):
            out.append(_instance("(4)", _w(at, [t, (a, i)]), _w(at, [(a, i - 2), t])))
        for i in range(3, 2 * n + 3):
            out.append(_instance("(5)", _w(at, [t, (b, i)]), _w(at, [(b, i - 2), t])))
        # (6) a_i b_j at [n]
        for j in range(1, 2 * n + 3):
            for i in range(1, 2 * n + 3):
                lhs = _w(at, [(b, j), (a, i)])
                if (i, j) == (1, 2 * n + 2):
                    rhs = _w(at, [t] * (n - 1))
                elif (i, j) == (2 * n + 2, 1):
                    rhs = _w(at, [t])
                elif i < j - 1:
                    rhs = _w(at, [(a, i), (b, j - 2)])
                elif i in (j - 1, j + 1):
                    rhs = Word.identity(at)
                elif i == j:
                    rhs = _w(at, [(DELTA_PLUS if i % 2 else DELTA_MINUS, None)])
                else:
                    rhs = _w(at, [(a, i - 2), (b, j)])
                out.append(_instance("(6)", lhs, rhs))
        # additional relations
        out.append(_instance("additional (1)", _w(at, [t, (a, 1)]), _w(at, [(a, 2 * n - 1)])))
        out.append(_instance("additional (1)", _w(at, [t, (a, 2)]), _w(at, [(a, 2 * n)])))
        out.append(_instance("additional (2)", _w(at, [(b, 2 * n + 1), t]), _w(at, [(b, 1)])))
        out.append(_instance("additional (2)", _w(at, [(b, 2 * n + 2), t]), _w(at, [(b, 2)])))
        if n >= 2:
            out.append(_instance("additional (3)", _w(at, [t, (b, 1)]), _w(at, [(b, 2 * n - 1), t, t])))
            out.append(_instance("additional (3)", _w(at, [t, (b, 2)]), _w(at, [(b, 2 * n), t, t])))
    out.append(_instance("(6)", _w(ZERO_PLUS, [(b, 1), (a, 1)]), _w(ZERO_PLUS, [(DELTA_PLUS, None)])))
    out.append(_instance("(6)", _w(ZERO_MINUS, [(b, 2), (a, 2)]), _w(ZERO_MINUS, [(DELTA_MINUS, None)])))
    # (7) the coupling constants commute with every generator
    for obj in _objects(max_n):
        gens: list[tuple[str, int | None]] = []
        if obj.is_zero:
            gens.append((b, 1 if obj == ZERO_PLUS else 2))
        else:
            gens += [(a, i) for i in range(1, obj.points + 1)]
            gens += [(b, i) for i in range(1, obj.points + 3)]
            gens.append(t)
        for d in (DELTA_PLUS, DELTA_MINUS):
            for g in gens:
                out.append(_instance("(7)", _w(obj, [g, (d, None)]), _w(obj, [(d, None), g])))
    return [x for x in out if x is not None]


def _cyc(degree: int, applied: Sequence[tuple[str, int | None]]) -> CyclicWord | None:
    try:
        return CyclicWord.from_applied(degree, applied)
    except IndexOutOfRange:
        return None


def cyclic_relations(max_n: int) -> list[tuple[str, CyclicWord, CyclicWord]]:
    """Relations of the cyclic category (with the extra degeneracy), source degree < max_n."""
    out = []
    t = ("t", None)

    def add(name: str, lhs, rhs) -> None:
        if lhs is not None and rhs is not None and lhs.target == rhs.target:
            out.append((name, lhs, rhs))

    for n in range(0, max_n):
        # (1) d_i d_j = d_{j-1} d_i, i < j, d_j at degree n
        for j in range(0, n + 1):
            for i in range(0, j):
                add("(1)", _cyc(n, [("d", j), ("d", i)]), _cyc(n, [("d", i), ("d", j - 1)]))
        # (2) s_i s_j = s_{j+1} s_i, -1 <= i <= j
        for j in range(-1, n + 1):
            for i in range(-1, j + 1):
                add("(2)", _cyc(n, [("s", j), ("s", i)]), _cyc(n, [("s", i), ("s", j + 1)]))
        # (3) d_i s_j, s_j at degree n
        for j in range(0, n + 1):
            for i in range(0, n + 2):
                lhs = _cyc(n, [("s", j), ("d", i)])
                if i < j:
                    rhs = _cyc(n, [("d", i), ("s", j - 1)])
                elif i in (j, j + 1):
                    rhs = _cyc(n, [])
                else:
                    rhs = _cyc(n, [("d", i - 1), ("s", j)])
                add("(3)", lhs, rhs)
        add("(4)", _cyc(n, [t] * (n + 1)), _cyc(n, []))
        for i in range(1, n + 1):
            add("(5)", _cyc(n, [t, ("d", i)]), _cyc(n, [("d", i - 1), t]))
        for i in range(1, n + 1):
            add("(6)", _cyc(n, [t, ("s", i)]), _cyc(n, [("s", i - 1), t]))
        if n >= 1:
            add("d0 t = dn", _cyc(n, [t, ("d", 0)]), _cyc(n, [("d", n)]))
        add("s0 t = t t sn", _cyc(n, [t, ("s", 0)]), _cyc(n, [("s", n), t, t]))
        add("s-1 = t sn", _cyc(n, [("s", -1)]), _cyc(n, [("s", n), t]))
        for i in range(0, n + 1):
            add("s-1 s_i = s_{i+1} s-1", _cyc(n, [("s", i), ("s", -1)]), _cyc(n, [("s", -1), ("s", i + 1)]))
        add("d0 s-1 = id", _cyc(n, [("s", -1), ("d", 0)]), _cyc(n, []))
        for i in range(1, n + 1):
            add("d_i s-1 = s-1 d_{i-1}", _cyc(n, [("s", -1), ("d", i)]), _cyc(n, [("d", i - 1), ("s", -1)]))
        add("d_{n+1} s-1 = t", _cyc(n, [("s", -1), ("d", n + 1)]), _cyc(n, [t]))
        add("s0 t = t s-1", _cyc(n, [t, ("s", 0)]), _cyc(n, [("s", -1), t]))
    return out


def _qw(source: int | str, applied: Sequence[tuple[str, int | None]]) -> Word | None:
    """Pushout word given in application order, pulled back to a word."""
    try:
        return Word.from_applied(
            _a_object(source), [_psi_inverse(QGenerator(n, i, source)) for n, i in applied]
        )
    except (IndexOutOfRange, ObjectMismatch):
        return None


def _q_index_ok(name: str, index: int, degree: int | str) -> bool:
    """Index ranges from the pushout's generator list."""
    if isinstance(degree, str):
        return (name, index) in {("s", -1), ("d*", 0)} and (degree == "-") == (name == "s")
    if name == "d":
        return 0 <= index <= degree
    if name == "s*":
        return -1 <= index <= degree - 1
    if name == "s":
        return -1 <= index <= degree
    if name == "d*":
        return 0 <= index <= degree + 1
    return True


def _qw_checked(source: int | str, applied: Sequence[tuple[str, int | None]]) -> Word | None:
    deg = source
    for name, index in applied:
        if name not in ("t", "d+", "d-") and not _q_index_ok(name, index, deg):
            return None
        if name in ("d", "s*"):
            if isinstance(deg, str):
                return None
            deg = deg - 1 if deg >= 1 else ("+" if name == "d" else "-")
        elif name in ("s", "d*"):
            deg = 0 if isinstance(deg, str) else deg + 1
        elif name == "t" and isinstance(deg, str):
            return None
    return _qw(source, applied)


def pushout_relations(max_n: int) -> list[RelationInstance]:
    """The pushout relations and the coupling relations, pulled back to words."""
    out: list[RelationInstance | None] = []
    t = ("t", None)
    sources: list[int | str] = ["+", "-"] + list(range(0, max_n))

    def add(name: str, source, lhs, rhs) -> None:
        out.append(_instance(name, _qw_checked(source, lhs), _qw_checked(source, rhs)))

    for q in sources:
        rng = range(-1, (q if isinstance(q, int) else 0) + 3)
        for i in rng:
            for j in rng:
                if i < j:
                    add("PO (1) d", q, [("d", j), ("d", i)], [("d", i), ("d", j - 1)])
                    add("PO (1) s*", q, [("s*", j), ("s*", i)], [("s*", i), ("s*", j - 1)])
                    add("coupling (1)", q, [("s*", j), ("d", i)], [("d", i), ("s*", j - 1)])
                    add("coupling (2)", q, [("d*", j), ("d", i)], [("d", i), ("d*", j - 1)])
                    add("coupling (3)", q, [("s", j), ("s*", i)], [("s*", i), ("s", j - 1)])
                if i > j and not (j == -1 and i + 1 == q):
                    # j = -1 with the top face is the excluded pair of relation (1)
                    add("coupling (1)", q, [("s*", j), ("d", i)], [("d", i + 1), ("s*", j)])
                if i == j:
                    add("coupling (2)", q, [("d*", j), ("d", i)], [("d-", None)])
                    add("coupling (3)", q, [("s", j), ("s*", i)], [("d+", None)])
                if i <= j:
                    add("PO (2) s", q, [("s", j), ("s", i)], [("s", i), ("s", j + 1)])
                    add("PO (2) d*", q, [("d*", j), ("d*", i)], [("d*", i), ("d*", j + 1)])
                # (3) d_i s_j, and its mirror s*_j d*_i (indices of genuine degeneracies only)
                if j >= 0:
                    if i < j:
                        rhs = [("d", i), ("s", j - 1)]
                        mirror = [("s*", j - 1), ("d*", i)]
                    elif i in (j, j + 1):
                        rhs = mirror = []
                    else:
                        rhs = [("d", i - 1), ("s", j)]
                        mirror = [("s*", j), ("d*", i - 1)]
                    add("PO (3)", q, [("s", j), ("d", i)], rhs)
                    add("PO (3*)", q, [("d*", i), ("s*", j)], mirror)
        if isinstance(q, int):
            add("PO (4)", q, [t] * (q + 1), [])
            for i in range(1, q + 1):
                add("PO (5) d", q, [t, ("d", i)], [("d", i - 1), t])
                add("PO (6) d*", q, [t, ("d*", i)], [("d*", i - 1), t])
            for i in range(0, q + 1):
                add("PO (5) s*", q, [t, ("s*", i)], [("s*", i - 1), t])
                add("PO (6) s", q, [t, ("s", i)], [("s", i - 1), t])
    return [x for x in out if x is not None]


def all_relation_checks(max_n: int) -> list[tuple[str, str, Word, Word]]:
    checks = [(f"aDelta {r.relation}", r.instance, r.lhs, r.rhs) for r in presentation_relations(max_n)]
    for name, lhs, rhs in cyclic_relations(max_n):
        for label, embed in (("H+", embed_Hplus), ("H-", embed_Hminus)):
            inst = f"{lhs} = {rhs} at degree {lhs.source}"
            checks.append((f"cyclic {name} via {label}", inst, embed(lhs), embed(rhs)))
    checks += [(f"pushout {r.relation}", r.instance, r.lhs, r.rhs) for r in pushout_relations(max_n)]
    return checks


def verify_relations(
    max_n: int,
    table: Callable[[str, int | None, BoundaryObject], AtlMorphism] | None = None,
) -> list[RelationResult]:
    """Evaluate both sides of every relation instance through ``eval_F``."""
    results = []
    for name, inst, lhs, rhs in all_relation_checks(max_n):
        ok = eval_F(lhs, table) == eval_F(rhs, table)
        results.append(RelationResult(name, inst, "pass" if ok else "fail"))
    return results


def corrupted_table(kind: str, index: int | None, source: BoundaryObject) -> Callable:
    """A generator table with one entry replaced by the identity (negative control)."""

    def table(k: str, i: int | None, s: BoundaryObject) -> AtlMorphism:
        if (k, i, s) == (kind, index, source):
            img = generator_image(k, i, s)
            if img.source == img.target:
                return identity_morphism(s)
            return generator_image(ALPHA if k == ALPHA else k, 1 if i != 1 else 2, s)
        return generator_image(k, i, s)

    return table


def standard_forms_agree(w: Word) -> bool:
    """The rewriting normalizer and the diagram route give the same form."""
    return standard_form(w) == read_G_form(eval_F(w))


def _generators_at(obj: BoundaryObject, max_n: int) -> list[tuple[str, int | None]]:
    out: list[tuple[str, int | None]] = [(DELTA_PLUS, None), (DELTA_MINUS, None)]
    if obj.is_zero:
        out.append((BETA, 1 if obj == ZERO_PLUS else 2))
        return out
    out += [(ALPHA, i) for i in range(1, obj.points + 1)]
    if obj.n < max_n:
        out += [(BETA, i) for i in range(1, obj.points + 3)]
    out.append((TAU, None))
    return out


def words_of_length(source: BoundaryObject, length: int, max_n: int) -> Iterable[Word]:
    """Every word of exactly ``length`` generators from ``source`` staying at
    objects ``n <= max_n`` (delta generators included)."""

    def rec(obj: BoundaryObject, prefix: list[tuple[str, int | None]]):
        if len(prefix) == length:
            yield Word.from_applied(source, prefix)
            return
        for kind, index in _generators_at(obj, max_n):
            g = Generator(kind, index, obj)
            yield from rec(g.target, prefix + [(kind, index)])

    yield from rec(source, [])


@dataclass
class SweepReport:
    words: int = 0
    mismatches: list[str] = field(default_factory=list)


def normalizer_sweep(sources: Sequence[BoundaryObject], max_length: int, max_n: int) -> SweepReport:
    """Compare ``standard_form`` with ``read_G . eval_F`` on every word of
    length ``<= max_length`` from ``sources``, staying at objects ``n <= max_n``.

    Words are walked depth first so the tangle and the rewriting state are
    extended one generator at a time; both final read-outs are memoized, since
    many words share a tangle or a rewriting state.
    """
    report = SweepReport()
    by_tangle: dict[AtlMorphism, StandardForm] = {}
    by_state: dict[tuple, StandardForm] = {}

    def visit(word: list[tuple[str, int | None]], image: AtlMorphism, state: _Normalizer) -> None:
        key = (state.c_plus, state.c_minus, tuple(state.w1), state.mid, state.tau_power,
               tuple(state.sigmas), state.low, tuple(state.w3))
        if key not in by_state:
            by_state[key] = state.result()
        if image not in by_tangle:
            by_tangle[image] = read_G_form(image)
        report.words += 1
        if by_state[key] != by_tangle[image]:
            report.mismatches.append(f"{Word.from_applied(state.source, word)} at {state.source}")
        if len(word) == max_length:
            return
        obj = image.target
        for kind, index in _generators_at(obj, max_n):
            g = Generator(kind, index, obj)
            nxt = copy.deepcopy(state)
            nxt.add(g)
            visit(word + [(kind, index)], compose(generator_image(kind, index, obj), image), nxt)

    for src in sources:
        visit([], identity_morphism(src), _Normalizer(src))
    return report
