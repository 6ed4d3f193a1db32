"""Annular Temperley-Lieb modules and their Hochschild and cyclic homology.

A planar diagram with ``2n`` boundary points is encoded as an annular tangle
from ``0+`` to ``[n]`` by puncturing it in the region that touches the star
interval (always unshaded).  A generator then acts by ordinary tangle
composition.  Loops that wind around the puncture are nested around it, so the
innermost one encloses an unshaded region and the shading alternates outward.

Sign conventions: ``tau`` at ``[n]`` acts as ``(-1)^(n-1)`` times the diagram
map, the cyclic module in degree ``k`` is ``X_(k+1)``, and the extra
degeneracy is ``(-1)^(k+1) t s_k``.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .intlinalg import AbGroup, ChainComplex, check_complex, homology_at
from .tangle_core import ZERO_MINUS, ZERO_PLUS, AtlMorphism, AtlTangle, BoundaryObject, N, compose, generator

Matching = tuple[tuple[int, int], ...]

KINDS = ("hh+", "hh-", "hhred+", "hhred-", "hc+", "hc-")


@lru_cache(maxsize=None)
def _matchings(points: tuple[int, ...]) -> tuple[Matching, ...]:
    if not points:
        return ((),)
    first = points[0]
    out = []
    for k in range(1, len(points), 2):
        inside, outside = points[1:k], points[k + 1 :]
        for a in _matchings(inside):
            for b in _matchings(outside):
                out.append(tuple(sorted(((first, points[k]),) + a + b)))
    return tuple(out)


def tl_basis(obj: BoundaryObject | str | int) -> list[Matching]:
    """Non-crossing perfect matchings of the ``2n`` points, in lexicographic order."""
    obj = BoundaryObject.parse(obj)
    if obj.is_zero:
        return [()]
    return sorted(_matchings(tuple(range(1, obj.points + 1))))


def diagram_tangle(obj: BoundaryObject, matching: Matching) -> AtlTangle:
    """The disk diagram as an annular tangle out of a puncture at the star region."""
    if obj.is_zero:
        return AtlTangle(obj, obj)
    return AtlTangle(ZERO_PLUS, obj, cups=tuple(sorted(matching)))


def _puncture(obj: BoundaryObject) -> BoundaryObject:
    return obj if obj.is_zero else ZERO_PLUS


def _scalar(x) -> int | Fraction:
    f = Fraction(x)
    return int(f) if f.denominator == 1 else f


@dataclass
class TLModule:
    """``TL(R, delta)``: planar diagrams with closed loops replaced by scalars.

    A loop enclosing a shaded region contributes ``delta_plus``, one enclosing
    an unshaded region ``delta_minus``.  Zero scalars recover the module where
    any closed loop kills the diagram.
    """

    ring: str = "Z"
    delta_plus: int | Fraction = 0
    delta_minus: int | Fraction = 0
    signed_tau: bool = True
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.ring not in ("Z", "Q"):
            raise ValueError(f"ring must be Z or Q, not {self.ring!r}")
        self.delta_plus = _scalar(self.delta_plus)
        self.delta_minus = _scalar(self.delta_minus)
        if self.ring == "Z" and (isinstance(self.delta_plus, Fraction) or isinstance(self.delta_minus, Fraction)):
            raise ValueError("loop values over Z must be integers")

    def basis(self, obj: BoundaryObject) -> list[Matching]:
        key = ("basis", obj)
        if key not in self._cache:
            self._cache[key] = tl_basis(obj)
        return self._cache[key]

    def rank(self, obj: BoundaryObject) -> int:
        return len(self.basis(obj))

    def _weight(self, shaded: int, unshaded: int):
        return self.delta_plus**shaded * self.delta_minus**unshaded

    def act(self, m: AtlMorphism, obj: BoundaryObject, matching: Matching) -> tuple[Matching, object]:
        """Image of one basis diagram: (target diagram, scalar)."""
        s = AtlMorphism(diagram_tangle(obj, matching))
        r = compose(m, s)
        loops = r.tangle.loops
        core_shaded = _puncture(obj).core_shaded
        # loop j (innermost j = 1) encloses the core shading flipped j - 1 times
        shaded = sum(1 for j in range(loops) if core_shaded != (j % 2 == 1))
        coeff = self._weight(r.c_plus + shaded, r.c_minus + loops - shaded)
        if r.target.is_zero:
            return (), coeff
        return tuple(sorted((min(p, q), max(p, q)) for p, q in r.tangle.cups)), coeff

    def matrix(self, kind: str, index: int | None, obj: BoundaryObject) -> np.ndarray:
        """Matrix of a generator (``a``, ``b``, ``t``, ``delta_plus``, ``delta_minus``)
        at ``obj``; columns index the source basis.  ``t`` carries its sign."""
        key = (kind, index, obj)
        if key in self._cache:
            return self._cache[key]
        g = generator(kind, index, obj)
        src = self.basis(obj)
        dst = self.basis(g.target)
        where = {d: i for i, d in enumerate(dst)}
        entries = np.zeros((len(dst), len(src)), dtype=object)
        sign = (-1) ** (obj.n - 1) if kind == "t" and self.signed_tau else 1
        for j, d in enumerate(src):
            image, coeff = self.act(g, obj, d)
            if coeff:
                entries[where[image], j] += sign * coeff
        self._cache[key] = _tighten(entries)
        return self._cache[key]


AnnularModuleSpec = TLModule


def tl_action(module: TLModule, g) -> np.ndarray:
    """Matrix of a presentation generator (see ``presentation.Generator``)."""
    from .presentation import ALPHA, BETA, DELTA_MINUS, DELTA_PLUS, ID, TAU

    if g.kind == ID:
        return _eye(module.rank(g.source))
    names = {ALPHA: "a", BETA: "b", TAU: "t", DELTA_PLUS: "delta_plus", DELTA_MINUS: "delta_minus"}
    return module.matrix(names[g.kind], g.index, g.source)


def _tighten(m: np.ndarray) -> np.ndarray:
    """int64 when every entry is a small integer, object otherwise."""
    if all(isinstance(x, int) and abs(x) < 1 << 30 for x in m.flat):
        return m.astype(np.int64)
    return m


def _dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == object or b.dtype == object:
        return _tighten(a.astype(object) @ b.astype(object))
    return a @ b


# ---------------------------------------------------------------------------
# cyclic structure: X_(k+1) is the cyclic module in degree k


def _face_index(sign: int, i: int) -> int:
    return 2 * i + (1 if sign > 0 else 2)


def _degeneracy_index(sign: int, j: int) -> int:
    return 2 * j + (2 if sign > 0 else 3)


def face(module: TLModule, sign: int, k: int, i: int) -> np.ndarray:
    """``d_i`` from cyclic degree ``k`` to ``k - 1``."""
    return module.matrix("a", _face_index(sign, i), N(k + 1))


def degeneracy(module: TLModule, sign: int, k: int, j: int) -> np.ndarray:
    """``s_j`` from cyclic degree ``k`` to ``k + 1`` (``0 <= j <= k``)."""
    return module.matrix("b", _degeneracy_index(sign, j), N(k + 1))


def cyclic_operator(module: TLModule, k: int) -> np.ndarray:
    return module.matrix("t", None, N(k + 1))


def hochschild_boundary(module: TLModule, sign: int, k: int) -> np.ndarray:
    """``b = sum (-1)^i d_i`` from cyclic degree ``k >= 1`` to ``k - 1``."""
    total = None
    for i in range(k + 1):
        term = (-1) ** i * face(module, sign, k, i)
        total = term if total is None else total + term
    return total


def prime_boundary(module: TLModule, sign: int, k: int) -> np.ndarray:
    """``b' = sum_{i < k} (-1)^i d_i``; zero map in degree 0."""
    if k == 0:
        return np.zeros((0, module.rank(N(1))), dtype=np.int64)
    total = None
    for i in range(k):
        term = (-1) ** i * face(module, sign, k, i)
        total = term if total is None else total + term
    return total


def extra_degeneracy(module: TLModule, sign: int, k: int) -> np.ndarray:
    """``s_-1 = (-1)^(k+1) t s_k`` from degree ``k`` to ``k + 1``."""
    return (-1) ** (k + 1) * _dot(cyclic_operator(module, k + 1), degeneracy(module, sign, k, k))


def norm_operator(module: TLModule, k: int) -> np.ndarray:
    t = cyclic_operator(module, k)
    power = np.identity(t.shape[0], dtype=t.dtype)
    total = power.copy()
    for _ in range(k):
        power = _dot(t, power)
        total = total + power
    return total


def connes_B(module: TLModule, sign: int, k: int) -> np.ndarray:
    """``B = (1 - t) s_-1 N`` from cyclic degree ``k`` to ``k + 1``."""
    t_up = cyclic_operator(module, k + 1)
    inner = _dot(extra_degeneracy(module, sign, k), norm_operator(module, k))
    return inner - _dot(t_up, inner)


def hochschild_complex(module: TLModule, sign: int, max_degree: int, reduced: bool = False) -> ChainComplex:
    """Cyclic-degree complex ``C_k = X_(k+1)`` for ``0 <= k <= max_degree``.

    With ``reduced`` the augmentation ``C_-1 = X_+`` (or ``X_-``) is attached
    through ``a_1`` (or ``a_2``).
    """
    ranks = {k: module.rank(N(k + 1)) for k in range(max_degree + 1)}
    boundaries = {k: hochschild_boundary(module, sign, k) for k in range(1, max_degree + 1)}
    if reduced:
        low = ZERO_PLUS if sign > 0 else ZERO_MINUS
        ranks[-1] = module.rank(low)
        boundaries[0] = module.matrix("a", 1 if sign > 0 else 2, N(1))
    return ChainComplex(ranks, boundaries, module.ring)


def _zero(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def total_complex(module: TLModule, sign: int, max_degree: int) -> ChainComplex:
    """``Tot_m = C_m + C_(m-2) + ...`` with differential ``b + B``."""
    ranks_c = {k: module.rank(N(k + 1)) for k in range(max_degree + 1)}
    b = {k: hochschild_boundary(module, sign, k) for k in range(1, max_degree + 1)}
    big_b = {k: connes_B(module, sign, k) for k in range(0, max_degree)}

    def parts(m: int) -> list[int]:
        return [m - 2 * i for i in range(m // 2 + 1)]

    ranks = {m: sum(ranks_c[k] for k in parts(m)) for m in range(max_degree + 1)}
    boundaries = {}
    for m in range(1, max_degree + 1):
        src, dst = parts(m), parts(m - 1)
        rows = []
        for kd in dst:
            row = []
            for ks in src:
                if kd == ks - 1:
                    row.append(b[ks])
                elif kd == ks + 1:
                    row.append(big_b[ks])
                else:
                    row.append(_zero(ranks_c[kd], ranks_c[ks]))
            rows.append(row)
        boundaries[m] = _tighten(np.block(rows).astype(object)) if rows else _zero(0, ranks[m])
    return ChainComplex(ranks, boundaries, module.ring)


# ---------------------------------------------------------------------------
# homology tables


@dataclass(frozen=True)
class HomologyTable:
    kind: str
    entries: dict[int, AbGroup]
    ring: str = "Z"

    def to_json(self) -> dict:
        return {"kind": self.kind, "entries": {str(d): g.to_json() for d, g in sorted(self.entries.items())}}

    def lines(self) -> list[str]:
        name = {"hh": "HH", "hhred": "~HH", "hc": "HC"}[self.kind[:-1]]
        return [f"{name}{self.kind[-1]}_{d} = {g.render(self.ring)}" for d, g in sorted(self.entries.items())]


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("ANNTL_THREADS", "1")))
    except ValueError:
        return 1


def _homology_table(kind: str, complex_: ChainComplex, degrees: list[int], shift: int) -> HomologyTable:
    def one(n: int) -> AbGroup:
        return complex_.homology(n - shift)

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        groups = list(pool.map(one, degrees))
    return HomologyTable(kind, dict(zip(degrees, groups)), complex_.ring)


def hochschild_homology(module: TLModule, sign: int, max_degree: int) -> HomologyTable:
    """``HH^sign_n = H_(n-1)`` of the cyclic complex, ``1 <= n <= max_degree``."""
    c = hochschild_complex(module, sign, max_degree)
    return _homology_table(f"hh{'+' if sign > 0 else '-'}", c, list(range(1, max_degree + 1)), 1)


def reduced_hochschild(module: TLModule, sign: int, max_degree: int) -> HomologyTable:
    """Reduced groups in degrees ``0..max_degree``."""
    c = hochschild_complex(module, sign, max_degree, reduced=True)
    return _homology_table(f"hhred{'+' if sign > 0 else '-'}", c, list(range(0, max_degree + 1)), 1)


def cyclic_homology(module: TLModule, sign: int, max_degree: int) -> HomologyTable:
    """``HC^sign_n = H_(n-1)(Tot)`` for ``1 <= n <= max_degree``."""
    c = total_complex(module, sign, max_degree)
    return _homology_table(f"hc{'+' if sign > 0 else '-'}", c, list(range(1, max_degree + 1)), 1)


def homology_table(module: TLModule, kind: str, max_degree: int) -> HomologyTable:
    if kind not in KINDS:
        raise ValueError(f"unknown homology kind {kind!r}")
    sign = 1 if kind.endswith("+") else -1
    if kind.startswith("hhred"):
        return reduced_hochschild(module, sign, max_degree)
    if kind.startswith("hh"):
        return hochschild_homology(module, sign, max_degree)
    return cyclic_homology(module, sign, max_degree)


# ---------------------------------------------------------------------------
# identity checks


@dataclass(frozen=True)
class IdentityCheck:
    identity: str
    degree: int
    ok: bool

    def to_json(self) -> dict:
        return {"identity": self.identity, "degree": self.degree, "status": "pass" if self.ok else "fail"}


def _is_zero(m: np.ndarray) -> bool:
    return not np.any(m != 0)


def _eye(n: int) -> np.ndarray:
    return np.identity(n, dtype=np.int64)


def verify_homotopy_identities(module: TLModule, max_degree: int) -> list[IdentityCheck]:
    """Complex and contraction identities for both signs in cyclic degrees ``<= max_degree``.

    Checks b b = 0, B B = 0, b B + B b = 0, b' s_-1 + s_-1 b' = id, and the
    loop homotopy beta b + b beta = delta id on ``X_n`` together with
    ``b beta = delta id`` on the augmentation object.
    """
    out = []
    for sign in (1, -1):
        tag = "+" if sign > 0 else "-"
        b = {k: hochschild_boundary(module, sign, k) for k in range(1, max_degree + 2)}
        big_b = {k: connes_B(module, sign, k) for k in range(0, max_degree + 1)}
        for k in range(2, max_degree + 1):
            out.append(IdentityCheck(f"b{tag} b{tag} = 0", k, _is_zero(_dot(b[k - 1], b[k]))))
        for k in range(0, max_degree):
            out.append(IdentityCheck(f"B{tag} B{tag} = 0", k, _is_zero(_dot(big_b[k + 1], big_b[k]))))
        for k in range(0, max_degree):
            lhs = _dot(big_b[k - 1], b[k]) if k >= 1 else 0
            rhs = _dot(b[k + 1], big_b[k])
            out.append(IdentityCheck(f"b{tag} B{tag} + B{tag} b{tag} = 0", k, _is_zero(rhs + lhs)))
        for k in range(0, max_degree + 1):
            s_here = extra_degeneracy(module, sign, k)
            first = _dot(prime_boundary(module, sign, k + 1), s_here)
            if k >= 1:
                first = first + _dot(extra_degeneracy(module, sign, k - 1), prime_boundary(module, sign, k))
            out.append(IdentityCheck(f"b'{tag} s-1 + s-1 b'{tag} = id", k, _is_zero(first - _eye(first.shape[0]))))
        # loop homotopy in aDelta degrees n = k + 1, with the augmented boundary at n = 1
        loop_b = 1 if sign > 0 else 2
        delta = module.delta_plus if sign > 0 else module.delta_minus
        low = ZERO_PLUS if sign > 0 else ZERO_MINUS
        aug = module.matrix("a", loop_b, N(1))
        beta_low = module.matrix("b", loop_b, low)
        scalar = _dot(aug, beta_low)
        out.append(IdentityCheck(f"b{tag} beta{loop_b} = delta{tag} id on X{tag}", -1, _is_zero(scalar - delta * _eye(scalar.shape[0]))))
        for n in range(1, max_degree + 2):
            beta_n = module.matrix("b", loop_b, N(n))
            down = aug if n == 1 else b[n - 1]
            beta_down = beta_low if n == 1 else module.matrix("b", loop_b, N(n - 1))
            total = _dot(beta_down, down) + _dot(b[n], beta_n)
            ok = _is_zero(total - delta * _eye(total.shape[0]))
            out.append(IdentityCheck(f"beta{loop_b} b{tag} + b{tag} beta{loop_b} = delta{tag} id", n, ok))
    return out


def word_matrix(module: TLModule, w, signed: bool = True) -> np.ndarray:
    """Matrix of a word, composing right to left.

    With ``signed=False`` the sign carried by ``tau`` is removed, giving the
    plain functor on diagrams.
    """
    from .presentation import ALPHA, BETA, DELTA_MINUS, DELTA_PLUS, TAU

    names = {ALPHA: "a", BETA: "b", TAU: "t", DELTA_PLUS: "delta_plus", DELTA_MINUS: "delta_minus"}
    result = _eye(module.rank(w.source))
    for g in w.applied():
        if g.kind not in names:
            continue
        m = module.matrix(names[g.kind], g.index, g.source)
        if g.kind == TAU and not signed:
            m = (-1) ** (g.source.n - 1) * m
        result = _dot(m, result)
    return result
