"""Exact integer linear algebra: Smith normal form and homology of free complexes.

Matrices are numpy arrays.  Elimination runs on int64 while entries stay small
and switches to Python integers (object arrays) once they grow, so results are
exact for any input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import NotAComplex

# beyond this magnitude one more elimination step could overflow int64
_SAFE = 1 << 30


def as_matrix(rows: Sequence[Sequence[int]] | np.ndarray, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Integer matrix from nested lists; ``shape`` is needed for empty matrices."""
    a = np.array(rows, dtype=object if _too_big(rows) else np.int64)
    if shape is not None:
        a = a.reshape(shape)
    elif a.ndim != 2:
        a = a.reshape((a.shape[0] if a.ndim else 0, 0))
    return a


def _too_big(rows) -> bool:
    try:
        return any(abs(int(x)) >= _SAFE for row in rows for x in row)
    except TypeError:
        return False


def _widen(a: np.ndarray) -> np.ndarray:
    if a.dtype != object and a.size and np.abs(a).max() >= _SAFE:
        return a.astype(object)
    return a


def _chain(diagonal: list[int]) -> list[int]:
    """Invariant factors of a diagonal matrix (nonzero entries only)."""
    d = sorted(abs(x) for x in diagonal if x)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                if d[j] % d[i]:
                    g = math.gcd(d[i], d[j])
                    d[i], d[j] = g, d[i] * d[j] // g
                    changed = True
        d.sort()
    return d


def _diagonalize(m: np.ndarray) -> list[int]:
    """Nonzero diagonal entries after unimodular row and column operations."""
    a = _widen(np.array(m, dtype=m.dtype if m.dtype == object else np.int64, copy=True))
    diag: list[int] = []
    while a.size:
        nz = a != 0
        if not nz.any():
            break
        mag = np.abs(a).astype(object if a.dtype == object else np.int64)
        mag[~nz] = mag.max() + 1
        r, c = np.unravel_index(int(np.argmin(mag)), a.shape)
        while True:
            p = a[r, c]
            col = a[:, c].copy()
            col[r] = 0
            rows = np.nonzero(col)[0]
            if rows.size:
                q = col[rows] // p
                a[rows] -= np.outer(q, a[r])
            row = a[r].copy()
            row[c] = 0
            cols = np.nonzero(row)[0]
            if cols.size:
                q = row[cols] // p
                a[:, cols] -= np.outer(a[:, c], q)
            a = _widen(a)
            col = a[:, c].copy()
            col[r] = 0
            row = a[r].copy()
            row[c] = 0
            left = [(abs(col[i]), i, c) for i in np.nonzero(col)[0]]
            left += [(abs(row[j]), r, j) for j in np.nonzero(row)[0]]
            if not left:
                break
            _, r, c = min(left)
        diag.append(int(a[r, c]))
        a = np.delete(np.delete(a, r, axis=0), c, axis=1)
    return diag


def smith_normal_form(m: np.ndarray | Sequence[Sequence[int]]) -> tuple[list[int], int]:
    """Invariant factors ``d_1 | d_2 | ...`` (nonzero ones) and the rank."""
    if not isinstance(m, np.ndarray):
        m = as_matrix(m)
    factors = _chain(_diagonalize(m))
    return factors, len(factors)


def rational_rank(m: np.ndarray) -> int:
    """Rank over the rationals; Fraction entries are cleared of denominators."""
    if m.size == 0:
        return 0
    if m.dtype == object and any(isinstance(x, Fraction) for x in m.flat):
        den = 1
        for x in m.flat:
            den = math.lcm(den, Fraction(x).denominator)
        m = np.array([[int(Fraction(x) * den) for x in row] for row in m], dtype=object)
    return len(_diagonalize(m))


@dataclass(frozen=True)
class AbGroup:
    """A finitely generated abelian group ``Z^r + Z/d1 + ...`` with ``d1 | d2 | ...``."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        t = tuple(self.torsion)
        if any(d < 2 for d in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"torsion {t} is not a divisibility chain of factors >= 2")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_factors(cls, free_rank: int, factors: Sequence[int]) -> AbGroup:
        return cls(free_rank, tuple(d for d in _chain(list(factors)) if d > 1))

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def to_json(self) -> dict:
        return {"rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        return self.render("Z")

    def render(self, ring: str = "Z") -> str:
        """Text form over ``Z`` (or ``Q``, where only the rank is meaningful)."""
        parts = []
        if self.free_rank == 1:
            parts.append(ring)
        elif self.free_rank > 1:
            parts.append(f"{ring}^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " ⊕ ".join(parts) or "0"


def _product(b: np.ndarray, a: np.ndarray) -> np.ndarray:
    if b.dtype == object or a.dtype == object:
        return b.astype(object) @ a.astype(object)
    if b.size and a.size and int(np.abs(b).max()) * int(np.abs(a).max()) * max(a.shape[0], 1) >= 1 << 62:
        return b.astype(object) @ a.astype(object)
    return b @ a


def check_complex(incoming: np.ndarray, outgoing: np.ndarray) -> None:
    if outgoing.shape[1] != incoming.shape[0]:
        raise NotAComplex(f"shapes {outgoing.shape} and {incoming.shape} do not compose")
    if outgoing.size and incoming.size and np.any(_product(outgoing, incoming) != 0):
        raise NotAComplex("consecutive boundary maps do not compose to zero")


def homology_at(incoming: np.ndarray, outgoing: np.ndarray, ring: str = "Z") -> AbGroup:
    """``ker(outgoing) / im(incoming)`` for ``outgoing @ incoming == 0``.

    The kernel of a map between free modules is a direct summand, so the torsion
    of the quotient is the torsion of ``coker(incoming)``: the invariant factors
    of ``incoming`` above 1.
    """
    check_complex(incoming, outgoing)
    dim = incoming.shape[0]
    if ring == "Q":
        return AbGroup(dim - rational_rank(incoming) - rational_rank(outgoing))
    factors, rank_in = smith_normal_form(incoming)
    _, rank_out = smith_normal_form(outgoing)
    return AbGroup.from_factors(dim - rank_in - rank_out, factors)


def integer_kernel(m: np.ndarray) -> np.ndarray:
    """Columns spanning ``ker(m)`` over the integers (a basis of the saturated kernel)."""
    rows, cols = m.shape
    a = np.array(m, dtype=object)
    basis = np.identity(cols, dtype=object)
    # column-reduce a, recording the operations in basis
    r = 0
    pivot_cols = 0
    while r < rows and pivot_cols < cols:
        while True:
            entries = [(abs(a[r, j]), j) for j in range(pivot_cols, cols) if a[r, j] != 0]
            if not entries:
                break
            _, j = min(entries)
            a[:, [pivot_cols, j]] = a[:, [j, pivot_cols]]
            basis[:, [pivot_cols, j]] = basis[:, [j, pivot_cols]]
            p = a[r, pivot_cols]
            done = True
            for k in range(pivot_cols + 1, cols):
                if a[r, k]:
                    q = a[r, k] // p
                    a[:, k] -= q * a[:, pivot_cols]
                    basis[:, k] -= q * basis[:, pivot_cols]
                    if a[r, k]:
                        done = False
            if done:
                pivot_cols += 1
                break
        r += 1
    return basis[:, pivot_cols:]


def homology_by_kernel(incoming: np.ndarray, outgoing: np.ndarray) -> AbGroup:
    """Independent route: express the image in a kernel basis and take its SNF."""
    check_complex(incoming, outgoing)
    kernel = integer_kernel(outgoing)
    k = kernel.shape[1]
    if k == 0:
        return AbGroup()
    coords = _solve_in_basis(kernel, np.array(incoming, dtype=object).reshape(kernel.shape[0], -1))
    factors, rank = smith_normal_form(coords) if coords.size else ([], 0)
    return AbGroup.from_factors(k - rank, factors)


def _solve_in_basis(basis: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Integer coordinates of the ``targets`` columns in the lattice spanned by ``basis``."""
    k = basis.shape[1]
    m = [[Fraction(int(v)) for v in row] for row in basis]
    coords = np.zeros((k, targets.shape[1]), dtype=object)
    for col in range(targets.shape[1]):
        sol = _rational_solve(m, [Fraction(int(v)) for v in targets[:, col]], k)
        for i, v in enumerate(sol):
            if v.denominator != 1:
                raise ValueError("image does not lie in the kernel lattice")
            coords[i, col] = int(v)
    return coords


def _rational_solve(m: list[list[Fraction]], y: list[Fraction], k: int) -> list[Fraction]:
    rows = [r[:] + [y[i]] for i, r in enumerate(m)]
    pivots = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        rows[r] = [v / piv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    sol = [Fraction(0)] * k
    for i, c in enumerate(pivots):
        sol[c] = rows[i][k]
    return sol


@dataclass
class ChainComplex:
    """Free modules ``ranks[d]`` with boundaries ``boundaries[d]: C_d -> C_{d-1}``.

    Missing boundaries are zero maps.
    """

    ranks: dict[int, int]
    boundaries: dict[int, np.ndarray] = field(default_factory=dict)
    ring: str = "Z"

    def __post_init__(self) -> None:
        for d, m in self.boundaries.items():
            want = (self.ranks.get(d - 1, 0), self.ranks.get(d, 0))
            if m.shape != want:
                raise ValueError(f"boundary in degree {d} has shape {m.shape}, expected {want}")
        for d in self.boundaries:
            if d - 1 in self.boundaries:
                check_complex(self.boundary(d), self.boundary(d - 1))

    def boundary(self, d: int) -> np.ndarray:
        if d in self.boundaries:
            return self.boundaries[d]
        return np.zeros((self.ranks.get(d - 1, 0), self.ranks.get(d, 0)), dtype=np.int64)

    def homology(self, d: int) -> AbGroup:
        return homology_at(self.boundary(d + 1), self.boundary(d), self.ring)
