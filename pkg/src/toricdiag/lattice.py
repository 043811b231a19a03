"""Exact integer and rational linear algebra.

Everything here works on Python integers and :class:`fractions.Fraction`;
there is no floating point anywhere in this module.  Matrices are small
(at most a few dozen rows), so plain nested tuples are fast enough.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class UnboundedPolyhedron(ValueError):
    """Raised when lattice points are requested for an unbounded polyhedron."""


class IntMatrix:
    """Immutable integer matrix with row-major indexing.

    ``IntMatrix([[1, 2], [3, 4]])[1, 0] == 3``.  Empty matrices keep their
    column count, so ``IntMatrix([], cols=3)`` is a valid 0x3 matrix.
    """

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[int]], cols: int | None = None):
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise ValueError("ragged matrix")
            if cols is not None and cols != width:
                raise ValueError("column count mismatch")
        else:
            width = cols if cols is not None else 0
        self._rows = data
        self.nrows = len(data)
        self.ncols = width

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, r: int, c: int) -> "IntMatrix":
        return cls([[0] * c for _ in range(r)], cols=c)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        if not columns:
            return cls([[] for _ in range(nrows)], cols=0) if nrows else cls([], cols=0)
        return cls(list(zip(*columns)), cols=len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    @property
    def columns(self) -> tuple[tuple[int, ...], ...]:
        return tuple(zip(*self._rows)) if self.nrows else tuple(() for _ in range(self.ncols))

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            i, j = idx
            return self._rows[i][j]
        return self._rows[idx]

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, self._rows))

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self._rows]!r})"

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.columns, cols=self.nrows)

    T = property(transpose)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns
        return IntMatrix(
            [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._rows],
            cols=other.ncols,
        )

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product."""
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self._rows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int] | None = None) -> "IntMatrix":
        cols = range(self.ncols) if cols is None else cols
        return IntMatrix([[self._rows[i][j] for j in cols] for i in rows], cols=len(cols))


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == S`` with ``S`` diagonal, ``d_i | d_{i+1}`` and U, V unimodular."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.shape)))

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x != 0)


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form by elementary row/column operations.

    Pivots are chosen with minimal absolute value among the remaining block.
    """
    m, n = A.shape
    if m == 0 or n == 0:
        raise ValueError("smith_normal_form needs a nonempty matrix")
    S = [list(r) for r in A.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(M, i, j):
        M[i], M[j] = M[j], M[i]

    def swap_cols(M, i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = S[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, pi, pj = best
        swap_rows(S, t, pi)
        swap_rows(U, t, pi)
        swap_cols(S, t, pj)
        swap_cols(V, t, pj)
        while True:
            p = S[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = S[i][t] // p
                if q:
                    S[i] = [a - q * b for a, b in zip(S[i], S[t])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[t])]
                if S[i][t]:
                    dirty = True
            for j in range(t + 1, n):
                q = S[t][j] // p
                if q:
                    for row in S:
                        row[j] -= q * row[t]
                    for row in V:
                        row[j] -= q * row[t]
                if S[t][j]:
                    dirty = True
            if not dirty:
                # pivot must also divide the rest of the block
                bad = next(
                    ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                i, _ = bad
                S[t] = [a + b for a, b in zip(S[t], S[i])]
                U[t] = [a + b for a, b in zip(U[t], U[i])]
                continue
            # move the smallest remaining entry of row/column t onto the pivot
            cand = [(abs(S[i][t]), i, t) for i in range(t, m) if S[i][t]]
            cand += [(abs(S[t][j]), t, j) for j in range(t, n) if S[t][j]]
            _, pi, pj = min(cand)
            if pi != t:
                swap_rows(S, t, pi)
                swap_rows(U, t, pi)
            if pj != t:
                swap_cols(S, t, pj)
                swap_cols(V, t, pj)
        if S[t][t] < 0:
            S[t] = [-a for a in S[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return SmithDecomposition(IntMatrix(U, cols=m), IntMatrix(S, cols=n), IntMatrix(V, cols=n))


def _primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(v)
    v = [x // g for x in v]
    first = next(x for x in v if x)
    if first < 0:
        v = [-x for x in v]
    return tuple(v)


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Saturated basis of ``{x in Z^cols : A x = 0}``, one basis vector per column.

    The basis is put in a column-Hermite-like form so the output does not
    depend on pivoting details.
    """
    m, n = A.shape
    if n == 0:
        return IntMatrix([], cols=0)
    if m == 0:
        return IntMatrix.identity(n)
    snf = smith_normal_form(A)
    r = snf.rank
    vecs = [list(col) for col in snf.V.columns[r:]]
    vecs = hermite_rows(vecs, n)
    return IntMatrix.from_columns(vecs, n)


def hermite_rows(rows: list[list[int]], n: int) -> list[list[int]]:
    """Row-style Hermite normal form of a full-rank list of integer rows.

    Leading entries are positive and entries above each pivot are reduced
    into ``[0, pivot)``.  Zero rows are dropped.
    """
    rows = [list(r) for r in rows]
    out: list[list[int]] = []
    col = 0
    while rows and col < n:
        nz = [r for r in rows if r[col]]
        if not nz:
            col += 1
            continue
        while len([r for r in rows if r[col]]) > 1:
            nz = sorted((r for r in rows if r[col]), key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                q = r[col] // piv[col]
                for k in range(n):
                    r[k] -= q * piv[k]
        piv = next(r for r in rows if r[col])
        rows = [r for r in rows if r is not piv and any(r)]
        if piv[col] < 0:
            piv = [-x for x in piv]
        for prev in out:
            q = prev[col] // piv[col]
            if q:
                for k in range(n):
                    prev[k] -= q * piv[k]
        out.append(piv)
        col += 1
    return out


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant via Bareiss fraction-free elimination."""
    n = len(rows)
    if n == 0:
        return 1
    M = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rank(rows: Sequence[Sequence[int | Fraction]]) -> int:
    """Rank over Q."""
    M = [[Fraction(x) for x in r] for r in rows]
    if not M:
        return 0
    ncols = len(M[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, len(M)):
            if M[i][c]:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
        if r == len(M):
            break
    return r


def solve(rows: Sequence[Sequence[int | Fraction]], rhs: Sequence[int | Fraction]) -> tuple[Fraction, ...] | None:
    """Unique solution of a square system, or None when it is singular."""
    n = len(rows)
    M = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return tuple(M[i][n] for i in range(n))


def maximal_minors(A: IntMatrix) -> list[int]:
    """Determinants of all ``cols x cols`` row-submatrices, in lexicographic row-subset order."""
    m, n = A.shape
    if m < n:
        raise ValueError("maximal_minors needs rows >= cols")
    return [determinant([A[i] for i in rows]) for rows in itertools.combinations(range(m), n)]


@dataclass(frozen=True)
class RationalPolyhedron:
    """``{x : <normal, x> >= offset for half-spaces, <normal, x> == offset for equalities}``."""

    dim: int
    halfspaces: tuple[tuple[tuple[int, ...], int], ...] = ()
    equalities: tuple[tuple[tuple[int, ...], int], ...] = ()

    def __post_init__(self):
        for normal, _ in self.halfspaces + self.equalities:
            if len(normal) != self.dim:
                raise ValueError("constraint normal has wrong length")

    @classmethod
    def from_inequalities(cls, dim, halfspaces=(), equalities=()):
        norm = lambda cs: tuple((tuple(int(x) for x in a), int(b)) for a, b in cs)
        return cls(dim, norm(halfspaces), norm(equalities))

    def contains(self, x: Sequence[int | Fraction]) -> bool:
        return all(sum(a * b for a, b in zip(n, x)) >= c for n, c in self.halfspaces) and all(
            sum(a * b for a, b in zip(n, x)) == c for n, c in self.equalities
        )

    def _rows(self):
        rows = list(self.halfspaces)
        for n, c in self.equalities:
            rows.append((n, c))
            rows.append((tuple(-a for a in n), -c))
        return rows

    def vertices(self) -> list[tuple[Fraction, ...]]:
        """All vertices, assuming the constraint matrix has full column rank."""
        rows = self._rows()
        found = set()
        for sub in itertools.combinations(range(len(rows)), self.dim):
            normals = [rows[i][0] for i in sub]
            x = solve(normals, [rows[i][1] for i in sub])
            if x is not None and self.contains(x):
                found.add(x)
        return sorted(found)

    def is_bounded(self) -> bool:
        """Exact boundedness test (an empty polyhedron counts as bounded)."""
        rows = self._rows()
        normals = [n for n, _ in rows]
        if self.dim == 0:
            return True
        if rank(normals) < self.dim:
            return self.is_empty()
        if not self.vertices():
            return True
        # pointed and nonempty: bounded iff the recession cone has no extreme ray
        for sub in itertools.combinations(range(len(rows)), self.dim - 1):
            ker = kernel_basis(IntMatrix([normals[i] for i in sub], cols=self.dim))
            if ker.ncols != 1:
                continue
            w = ker.columns[0]
            for s in (1, -1):
                if all(s * sum(a * b for a, b in zip(n, w)) >= 0 for n in normals):
                    return False
        return True

    def is_empty(self) -> bool:
        rows = self._rows()
        if not rows:
            return False
        normals = [n for n, _ in rows]
        r = rank(normals)
        if r == self.dim:
            return not self.vertices()
        # drop the lineality space: restrict to the row space
        basis = hermite_rows([list(n) for n in normals], self.dim)
        proj = RationalPolyhedron(
            len(basis),
            tuple(
                (tuple(sum(a * b for a, b in zip(n, bv)) for bv in basis), c)
                for n, c in self.halfspaces
            ),
            tuple(
                (tuple(sum(a * b for a, b in zip(n, bv)) for bv in basis), c)
                for n, c in self.equalities
            ),
        )
        # the projected system is over rationals in general; scaling is harmless
        return not proj.vertices()


def lattice_points(P: RationalPolyhedron) -> list[tuple[int, ...]]:
    """Integer points of a bounded polyhedron in lexicographic order."""
    if P.dim == 0:
        return [()] if P.contains(()) else []
    if not P.is_bounded():
        raise UnboundedPolyhedron("polyhedron is unbounded")
    verts = P.vertices()
    if not verts:
        return []
    lo = [math.ceil(min(v[i] for v in verts)) for i in range(P.dim)]
    hi = [math.floor(max(v[i] for v in verts)) for i in range(P.dim)]
    if any(a > b for a, b in zip(lo, hi)):
        return []
    return [x for x in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))) if P.contains(x)]
