"""Cohomology of line bundles on smooth complete toric varieties.

For ``D = sum a_rho D_rho`` the cohomology splits over characters m:

    H^p(X, O(D)) = (+)_m  H~^{p-1}(Sigma_{V(m)}),   V(m) = {rho : <m, u_rho> < -a_rho}

where ``Sigma_R`` is the full subcomplex of the fan's simplicial model on
the ray set R.  Characters with the same violating pattern R form a
chamber ``{m : <m,u> <= -a-1 on R, <m,u> >= -a off R}``, so the sum is
over patterns with nonzero reduced cohomology, weighted by lattice-point
counts.

Two routes evaluate that sum:

* :func:`line_bundle_cohomology` walks all 2^n patterns and counts the
  points of each chamber polyhedron with :func:`lattice.lattice_points`.
  Slow, but straightforward.
* :class:`CohomologyEngine` (used by the survey) encloses every bounded
  chamber in one box, computed from the candidate chamber vertices, and
  groups the box's characters by pattern with numpy integer arithmetic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fan import DivisorClassMap, Fan
from .lattice import RationalPolyhedron, UnboundedPolyhedron, determinant, lattice_points


class InfiniteContribution(RuntimeError):
    """A pattern with nonzero reduced cohomology has an unbounded chamber."""


@dataclass(frozen=True)
class CohomologyRanks:
    h: tuple[int, ...]

    def __getitem__(self, p):
        return self.h[p]

    def __iter__(self):
        return iter(self.h)

    def __len__(self):
        return len(self.h)

    @property
    def total(self) -> int:
        return sum(self.h)

    @property
    def euler(self) -> int:
        return sum((-1) ** p * x for p, x in enumerate(self.h))


# --- simplicial model ------------------------------------------------------


class SimplicialModel:
    """Faces of the fan as bitmasks over ray indices (the empty face included)."""

    def __init__(self, fan: Fan):
        self.dim = fan.dim
        self.n = fan.n
        faces = set()
        for cone in fan.max_cones:
            for k in range(len(cone) + 1):
                for sub in itertools.combinations(cone, k):
                    faces.add(sum(1 << i for i in sub))
        self.faces = sorted(faces, key=lambda f: (f.bit_count(), f))
        self.max_faces = [sum(1 << i for i in c) for c in fan.max_cones]
        self._memo: dict[int, tuple[int, ...]] = {}

    def full_subcomplex(self, mask: int) -> list[int]:
        return [f for f in self.faces if f & ~mask == 0]

    def reduced_ranks(self, mask: int) -> tuple[int, ...]:
        """Reduced Betti numbers of the full subcomplex on ``mask``, degrees -1 .. d-1."""
        got = self._memo.get(mask)
        if got is None:
            got = self._memo[mask] = reduced_cohomology_ranks(self.full_subcomplex(mask), self.dim)
        return got


def _rank_q(rows: list[dict[int, int]]) -> int:
    """Rank over Q of a sparse integer matrix given as {col: value} rows."""
    rows = [r for r in ({c: v for c, v in row.items() if v} for row in rows) if r]
    rank = 0
    while rows:
        # pick the sparsest row and its smallest entry as pivot
        piv_row = min(rows, key=len)
        col = min(piv_row, key=lambda c: (abs(piv_row[c]), c))
        p = piv_row[col]
        rows.remove(piv_row)
        rank += 1
        nxt = []
        for r in rows:
            q = r.get(col)
            if q:
                new = {}
                for c in set(r) | set(piv_row):
                    v = p * r.get(c, 0) - q * piv_row.get(c, 0)
                    if v:
                        new[c] = v
                if new:
                    g = math.gcd(*new.values())
                    if g > 1:
                        new = {c: v // g for c, v in new.items()}
                    nxt.append(new)
            else:
                nxt.append(r)
        rows = nxt
    return rank


def reduced_cohomology_ranks(faces: Sequence[int], dim: int) -> tuple[int, ...]:
    """Reduced cohomology ranks over Q of a simplicial complex.

    ``faces`` are bitmasks closed under subsets (the empty face included
    when the complex is nonempty, and alone for the empty complex, whose
    only reduced cohomology is in degree -1).  Returns a vector indexed by
    degrees -1 .. dim-1.
    """
    by_size: list[list[int]] = [[] for _ in range(dim + 1)]
    for f in faces:
        by_size[f.bit_count()].append(f)
    index = [{f: k for k, f in enumerate(fs)} for fs in by_size]
    # boundary rank from size k+1 faces to size k faces
    ranks = [0] * (dim + 2)
    for k in range(dim):
        rows = []
        for f in by_size[k + 1]:
            row = {}
            m = f
            # vertices in increasing order; removing the i-th gives sign (-1)^i
            bits = []
            while m:
                v = m & -m
                bits.append(v)
                m ^= v
            for i, v in enumerate(bits):
                row[index[k][f ^ v]] = -1 if i % 2 else 1
            rows.append(row)
        ranks[k + 1] = _rank_q(rows)
    # degree q = size - 1; b~^q = C^q - rank(d: C^q -> C^{q+1}) - rank(d: C^{q-1} -> C^q)
    out = []
    for size in range(dim + 1):
        out.append(len(by_size[size]) - ranks[size + 1] - ranks[size])
    return tuple(out)


# --- chamber route ---------------------------------------------------------


def chamber(fan: Fan, a: Sequence[int], mask: int) -> RationalPolyhedron:
    """Characters whose violating pattern is exactly ``mask``."""
    hs = []
    for k, u in enumerate(fan.rays):
        if mask >> k & 1:
            hs.append((tuple(-x for x in u), a[k] + 1))  # <m,u> <= -a-1
        else:
            hs.append((tuple(u), -a[k]))  # <m,u> >= -a
    return RationalPolyhedron.from_inequalities(fan.dim, hs)


def line_bundle_cohomology(fan: Fan, a: Sequence[int], model: SimplicialModel | None = None) -> CohomologyRanks:
    """h^p(X, O(sum a_rho D_rho)) by summing over violating-pattern chambers."""
    if len(a) != fan.n:
        raise ValueError("divisor length does not match the ray count")
    model = model or SimplicialModel(fan)
    d = fan.dim
    h = [0] * (d + 1)
    for mask in range(1 << fan.n):
        red = model.reduced_ranks(mask)
        if not any(red):
            continue
        try:
            count = len(lattice_points(chamber(fan, a, mask)))
        except UnboundedPolyhedron:
            raise InfiniteContribution(f"pattern {mask:b} has an unbounded chamber") from None
        if count:
            for p in range(d + 1):
                h[p] += count * red[p]
    return CohomologyRanks(tuple(h))


def box_scan_cohomology(fan: Fan, a: Sequence[int], radius: int, model: SimplicialModel | None = None) -> CohomologyRanks:
    """Sum reduced cohomology over every character with ``|m_i| <= radius``."""
    model = model or SimplicialModel(fan)
    h = [0] * (fan.dim + 1)
    for m in itertools.product(range(-radius, radius + 1), repeat=fan.dim):
        mask = 0
        for k, u in enumerate(fan.rays):
            if sum(x * y for x, y in zip(m, u)) < -a[k]:
                mask |= 1 << k
        red = model.reduced_ranks(mask)
        for p in range(fan.dim + 1):
            h[p] += red[p]
    return CohomologyRanks(tuple(h))


def class_to_divisor(cl: Sequence[int], pi: DivisorClassMap) -> tuple[int, ...]:
    return pi.preimage(cl)


# --- fast engine -----------------------------------------------------------


class CohomologyEngine:
    """Memoized line-bundle cohomology for one fan.

    Every chamber that contributes is bounded (checked once per pattern),
    and a bounded chamber is the convex hull of its vertices.  Each vertex
    solves ``<m, u_s> = -a_s - t_s`` for a basis S of rays and ``t`` in
    {0, 1}^S, so the box spanned by all such candidate points contains
    every contributing character.  Characters in the box are grouped by
    violating pattern, which partitions them into chamber point sets.
    """

    def __init__(self, fan: Fan, pi: DivisorClassMap | None = None):
        self.fan = fan
        self.pi = pi
        self.model = SimplicialModel(fan)
        d, n = fan.dim, fan.n
        self.B = np.array(fan.rays, dtype=np.int64)
        adj, dets, subsets = [], [], []
        for sub in itertools.combinations(range(n), d):
            M = [fan.rays[i] for i in sub]
            det = determinant(M)
            if det == 0:
                continue
            # adjugate: inv(M) = adj / det, rows of M are the rays
            adj.append(_adjugate(M))
            dets.append(det)
            subsets.append(sub)
        self._adj = np.array(adj, dtype=np.int64)  # (nb, d, d)
        self._det = np.array(dets, dtype=np.int64)
        self._subsets = np.array(subsets, dtype=np.int64)
        self._tvecs = np.array(list(itertools.product((0, 1), repeat=d)), dtype=np.int64).T  # (d, 2^d)
        self._weights = (np.int64(1) << np.arange(n, dtype=np.int64))
        # candidate extreme rays of any chamber's recession cone
        dirs = set()
        for sub in itertools.combinations(range(n), d - 1):
            w = _cross([fan.rays[i] for i in sub], d)
            if any(w):
                dirs.add(w)
                dirs.add(tuple(-x for x in w))
        self._dir_vals = np.array(sorted(dirs), dtype=np.int64).reshape(-1, d) @ self.B.T
        self._checked: set[int] = set()
        self._class_memo: dict[tuple[int, ...], CohomologyRanks] = {}

    def box(self, a: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
        a = np.asarray(a, dtype=np.int64)
        rhs = -a[self._subsets][:, :, None] - self._tvecs[None, :, :]  # (nb, d, 2^d)
        num = np.einsum("bij,bjt->bit", self._adj, rhs)  # vertex * det
        det = self._det[:, None, None]
        sgn = np.sign(det)
        num, det = num * sgn, det * sgn
        lo = np.floor_divide(num, det).min(axis=(0, 2))
        hi = -np.floor_divide(-num, det)
        return lo, hi.max(axis=(0, 2))

    def _check_bounded(self, mask: int):
        if mask in self._checked:
            return
        in_r = (mask >> np.arange(self.fan.n)) & 1 == 1
        v = self._dir_vals
        if np.any(np.all(v[:, in_r] <= 0, axis=1) & np.all(v[:, ~in_r] >= 0, axis=1)):
            raise InfiniteContribution(f"pattern {mask:b} has an unbounded chamber")
        self._checked.add(mask)

    def ranks(self, a: Sequence[int]) -> CohomologyRanks:
        """h^p(X, O(D)) for the torus-invariant divisor with coefficients ``a``."""
        d = self.fan.dim
        lo, hi = self.box(a)
        axes = [np.arange(l, h + 1, dtype=np.int64) for l, h in zip(lo, hi)]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
        vals = grid @ self.B.T
        viol = vals < -np.asarray(a, dtype=np.int64)
        patterns = viol.astype(np.int64) @ self._weights
        uniq, counts = np.unique(patterns, return_counts=True)
        h = [0] * (d + 1)
        for mask, count in zip(uniq.tolist(), counts.tolist()):
            red = self.model.reduced_ranks(mask)
            if any(red):
                self._check_bounded(mask)
                for p in range(d + 1):
                    h[p] += count * red[p]
        return CohomologyRanks(tuple(h))

    def class_ranks(self, cl: Sequence[int], representative: Sequence[int] | None = None) -> CohomologyRanks:
        """Memoized cohomology of a divisor class; any representative gives the same answer."""
        key = tuple(cl)
        got = self._class_memo.get(key)
        if got is None:
            if representative is None:
                representative = class_to_divisor(key, self.pi)
            got = self._class_memo[key] = self.ranks(representative)
        return got


def _cross(rows: Sequence[Sequence[int]], d: int) -> tuple[int, ...]:
    """Generalized cross product: spans the kernel of a rank d-1 matrix with d-1 rows."""
    if d == 1:
        return (1,)
    return tuple(
        (-1) ** j * determinant([list(r[:j]) + list(r[j + 1:]) for r in rows]) for j in range(d)
    )


def _adjugate(M: Sequence[Sequence[int]]) -> list[list[int]]:
    """Integer adjugate so that ``M @ adj == det * I`` (with rays as rows of M).

    ``m = adj @ c / det`` solves ``M m = c``.
    """
    d = len(M)
    if d == 1:
        return [[1]]
    adj = [[0] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(M) if k != i]
            adj[j][i] = (-1) ** (i + j) * determinant([list(r) for r in minor])
    return adj


def graded_hom(engine: CohomologyEngine, source: Sequence[int], target: Sequence[int]) -> CohomologyRanks:
    """ranks of Hom(O(source), O(target)[l]) = h^l(O(target - source))."""
    diff = tuple(t - s for s, t in zip(source, target))
    return engine.class_ranks(diff)
