"""The periodic arrangement {<m, u_rho> in Z} on the torus M_R / M.

Its cells index the terms of the Hanlon-Hicks-Lazarev resolution of the
diagonal: a k-cell contributes one free summand in homological degree k,
twisted by the label of the cell.  The labels of all cells form the
Bondal-Thomsen collection.

A cell is described by its covector: for every ray, the integer
``floor(<m, u_rho>)`` together with whether ``<m, u_rho>`` is an integer
on the cell.  Translating by a lattice vector l changes the floors by
``B l``; covectors are normalized so the floors on the first maximal
cone vanish, which picks one lift per torus cell.

Enumeration works locally: every cell's closure is a bounded polytope
with a vertex, and near a vertex v the arrangement looks like the
central arrangement of the hyperplanes through v.  The faces of that
central arrangement are joins of its rays (one-dimensional faces), which
are found from (d-1)-subsets of the normals.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .fan import DivisorClassMap, Fan
from .lattice import determinant, rank, solve


class DegenerateArrangement(ValueError):
    pass


@dataclass(frozen=True)
class QuotientCell:
    dim: int
    floors: tuple[int, ...]  # floor(<m, u_rho>) on the canonical lift
    integral: tuple[bool, ...]  # whether <m, u_rho> is constant and integral
    point: tuple[Fraction, ...]  # a relative-interior point of the canonical lift

    @property
    def covector(self) -> tuple:
        """Per ray: an integer (on the hyperplane) or an open interval (c, c+1)."""
        return tuple(f if i else (f, f + 1) for f, i in zip(self.floors, self.integral))

    def divisor(self, convention: str = "hhl") -> tuple[int, ...]:
        """Torus-invariant label: floor(-<m,u>) (HHL) or -floor(<m,u>) (Bondal)."""
        if convention == "hhl":
            return tuple(-f if i else -f - 1 for f, i in zip(self.floors, self.integral))
        if convention == "bondal":
            return tuple(-f for f in self.floors)
        raise ValueError(f"unknown labeling convention {convention!r}")


def _frac_vec(v) -> tuple[Fraction, ...]:
    return tuple(x - math.floor(x) for x in v)


def vertices(fan: Fan) -> list[tuple[Fraction, ...]]:
    """Vertices of the arrangement modulo Z^d, as points of [0, 1)^d."""
    d = fan.dim
    found = {tuple(Fraction(0) for _ in range(d))}
    seen_groups = set()
    for sub in itertools.combinations(range(fan.n), d):
        rows = [fan.rays[i] for i in sub]
        det = determinant(rows)
        if abs(det) <= 1:
            continue
        # the group B_S^{-1} Z^d / Z^d, generated by the columns of the inverse
        gens = []
        for j in range(d):
            e = [0] * d
            e[j] = 1
            gens.append(_frac_vec(solve(rows, e)))
        key = frozenset(gens)
        if key in seen_groups:
            continue
        seen_groups.add(key)
        group = {tuple(Fraction(0) for _ in range(d))}
        frontier = list(group)
        while frontier:
            nxt = []
            for p in frontier:
                for g in gens:
                    q = _frac_vec(a + b for a, b in zip(p, g))
                    if q not in group:
                        group.add(q)
                        nxt.append(q)
            frontier = nxt
        found |= group
    return sorted(found)


def _cross(rows, d):
    if d == 1:
        return (1,)
    return tuple((-1) ** j * determinant([list(r[:j]) + list(r[j + 1:]) for r in rows]) for j in range(d))


class _Canon:
    """Translate covectors to the canonical lift (floors zero on the first cone)."""

    def __init__(self, fan: Fan):
        self.fan = fan
        self.base = fan.max_cones[0]
        rows = [fan.rays[i] for i in self.base]
        # B_S is unimodular, so its inverse is integral
        d = fan.dim
        self.inv_cols = []
        for j in range(d):
            e = [0] * d
            e[j] = 1
            self.inv_cols.append([int(x) for x in solve(rows, e)])

    def shift(self, floors) -> tuple[int, ...]:
        """Lattice vector l with (floors + B l) vanishing on the base cone."""
        d = self.fan.dim
        target = [-floors[i] for i in self.base]
        return tuple(sum(self.inv_cols[j][k] * target[j] for j in range(d)) for k in range(d))


def enumerate_cells(fan: Fan) -> list[QuotientCell]:
    """Every cell of the arrangement on M_R / M, once each, sorted by (dim, floors, integral)."""
    d, n = fan.dim, fan.n
    if any(not any(u) for u in fan.rays):
        raise DegenerateArrangement("zero normal vector")
    canon = _Canon(fan)
    rank_memo: dict[int, int] = {}

    def zero_rank(mask: int) -> int:
        got = rank_memo.get(mask)
        if got is None:
            rows = [fan.rays[k] for k in range(n) if mask >> k & 1]
            got = rank_memo[mask] = rank(rows) if rows else 0
        return got

    cells: dict[tuple, QuotientCell] = {}
    for v in vertices(fan):
        vals = [sum(a * b for a, b in zip(v, u)) for u in fan.rays]
        local = [k for k in range(n) if vals[k].denominator == 1]
        # one-dimensional faces of the local central arrangement
        rays: dict[tuple[int, int], tuple[int, ...]] = {}
        for sub in itertools.combinations(local, d - 1):
            w = _cross([fan.rays[k] for k in sub], d)
            if not any(w):
                continue
            for s in (1, -1):
                ws = tuple(s * x for x in w)
                pos = neg = 0
                for k in local:
                    t = sum(a * b for a, b in zip(ws, fan.rays[k]))
                    if t > 0:
                        pos |= 1 << k
                    elif t < 0:
                        neg |= 1 << k
                rays.setdefault((pos, neg), ws)
        # all faces are conformal joins of rays; keep one witness direction each
        faces: dict[tuple[int, int], tuple[int, ...]] = {(0, 0): (0,) * d}
        faces.update(rays)
        frontier = list(rays)
        ray_items = list(rays.items())
        while frontier:
            nxt = []
            for pos, neg in frontier:
                w = faces[(pos, neg)]
                for (rp, rn), rw in ray_items:
                    if pos & rn or neg & rp:
                        continue
                    key = (pos | rp, neg | rn)
                    if key not in faces:
                        faces[key] = tuple(a + b for a, b in zip(w, rw))
                        nxt.append(key)
            frontier = nxt
        # distance of each non-integral value to the nearest integer bounds the step
        gap = min([min(x - math.floor(x), math.ceil(x) - x) for x in vals if x.denominator != 1] + [Fraction(1)])
        local_mask = sum(1 << k for k in local)
        for (pos, neg), w in faces.items():
            zero = local_mask & ~(pos | neg)
            dim = d - zero_rank(zero)
            floors, integral = [], []
            for k in range(n):
                c = vals[k]
                if pos >> k & 1:
                    floors.append(int(c)); integral.append(False)
                elif neg >> k & 1:
                    floors.append(int(c) - 1); integral.append(False)
                elif zero >> k & 1:
                    floors.append(int(c)); integral.append(True)
                else:
                    floors.append(math.floor(c)); integral.append(False)
            shift = canon.shift(floors)
            bl = [sum(a * b for a, b in zip(u, shift)) for u in fan.rays]
            floors = tuple(f + t for f, t in zip(floors, bl))
            key = (floors, tuple(integral))
            if key in cells:
                continue
            slope = max([abs(sum(a * b for a, b in zip(w, u))) for u in fan.rays] + [1])
            eps = gap / (2 * slope)
            point = tuple(x + eps * y + s for x, y, s in zip(v, w, shift))
            cells[key] = QuotientCell(dim, floors, tuple(integral), point)
    return sorted(cells.values(), key=lambda c: (c.dim, c.floors, c.integral))


def resolution_rank_vector(cells: Sequence[QuotientCell], dim: int | None = None) -> tuple[int, ...]:
    """Number of free summands in each homological degree (k-cells in degree k)."""
    d = max(c.dim for c in cells) if dim is None else dim
    r = [0] * (d + 1)
    for c in cells:
        r[c.dim] += 1
    return tuple(r)


def euler_characteristic(cells: Sequence[QuotientCell]) -> int:
    return sum((-1) ** c.dim for c in cells)


@dataclass(frozen=True)
class BTCollection:
    classes: tuple[tuple[int, ...], ...]  # lexicographically sorted, distinct
    representatives: dict  # class -> torus-invariant divisor of the first cell with that label
    cell_labels: tuple[tuple[int, ...], ...]  # label of each cell, in cell order

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def __contains__(self, cl):
        return tuple(cl) in self.representatives


def bondal_thomsen_collection(
    fan: Fan, pi: DivisorClassMap, cells: Sequence[QuotientCell] | None = None, convention: str = "hhl"
) -> BTCollection:
    """Distinct classes pi(label(cell)) over all cells of the quotient complex."""
    cells = enumerate_cells(fan) if cells is None else cells
    reps: dict[tuple[int, ...], tuple[int, ...]] = {}
    labels = []
    for c in cells:
        div = c.divisor(convention)
        cl = pi(div)
        labels.append(cl)
        reps.setdefault(cl, div)
    return BTCollection(tuple(sorted(reps)), reps, tuple(labels))


def dump_cells(fan: Fan, pi: DivisorClassMap, cells: Sequence[QuotientCell] | None = None) -> str:
    """Text dump, one cell per line: dimension, covector, representative, label."""
    cells = enumerate_cells(fan) if cells is None else cells
    out = []
    for c in cells:
        cov = " ".join(str(f) if i else f"({f},{f + 1})" for f, i in zip(c.floors, c.integral))
        pt = " ".join(str(x) for x in c.point)
        label = " ".join(map(str, pi(c.divisor())))
        out.append(f"{c.dim}\t{cov}\t{pt}\t{label}")
    return "\n".join(out) + "\n"
