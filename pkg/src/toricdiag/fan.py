"""Fans of smooth complete toric varieties.

A fan is stored as its primitive ray generators plus its maximal cones
(index tuples into the ray list).  All fans in the bundled databases are
simplicial and full-dimensional, which is what the checks here assume.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .lattice import IntMatrix, determinant, hermite_rows, rank, smith_normal_form, solve


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None, column: int | None = None):
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(loc + msg)
        self.line = line
        self.column = column


class ValidationError(ValueError):
    pass


class TorsionClassGroup(ValueError):
    pass


class NonSmoothWall(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Fan:
    dim: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        cones = tuple(tuple(sorted(int(i) for i in c)) for c in self.max_cones)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", cones)
        d = self.dim
        if d < 1:
            raise ValidationError("dimension must be positive")
        for k, r in enumerate(rays):
            if len(r) != d:
                raise ValidationError(f"ray {k} has length {len(r)}, expected {d}")
            if math.gcd(*r) != 1:
                raise ValidationError(f"ray {k} = {r} is not primitive")
        if len(set(rays)) != len(rays):
            raise ValidationError("duplicate rays")
        used = set()
        for c in cones:
            if len(c) != d or len(set(c)) != d:
                raise ValidationError(f"cone {c} does not have {d} distinct rays")
            if any(i < 0 or i >= len(rays) for i in c):
                raise ValidationError(f"cone {c} refers to a missing ray")
            if determinant([rays[i] for i in c]) == 0:
                raise ValidationError(f"cone {c} has linearly dependent rays")
            used.update(c)
        if len(used) != len(rays):
            missing = sorted(set(range(len(rays))) - used)
            raise ValidationError(f"rays {missing} lie in no maximal cone")
        if len(set(cones)) != len(cones):
            raise ValidationError("duplicate maximal cones")

    @property
    def n(self) -> int:
        return len(self.rays)

    @cached_property
    def ray_matrix(self) -> IntMatrix:
        """The n x d matrix B with the rays as rows."""
        return IntMatrix(self.rays, cols=self.dim)

    def __eq__(self, other):
        if not isinstance(other, Fan):
            return NotImplemented
        return (self.dim, self.rays, set(self.max_cones)) == (other.dim, other.rays, set(other.max_cones))

    def __hash__(self):
        return hash((self.dim, self.rays, frozenset(self.max_cones)))

    def to_dict(self) -> dict:
        return {"dim": self.dim, "rays": [list(r) for r in self.rays], "max_cones": [list(c) for c in self.max_cones]}


@dataclass(frozen=True)
class VarietyRecord:
    dim: int
    index: int
    fan: Fan
    source: str = "canonical"

    def to_json(self) -> str:
        return json.dumps(
            {"dim": self.dim, "index": self.index, "rays": [list(r) for r in self.fan.rays],
             "max_cones": [list(c) for c in self.fan.max_cones]},
            separators=(", ", ": "),
        )


def _record_from_obj(obj, line=None) -> VarietyRecord:
    if not isinstance(obj, dict):
        raise ParseError("record must be a JSON object", line)
    missing = {"dim", "rays", "max_cones"} - set(obj)
    if missing:
        raise ParseError(f"missing keys {sorted(missing)}", line)
    dim, rays, cones = obj["dim"], obj["rays"], obj["max_cones"]
    ok_int = lambda x: isinstance(x, int) and not isinstance(x, bool)
    if not ok_int(dim):
        raise ParseError("dim must be an integer", line)
    for name, val in (("rays", rays), ("max_cones", cones)):
        if not isinstance(val, list) or not all(isinstance(v, list) and all(ok_int(x) for x in v) for v in val):
            raise ParseError(f"{name} must be a list of integer lists", line)
    index = obj.get("index", 0)
    if not ok_int(index):
        raise ParseError("index must be an integer", line)
    fan = Fan(dim, tuple(map(tuple, rays)), tuple(map(tuple, cones)))
    return VarietyRecord(dim, index, fan, obj.get("source", "canonical"))


def parse_variety(data: bytes | str) -> VarietyRecord:
    """Parse one canonical fan record (a single JSON object)."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return _record_from_obj(obj)


def parse_collection(data: bytes | str) -> list[VarietyRecord]:
    """Parse a newline-delimited collection file; indices must ascend."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    out = []
    for lineno, line in enumerate(data.splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, lineno, exc.colno) from None
        rec = _record_from_obj(obj, lineno)
        if out and rec.index <= out[-1].index:
            raise ParseError("indices must be strictly ascending", lineno)
        out.append(rec)
    return out


# --- smoothness and completeness -------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str  # "singular", "facet", "orientation", "disconnected", "overlap"
    witness: tuple
    message: str

    def __str__(self):
        return f"{self.kind}: {self.message}"


def facet_incidence(fan: Fan) -> dict[tuple[int, ...], list[int]]:
    """Map each (d-1)-face of a maximal cone to the maximal cones containing it."""
    inc: dict[tuple[int, ...], list[int]] = defaultdict(list)
    for k, cone in enumerate(fan.max_cones):
        for tau in itertools.combinations(cone, fan.dim - 1):
            inc[tau].append(k)
    return inc


def _in_closed_cone(fan: Fan, cone, point) -> bool:
    coeffs = solve([list(col) for col in zip(*(fan.rays[i] for i in cone))], point)
    return coeffs is not None and all(c >= 0 for c in coeffs)


def validate_smooth_complete(fan: Fan) -> Violation | None:
    """Return the first violation of smoothness or completeness, or None."""
    for cone in fan.max_cones:
        det = determinant([fan.rays[i] for i in cone])
        if abs(det) != 1:
            return Violation("singular", cone, f"cone {cone} has determinant {det}")
    inc = facet_incidence(fan)
    for tau, cones in sorted(inc.items()):
        if len(cones) != 2:
            return Violation("facet", tau, f"face {tau} lies in {len(cones)} maximal cone(s)")
        # the two cones must lie on opposite sides of the face
        sides = []
        for k in cones:
            (extra,) = set(fan.max_cones[k]) - set(tau)
            sides.append(determinant([fan.rays[i] for i in tau] + [fan.rays[extra]]))
        if sides[0] * sides[1] >= 0:
            return Violation("orientation", tau, f"cones {cones} lie on the same side of {tau}")
    adj = defaultdict(set)
    for cones in inc.values():
        a, b = cones
        adj[a].add(b)
        adj[b].add(a)
    seen, stack = {0}, [0]
    while stack:
        for b in adj[stack.pop()]:
            if b not in seen:
                seen.add(b)
                stack.append(b)
    if len(seen) != len(fan.max_cones):
        return Violation("disconnected", tuple(sorted(seen)), "facet-adjacency graph is disconnected")
    # a connected oriented pseudomanifold could still wrap around more than once
    first = fan.max_cones[0]
    probe = [sum(fan.rays[i][j] for i in first) for j in range(fan.dim)]
    for cone in fan.max_cones[1:]:
        if _in_closed_cone(fan, cone, probe):
            return Violation("overlap", (first, cone), f"cones {first} and {cone} overlap")
    return None


def is_smooth_complete(fan: Fan) -> bool:
    return validate_smooth_complete(fan) is None


# --- class group -----------------------------------------------------------


@dataclass(frozen=True)
class DivisorClassMap:
    """The surjection Z^n -> Cl(X) = Z^(n-d) killing the image of the ray matrix."""

    matrix: IntMatrix

    @property
    def n(self) -> int:
        return self.matrix.ncols

    @property
    def cl_rank(self) -> int:
        return self.matrix.nrows

    def __call__(self, divisor: Sequence[int]) -> tuple[int, ...]:
        return self.matrix.apply(divisor)

    @cached_property
    def _section(self):
        snf = smith_normal_form(self.matrix)
        return snf

    def preimage(self, cl: Sequence[int]) -> tuple[int, ...]:
        """A deterministic integer preimage of a class."""
        if len(cl) != self.cl_rank:
            raise ValueError("class has the wrong length")
        if self.cl_rank == 0:
            return (0,) * self.n
        snf = self._section
        y = snf.U.apply(cl)
        x = []
        for i in range(self.n):
            if i < self.cl_rank:
                d = snf.S[i, i]
                if d == 0 or y[i] % d:
                    raise ValueError(f"class {tuple(cl)} has no integer preimage")
                x.append(y[i] // d)
            else:
                x.append(0)
        return snf.V.apply(x)


def class_group(fan: Fan, presentation: Sequence[Sequence[int]] | None = None) -> DivisorClassMap:
    """Presentation of Cl(X) from the fundamental exact sequence.

    By default the basis is the Hermite normal form of the cokernel rows of
    the Smith decomposition of B, which is deterministic.  An explicit
    ``presentation`` (for example one printed in a reference) is validated
    instead: it must kill B and be surjective.
    """
    B = fan.ray_matrix
    n, d = B.shape
    if presentation is not None:
        pi = IntMatrix(presentation, cols=n)
        if pi.nrows != n - d:
            raise ValueError(f"presentation must have {n - d} rows")
        if any(any(row) for row in (pi @ B).rows):
            raise ValueError("presentation does not vanish on the ray matrix")
        if pi.nrows and any(x != 1 for x in smith_normal_form(pi).diagonal):
            raise ValueError("presentation is not surjective")
        return DivisorClassMap(pi)
    snf = smith_normal_form(B)
    diag = snf.diagonal
    if any(x != 1 for x in diag):
        raise TorsionClassGroup(f"cokernel of the ray matrix has torsion (invariants {diag})")
    if n == d:
        return DivisorClassMap(IntMatrix([], cols=n))
    rows = hermite_rows([list(r) for r in snf.U.rows[d:]], n)
    return DivisorClassMap(IntMatrix(rows, cols=n))


# --- unimodularity ---------------------------------------------------------


def unimodular(fan: Fan) -> bool:
    """All maximal minors of B in {0, 1, -1} and B of full column rank."""
    rows = fan.rays
    d = fan.dim
    if rank(rows) < d:
        return False
    for sub in itertools.combinations(range(fan.n), d):
        if abs(determinant([rows[i] for i in sub])) > 1:
            return False
    return True


# --- walls (toric curves) --------------------------------------------------


@dataclass(frozen=True)
class Wall:
    """A (d-1)-cone shared by two maximal cones.

    ``relation`` is ``(1, 1, b_1, ..., b_{d-1})`` with
    ``u + u' + sum b_i u_i = 0`` where ``u``, ``u'`` are the rays opposite the
    wall and ``u_i`` the rays of ``tau`` in order.
    """

    tau: tuple[int, ...]
    sides: tuple[int, int]  # the two rays not in tau
    cones: tuple[int, int]  # indices of the two maximal cones
    relation: tuple[int, ...]

    @property
    def coefficients(self) -> dict[int, int]:
        """Intersection numbers D_rho . C keyed by ray index."""
        out = {self.sides[0]: 1, self.sides[1]: 1}
        out.update(zip(self.tau, self.relation[2:]))
        return out

    @property
    def intersection_numbers(self) -> tuple[int, ...]:
        return self.relation[2:]


def walls(fan: Fan) -> list[Wall]:
    if fan.dim < 2:
        return []
    out = []
    for tau, cones in sorted(facet_incidence(fan).items()):
        if len(cones) != 2:
            continue
        (i,) = set(fan.max_cones[cones[0]]) - set(tau)
        (j,) = set(fan.max_cones[cones[1]]) - set(tau)
        basis = [fan.rays[k] for k in (i,) + tau]
        # write u_j in the basis (u_i, u_tau...)
        coeffs = solve([list(col) for col in zip(*basis)], fan.rays[j])
        if coeffs is None or coeffs[0] != -1 or any(c.denominator != 1 for c in coeffs):
            raise NonSmoothWall(f"wall {tau}: cannot normalize the relation ({coeffs})")
        rel = (1, 1) + tuple(-int(c) for c in coeffs[1:])
        a, b = sorted((i, j))
        ca, cb = (cones[0], cones[1]) if a == i else (cones[1], cones[0])
        w = Wall(tau, (a, b), (ca, cb), rel)
        total = [sum(c * fan.rays[k][m] for c, k in zip(rel, (a, b) + tau)) for m in range(fan.dim)]
        assert not any(total), f"wall relation for {tau} does not vanish"
        out.append(w)
    return out


@dataclass(frozen=True)
class BondalCertificate:
    holds: bool
    per_wall: tuple[tuple[tuple[int, ...], tuple[int, ...], bool], ...] = field(repr=False)

    def __bool__(self):
        return self.holds

    @property
    def failures(self):
        return [(tau, a) for tau, a, ok in self.per_wall if not ok]


def bondal_criterion(fan: Fan, wall_list: list[Wall] | None = None) -> BondalCertificate:
    """Every toric curve has intersection numbers >= -1 with at most one -1."""
    wall_list = walls(fan) if wall_list is None else wall_list
    per_wall = []
    for w in wall_list:
        a = w.intersection_numbers
        ok = all(x >= -1 for x in a) and sum(1 for x in a if x == -1) <= 1
        per_wall.append((w.tau, a, ok))
    return BondalCertificate(all(ok for *_, ok in per_wall), tuple(per_wall))


def fano_check(fan: Fan, wall_list: list[Wall] | None = None) -> bool:
    """Ampleness of -K: (-K).C = 2 + sum(b_i) > 0 on every toric curve."""
    if fan.dim == 1:
        return sorted(fan.rays) == [(-1,), (1,)]
    wall_list = walls(fan) if wall_list is None else wall_list
    return all(2 + sum(w.intersection_numbers) > 0 for w in wall_list)


def facets_of_ray_polytope(rays: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Maximal cones of a smooth Fano fan recovered from its rays alone.

    For a smooth Fano variety the fan is the face fan of conv(rays); the
    facets are the unimodular d-subsets whose supporting hyperplane
    ``<m, u> = 1`` has every other ray strictly below 1.
    """
    rays = [tuple(r) for r in rays]
    d = len(rays[0])
    out = []
    for sub in itertools.combinations(range(len(rays)), d):
        if abs(determinant([rays[i] for i in sub])) != 1:
            continue
        m = solve([rays[i] for i in sub], [1] * d)
        if all(sum(Fraction(a) * b for a, b in zip(m, rays[k])) < 1 for k in range(len(rays)) if k not in sub):
            out.append(sub)
    return out
