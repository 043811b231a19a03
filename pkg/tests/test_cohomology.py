import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from toricdiag.cohomology import (
    CohomologyEngine,
    SimplicialModel,
    _rank_q,
    box_scan_cohomology,
    class_to_divisor,
    graded_hom,
    line_bundle_cohomology,
    reduced_cohomology_ranks,
)
from toricdiag.database import get_variety, load_database
from toricdiag.fan import class_group
from toricdiag.lattice import RationalPolyhedron, lattice_points, rank

from fans import F1, P1, P1xP1, P2, product, projective_space, random_divisors
from reference_data import (
    CYCLE_PAIR_200,
    HOM0_851,
    H_MINUS_200,
    H_PLUS_200,
    MATRIX_ORDER_851,
    PI_200,
    PI_851,
)


def sections_oracle(fan, a):
    P = RationalPolyhedron.from_inequalities(fan.dim, [(u, -x) for u, x in zip(fan.rays, a)])
    return len(lattice_points(P))


# --- reduced cohomology ------------------------------------------------------


def test_reduced_ranks_examples():
    m = SimplicialModel(P1)
    assert m.reduced_ranks(0) == (1, 0)
    assert m.reduced_ranks(0b01) == (0, 0)
    assert m.reduced_ranks(0b11) == (0, 1)


def test_reduced_ranks_sphere():
    # the full fan complex of P^d is the boundary of a simplex, a (d-1)-sphere
    for d in range(1, 5):
        m = SimplicialModel(projective_space(d))
        full = (1 << (d + 1)) - 1
        assert m.reduced_ranks(full) == (0,) * d + (1,)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.dictionaries(st.integers(0, 7), st.integers(-5, 5), max_size=6), max_size=7))
def test_sparse_rank_matches_dense(rows):
    dense = [[r.get(c, 0) for c in range(8)] for r in rows]
    assert _rank_q(rows) == (rank(dense) if dense else 0)


def test_reduced_ranks_two_circles():
    # two disjoint triangles' boundaries on six vertices
    edges = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]
    faces = {0} | {1 << v for v in range(6)} | {(1 << a) | (1 << b) for a, b in edges}
    assert reduced_cohomology_ranks(sorted(faces), 2) == (0, 1, 2)


# --- line bundles ---------------------------------------------------------------


def test_p1_minus_two():
    assert line_bundle_cohomology(P1, (-2, 0)).h == (0, 1)
    assert CohomologyEngine(P1).ranks((-2, 0)).h == (0, 1)


def test_projective_plane_twists():
    eng = CohomologyEngine(P2)
    for k in range(-6, 5):
        h = eng.ranks((k, 0, 0)).h
        if k >= 0:
            assert h == ((k + 1) * (k + 2) // 2, 0, 0)
        elif k >= -2:
            assert h == (0, 0, 0)
        else:
            assert h == (0, 0, (k + 1) * (k + 2) // 2)


@pytest.mark.parametrize("cl,expected", [((0, 0, 3), H_PLUS_200), ((0, 0, -3), H_MINUS_200)])
def test_index_200_values(cl, expected):
    fan = get_variety(5, 200).fan
    pi = class_group(fan, PI_200)
    a = class_to_divisor(cl, pi)
    assert pi(a) == cl
    assert CohomologyEngine(fan, pi).ranks(a).h == expected
    assert line_bundle_cohomology(fan, a).h == expected


def test_class_to_divisor():
    pi = class_group(P1)
    assert class_to_divisor((0,), pi) == (0, 0)
    one = (1,) if pi.matrix[0, 0] == 1 else (-1,)
    assert sorted(class_to_divisor(one, pi)) == [0, 1]


def test_graded_hom_identity_and_pair():
    fan = get_variety(5, 200).fan
    eng = CohomologyEngine(fan, class_group(fan, PI_200))
    src, dst = CYCLE_PAIR_200
    assert graded_hom(eng, src, src).h == (1, 0, 0, 0, 0, 0)
    # Hom(O(D), O(E)) is computed from the class E - D
    assert graded_hom(eng, src, dst).h == H_MINUS_200
    assert graded_hom(eng, dst, src).h == H_PLUS_200


def test_graded_hom_851_bottom_row():
    fan = get_variety(5, 851).fan
    eng = CohomologyEngine(fan, class_group(fan, PI_851))
    row = [graded_hom(eng, e, (0, 0, 0)) for e in MATRIX_ORDER_851]
    assert [h[0] for h in row] == HOM0_851[-1]
    assert all(not any(h.h[1:]) for h in row)


def test_engine_memo_uses_class():
    fan = get_variety(5, 851).fan
    pi = class_group(fan, PI_851)
    eng = CohomologyEngine(fan, pi)
    a = class_to_divisor((0, 0, -3), pi)
    first = eng.class_ranks((0, 0, -3), a)
    shifted = tuple(x + sum(u[k] for k in range(5)) for x, u in zip(a, fan.rays))
    assert eng.ranks(shifted) == first


# --- properties -----------------------------------------------------------------


SMALL = [P1, P2, P1xP1, F1, product(P2, P1)] + [r.fan for d in (2, 3) for r in load_database(d)]


def serre_dual(a):
    return tuple(-1 - x for x in a)


def test_serre_duality_and_sections():
    rng = random.Random(2024)
    engines = {}
    for fan, a in random_divisors(SMALL, 120, rng):
        eng = engines.setdefault(id(fan), CohomologyEngine(fan))
        h = eng.ranks(a).h
        assert eng.ranks(serre_dual(a)).h == h[::-1]
        assert h[0] == sections_oracle(fan, a)


def test_chamber_route_matches_engine():
    rng = random.Random(7)
    for fan, a in random_divisors(SMALL, 60, rng, spread=3):
        assert line_bundle_cohomology(fan, a) == CohomologyEngine(fan).ranks(a)


def test_linear_equivalence():
    rng = random.Random(3)
    for fan, a in random_divisors(SMALL, 40, rng):
        eng = CohomologyEngine(fan)
        h = eng.ranks(a)
        for _ in range(5):
            m = [rng.randint(-3, 3) for _ in range(fan.dim)]
            b = tuple(x + sum(mi * ui for mi, ui in zip(m, u)) for x, u in zip(a, fan.rays))
            assert eng.ranks(b) == h


def test_box_scan_stabilizes():
    rng = random.Random(9)
    for fan, a in random_divisors([r.fan for d in (1, 2) for r in load_database(d)], 30, rng, spread=3):
        r = max(abs(x) for x in a) + 2
        first = box_scan_cohomology(fan, a, r)
        assert box_scan_cohomology(fan, a, r + 4) == first
        assert first == CohomologyEngine(fan).ranks(a)


def test_euler_characteristic_riemann_roch_p2():
    # chi(O(k)) on the projective plane is (k+1)(k+2)/2 for every k
    eng = CohomologyEngine(P2)
    for a in itertools.product(range(-4, 3), repeat=3):
        k = sum(a)
        assert eng.ranks(a).euler == (k + 1) * (k + 2) // 2
