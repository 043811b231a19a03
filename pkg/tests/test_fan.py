import json
import random

import pytest

from toricdiag.database import get_variety, load_database
from toricdiag.fan import (
    Fan,
    NonSmoothWall,
    ParseError,
    TorsionClassGroup,
    ValidationError,
    bondal_criterion,
    class_group,
    fano_check,
    is_smooth_complete,
    parse_collection,
    parse_variety,
    unimodular,
    validate_smooth_complete,
    walls,
)
from toricdiag.lattice import IntMatrix, determinant

from fans import F1, F2, F3, P1, P1xP1, P2, product, projective_space
from reference_data import PI_200, PI_851, RAYS_200, RAYS_851


# --- parsing ----------------------------------------------------------------


def test_parse_p1():
    rec = parse_variety(b'{"dim": 1, "rays": [[1], [-1]], "max_cones": [[0], [1]]}')
    assert rec.fan == P1
    assert validate_smooth_complete(rec.fan) is None


def test_parse_index_200_keeps_ray_order():
    text = json.dumps({"dim": 5, "index": 200, "rays": RAYS_200, "max_cones": [list(c) for c in get_variety(5, 200).fan.max_cones]})
    rec = parse_variety(text)
    assert list(rec.fan.rays) == RAYS_200
    assert rec.fan == get_variety(5, 200).fan


@pytest.mark.parametrize(
    "text",
    [
        '{"dim": 1, "rays": [[1], [-1]]}',
        '{"dim": 1, "rays": [[1], [-1]], "max_cones": [[0], [1]]',
        '{"dim": "1", "rays": [[1], [-1]], "max_cones": [[0], [1]]}',
        '{"dim": 1, "rays": [[1.5], [-1]], "max_cones": [[0], [1]]}',
        "[1, 2]",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_variety(text)


def test_parse_error_location():
    with pytest.raises(ParseError) as exc:
        parse_collection('{"dim": 1, "index": 0, "rays": [[1], [-1]], "max_cones": [[0], [1]]}\n{"dim": 1,')
    assert exc.value.line == 2


def test_collection_indices_ascend():
    line = '{"dim": 1, "index": 0, "rays": [[1], [-1]], "max_cones": [[0], [1]]}\n'
    with pytest.raises(ParseError):
        parse_collection(line + line)


@pytest.mark.parametrize(
    "dim,rays,cones",
    [
        (5, [(0, 0, 2, 0, 0)] + [tuple(int(i == j) for j in range(5)) for i in range(5)], [(0, 1, 2, 3, 4)]),
        (2, [(1, 0), (0, 1)], [(0,)]),
        (2, [(1, 0), (1, 0), (0, 1)], [(0, 2)]),
        (2, [(1, 0), (2, 1), (0, 1)], [(0, 2)]),
        (2, [(1, 0), (0, 1)], [(0, 5)]),
        (2, [(1, 0), (-1, 0)], [(0, 1)]),
    ],
)
def test_structural_validation(dim, rays, cones):
    with pytest.raises(ValidationError):
        Fan(dim, rays, cones)


# --- smoothness and completeness ------------------------------------------------


def test_small_fans_valid():
    for f in (P1, P2, P1xP1, F1, F2, projective_space(4)):
        assert validate_smooth_complete(f) is None


def test_missing_cone_detected():
    broken = Fan(2, P1xP1.rays, P1xP1.max_cones[:-1])
    v = validate_smooth_complete(broken)
    assert v is not None and v.kind == "facet"


def test_singular_cone_detected():
    f = Fan(2, [(1, 0), (1, 2), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
    assert validate_smooth_complete(f).kind == "singular"


def test_orientation_detected():
    f = Fan(2, [(1, 0), (0, 1), (1, 1)], [(0, 1), (0, 2)])
    assert validate_smooth_complete(f).kind in ("orientation", "facet")


def test_double_cover_detected():
    # unimodular cones winding twice around the origin: every local check passes
    rays = [(1, 0), (-3, 1), (-1, 0), (-3, -1), (-2, -1), (-3, -2), (2, 1), (1, 1), (0, 1), (-1, -3), (0, -1)]
    cones = [(k, (k + 1) % len(rays)) for k in range(len(rays))]
    f = Fan(2, rays, cones)
    assert validate_smooth_complete(f).kind == "overlap"


def test_every_database_fan_is_smooth_complete_fano():
    for d in range(1, 6):
        for rec in load_database(d):
            assert is_smooth_complete(rec.fan), (d, rec.index)
            assert fano_check(rec.fan), (d, rec.index)


def test_database_fans_with_a_cone_removed_fail():
    rng = random.Random(5)
    for d in range(2, 6):
        db = load_database(d)
        for rec in rng.sample(db, min(10, len(db))):
            k = rng.randrange(len(rec.fan.max_cones))
            cones = rec.fan.max_cones[:k] + rec.fan.max_cones[k + 1:]
            try:
                f = Fan(d, rec.fan.rays, cones)
            except ValidationError:
                continue  # a ray lost its last cone
            assert not is_smooth_complete(f)


# --- class group ----------------------------------------------------------------


def test_class_group_p1():
    assert class_group(P1).matrix.tolist() in ([[1, 1]], [[-1, -1]])


def test_class_group_kills_rays_everywhere():
    for d in range(1, 6):
        for rec in load_database(d):
            pi = class_group(rec.fan)
            assert pi.cl_rank == rec.fan.n - d
            assert not any(any(r) for r in (pi.matrix @ rec.fan.ray_matrix).rows)


@pytest.mark.parametrize("index,rays,pi", [(200, RAYS_200, PI_200), (851, RAYS_851, PI_851)])
def test_reference_presentations(index, rays, pi):
    fan = get_variety(5, index).fan
    assert list(fan.rays) == rays
    given = class_group(fan, pi)
    ours = class_group(fan)
    # same kernel: each presentation factors through the other by a unimodular change of basis
    assert not any(any(r) for r in (given.matrix @ fan.ray_matrix).rows)
    basis = [ours.preimage(e) for e in ([1, 0, 0], [0, 1, 0], [0, 0, 1])]
    change = [[given(b)[i] for b in basis] for i in range(3)]
    assert abs(determinant(change)) == 1
    for a in ([1, 2, 0, -1, 3, 0, 0, 1], [0, 0, 0, 0, 0, 0, 0, 1]):
        assert given(a) == tuple(sum(c * x for c, x in zip(row, ours(a))) for row in change)


def test_presentation_rejected():
    with pytest.raises(ValueError):
        class_group(P2, [[1, 1, 2]])
    with pytest.raises(ValueError):
        class_group(P2, [[2, 2, 2]])


def test_torsion_rejected():
    # every maximal minor is even, so Z^4 / B Z^2 has 2-torsion
    g = Fan(2, [(1, 0), (-1, 0), (1, 2), (-1, -2)], [(0, 2), (1, 2), (1, 3), (0, 3)])
    with pytest.raises(TorsionClassGroup):
        class_group(g)


def test_preimage():
    pi = class_group(P1)
    assert pi.preimage((0,)) == (0, 0)
    a = pi.preimage((1,) if pi.matrix[0, 0] == 1 else (-1,))
    assert sorted(a) == [0, 1]
    pi = class_group(get_variety(5, 851).fan, PI_851)
    for cl in [(0, 0, -3), (1, -2, 5), (0, 0, 0)]:
        assert pi(pi.preimage(cl)) == cl


# --- unimodularity ----------------------------------------------------------------


def test_unimodular_examples():
    for d in range(1, 6):
        assert unimodular(projective_space(d))
    assert not unimodular(get_variety(5, 200).fan)


def random_unimodular(d, rng):
    M = [[int(i == j) for j in range(d)] for i in range(d)]
    for _ in range(12):
        i, j = rng.sample(range(d), 2) if d > 1 else (0, 0)
        if i == j:
            M = [[-x for x in r] for r in M]
            continue
        c = rng.choice([-2, -1, 1, 2])
        for r in M:
            r[j] += c * r[i]
    return M


def transformed(fan, U, perm):
    rays = [tuple(sum(r[k] * U[k][j] for k in range(fan.dim)) for j in range(fan.dim)) for r in fan.rays]
    inv = {old: new for new, old in enumerate(perm)}
    return Fan(fan.dim, [rays[p] for p in perm], [tuple(inv[i] for i in c) for c in fan.max_cones])


def test_unimodular_invariance():
    rng = random.Random(11)
    for d in (3, 4):
        for rec in load_database(d)[:: 3 if d == 3 else 9]:
            want = unimodular(rec.fan)
            for _ in range(3):
                U = random_unimodular(d, rng)
                assert abs(determinant(U)) == 1
                perm = list(range(rec.fan.n))
                rng.shuffle(perm)
                g = transformed(rec.fan, U, perm)
                assert is_smooth_complete(g)
                assert unimodular(g) == want


# --- walls, Bondal, Fano ----------------------------------------------------------------


def test_walls_p2():
    ws = walls(P2)
    assert len(ws) == 3
    assert all(w.relation == (1, 1, 1) for w in ws)


def test_walls_p1xp1():
    ws = walls(P1xP1)
    assert len(ws) == 4 and all(w.intersection_numbers == (0,) for w in ws)


def test_walls_hirzebruch():
    assert sorted(w.intersection_numbers for w in walls(F2)) == [(-2,), (0,), (0,), (2,)]
    assert not walls(P1)


def test_walls_851():
    fan = get_variety(5, 851).fan
    ws = walls(fan)
    shared = {}
    for c in fan.max_cones:
        for k in range(5):
            shared.setdefault(c[:k] + c[k + 1:], []).append(c)
    assert len(ws) == sum(1 for v in shared.values() if len(v) == 2)
    for w in ws:
        idx = w.sides + w.tau
        assert not any(sum(c * fan.rays[i][j] for c, i in zip(w.relation, idx)) for j in range(5))


def test_nonsmooth_wall():
    # across the wall through (1, 0): (1, 2) + 2 (-1, -1) + (1, 0) = 0, so c' = 2 c
    f = Fan(2, [(1, 0), (1, 2), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(NonSmoothWall):
        walls(f)


def test_bondal_criterion_small():
    assert bondal_criterion(P2)
    assert bondal_criterion(P1)
    cert = bondal_criterion(F3)
    assert not cert and cert.failures


def test_fano_check():
    assert fano_check(P2) and fano_check(P1) and fano_check(F1)
    assert not fano_check(F2) and not fano_check(F3)
    assert fano_check(product(P2, P1))


def test_bondal_count_dim3():
    assert sum(bool(bondal_criterion(r.fan)) for r in load_database(3)) == 16
