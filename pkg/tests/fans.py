"""Small hand-built fans used across the tests."""

from toricdiag.fan import Fan


def projective_space(d):
    rays = [tuple(int(i == j) for j in range(d)) for i in range(d)] + [tuple([-1] * d)]
    cones = [tuple(k for k in range(d + 1) if k != skip) for skip in range(d + 1)]
    return Fan(d, rays, cones)


def product(f, g):
    rays = [r + (0,) * g.dim for r in f.rays] + [(0,) * f.dim + r for r in g.rays]
    cones = [a + tuple(f.n + j for j in b) for a in f.max_cones for b in g.max_cones]
    return Fan(f.dim + g.dim, rays, cones)


def hirzebruch(a):
    # rays in cyclic order, consecutive pairs span the cones
    rays = [(1, 0), (0, 1), (-1, a), (0, -1)]
    return Fan(2, rays, [(0, 1), (1, 2), (2, 3), (3, 0)])


P1 = projective_space(1)
P2 = projective_space(2)
P1xP1 = product(P1, P1)
F1 = hirzebruch(1)
F2 = hirzebruch(2)
F3 = hirzebruch(3)


def random_divisors(fans, count, rng, spread=4):
    """``count`` (fan, coefficient vector) pairs drawn uniformly from ``fans``."""
    out = []
    for _ in range(count):
        fan = rng.choice(fans)
        out.append((fan, tuple(rng.randint(-spread, spread) for _ in range(fan.n))))
    return out
