"""Line-bundle cohomology and diagonal collections on small examples.

Run with ``python demos/projective_spaces.py``.
"""

# %% imports
import numpy as np

from toricdiag.cohomology import CohomologyEngine
from toricdiag.exceptional import certify, verdict_report
from toricdiag.fan import Fan, class_group, walls
from toricdiag.resolution import enumerate_cells, resolution_rank_vector

# %% the projective plane: rays e1, e2, -e1-e2
P2 = Fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
pi = class_group(P2)
print("class map", pi.matrix.tolist())

# %% h^p(O(k)) for a range of twists; O(k) is k times one boundary divisor
eng = CohomologyEngine(P2)
table = np.array([eng.ranks((k, 0, 0)).h for k in range(-5, 4)])
for k, row in zip(range(-5, 4), table):
    print(f"O({k:+d})", row)
# Serre duality pairs O(k) with O(-3-k)
assert (table[::-1, ::-1][1:] == table[:-1]).all()

# %% the quotient complex of the diagonal arrangement
cells = enumerate_cells(P2)
print("cells by dimension", np.bincount([c.dim for c in cells]))
print("resolution ranks", resolution_rank_vector(cells, 2))

# %% walls and curve intersection numbers
for w in walls(P2):
    print("wall", w.tau, "relation", w.relation)

# %% the collection is Beilinson's O(-2), O(-1), O
v = certify(P2)
print(verdict_report(v))

# %% a Hirzebruch surface that is not Fano still gets a verdict
F2 = Fan(2, [(1, 0), (0, 1), (-1, 2), (0, -1)], [(0, 1), (1, 2), (2, 3), (0, 3)])
print(verdict_report(certify(F2)))
