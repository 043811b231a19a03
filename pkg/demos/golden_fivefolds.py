"""The two worked fivefolds: index 851 succeeds, index 200 fails.

Run with ``python demos/golden_fivefolds.py``; each certificate takes a few seconds.
"""

# %% imports
import numpy as np

from toricdiag.cohomology import CohomologyEngine, graded_hom
from toricdiag.database import get_variety
from toricdiag.exceptional import certify, verdict_report
from toricdiag.fan import class_group, unimodular

# degree matrices of a fixed reference presentation of the class group
PI_851 = [[0, 0, 1, 1, 0, 0, 0, 0], [0, 0, 0, 0, 1, 1, 1, 0], [1, 1, 0, 0, 1, 1, 0, 1]]
PI_200 = [[0, 0, 1, 1, 1, 0, 0, 0], [0, 0, 0, 0, 0, 1, 1, 0], [1, 1, 0, 0, 0, 2, 0, 1]]

# %% index 851 is unimodular and gives a full strong exceptional collection
fan = get_variety(5, 851).fan
print("rays", fan.rays, "unimodular:", unimodular(fan))
v = certify(fan, class_group(fan, PI_851))
print(verdict_report(v))

# %% the Hom^0 matrix in the exceptional order is lower unitriangular
M = np.array(v.hom0_matrix)
print(M)
assert (np.triu(M, 1) == 0).all() and (np.diag(M) == 1).all()

# %% index 200 is not unimodular and its collection has a 2-cycle
fan = get_variety(5, 200).fan
print("unimodular:", unimodular(fan))
pi = class_group(fan, PI_200)
v = certify(fan, pi)
print(verdict_report(v))

# %% the pair behind the cycle: sections one way, H^2 the other way
eng = CohomologyEngine(fan, pi)
a, b = (0, -1, -1), (0, -1, -4)
print(f"Hom*(O{a}, O{b})", graded_hom(eng, a, b).h)
print(f"Hom*(O{b}, O{a})", graded_hom(eng, b, a).h)
