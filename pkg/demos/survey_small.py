"""Survey every Fano variety up to dimension 4 and tabulate the outcome.

Run with ``python demos/survey_small.py``; dimension 4 takes about ten seconds.
Pass a cache file to ``run_survey`` to make reruns instant.
"""

# %% imports
import time
from fractions import Fraction

from toricdiag.database import load_database
from toricdiag.survey import format_summary, run_survey, summarize

# %% run the survey
rows = []
for d in (1, 2, 3, 4):
    t0 = time.perf_counter()
    recs = run_survey(d)
    s = summarize(d, recs, len(load_database(d)))
    rows.append((d, s, time.perf_counter() - t0))
    print(format_summary(s))
    print()

# %% success proportions next to unimodular and Bondal-criterion counts
print(f"{'d':>2} {'success':>8} {'unimod':>7} {'bondal':>7} {'f(d)':>8} {'secs':>6}")
for d, s, t in rows:
    print(f"{d:>2} {len(s.successes):>8} {len(s.unimodular):>7} {len(s.bondal):>7} {float(s.proportion):>8.3f} {t:>6.1f}")

# %% failures that are unimodular: the numerical criterion alone explains them
for d, s, _ in rows:
    odd = sorted(set(s.unimodular) - set(s.successes))
    print(d, "unimodular failures:", odd)

# %% f(d) decreases in these dimensions
props = [s.proportion for _, s, _ in rows]
print(" >= ".join(str(p) for p in props), all(x >= y for x, y in zip(props, props[1:])))
assert props[2] == Fraction(16, 18)
