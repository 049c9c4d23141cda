"""
Maximum likelihood thresholds for matrix normal models
======================================================

For m1 x m2 matrix normal samples the likelihood is bounded for generic
data once the sample size reaches mlt_b(m1, m2). The exact value is found
by testing whether the null cone fills the sample space, which reduces to
ranks of sums of Kronecker products evaluated at random integer points.
"""

import time

import numpy as np

from orbitmle import classify, mlt_table, null_cone_fills
from orbitmle.null_cone import format_table

t0 = time.perf_counter()
rows = mlt_table(10)
print(format_table(rows))
print(f"\n{len(rows)} rows in {time.perf_counter() - t0:.2f}s")

# shapes where the exact threshold beats the lower bound ceil(m1/m2)
gaps = [(r.m1, r.m2) for r in rows if r.exact_mltb > r.lower_L]
print("threshold above ceil(m1/m2):", gaps)

# Random integer data agrees with the fill test: below the threshold every
# tuple is unstable, at the threshold generic tuples are not.
rng = np.random.default_rng(0)
for m1, m2 in [(5, 3), (8, 3), (10, 7)]:
    for n in (2, 3):
        fills = null_cone_fills(m1, m2, n)
        labels = {classify(rng.integers(-9, 10, size=(n, m1, m2)).astype(float)).classification.value
                  for _ in range(5)}
        print(f"  ({m1},{m2}) n={n}: fills={fills!s:5s} classifier saw {sorted(labels)}")
