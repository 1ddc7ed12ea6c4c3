"""
Thresholded Euclidean distance
==============================

The same pruning works on raw columns (no centering or scaling) to find
all pairs closer than ``d``.
"""

# %%
import numpy as np

import tcor

rng = np.random.default_rng(3)
A = rng.standard_normal((30, 1500))
A[:, 10] = A[:, 3] + 0.01
A[:, 77] = A[:, 42] + 0.05 * rng.standard_normal(30)

res = tcor.tdist(A, 0.5)
for i, j, v in res:
    print(f"({i}, {j})  distance {v:.4f}")
print("matches brute force:", res.pairs() == tcor.brute_force_threshold(A, 0.5, mode="distance").pairs())
