"""
Thresholded correlation in a few lines
======================================

Find every pair of columns whose Pearson correlation is at least ``t``,
and compare with the brute-force answer.
"""

# %%
import numpy as np

import tcor

rng = np.random.default_rng(0)
A = rng.standard_normal((40, 2000))
# plant some close relatives so the answer is not empty
for k in range(25):
    A[:, 2 * k + 1] = A[:, 2 * k] + 0.1 * rng.standard_normal(40)

# %%
res = tcor.tcor(A, 0.9)
print(f"{len(res)} pairs with cor >= 0.9")
for i, j, v in list(res)[:5]:
    print(f"  ({i:4d}, {j:4d})  {v:.6f}")

# %%
# the diagnostics record how much work the pruning saved
d = res.diagnostics
print(f"rank used: {d.p_final}, run length ell: {d.ell}")
print(f"candidates evaluated exactly: {d.candidate_count} of {A.shape[1] * (A.shape[1] - 1) // 2}")
print(f"a-priori savings estimate n*m/(ell*p): {d.savings_estimate:.1f}")

# %%
ref = tcor.brute_force_threshold(A, 0.9)
print("identical to brute force:", res.pairs() == ref.pairs())
