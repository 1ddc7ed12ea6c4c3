"""
A larger problem
================

80 observations of 50,000 variables with singular values decaying as
1/i and planted blocks of near-copies. Only a tiny fraction of the 1.25
billion pairs is ever evaluated exactly.
"""

# %%
import time

import numpy as np

import tcor

rng = np.random.default_rng(6)
m, n = 80, 50_000
U, _ = np.linalg.qr(rng.standard_normal((m, m)))
V, _ = np.linalg.qr(rng.standard_normal((n, m)))
A = (U / np.arange(1, m + 1)) @ V.T
for blk in rng.permutation(n)[:4000].reshape(500, 8):
    for c in blk[1:]:
        A[:, c] = A[:, blk[0]] + 0.05 * A[:, blk[0]].std() * rng.standard_normal(m)

# %%
start = time.perf_counter()
res = tcor.tcor(A, 0.99)
print(f"tcor: {len(res)} pairs in {time.perf_counter() - start:.1f}s")
d = res.diagnostics
print(f"ell={d.ell}, candidates={d.candidate_count}, evaluated fraction={d.evaluated_fraction:.2e}")

# %%
# the blocked brute force is feasible here, for checking only
start = time.perf_counter()
ref = tcor.brute_force_threshold(A, 0.99, max_n=None)
print(f"brute force: {len(ref)} pairs in {time.perf_counter() - start:.1f}s; equal: {res.pairs() == ref.pairs()}")
