"""
The pruning steps one at a time
===============================

Order columns by the first right singular vector, measure the longest
window that fits the threshold radius, then test only pairs closer than
that window using a growing number of singular directions.
"""

# %%
import numpy as np

from tcor import CenteredScaledOperator, generate_candidates, truncated_svd
from tcor.prune import correlation_threshold, estimate_adjacent_count, prepare

rng = np.random.default_rng(2)
m, n = 60, 3000
U, _ = np.linalg.qr(rng.standard_normal((m, m)))
V, _ = np.linalg.qr(rng.standard_normal((n, m)))
A = (U / np.arange(1, m + 1)) @ V.T
for k in range(0, 200, 2):
    A[:, k + 1] = A[:, k] + 0.05 * A[:, k].std() * rng.standard_normal(m)

t = 0.95
op = CenteredScaledOperator(A)
full = truncated_svd(op, 40)

# %%
state = prepare(full, correlation_threshold(t))
print(f"radius sqrt(2(1-t))/s1 = {state.radius:.4g}, longest run ell = {state.ell}")
print(f"pairs within ell positions: {state.ell * n - state.ell * (state.ell + 1) // 2}"
      f" of {n * (n - 1) // 2}")

# %%
# more singular directions prune more; the candidate set only ever shrinks
for p in (1, 2, 5, 10, 20, 40):
    G = np.asfortranarray(state.G[:, :p])
    cand = generate_candidates(state.with_projection(G))
    adj = estimate_adjacent_count(G, state.threshold)
    print(f"p={p:2d}  adjacent survivors={adj:5d}  candidates={len(cand):8d}")
