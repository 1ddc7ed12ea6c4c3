"""
Truncated SVD of the standardized matrix
========================================

``CenteredScaledOperator`` behaves like (A - mean) / centered_norm
without ever building it. The Lanczos solver only needs its products.
"""

# %%
import numpy as np

from tcor import CenteredScaledOperator, extend, truncated_svd

rng = np.random.default_rng(1)
A = rng.standard_normal((300, 500)) * 5 + 3
op = CenteredScaledOperator(A)

# %%
svd = truncated_svd(op, 10, method="lanczos")
dense = np.linalg.svd(op.materialize(), compute_uv=False)[:10]
print("restarts:", svd.iterations)
print("max relative error vs dense:", np.max(np.abs(svd.s - dense) / dense))

# %%
# grow the factorization, reusing the converged vectors
bigger = extend(svd, op, 25)
dense = np.linalg.svd(op.materialize(), compute_uv=False)[:25]
print("extended restarts:", bigger.iterations)
print("max relative error vs dense:", np.max(np.abs(bigger.s - dense) / dense))
print("V orthonormality:", np.abs(bigger.V.T @ bigger.V - np.eye(25)).max())

# %%
# sum of all squared singular values is the trace of the correlation matrix, n
full = truncated_svd(CenteredScaledOperator(A[:40, :60]), 39)
print("energy / n:", (full.s ** 2).sum() / 60)
