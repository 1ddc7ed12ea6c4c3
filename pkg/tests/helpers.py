import numpy as np


def planted_matrix(rng, m, n, n_planted=10, noise=(0.0, 0.3)):
    """Standard normal matrix with duplicate / near-duplicate column pairs."""
    A = rng.standard_normal((m, n))
    for _ in range(n_planted):
        a, b = rng.choice(n, 2, replace=False)
        A[:, b] = A[:, a] + rng.uniform(*noise) * rng.standard_normal(m)
    return A


def random_battery_matrix(rng):
    m = int(rng.integers(5, 61))
    n = int(rng.integers(20, 301))
    return planted_matrix(rng, m, n)


def corrcoef_pairs(A, t):
    """Oracle: thresholded pairs from numpy's corrcoef."""
    C = np.corrcoef(A, rowvar=False)
    i, j = np.nonzero(np.triu(C >= t, k=1))
    return {(int(a), int(b)): float(C[a, b]) for a, b in zip(i, j)}


def distance_pairs(A, d):
    """Oracle: thresholded pairs from direct pairwise differences."""
    diff = A[:, :, None] - A[:, None, :]
    D = np.sqrt((diff ** 2).sum(axis=0))
    i, j = np.nonzero(np.triu(D <= d, k=1))
    return {(int(a), int(b)): float(D[a, b]) for a, b in zip(i, j)}


def standardized(A):
    X = A - A.mean(axis=0)
    return X / np.linalg.norm(X, axis=0)


def spectrum_matrix(rng, m, n, decay):
    U, _ = np.linalg.qr(rng.standard_normal((m, m)))
    V, _ = np.linalg.qr(rng.standard_normal((n, m)))
    return (U * decay) @ V.T
