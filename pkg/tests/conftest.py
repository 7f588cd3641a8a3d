"""Shared brute-force oracles, kept independent of the library internals."""

import itertools

import numpy as np


def angle_sum_brute_force(points) -> float:
    """Triple loop over all vertex angles; the reference for the fast path."""
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    total = 0.0
    for i in range(n):
        others = [j for j in range(n) if j != i]
        for j, k in itertools.combinations(others, 2):
            a = pts[j] - pts[i]
            b = pts[k] - pts[i]
            total += float(a @ b) / (np.linalg.norm(a) * np.linalg.norm(b))
    return total


def angle_sum_batch(batch: np.ndarray) -> np.ndarray:
    """Vectorized angle sums for a (B, N, d) batch of configurations."""
    diff = batch[:, None, :, :] - batch[:, :, None, :]
    dist = np.linalg.norm(diff, axis=-1)
    n = batch.shape[1]
    eye = np.eye(n, dtype=bool)
    dist[:, eye] = 1.0
    unit = diff / dist[..., None]
    s = unit.sum(axis=2)
    return 0.5 * ((s * s).sum(axis=(1, 2)) - n * (n - 1))


def random_symmetric(rng, n: int, scale: float = 2.0) -> np.ndarray:
    a = rng.uniform(-scale, scale, size=(n, n))
    return 0.5 * (a + a.T)
