"""Small dense linear-algebra helpers shared across the package."""

from __future__ import annotations

import numpy as np

__all__ = [
    "vec",
    "unvec",
    "numerical_rank",
    "cluster_complex",
    "random_unitary",
]


def vec(matrix: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization: ``vec(X)[j*rows + i] = X[i, j]``."""
    return np.asarray(matrix).flatten(order="F")


def unvec(vector: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Inverse of :func:`vec`."""
    return np.asarray(vector).reshape((rows, cols), order="F")


def numerical_rank(matrix: np.ndarray, rel_tol: float) -> int:
    """Count singular values above ``rel_tol`` times the largest one.

    Returns 0 for an (effectively) zero matrix.
    """
    sigma = np.linalg.svd(np.asarray(matrix), compute_uv=False)
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0
    return int(np.count_nonzero(sigma > rel_tol * sigma[0]))


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def cluster_complex(values: np.ndarray, tol: float) -> list[np.ndarray]:
    """Group complex numbers by transitive closure of ``|a - b| <= tol``.

    Returns index arrays, one per cluster, ordered by descending magnitude
    of the cluster mean (ties broken by phase angle).  Sorting by real part
    first keeps the pairwise sweep near-linear: two points closer than
    ``tol`` also have real parts within ``tol`` of each other.
    """
    values = np.asarray(values, dtype=complex)
    n = values.size
    if n == 0:
        return []
    order = np.lexsort((values.imag, values.real))
    uf = _UnionFind(n)
    for a in range(n):
        ia = order[a]
        for b in range(a + 1, n):
            ib = order[b]
            if values[ib].real - values[ia].real > tol:
                break
            if abs(values[ib] - values[ia]) <= tol:
                uf.union(ia, ib)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(uf.find(i), []).append(i)
    clusters = [np.array(idx, dtype=int) for idx in groups.values()]

    def sort_key(idx: np.ndarray) -> tuple[float, float]:
        mean = values[idx].mean()
        return (-abs(mean), float(np.angle(mean)))

    return sorted(clusters, key=sort_key)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random unitary from the QR of a complex Gaussian matrix."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    # Fix the column phases so the factorization is canonical.
    phases = np.diagonal(r).copy()
    phases /= np.abs(phases)
    return q * phases
