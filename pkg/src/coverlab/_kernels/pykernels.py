"""Pure-numpy implementations of the grid kernels.

Same contract as the compiled twin in ``_ckernels.pyx``: float64
feature matrices (rows = points mapped through a MetricForm transform),
kind in {0 linmax, 1 l2, 2 lp, 3 linf}.  Ties always resolve to the
lowest row index, which keeps certificates reproducible across
backends.
"""

from __future__ import annotations

import numpy as np


def _dists(F: np.ndarray, q: np.ndarray, kind: int, p: float) -> np.ndarray:
    Z = F - q
    if kind == 0:
        return np.maximum(Z.max(axis=1), 0.0)
    if kind == 1:
        return np.sqrt(np.einsum("ij,ij->i", Z, Z))
    if kind == 3:
        return np.abs(Z).max(axis=1)
    return np.sum(np.abs(Z) ** p, axis=1) ** (1.0 / p)


def min_dists(F, q, kind, p):
    return _dists(np.asarray(F), np.asarray(q), kind, p)


def update_min_dists(F, q, kind, p, mind):
    np.minimum(mind, _dists(np.asarray(F), np.asarray(q), kind, p), out=mind)


def min_dist_to_set(F, Fc, kind, p):
    F = np.asarray(F)
    Fc = np.atleast_2d(np.asarray(Fc))
    mind = np.full(F.shape[0], np.inf)
    for row in Fc:
        update_min_dists(F, row, kind, p, mind)
    return mind


def greedy_farthest(F, center_ok, cover_ok, kind, p, stop_radius, max_centers,
                    start=-1):
    """Farthest-point traversal; returns (center indices, achieved radius).

    Rows flagged in cover_ok must end up within stop_radius of a center;
    new centers are restricted to rows flagged in center_ok.  Starts
    from ``start`` (defaults to the lowest eligible index); ties in the
    farthest choice resolve to the lowest index.
    """
    F = np.asarray(F)
    ok = np.asarray(center_ok, dtype=bool)
    cov = np.asarray(cover_ok, dtype=bool)
    n = F.shape[0]
    if n == 0 or not ok.any() or not cov.any():
        return np.empty(0, dtype=np.int64), 0.0
    mind = np.full(n, np.inf)
    centers = []
    nxt = int(np.argmax(ok)) if start < 0 else int(start)
    while True:
        centers.append(nxt)
        update_min_dists(F, F[nxt], kind, p, mind)
        achieved = float(mind[cov].max())
        if achieved <= stop_radius or len(centers) >= max_centers:
            break
        masked = np.where(ok, mind, -np.inf)
        nxt = int(np.argmax(masked))
        if mind[nxt] <= 0.0:
            break
    return np.asarray(centers, dtype=np.int64), float(mind[cov].max())


def packing_scan(F, kind, p, thresh):
    """Scan rows in order, keeping those strictly farther than thresh
    from every kept row."""
    F = np.asarray(F)
    n = F.shape[0]
    kept: list[int] = []
    mind = np.full(n, np.inf)
    for i in range(n):
        if mind[i] > thresh:
            kept.append(i)
            update_min_dists(F, F[i], kind, p, mind)
    return np.asarray(kept, dtype=np.int64)


def cross_le(Fa, Fb, kind, p, thresh):
    """uint8 matrix: d(a_i, b_j) <= thresh."""
    Fa = np.atleast_2d(np.asarray(Fa))
    Fb = np.atleast_2d(np.asarray(Fb))
    na = Fa.shape[0]
    out = np.empty((na, Fb.shape[0]), dtype=np.uint8)
    for i in range(na):
        out[i] = _dists(Fb, Fa[i], kind, p) <= thresh
    return out


def greedy_cover(cov):
    """Greedy set cover on a uint8/bool matrix (sets x elements).

    Returns (chosen set indices in pick order, number left uncovered).
    """
    cov = np.asarray(cov, dtype=bool)
    nsets, npts = cov.shape
    uncovered = np.ones(npts, dtype=bool)
    chosen: list[int] = []
    while uncovered.any():
        counts = cov[:, uncovered].sum(axis=1)
        best = int(np.argmax(counts))
        if counts[best] == 0:
            break
        chosen.append(best)
        uncovered &= ~cov[best]
    return np.asarray(chosen, dtype=np.int64), int(uncovered.sum())
