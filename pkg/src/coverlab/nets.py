"""Nets, packings and rigorous cover certificates over candidate grids.

Soundness chain used everywhere below.  A grid with per-axis spacings
h_i covers the bounding box of K with cells; every point y of K lies in
the cell of some retained grid point g (retention keeps everything with
gauge_K <= 1 + cell slack), and gauge_T(y - g) <= cell_radius_T, the
maximal T-gauge over cell-corner offsets.  A greedy net over retained
points at radius (delta - cell_radius_T) is therefore a true delta-net
of all of K in d_T.  Cover certification inflates this: if every point
of a delta-net of K in d_{rho T} is within rho (1 - delta) of a center,
the gauge triangle inequality gives K subset centers + rho T.

Packing constraints are strict with multiplicative slack (1 + eta);
covering constraints are non-strict.  The boundary-touching 1-D example
in tests/test_separation.py is why the slack is not optional.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from itertools import product
from typing import Optional

import numpy as np

from . import bodies, setcover
from ._kernels import greedy_farthest, min_dist_to_set, packing_scan, cross_le
from .bodies import ConvexBody
from .config import DEFAULT_EFFORT, EffortConfig
from .forms import MetricForm, box_halfwidths, metric_form

logger = logging.getLogger(__name__)


class ResourceError(RuntimeError):
    """A configured budget would be exceeded; message names the budget."""


class NetError(RuntimeError):
    """Grid too coarse for the requested net resolution."""


@dataclass(frozen=True, eq=False)
class CandidateGrid:
    """Axis grid clipped near K, with cached T-features and K-gauges."""

    points: np.ndarray          # (N, n), row-major axis order
    spacing: np.ndarray         # per-axis spacings h_i
    cell_radius_T: float        # max gauge_T over cell-corner offsets
    gauge_K: np.ndarray         # gauge_K per point
    in_K: np.ndarray            # gauge_K <= 1 + tol
    cover_mask: np.ndarray      # gauge_K <= 1 + cell slack: every point of K
                                # has a cell center among these rows
    features_T: np.ndarray      # metric_form(T) features per point
    form_T: MetricForm

    def __len__(self) -> int:
        return self.points.shape[0]


def _corner_offsets(h: np.ndarray) -> np.ndarray:
    return np.array(list(product(*[(-hi / 2.0, hi / 2.0) for hi in h])))


def grid_candidates(K: ConvexBody, T: ConvexBody, target_cell_radius: float,
                    effort: EffortConfig = DEFAULT_EFFORT,
                    inflate: float = 0.0) -> CandidateGrid:
    """Axis grid with cell_radius_T <= target, clipped to (1+inflate)K.

    Per-axis spacings divide the bounding half-widths exactly, so the
    grid always contains the origin and the extreme axis points of K.
    """
    if target_cell_radius <= 0:
        raise ValueError("target_cell_radius must be positive")
    n = K.dim
    form_t = metric_form(T)
    form_k = metric_form(K)
    w = box_halfwidths(K) * (1.0 + inflate)
    r1 = float(np.max(form_t.gauge_many(_corner_offsets(np.ones(n)))))
    h0 = target_cell_radius / r1
    m = np.maximum(1, np.ceil(w / h0 - 1e-12).astype(int))
    count = int(np.prod(2 * m + 1))
    if count > effort.grid_budget:
        raise ResourceError(
            f"candidate grid would need {count} points, over the grid_budget "
            f"of {effort.grid_budget}")
    h = w / m
    axes = [np.arange(-mi, mi + 1) * hi for mi, hi in zip(m, h)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in mesh], axis=1)
    cell_radius = float(np.max(form_t.gauge_many(_corner_offsets(h))))
    slack_k = float(np.max(form_k.gauge_many(_corner_offsets(h))))
    gk = form_k.gauge_many(pts)
    keep = gk <= 1.0 + inflate + slack_k + effort.abs_tol
    pts = np.ascontiguousarray(pts[keep])
    gk = gk[keep]
    return CandidateGrid(
        points=pts,
        spacing=h,
        cell_radius_T=cell_radius,
        gauge_K=gk,
        in_K=gk <= 1.0 + 1e-12,
        cover_mask=gk <= 1.0 + slack_k + effort.abs_tol,
        features_T=form_t.features(pts),
        form_T=form_t,
    )


def build_net(K: ConvexBody, T: ConvexBody, delta: float,
              grid: CandidateGrid) -> np.ndarray:
    """Deterministic greedy delta-net of K in d_T, points inside K.

    Requires grid.cell_radius_T <= delta/2.  The returned points cover
    every retained grid point within delta - cell_radius_T, which
    together with the grid invariant certifies a true delta-net of K.
    """
    idx = net_indices(grid, delta)
    return grid.points[idx]


def net_indices(grid: CandidateGrid, delta: float) -> np.ndarray:
    if grid.cell_radius_T > delta / 2.0 + 1e-15:
        raise NetError(
            f"grid cell radius {grid.cell_radius_T:.3g} exceeds delta/2 = "
            f"{delta / 2.0:.3g}; rebuild the grid with a finer target")
    stop = delta - grid.cell_radius_T
    form = grid.form_T
    masked = np.where(grid.in_K, grid.gauge_K, np.inf)
    start = int(np.argmin(masked))
    idx, achieved = greedy_farthest(grid.features_T, grid.in_K, grid.cover_mask,
                                    form.kind, form.p, stop, len(grid), start)
    if achieved > stop + 1e-12:
        raise NetError("net construction stalled; rebuild with a finer grid")
    return idx


def max_packing(K: ConvexBody, T: ConvexBody, eps: float, grid: CandidateGrid,
                exact_cutoff: int = 400,
                effort: EffortConfig = DEFAULT_EFFORT) -> np.ndarray:
    """Points of K pairwise strictly farther than eps in gauge_T.

    Greedy scan in grid order; when the candidate count is within
    exact_cutoff, an exact maximum independent set over the conflict
    graph replaces the greedy answer (guaranteeing grid-maximality).
    Any returned set is a valid packing certificate regardless of
    optimality.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    thresh = eps * (1.0 + effort.eta)
    cand = np.nonzero(grid.in_K)[0]
    F = np.ascontiguousarray(grid.features_T[cand])
    form = grid.form_T
    kept = packing_scan(F, form.kind, form.p, thresh)
    # farthest-first traversal yields a (usually larger) maximal packing
    ones = np.ones(len(cand), dtype=np.uint8)
    ff, _ = greedy_farthest(F, ones, ones, form.kind, form.p, thresh,
                            len(cand), int(np.argmin(grid.gauge_K[cand])))
    if len(ff) > len(kept):
        kept = np.sort(ff)
    sub = cand
    if len(cand) > exact_cutoff:
        # exact search on a well-spread subsample
        take, _ = greedy_farthest(F, ones, ones, form.kind, form.p, 0.0,
                                  exact_cutoff,
                                  int(np.argmin(grid.gauge_K[cand])))
        sub = cand[np.sort(take)]
    Fs = np.ascontiguousarray(grid.features_T[sub])
    conflict = cross_le(Fs, Fs, form.kind, form.p, thresh)
    adj = []
    for i in range(len(sub)):
        row = conflict[i].copy()
        row[i] = 0
        adj.append(int.from_bytes(
            np.packbits(row, bitorder="little").tobytes(), "little"))
    exact = setcover.exact_max_independent_set(adj, effort.exact_nodes)
    if exact is None:
        logger.warning("exact packing search out of node budget "
                       "(%d candidates); keeping greedy result", len(sub))
        exact = []
    if len(exact) > len(kept):
        return grid.points[sub[exact]]
    return grid.points[cand[kept]]


def certify_cover(K: ConvexBody, T: ConvexBody, centers: np.ndarray,
                  rho: float, delta: float, grid: CandidateGrid,
                  effort: EffortConfig = DEFAULT_EFFORT) -> bool:
    """True iff the centers certifiably cover K by translates of rho*T.

    Checks that every point of a certified delta-net of K in d_{rho T}
    lies within rho (1 - delta) of a center; the triangle inequality
    then gives K subset union(centers + rho T).
    """
    if delta >= 1.0:
        raise ValueError("delta must be < 1 for the inflation argument")
    centers = np.atleast_2d(np.asarray(centers, float))
    if centers.size == 0:
        return False
    if K.dim == 1:
        # 1-D: exact interval sweep, no inflation loss
        a = bodies.support(K, np.ones(1))
        t = rho * bodies.support(T, np.ones(1))
        covered = -a
        for c in np.sort(centers[:, 0]):
            if c - t > covered + effort.abs_tol:
                return False
            covered = max(covered, c + t)
        return covered >= a - effort.abs_tol
    net_idx = net_indices(grid, rho * delta)
    form = grid.form_T
    fc = form.features(centers)
    mind = min_dist_to_set(grid.features_T[net_idx], fc, form.kind, form.p)
    return bool(np.max(mind) <= rho * (1.0 - delta) + effort.abs_tol * max(rho, 1.0))


# ---------------------------------------------------------------------------
# certificates

@dataclass(frozen=True, eq=False)
class CoverCertificate:
    """Net-based cover witness: K subset centers + radius_factor * T."""

    centers: np.ndarray
    radius_factor: float
    net_resolution: float        # delta used by the inflation argument

    @property
    def size(self) -> int:
        return self.centers.shape[0]


@dataclass(frozen=True, eq=False)
class ProductCoverCertificate:
    """Axis-product cover witness for box-like pairs, verified exactly.

    axis_centers[i] lists the 1-D centers on axis i; the full center set
    is the product lattice.  Verification is an exact per-axis interval
    sweep, which is what makes zero-margin covers (integer homothety
    ratios) certifiable.
    """

    axis_centers: tuple[np.ndarray, ...]
    radius_factor: float
    axis_halfwidths_K: np.ndarray   # K = product of [-a_i, a_i]
    axis_halfwidths_T: np.ndarray

    @property
    def size(self) -> int:
        return int(np.prod([len(c) for c in self.axis_centers]))

    @property
    def centers(self) -> np.ndarray:
        mesh = np.meshgrid(*self.axis_centers, indexing="ij")
        return np.stack([g.ravel() for g in mesh], axis=1)


@dataclass(frozen=True, eq=False)
class PackingCertificate:
    """Points of K pairwise strictly farther than eps in gauge_T."""

    points: np.ndarray
    eps: float

    @property
    def size(self) -> int:
        return self.points.shape[0]


def verify_cover_certificate(K: ConvexBody, T: ConvexBody,
                             cert: CoverCertificate,
                             effort: EffortConfig = DEFAULT_EFFORT) -> tuple[bool, str]:
    """Re-check a net-based cover certificate from scratch."""
    try:
        target = cert.radius_factor * cert.net_resolution / 2.0 * 0.999
        grid = grid_candidates(K, T, target, effort)
        ok = certify_cover(K, T, cert.centers, cert.radius_factor,
                           cert.net_resolution, grid, effort)
    except (ValueError, ResourceError, NetError) as exc:
        return False, f"certificate rejected: {exc}"
    return (True, "ok") if ok else (False, "net point escapes every center")


def verify_product_certificate(K: ConvexBody, T: ConvexBody,
                               cert: ProductCoverCertificate,
                               effort: EffortConfig = DEFAULT_EFFORT) -> tuple[bool, str]:
    """Exact per-axis sweep check of a product-lattice cover."""
    aK = axis_halfwidths_if_box(K)
    aT = axis_halfwidths_if_box(T)
    if aK is None or aT is None:
        return False, "bodies are not axis boxes (or 1-D intervals)"
    if not (np.allclose(aK, cert.axis_halfwidths_K, rtol=1e-12) and
            np.allclose(aT, cert.axis_halfwidths_T, rtol=1e-12)):
        return False, "certificate axis data does not match the bodies"
    tol = effort.abs_tol
    for i in range(len(aK)):
        t = cert.radius_factor * aT[i]
        covered_until = -aK[i]
        for c in np.sort(np.asarray(cert.axis_centers[i], float)):
            if c - t > covered_until + tol:
                return False, f"axis {i}: gap before center {c:g}"
            covered_until = max(covered_until, c + t)
        if covered_until < aK[i] - tol:
            return False, f"axis {i}: right end uncovered"
    return True, "ok"


def verify_packing_certificate(K: ConvexBody, T: ConvexBody,
                               cert: PackingCertificate,
                               effort: EffortConfig = DEFAULT_EFFORT) -> tuple[bool, str]:
    """Re-check pairwise separation and membership in K from scratch."""
    pts = np.atleast_2d(cert.points)
    gk = metric_form(K).gauge_many(pts)
    if np.any(gk > 1.0 + 1e-10):
        return False, "packing point escapes K"
    form = metric_form(T)
    F = form.features(pts)
    need = cert.eps * (1.0 + effort.eta / 2.0)
    for i in range(len(pts) - 1):
        d = form.combine(F[i + 1:] - F[i])
        if np.any(d <= need):
            j = i + 1 + int(np.argmin(d))
            return False, f"points {i} and {j} are only {float(d.min()):.6g} apart"
    return True, "ok"


def axis_halfwidths_if_box(B: ConvexBody) -> Optional[np.ndarray]:
    """Half-widths when B is an axis box (or any 1-D body), else None."""
    if B.dim == 1:
        return np.array([bodies.support(B, np.ones(1))])
    if isinstance(B, bodies.LpBall) and math.isinf(B.p):
        return np.asarray(B.r)
    return None
