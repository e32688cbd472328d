"""Certified brackets for covering numbers and entropy numbers.

Upper bounds come from explicitly certified covers; search strategies
are heuristics, certification is uniform and sound:

* exact product-lattice covers for 1-D pairs and axis-box pairs
  (verified by exact per-axis sweeps; this is what makes zero-margin
  covers, e.g. integer homothety ratios, certifiable);
* a single-center test via the exact gauge radius;
* farthest-point nets over a fine grid (always certifiable, optionally
  pruned), refined by greedy and branch-and-bound set cover on a coarse
  universe when the instance fits the exactness budget.

Lower bounds: the volume quotient when volumes exist, and maximal
packings at separation 2 (points pairwise strictly outside 2 int T
force pairwise-distinct translates of T).

Entropy numbers e_k = inf{eps : N(K, eps T) <= 2^k} are bracketed by
bisection between certified-cover and certified-exceed homothety
factors; the bisection may stall at the certifiability gap between the
two kinds of certificates, in which case the bracket keeps the gap
edges and is flagged.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import bodies, setcover
from ._kernels import cross_le, greedy_cover, greedy_farthest, min_dist_to_set
from .bodies import ConvexBody, UnsupportedOperation, scale_body
from .brackets import Bracket
from .config import DEFAULT_EFFORT, EffortConfig
from .forms import gauge_radius, metric_form
from .nets import (CandidateGrid, CoverCertificate, PackingCertificate,
                   ProductCoverCertificate, ResourceError,
                   axis_halfwidths_if_box, grid_candidates, max_packing)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RadiusCertificate:
    """Single-translate cover witness: gauge radius of K in T <= radius_factor."""

    radius_factor: float
    gauge_radius: float

    centers = property(lambda self: np.zeros((1, 1)))
    size = property(lambda self: 1)


def verify_radius_certificate(K: ConvexBody, T: ConvexBody,
                              cert: RadiusCertificate,
                              effort: EffortConfig = DEFAULT_EFFORT) -> tuple[bool, str]:
    r, exact = gauge_radius(T, K)
    if not exact:
        return False, "gauge radius not exactly computable for this pair"
    if r <= cert.radius_factor * (1.0 + effort.eta):
        return True, "ok"
    return False, f"gauge radius {r:.9g} exceeds factor {cert.radius_factor:.9g}"


# ---------------------------------------------------------------------------
# upper bounds

def _product_cover(K: ConvexBody, T: ConvexBody, restrict: bool,
                   effort: EffortConfig) -> Optional[ProductCoverCertificate]:
    aK = axis_halfwidths_if_box(K)
    aT = axis_halfwidths_if_box(T)
    if aK is None or aT is None:
        return None
    axis_centers = []
    for a, t in zip(aK, aT):
        count = max(1, math.ceil(a / t - effort.abs_tol))
        centers = -a + (2.0 * np.arange(1, count + 1) - 1.0) * t
        if restrict:
            centers = np.minimum(centers, a)
        axis_centers.append(centers)
    return ProductCoverCertificate(tuple(axis_centers), 1.0, aK, aT)


def _certify_on_grid(grid: CandidateGrid, centers: np.ndarray,
                     effort: EffortConfig) -> bool:
    """Sound cover check: every cover-mask grid point within
    1 - cell_radius of a center (grid-as-net inflation argument)."""
    form = grid.form_T
    fc = form.features(np.atleast_2d(centers))
    mind = min_dist_to_set(grid.features_T[grid.cover_mask], fc, form.kind, form.p)
    return bool(np.max(mind) <= 1.0 - grid.cell_radius_T + effort.abs_tol)


def _prune_features(grid: CandidateGrid, Fcenters: np.ndarray,
                    effort: EffortConfig) -> np.ndarray:
    """Keep-mask after dropping redundant centers, reverse greedy."""
    form = grid.form_T
    radius = 1.0 - grid.cell_radius_T + effort.abs_tol
    F = np.ascontiguousarray(grid.features_T[grid.cover_mask])
    cov = cross_le(np.ascontiguousarray(Fcenters), F, form.kind, form.p, radius)
    counts = cov.sum(axis=0).astype(np.int64)
    keep = np.ones(Fcenters.shape[0], dtype=bool)
    for i in range(Fcenters.shape[0] - 1, -1, -1):
        row = cov[i].astype(bool)
        if np.all(counts[row] >= 2):
            keep[i] = False
            counts[row] -= 1
    return keep


def _prune_cover(grid: CandidateGrid, center_idx: np.ndarray,
                 effort: EffortConfig) -> np.ndarray:
    keep = _prune_features(grid, grid.features_T[center_idx], effort)
    return center_idx[keep]


def _hex_lattice_cover(K: ConvexBody, grid: CandidateGrid, restrict: bool,
                       effort: EffortConfig) -> Optional[np.ndarray]:
    """Hexagonal-lattice covers in the feature metric (2-D l2 forms only).

    The lattice has covering radius 1 - cell_radius, so any offset gives
    a certifiable cover after dropping unused points; several
    deterministic offsets are tried and the smallest kept.
    """
    from .forms import KIND_L2, metric_form

    form = grid.form_T
    if form.kind != KIND_L2 or grid.points.shape[1] != 2:
        return None
    r = (1.0 - grid.cell_radius_T) * 0.9995
    Winv = np.linalg.inv(form.mat)
    U = grid.features_T[grid.cover_mask]
    lo, hi = U.min(axis=0) - 1.05 * r, U.max(axis=0) + 1.05 * r
    a1 = np.array([math.sqrt(3.0), 0.0]) * r
    a2 = np.array([math.sqrt(3.0) / 2.0, 1.5]) * r
    B = np.stack([a1, a2], axis=1)
    Binv = np.linalg.inv(B)
    corners = np.array([[lo[0], lo[1]], [lo[0], hi[1]],
                        [hi[0], lo[1]], [hi[0], hi[1]]])
    ij = corners @ Binv.T
    i_rng = range(int(np.floor(ij[:, 0].min())) - 1, int(np.ceil(ij[:, 0].max())) + 2)
    j_rng = range(int(np.floor(ij[:, 1].min())) - 1, int(np.ceil(ij[:, 1].max())) + 2)
    form_k = metric_form(K)
    best = None
    for fa, fb in ((0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.5, 0.5),
                   (1 / 3, 1 / 3), (2 / 3, 2 / 3)):
        off = fa * a1 + fb * a2
        pts_u = np.array([off + i * a1 + j * a2 for i in i_rng for j in j_rng])
        centers = pts_u @ Winv.T
        if restrict:
            centers = centers[form_k.gauge_many(centers) <= 1.0 + 1e-12]
        if len(centers) == 0:
            continue
        # keep only centers that cover something
        fc = form.features(centers)
        used = np.zeros(len(centers), dtype=bool)
        for i, row in enumerate(fc):
            if np.any(form.combine(U - row) <= r):
                used[i] = True
        centers = centers[used]
        if len(centers) == 0 or (best is not None and len(centers) >= len(best)):
            continue
        keep = _prune_features(grid, form.features(centers), effort)
        centers = centers[keep]
        if not _certify_on_grid(grid, centers, effort):
            continue
        if best is None or len(centers) < len(best):
            best = centers
    return best


def _cover_grid(K: ConvexBody, T: ConvexBody, restrict: bool,
                effort: EffortConfig, flags: list[str]) -> CandidateGrid:
    """Fine certification grid, relaxing resolution under the budget."""
    inflate = 0.0
    if not restrict:
        t_k, _ = gauge_radius(K, T)
        inflate = min(t_k, 2.0)
    delta = effort.cover_delta
    while True:
        try:
            return grid_candidates(K, T, delta / 2.0 * 0.98, effort, inflate)
        except ResourceError:
            delta *= 1.4
            if delta > effort.max_cover_delta:
                if "coarse-grid" not in flags:
                    flags.append("coarse-grid")
                return grid_candidates(K, T, effort.max_cover_delta / 2.0,
                                       effort.with_(grid_budget=4 * effort.grid_budget),
                                       inflate)


def _grid_cover_certificate(grid: CandidateGrid, centers: np.ndarray) -> CoverCertificate:
    return CoverCertificate(np.atleast_2d(np.array(centers, float)), 1.0,
                            2.0 * grid.cell_radius_T)


def covering_upper(K: ConvexBody, T: ConvexBody,
                   effort: EffortConfig = DEFAULT_EFFORT,
                   restrict: bool = False,
                   early_stop: Optional[int] = None) -> tuple[int, object, list[str]]:
    """Smallest certified cover count found, with its certificate.

    ``early_stop``: return as soon as a certified cover of at most this
    size is found (entropy bisection only needs the threshold test).
    """
    flags: list[str] = []
    prod = _product_cover(K, T, restrict, effort)
    if prod is not None:
        from .nets import verify_product_certificate

        ok, _ = verify_product_certificate(K, T, prod, effort)
        if ok:
            return prod.size, prod, flags
    r, r_exact = gauge_radius(T, K)
    if r_exact and r <= 1.0 + effort.eta:
        return 1, RadiusCertificate(1.0, r), flags

    grid = _cover_grid(K, T, restrict, effort, flags)
    centers = _one_grid_best(K, grid, restrict, effort, flags, early_stop)
    best = len(centers)
    if early_stop is not None and best <= early_stop:
        return best, _grid_cover_certificate(grid, centers), flags

    if best <= 48 and "coarse-grid" not in flags:
        # small instance: redo on a finer grid to shave the radius tax
        fine = effort.with_(cover_delta=max(0.012, effort.cover_delta / 4))
        try:
            grid2 = _cover_grid(K, T, restrict, fine, flags)
            centers2 = _one_grid_best(K, grid2, restrict, fine, flags, None)
            if len(centers2) <= best:
                grid, centers, best = grid2, centers2, len(centers2)
        except ResourceError:
            pass

    if best <= 20:
        refined = _refined_cover(K, T, grid, restrict, best, effort, flags)
        if refined is not None and len(refined) < best:
            centers, best = refined, len(refined)
    return best, _grid_cover_certificate(grid, centers), flags


def _one_grid_best(K: ConvexBody, grid: CandidateGrid, restrict: bool,
                   effort: EffortConfig, flags: list[str],
                   early_stop: Optional[int]) -> np.ndarray:
    """Best certified cover (coordinates) over a single grid."""
    idx = _grid_cover_search(grid, restrict, effort, flags,
                             early_stop=early_stop)
    centers = grid.points[idx]
    if early_stop is not None and len(centers) <= early_stop:
        return centers
    lat = _hex_lattice_cover(K, grid, restrict, effort)
    if lat is not None and len(lat) < len(centers):
        centers = lat
        # snap to grid rows and continue the k-center descent from there
        center_ok = grid.in_K if restrict else np.ones(len(grid), dtype=bool)
        snapped = _snap_to_rows(grid, centers, center_ok)
        if snapped is not None:
            desc = _kcenter_descend(grid, snapped, center_ok,
                                    1.0 - grid.cell_radius_T, effort)
            if len(desc) < len(centers) and _certify_on_grid(
                    grid, grid.points[desc], effort):
                centers = grid.points[desc]
    return centers


def _snap_to_rows(grid: CandidateGrid, centers: np.ndarray,
                  center_ok: np.ndarray) -> Optional[np.ndarray]:
    form = grid.form_T
    ok_idx = np.nonzero(center_ok)[0]
    Fok = grid.features_T[ok_idx]
    rows = []
    for row in form.features(centers):
        rows.append(int(ok_idx[int(np.argmin(form.combine(Fok - row)))]))
    rows = sorted(set(rows))
    if len(rows) < len(centers):
        return None
    if _certify_on_grid(grid, grid.points[rows], DEFAULT_EFFORT):
        return np.asarray(rows, dtype=np.int64)
    return None


def _grid_cover_search(grid: CandidateGrid, restrict: bool,
                       effort: EffortConfig, flags: list[str],
                       early_stop: Optional[int] = None) -> np.ndarray:
    """Certified cover over one grid: farthest net, prune, k-center descent.

    Returns row indices into grid.points; the result always satisfies
    the _certify_on_grid condition (radius 1 - cell_radius over the
    cover mask)."""
    form = grid.form_T
    center_ok = grid.in_K if restrict else np.ones(len(grid), dtype=bool)
    stop = 1.0 - grid.cell_radius_T
    masked = np.where(center_ok, grid.gauge_K, np.inf)
    idx, achieved = greedy_farthest(grid.features_T, center_ok, grid.cover_mask,
                                    form.kind, form.p, stop - grid.cell_radius_T,
                                    len(grid), int(np.argmin(masked)))
    if achieved > stop + 1e-12:
        if "net-cover-stalled" not in flags:
            flags.append("net-cover-stalled")
        return np.nonzero(grid.in_K)[0]
    if len(idx) >= 3 and len(idx) * len(grid) <= 4e8:
        idx = _prune_cover(grid, idx, effort)
    if early_stop is not None and len(idx) <= early_stop:
        return idx
    if 2 <= len(idx) <= 160:
        idx = _kcenter_descend(grid, idx, center_ok, stop, effort,
                               early_stop=early_stop)
    return idx


def _kcenter_descend(grid: CandidateGrid, idx: np.ndarray,
                     center_ok: np.ndarray, stop: float,
                     effort: EffortConfig,
                     early_stop: Optional[int] = None) -> np.ndarray:
    """Repeatedly try one fewer center via Lloyd-style max-distance moves."""
    from ._kernels import min_dists

    form = grid.form_T
    Fcov = grid.features_T[grid.cover_mask]
    ok_idx = np.nonzero(center_ok)[0]
    Fok = grid.features_T[ok_idx]
    def lloyd(trial: np.ndarray) -> Optional[np.ndarray]:
        for _ in range(16):
            d = np.stack([min_dists(Fcov, grid.features_T[c], form.kind, form.p)
                          for c in trial])
            assign = np.argmin(d, axis=0)
            radius = float(d[assign, np.arange(d.shape[1])].max())
            if radius <= stop + effort.abs_tol:
                return trial
            new_trial = trial.copy()
            for c in range(len(trial)):
                member_rows = np.nonzero(assign == c)[0]
                if len(member_rows) == 0:
                    continue
                sub = member_rows[:: max(1, len(member_rows) // 160)]
                Fm = Fcov[sub]
                # approximate minimax center: eligible point minimizing the
                # max distance to the cluster subsample
                cand = ok_idx[:: max(1, len(ok_idx) // 512)]
                Fc = grid.features_T[cand]
                worst = np.zeros(len(cand))
                for row in Fm:
                    np.maximum(worst, form.combine(Fc - row), out=worst)
                new_trial[c] = cand[int(np.argmin(worst))]
            if np.array_equal(new_trial, trial):
                return None
            trial = new_trial
        return None

    best = np.asarray(idx, dtype=np.int64)
    while len(best) > 1:
        if early_stop is not None and len(best) <= early_stop:
            break
        d = np.stack([min_dists(Fcov, grid.features_T[c], form.kind, form.p)
                      for c in best])
        assign = np.argmin(d, axis=0)
        sizes = np.bincount(assign, minlength=len(best))
        tries = len(best) if len(best) <= 10 else 3
        ok_trial = None
        for drop in np.argsort(sizes, kind="stable")[:tries]:
            ok_trial = lloyd(np.delete(best, int(drop)))
            if ok_trial is not None:
                break
        if ok_trial is None:
            break
        best = np.asarray(sorted(set(ok_trial.tolist())), dtype=np.int64)
    return best


def _refined_cover(K: ConvexBody, T: ConvexBody, grid: CandidateGrid,
                   restrict: bool, best: int, effort: EffortConfig,
                   flags: list[str]) -> Optional[np.ndarray]:
    form = grid.form_T
    center_ok = grid.in_K if restrict else np.ones(len(grid), dtype=bool)
    # coarse universe: farthest net over in-K points, sized to the budget;
    # its achieved radius fixes the sound search radius
    masked = np.where(grid.in_K, grid.gauge_K, np.inf)
    start = int(np.argmin(masked))
    u_idx, u_radius = greedy_farthest(grid.features_T, grid.in_K,
                                      grid.cover_mask, form.kind, form.p, 0.0,
                                      effort.exact_cover_points, start)
    FU = grid.features_T[u_idx]
    # candidate centers: coarse subsample of eligible points plus the universe
    ok_idx = np.nonzero(center_ok)[0]
    stride = max(1, len(ok_idx) // effort.exact_cover_cands)
    cand_idx = np.unique(np.concatenate([ok_idx[::stride], u_idx]))
    if len(cand_idx) > effort.exact_cover_cands:
        cand_idx = cand_idx[:: max(1, len(cand_idx) // effort.exact_cover_cands + 1)]
    FC = grid.features_T[cand_idx]

    best_centers = None
    radii = [0.97, 0.92]
    r_sound = 1.0 - u_radius - 2.0 * grid.cell_radius_T
    if r_sound > 0.3:
        radii.append(r_sound)
    for r_search in radii:
        cov = cross_le(FC, FU, form.kind, form.p, r_search)
        chosen, uncovered = greedy_cover(cov)
        trials = []
        if uncovered == 0:
            trials.append(chosen)
        if (len(u_idx) <= effort.exact_cover_points
                and len(cand_idx) <= effort.exact_cover_cands and uncovered == 0):
            masks = [int.from_bytes(np.packbits(cov[i], bitorder="little").tobytes(),
                                    "little") for i in range(len(cand_idx))]
            universe = (1 << len(u_idx)) - 1
            exact = setcover.exact_set_cover(masks, universe, effort.exact_nodes)
            if exact is None:
                if "setcover-budget" not in flags:
                    flags.append("setcover-budget")
            else:
                trials.insert(0, np.asarray(exact, dtype=np.int64))
        for trial in trials:
            if len(trial) >= best:
                continue
            centers = grid.points[cand_idx[trial]]
            if _certify_on_grid(grid, centers, effort):
                best = len(centers)
                best_centers = centers
    return best_centers


# ---------------------------------------------------------------------------
# lower bounds

def _volume_lower(K: ConvexBody, T: ConvexBody) -> Optional[int]:
    try:
        ratio = bodies.volume(K) / bodies.volume(T)
    except UnsupportedOperation:
        return None
    return max(1, math.ceil(ratio * (1.0 - 1e-9)))


def covering_lower(K: ConvexBody, T: ConvexBody,
                   effort: EffortConfig = DEFAULT_EFFORT,
                   with_packing: bool = True) -> tuple[int, object, list[str]]:
    """Certified lower bound: max of the volume quotient and a packing
    at separation 2 (strict, slack eta)."""
    flags: list[str] = []
    lo, cert = 1, None
    v = _volume_lower(K, T)
    if v is not None and v > lo:
        lo, cert = v, ("volume", v)
    if not with_packing:
        return lo, cert, flags
    try:
        grid = _packing_grid(K, T, 2.0, effort)
    except ResourceError:
        flags.append("packing-grid-budget")
        return lo, cert, flags
    pts = max_packing(K, T, 2.0, grid, effort.packing_exact_cutoff, effort)
    if len(pts) > lo:
        lo, cert = len(pts), PackingCertificate(pts, 2.0)
    return lo, cert, flags


def _packing_grid(K: ConvexBody, T: ConvexBody, eps: float,
                  effort: EffortConfig) -> CandidateGrid:
    last = None
    for frac in (12.0, 8.0, 5.0, 3.0):
        try:
            grid = grid_candidates(K, T, eps / frac, effort)
        except ResourceError:
            continue
        if len(grid) <= 250_000:
            return grid
        last = grid
    if last is not None:
        return last
    return grid_candidates(K, T, eps / 3.0, effort)


# ---------------------------------------------------------------------------
# brackets

def covering_bracket(K: ConvexBody, T: ConvexBody,
                     effort: EffortConfig = DEFAULT_EFFORT,
                     restrict: bool = False) -> Bracket:
    """Certified bracket for the covering number N(K, T) (or N'(K, T))."""
    try:
        hi, hi_cert, hflags = covering_upper(K, T, effort, restrict)
    except ResourceError as exc:
        logger.warning("covering upper bound hit a budget: %s", exc)
        hi, hi_cert, hflags = None, None, ["upper-budget"]
    lo, lo_cert, lflags = covering_lower(K, T, effort)
    if hi is None:
        return Bracket(lo, math.inf, lo_cert, None, tuple(hflags + lflags))
    return Bracket(lo, hi, lo_cert, hi_cert, tuple(hflags + lflags))


def covering_restricted_bracket(K: ConvexBody, T: ConvexBody,
                                effort: EffortConfig = DEFAULT_EFFORT) -> Bracket:
    """N'(K, T): translate centers required to lie inside K."""
    return covering_bracket(K, T, effort, restrict=True)


# ---------------------------------------------------------------------------
# entropy numbers

@dataclass(frozen=True, eq=False)
class EntropySequence:
    pair_id: str
    k_values: tuple[int, ...]
    brackets: tuple[Bracket, ...]

    def bracket(self, k: int) -> Bracket:
        return self.brackets[self.k_values.index(k)]

    @property
    def k_max(self) -> int:
        return self.k_values[-1]

    def hi(self, k: int) -> float:
        return self.bracket(k).hi

    def lo(self, k: int) -> float:
        return self.bracket(k).lo

    def extended_hi(self, k: int, n: int) -> float:
        """Upper bound on e_k valid for any k, extending past k_max with
        the volumetric net bound e_k <= 2 e_n / (2^((k-n)/n) - 1)."""
        kk = min(int(k), self.k_max)
        base = self.hi(kk)
        if k <= self.k_max:
            return base
        if self.k_max < n:
            raise ValueError("sequence too short to extend: needs k_max >= dim")
        grow = 2.0 ** ((k - n) / n) - 1.0
        return min(base, 2.0 * self.hi(n) / grow)


def _scaled(T: ConvexBody, eps: float) -> ConvexBody:
    return scale_body(T, eps)


class _EntropyEvaluator:
    """Shared cache of covering brackets across homothety factors."""

    def __init__(self, K: ConvexBody, T: ConvexBody, effort: EffortConfig):
        self.K, self.T, self.effort = K, T, effort
        self.cache: dict[float, Bracket] = {}
        try:
            self.vol_ratio = bodies.volume(K) / bodies.volume(T)
        except UnsupportedOperation:
            self.vol_ratio = None
        r, r_exact = gauge_radius(T, K)
        self.radius = r
        self.radius_exact = r_exact

    def n_bracket(self, eps: float) -> Bracket:
        if eps not in self.cache:
            small_grid = True
            try:
                g = grid_candidates(self.K, _scaled(self.T, eps), 0.4,
                                    self.effort.with_(grid_budget=50_000))
                small_grid = len(g) <= 50_000
            except ResourceError:
                small_grid = False
            eff = self.effort
            Ts = _scaled(self.T, eps)
            try:
                hi, hic, hf = covering_upper(self.K, Ts, eff)
            except ResourceError:
                hi, hic, hf = None, None, ["upper-budget"]
            lo, loc, lf = covering_lower(self.K, Ts, eff, with_packing=small_grid)
            if self.vol_ratio is not None:
                v = max(1, math.ceil(self.vol_ratio / eps ** self.K.dim * (1 - 1e-9)))
                if v > lo:
                    lo, loc = v, ("volume", v)
            self.cache[eps] = Bracket(lo, math.inf if hi is None else hi,
                                      loc, hic, tuple(hf + lf))
        return self.cache[eps]

    def lo_anchor(self, target: int) -> float:
        """Analytic eps with N(K, eps T) > target, from the volume bound."""
        if self.vol_ratio is not None:
            n = self.K.dim
            return (self.vol_ratio / (target * (1.0 + 1e-9))) ** (1.0 / n) * (1 - 1e-9)
        return self.radius / (4.0 * (target + 1))

    def hi_anchor(self) -> float:
        return self.radius * (1.0 + self.effort.eta)


def entropy_bracket(K: ConvexBody, T: ConvexBody, k: float,
                    effort: EffortConfig = DEFAULT_EFFORT,
                    _ev: Optional[_EntropyEvaluator] = None) -> Bracket:
    """Bracket for e_k(K, T) = inf{eps : N(K, eps T) <= 2^k}.

    Fractional k floors to an integer.  hi is the smallest tested eps
    with a certified cover count <= 2^k; lo the largest tested eps whose
    certified lower bound exceeds 2^k.  Bisection stops at ratio
    1 + bisect_tol, at the step budget, or at the certifiability gap
    (flagged ``loose`` beyond loose_ratio).
    """
    k = int(math.floor(k))
    if k < 0:
        raise ValueError("k must be >= 0")
    target = 2 ** k
    ev = _ev if _ev is not None else _EntropyEvaluator(K, T, effort)
    hi = ev.hi_anchor()
    lo = min(ev.lo_anchor(target), hi * 0.999999)
    flags: list[str] = []
    if not ev.radius_exact:
        # fall back to a certified evaluation at the sampled radius
        b = ev.n_bracket(hi)
        if b.hi > target:
            hi *= 2.0
    gap_lo = gap_hi = None
    steps = 0
    while hi / lo > 1.0 + effort.bisect_tol and steps < 2 * effort.bisect_max_steps:
        mid = math.sqrt(lo * hi)
        if gap_lo is not None and gap_lo <= mid <= gap_hi:
            # the remaining interval is inside the certifiability gap
            break
        br = ev.n_bracket(mid)
        if br.hi <= target:
            hi = mid
        elif br.lo > target:
            lo = mid
        else:
            gap_lo = mid if gap_lo is None else min(gap_lo, mid)
            gap_hi = mid if gap_hi is None else max(gap_hi, mid)
            # refine both edges independently around the gap
            lo_edge = _edge_search(ev, lo, gap_lo, target, True, effort)
            hi_edge = _edge_search(ev, gap_hi, hi, target, False, effort)
            lo, hi = lo_edge, hi_edge
            flags.append("certifiability-gap")
            break
        steps += 1
    if hi / lo > effort.loose_ratio:
        flags.append("loose")
    return Bracket(lo, hi, flags=tuple(dict.fromkeys(flags)))


def _edge_search(ev: _EntropyEvaluator, good: float, bad: float, target: int,
                 lower_side: bool, effort: EffortConfig) -> float:
    """Binary search a one-sided certificate edge in (good, bad)."""
    for _ in range(effort.bisect_max_steps):
        if bad / good <= 1.0 + effort.bisect_tol / 2.0:
            break
        mid = math.sqrt(good * bad)
        br = ev.n_bracket(mid)
        fired = (br.lo > target) if lower_side else (br.hi <= target)
        if fired:
            good = mid
        else:
            bad = mid
    return good


def entropy_sequence(K: ConvexBody, T: ConvexBody, k_max: int,
                     effort: EffortConfig = DEFAULT_EFFORT,
                     pair_id: str = "") -> EntropySequence:
    """Brackets for e_k, k = 0..k_max, with one shared bisection cache.

    Monotonicity postprocessing: upper bounds are cummin'd forward and
    lower bounds cummax'd backward, both of which preserve validity for
    a non-increasing sequence.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    ev = _EntropyEvaluator(K, T, effort)
    brs = [entropy_bracket(K, T, k, effort, _ev=ev) for k in range(k_max + 1)]
    his = [b.hi for b in brs]
    los = [b.lo for b in brs]
    for i in range(1, len(his)):
        his[i] = min(his[i], his[i - 1])
    for i in range(len(los) - 2, -1, -1):
        los[i] = max(los[i], los[i + 1])
    out = [Bracket(min(l, h), h, flags=b.flags) for l, h, b in zip(los, his, brs)]
    label = pair_id or f"{bodies.body_label(K)}|{bodies.body_label(T)}"
    return EntropySequence(label, tuple(range(k_max + 1)), tuple(out))


# ---------------------------------------------------------------------------
# entropy tail inequality report

@dataclass(frozen=True)
class TailRow:
    k: int
    e_k_hi: float
    e_n_hi: float
    rhs: float
    passed: bool
    implied_c: float
    advisory: bool

    def as_csv_row(self, pair_id: str, n: int) -> list:
        return [pair_id, n, self.k, f"{self.e_k_hi:.9g}", f"{self.e_n_hi:.9g}",
                f"{self.rhs:.9g}", int(self.passed), f"{self.implied_c:.6g}",
                int(self.advisory)]


def tail_check(seq: EntropySequence, n: int,
               effort: EffortConfig = DEFAULT_EFFORT) -> list[TailRow]:
    """Check e_k <= 2 e_n / (2^((k-n)/n) - 1) for all k >= 3n in the
    sequence, using upper brackets on both sides per the toolkit's
    reporting convention; rows are advisory when brackets are loose.
    """
    if n < 1 or seq.k_max < 3 * n or n not in seq.k_values:
        raise ValueError(f"sequence must cover k = {n}..{3 * n} at least")
    e_n = seq.bracket(n)
    rows = []
    for k in seq.k_values:
        if k < 3 * n:
            continue
        e_k = seq.bracket(k)
        grow = 2.0 ** ((k - n) / n) - 1.0
        rhs = (1.0 + effort.eta) * 2.0 * e_n.hi / grow
        passed = e_k.hi <= rhs
        implied_c = (n / k) * math.log(2.0 * e_n.hi / max(e_k.hi, 1e-300)) \
            if e_k.hi > 0 else math.inf
        advisory = (e_k.ratio > effort.loose_ratio or
                    e_n.ratio > effort.loose_ratio)
        rows.append(TailRow(k, e_k.hi, e_n.hi, rhs, passed, implied_c, advisory))
    return rows
