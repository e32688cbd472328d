"""Normalized gauge forms for batch evaluation.

Every supported body's gauge reduces to one of four row combiners after
a fixed linear transform:

* ``linmax``: gauge(z) = max_k (C z)_k      (polytopes; rows in +/- pairs)
* ``l2``:     gauge(z) = ||W z||_2          (ellipsoids)
* ``lp``:     gauge(z) = ||W z||_p          (lp balls, finite p)
* ``linf``:   gauge(z) = max_k |(W z)_k|    (boxes)

Linear images compose by right-multiplying the transform, so distances
between stored points need only the precomputed feature matrix
``F = X @ mat.T``: d(x_i, x_j) = combine(F[i] - F[j]).  This is the
contract the grid kernels (see ``coverlab._kernels``) are written
against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import bodies
from .bodies import ConvexBody, Ellipsoid, HPolytope, LinearImage, LpBall, VPolytope

KIND_LINMAX, KIND_L2, KIND_LP, KIND_LINF = 0, 1, 2, 3


@dataclass(frozen=True)
class MetricForm:
    kind: int
    mat: np.ndarray     # C for linmax, W otherwise
    p: float = 2.0

    def features(self, X: np.ndarray) -> np.ndarray:
        """Feature rows for stored points (and for query offsets alike)."""
        return np.ascontiguousarray(np.atleast_2d(X) @ self.mat.T)

    def combine(self, Z: np.ndarray) -> np.ndarray:
        """Gauge values from feature-space rows Z."""
        if self.kind == KIND_LINMAX:
            return np.maximum(Z.max(axis=-1), 0.0)
        if self.kind == KIND_L2:
            return np.sqrt(np.einsum("...k,...k->...", Z, Z))
        if self.kind == KIND_LINF:
            return np.abs(Z).max(axis=-1)
        return np.sum(np.abs(Z) ** self.p, axis=-1) ** (1.0 / self.p)

    def gauge_many(self, X: np.ndarray) -> np.ndarray:
        return self.combine(self.features(X))


def metric_form(T: ConvexBody) -> MetricForm:
    if isinstance(T, HPolytope):
        return MetricForm(KIND_LINMAX, T.A / T.b[:, None])
    if isinstance(T, VPolytope):
        return MetricForm(KIND_LINMAX, bodies.facets(T))
    if isinstance(T, Ellipsoid):
        return MetricForm(KIND_L2, T._chol.T.copy())
    if isinstance(T, LpBall):
        W = np.diag(1.0 / T.r)
        if math.isinf(T.p):
            return MetricForm(KIND_LINF, W)
        if T.p == 2.0:
            return MetricForm(KIND_L2, W)
        return MetricForm(KIND_LP, W, T.p)
    if isinstance(T, LinearImage):
        f = metric_form(T.inner)
        return MetricForm(f.kind, f.mat @ T._Minv, f.p)
    raise TypeError(f"not a convex body: {T!r}")


def _sign_rows(W: np.ndarray) -> np.ndarray:
    # l1 gauge as a max of linear functionals: all sign patterns of rows
    n = W.shape[0]
    signs = np.array(list(product((-1.0, 1.0), repeat=n)))
    return signs @ W


def gauge_radius(T: ConvexBody, K: ConvexBody) -> tuple[float, bool]:
    """(max_{x in K} gauge_T(x), exact?).

    Exact whenever K has vertices, or gauge_T is a max of linear
    functionals (then the radius is a max of supports of K), or both
    sides are quadratic (spectral norm).  The sampled fallback
    deliberately overestimates and reports exact=False.
    """
    v = bodies.vertices(K)
    form_t = metric_form(T)
    if v is not None:
        return float(np.max(form_t.gauge_many(v))), True
    rows = None
    if form_t.kind == KIND_LINMAX:
        rows = form_t.mat
    elif form_t.kind == KIND_LINF:
        rows = np.vstack([form_t.mat, -form_t.mat])
    elif form_t.kind == KIND_LP and form_t.p == 1.0:
        rows = _sign_rows(form_t.mat)
    if rows is not None:
        return float(np.max(bodies.support_many(K, rows))), True
    if form_t.kind == KIND_L2:
        if isinstance(K, Ellipsoid):
            L = K._chol
            return float(np.linalg.norm(form_t.mat @ np.linalg.inv(L.T),
                                        ord=2)), True
        if isinstance(K, LpBall) and K.p == 2.0:
            return float(np.linalg.norm(form_t.mat @ np.diag(K.r), ord=2)), True
    # sampled overestimate: dense sphere directions, inflated by 25%
    n = K.dim
    rng = np.random.default_rng(0)
    dirs = rng.standard_normal((4096, n))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    form_k = metric_form(K)
    boundary = dirs / form_k.gauge_many(dirs)[:, None]
    return float(np.max(form_t.gauge_many(boundary))) * 1.25, False


def box_halfwidths(K: ConvexBody) -> np.ndarray:
    """Axis-aligned bounding box half-widths via the support function."""
    n = K.dim
    eye = np.eye(n)
    return bodies.support_many(K, eye)
