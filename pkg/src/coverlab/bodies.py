"""Centrally symmetric convex bodies in R^n (desk scale, n <= 4).

Five representations, all immutable and safe to share across threads:

* :class:`HPolytope`  {x : A x <= b}, rows stored in +/- pairs, b > 0
* :class:`VPolytope`  conv(V), V closed under negation
* :class:`Ellipsoid`  {x : x' Q x <= 1}, Q symmetric positive definite
* :class:`LpBall`     {x : sum |x_i/r_i|^p <= 1}, p in [1, inf]
* :class:`LinearImage` M(inner), M invertible

Exact operations: gauge (Minkowski functional), support function, polar,
linear images, volume (closed forms; fan triangulation for polytopes in
n <= 3), and a minimum-volume enclosing ellipsoid with a certified
distance-to-ball ratio.

The V-polytope gauge is an exact linear program solved by the package's
own simplex routine (lowest-index pivoting, deterministic).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Optional, Union

import numpy as np

from .lp import solve_lp


class BodyError(ValueError):
    """Malformed body description."""


class UnsupportedOperation(BodyError):
    """Operation valid but not available for this representation/dimension."""


def _readonly(a) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class HPolytope:
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, float))
        b = np.atleast_1d(np.asarray(self.b, float))
        if A.shape[0] != b.size:
            raise BodyError("A and b row counts differ")
        if np.any(b <= 0):
            raise BodyError("all H-polytope offsets must be positive")
        if np.linalg.matrix_rank(A) < A.shape[1]:
            raise BodyError("H-polytope is unbounded: rows do not span")
        # rows must come in +/- pairs (central symmetry)
        scaled = A / b[:, None]
        for row in scaled:
            if not np.any(np.all(np.abs(scaled + row) < 1e-9, axis=1)):
                raise BodyError("H-polytope rows are not closed under negation")
        object.__setattr__(self, "A", _readonly(A))
        object.__setattr__(self, "b", _readonly(b))

    @property
    def dim(self) -> int:
        return self.A.shape[1]


@dataclass(frozen=True, eq=False)
class VPolytope:
    V: np.ndarray

    def __post_init__(self):
        V = np.atleast_2d(np.asarray(self.V, float))
        if np.linalg.matrix_rank(V) < V.shape[1]:
            raise BodyError("V-polytope vertices do not span")
        for v in V:
            if not np.any(np.all(np.abs(V + v) < 1e-9, axis=1)):
                raise BodyError("V-polytope vertices are not closed under negation")
        object.__setattr__(self, "V", _readonly(V))

    @property
    def dim(self) -> int:
        return self.V.shape[1]


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    Q: np.ndarray

    def __post_init__(self):
        Q = np.atleast_2d(np.asarray(self.Q, float))
        if not np.allclose(Q, Q.T, atol=1e-10):
            raise BodyError("ellipsoid matrix must be symmetric")
        try:
            L = np.linalg.cholesky(Q)
        except np.linalg.LinAlgError:
            raise BodyError("ellipsoid matrix must be positive definite") from None
        object.__setattr__(self, "Q", _readonly((Q + Q.T) / 2))
        object.__setattr__(self, "_chol", _readonly(L))
        object.__setattr__(self, "_Qinv", _readonly(np.linalg.inv(self.Q)))

    @property
    def dim(self) -> int:
        return self.Q.shape[0]


@dataclass(frozen=True, eq=False)
class LpBall:
    p: float
    r: np.ndarray

    def __post_init__(self):
        p = float(self.p)
        if not (p >= 1):
            raise BodyError(f"lp ball needs p >= 1, got {p}")
        r = np.atleast_1d(np.asarray(self.r, float))
        if np.any(r <= 0):
            raise BodyError("lp ball radii must be positive")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "r", _readonly(r))

    @property
    def dim(self) -> int:
        return self.r.size


@dataclass(frozen=True, eq=False)
class LinearImage:
    M: np.ndarray
    inner: "ConvexBody"

    def __post_init__(self):
        M = np.atleast_2d(np.asarray(self.M, float))
        if M.shape[0] != M.shape[1] or M.shape[0] != self.inner.dim:
            raise BodyError("linear image matrix shape mismatch")
        det = np.linalg.det(M)
        if abs(det) < 1e-12:
            raise BodyError("linear image matrix is singular")
        object.__setattr__(self, "M", _readonly(M))
        object.__setattr__(self, "_Minv", _readonly(np.linalg.inv(M)))

    @property
    def dim(self) -> int:
        return self.M.shape[0]


ConvexBody = Union[HPolytope, VPolytope, Ellipsoid, LpBall, LinearImage]


# ---------------------------------------------------------------------------
# gauge / support

def _vpoly_gauge_lp(V: np.ndarray, x: np.ndarray) -> float:
    # gauge = min sum(lam) s.t. V' lam = x, lam >= 0
    m = V.shape[0]
    res = solve_lp(np.ones(m), A_eq=V.T, b_eq=x)
    if res.status != "optimal":
        raise BodyError("V-polytope gauge LP failed (body malformed?)")
    return max(0.0, res.objective)


def gauge(B: ConvexBody, x) -> float:
    """Minkowski functional ||x||_B = inf{t > 0 : x in tB}."""
    x = np.asarray(x, float)
    if isinstance(B, HPolytope):
        return float(max(0.0, np.max(B.A @ x / B.b)))
    if isinstance(B, VPolytope):
        return _vpoly_gauge_lp(B.V, x)
    if isinstance(B, Ellipsoid):
        return float(math.sqrt(max(0.0, x @ B.Q @ x)))
    if isinstance(B, LpBall):
        z = np.abs(x / B.r)
        if math.isinf(B.p):
            return float(z.max())
        return float(np.sum(z ** B.p) ** (1.0 / B.p))
    if isinstance(B, LinearImage):
        return gauge(B.inner, B._Minv @ x)
    raise TypeError(f"not a convex body: {B!r}")


def support(B: ConvexBody, y) -> float:
    """Support function h_B(y) = sup_{x in B} <x, y>."""
    y = np.asarray(y, float)
    if isinstance(B, HPolytope):
        return _vpoly_gauge_lp(B.A / B.b[:, None], y)
    if isinstance(B, VPolytope):
        return float(np.max(B.V @ y))
    if isinstance(B, Ellipsoid):
        return float(math.sqrt(max(0.0, y @ B._Qinv @ y)))
    if isinstance(B, LpBall):
        z = np.abs(y * B.r)
        if math.isinf(B.p):
            return float(z.sum())       # dual of l-inf is l-1
        if B.p == 1:
            return float(z.max())
        q = B.p / (B.p - 1.0)
        return float(np.sum(z ** q) ** (1.0 / q))
    if isinstance(B, LinearImage):
        return support(B.inner, B.M.T @ y)
    raise TypeError(f"not a convex body: {B!r}")


def support_many(B: ConvexBody, Y: np.ndarray) -> np.ndarray:
    """Vectorized support function over rows of Y."""
    Y = np.atleast_2d(np.asarray(Y, float))
    if isinstance(B, VPolytope):
        return np.max(Y @ B.V.T, axis=1)
    if isinstance(B, Ellipsoid):
        return np.sqrt(np.maximum(0.0, np.einsum("ij,jk,ik->i", Y, B._Qinv, Y)))
    if isinstance(B, LpBall):
        Z = np.abs(Y * B.r)
        if math.isinf(B.p):
            return Z.sum(axis=1)
        if B.p == 1:
            return Z.max(axis=1)
        q = B.p / (B.p - 1.0)
        return np.sum(Z ** q, axis=1) ** (1.0 / q)
    if isinstance(B, LinearImage):
        return support_many(B.inner, Y @ B.M)
    return np.array([support(B, y) for y in Y])


# ---------------------------------------------------------------------------
# polar / linear images / scaling

def polar(B: ConvexBody) -> ConvexBody:
    """Polar body {y : <x,y> <= 1 for all x in B}; exact representation swap."""
    if isinstance(B, HPolytope):
        return VPolytope(B.A / B.b[:, None])
    if isinstance(B, VPolytope):
        return HPolytope(B.V, np.ones(B.V.shape[0]))
    if isinstance(B, Ellipsoid):
        return Ellipsoid(B._Qinv)
    if isinstance(B, LpBall):
        if math.isinf(B.p):
            q = 1.0
        elif B.p == 1:
            q = math.inf
        else:
            q = B.p / (B.p - 1.0)
        return LpBall(q, 1.0 / B.r)
    if isinstance(B, LinearImage):
        return LinearImage(B._Minv.T, polar(B.inner))
    raise TypeError(f"not a convex body: {B!r}")


def linear_image(M, B: ConvexBody) -> ConvexBody:
    """The body M(B) for invertible M."""
    M = np.atleast_2d(np.asarray(M, float))
    if isinstance(B, Ellipsoid):
        Mi = np.linalg.inv(M)
        return Ellipsoid(Mi.T @ B.Q @ Mi)
    if isinstance(B, VPolytope):
        return VPolytope(B.V @ M.T)
    if isinstance(B, HPolytope):
        return HPolytope(B.A @ np.linalg.inv(M), B.b)
    return LinearImage(M, B)


def scale_body(B: ConvexBody, s: float) -> ConvexBody:
    """The homothet s*B, s > 0, without changing the representation kind."""
    if s <= 0:
        raise BodyError("scale factor must be positive")
    if s == 1.0:
        return B
    if isinstance(B, HPolytope):
        return HPolytope(B.A, B.b * s)
    if isinstance(B, VPolytope):
        return VPolytope(B.V * s)
    if isinstance(B, Ellipsoid):
        return Ellipsoid(B.Q / (s * s))
    if isinstance(B, LpBall):
        return LpBall(B.p, B.r * s)
    if isinstance(B, LinearImage):
        return LinearImage(B.M * s, B.inner)
    raise TypeError(f"not a convex body: {B!r}")


# ---------------------------------------------------------------------------
# vertex / facet enumeration (exact, desk scale)

def vertices(B: ConvexBody) -> Optional[np.ndarray]:
    """Exact vertex array, or None when the body has none (smooth cases)."""
    if isinstance(B, VPolytope):
        return np.asarray(B.V)
    if isinstance(B, HPolytope):
        return _hpoly_vertices(B)
    if isinstance(B, LpBall):
        n = B.dim
        if math.isinf(B.p):
            corners = np.array(list(product(*[(-ri, ri) for ri in B.r])))
            return corners
        if B.p == 1:
            eye = np.eye(n)
            return np.vstack([eye * B.r, -eye * B.r])
        return None
    if isinstance(B, LinearImage):
        v = vertices(B.inner)
        return None if v is None else v @ B.M.T
    return None


def _hpoly_vertices(B: HPolytope) -> np.ndarray:
    n = B.dim
    if n > 3:
        raise UnsupportedOperation("H-polytope vertex enumeration limited to n <= 3")
    A, b = B.A, B.b
    if n == 1:
        w = float(np.min(b / A[:, 0][A[:, 0] > 0]))
        return np.array([[w], [-w]])
    out = []
    for idx in combinations(range(A.shape[0]), n):
        sub = A[list(idx)]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        x = np.linalg.solve(sub, b[list(idx)])
        if np.all(A @ x <= b * (1 + 1e-9) + 1e-12):
            out.append(x)
    if not out:
        raise BodyError("H-polytope has no vertices (malformed)")
    pts = np.array(out)
    keep = []
    for x in pts:
        if not any(np.allclose(x, pts[j], atol=1e-9) for j in keep):
            keep.append(len(keep))
            pts[len(keep) - 1] = x
    return pts[: len(keep)]


def facets(B: ConvexBody) -> Optional[np.ndarray]:
    """Rows C with body = {x : C x <= 1}, or None (smooth boundary)."""
    if isinstance(B, HPolytope):
        return B.A / B.b[:, None]
    if isinstance(B, VPolytope):
        return _vpoly_facets(B.V)
    if isinstance(B, LpBall):
        n = B.dim
        if math.isinf(B.p):
            eye = np.eye(n)
            return np.vstack([eye / B.r, -eye / B.r])
        if B.p == 1:
            signs = np.array(list(product((-1.0, 1.0), repeat=n)))
            return signs / B.r
        return None
    if isinstance(B, LinearImage):
        C = facets(B.inner)
        return None if C is None else C @ B._Minv
    return None


def _vpoly_facets(V: np.ndarray) -> np.ndarray:
    n = V.shape[1]
    if n == 1:
        w = float(np.max(np.abs(V[:, 0])))
        return np.array([[1.0 / w], [-1.0 / w]])
    from scipy.spatial import ConvexHull

    hull = ConvexHull(V)
    eqs = hull.equations  # normal @ x + offset <= 0
    normals, offsets = eqs[:, :-1], eqs[:, -1]
    if np.any(offsets >= -1e-12):
        raise BodyError("origin not interior to V-polytope")
    return normals / (-offsets[:, None])


# ---------------------------------------------------------------------------
# volume

def unit_ball_volume(n: int) -> float:
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def volume(B: ConvexBody) -> float:
    """Lebesgue volume; closed forms where available, exact fans for polytopes."""
    n = B.dim
    if isinstance(B, Ellipsoid):
        return unit_ball_volume(n) / math.sqrt(np.linalg.det(B.Q))
    if isinstance(B, LpBall):
        prod_r = float(np.prod(B.r))
        if math.isinf(B.p):
            return 2.0 ** n * prod_r
        return (2.0 * math.gamma(1.0 / B.p + 1.0)) ** n \
            / math.gamma(n / B.p + 1.0) * prod_r
    if isinstance(B, LinearImage):
        return abs(np.linalg.det(B.M)) * volume(B.inner)
    if isinstance(B, (VPolytope, HPolytope)):
        if n > 3:
            raise UnsupportedOperation("polytope volume limited to n <= 3")
        V = vertices(B)
        if n == 1:
            return float(2.0 * np.max(np.abs(V)))
        from scipy.spatial import ConvexHull

        return float(ConvexHull(V).volume)
    raise TypeError(f"not a convex body: {B!r}")


# ---------------------------------------------------------------------------
# minimum-volume enclosing ellipsoid

@dataclass(frozen=True)
class MveeResult:
    ellipsoid: Ellipsoid
    john_ratio: float   # smallest rho with rho^{-1} E inside the body


def mvee(B: VPolytope, tol: float = 1e-6, max_iter: int = 200_000) -> MveeResult:
    """Minimum-volume origin-centered enclosing ellipsoid of a V-polytope.

    Coordinate-ascent on the D-optimal design weights with add and drop
    steps.  The returned ellipsoid E contains every vertex exactly
    (hence B subset E subset (1+tol) MVEE in volume terms), and
    ``john_ratio`` is the smallest rho with rho^{-1} E inside B, computed
    exactly from B's facets, certifying the distance to the ball.
    """
    P = np.asarray(B.V)
    m, n = P.shape
    if np.linalg.matrix_rank(P) < n:
        raise BodyError("mvee needs vertices spanning R^n")
    eps = tol / 2.0
    u = np.full(m, 1.0 / m)
    for _ in range(max_iter):
        Minv = np.linalg.inv(P.T @ (u[:, None] * P))
        kappa = np.einsum("ij,jk,ik->i", P, Minv, P)
        jp = int(np.argmax(kappa))
        ep = kappa[jp]
        sup = np.nonzero(u > 1e-14)[0]
        jm = int(sup[np.argmin(kappa[sup])])
        em = kappa[jm]
        if ep <= n * (1 + eps) and em >= n * (1 - eps):
            break
        if ep - n >= n - em:
            beta = (ep - n) / (n * (ep - 1.0))
            j = jp
        else:
            beta = (em - n) / (n * (em - 1.0))  # negative: drop step
            beta = max(beta, -u[jm] / (1.0 - u[jm]))
            j = jm
        u *= 1.0 - beta
        u[j] += beta
        u = np.maximum(u, 0.0)
        u /= u.sum()
    Minv = np.linalg.inv(P.T @ (u[:, None] * P))
    kappa_max = float(np.max(np.einsum("ij,jk,ik->i", P, Minv, P)))
    Q = Minv / kappa_max
    E = Ellipsoid(Q)
    C = facets(B)
    rho = float(np.max(np.sqrt(np.einsum("ij,jk,ik->i", C, E._Qinv, C))))
    return MveeResult(E, rho)


# ---------------------------------------------------------------------------
# serialization (JSON-style dicts; floats round-trip bit-faithfully)

def to_dict(B: ConvexBody) -> dict:
    if isinstance(B, HPolytope):
        return {"kind": "hpolytope", "A": B.A.tolist(), "b": B.b.tolist()}
    if isinstance(B, VPolytope):
        return {"kind": "vpolytope", "V": B.V.tolist()}
    if isinstance(B, Ellipsoid):
        return {"kind": "ellipsoid", "Q": B.Q.tolist()}
    if isinstance(B, LpBall):
        return {"kind": "lpball", "p": "inf" if math.isinf(B.p) else B.p,
                "r": B.r.tolist()}
    if isinstance(B, LinearImage):
        return {"kind": "linearimage", "M": B.M.tolist(), "inner": to_dict(B.inner)}
    raise TypeError(f"not a convex body: {B!r}")


def from_dict(d: dict) -> ConvexBody:
    try:
        kind = d["kind"]
    except (TypeError, KeyError):
        raise BodyError("body description lacks a 'kind' field") from None
    if kind == "hpolytope":
        return HPolytope(d["A"], d["b"])
    if kind == "vpolytope":
        return VPolytope(d["V"])
    if kind == "ellipsoid":
        return Ellipsoid(d["Q"])
    if kind == "lpball":
        p = d["p"]
        return LpBall(math.inf if p in ("inf", "Infinity") else float(p), d["r"])
    if kind == "linearimage":
        return LinearImage(d["M"], from_dict(d["inner"]))
    raise BodyError(f"unknown body kind {kind!r}")


def body_label(B: ConvexBody) -> str:
    """Short deterministic label used in report rows."""
    if isinstance(B, HPolytope):
        return f"hpoly[{B.A.shape[0]}x{B.dim}]"
    if isinstance(B, VPolytope):
        return f"vpoly[{B.V.shape[0]}x{B.dim}]"
    if isinstance(B, Ellipsoid):
        return f"ell[{B.dim}]"
    if isinstance(B, LpBall):
        p = "inf" if math.isinf(B.p) else f"{B.p:g}"
        return f"l{p}[{B.dim}]"
    return f"img[{body_label(B.inner)}]"
