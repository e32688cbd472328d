"""Small dense exact linear programming.

Self-contained two-phase primal simplex for the desk-scale LPs used by
the gauge and separation machinery (tens of variables, tens of rows).
No external solver dependency; scipy.optimize.linprog appears only in
the test suite as an independent oracle.

Determinism and anti-cycling: Bland's rule throughout (entering column =
lowest eligible index, leaving row = lowest basis index among min-ratio
ties), which also makes the selected basis the lexicographically
smallest among optima reachable by the pivot order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

__all__ = ["LPResult", "solve_lp", "frank_wolfe_simplex", "FWResult"]


@dataclass
class LPResult:
    status: str                      # "optimal" | "infeasible" | "unbounded"
    x: Optional[np.ndarray]
    objective: float
    dual_ub: Optional[np.ndarray]    # multipliers of the A_ub rows (>= 0)
    dual_eq: Optional[np.ndarray]    # multipliers of the A_eq rows


def _pivot(T: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    T[row] = T[row] / T[row, col]
    piv = T[row]
    for r in range(T.shape[0]):
        if r != row:
            f = T[r, col]
            if f != 0.0:
                T[r] -= f * piv
    basis[row] = col


def _run_simplex(T: np.ndarray, basis: np.ndarray, ncols: int,
                 banned: frozenset[int], tol: float, max_iter: int) -> str:
    """Minimize the objective held in the last row of tableau T in place."""
    m = T.shape[0] - 1
    for _ in range(max_iter):
        col = -1
        for j in range(ncols):
            if j in banned:
                continue
            if T[m, j] < -tol:
                col = j
                break
        if col < 0:
            return "optimal"
        row, best = -1, np.inf
        for i in range(m):
            a = T[i, col]
            if a > tol:
                ratio = T[i, -1] / a
                if ratio < best - tol or (ratio < best + tol and
                                          (row < 0 or basis[i] < basis[row])):
                    if ratio < best:
                        best = ratio
                    row = i
        if row < 0:
            return "unbounded"
        _pivot(T, basis, row, col)
    raise RuntimeError("simplex iteration budget exceeded")


def solve_lp(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None,
             tol: float = 1e-9, max_iter: int = 20_000) -> LPResult:
    """min c@x  s.t.  A_ub@x <= b_ub,  A_eq@x == b_eq,  x >= 0."""
    c = np.asarray(c, dtype=float)
    n = c.size
    A_ub = np.zeros((0, n)) if A_ub is None else np.atleast_2d(np.asarray(A_ub, float))
    b_ub = np.zeros(0) if b_ub is None else np.atleast_1d(np.asarray(b_ub, float))
    A_eq = np.zeros((0, n)) if A_eq is None else np.atleast_2d(np.asarray(A_eq, float))
    b_eq = np.zeros(0) if b_eq is None else np.atleast_1d(np.asarray(b_eq, float))
    m_ub, m_eq = A_ub.shape[0], A_eq.shape[0]
    m = m_ub + m_eq

    # columns: [x (n) | slacks (m_ub) | artificials (m)]
    A = np.zeros((m, n + m_ub + m))
    b = np.concatenate([b_ub, b_eq])
    A[:m_ub, :n] = A_ub
    A[m_ub:, :n] = A_eq
    A[:m_ub, n:n + m_ub] = np.eye(m_ub)
    neg = b < 0
    A[neg] *= -1.0
    b = np.abs(b)
    art0 = n + m_ub
    A[:, art0:] = np.eye(m)

    T = np.zeros((m + 1, A.shape[1] + 1))
    T[:m, :-1] = A
    T[:m, -1] = b
    # phase 1 objective: sum of artificials, expressed in reduced form
    T[m, :-1] = -A.sum(axis=0)
    T[m, art0:-1] = 0.0
    T[m, -1] = -b.sum()
    basis = np.array([art0 + i for i in range(m)], dtype=int)

    status = _run_simplex(T, basis, art0, frozenset(), tol, max_iter)
    if -T[m, -1] > 1e-7 * (1.0 + abs(b).sum()):
        return LPResult("infeasible", None, np.inf, None, None)
    # drive any artificial still in the basis out (degenerate rows)
    for i in range(m):
        if basis[i] >= art0:
            for j in range(art0):
                if abs(T[i, j]) > tol:
                    _pivot(T, basis, i, j)
                    break

    # phase 2: rebuild the cost row for c, eliminating basic columns
    T[m, :] = 0.0
    T[m, :n] = c
    for i in range(m):
        if T[m, basis[i]] != 0.0:
            T[m] -= T[m, basis[i]] * T[i]
    banned = frozenset(range(art0, A.shape[1]))
    status = _run_simplex(T, basis, art0, banned, tol, max_iter)
    if status == "unbounded":
        return LPResult("unbounded", None, -np.inf, None, None)

    x = np.zeros(A.shape[1])
    for i in range(m):
        x[basis[i]] = T[i, -1]
    # duals read off the reduced costs of slack and artificial columns
    dual_ub = -T[m, n:n + m_ub].copy()
    dual_art = -T[m, art0:-1].copy()
    dual_art[neg] *= -1.0
    dual_eq = dual_art[m_ub:]
    dual_ub = np.where(neg[:m_ub], dual_art[:m_ub], dual_ub)
    return LPResult("optimal", x[:n], float(T[m, -1] * -1.0), dual_ub, dual_eq)


@dataclass
class FWResult:
    value: float        # f at the returned point
    lower: float        # certified lower bound on min f (value - gap)
    gap: float
    mu: np.ndarray
    iterations: int


def frank_wolfe_simplex(f: Callable[[np.ndarray], float],
                        grad: Callable[[np.ndarray], np.ndarray],
                        k: int,
                        gap_tol: float = 1e-7,
                        max_iter: int = 5_000,
                        quad: Optional[tuple[np.ndarray, np.ndarray]] = None,
                        ) -> FWResult:
    """Minimize convex f over the probability simplex in R^k.

    Away-step Frank-Wolfe.  The linearization gap g(mu) = grad@mu -
    min_i grad_i certifies min f >= f(mu) - g(mu), which is the bound
    callers rely on.  When ``quad=(H, g0)`` is given, f is the quadratic
    mu@H@mu - 2 g0@mu + const and exact line search is used; otherwise
    backtracking.
    """
    mu = np.zeros(k)
    mu[0] = 1.0
    fval = f(mu)
    it = 0
    for it in range(1, max_iter + 1):
        g = grad(mu)
        s = int(np.argmin(g))
        fw_gap = float(g @ mu - g[s])
        if fw_gap <= gap_tol:
            break
        support = np.nonzero(mu > 1e-15)[0]
        a = int(support[int(np.argmax(g[support]))])
        away_gap = float(g[a] - g @ mu)
        d = np.zeros(k)
        if fw_gap >= away_gap or mu[a] >= 1.0 - 1e-15:
            d -= mu
            d[s] += 1.0
            gamma_max = 1.0
        else:
            d += mu
            d[a] -= 1.0
            gamma_max = mu[a] / (1.0 - mu[a])
        slope = float(g @ d)  # < 0 for both directions
        if quad is not None:
            H, _ = quad
            denom = float(d @ (H @ d))
            step = gamma_max if denom <= 1e-300 else min(gamma_max, -slope / (2 * denom))
        else:
            step = gamma_max
            while step > 1e-16 and f(mu + step * d) > fval + 0.5 * slope * step:
                step *= 0.5
        if step <= 0:
            break
        mu = np.maximum(mu + step * d, 0.0)
        mu /= mu.sum()
        fval = f(mu)
    g = grad(mu)
    gap = max(0.0, float(g @ mu - g.min()))
    return FWResult(fval, fval - gap, gap, mu, it)
