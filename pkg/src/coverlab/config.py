"""Effort budgets and numeric tolerances shared by all solvers.

Two tolerances appear throughout:

* ``abs_tol`` — absolute tolerance for plain numeric comparisons
  (default 1e-9).
* ``eta`` — multiplicative "inequality slack" (default 1e-6) used when
  asserting covering/packing/separation inequalities.  Packing and
  separation constraints are strict and accepted only beyond the
  (1+eta) inflation; covering constraints are non-strict.  This absorbs
  open/closed boundary degeneracies (see the regression tests in
  tests/test_separation.py for the 1-D counterexample that forces it).
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace


@dataclass(frozen=True)
class EffortConfig:
    """Resource budgets for the counting pipelines.

    All solvers degrade gracefully when a budget is hit: they return a
    wider bracket carrying a flag, or fall back from exact to greedy
    search with a logged warning, never silently and never by raising
    from deep inside a pipeline.
    """

    grid_budget: int = 2_000_000          # max candidate grid points
    cover_delta: float = 0.05             # net resolution for cover certification
    search_delta: float = 0.18            # coarse net resolution for cover search
    max_cover_delta: float = 0.25         # budget-forced delta beyond this -> flag
    exact_cover_points: int = 60          # exact set cover: max universe size
    exact_cover_cands: int = 400          # exact set cover: max candidate sets
    exact_nodes: int = 200_000            # node budget for branch-and-bound searches
    packing_exact_cutoff: int = 400       # exact independent set: max candidates
    max_center_candidates: int = 2_000    # candidate-center subsample cap
    bisect_tol: float = 0.05              # entropy bisection: stop at hi/lo <= 1+tol
    bisect_max_steps: int = 12            # entropy bisection: per-bound step budget
    loose_ratio: float = 1.5              # flag entropy brackets wider than this
    eta: float = 1e-6                     # inequality slack (multiplicative)
    abs_tol: float = 1e-9                 # absolute comparison tolerance
    restarts: int = 16                    # separation greedy restarts
    mc_batch: int = 20_000                # Monte Carlo batch size
    seed: int = 0
    threads: int = 1

    def __post_init__(self) -> None:
        for name in ("cover_delta", "search_delta", "max_cover_delta",
                     "bisect_tol", "eta", "abs_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if not self.cover_delta < 1:
            raise ValueError("cover_delta must be < 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    def with_(self, **kw) -> "EffortConfig":
        return replace(self, **kw)


DEFAULT_EFFORT = EffortConfig()

#: names of the EffortConfig fields, used by the CLI for flag/env parsing
EFFORT_FIELDS = tuple(f.name for f in fields(EffortConfig))
