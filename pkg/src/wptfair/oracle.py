"""Brute-force reference solvers used to certify the allocators in tests.

These are deliberately naive and slow.  They never call into
:mod:`wptfair.kernels`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .allocation import AllocationProblem
from .errors import ConvergenceError, DomainError

__all__ = [
    "GridSpec",
    "grid_max_total",
    "grid_max_min",
    "projected_gradient_total",
    "project_budget_box",
]


@dataclass(frozen=True)
class GridSpec:
    """``resolution`` points per axis on ``[0, min(cap, e_c)]``.

    ``refine`` extra passes re-grid a window of +-2 cells around the
    incumbent, shrinking the cell size by ``(resolution - 1) / 4`` each time.
    """

    resolution: int = 200
    refine: int = 0

    def __post_init__(self):
        if self.resolution < 2:
            raise DomainError("grid resolution must be >= 2")
        if self.refine < 0:
            raise DomainError("refine must be >= 0")


def _values(pr: AllocationProblem, P):
    return pr.a * np.log1p(pr.b * pr.lam * P)


def _search(pr: AllocationProblem, grid: GridSpec, score):
    # Both objectives are nondecreasing in every coordinate, so for a given
    # choice of the first n-1 powers the best last power is whatever budget
    # is left (up to its cap).  Only n-1 axes need gridding.
    n = pr.n
    if n > 3:
        raise DomainError("grid oracles refuse more than 3 sensors")
    upper = np.minimum(pr.cap, pr.e_c)
    lo = np.zeros(n - 1)
    hi = upper[:-1].copy()
    best_p, best_v = None, -np.inf
    for _ in range(grid.refine + 1):
        axes = [np.linspace(lo[i], hi[i], grid.resolution) for i in range(n - 1)]
        if n > 1:
            mesh = np.meshgrid(*axes, indexing="ij")
            head = np.stack([m.ravel() for m in mesh], axis=1)
        else:
            head = np.zeros((1, 0))
        left = pr.e_c - head.sum(axis=1)
        ok = left >= -1e-15
        head, left = head[ok], left[ok]
        last = np.clip(left, 0.0, upper[-1])
        P = np.column_stack([head, last])
        v = score(P)
        i = int(np.argmax(v))
        if v[i] > best_v:
            best_v, best_p = float(v[i]), P[i].copy()
        if n == 1:
            break
        cell = (hi - lo) / (grid.resolution - 1)
        lo = np.maximum(best_p[:-1] - 2 * cell, 0.0)
        hi = np.minimum(best_p[:-1] + 2 * cell, upper[:-1])
    return best_p, best_v


def grid_max_total(problem: AllocationProblem, grid: GridSpec = GridSpec()):
    """Exhaustive maximiser of ``sum a ln(1 + b lam p)``; returns ``(p, objective)``."""
    return _search(problem, grid, lambda P: _values(problem, P).sum(axis=1))


def grid_max_min(problem: AllocationProblem, grid: GridSpec = GridSpec()):
    """Exhaustive maximiser of ``min U + a ln(1 + b lam p)``; returns ``(p, minimum)``."""
    return _search(problem, grid, lambda P: (problem.u + _values(problem, P)).min(axis=1))


def grid_max_min_linear(problem: AllocationProblem, grid: GridSpec = GridSpec()):
    """As :func:`grid_max_min` for the linear model ``U + h lam p``."""
    h = problem._slopes()
    return _search(problem, grid, lambda P: (problem.u + h * problem.lam * P).min(axis=1))


def project_budget_box(y, cap, budget, iters=64):
    """Euclidean projection onto ``{0 <= p <= cap, sum p <= budget}``."""
    p = np.clip(y, 0.0, cap)
    if p.sum() <= budget:
        return p
    lo, hi = 0.0, float(np.max(y))
    for _ in range(iters):
        tau = 0.5 * (lo + hi)
        if np.clip(y - tau, 0.0, cap).sum() > budget:
            lo = tau
        else:
            hi = tau
    return np.clip(y - hi, 0.0, cap)


def projected_gradient_total(problem: AllocationProblem, steps=20000, lr=None, tol=1e-13):
    """Projected gradient ascent on the (concave) total harvested power.

    ``lr`` is the initial step (default ``1 / max a b^2 lam^2``).  Each step
    backtracks until the usual sufficient-ascent bound holds and the next
    trial starts from twice the accepted step.  A decrease beyond rounding
    raises :class:`ConvergenceError` with the objective trace attached.
    """
    pr = problem
    if pr.n > 16:
        raise DomainError("projected-gradient oracle is limited to 16 sensors")
    cap = np.minimum(pr.cap, pr.e_c)
    if pr.e_c == 0:
        return np.zeros(pr.n)
    curv = float(np.max(pr.a * pr.b ** 2 * pr.lam ** 2))
    if lr is None:
        lr = 1.0 / curv if curv > 0 else 1.0
    t = lr
    p = project_budget_box(np.full(pr.n, pr.e_c / pr.n), cap, pr.e_c)
    f = _values(pr, p).sum()
    trace = [f]
    stall = 0
    for _ in range(steps):
        grad = pr.a * pr.b * pr.lam / (1.0 + pr.b * pr.lam * p)
        gmax = float(np.max(grad))
        # a step longer than the feasible set only adds cancellation
        if gmax > 0:
            t = min(t, 10.0 * pr.e_c / gmax)
        while True:
            q = project_budget_box(p + t * grad, cap, pr.e_c)
            d = q - p
            fq = _values(pr, q).sum()
            if fq >= f + grad @ d - (d @ d) / (2 * t) or t < 1e-300:
                break
            t *= 0.5
        if fq < f - 1e-12 * max(1.0, abs(f)):
            raise ConvergenceError(
                f"objective decreased from {f!r} to {fq!r}", residual=trace + [fq]
            )
        stall = stall + 1 if fq - f <= 1e-16 * max(1.0, abs(f)) else 0
        done = np.max(np.abs(d)) <= tol * max(1.0, pr.e_c) or stall >= 10
        p, f = q, fq
        trace.append(f)
        t *= 2.0
        if done:
            break
    return p
