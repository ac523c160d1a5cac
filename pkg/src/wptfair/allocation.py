"""Transmit-power allocation over the sensors selected for one round.

Solvers
-------
trpm
    maximise total harvested power (single water level).
crpm
    maximise the minimum post-round energy ``U + a ln(1 + b lam p)``
    (bisection on the common level).
ltrpm, lcrpm
    the same two objectives under the linear harvesting model ``h lam p``.
epd
    equal split of the budget, clipped at the caps.

Every solver returns an :class:`AllocationResult` whose powers satisfy
``0 <= p <= cap`` and ``sum(p) <= e_c``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels as K
from .errors import DomainError, NoInteriorLevel

__all__ = [
    "AllocationProblem",
    "AllocationResult",
    "transmit_caps",
    "trpm",
    "find_water_level",
    "crpm",
    "bisect_alpha",
    "alpha_bracket",
    "epd",
    "ltrpm",
    "lcrpm",
    "total_harvest",
    "min_level",
]

_STATUS = {
    K.OK: "ok",
    K.SATURATED: "saturated",
    K.NO_RECEIVER: "no-receiver",
    K.ITER_LIMIT: "iteration-limit",
}


def transmit_caps(c, lam, p_c):
    """Per-band transmit limit ``min(c / lam, p_c)``; ``p_c`` for a dead channel."""
    c = np.asarray(c, dtype=float)
    lam = np.asarray(lam, dtype=float)
    with np.errstate(divide="ignore"):
        rf_limit = np.where(lam > 0, c / np.where(lam > 0, lam, 1.0), np.inf)
    return np.minimum(rf_limit, p_c)


@dataclass
class AllocationProblem:
    """Per-round solver input; all arrays are indexed by selected sensor.

    ``h`` (linear slopes) is only needed by the linear-model solvers.
    """

    a: np.ndarray
    b: np.ndarray
    lam: np.ndarray
    u: np.ndarray
    cap: np.ndarray
    e_c: float
    h: np.ndarray | None = None

    def __post_init__(self):
        for name in ("a", "b", "lam", "u", "cap"):
            setattr(self, name, np.ascontiguousarray(getattr(self, name), dtype=float))
        n = self.a.shape[0]
        if n < 1:
            raise DomainError("an allocation problem needs at least one sensor")
        if any(getattr(self, f).shape != (n,) for f in ("b", "lam", "u", "cap")):
            raise DomainError("a, b, lam, u and cap must be 1-d arrays of equal length")
        if np.any(~(self.a > 0)) or np.any(~(self.b > 0)):
            raise DomainError("a and b must be > 0")
        if np.any(~(self.lam >= 0)) or np.any(~(self.u >= 0)) or np.any(~(self.cap >= 0)):
            raise DomainError("lam, u and cap must be >= 0")
        if not (self.e_c >= 0 and np.isfinite(self.e_c)):
            raise DomainError("e_c must be finite and >= 0")
        self.e_c = float(self.e_c)
        if self.h is not None:
            self.h = np.ascontiguousarray(self.h, dtype=float)
            if self.h.shape != (n,) or np.any(~(self.h > 0)):
                raise DomainError("h must hold one positive slope per sensor")

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def _slopes(self):
        if self.h is None:
            raise DomainError("linear-model solvers need per-sensor slopes h")
        return self.h


@dataclass
class AllocationResult:
    """Solver output.

    ``level`` is the water level ``h`` for trpm and the common level
    ``alpha`` for crpm/lcrpm (NaN where it has no meaning).
    """

    powers: np.ndarray
    level: float
    iterations: int
    status: str
    leftover: float = 0.0


def _result(p, level, iterations, status, e_c):
    return AllocationResult(p, float(level), int(iterations), _STATUS[status],
                            max(0.0, e_c - float(p.sum())))


def trpm(problem: AllocationProblem) -> AllocationResult:
    """Total-received-power maximisation.

    Interior sensors get ``h a - 1/(b lam)``; the rest sit at 0 or their cap.
    If the caps sum to no more than the budget every sensor is saturated.
    """
    pr = problem
    p, h, status = K.trpm_kernel(pr.a, pr.b, pr.lam, pr.cap, pr.e_c)
    return _result(p, h, 1, status, pr.e_c)


def find_water_level(problem: AllocationProblem) -> float:
    pr = problem
    h, found = K.water_level_kernel(pr.a, pr.b, pr.lam, pr.cap, pr.e_c)
    if not found:
        raise NoInteriorLevel("caps sum to no more than the budget; every sensor saturates")
    return float(h)


def alpha_bracket(problem: AllocationProblem, e_r=None, active=None):
    """Equal-share bracket ``[min_k, max_k] U_k + a_k ln(1 + b_k lam_k e_r / n)``."""
    pr = problem
    e_r = pr.e_c if e_r is None else e_r
    active = (pr.lam > 0) if active is None else np.asarray(active, dtype=bool)
    return K.alpha_bracket_kernel(pr.a, pr.b, pr.lam, pr.u, active, float(e_r))


def bisect_alpha(problem: AllocationProblem, e_r=None, eps=1e-9, active=None,
                 max_iter=200) -> float:
    """Common post-allocation level reached by spending ``e_r`` on ``active``.

    A sensor already above the level receives nothing.
    """
    pr = problem
    if eps <= 0:
        raise DomainError("eps must be > 0")
    e_r = pr.e_c if e_r is None else float(e_r)
    if not e_r > 0:
        raise DomainError("residual budget must be > 0")
    active = (pr.lam > 0) if active is None else np.asarray(active, dtype=bool)
    if not active.any() or np.any(pr.lam[active] <= 0):
        raise DomainError("active set must be nonempty with lam > 0")
    alpha, _, _, _ = K.bisect_alpha_kernel(pr.a, pr.b, pr.lam, pr.u, active, e_r,
                                           float(eps), int(max_iter))
    return float(alpha)


def crpm(problem: AllocationProblem, max_iters=None, eps=1e-9, max_bisect=200) -> AllocationResult:
    """Common-received-power (max-min) allocation.

    ``max_iters`` bounds the outer cap-and-redistribute passes (default:
    number of sensors, enough since every pass either pins a sensor or
    finishes).
    """
    pr = problem
    if eps <= 0:
        raise DomainError("eps must be > 0")
    max_iters = pr.n if max_iters is None else int(max_iters)
    p, alpha, passes, status, _ = K.crpm_kernel(pr.a, pr.b, pr.lam, pr.u, pr.cap, pr.e_c,
                                                float(eps), int(max_bisect), max_iters)
    return _result(p, alpha, passes, status, pr.e_c)


def epd(problem: AllocationProblem) -> AllocationResult:
    """Equal power per band, ``min(e_c / n, cap)``; clipped excess is not reassigned."""
    pr = problem
    return _result(K.epd_kernel(pr.cap, pr.e_c), np.nan, 1, K.OK, pr.e_c)


def ltrpm(problem: AllocationProblem) -> AllocationResult:
    pr = problem
    p, _, status = K.ltrpm_kernel(pr._slopes(), pr.lam, pr.cap, pr.e_c)
    return _result(p, np.nan, 1, status, pr.e_c)


def lcrpm(problem: AllocationProblem, max_iters=None, literal=False) -> AllocationResult:
    """Linear-model max-min allocation.

    By default the common level includes each sensor's past energy ``u``;
    ``literal=True`` ignores it and only equalises this round's increments.
    """
    pr = problem
    max_iters = pr.n if max_iters is None else int(max_iters)
    p, alpha, passes, status = K.lcrpm_kernel(pr._slopes(), pr.lam, pr.u, pr.cap, pr.e_c,
                                              bool(literal), max_iters)
    return _result(p, alpha, passes, status, pr.e_c)


def total_harvest(problem: AllocationProblem, powers) -> float:
    """``sum a ln(1 + b lam p)`` for the given powers."""
    pr = problem
    return float(np.sum(pr.a * np.log1p(pr.b * pr.lam * np.asarray(powers, dtype=float))))


def min_level(problem: AllocationProblem, powers) -> float:
    """``min U + a ln(1 + b lam p)`` for the given powers."""
    pr = problem
    return float(np.min(pr.u + pr.a * np.log1p(pr.b * pr.lam * np.asarray(powers, dtype=float))))
