"""Rectifier (energy-harvesting) models.

Two curves map received RF power ``x`` (W) to harvested DC power (W):

* logarithmic: ``a * ln(1 + b * min(x, c))``
* linear:      ``h * min(x, c)``

The logarithmic parameters are fitted by a small Levenberg-Marquardt loop,
the linear slope by closed-form least squares through the origin.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError, InsufficientDataError

__all__ = [
    "LogEhParams",
    "LinearEhParams",
    "RectifierSample",
    "LMResult",
    "harvest_log",
    "harvest_linear",
    "fit_log",
    "fit_linear",
    "levenberg_marquardt",
    "rmse",
    "read_samples",
    "synthetic_samples",
]


@dataclass(frozen=True)
class LogEhParams:
    """Parameters of ``r(x) = a ln(1 + b x)`` on ``0 <= x <= c``."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be finite and > 0, got {v!r}")

    def __call__(self, x):
        return harvest_log(x, self)


@dataclass(frozen=True)
class LinearEhParams:
    h: float

    def __post_init__(self):
        if not (math.isfinite(self.h) and 0 < self.h <= 1):
            raise DomainError(f"h must lie in (0, 1], got {self.h!r}")


@dataclass(frozen=True)
class RectifierSample:
    input_power: float
    output_power: float

    def __post_init__(self):
        if self.input_power < 0 or self.output_power < 0:
            raise DomainError("rectifier samples must be non-negative")


def _check_nonneg(x):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("received power must be >= 0")
    return arr


def harvest_log(x, p: LogEhParams):
    """Harvested DC power for received RF power ``x``; saturates above ``p.c``."""
    arr = _check_nonneg(x)
    out = p.a * np.log1p(p.b * np.minimum(arr, p.c))
    return float(out) if out.ndim == 0 else out


def harvest_linear(x, p: LinearEhParams, c: float):
    arr = _check_nonneg(x)
    out = p.h * np.minimum(arr, c)
    return float(out) if out.ndim == 0 else out


def _as_xy(samples) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(samples, np.ndarray):
        arr = np.asarray(samples, dtype=float).reshape(-1, 2)
        x, y = arr[:, 0].copy(), arr[:, 1].copy()
    else:
        samples = list(samples)
        x = np.array([s.input_power for s in samples], dtype=float)
        y = np.array([s.output_power for s in samples], dtype=float)
    return x, y


@dataclass
class LMResult:
    a: float
    b: float
    sse: float
    iterations: int
    converged: bool
    sse_history: list = field(default_factory=list)


def levenberg_marquardt(x, y, a0, b0, max_iter=200, ftol=1e-10, xtol=1e-15):
    """Damped Gauss-Newton for ``y ~ a ln(1 + b x)``.

    Only steps that lower the SSE are accepted, so ``sse_history`` is
    nonincreasing.  ``iterations`` counts trial steps, accepted or not.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    theta = np.array([a0, b0], dtype=float)

    def residual(t):
        return t[0] * np.log1p(t[1] * x) - y

    r = residual(theta)
    sse = float(r @ r)
    history = [sse]
    mu = 1e-3
    scale = float(y @ y)
    converged = False
    it = 0
    while it < max_iter:
        it += 1
        a, b = theta
        lg = np.log1p(b * x)
        J = np.column_stack((lg, a * x / (1.0 + b * x)))
        g = J.T @ r
        A = J.T @ J
        diag = np.diag(A).copy()
        diag[diag == 0] = 1.0
        try:
            step = np.linalg.solve(A + mu * np.diag(diag), -g)
        except np.linalg.LinAlgError:
            mu *= 10.0
            continue
        trial = theta + step
        if trial[0] > 0 and trial[1] > 0:
            r_new = residual(trial)
            sse_new = float(r_new @ r_new)
        else:
            sse_new = math.inf
        if sse_new < sse:
            small_step = np.linalg.norm(step) <= xtol * (np.linalg.norm(theta) + xtol)
            decrease = sse - sse_new
            theta, r, sse = trial, r_new, sse_new
            history.append(sse)
            mu = max(mu / 10.0, 1e-12)
            if decrease <= ftol * sse_new or sse <= 1e-30 * scale or small_step:
                converged = True
                break
        else:
            mu *= 10.0
            # Damping this large means no descent direction is left.
            if mu > 1e16:
                converged = True
                break
    return LMResult(float(theta[0]), float(theta[1]), sse, it, converged, history)


def fit_log(samples, max_iter=200, ftol=1e-10) -> LogEhParams:
    """Least-squares fit of the logarithmic model.

    ``c`` is taken as the largest observed input power.
    """
    x, y = _as_xy(samples)
    if x.size < 3 or np.unique(x).size < 3:
        raise InsufficientDataError("need at least 3 samples with distinct inputs")
    if np.any(x < 0) or np.any(y < 0):
        raise DomainError("rectifier samples must be non-negative")
    if y.max() <= 0:
        raise InsufficientDataError("all outputs are zero; the fit is degenerate (a -> 0)")
    mean_x = x.mean()
    res = levenberg_marquardt(x, y, y.max(), 1.0 / mean_x, max_iter=max_iter, ftol=ftol)
    if not res.converged:
        raise ConvergenceError(
            f"log fit did not converge in {max_iter} iterations (sse={res.sse:.3e})",
            residual=res.sse,
        )
    return LogEhParams(res.a, res.b, float(x.max()))


def fit_linear(samples) -> LinearEhParams:
    """Slope through the origin, ``h = sum(x y) / sum(x^2)``."""
    x, y = _as_xy(samples)
    if x.size < 2:
        raise InsufficientDataError("need at least 2 samples")
    sxx = float(x @ x)
    if sxx == 0:
        raise InsufficientDataError("all inputs are zero")
    return LinearEhParams(float(x @ y) / sxx)


def rmse(model: Callable, samples) -> float:
    x, y = _as_xy(samples)
    if x.size == 0:
        raise InsufficientDataError("rmse of an empty sample set")
    pred = np.asarray([model(v) for v in x], dtype=float)
    return float(np.sqrt(np.mean((pred - y) ** 2)))


def synthetic_samples(p: LogEhParams, inputs: Sequence[float]) -> list[RectifierSample]:
    """Noiseless samples of the (unclamped) logarithmic curve."""
    return [RectifierSample(float(v), float(p.a * math.log1p(p.b * v))) for v in inputs]


def read_samples(path) -> list[RectifierSample]:
    """Read a two-column ``input_power_W,output_power_W`` CSV; header optional."""
    out = []
    with Path(path).open(newline="", encoding="utf-8") as fh:
        for i, row in enumerate(csv.reader(fh)):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < 2:
                raise InsufficientDataError(f"line {i + 1}: expected two columns")
            try:
                xv, yv = float(row[0]), float(row[1])
            except ValueError:
                if i == 0:
                    continue  # header
                raise
            out.append(RectifierSample(xv, yv))
    return out

