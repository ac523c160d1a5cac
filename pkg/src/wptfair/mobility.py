"""One-dimensional random walk of sensor distances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._jit import jit
from .errors import DomainError

__all__ = ["WalkConfig", "init_positions", "draw_moves", "apply_moves", "step"]


@dataclass(frozen=True)
class WalkConfig:
    step: float = 0.03
    d_min: float = 1.0

    def __post_init__(self):
        if not self.step >= 0:
            raise DomainError("walk step must be >= 0")
        if not self.d_min > 0:
            raise DomainError("d_min must be > 0")


def init_positions(m: int, rng: np.random.Generator, low=5.0, high=15.0) -> np.ndarray:
    """Independent uniform distances in ``[low, high]`` metres."""
    if m < 1:
        raise DomainError("m must be >= 1")
    return rng.uniform(low, high, size=m)


def draw_moves(rng: np.random.Generator, shape) -> np.ndarray:
    """Moves in {-1, 0, +1} with probability 1/3 each (backward, stop, forward)."""
    u = rng.random(shape)
    return (u >= 1.0 / 3.0).astype(np.int8) + (u >= 2.0 / 3.0).astype(np.int8) - 1


@jit
def apply_moves(positions, moves, step, d_min):
    out = np.empty_like(positions)
    for k in range(positions.shape[0]):
        d = positions[k] + moves[k] * step
        out[k] = d if d > d_min else d_min
    return out


def step(positions, cfg: WalkConfig, rng: np.random.Generator) -> np.ndarray:
    """Advance every sensor by one walk step, clamped below at ``cfg.d_min``."""
    positions = np.asarray(positions, dtype=float)
    moves = draw_moves(rng, positions.shape[0])
    return apply_moves(positions, moves, float(cfg.step), float(cfg.d_min))
