"""Band assignment: energy-poverty priority (SSEP) and round-robin."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import round_robin_kernel, ssep_kernel

__all__ = ["SelectionState", "ssep", "round_robin"]


def ssep(accumulated_energy, n_c: int) -> np.ndarray:
    """Indices of the ``min(n_c, m)`` sensors with the least harvested energy."""
    u = np.asarray(accumulated_energy, dtype=float)
    if n_c < 1 or u.size < 1:
        raise ValueError("need n_c >= 1 and at least one sensor")
    return ssep_kernel(u, int(n_c))


@dataclass
class SelectionState:
    next_index: int = 0


def round_robin(state: SelectionState, m: int, n_c: int):
    """Next ``n_c`` indices in cyclic order; returns ``(selected, new_state)``."""
    if n_c < 1 or m < 1:
        raise ValueError("need n_c >= 1 and m >= 1")
    if not 0 <= state.next_index < m:
        raise ValueError("cursor out of range")
    sel, cur = round_robin_kernel(int(state.next_index), int(m), int(n_c))
    return sel, SelectionState(int(cur))
