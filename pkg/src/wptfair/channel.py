"""Path loss, Rayleigh fading and the rank-one energy-beamforming gain.

With a single-antenna receiver the channel outer product ``h h^H`` has rank
one, so the dominant eigenvalue is simply ``||h||^2`` and the optimal
beamformer is ``conj(h) / ||h||``.  Receiver noise is ignored.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "PathLossParams",
    "path_loss",
    "sample_channel",
    "beamforming_gain",
    "beamforming_weights",
    "received_rf_power",
]


@dataclass(frozen=True)
class PathLossParams:
    l0: float = 1e-3
    d0: float = 1.0
    alpha: float = 3.0

    def __post_init__(self):
        if not self.l0 > 0 or not self.d0 > 0 or not self.alpha >= 0:
            raise DomainError("path loss needs l0 > 0, d0 > 0, alpha >= 0")


def path_loss(d, params: PathLossParams = PathLossParams()):
    """Power loss factor ``l0 * (d / d0) ** -alpha``."""
    d = np.asarray(d, dtype=float)
    if np.any(~(d > 0)):
        raise DomainError("distance must be > 0")
    out = params.l0 * (d / params.d0) ** (-params.alpha)
    return float(out) if out.ndim == 0 else out


def sample_channel(n_t: int, loss: float, rng: np.random.Generator) -> np.ndarray:
    """One Rayleigh channel vector whose entries have mean power ``loss``.

    Consumes ``2 * n_t`` standard normals from ``rng`` in (antenna, re/im)
    order, so a batch draw of shape ``(..., n_t, 2)`` reproduces a sequence
    of calls.
    """
    if n_t < 1:
        raise DomainError("n_t must be >= 1")
    if not loss > 0:
        raise DomainError("loss must be > 0")
    g = rng.standard_normal((n_t, 2))
    return np.sqrt(loss / 2.0) * (g[:, 0] + 1j * g[:, 1])


def beamforming_gain(h) -> float:
    """Dominant eigenvalue of ``h h^H``; zero for a dead channel."""
    h = np.asarray(h)
    return float(np.real(np.vdot(h, h)))


def beamforming_weights(h) -> np.ndarray:
    """Unit-norm transmit weights attaining :func:`beamforming_gain`."""
    h = np.asarray(h, dtype=complex)
    nrm = np.linalg.norm(h)
    if nrm == 0:
        return np.zeros_like(h)
    return np.conj(h) / nrm


def received_rf_power(gain: float, p_t):
    p_t = np.asarray(p_t, dtype=float)
    if np.any(p_t < 0):
        raise DomainError("transmit power must be >= 0")
    out = gain * p_t
    return float(out) if out.ndim == 0 else out
