"""Monte-Carlo engine for the mobile multi-sensor power-transfer network.

One run is a sequence of transmission rounds.  In every round each sensor
takes a random-walk step, draws a fresh Rayleigh channel, the selector
hands the ``n_c`` bands to some sensors, the allocator splits the budget
among them and the harvested energy is accumulated.

Randomness comes from three independent streams spawned from ``seed``:
mobility, fading and rectifier assignment.  The environment (positions and
channels) therefore does not depend on the selector/allocator choice, which
pairs runs that share a seed.

``fading`` selects how channels vary: ``per_round`` (default) re-draws the
Rayleigh vector every round; ``static`` draws one unit-power vector per
sensor for the whole run, so only the distance changes; ``averaged`` fixes
each sensor's unit gain to the mean over 1000 draws.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import kernels as K
from .channel import PathLossParams
from .ehmodel import LogEhParams, fit_linear, synthetic_samples
from .errors import ConfigError
from .mobility import draw_moves, init_positions

__all__ = [
    "RECTIFIER_OPTIONS",
    "SimConfig",
    "SimTrace",
    "Summary",
    "assign_rectifiers",
    "linear_slopes",
    "run",
    "metrics",
    "comparison_table",
]

#: the two measured rectifiers; c is the 3 mW operating limit
RECTIFIER_OPTIONS = (
    (0.0319, 3.6169),
    (0.2411, 0.4566),
)
RECTIFIER_LIMIT = 3e-3

SELECTORS = {"ssep": K.SEL_SSEP, "round_robin": K.SEL_ROUND_ROBIN}
ALLOCATORS = {
    "crpm": K.ALLOC_CRPM,
    "trpm": K.ALLOC_TRPM,
    "epd": K.ALLOC_EPD,
    "lcrpm": K.ALLOC_LCRPM,
    "ltrpm": K.ALLOC_LTRPM,
}
EH_MODELS = {"log": K.EH_LOG, "linear": K.EH_LINEAR}
FADING_MODES = ("per_round", "static", "averaged")
FADING_AVERAGE = 1000


@dataclass
class SimConfig:
    """Full description of one simulation run.

    ``allocator`` chooses the solver (``lcrpm``/``ltrpm`` plan with the
    linear model); ``eh_model`` chooses how harvested energy is booked.
    """

    m: int = 16
    n_t: int = 4
    n_c: int = 8
    e_c: float = 4.0
    p_c: float = 4.0
    iterations: int = 10_000
    batch_size: int = 100
    walk_step: float = 0.03
    seed: int = 0
    selector: str = "ssep"
    allocator: str = "crpm"
    eh_model: str = "log"
    rectifier_c: float = RECTIFIER_LIMIT
    l0: float = 1e-3
    d0: float = 1.0
    pathloss_exponent: float = 3.0
    d_min: float = 1.0
    init_low: float = 5.0
    init_high: float = 15.0
    fading: str = "per_round"
    eps: float = 1e-9
    lcrpm_literal: bool = False
    record_rounds: bool = False

    def __post_init__(self):
        self.validate()

    def validate(self):
        for key in ("m", "n_t", "n_c", "batch_size"):
            v = getattr(self, key)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
                raise ConfigError(key, f"must be an integer >= 1, got {v!r}")
        if isinstance(self.iterations, bool) or not isinstance(self.iterations, (int, np.integer)) \
                or self.iterations < 0:
            raise ConfigError("iterations", f"must be an integer >= 0, got {self.iterations!r}")
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise ConfigError("seed", f"must be a non-negative integer, got {self.seed!r}")
        for key in ("e_c", "p_c", "rectifier_c", "l0", "d0", "d_min", "eps"):
            v = getattr(self, key)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ConfigError(key, f"must be a finite number > 0, got {v!r}")
        for key in ("walk_step", "pathloss_exponent"):
            v = getattr(self, key)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v >= 0):
                raise ConfigError(key, f"must be a finite number >= 0, got {v!r}")
        if not (0 < self.init_low <= self.init_high):
            raise ConfigError("init_low", "need 0 < init_low <= init_high")
        if self.init_low < self.d_min:
            raise ConfigError("init_low", "initial distances must not start below d_min")
        if self.selector not in SELECTORS:
            raise ConfigError("selector", f"expected one of {sorted(SELECTORS)}, got {self.selector!r}")
        if self.allocator not in ALLOCATORS:
            raise ConfigError("allocator", f"expected one of {sorted(ALLOCATORS)}, got {self.allocator!r}")
        if self.fading not in FADING_MODES:
            raise ConfigError("fading", f"expected one of {list(FADING_MODES)}, got {self.fading!r}")
        if self.eh_model not in EH_MODELS:
            raise ConfigError("eh_model", f"expected one of {sorted(EH_MODELS)}, got {self.eh_model!r}")

    @property
    def scheme(self) -> str:
        return f"{self.selector}&{self.eh_model}&{self.allocator}"

    def replace(self, **changes) -> "SimConfig":
        d = asdict(self)
        d.update(changes)
        return SimConfig(**d)

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]


@dataclass
class SimTrace:
    """Batch-level metrics of one run (energies in J).

    ``batch_min[i]`` / ``batch_total[i]`` are taken at the end of batch
    ``i``; the last batch may be shorter than ``batch_size``.
    """

    config: SimConfig
    batch_min: np.ndarray
    batch_total: np.ndarray
    final_u: np.ndarray
    round_spent: np.ndarray
    round_powers: np.ndarray | None = None
    round_gains: np.ndarray | None = None
    rectifiers: list = field(default_factory=list)


@dataclass(frozen=True)
class Summary:
    scheme: str
    final_min: float
    final_total: float
    final_u: tuple


def _streams(seed: int):
    mob, fade, rect = np.random.SeedSequence(seed).spawn(3)
    return (np.random.default_rng(mob), np.random.default_rng(fade),
            np.random.default_rng(rect))


def assign_rectifiers(m: int, rng: np.random.Generator, c: float = RECTIFIER_LIMIT):
    """Pick one of the two measured rectifiers per sensor with probability 1/2."""
    if m < 1:
        raise ConfigError("m", "must be >= 1")
    pick = rng.random(m) >= 0.5
    return [LogEhParams(*RECTIFIER_OPTIONS[int(k)], c) for k in pick]


def linear_slopes(rectifiers, n_points: int = 20) -> np.ndarray:
    """Least-squares linear slope of each logarithmic curve over ``(0, c]``."""
    out = np.empty(len(rectifiers))
    cache = {}
    for i, r in enumerate(rectifiers):
        if r not in cache:
            xs = np.linspace(0.0, r.c, n_points + 1)[1:]
            cache[r] = fit_linear(synthetic_samples(r, xs)).h
        out[i] = cache[r]
    return out


def run(config: SimConfig) -> SimTrace:
    """Simulate ``config.iterations`` rounds; deterministic in ``config.seed``."""
    cfg = config
    cfg.validate()
    rng_mob, rng_fade, rng_rect = _streams(int(cfg.seed))
    rect = assign_rectifiers(cfg.m, rng_rect, cfg.rectifier_c)
    a = np.array([r.a for r in rect])
    b = np.array([r.b for r in rect])
    c = np.array([r.c for r in rect])
    h = linear_slopes(rect)

    dist = init_positions(cfg.m, rng_mob, cfg.init_low, cfg.init_high)
    static_gain = None
    if cfg.fading == "static":
        g = rng_fade.standard_normal((cfg.m, cfg.n_t, 2))
        static_gain = 0.5 * np.sum(g * g, axis=(1, 2))
    elif cfg.fading == "averaged":
        g = rng_fade.standard_normal((FADING_AVERAGE, cfg.m, cfg.n_t, 2))
        static_gain = 0.5 * np.sum(g * g, axis=(2, 3)).mean(axis=0)
    u = np.zeros(cfg.m)
    cursor = 0
    n_batches = -(-cfg.iterations // cfg.batch_size)
    batch_min = np.zeros(n_batches)
    batch_total = np.zeros(n_batches)
    spent = np.zeros(cfg.iterations)
    powers = np.zeros((cfg.iterations, cfg.m)) if cfg.record_rounds else None
    gains = np.zeros((cfg.iterations, cfg.m)) if cfg.record_rounds else None

    for i in range(n_batches):
        start = i * cfg.batch_size
        rounds = min(cfg.batch_size, cfg.iterations - start)
        moves = draw_moves(rng_mob, (rounds, cfg.m))
        if static_gain is None:
            g = rng_fade.standard_normal((rounds, cfg.m, cfg.n_t, 2))
            unit_gain = 0.5 * np.sum(g * g, axis=(2, 3))
        else:
            unit_gain = np.broadcast_to(static_gain, (rounds, cfg.m))
        p_out = np.empty((rounds, cfg.m))
        lam_out = np.empty((rounds, cfg.m))
        dist, cursor = K.simulate_rounds(
            dist, u, cursor, moves, unit_gain,
            float(cfg.walk_step), float(cfg.d_min), float(cfg.l0), float(cfg.d0),
            float(cfg.pathloss_exponent), a, b, c, h, int(cfg.n_c), float(cfg.p_c),
            float(cfg.e_c), SELECTORS[cfg.selector], ALLOCATORS[cfg.allocator],
            EH_MODELS[cfg.eh_model], bool(cfg.lcrpm_literal), float(cfg.eps), 200,
            p_out, lam_out,
        )
        spent[start:start + rounds] = p_out.sum(axis=1)
        if powers is not None:
            powers[start:start + rounds] = p_out
            gains[start:start + rounds] = lam_out
        batch_min[i] = u.min()
        batch_total[i] = u.sum()

    return SimTrace(cfg, batch_min, batch_total, u, spent, powers, gains, rect)


def metrics(trace: SimTrace) -> Summary:
    """Final minimum and total harvested energy over all sensors."""
    if trace.final_u is None or len(trace.final_u) == 0:
        raise ValueError("empty trace")
    u = np.asarray(trace.final_u, dtype=float)
    return Summary(trace.config.scheme, float(u.min()), float(u.sum()), tuple(u.tolist()))


def comparison_table(traces) -> list[Summary]:
    return [metrics(t) for t in traces]
