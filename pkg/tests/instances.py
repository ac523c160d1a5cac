"""Random allocation problems shared by the solver tests."""

import numpy as np

from wptfair.allocation import AllocationProblem, transmit_caps

RECTIFIERS = np.array([[0.0319, 3.6169], [0.2411, 0.4566]])


def oracle_instance(rng, n):
    """Well-scaled problem (large gains) for comparisons against brute force."""
    ab = RECTIFIERS[rng.integers(0, 2, n)]
    return AllocationProblem(
        ab[:, 0], ab[:, 1],
        lam=10 ** rng.uniform(-2, 0.5, n),
        u=rng.uniform(0, 0.3, n),
        cap=rng.uniform(0.1, 4, n),
        e_c=rng.uniform(0.2, 8),
    )


def network_instance(rng, n, with_dead=False, h=None):
    """Problem shaped like a simulation round: 5-15 m, 4 antennas, 3 mW limit."""
    ab = RECTIFIERS[rng.integers(0, 2, n)]
    d = rng.uniform(1.0, 16.0, n)
    lam = 1e-3 * d ** -3.0 * rng.gamma(4.0, 1.0, n)
    if with_dead:
        lam[rng.random(n) < 0.15] = 0.0
    p_c = rng.choice([0.05, 0.5, 4.0])
    cap = transmit_caps(3e-3, lam, p_c)
    u = rng.uniform(0, 2e-3, n) * (rng.random(n) < 0.7)
    if h is None:
        h = rng.uniform(0.02, 0.12, n)
    return AllocationProblem(ab[:, 0], ab[:, 1], lam, u, cap, rng.uniform(0.1, 8.0), h=h)


def symmetric_instance(n, cap=4.0, e_c=4.0, u=0.0, lam=1e-3):
    return AllocationProblem(
        np.full(n, 0.0319), np.full(n, 3.6169), np.full(n, lam), np.full(n, u),
        np.full(n, cap), e_c, h=np.full(n, 0.1),
    )
