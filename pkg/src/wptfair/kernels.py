"""Array-level power allocation and simulation kernels.

Everything here takes and returns plain float64 arrays so the same source
runs under ``numba.njit`` or as ordinary numpy (see :mod:`wptfair._jit`).
The public, validated API lives in :mod:`wptfair.allocation` and
:mod:`wptfair.simulator`.

Status codes returned by the allocation kernels:

* ``OK``            budget fully spent on an interior solution
* ``SATURATED``     every reachable sensor sits at its cap; budget left over
* ``NO_RECEIVER``   no selected sensor has a usable channel
* ``ITER_LIMIT``    outer iteration cap reached with budget still unplaced
"""

import numpy as np

from ._jit import jit

OK = 0
SATURATED = 1
NO_RECEIVER = 2
ITER_LIMIT = 3

ALLOC_CRPM = 0
ALLOC_TRPM = 1
ALLOC_EPD = 2
ALLOC_LCRPM = 3
ALLOC_LTRPM = 4

SEL_SSEP = 0
SEL_ROUND_ROBIN = 1

EH_LOG = 0
EH_LINEAR = 1

# exp() argument ceiling; keeps the demand finite and monotone
_EXP_CAP = 700.0


# ---------------------------------------------------------------------------
# total received power (water filling)


@jit
def _filled(h, a, inv, cap, live):
    s = 0.0
    for k in range(a.shape[0]):
        if live[k]:
            v = h * a[k] - inv[k]
            if v > cap[k]:
                v = cap[k]
            if v > 0.0:
                s += v
    return s


@jit
def water_level_kernel(a, b, lam, cap, budget):
    """Level ``h`` with ``sum clamp(h a - 1/(b lam), 0, cap) == budget``.

    Sweeps the sorted breakpoints ``1/(a b lam)`` (sensor switches on) and
    ``(cap + 1/(b lam))/a`` (sensor saturates); the filled volume is linear
    between consecutive breakpoints, so the crossing is interpolated
    exactly.  Returns ``(h, found)``; ``found`` is False when the caps sum
    to no more than the budget.
    """
    n = a.shape[0]
    live = np.zeros(n, dtype=np.bool_)
    inv = np.zeros(n)
    total_cap = 0.0
    nlive = 0
    for k in range(n):
        if lam[k] > 0.0:
            live[k] = True
            inv[k] = 1.0 / (b[k] * lam[k])
            total_cap += cap[k]
            nlive += 1
    if nlive == 0 or total_cap <= budget:
        return np.nan, False
    bps = np.empty(2 * nlive)
    j = 0
    for k in range(n):
        if live[k]:
            bps[j] = inv[k] / a[k]
            bps[j + 1] = (cap[k] + inv[k]) / a[k]
            j += 2
    bps.sort()
    prev = bps[0]
    s_prev = _filled(prev, a, inv, cap, live)
    for i in range(1, bps.shape[0]):
        s = _filled(bps[i], a, inv, cap, live)
        if s >= budget:
            # slope of the filled volume on (prev, bps[i]): sensors rising there
            slope = 0.0
            for k in range(n):
                if live[k] and inv[k] / a[k] <= prev and (cap[k] + inv[k]) / a[k] > prev:
                    slope += a[k]
            if slope <= 0.0:
                return bps[i], True
            h = prev + (budget - s_prev) / slope
            return (h if h < bps[i] else bps[i]), True
        prev = bps[i]
        s_prev = s
    return bps[-1], True


@jit
def trpm_kernel(a, b, lam, cap, budget):
    """Maximise ``sum a ln(1 + b lam p)`` s.t. ``0 <= p <= cap``, ``sum p <= budget``.

    Returns ``(p, h, status)``.
    """
    n = a.shape[0]
    p = np.zeros(n)
    nlive = 0
    total_cap = 0.0
    hmax = 0.0
    for k in range(n):
        if lam[k] > 0.0:
            nlive += 1
            total_cap += cap[k]
            hk = (cap[k] + 1.0 / (b[k] * lam[k])) / a[k]
            if hk > hmax:
                hmax = hk
    if nlive == 0:
        return p, np.nan, NO_RECEIVER
    if budget <= 0.0:
        return p, 0.0, OK
    if total_cap <= budget:
        for k in range(n):
            if lam[k] > 0.0:
                p[k] = cap[k]
        return p, hmax, SATURATED

    h, _ = water_level_kernel(a, b, lam, cap, budget)
    spent = 0.0
    a_interior = 0.0
    for k in range(n):
        if lam[k] > 0.0:
            v = h * a[k] - 1.0 / (b[k] * lam[k])
            if v >= cap[k]:
                v = cap[k]
            elif v <= 0.0:
                v = 0.0
            else:
                a_interior += a[k]
            p[k] = v
            spent += v
    # h*a and 1/(b lam) can both be ~1e6 for weak channels; move the last
    # few ulps of budget onto the interior sensors in power units.
    if a_interior > 0.0:
        shift = (budget - spent) / a_interior
        for k in range(n):
            if lam[k] > 0.0 and 0.0 < p[k] < cap[k]:
                v = p[k] + a[k] * shift
                p[k] = min(max(v, 0.0), cap[k])
    return p, h, OK


# ---------------------------------------------------------------------------
# common received power (bisection on the common level)


@jit
def _power_for_level(alpha, a, b, lam, u):
    z = (alpha - u) / a
    if z <= 0.0:
        return 0.0
    if z > _EXP_CAP:
        z = _EXP_CAP
    return np.expm1(z) / (b * lam)


@jit
def demand_kernel(alpha, a, b, lam, u, active):
    """Total transmit power needed to lift every active sensor to ``alpha``."""
    s = 0.0
    for k in range(a.shape[0]):
        if active[k]:
            s += _power_for_level(alpha, a[k], b[k], lam[k], u[k])
    return s


@jit
def alpha_bracket_kernel(a, b, lam, u, active, e_r):
    """Bracket from giving each active sensor an equal share ``e_r / n``."""
    n = 0
    for k in range(a.shape[0]):
        if active[k]:
            n += 1
    lo = np.inf
    hi = -np.inf
    for k in range(a.shape[0]):
        if active[k]:
            v = u[k] + a[k] * np.log1p(b[k] * lam[k] * e_r / n)
            if v < lo:
                lo = v
            if v > hi:
                hi = v
    return lo, hi


@jit
def bisect_alpha_kernel(a, b, lam, u, active, e_r, eps, max_iter):
    """Common level ``alpha`` with ``|demand(alpha) - e_r| < eps``.

    Returns ``(alpha, lo, hi, iterations)`` where ``lo``/``hi`` is the
    starting bracket.
    """
    lo, hi = alpha_bracket_kernel(a, b, lam, u, active, e_r)
    lo0 = lo
    hi0 = hi
    alpha = 0.5 * (lo + hi)
    it = 0
    while it < max_iter:
        d = demand_kernel(alpha, a, b, lam, u, active)
        if abs(d - e_r) < eps:
            break
        if d > e_r:
            hi = alpha
        else:
            lo = alpha
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            # bracket exhausted at double precision
            alpha = lo if abs(demand_kernel(lo, a, b, lam, u, active) - e_r) <= abs(
                demand_kernel(hi, a, b, lam, u, active) - e_r) else hi
            break
        alpha = mid
        it += 1
    return alpha, lo0, hi0, it


@jit
def crpm_kernel(a, b, lam, u, cap, budget, eps, max_bisect, max_outer):
    """Max-min of ``u + a ln(1 + b lam p)`` over the selected sensors.

    Each outer pass solves the common level for the still-unsaturated
    sensors, then pins any sensor whose share exceeds its cap at the cap and
    hands the excess back.  Returns
    ``(p, alpha, passes, status, bracket_ok)``; ``bracket_ok`` records that
    on every pass the root found by bisection (demand within ``eps`` of the
    residual budget) lies inside the starting bracket.
    """
    n = a.shape[0]
    p = np.zeros(n)
    active = np.zeros(n, dtype=np.bool_)
    nact = 0
    for k in range(n):
        if lam[k] > 0.0:
            active[k] = True
            nact += 1
    if nact == 0:
        return p, np.nan, 0, NO_RECEIVER, True
    if budget <= 0.0:
        return p, np.nan, 0, OK, True

    remaining = budget
    alpha = np.nan
    passes = 0
    bracket_ok = True
    status = OK
    while True:
        if nact == 0:
            status = SATURATED
            break
        if passes >= max_outer:
            status = ITER_LIMIT
            break
        alpha, lo, hi, _ = bisect_alpha_kernel(a, b, lam, u, active, remaining, eps, max_bisect)
        # the bracket must hold a point meeting the demand tolerance
        if (alpha < lo or alpha > hi
                or abs(demand_kernel(alpha, a, b, lam, u, active) - remaining) >= eps):
            bracket_ok = False
        passes += 1
        newly = 0
        for k in range(n):
            if active[k]:
                pk = _power_for_level(alpha, a[k], b[k], lam[k], u[k])
                if pk > cap[k]:
                    p[k] = cap[k]
                    active[k] = False
                    remaining -= cap[k]
                    nact -= 1
                    newly += 1
                else:
                    p[k] = pk
        if newly == 0:
            break
    return p, alpha, passes, status, bracket_ok


# ---------------------------------------------------------------------------
# linear harvesting model


@jit
def ltrpm_kernel(h, lam, cap, budget):
    """Greedy fill in order of decreasing ``h * lam``; optimal for the LP."""
    n = h.shape[0]
    p = np.zeros(n)
    g = h * lam
    order = np.argsort(-g, kind="mergesort")
    remaining = budget
    nlive = 0
    for i in range(n):
        k = order[i]
        if g[k] <= 0.0:
            continue
        nlive += 1
        if remaining <= 0.0:
            continue
        take = cap[k] if cap[k] < remaining else remaining
        p[k] = take
        remaining -= take
    if nlive == 0:
        return p, 0.0, NO_RECEIVER
    if remaining > 0.0:
        return p, 0.0, SATURATED
    return p, 0.0, OK


@jit
def _linear_level(g, u, active, budget):
    """Level alpha with ``sum_active max(0, (alpha - u)/g) == budget``."""
    idx = np.where(active)[0]
    order = idx[np.argsort(u[idx], kind="mergesort")]
    inv = 0.0
    su = 0.0
    alpha = 0.0
    m = order.shape[0]
    for j in range(m):
        k = order[j]
        inv += 1.0 / g[k]
        su += u[k] / g[k]
        alpha = (budget + su) / inv
        if j == m - 1 or alpha <= u[order[j + 1]]:
            break
    return alpha


@jit
def lcrpm_kernel(h, lam, u, cap, budget, literal, max_outer):
    """Max-min for the linear model ``u + h lam p``.

    ``literal=False`` equalises ``u + h lam p`` across unsaturated sensors.
    ``literal=True`` reproduces the U-blind update that equalises only the
    increments ``h lam p``.  Returns ``(p, alpha, passes, status)``.
    """
    n = h.shape[0]
    p = np.zeros(n)
    g = h * lam
    active = np.zeros(n, dtype=np.bool_)
    nact = 0
    for k in range(n):
        if g[k] > 0.0:
            active[k] = True
            nact += 1
    if nact == 0:
        return p, np.nan, 0, NO_RECEIVER
    if budget <= 0.0:
        return p, np.nan, 0, OK

    remaining = budget
    alpha = np.nan
    passes = 0
    status = OK
    while True:
        if nact == 0:
            status = SATURATED
            break
        if remaining <= 0.0:
            break
        if passes >= max_outer:
            status = ITER_LIMIT
            break
        passes += 1
        if literal:
            inv = 0.0
            for k in range(n):
                if active[k]:
                    inv += 1.0 / g[k]
            alpha = remaining / inv
            for k in range(n):
                if active[k]:
                    p[k] += alpha / g[k]
            remaining = 0.0
            for k in range(n):
                if active[k] and p[k] > cap[k]:
                    remaining += p[k] - cap[k]
                    p[k] = cap[k]
                    active[k] = False
                    nact -= 1
        else:
            alpha = _linear_level(g, u, active, remaining)
            newly = 0
            for k in range(n):
                if active[k]:
                    pk = (alpha - u[k]) / g[k]
                    if pk < 0.0:
                        pk = 0.0
                    if pk > cap[k]:
                        p[k] = cap[k]
                        active[k] = False
                        remaining -= cap[k]
                        nact -= 1
                        newly += 1
                    else:
                        p[k] = pk
            if newly == 0:
                break
    return p, alpha, passes, status


@jit
def epd_kernel(cap, budget):
    n = cap.shape[0]
    p = np.empty(n)
    share = budget / n
    for k in range(n):
        p[k] = share if share < cap[k] else cap[k]
    return p


# ---------------------------------------------------------------------------
# simulation


@jit
def allocate_kernel(code, a, b, h, lam, u, cap, budget, literal, eps, max_bisect):
    """Dispatch on ``code``; returns ``(p, level, status)``."""
    n = a.shape[0]
    if code == ALLOC_CRPM:
        p, alpha, _, status, _ = crpm_kernel(a, b, lam, u, cap, budget, eps, max_bisect, n)
        return p, alpha, status
    if code == ALLOC_TRPM:
        return trpm_kernel(a, b, lam, cap, budget)
    if code == ALLOC_LCRPM:
        p, alpha, _, status = lcrpm_kernel(h, lam, u, cap, budget, literal, n)
        return p, alpha, status
    if code == ALLOC_LTRPM:
        return ltrpm_kernel(h, lam, cap, budget)
    return epd_kernel(cap, budget), np.nan, OK


@jit
def ssep_kernel(u, n_c):
    n = min(n_c, u.shape[0])
    # stable sort: ties go to the lowest index
    return np.sort(np.argsort(u, kind="mergesort")[:n])


@jit
def round_robin_kernel(cursor, m, n_c):
    n = min(n_c, m)
    sel = np.empty(n, dtype=np.int64)
    for i in range(n):
        sel[i] = (cursor + i) % m
    return sel, (cursor + n_c) % m


@jit
def simulate_rounds(dist, u, cursor, moves, gains, walk_step, d_min, l0, d0, pl_alpha,
                    a, b, c, h, n_c, p_c, e_c, selector, allocator, eh_model, literal,
                    eps, max_bisect, power_out, lam_out):
    """Run ``moves.shape[0]`` transmission rounds, updating ``u`` in place.

    Per round: walk, path loss times the unit-power fading gain, band
    selection over all sensors, allocation over the selected ones, then
    harvesting.  Transmit powers and gains are written to ``power_out`` and
    ``lam_out`` (rows = rounds).  Returns ``(dist, cursor)``.
    """
    m = dist.shape[0]
    for r in range(moves.shape[0]):
        for k in range(m):
            d = dist[k] + moves[r, k] * walk_step
            dist[k] = d if d > d_min else d_min
        lam_all = l0 * (dist / d0) ** (-pl_alpha) * gains[r]
        lam_out[r, :] = lam_all

        if selector == SEL_SSEP:
            sel = ssep_kernel(u, n_c)
        else:
            sel, cursor = round_robin_kernel(cursor, m, n_c)

        ns = sel.shape[0]
        a_s = a[sel]
        b_s = b[sel]
        h_s = h[sel]
        lam_s = lam_all[sel]
        u_s = u[sel]
        cap_s = np.empty(ns)
        for i in range(ns):
            k = sel[i]
            if lam_s[i] > 0.0 and c[k] / lam_s[i] < p_c:
                cap_s[i] = c[k] / lam_s[i]
            else:
                cap_s[i] = p_c
        p, _, _ = allocate_kernel(allocator, a_s, b_s, h_s, lam_s, u_s, cap_s, e_c,
                                  literal, eps, max_bisect)
        power_out[r, :] = 0.0
        for i in range(ns):
            k = sel[i]
            power_out[r, k] = p[i]
            x = lam_s[i] * p[i]
            if x > c[k]:
                x = c[k]
            if eh_model == EH_LOG:
                u[k] += a[k] * np.log1p(b[k] * x)
            else:
                u[k] += h[k] * x
    return dist, cursor
