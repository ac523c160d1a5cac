import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from instances import network_instance, oracle_instance, symmetric_instance
from wptfair.allocation import (
    AllocationProblem,
    alpha_bracket,
    bisect_alpha,
    crpm,
    epd,
    find_water_level,
    lcrpm,
    ltrpm,
    min_level,
    total_harvest,
    transmit_caps,
    trpm,
)
from wptfair.errors import DomainError, NoInteriorLevel
from wptfair.kernels import demand_kernel
from wptfair.oracle import GridSpec, grid_max_min_linear, projected_gradient_total

ALL = (trpm, crpm, epd, ltrpm, lcrpm)


def _problem(a, b, lam, u, cap, e_c, h=None):
    f = lambda v: np.asarray(v, dtype=float)
    return AllocationProblem(f(a), f(b), f(lam), f(u), f(cap), e_c, None if h is None else f(h))


# ---------------------------------------------------------------- caps


def test_transmit_caps():
    np.testing.assert_allclose(transmit_caps(3e-3, [1e-3, 1e-4, 0.0], 4.0), [3.0, 4.0, 4.0])


def test_problem_validation():
    with pytest.raises(DomainError):
        _problem([0.0], [1], [1], [0], [1], 1)
    with pytest.raises(DomainError):
        _problem([1], [1], [-1], [0], [1], 1)
    with pytest.raises(DomainError):
        _problem([1, 1], [1], [1], [0], [1], 1)
    with pytest.raises(DomainError):
        _problem([1], [1], [1], [0], [1], -1)
    with pytest.raises(DomainError):
        ltrpm(_problem([1], [1], [1], [0], [1], 1))


# ---------------------------------------------------------------- trpm


def test_trpm_single_sensor_takes_budget():
    r = trpm(symmetric_instance(1))
    assert r.powers[0] == pytest.approx(4.0, rel=1e-12)


def test_trpm_symmetric_split():
    r = trpm(symmetric_instance(2, cap=3.0))
    np.testing.assert_allclose(r.powers, [2.0, 2.0], rtol=1e-12)


def test_trpm_three_sensor_against_gradient_oracle():
    pr = _problem([0.0319, 0.0319, 0.2411], [3.6169, 3.6169, 0.4566], [1e-3, 2e-3, 1e-3],
                  [0, 0, 0], [4, 4, 4], 4.0)
    got = total_harvest(pr, trpm(pr).powers)
    ref = total_harvest(pr, projected_gradient_total(pr))
    assert abs(got - ref) <= 1e-6
    assert got >= ref - 1e-15


def test_trpm_saturates_when_caps_are_small():
    pr = _problem([1, 1], [1, 1], [1, 2], [0, 0], [0.5, 1.0], 4.0)
    r = trpm(pr)
    np.testing.assert_array_equal(r.powers, [0.5, 1.0])
    assert r.status == "saturated" and r.leftover == pytest.approx(2.5)
    with pytest.raises(NoInteriorLevel):
        find_water_level(pr)


def test_trpm_no_receiver():
    r = trpm(_problem([1, 1], [1, 1], [0, 0], [0, 0], [1, 1], 1.0))
    assert r.status == "no-receiver" and not r.powers.any()


def test_water_level_single_sensor():
    assert find_water_level(_problem([1], [1], [1], [0], [np.inf], 1.0)) == pytest.approx(2.0)


def test_water_level_identical_sensors():
    n, a, b, lam, e_c = 5, 0.2411, 0.4566, 1e-2, 3.0
    h = find_water_level(_problem([a] * n, [b] * n, [lam] * n, [0] * n, [10] * n, e_c))
    assert n * (h * a - 1 / (b * lam)) == pytest.approx(e_c, rel=1e-12)


def _bisect_level(pr):
    inv = 1 / (pr.b * pr.lam)
    lo, hi = 0.0, float(np.max((pr.cap + inv) / pr.a))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if np.clip(mid * pr.a - inv, 0, pr.cap).sum() > pr.e_c:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def test_water_level_against_bisection():
    rng = np.random.default_rng(31)
    for _ in range(300):
        pr = oracle_instance(rng, 5)
        if pr.cap.sum() <= pr.e_c:
            continue
        h = find_water_level(pr)
        filled = np.clip(h * pr.a - 1 / (pr.b * pr.lam), 0, pr.cap).sum()
        assert abs(filled - pr.e_c) <= 1e-9 * pr.e_c
        assert h == pytest.approx(_bisect_level(pr), rel=1e-9)


def test_trpm_matches_gradient_oracle_n8():
    rng = np.random.default_rng(5)
    for _ in range(30):
        pr = oracle_instance(rng, 8)
        got = total_harvest(pr, trpm(pr).powers)
        assert abs(got - total_harvest(pr, projected_gradient_total(pr))) <= 1e-6


# ---------------------------------------------------------------- bisection


def test_bisect_single_sensor_log2():
    pr = _problem([1], [1], [1], [0], [10], 1.0)
    assert bisect_alpha(pr) == pytest.approx(math.log(2), abs=1e-9)


def test_bracket_collapses_for_identical_sensors():
    pr = symmetric_instance(4)
    lo, hi = alpha_bracket(pr)
    assert lo == hi
    assert bisect_alpha(pr) == lo


def test_bisect_rejects_bad_eps():
    with pytest.raises(DomainError):
        bisect_alpha(symmetric_instance(2), eps=0)


def test_bracket_contains_root():
    rng = np.random.default_rng(8)
    for _ in range(2000):
        pr = network_instance(rng, 8)
        act = pr.lam > 0
        lo, hi = alpha_bracket(pr)
        assert demand_kernel(lo, pr.a, pr.b, pr.lam, pr.u, act) <= pr.e_c * (1 + 1e-12)
        assert demand_kernel(hi, pr.a, pr.b, pr.lam, pr.u, act) >= pr.e_c * (1 - 1e-12)


# ---------------------------------------------------------------- crpm


def test_crpm_symmetric():
    np.testing.assert_allclose(crpm(symmetric_instance(4)).powers, 1.0, rtol=1e-9)


def test_crpm_favours_laggard():
    pr = _problem([0.2411] * 2, [0.4566] * 2, [0.1, 0.1], [0.02, 0.0], [10, 10], 2.0)
    r = crpm(pr)
    assert r.powers[1] > r.powers[0]
    vals = pr.u + pr.a * np.log1p(pr.b * pr.lam * r.powers)
    assert abs(vals[0] - vals[1]) <= 1e-9


def test_crpm_skips_sensor_already_above_level():
    pr = _problem([0.2411] * 2, [0.4566] * 2, [0.1, 0.1], [5.0, 0.0], [10, 10], 1.0)
    r = crpm(pr)
    assert r.powers[0] == 0.0 and r.powers[1] == pytest.approx(1.0, abs=1e-9)


def test_crpm_one_binding_cap_vs_grid():
    from wptfair.oracle import grid_max_min

    pr = _problem([0.0319, 0.2411, 0.2411], [3.6169, 0.4566, 0.4566], [0.05, 0.5, 0.2],
                  [0.0, 0.01, 0.0], [0.3, 4, 4], 4.0)
    r = crpm(pr)
    assert r.powers[0] == pytest.approx(0.3)
    _, best = grid_max_min(pr, GridSpec(200, refine=3))
    assert abs(min_level(pr, r.powers) - best) <= 1e-5


def test_crpm_all_saturated():
    pr = _problem([1, 1], [1, 1], [1, 1], [0, 0], [0.1, 0.2], 1.0)
    r = crpm(pr)
    np.testing.assert_allclose(r.powers, [0.1, 0.2])
    assert r.status == "saturated" and r.leftover == pytest.approx(0.7)


# ---------------------------------------------------------------- epd


def test_epd_examples():
    np.testing.assert_allclose(epd(symmetric_instance(8)).powers, 0.5)
    pr = _problem([1] * 3, [1] * 3, [1] * 3, [0] * 3, [0.1, 4, 4], 3.0)
    np.testing.assert_allclose(epd(pr).powers, [0.1, 1.0, 1.0])
    assert epd(_problem([1], [1], [1], [0], [2.5], 4.0)).powers[0] == 2.5


# ---------------------------------------------------------------- linear


def _lin(g, cap, e_c, u=None):
    n = len(g)
    u = [0.0] * n if u is None else u
    return _problem([1] * n, [1] * n, [1] * n, u, cap, e_c, h=g)


def test_ltrpm_examples():
    np.testing.assert_array_equal(ltrpm(_lin([2, 1], [4, 4], 4)).powers, [4, 0])
    np.testing.assert_array_equal(ltrpm(_lin([2, 1], [3, 3], 4)).powers, [3, 1])


def test_ltrpm_vertex_enumeration():
    import itertools

    rng = np.random.default_rng(21)
    for _ in range(300):
        g = rng.uniform(0.01, 1, 3)
        cap = rng.uniform(0.1, 3, 3)
        e_c = rng.uniform(0.1, 6)
        pr = _lin(g, cap, e_c)
        best = 0.0
        # every vertex has all but at most one coordinate at a bound
        for free in range(3):
            others = [k for k in range(3) if k != free]
            for bounds in itertools.product(*[(0.0, cap[k]) for k in others]):
                p = np.zeros(3)
                p[others] = bounds
                p[free] = min(max(e_c - sum(bounds), 0.0), cap[free])
                if p.sum() <= e_c + 1e-12:
                    best = max(best, float(g @ p))
        assert float(g @ ltrpm(pr).powers) == pytest.approx(best, rel=1e-12)


def test_lcrpm_equal_split():
    np.testing.assert_allclose(lcrpm(symmetric_instance(4)).powers, 1.0, rtol=1e-12)


def test_lcrpm_head_start():
    np.testing.assert_allclose(lcrpm(_lin([1, 1], [10, 10], 1.0, u=[1, 0])).powers, [0, 1])


def test_lcrpm_literal_ignores_history():
    np.testing.assert_allclose(
        lcrpm(_lin([1, 1], [10, 10], 1.0, u=[1, 0]), literal=True).powers, [0.5, 0.5]
    )


def test_lcrpm_one_cap_vs_grid():
    pr = _lin([0.5, 1.0, 2.0], [0.2, 4, 4], 3.0, u=[0.0, 0.3, 0.1])
    r = lcrpm(pr)
    assert r.powers[0] == pytest.approx(0.2)
    _, best = grid_max_min_linear(pr, GridSpec(200, refine=4))
    got = float(np.min(pr.u + pr.h * pr.lam * r.powers))
    assert got >= best - 1e-12
    assert got - best <= 1e-6


# ---------------------------------------------------------------- properties


def test_feasibility_randomised():
    rng = np.random.default_rng(1)
    for _ in range(10_000):
        pr = network_instance(rng, int(rng.integers(1, 17)), with_dead=True)
        for solver in ALL:
            p = solver(pr).powers
            assert np.all(p >= 0) and np.all(p <= pr.cap)
            assert p.sum() <= pr.e_c + 1e-9
            assert not p[pr.lam == 0].any() or solver is epd


def test_dominance_randomised():
    rng = np.random.default_rng(2)
    for _ in range(2000):
        pr = network_instance(rng, int(rng.integers(1, 9)))
        pt, pc, pe = trpm(pr).powers, crpm(pr).powers, epd(pr).powers
        tot = total_harvest(pr, pt)
        # crpm may overspend by its bisection tolerance (1e-9 W)
        slack = 1e-9 * float(np.max(pr.a * pr.b * pr.lam)) + 1e-12 * tot
        assert tot >= total_harvest(pr, pc) - slack
        assert tot >= total_harvest(pr, pe) - slack
        if pr.cap.sum() > pr.e_c:
            mc = min_level(pr, pc)
            assert mc >= min_level(pr, pt) - 1e-12
            assert mc >= min_level(pr, pe) - 1e-12


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 16))
def test_crpm_water_level_structure(seed, n):
    pr = network_instance(np.random.default_rng(seed), n)
    r = crpm(pr)
    vals = pr.u + pr.a * np.log1p(pr.b * pr.lam * r.powers)
    capped = r.powers >= pr.cap
    served = (r.powers > 0) & ~capped
    assert np.all(np.abs(vals[served] - r.level) <= 1e-9)
    assert np.all(vals[capped] <= r.level + 1e-9)
    assert np.all(pr.u[r.powers == 0] >= r.level - 1e-9)
