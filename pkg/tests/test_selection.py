import math

import numpy as np
from hypothesis import given, settings, strategies as st

from wptfair.selection import SelectionState, round_robin, ssep


def test_smallest_two():
    assert sorted(ssep([5, 1, 3, 2], 2).tolist()) == [1, 3]


def test_ties_go_to_lowest_index():
    assert ssep([0.0, 0.0, 0.0, 0.0], 2).tolist() == [0, 1]


def test_more_bands_than_sensors():
    assert sorted(ssep([3.0, 1.0, 2.0], 8).tolist()) == [0, 1, 2]


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0, 1e3), min_size=1, max_size=30), st.integers(1, 40))
def test_ssep_is_argmin_set(u, n_c):
    u = np.array(u)
    sel = ssep(u, n_c)
    assert len(sel) == min(n_c, len(u)) == len(set(sel.tolist()))
    rest = np.setdiff1d(np.arange(len(u)), sel)
    if rest.size:
        assert u[sel].max() <= u[rest].min()


def test_round_robin_examples():
    sel, st_ = round_robin(SelectionState(0), 4, 2)
    assert sel.tolist() == [0, 1] and st_.next_index == 2
    sel, st_ = round_robin(st_, 4, 2)
    assert sel.tolist() == [2, 3] and st_.next_index == 0


def test_round_robin_halves():
    state = SelectionState()
    seen = []
    for _ in range(4):
        sel, state = round_robin(state, 16, 8)
        seen.append(sel.tolist())
    assert seen == [list(range(8)), list(range(8, 16))] * 2


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 20), st.integers(1, 25), st.integers(1, 5))
def test_round_robin_fair(m, n_c, k):
    state = SelectionState()
    counts = np.zeros(m, dtype=int)
    for _ in range(m * k):
        sel, state = round_robin(state, m, n_c)
        assert len(sel) == min(n_c, m) == len(set(sel.tolist()))
        counts[sel] += 1
    assert counts.max() - counts.min() <= 1
    period = m // math.gcd(m, n_c)
    if n_c <= m:
        counts = np.zeros(m, dtype=int)
        for _ in range(period):
            sel, state = round_robin(state, m, n_c)
            counts[sel] += 1
        assert counts.min() == counts.max()
