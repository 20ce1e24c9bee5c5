import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fdjam.siso import (
    PdSolution,
    ScalarChannels,
    high_snr_limit,
    jamming_power_is_monotone,
    joint_power_split,
    optimal_jamming_power,
    positive_secrecy_feasible,
    rate_ratio,
)

gains = st.floats(1e-3, 10.0)


def grid_best(ch, p_s, rho, p_d_max, steps=10_001):
    ps = np.linspace(0.0, p_d_max, steps)
    vals = rate_ratio(ch, p_s, rho, ps)
    i = int(np.argmax(vals))
    return float(ps[i]), float(vals[i])


def test_rate_ratio_examples():
    ch = ScalarChannels(1.0, 1.0, 1.0, 1.0)
    assert rate_ratio(ch, 1.0, 0.5, 2.0) == pytest.approx(1.125)
    ch2 = ScalarChannels(1.7, 0.4, 0.9, 1.1)
    assert rate_ratio(ch2, 3.0, 0.6, 0.0) == pytest.approx((1 + 3 * 1.7) / (1 + 3 * 0.4))
    # rho=1 with matched gains degrades both links identically
    ch3 = ScalarChannels(0.8, 0.8, 1.3, 1.3)
    for p_d in (0.0, 0.7, 5.0, 100.0):
        assert rate_ratio(ch3, 2.0, 1.0, p_d) == pytest.approx(1.0)


def test_feasibility_branches():
    # high LI but strong direct channel
    ch = ScalarChannels(2.0, 1.0, 1.0, 1.0)
    ok, branch = positive_secrecy_feasible(ch, 1.0, 1.0, 10.0)
    assert ok and branch == "high_li"
    # matched channels, high LI: infeasible
    ch = ScalarChannels(1.0, 1.0, 1.0, 1.0)
    ok, branch = positive_secrecy_feasible(ch, 1.0, 1.0, 10.0)
    assert not ok and branch == "none"
    # low-LI bullet: rho = 0.9 < min(1, 2.1)
    ch = ScalarChannels(2.0, 1.0, 1.0, 1.0)
    ok, branch = positive_secrecy_feasible(ch, 1.0, 0.9, 10.0)
    assert ok and branch == "low_li"
    _, best = grid_best(ch, 1.0, 0.9, 10.0)
    assert best > 1.0


@given(
    g=st.tuples(gains, gains, gains, gains),
    p_s=st.floats(0.05, 50.0),
    rho=st.floats(0.0, 1.0),
    p_d_max=st.floats(0.1, 50.0),
)
def test_feasibility_matches_optimizer(g, p_s, rho, p_d_max):
    ch = ScalarChannels(*g)
    ok, _ = positive_secrecy_feasible(ch, p_s, rho, p_d_max)
    sol = optimal_jamming_power(ch, p_s, rho, p_d_max)
    assert ok == (sol.objective > 1.0 + 1e-12)


def test_optimal_pd_corollary_root():
    # matched direct/leak gains, low LI: interior root at
    # x2 = sqrt((1 + p_s g_sd) / (rho g_li g_ed))
    ch = ScalarChannels(1.0, 1.0, 2.0, 0.5)
    sol = optimal_jamming_power(ch, 3.0, 0.5, 10.0)
    x2 = math.sqrt((1 + 3.0) / (0.5 * 0.5 * 2.0))
    assert sol.p_d_star == pytest.approx(x2, rel=1e-9)
    assert sol.branch == "interior_root"
    p_grid, v_grid = grid_best(ch, 3.0, 0.5, 10.0, steps=100_001)
    assert abs(p_grid - sol.p_d_star) < 1e-3
    assert sol.objective >= v_grid - 1e-12


def test_optimal_pd_fully_degenerate_instance():
    # rho*g_li == g_ed and matched gains make the ratio identically 1;
    # any power is optimal and the tie breaks toward zero spend
    ch = ScalarChannels(1.0, 1.0, 1.0, 2.0)
    sol = optimal_jamming_power(ch, 3.0, 0.5, 10.0)
    assert sol.objective == pytest.approx(1.0)
    assert sol.p_d_star == 0.0
    _, v_grid = grid_best(ch, 3.0, 0.5, 10.0)
    assert sol.objective >= v_grid - 1e-12


def test_optimal_pd_free_jamming():
    ch = ScalarChannels(1.0, 1.0, 0.7, 1.0)
    sol = optimal_jamming_power(ch, 2.0, 0.0, 5.0)
    assert sol.p_d_star == 5.0 and sol.branch == "full_power"


def test_optimal_pd_matched_high_li():
    ch = ScalarChannels(1.0, 1.0, 0.5, 2.0)
    sol = optimal_jamming_power(ch, 3.0, 0.9, 10.0)  # rho >= g_ed/g_li
    assert sol.p_d_star == 0.0
    assert sol.objective == pytest.approx(1.0)


@given(
    g=st.tuples(gains, gains, gains, gains),
    p_s=st.floats(0.05, 50.0),
    rho=st.floats(0.0, 1.0),
    p_d_max=st.floats(0.1, 50.0),
)
def test_optimal_pd_dominates_grid(g, p_s, rho, p_d_max):
    ch = ScalarChannels(*g)
    sol = optimal_jamming_power(ch, p_s, rho, p_d_max)
    assert 0.0 <= sol.p_d_star <= p_d_max
    _, v_grid = grid_best(ch, p_s, rho, p_d_max, steps=2001)
    assert sol.objective >= v_grid - 1e-9 * abs(v_grid)


@given(
    a=st.floats(0.01, 20.0),
    b=st.floats(0.01, 20.0),
    c=st.floats(0.01, 20.0),
    d=st.floats(0.01, 20.0),
)
def test_stationary_roots_never_both_positive(a, b, c, d):
    # the two stationary points of the power-control ratio can never both
    # be positive: sum > 0 forces product <= 0
    qa = c * b - a * d
    if abs(qa) < 1e-12:
        return
    qb = 2.0 * (c - a)
    qc = (c / b) * (1.0 + a) - (a / d) * (1.0 + c)
    disc = qb * qb - 4 * qa * qc
    if disc < 0:
        return
    r1 = (-qb - math.sqrt(disc)) / (2 * qa)
    r2 = (-qb + math.sqrt(disc)) / (2 * qa)
    if r1 + r2 > 0:
        assert r1 * r2 <= 1e-9 * (1 + abs(r1 * r2))


def test_monotone_power_for_matched_gains():
    rng = np.random.default_rng(21)
    grid = np.linspace(0.0, 1.0, 100)
    for _ in range(30):
        g = rng.exponential(1.0, 2) + 1e-3
        ch = ScalarChannels(1.0, 1.0, g[0], g[1])
        assert jamming_power_is_monotone(ch, float(10 ** rng.uniform(0, 2)), 10.0, grid)


def test_constant_full_power_region_counts_as_monotone():
    ch = ScalarChannels(1.0, 1.0, 5.0, 0.2)
    assert jamming_power_is_monotone(ch, 2.0, 1.0, np.linspace(0.0, 0.1, 50))


def test_joint_split_closed_form():
    # rho above the gain ratio: no source power at all
    ch = ScalarChannels(1.0, 1.0, 0.5, 1.0)
    alpha, rate = joint_power_split(ch, 0.8, 10.0)
    assert alpha == 0.0 and rate == 0.0
    # hand value
    ch = ScalarChannels(1.0, 1.0, 1.0, 1.0)
    alpha, _ = joint_power_split(ch, 0.5, 10.0)
    assert alpha == pytest.approx(1.0 / (1.0 + math.sqrt(11.0 / 66.0)), rel=1e-12)
    assert alpha == pytest.approx(0.7101, abs=1e-4)
    # rho = 0 limit with unit jamming gain
    alpha, _ = joint_power_split(ch, 0.0, 10.0)
    assert alpha == pytest.approx(0.5, rel=1e-12)


def test_joint_split_general_gains_matches_grid():
    rng = np.random.default_rng(4)
    for _ in range(20):
        ch = ScalarChannels(*(rng.exponential(1.0, 4) + 1e-3))
        rho = rng.uniform(0.0, 1.0)
        p_t = 10 ** rng.uniform(0.3, 2.0)
        alpha, rate = joint_power_split(ch, rho, p_t)
        als = np.linspace(0, 1, 20_001)
        vals = rate_ratio(ch, als * p_t, rho, (1 - als) * p_t)
        assert rate >= max(0.0, np.log2(vals.max())) - 1e-6


def test_joint_split_full_power_dominates_slack():
    # whenever a positive rate is on the table, unused power is wasted
    rng = np.random.default_rng(14)
    for _ in range(30):
        ch = ScalarChannels(*(rng.exponential(1.0, 4) + 1e-3))
        rho, p_t = rng.uniform(0, 1), 10 ** rng.uniform(0.5, 2)
        alpha, rate = joint_power_split(ch, rho, p_t)
        if rate <= 1e-9:
            continue
        p_s, p_d = alpha * p_t, (1 - alpha) * p_t
        for slack in (0.1, 0.5):
            if p_d < slack:
                continue
            ratio_slack = rate_ratio(ch, p_s, rho, p_d - slack)
            ratio_moved = rate_ratio(ch, p_s + slack, rho, p_d - slack)
            assert ratio_moved >= ratio_slack - 1e-12


def test_high_snr_limit_values():
    ch = ScalarChannels(2.0, 1.0, 1.0, 1.0)
    assert high_snr_limit(ch, 1.0, 0.5) == pytest.approx(np.log2(5) - np.log2(2))
    assert high_snr_limit(ch, 1.0, 0.5) == pytest.approx(1.3219, abs=1e-4)
    balanced = ScalarChannels(1.0, 1.0, 1.0, 1.0)
    assert high_snr_limit(balanced, 2.0, 1.0) == 0.0
    assert math.isinf(high_snr_limit(ch, 1.0, 0.0))
    assert math.isinf(high_snr_limit(ScalarChannels(1, 1, 1, 0.0), 1.0, 0.7))


def test_high_snr_limit_matches_large_power_rate():
    rng = np.random.default_rng(31)
    for _ in range(50):
        ch = ScalarChannels(*rng.uniform(0.1, 3.0, 4))
        beta = 10 ** rng.uniform(-1, 1)
        rho = rng.uniform(0.2, 1.0)
        lim = high_snr_limit(ch, beta, rho)
        p_d = 1e6
        rate = max(0.0, np.log2(rate_ratio(ch, beta * p_d, rho, p_d)))
        assert abs(rate - lim) < 0.01


def test_pd_solution_fields():
    sol = optimal_jamming_power(ScalarChannels(2, 1, 1, 1), 1.0, 0.2, 4.0)
    assert isinstance(sol, PdSolution)
    assert sol.objective == pytest.approx(rate_ratio(ScalarChannels(2, 1, 1, 1), 1.0, 0.2, sol.p_d_star))
