import numpy as np
import pytest
from hypothesis import given, strategies as st

from fdjam.channels import sample_channels
from fdjam.config import ChannelRealization, RateReport, SystemConfig
from fdjam.rates import secrecy_rate_general, secrecy_rate_hd, secrecy_rate_mmse_pair


def scalar_chan(g_sd, g_se, g_ed, g_li):
    return ChannelRealization(
        h_sd=np.array([np.sqrt(g_sd)], dtype=complex),
        h_se=np.array([np.sqrt(g_se)], dtype=complex),
        h_ed=np.array([[np.sqrt(g_ed)]], dtype=complex),
        h_li=np.array([[np.sqrt(g_li)]], dtype=complex),
    )


def test_siso_hand_value():
    chan = scalar_chan(2.0, 1.0, 1.0, 1.0)
    rep = secrecy_rate_general(chan, np.array([[1.0]]), np.array([1.0 + 0j]), 1.0, 0.5)
    assert rep.rate_legit == pytest.approx(np.log2(1 + 2 / 1.5))
    assert rep.rate_leak == pytest.approx(np.log2(1.5))
    assert rep.secrecy == pytest.approx(0.6374, abs=2e-4)


def test_no_signal_no_secrecy():
    chan = scalar_chan(1.0, 1.0, 1.0, 1.0)
    rep = secrecy_rate_general(chan, np.zeros((1, 1)), np.array([1.0 + 0j]), 0.0, 0.5)
    assert rep.secrecy == 0.0


def test_equal_channels_no_secrecy():
    chan = scalar_chan(1.3, 1.3, 1.0, 1.0)
    rep = secrecy_rate_general(chan, np.zeros((1, 1)), np.array([1.0 + 0j]), 2.0, 0.0)
    assert rep.secrecy == 0.0


def test_receiver_norm_contract():
    chan = scalar_chan(1.0, 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        secrecy_rate_general(chan, np.zeros((1, 1)), np.array([1.1 + 0j]), 1.0, 0.5)


@given(
    seed=st.integers(0, 10_000),
    p_s=st.floats(0.0, 100.0),
    rho=st.floats(0.0, 1.0),
    scale=st.floats(0.0, 10.0),
)
def test_secrecy_is_floored_difference(seed, p_s, rho, scale):
    cfg = SystemConfig()
    chan = sample_channels(cfg, seed)
    rng = np.random.default_rng(seed + 1)
    q = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q = scale * (q @ q.conj().T)
    r = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    r = r / np.linalg.norm(r)
    rep = secrecy_rate_general(chan, q, r, p_s, rho)
    assert rep.secrecy == max(0.0, rep.rate_legit - rep.rate_leak)
    assert rep.secrecy >= 0.0
    rep2 = secrecy_rate_mmse_pair(chan, q, p_s, rho)
    assert rep2.secrecy == max(0.0, rep2.rate_legit - rep2.rate_leak)


def test_more_jamming_never_helps_eve_without_li():
    # at rho=0, leakage is nonincreasing in the jamming power along a fixed
    # direction that reaches the eavesdropper
    cfg = SystemConfig()
    for seed in range(20):
        chan = sample_channels(cfg, seed)
        rng = np.random.default_rng(seed)
        q0 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        q0 /= np.linalg.norm(q0)
        if np.linalg.norm(chan.h_ed @ q0) < 1e-6:
            continue
        r = np.array([1.0, 0.0], dtype=complex)
        last = -np.inf
        for p in (0.0, 0.5, 1.0, 5.0, 50.0):
            rep = secrecy_rate_general(chan, p * np.outer(q0, q0.conj()), r, 3.0, 0.0)
            assert rep.secrecy >= last - 1e-12
            last = rep.secrecy


def test_mmse_pair_matches_mrc_leak_without_jamming():
    cfg = SystemConfig()
    chan = sample_channels(cfg, 3)
    rep = secrecy_rate_mmse_pair(chan, np.zeros((2, 2)), 2.5, 0.5)
    assert rep.rate_leak == pytest.approx(np.log2(1 + 2.5 * np.linalg.norm(chan.h_se) ** 2))


def test_mmse_eve_extracts_at_least_as_much():
    cfg = SystemConfig()
    rng = np.random.default_rng(9)
    for seed in range(100):
        chan = sample_channels(cfg, seed)
        q = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        q = q @ q.conj().T
        mrc_eve = secrecy_rate_general(chan, q, np.array([1.0, 0.0], dtype=complex), 4.0, 0.5)
        mmse_eve = secrecy_rate_mmse_pair(chan, q, 4.0, 0.5)
        assert mmse_eve.rate_leak >= mrc_eve.rate_leak - 1e-9


def test_invisible_jamming_leaves_leak_unchanged():
    # needs more transmit antennas than eavesdropper antennas so that h_ed
    # has a null space to hide in
    cfg = SystemConfig(m_t=3, m_e=2)
    chan = sample_channels(cfg, 11)
    _, _, vh = np.linalg.svd(chan.h_ed)
    q_dir = vh.conj().T[:, -1]
    assert np.linalg.norm(chan.h_ed @ q_dir) < 1e-10
    q = 7.0 * np.outer(q_dir, q_dir.conj())
    base = secrecy_rate_mmse_pair(chan, np.zeros((3, 3)), 3.0, 0.5)
    jammed = secrecy_rate_mmse_pair(chan, q, 3.0, 0.5)
    assert jammed.rate_leak == pytest.approx(base.rate_leak, abs=1e-9)


def test_hd_examples():
    h2 = np.array([2.0, 0.0], dtype=complex)
    h1 = np.array([1.0, 0.0], dtype=complex)
    assert secrecy_rate_hd(h2, h2, 3.0).secrecy == 0.0
    assert secrecy_rate_hd(h2, h1, 0.0).secrecy == 0.0
    rep = secrecy_rate_hd(h2, h1, 10.0)
    assert rep.secrecy == pytest.approx(np.log2(41) - np.log2(11))
    assert rep.secrecy == pytest.approx(1.898, abs=1e-3)


def test_rate_report_invariant():
    with pytest.raises(ValueError):
        RateReport(1.0, 0.5, 0.4)
    rep = RateReport.from_rates(0.5, 1.0)
    assert rep.secrecy == 0.0
