import numpy as np
import pytest
from hypothesis import given, strategies as st

from fdjam.channels import (
    mix_seed,
    mmse_receiver_fixed,
    mmse_receiver_optimal,
    mrc_receiver,
    sample_channels,
)
from fdjam.config import DegenerateChannelError, InvalidCovarianceError, SystemConfig


def test_sampling_is_deterministic():
    cfg = SystemConfig()
    a = sample_channels(cfg, 1234)
    b = sample_channels(cfg, 1234)
    for x, y in ((a.h_sd, b.h_sd), (a.h_se, b.h_se), (a.h_ed, b.h_ed), (a.h_li, b.h_li)):
        assert np.array_equal(x, y)
    c = sample_channels(cfg, 1235)
    assert not np.array_equal(a.h_sd, c.h_sd)


def test_sampling_shapes():
    cfg = SystemConfig(m_t=2, m_r=2, m_e=2)
    chan = sample_channels(cfg, 7)
    assert chan.h_ed.shape == (2, 2)
    assert chan.h_li.shape == (2, 2)
    assert chan.h_sd.shape == (2,)
    assert chan.h_se.shape == (2,)


def test_sampling_moments():
    # mean of ||h_se||^2 should be close to m_e * sigma_s_sq
    cfg = SystemConfig(m_e=3, sigma_s_sq=1.0)
    n = 30000
    vals = np.empty(n)
    for k in range(n):
        vals[k] = np.linalg.norm(sample_channels(cfg, k).h_se) ** 2
    se = vals.std(ddof=1) / np.sqrt(n)
    assert abs(vals.mean() - 3.0) < 3 * se


@given(st.integers(min_value=0, max_value=2**63 - 1))
def test_sampling_pure_in_seed(seed):
    cfg = SystemConfig(m_t=1, m_r=1, m_e=1)
    assert np.array_equal(sample_channels(cfg, seed).h_li, sample_channels(cfg, seed).h_li)


def test_mix_seed_spreads():
    seeds = {mix_seed(1, k) for k in range(1000)}
    assert len(seeds) == 1000
    assert mix_seed(1, 2, 3) != mix_seed(1, 3, 2)


def test_mrc_examples():
    np.testing.assert_allclose(mrc_receiver(np.array([2.0, 0.0])), [1.0, 0.0])
    h = np.array([1 + 1j, 1 - 1j])
    np.testing.assert_allclose(mrc_receiver(h), h / 2.0)
    rng = np.random.default_rng(3)
    for _ in range(100):
        h = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        assert abs(np.linalg.norm(mrc_receiver(h)) - 1.0) < 1e-12
    with pytest.raises(DegenerateChannelError):
        mrc_receiver(np.zeros(2, dtype=complex))


def test_mmse_fixed_collapses_to_mrc_without_li():
    rng = np.random.default_rng(5)
    h_li = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    h_sd = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    np.testing.assert_allclose(mmse_receiver_fixed(h_li, h_sd, 0.0), mrc_receiver(h_sd))


def test_mmse_fixed_matches_direct_solve():
    rng = np.random.default_rng(6)
    h_li = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    h_sd = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    rho = 0.7
    r = mmse_receiver_fixed(h_li, h_sd, rho)
    assert abs(np.linalg.norm(r) - 1.0) < 1e-12
    direct = np.linalg.solve(rho * h_li @ h_li.conj().T + np.eye(2), h_sd)
    np.testing.assert_allclose(r, direct / np.linalg.norm(direct), atol=1e-12)


def test_mmse_optimal_reduces_to_mrc():
    rng = np.random.default_rng(7)
    h_li = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    h_sd = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    np.testing.assert_allclose(
        mmse_receiver_optimal(h_li, np.zeros((2, 2)), h_sd, 0.8), mrc_receiver(h_sd), atol=1e-12
    )
    q = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q = q @ q.conj().T
    np.testing.assert_allclose(
        mmse_receiver_optimal(h_li, q, h_sd, 0.0), mrc_receiver(h_sd), atol=1e-12
    )


def test_mmse_optimal_rejects_indefinite():
    h_li = np.eye(2, dtype=complex)
    with pytest.raises(InvalidCovarianceError):
        mmse_receiver_optimal(h_li, np.diag([1.0, -0.5]), np.ones(2, dtype=complex), 0.5)


def test_mmse_optimal_maximizes_sinr():
    rng = np.random.default_rng(8)

    def sinr(r, h_sd, h_li, q, rho):
        num = abs(np.vdot(r, h_sd)) ** 2
        v = h_li.conj().T @ r
        return num / (1.0 + rho * float(np.real(v.conj() @ q @ v)))

    for _ in range(20):
        h_li = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        h_sd = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        q = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        q = q @ q.conj().T
        rho = rng.uniform(0.1, 1.0)
        r_opt = mmse_receiver_optimal(h_li, q, h_sd, rho)
        best = sinr(r_opt, h_sd, h_li, q, rho)
        assert best >= sinr(mrc_receiver(h_sd), h_sd, h_li, q, rho) - 1e-9 * best
        for _ in range(50):
            r = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            r /= np.linalg.norm(r)
            assert best >= sinr(r, h_sd, h_li, q, rho) - 1e-9 * best
