"""Random channel generation and linear receive filters."""
from __future__ import annotations

import numpy as np

from .config import ChannelRealization, DegenerateChannelError, InvalidCovarianceError, SystemConfig

_MASK64 = (1 << 64) - 1
_NORM_TOL = 1e-12


def mix_seed(*parts: int) -> int:
    """Fold integers into one 64-bit seed (splitmix64 finalizer chain).

    Used to derive independent, reproducible RNG streams, e.g.
    ``mix_seed(seed, trial_index)`` for per-trial Monte Carlo draws.
    """
    acc = 0x9E3779B97F4A7C15
    for part in parts:
        acc = (acc ^ (int(part) & _MASK64)) & _MASK64
        acc = (acc + 0x9E3779B97F4A7C15) & _MASK64
        z = acc
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        acc = z ^ (z >> 31)
    return acc


def _complex_gaussian(rng: np.random.Generator, shape: tuple[int, ...], var: float) -> np.ndarray:
    scale = np.sqrt(var / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def sample_channels(config: SystemConfig, seed: int) -> ChannelRealization:
    """Draw one channel realization, a pure function of (config, seed).

    Entries are i.i.d. circularly-symmetric complex Gaussian: unit variance
    for h_sd and h_li, sigma_s_sq for h_se, sigma_d_sq for h_ed.  Raises
    DegenerateChannelError if a drawn vector is numerically zero (callers
    doing Monte Carlo should redraw with a fresh seed).
    """
    rng = np.random.default_rng(int(seed) & _MASK64)
    h_sd = _complex_gaussian(rng, (config.m_r,), 1.0)
    h_se = _complex_gaussian(rng, (config.m_e,), config.sigma_s_sq)
    h_ed = _complex_gaussian(rng, (config.m_e, config.m_t), config.sigma_d_sq)
    h_li = _complex_gaussian(rng, (config.m_r, config.m_t), 1.0)
    if np.linalg.norm(h_sd) < _NORM_TOL or np.linalg.norm(h_se) < _NORM_TOL:
        raise DegenerateChannelError("drawn channel vector is numerically zero")
    return ChannelRealization(h_sd=h_sd, h_se=h_se, h_ed=h_ed, h_li=h_li)


def mrc_receiver(h_sd: np.ndarray) -> np.ndarray:
    """Maximum ratio combining filter h_sd / ||h_sd||."""
    norm = np.linalg.norm(h_sd)
    if norm < _NORM_TOL:
        raise DegenerateChannelError("cannot build MRC filter from a zero channel")
    return h_sd / norm


def mmse_receiver_fixed(h_li: np.ndarray, h_sd: np.ndarray, rho: float) -> np.ndarray:
    """Fixed MMSE filter (rho * H H^H + I)^-1 h_sd, normalized.

    Whitens against the loop channel as if the jammer spent unit power in
    every direction; collapses to MRC at rho = 0.
    """
    m_r = h_li.shape[0]
    cov = rho * (h_li @ h_li.conj().T) + np.eye(m_r)
    w = np.linalg.solve(cov, h_sd)
    return w / np.linalg.norm(w)


def check_psd(q_cov: np.ndarray, tol: float = -1e-9) -> None:
    """Raise InvalidCovarianceError if any eigenvalue of q_cov is below tol."""
    eigs = np.linalg.eigvalsh(0.5 * (q_cov + q_cov.conj().T))
    if eigs.size and eigs[0] < tol:
        raise InvalidCovarianceError(f"covariance has eigenvalue {eigs[0]:.3e} < {tol:.0e}")


def mmse_receiver_optimal(
    h_li: np.ndarray, q_cov: np.ndarray, h_sd: np.ndarray, rho: float
) -> np.ndarray:
    """SINR-optimal filter (rho * H Q H^H + I)^-1 h_sd, normalized."""
    check_psd(q_cov)
    m_r = h_li.shape[0]
    cov = rho * (h_li @ q_cov @ h_li.conj().T) + np.eye(m_r)
    w = np.linalg.solve(cov, h_sd)
    return w / np.linalg.norm(w)
