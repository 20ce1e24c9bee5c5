"""Secrecy-rate evaluators.  All rates are in bits per channel use."""
from __future__ import annotations

import numpy as np

from .channels import check_psd
from .config import ChannelRealization, RateReport

_LOG2 = np.log(2.0)


def _log2_1p(x: float) -> float:
    return float(np.log1p(x) / _LOG2)


def secrecy_rate_general(
    chan: ChannelRealization,
    q_cov: np.ndarray,
    r: np.ndarray,
    p_s: float,
    rho: float,
) -> RateReport:
    """Rate pair for a linear receive filter r at the destination and an
    MRC-combining eavesdropper.

    legit = log2(1 + p_s |r^H h_sd|^2 / (1 + rho r^H H Q H^H r))
    leak  = log2(1 + p_s ||h_se||^2 / (1 + h_se^H Hed Q Hed^H h_se / ||h_se||^2))
    """
    if abs(np.linalg.norm(r) - 1.0) > 1e-6:
        raise ValueError("receive filter must be unit norm (within 1e-6)")
    hli_r = chan.h_li.conj().T @ r
    self_int = rho * float(np.real(hli_r.conj() @ q_cov @ hli_r))
    self_int = max(self_int, 0.0)
    sig = p_s * abs(np.vdot(r, chan.h_sd)) ** 2
    legit = _log2_1p(sig / (1.0 + self_int))

    gain_se = float(np.real(np.vdot(chan.h_se, chan.h_se)))
    if gain_se <= 0.0:
        leak = 0.0
    else:
        hed_se = chan.h_ed.conj().T @ chan.h_se
        jam = max(float(np.real(hed_se.conj() @ q_cov @ hed_se)), 0.0) / gain_se
        leak = _log2_1p(p_s * gain_se / (1.0 + jam))
    return RateReport.from_rates(legit, leak)


def secrecy_rate_mmse_pair(
    chan: ChannelRealization,
    q_cov: np.ndarray,
    p_s: float,
    rho: float,
) -> RateReport:
    """Rate pair when both the destination and the eavesdropper apply the
    SINR-optimal MMSE filter against the jamming covariance.

    The eavesdropper whitens (Hed Q Hed^H + I); loop interference only
    affects the destination's own covariance.
    """
    check_psd(q_cov)
    m_r, m_e = chan.m_r, chan.m_e
    cov_d = rho * (chan.h_li @ q_cov @ chan.h_li.conj().T) + np.eye(m_r)
    legit = _log2_1p(p_s * float(np.real(np.vdot(chan.h_sd, np.linalg.solve(cov_d, chan.h_sd)))))
    cov_e = chan.h_ed @ q_cov @ chan.h_ed.conj().T + np.eye(m_e)
    leak = _log2_1p(p_s * float(np.real(np.vdot(chan.h_se, np.linalg.solve(cov_e, chan.h_se)))))
    return RateReport.from_rates(legit, leak)


def secrecy_rate_hd(h_sd_hd: np.ndarray, h_se: np.ndarray, p_s: float) -> RateReport:
    """Half-duplex baseline: all antennas receive, nobody jams."""
    legit = _log2_1p(p_s * float(np.real(np.vdot(h_sd_hd, h_sd_hd))))
    leak = _log2_1p(p_s * float(np.real(np.vdot(h_se, h_se))))
    return RateReport.from_rates(legit, leak)
