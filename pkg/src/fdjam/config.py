"""Core value types shared by every solver and the experiment runner."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DegenerateChannelError(ValueError):
    """A channel vector is too close to zero to be used (norm < 1e-12)."""


class InvalidCovarianceError(ValueError):
    """A covariance matrix has an eigenvalue below -1e-9."""


class InfeasibleConstraintError(ValueError):
    """A requested constraint level is outside the achievable range."""


@dataclass(frozen=True)
class SystemConfig:
    """Fixed experiment parameters.

    Noise variance is 1 per receive dimension, so all powers are linear
    SNRs.  ``rho`` is the residual loop-interference coefficient left after
    passive suppression (0 = perfect isolation, 1 = no suppression).
    ``sigma_s_sq`` / ``sigma_d_sq`` are the per-entry variances of the
    source->eavesdropper and destination->eavesdropper channels.
    """

    m_t: int = 2
    m_r: int = 2
    m_e: int = 2
    rho: float = 0.5
    p_s: float = 1.0
    p_d: float = 1.0
    p_t: float = 2.0
    sigma_s_sq: float = 1.0
    sigma_d_sq: float = 1.0

    def __post_init__(self) -> None:
        if min(self.m_t, self.m_r, self.m_e) < 1:
            raise ValueError("antenna counts must be >= 1")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")
        if min(self.p_s, self.p_d, self.p_t) < 0.0:
            raise ValueError("power budgets must be nonnegative")
        if min(self.sigma_s_sq, self.sigma_d_sq) <= 0.0:
            raise ValueError("channel variances must be positive")

    @property
    def m_total(self) -> int:
        """Total antennas at the destination (transmit + receive)."""
        return self.m_t + self.m_r


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of the four channel blocks.

    ``h_sd``: source->destination, length m_r.
    ``h_se``: source->eavesdropper, length m_e.
    ``h_ed``: destination->eavesdropper, m_e x m_t.
    ``h_li``: fading loop channel, m_r x m_t (the effective loop channel
    is sqrt(rho) * h_li).
    """

    h_sd: np.ndarray
    h_se: np.ndarray
    h_ed: np.ndarray
    h_li: np.ndarray

    def __post_init__(self) -> None:
        m_r = self.h_sd.shape[0]
        m_e = self.h_se.shape[0]
        if self.h_ed.shape[0] != m_e or self.h_li.shape[0] != m_r:
            raise ValueError("channel block shapes are inconsistent")
        if self.h_ed.shape[1] != self.h_li.shape[1]:
            raise ValueError("h_ed and h_li disagree on transmit antennas")
        for block in (self.h_sd, self.h_se, self.h_ed, self.h_li):
            if not np.all(np.isfinite(block.view(np.float64))):
                raise ValueError("channel entries must be finite")

    @property
    def m_t(self) -> int:
        return self.h_li.shape[1]

    @property
    def m_r(self) -> int:
        return self.h_sd.shape[0]

    @property
    def m_e(self) -> int:
        return self.h_se.shape[0]


@dataclass(frozen=True)
class RateReport:
    """Legitimate rate, leakage rate and their floored difference, in bits."""

    rate_legit: float
    rate_leak: float
    secrecy: float

    def __post_init__(self) -> None:
        if self.rate_legit < 0.0 or self.rate_leak < 0.0:
            raise ValueError("rates must be nonnegative")
        if self.secrecy != max(0.0, self.rate_legit - self.rate_leak):
            raise ValueError("secrecy must equal max(0, legit - leak)")

    @classmethod
    def from_rates(cls, rate_legit: float, rate_leak: float) -> "RateReport":
        return cls(rate_legit, rate_leak, max(0.0, rate_legit - rate_leak))


@dataclass(frozen=True)
class JammingDesign:
    """A concrete jamming solution: direction, spent powers, receive filter
    and the rates it achieves (covariance is p_d_used * q q^H)."""

    q: np.ndarray
    p_d_used: float
    p_s_used: float
    r: np.ndarray
    rate: RateReport

    def __post_init__(self) -> None:
        if abs(np.linalg.norm(self.q) - 1.0) > 1e-9:
            raise ValueError("jamming direction must be unit norm")
        if abs(np.linalg.norm(self.r) - 1.0) > 1e-9:
            raise ValueError("receive filter must be unit norm")
        if self.p_d_used < 0.0 or self.p_s_used < 0.0:
            raise ValueError("spent powers must be nonnegative")
