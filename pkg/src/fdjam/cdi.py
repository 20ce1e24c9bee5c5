"""Designs with only statistical knowledge of the eavesdropper channels:
ergodic-rate power allocation and outage-rate maximization."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .channels import mix_seed
from .config import SystemConfig
from .search1d import grid_then_golden

_LOG2 = math.log(2.0)
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class CdiSpec:
    """Known-channel side of an outage design: the system parameters, the
    outage target and the (perfectly known) legitimate/loop channels."""

    config: SystemConfig
    epsilon: float
    h_sd: np.ndarray
    h_li: np.ndarray

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")


@dataclass(frozen=True)
class OutageParams:
    """Coefficients of the signed quadratic form sig_coef * |z_sig|^2 -
    jam_coef * |z_jam|^2 in unit-variance complex normals."""

    sig_coef: float
    jam_coef: float
    n_sig: int
    n_jam: int

    def __post_init__(self) -> None:
        if self.n_sig < 1 or self.n_jam < 1:
            raise ValueError("block sizes must be >= 1")


def null_basis(h_li: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the null space of the row vector r^H H,
    shape m_t x (m_t - 1).  Jamming through these columns is invisible to
    the destination's filter."""
    m_t = h_li.shape[1]
    if m_t < 2:
        raise ValueError("need at least two transmit antennas")
    v = h_li.conj().T @ r
    nv = np.linalg.norm(v)
    if nv < 1e-12:
        warnings.warn("r^H H is numerically zero; any orthonormal basis works")
        return np.eye(m_t, dtype=complex)[:, : m_t - 1]
    _, _, vh = np.linalg.svd(v[None, :].conj())
    return vh.conj().T[:, 1:]


def chi_sq_jamming_sample(
    m_t: int, m_e: int, sigma_d_sq: float, seed: int, trials: int
):
    """Sample X = h_se^H Hed W W^H Hed^H h_se / ||h_se||^2 with a random
    null basis W per trial (validation utility).

    X should follow a sum of (m_t - 1) exponentials with mean sigma_d_sq
    each, independently of m_e.  Returns an object with the samples and
    their first two moments.
    """
    if m_t < 2:
        raise ValueError("need at least two transmit antennas")
    rng = np.random.default_rng(int(seed) & _MASK64)
    out = np.empty(trials)
    done = 0
    chunk = 1 << 13
    while done < trials:
        take = min(chunk, trials - done)
        h_se = rng.standard_normal((take, m_e)) + 1j * rng.standard_normal((take, m_e))
        h_ed = np.sqrt(sigma_d_sq / 2.0) * (
            rng.standard_normal((take, m_e, m_t)) + 1j * rng.standard_normal((take, m_e, m_t))
        )
        g = rng.standard_normal((take, m_t, m_t)) + 1j * rng.standard_normal((take, m_t, m_t))
        qmat, _ = np.linalg.qr(g)
        w = qmat[:, :, : m_t - 1]
        hw = np.einsum("nem,nmk->nek", h_ed, w)
        num = np.linalg.norm(np.einsum("nek,ne->nk", hw.conj(), h_se), axis=1) ** 2
        out[done : done + take] = num / (np.linalg.norm(h_se, axis=1) ** 2)
        done += take

    @dataclass(frozen=True)
    class _Stats:
        samples: np.ndarray
        mean: float
        var: float

    return _Stats(out, float(out.mean()), float(out.var(ddof=1)))


def ergodic_power_split(
    config: SystemConfig, h_sd: np.ndarray, p_t: float | None = None
) -> tuple[float, float, float]:
    """Split the budget to maximize the mean-field ergodic-rate surrogate

        log2(1 + p_s ||h_sd||^2) - log2(1 + p_s M_e sigma_s^2 / (1 + p_d sigma_d^2)).

    Returns (p_s, p_d, surrogate value in bits, floored at 0).
    """
    if config.m_t < 2:
        raise ValueError("need at least two transmit antennas")
    budget = config.p_t if p_t is None else float(p_t)
    g_sd = float(np.real(np.vdot(h_sd, h_sd)))
    leak_mean = config.m_e * config.sigma_s_sq

    def surrogate(p_s: float) -> float:
        p_d = budget - p_s
        legit = math.log1p(p_s * g_sd)
        leak = math.log1p(p_s * leak_mean / (1.0 + p_d * config.sigma_d_sq))
        return (legit - leak) / _LOG2

    p_s, val, _ = grid_then_golden(surrogate, 0.0, budget, n=129, tol=1e-9 * max(budget, 1.0))
    return float(p_s), float(budget - p_s), max(0.0, float(val))


def ergodic_rate_mc(
    config: SystemConfig,
    h_sd: np.ndarray,
    p_s: float,
    p_d: float,
    trials: int,
    seed: int,
) -> tuple[float, float]:
    """Monte Carlo estimate of the ergodic secrecy rate under the
    null-space jamming policy (ground truth for the surrogate above).

    Per draw: rate = max(0, log2(1 + p_s ||h_sd||^2)
                          - log2(1 + p_s ||h_se||^2 / (1 + p_d X / (m_t-1))))
    with X the jamming quadratic form.  Returns (mean, standard error).
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.default_rng(int(seed) & _MASK64)
    m_t, m_e = config.m_t, config.m_e
    legit = math.log1p(p_s * float(np.real(np.vdot(h_sd, h_sd)))) / _LOG2
    rates = np.empty(trials)
    done = 0
    chunk = 1 << 15
    while done < trials:
        take = min(chunk, trials - done)
        h_se = np.sqrt(config.sigma_s_sq / 2.0) * (
            rng.standard_normal((take, m_e)) + 1j * rng.standard_normal((take, m_e))
        )
        h_ed = np.sqrt(config.sigma_d_sq / 2.0) * (
            rng.standard_normal((take, m_e, m_t)) + 1j * rng.standard_normal((take, m_e, m_t))
        )
        gain_se = np.linalg.norm(h_se, axis=1) ** 2
        hw = h_ed[:, :, : m_t - 1]  # first m_t-1 columns: a valid null basis in law
        x = np.linalg.norm(np.einsum("nek,ne->nk", hw.conj(), h_se), axis=1) ** 2 / gain_se
        leak = np.log1p(p_s * gain_se / (1.0 + p_d * x / (m_t - 1))) / _LOG2
        rates[done : done + take] = np.maximum(0.0, legit - leak)
        done += take
    stderr = float(rates.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return float(rates.mean()), stderr


def outage_probability(params: OutageParams) -> float:
    """Closed-form Prob(sig_coef * X - jam_coef * Y >= 1) for independent
    X ~ Gamma(n_sig), Y ~ Gamma(n_jam) (squared norms of CN(0, I) blocks).

        P = e^{-1/a} sum_{i=0}^{m-1} C(n+i-1, i) (a/(a+b))^n (b/(a+b))^i
                     sum_{k=0}^{m-1-i} (1/a)^k / k!

    with a = sig_coef, b = jam_coef, m = n_sig, n = n_jam.  Terms are
    evaluated through log-gamma and accumulated largest first.  Callers
    must short-circuit impossible targets (alpha <= 0) to probability 1
    before coming here.
    """
    a, b = params.sig_coef, params.jam_coef
    m, n = params.n_sig, params.n_jam
    if a <= 0.0:
        raise ValueError("sig_coef must be positive (alpha <= 0 means certain outage)")
    if b < 0.0:
        raise ValueError("jam_coef must be nonnegative")
    if b == 0.0:
        # pure gamma tail at 1/a
        log_terms = [-1.0 / a + k * math.log(1.0 / a) - math.lgamma(k + 1) for k in range(m)]
        return float(min(1.0, sum(math.exp(v) for v in sorted(log_terms, reverse=True))))
    log_a_frac = math.log(a / (a + b))
    log_b_frac = math.log(b / (a + b))
    log_inv_a = math.log(1.0 / a) if a != 1.0 else 0.0
    log_terms: list[float] = []
    for i in range(m):
        log_comb = math.lgamma(n + i) - math.lgamma(i + 1) - math.lgamma(n)
        base = -1.0 / a + log_comb + n * log_a_frac + i * log_b_frac
        for k in range(m - i):
            log_terms.append(base + k * log_inv_a - math.lgamma(k + 1))
    total = sum(math.exp(v) for v in sorted(log_terms, reverse=True))
    return float(min(max(total, 0.0), 1.0))


def outage_secrecy_rate(spec: CdiSpec, p_s: float, p_d: float) -> float:
    """Largest rate whose outage probability stays within spec.epsilon,
    found by bisection (the outage probability is nondecreasing in the
    target rate)."""
    if p_s < 0.0 or p_d < 0.0:
        raise ValueError("powers must be nonnegative")
    if p_s == 0.0:
        return 0.0
    cfg = spec.config
    g_sd = float(np.real(np.vdot(spec.h_sd, spec.h_sd)))
    r_cap = math.log1p(p_s * g_sd) / _LOG2

    def outage(rate: float) -> float:
        alpha = (1.0 + p_s * g_sd) / (2.0**rate) - 1.0
        if alpha <= 0.0:
            return 1.0
        sig = p_s * cfg.sigma_s_sq / alpha
        jam = p_d * cfg.sigma_d_sq / (cfg.m_t - 1) if cfg.m_t > 1 and p_d > 0.0 else 0.0
        return outage_probability(OutageParams(sig, jam, cfg.m_e, max(cfg.m_t - 1, 1)))

    if outage(0.0) > spec.epsilon:
        return 0.0
    lo, hi = 0.0, r_cap
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if outage(mid) <= spec.epsilon:
            lo = mid
        else:
            hi = mid
    return lo


def outage_power_split(spec: CdiSpec, p_t: float) -> tuple[float, float, float]:
    """Maximize the outage secrecy rate over p_s + p_d = p_t.

    Returns (p_s, p_d, rate)."""
    if p_t <= 0.0:
        raise ValueError("p_t must be positive")

    def value(p_s: float) -> float:
        return outage_secrecy_rate(spec, p_s, p_t - p_s)

    p_s, rate, _ = grid_then_golden(value, p_t * 1e-6, p_t, n=33, tol=1e-6 * p_t)
    return float(p_s), float(p_t - p_s), float(rate)


def derive_stream_seed(seed: int, index: int) -> int:
    """Disjoint per-worker seed stream: (seed, index) through the 64-bit mix."""
    return mix_seed(seed, index)
