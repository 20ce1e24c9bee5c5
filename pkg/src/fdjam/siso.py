"""Single-antenna power control: feasibility, optimal jamming power,
joint source/destination split and the high-SNR ceiling."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .search1d import grid_then_golden

_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class ScalarChannels:
    """Squared magnitudes of the four scalar channels."""

    g_sd: float
    g_se: float
    g_ed: float
    g_li: float

    def __post_init__(self) -> None:
        if min(self.g_sd, self.g_se, self.g_ed, self.g_li) < 0.0:
            raise ValueError("channel gains must be nonnegative")


@dataclass(frozen=True)
class PdSolution:
    """Optimal destination transmit power and the objective it achieves."""

    p_d_star: float
    branch: str  # interior_root | full_power | zero_power
    objective: float


def rate_ratio(ch: ScalarChannels, p_s: float, rho: float, p_d) -> float | np.ndarray:
    """(1 + destination SINR) / (1 + eavesdropper SINR) at jamming power p_d.

    The secrecy rate is log2 of this ratio, floored at zero.  Accepts a
    scalar or an array of p_d values.
    """
    num = 1.0 + p_s * ch.g_sd / (1.0 + rho * np.asarray(p_d) * ch.g_li)
    den = 1.0 + p_s * ch.g_se / (1.0 + np.asarray(p_d) * ch.g_ed)
    out = num / den
    return float(out) if np.isscalar(p_d) else out


def positive_secrecy_feasible(
    ch: ScalarChannels, p_s: float, rho: float, p_d_max: float
) -> tuple[bool, str]:
    """Whether any p_d in [0, p_d_max] yields a strictly positive secrecy rate.

    The ratio of effective gains is monotone in p_d, so only the endpoints
    matter: either the loop interference is weak enough that full-power
    jamming wins ("low_li"), or the direct channel alone is stronger than
    the leak ("high_li").
    """
    at_zero = p_s * ch.g_sd > p_s * ch.g_se
    at_full = p_s * ch.g_sd * (1.0 + p_d_max * ch.g_ed) > p_s * ch.g_se * (
        1.0 + rho * p_d_max * ch.g_li
    )
    if rho * ch.g_li < ch.g_ed and at_full:
        return True, "low_li"
    if at_zero:
        return True, "high_li"
    return False, "none"


def _stable_quadratic_roots(a: float, b: float, c: float) -> tuple[float, float] | None:
    """Real roots of a x^2 + b x + c = 0 (a != 0), numerically stable.

    Returns (smaller, larger) or None when the roots are complex.
    """
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return None
    sq = math.sqrt(disc)
    if b >= 0.0:
        qq = -0.5 * (b + sq)
    else:
        qq = -0.5 * (b - sq)
    if qq == 0.0:
        return 0.0, 0.0
    r1 = qq / a
    r2 = c / qq
    return (r1, r2) if r1 <= r2 else (r2, r1)


def optimal_jamming_power(
    ch: ScalarChannels, p_s: float, rho: float, p_d_max: float
) -> PdSolution:
    """Maximize rate_ratio over p_d in [0, p_d_max].

    The stationary points solve (cb - ad) x^2 + 2(c - a) x
    - (a/d)(1 + c) + (c/b)(1 + a) = 0 with a = p_s g_sd, b = rho g_li,
    c = p_s g_se, d = g_ed; only the larger root can be positive, and the
    optimum is either that root clipped to the budget or an endpoint.
    Degenerate coefficients (b, c or d zero, or cb = ad) are handled by
    monotonicity arguments; endpoint ties break toward zero power.
    """
    a = p_s * ch.g_sd
    b = rho * ch.g_li
    c = p_s * ch.g_se
    d = ch.g_ed
    f0 = rate_ratio(ch, p_s, rho, 0.0)
    if p_d_max <= 0.0:
        return PdSolution(0.0, "zero_power", f0)
    f_full = rate_ratio(ch, p_s, rho, p_d_max)
    if b == 0.0:
        # jamming is free; it helps iff there is leakage to suppress
        if c > 0.0 and d > 0.0:
            return PdSolution(p_d_max, "full_power", f_full)
        return PdSolution(0.0, "zero_power", f0)
    if d == 0.0 or c == 0.0:
        # jamming never reaches E but still hurts the destination
        return PdSolution(0.0, "zero_power", f0)

    quad_a = c * b - a * d
    quad_b = 2.0 * (c - a)
    quad_c = (c / b) * (1.0 + a) - (a / d) * (1.0 + c)
    if quad_a == 0.0:
        # linear stationarity: the ratio tends to 1 from one side
        if a > c:
            return PdSolution(0.0, "zero_power", f0)
        if a < c:
            return PdSolution(p_d_max, "full_power", f_full)
        return PdSolution(0.0, "zero_power", f0)

    roots = _stable_quadratic_roots(quad_a, quad_b, quad_c)
    x2 = 0.0 if roots is None else max(roots[1], 0.0)
    delta = rho * (a * d) / (c * b)
    if rho < min(delta, 1.0):
        p_star = min(p_d_max, x2)
        if p_star <= 0.0:
            return PdSolution(0.0, "zero_power", f0)
        branch = "full_power" if p_star >= p_d_max else "interior_root"
        return PdSolution(p_star, branch, rate_ratio(ch, p_s, rho, p_star))
    if f0 >= f_full:
        return PdSolution(0.0, "zero_power", f0)
    return PdSolution(p_d_max, "full_power", f_full)


def jamming_power_is_monotone(
    ch: ScalarChannels, p_s: float, p_d_max: float, rho_grid
) -> bool:
    """True when the optimal jamming power is non-increasing along rho_grid."""
    powers = [optimal_jamming_power(ch, p_s, rho, p_d_max).p_d_star for rho in np.asarray(rho_grid)]
    tol = 1e-9 * (1.0 + p_d_max)
    return bool(np.all(np.diff(powers) <= tol))


def joint_power_split(
    ch: ScalarChannels, rho: float, p_t: float
) -> tuple[float, float]:
    """Split a total budget p_t as p_s = alpha p_t, p_d = (1 - alpha) p_t.

    For unit-normalized direct/leak gains the optimizer is closed form;
    general gains fall back to a grid + golden-section search over alpha.
    Returns (alpha, secrecy rate in bits).
    """
    if p_t <= 0.0:
        raise ValueError("p_t must be positive")
    closed_form = abs(ch.g_sd - 1.0) < 1e-12 and abs(ch.g_se - 1.0) < 1e-12
    if closed_form:
        if rho * ch.g_li >= ch.g_ed:
            alpha = 0.0
        else:
            alpha = 1.0 / (
                1.0
                + math.sqrt(
                    (p_t + 1.0) / ((p_t * ch.g_ed + 1.0) * (p_t * ch.g_li * rho + 1.0))
                )
            )
    else:
        alpha, _, _ = grid_then_golden(
            lambda al: rate_ratio(ch, al * p_t, rho, (1.0 - al) * p_t),
            0.0,
            1.0,
            n=65,
            tol=1e-8,
        )
    ratio = rate_ratio(ch, alpha * p_t, rho, (1.0 - alpha) * p_t)
    return alpha, max(0.0, math.log(ratio) / _LOG2)


def high_snr_limit(ch: ScalarChannels, beta: float, rho: float) -> float:
    """Secrecy-rate ceiling as p_d grows with p_s = beta p_d held fixed.

    Returns math.inf when rho * g_li = 0 (no residual loop interference,
    hence no saturation).
    """
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    if rho * ch.g_li == 0.0:
        return math.inf
    legit = math.log1p(beta * ch.g_sd / (rho * ch.g_li)) / _LOG2
    if ch.g_ed == 0.0:
        if beta * ch.g_se == 0.0:
            return max(0.0, legit)
        return 0.0
    leak = math.log1p(beta * ch.g_se / ch.g_ed) / _LOG2
    return max(0.0, legit - leak)
