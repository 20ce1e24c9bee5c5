"""Jamming covariance design against an MMSE-combining eavesdropper via
difference-of-convex iterations (concave surrogate maximized each step)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import check_psd
from .config import ChannelRealization, RateReport
from .rates import secrecy_rate_mmse_pair

_LOG2 = np.log(2.0)


@dataclass(frozen=True)
class DcState:
    """One iterate: covariance, its objective (bits) and bookkeeping."""

    q_cov: np.ndarray
    objective: float
    iteration: int
    converged: bool


def mmse_pair_objective(
    chan: ChannelRealization, q_cov: np.ndarray, p_s: float, rho: float
) -> float:
    """Unfloored secrecy objective (bits) when both ends use MMSE filters,
    written as a difference of log-dets:

        logdet(I + p_s h_sd h_sd^H + rho H Q H^H) - logdet(I + rho H Q H^H)
      - logdet(I + p_s h_se h_se^H + Hed Q Hed^H) + logdet(I + Hed Q Hed^H)

    Coincides with rate_legit - rate_leak of secrecy_rate_mmse_pair by the
    rank-1 determinant identity.
    """
    check_psd(q_cov)

    def logdet(mat: np.ndarray) -> float:
        sign, val = np.linalg.slogdet(mat)
        return float(val)

    eye_r = np.eye(chan.m_r)
    eye_e = np.eye(chan.m_e)
    li_q = chan.h_li @ q_cov @ chan.h_li.conj().T
    ed_q = chan.h_ed @ q_cov @ chan.h_ed.conj().T
    sd = p_s * np.outer(chan.h_sd, chan.h_sd.conj())
    se = p_s * np.outer(chan.h_se, chan.h_se.conj())
    val = (
        logdet(eye_r + sd + rho * li_q)
        - logdet(eye_r + rho * li_q)
        - logdet(eye_e + se + ed_q)
        + logdet(eye_e + ed_q)
    )
    return val / _LOG2


def _project_psd_trace(mat: np.ndarray, budget: float) -> np.ndarray:
    """Euclidean projection onto {Q >= 0, tr(Q) <= budget}: clip the
    eigenvalues at zero, then shift them onto the trace simplex if the
    budget is exceeded."""
    herm = 0.5 * (mat + mat.conj().T)
    w, u = np.linalg.eigh(herm)
    w = np.maximum(w, 0.0)
    if w.sum() > budget:
        srt = np.sort(w)[::-1]
        csum = np.cumsum(srt)
        k = np.arange(1, w.size + 1)
        ok = srt - (csum - budget) / k > 0
        k_star = int(np.max(np.nonzero(ok)[0])) + 1
        theta = (csum[k_star - 1] - budget) / k_star
        w = np.maximum(w - theta, 0.0)
    return (u * w) @ u.conj().T


def _grad_g(chan: ChannelRealization, q_cov: np.ndarray, p_s: float, rho: float) -> np.ndarray:
    """Gradient (nats) of the subtracted concave part at q_cov."""
    eye_r = np.eye(chan.m_r)
    eye_e = np.eye(chan.m_e)
    g1 = rho * chan.h_li.conj().T @ np.linalg.solve(
        eye_r + rho * chan.h_li @ q_cov @ chan.h_li.conj().T, chan.h_li
    )
    g2 = chan.h_ed.conj().T @ np.linalg.solve(
        eye_e + p_s * np.outer(chan.h_se, chan.h_se.conj()) + chan.h_ed @ q_cov @ chan.h_ed.conj().T,
        chan.h_ed,
    )
    return g1 + g2


def _surrogate_ascent(
    chan: ChannelRealization,
    q_k: np.ndarray,
    p_s: float,
    p_d: float,
    rho: float,
    step0: float,
    inner_tol: float,
    max_inner: int,
) -> tuple[np.ndarray, float, bool]:
    """Maximize the concave surrogate f(Q) - <grad g(Q_k), Q> over the PSD
    trace ball: projected gradient with Barzilai-Borwein step sizes and an
    Armijo safeguard.  Returns (maximizer, last step size, converged)."""
    grad_lin = _grad_g(chan, q_k, p_s, rho)
    eye_r = np.eye(chan.m_r)
    eye_e = np.eye(chan.m_e)
    sd = p_s * np.outer(chan.h_sd, chan.h_sd.conj())

    def surrogate(q: np.ndarray) -> float:
        li_q = chan.h_li @ q @ chan.h_li.conj().T
        ed_q = chan.h_ed @ q @ chan.h_ed.conj().T
        val = np.linalg.slogdet(eye_r + sd + rho * li_q)[1]
        val += np.linalg.slogdet(eye_e + ed_q)[1]
        return float(val - np.real(np.trace(grad_lin @ q)))

    def grad_surrogate(q: np.ndarray) -> np.ndarray:
        g1 = rho * chan.h_li.conj().T @ np.linalg.solve(
            eye_r + sd + rho * chan.h_li @ q @ chan.h_li.conj().T, chan.h_li
        )
        g2 = chan.h_ed.conj().T @ np.linalg.solve(
            eye_e + chan.h_ed @ q @ chan.h_ed.conj().T, chan.h_ed
        )
        return g1 + g2 - grad_lin

    q = q_k.copy()
    phi = surrogate(q)
    grad = grad_surrogate(q)
    step = step0
    converged = False
    it = 0
    while it < max_inner:
        it += 1
        trial = _project_psd_trace(q + step * grad, p_d)
        diff = trial - q
        if np.linalg.norm(diff) / step <= inner_tol:
            converged = True
            break
        gain = float(np.real(np.trace(grad.conj().T @ diff)))
        phi_trial = surrogate(trial)
        if phi_trial >= phi + 1e-4 * gain:
            grad_new = grad_surrogate(trial)
            y = grad - grad_new  # curvature pairing for the concave ascent
            sy = float(np.real(np.trace(diff.conj().T @ y)))
            ss = float(np.real(np.trace(diff.conj().T @ diff)))
            step = min(max(ss / sy, 1e-10), 1e8) if sy > 1e-300 else step * 1.5
            q, phi, grad = trial, phi_trial, grad_new
        else:
            step *= 0.3
            if step < 1e-18:
                break
    return q, step, converged


def dc_step(
    chan: ChannelRealization,
    state: DcState,
    p_s: float,
    p_d: float,
    rho: float,
    inner_tol: float = 1e-6,
    max_inner: int = 400,
    step0: float = 1.0,
) -> DcState:
    """One majorization step: maximize the linearized-surrogate problem
    from the current iterate.  The true objective never decreases."""
    q, _, converged = _surrogate_ascent(chan, state.q_cov, p_s, p_d, rho, step0, inner_tol, max_inner)
    objective = mmse_pair_objective(chan, q, p_s, rho)
    return DcState(q, objective, state.iteration + 1, converged)


def _initial_point(
    chan: ChannelRealization, p_s: float, p_d: float, rho: float, init: str
) -> np.ndarray:
    m_t = chan.m_t
    if init == "zero":
        return np.zeros((m_t, m_t), dtype=complex)
    if init == "scaled_identity":
        return (p_d / m_t) * np.eye(m_t, dtype=complex)
    if init == "zf":
        if m_t < 2:
            return p_d * np.ones((1, 1), dtype=complex)
        from .jamming import jamming_zf

        q = jamming_zf(chan, p_s, p_d, rho).q
        return p_d * np.outer(q, q.conj())
    raise ValueError(f"unknown init {init!r}")


def dc_solve(
    chan: ChannelRealization,
    p_s: float,
    p_d: float,
    rho: float,
    init: str = "zf",
    tol: float = 1e-6,
    max_iter: int = 100,
) -> tuple[np.ndarray, RateReport, list[float]]:
    """Iterate dc_step from the chosen starting point until the objective
    gain drops below tol.  Returns the final covariance, its rate report
    under MMSE filters at both ends, and the (monotone) objective trace."""
    q0 = _initial_point(chan, p_s, p_d, rho, init)
    state = DcState(q0, mmse_pair_objective(chan, q0, p_s, rho), 0, False)
    trace = [state.objective]
    step = 1.0
    for _ in range(max_iter):
        q, step, converged = _surrogate_ascent(chan, state.q_cov, p_s, p_d, rho, step, 1e-6, 400)
        nxt = DcState(q, mmse_pair_objective(chan, q, p_s, rho), state.iteration + 1, converged)
        trace.append(nxt.objective)
        done = abs(nxt.objective - state.objective) < tol
        state = nxt
        if done:
            break
    report = secrecy_rate_mmse_pair(chan, state.q_cov, p_s, rho)
    return state.q_cov, report, trace
