"""Brute-force reference implementations.

Deliberately simple grid/Monte-Carlo evaluators used to cross-check the
analytic solvers.  They share no code path with the solvers they validate,
and they ship in the library so the CLI can run the comparisons on demand.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import ChannelRealization, InfeasibleConstraintError


@dataclass(frozen=True)
class GridSpec:
    """Grid sizes for the brute-force searches."""

    resolution: int = 64
    power_steps: int = 33
    tolerance: float = 1e-3

    def __post_init__(self) -> None:
        if self.resolution < 8:
            raise ValueError("resolution must be >= 8")


def _unit_sphere_grid(m_t: int, res: int) -> np.ndarray:
    """Grid of unit vectors covering C^{m_t} up to a global phase."""
    if m_t == 2:
        theta = np.linspace(0.0, np.pi / 2.0, res)
        phi = np.linspace(0.0, 2.0 * np.pi, 4 * res, endpoint=False)
        th, ph = np.meshgrid(theta, phi, indexing="ij")
        q = np.stack([np.cos(th), np.sin(th) * np.exp(1j * ph)], axis=-1)
        return q.reshape(-1, 2)
    if m_t == 3:
        theta1 = np.linspace(0.0, np.pi / 2.0, res)
        theta2 = np.linspace(0.0, np.pi / 2.0, res)
        phi = np.linspace(0.0, 2.0 * np.pi, 2 * res, endpoint=False)
        t1, t2, p1, p2 = np.meshgrid(theta1, theta2, phi, phi, indexing="ij")
        q = np.stack(
            [
                np.cos(t1),
                np.sin(t1) * np.cos(t2) * np.exp(1j * p1),
                np.sin(t1) * np.sin(t2) * np.exp(1j * p2),
            ],
            axis=-1,
        )
        return q.reshape(-1, 3)
    raise ValueError("sphere grid supports m_t in {2, 3} only")


def _constrained_sphere_grid(
    constraint: np.ndarray, level: float, m_t: int, res: int
) -> np.ndarray:
    """Grid of unit q with q^H A q = level, built exactly in A's eigenbasis.

    The two quadratic equalities pin the component moduli (for m_t = 2) or
    confine them to a segment (m_t = 3); the free phases are gridded.
    """
    d, u_basis = np.linalg.eigh(0.5 * (constraint + constraint.conj().T))
    d, u_basis = d[::-1], u_basis[:, ::-1]
    span = max(abs(d[0]), abs(d[-1]), 1.0)
    if m_t == 2:
        if abs(d[0] - d[1]) < 1e-14 * span:
            if abs(level - d[0]) > 1e-9 * span:
                raise InfeasibleConstraintError("constraint level unreachable")
            s = np.array([0.5, 0.5])
        else:
            s1 = (level - d[1]) / (d[0] - d[1])
            if s1 < -1e-9 or s1 > 1.0 + 1e-9:
                raise InfeasibleConstraintError("constraint level unreachable")
            s = np.array([min(max(s1, 0.0), 1.0), 0.0])
            s[1] = 1.0 - s[0]
        phi = np.linspace(0.0, 2.0 * np.pi, 4 * res, endpoint=False)
        qp = np.stack(
            [np.full_like(phi, np.sqrt(s[0]), dtype=complex), np.sqrt(s[1]) * np.exp(1j * phi)],
            axis=-1,
        )
        return (u_basis @ qp.T).T
    if m_t == 3:
        # moduli-squared live on the segment {s >= 0} cut by two hyperplanes
        ones = np.ones(3)
        mat = np.stack([ones, d])
        s_base, *_ = np.linalg.lstsq(mat, np.array([1.0, level]), rcond=None)
        w = np.array([d[1] - d[2], d[2] - d[0], d[0] - d[1]])
        wn = np.linalg.norm(w)
        if wn < 1e-14 * span:
            raise InfeasibleConstraintError("degenerate constraint spectrum")
        w = w / wn
        u_lo, u_hi = -np.inf, np.inf
        for i in range(3):
            if w[i] > 1e-14:
                u_lo = max(u_lo, -s_base[i] / w[i])
            elif w[i] < -1e-14:
                u_hi = min(u_hi, -s_base[i] / w[i])
            elif s_base[i] < -1e-9:
                raise InfeasibleConstraintError("constraint level unreachable")
        if u_lo > u_hi + 1e-12:
            raise InfeasibleConstraintError("constraint level unreachable")
        u = np.linspace(u_lo, u_hi, res)
        s = np.clip(s_base[None, :] + u[:, None] * w[None, :], 0.0, None)
        phi = np.linspace(0.0, 2.0 * np.pi, 2 * res, endpoint=False)
        su, p1, p2 = np.meshgrid(np.arange(res), phi, phi, indexing="ij")
        mod = np.sqrt(s[su.reshape(-1)])
        qp = np.stack(
            [
                mod[:, 0].astype(complex),
                mod[:, 1] * np.exp(1j * p1.reshape(-1)),
                mod[:, 2] * np.exp(1j * p2.reshape(-1)),
            ],
            axis=-1,
        )
        return (u_basis @ qp.T).T
    raise ValueError("constrained sphere grid supports m_t in {2, 3} only")


def sphere_grid_max(
    objective: Callable[[np.ndarray], np.ndarray],
    m_t: int,
    spec: GridSpec,
    constraint: np.ndarray | None = None,
    level: float = 0.0,
) -> tuple[float, np.ndarray]:
    """Exhaustive grid maximization of ``objective`` over unit vectors.

    ``objective`` must accept a stack of unit vectors, shape (N, m_t), and
    return (N,) values.  When ``constraint`` (a Hermitian matrix A) is
    given, the grid covers {q : q^H A q = level} exactly instead of the
    whole sphere.  Accuracy is O(1/resolution) for smooth objectives.
    """
    if m_t not in (2, 3):
        raise ValueError("oracle supports m_t in {2, 3} only")
    if constraint is None:
        grid = _unit_sphere_grid(m_t, spec.resolution)
    else:
        grid = _constrained_sphere_grid(constraint, level, m_t, spec.resolution)
    vals = np.asarray(objective(grid), dtype=float)
    idx = int(np.argmax(vals))
    return float(vals[idx]), grid[idx]


def grid_power_search(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    steps: int,
) -> tuple[float, float]:
    """Dense scalar grid maximization; f must be vectorized.  Returns
    (argmax, max) over the grid."""
    if hi < lo:
        raise ValueError("lo must not exceed hi")
    xs = np.linspace(lo, hi, steps)
    vals = np.asarray(f(xs), dtype=float)
    idx = int(np.argmax(vals))
    return float(xs[idx]), float(vals[idx])


def mc_outage(params, trials: int, seed: int) -> tuple[float, float]:
    """Empirical Prob(sig_coef * X - jam_coef * Y >= 1) with X, Y the squared
    norms of independent CN(0, I) blocks of sizes n_sig and n_jam.

    Returns (probability, binomial standard error).
    """
    if trials < 1000:
        raise ValueError("mc_outage needs at least 1e3 trials")
    rng = np.random.default_rng(int(seed) & ((1 << 64) - 1))
    m, n = params.n_sig, params.n_jam
    hits = 0
    done = 0
    chunk = 1 << 17
    while done < trials:
        take = min(chunk, trials - done)
        z = rng.standard_normal((take, 2 * (m + n)))
        sq = z**2
        x = 0.5 * sq[:, : 2 * m].sum(axis=1)
        y = 0.5 * sq[:, 2 * m :].sum(axis=1)
        hits += int(np.count_nonzero(params.sig_coef * x - params.jam_coef * y >= 1.0))
        done += take
    p = hits / trials
    return p, float(np.sqrt(max(p * (1.0 - p), 1e-300) / trials))


def psd_grid_search(
    chan: ChannelRealization,
    p_s: float,
    p_d: float,
    rho: float,
    spec: GridSpec,
) -> tuple[float, np.ndarray]:
    """Grid search over full-rank 2x2 PSD covariances with trace p_d.

    Parameterizes Q by an eigenvalue split and eigenvector angles, pairs
    each Q with its SINR-optimal receiver and evaluates the secrecy rate
    directly.  Used to check that rank-1 designs are not leaving rate on
    the table.
    """
    if chan.m_t != 2:
        raise ValueError("psd_grid_search supports m_t = 2 only")
    res = spec.resolution
    lam = np.linspace(0.0, 1.0, spec.power_steps)
    theta = np.linspace(0.0, np.pi / 2.0, res)
    phi = np.linspace(0.0, 2.0 * np.pi, 4 * res, endpoint=False)
    lg, tg, pg = np.meshgrid(lam, theta, phi, indexing="ij")
    lg, tg, pg = lg.reshape(-1), tg.reshape(-1), pg.reshape(-1)
    c, s, e = np.cos(tg), np.sin(tg), np.exp(1j * pg)
    q1 = np.stack([c, s * e], axis=-1)
    q2 = np.stack([-s, c * e], axis=-1)
    q_cov = p_d * (
        lg[:, None, None] * (q1[:, :, None] * q1[:, None, :].conj())
        + (1.0 - lg)[:, None, None] * (q2[:, :, None] * q2[:, None, :].conj())
    )

    h_li, h_sd, h_se, h_ed = chan.h_li, chan.h_sd, chan.h_se, chan.h_ed
    cov_d = rho * np.einsum("ra,nab,sb->nrs", h_li, q_cov, h_li.conj()) + np.eye(chan.m_r)
    w = np.linalg.solve(cov_d, np.broadcast_to(h_sd, (q_cov.shape[0], chan.m_r))[..., None])[..., 0]
    w = w / np.linalg.norm(w, axis=-1, keepdims=True)
    sig = p_s * np.abs(np.einsum("nr,r->n", w.conj(), h_sd)) ** 2
    hw = np.einsum("ra,nr->na", h_li.conj(), w)
    self_int = rho * np.real(np.einsum("na,nab,nb->n", hw.conj(), q_cov, hw))
    legit = np.log2(1.0 + sig / (1.0 + np.maximum(self_int, 0.0)))

    gain_se = float(np.real(np.vdot(h_se, h_se)))
    hed_se = h_ed.conj().T @ h_se
    jam = np.maximum(np.real(np.einsum("a,nab,b->n", hed_se.conj(), q_cov, hed_se)), 0.0) / gain_se
    leak = np.log2(1.0 + p_s * gain_se / (1.0 + jam))
    rate = np.maximum(0.0, legit - leak)
    idx = int(np.argmax(rate))
    return float(rate[idx]), q_cov[idx]
