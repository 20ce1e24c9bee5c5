"""Multi-antenna jamming covariance design.

All designs are rank-1 (covariance p_d * q q^H).  The search variable t is
the received self-interference power at the destination's filter output;
for the closed-form coupling gain it is normalized internally to
t / (p_d ||H^H r||^2) in [0, 1].
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np

from .channels import mmse_receiver_optimal, mrc_receiver
from .config import ChannelRealization, DegenerateChannelError, InfeasibleConstraintError
from .rates import secrecy_rate_general
from .search1d import golden_max, grid_then_golden

logger = logging.getLogger(__name__)

_TINY = 1e-12
_ALIGN_TOL = 1e-8


@dataclass(frozen=True)
class DirectionPair:
    """The two transmit-space directions that matter for jamming design:
    the one coupling into the destination's filter and the one coupling
    into the eavesdropper's combiner."""

    self_dir: np.ndarray
    eve_dir: np.ndarray
    corr: float

    def __post_init__(self) -> None:
        if abs(np.linalg.norm(self.self_dir) - 1.0) > 1e-9:
            raise ValueError("self_dir must be unit norm")
        if abs(np.linalg.norm(self.eve_dir) - 1.0) > 1e-9:
            raise ValueError("eve_dir must be unit norm")
        if abs(abs(np.vdot(self.self_dir, self.eve_dir)) - self.corr) > 1e-12:
            raise ValueError("stored corr does not match the vectors")

    @classmethod
    def from_vectors(cls, v_self: np.ndarray, v_eve: np.ndarray) -> "DirectionPair":
        n1, n2 = np.linalg.norm(v_self), np.linalg.norm(v_eve)
        if n1 < _TINY or n2 < _TINY:
            raise DegenerateChannelError("cannot normalize a zero direction")
        c1, c2 = v_self / n1, v_eve / n2
        return cls(c1, c2, float(abs(np.vdot(c1, c2))))


@dataclass(frozen=True)
class JammingSearch:
    """Outcome of a 1-D interference-level search.

    ``p_d_used`` is None when the design spends the whole jamming budget
    (the usual case); power-limited paths record the actual spend.
    """

    t_star: float
    q_star: np.ndarray
    secrecy: float
    evaluations: int
    p_d_used: float | None = None


def _any_orthogonal_unit(v: np.ndarray) -> np.ndarray:
    """A unit vector orthogonal to v (dim >= 2)."""
    idx = int(np.argmin(np.abs(v)))
    e = np.zeros_like(v)
    e[idx] = 1.0
    w = e - v * np.vdot(v, e)
    n = np.linalg.norm(w)
    if n < _TINY:  # v is (numerically) the idx-th basis vector
        e[:] = 0.0
        e[(idx + 1) % v.shape[0]] = 1.0
        w = e - v * np.vdot(v, e)
        n = np.linalg.norm(w)
    return w / n


def eve_coupling(pair: DirectionPair, leak_frac: float) -> tuple[float, np.ndarray]:
    """Largest fraction of jamming power that reaches the eavesdropper's
    combiner when a fraction ``leak_frac`` couples into the destination's
    filter.

    Closed form: 1 - (corr sqrt(1-t) - sqrt((1-corr^2) t))^2, concave in t.
    Also returns a maximizing unit direction, built in span{self_dir,
    eve_dir} with the component phases aligned.
    """
    t = float(leak_frac)
    if t < -1e-12 or t > 1.0 + 1e-12:
        raise ValueError(f"leak fraction must be in [0, 1], got {t}")
    t = min(max(t, 0.0), 1.0)
    r = pair.corr
    value = 1.0 - (r * np.sqrt(1.0 - t) - np.sqrt((1.0 - r * r) * t)) ** 2

    c1, c2 = pair.self_dir, pair.eve_dir
    inner = np.vdot(c1, c2)  # c1^H c2
    resid = c2 - inner * c1
    s = np.linalg.norm(resid)
    e2 = _any_orthogonal_unit(c1) if s < _ALIGN_TOL else resid / s
    phase = inner / r if r > 1e-15 else 1.0
    q = np.sqrt(t) * phase * c1 + np.sqrt(1.0 - t) * e2
    return float(value), q / np.linalg.norm(q)


# ---------------------------------------------------------------------------
# Appendix-style dual solver for the optimal-receiver coupling gain
# ---------------------------------------------------------------------------


def _perturb_repeated(d: np.ndarray) -> np.ndarray:
    """Split numerically repeated eigenvalues so (l1 D + l2 I) inverts cleanly."""
    scale = max(float(np.max(np.abs(d), initial=0.0)), 1.0)
    out = d.copy()
    for i in range(1, out.shape[-1]):
        bump = out[..., i - 1] - out[..., i] < 1e-12 * scale
        out[..., i] = np.where(bump, out[..., i - 1] - 1e-12 * scale, out[..., i])
    return out


def _gain_m2(d: np.ndarray, z: np.ndarray, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Coupling gain for 2x2 spectra: both constraints pin the component
    moduli, so the dual system solves in closed form.

    d, z: (..., 2) descending eigenvalues and |b_i|^2; t: (...,).
    Returns (value, s1) where s1 is the squared modulus on the top
    eigenvector; value is nan where t is outside [d2, d1].
    """
    spread = d[..., 0] - d[..., 1]
    safe = np.where(np.abs(spread) < _TINY, 1.0, spread)
    s1 = (t - d[..., 1]) / safe
    feas = (s1 >= -1e-9) & (s1 <= 1.0 + 1e-9) & (np.abs(spread) >= _TINY)
    s1 = np.clip(s1, 0.0, 1.0)
    val = (np.sqrt(z[..., 0] * s1) + np.sqrt(z[..., 1] * (1.0 - s1))) ** 2
    return np.where(feas, val, np.nan), s1


def _solve_lam2(d: np.ndarray, z: np.ndarray, lam1: np.ndarray, iters: int = 48) -> np.ndarray:
    """For each lam1, the unique lam2 > max(0, -lam1 d_i) solving
    sum_i z_i / (lam1 d_i + lam2)^2 = 1; nan where none exists."""
    act = z > _TINY * np.sum(z, axis=-1, keepdims=True)
    neg = np.where(act, -lam1[..., None] * d, -np.inf)
    mbound = np.maximum(np.max(neg, axis=-1), 0.0)
    span = np.sqrt(np.sum(np.where(act, z, 0.0), axis=-1))

    def f2(lam2):
        mu = lam1[..., None] * d + lam2[..., None]
        return np.sum(np.where(act, z / np.maximum(mu, _TINY) ** 2, 0.0), axis=-1)

    lo = mbound + 1e-14 * (1.0 + np.abs(mbound)) + 1e-250
    hi = mbound + span + 1e-250
    solvable = f2(lo) >= 1.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        high_side = f2(mid) >= 1.0
        lo = np.where(high_side, mid, lo)
        hi = np.where(high_side, hi, mid)
    out = 0.5 * (lo + hi)
    return np.where(solvable, out, np.nan)


def _dual_gain_scan(
    d: np.ndarray, z: np.ndarray, t: np.ndarray, scan: int = 65
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Solve the two stationarity equations for a batch of spectra.

    d, z: (T, m) descending eigenvalues and squared coefficients; t: (T,).
    Scans the first multiplier over a tangent-warped grid, solves the
    second by bisection, brackets sign changes of the residual
    sum z_i (d_i - t) / mu_i^2 and bisects each bracket.  Returns
    (value, lam1, lam2, found) with value = (sum z_i / mu_i)^2 of the best
    root per instance.
    """
    big_t = d.shape[0]
    spread = np.maximum(d[:, 0] - d[:, -1], _TINY)
    scale = (1.0 + np.sqrt(z.sum(axis=-1))) / spread

    u = np.linspace(-1.545, 1.545, scan)
    lam1 = scale[:, None] * np.tan(u)[None, :]
    lam2 = _solve_lam2(d[:, None, :], z[:, None, :], lam1)

    # residual sum z_i (d_i - t) / mu_i^2 on the scan grid
    mu = lam1[..., None] * d[:, None, :] + lam2[..., None]
    g_grid = np.sum(z[:, None, :] * (d[:, None, :] - t[:, None, None]) / mu**2, axis=-1)
    valid = np.isfinite(g_grid)

    rows, lo_u, hi_u, lo_l2 = [], [], [], []
    for i in range(big_t):
        gi, vi = g_grid[i], valid[i]
        for j in range(scan - 1):
            if vi[j] and vi[j + 1] and gi[j] * gi[j + 1] <= 0.0 and (gi[j] != 0.0 or gi[j + 1] != 0.0):
                rows.append(i)
                lo_u.append(lam1[i, j])
                hi_u.append(lam1[i, j + 1])
    found_any = np.zeros(big_t, dtype=bool)
    best_val = np.full(big_t, np.nan)
    best_l1 = np.full(big_t, np.nan)
    best_l2 = np.full(big_t, np.nan)
    if rows:
        rows_a = np.asarray(rows)
        lo_a = np.asarray(lo_u)
        hi_a = np.asarray(hi_u)
        dk, zk, tk = d[rows_a], z[rows_a], t[rows_a]

        def g_of(l1):
            l2 = _solve_lam2(dk, zk, l1, iters=22)
            mu_k = l1[:, None] * dk + l2[:, None]
            return np.sum(zk * (dk - tk[:, None]) / mu_k**2, axis=-1), l2

        g_lo, _ = g_of(lo_a)
        for _ in range(32):
            mid = 0.5 * (lo_a + hi_a)
            g_mid, _ = g_of(mid)
            same = np.sign(g_mid) == np.sign(g_lo)
            lo_a = np.where(same, mid, lo_a)
            g_lo = np.where(same, g_mid, g_lo)
            hi_a = np.where(same, hi_a, mid)
        l1_root = 0.5 * (lo_a + hi_a)
        l2_root = _solve_lam2(dk, zk, l1_root, iters=56)
        mu_root = l1_root[:, None] * dk + l2_root[:, None]
        vals = np.sum(zk / mu_root, axis=-1) ** 2
        ok = np.isfinite(vals)
        for k in range(rows_a.shape[0]):
            if not ok[k]:
                continue
            i = rows_a[k]
            if not found_any[i] or vals[k] > best_val[i]:
                found_any[i] = True
                best_val[i] = vals[k]
                best_l1[i] = l1_root[k]
                best_l2[i] = l2_root[k]
    return best_val, best_l1, best_l2, found_any


def _h_data(chan: ChannelRealization, p_d: float, rho: float):
    v = chan.h_li.conj().T @ chan.h_sd
    gram = chan.h_li.conj().T @ chan.h_li
    a = chan.h_ed.conj().T @ chan.h_se
    whitened = np.linalg.solve(np.eye(chan.m_t) + rho * p_d * gram, v)
    t_max = float(np.real(np.vdot(v, whitened)))
    return v, gram, a, max(t_max, 0.0)


def _zf_direction(v: np.ndarray, a: np.ndarray) -> tuple[float, np.ndarray]:
    """Projection of a onto the orthogonal complement of v; returns the
    squared residual norm and the normalized direction (or a null-space
    direction when the projector annihilates a)."""
    nv2 = float(np.real(np.vdot(v, v)))
    if nv2 < _TINY**2:
        resid = a.copy()
    else:
        resid = a - v * (np.vdot(v, a) / nv2)
    nr = np.linalg.norm(resid)
    if nr < _TINY:
        warnings.warn("jamming direction is useless: eavesdropper coupling lies "
                      "entirely along the self-interference direction")
        q = _any_orthogonal_unit(v / np.sqrt(nv2)) if nv2 >= _TINY**2 else _fallback_unit(a)
        return 0.0, q
    return float(nr**2), resid / nr


def _fallback_unit(a: np.ndarray) -> np.ndarray:
    e = np.zeros_like(a)
    e[0] = 1.0
    return e


def eve_coupling_constrained(
    chan: ChannelRealization, t: float, p_d: float, rho: float
) -> tuple[float, np.ndarray]:
    """Maximize |h_se^H Hed q|^2 over unit q subject to
    |h_sd^H H q|^2 / (1 + rho p_d q^H H^H H q) = t.

    Solved through the dual of the equivalent trace-constrained program:
    eigendecompose R = H^H h_sd h_sd^H H - t rho p_d H^H H, express
    q = U (l1 D + l2 I)^{-1} U^H a and pick the multiplier pair solving the
    two stationarity equations with the largest objective.  t = 0 reduces
    to zero forcing; t at the constraint's maximum pins q to the whitened
    matched filter.  Falls back to the sphere-grid oracle (logged) if no
    multiplier root is found.
    """
    v, gram, a, t_max = _h_data(chan, p_d, rho)
    if t < -1e-12 or t > t_max * (1.0 + 1e-9) + 1e-12:
        raise InfeasibleConstraintError(f"t={t} outside [0, {t_max}]")
    scale = max(t_max, 1.0)
    if t <= 1e-12 * scale:
        val, q = _zf_direction(v, a)
        return val, q
    if t >= t_max * (1.0 - 1e-12):
        q = np.linalg.solve(np.eye(chan.m_t) + rho * p_d * gram, v)
        q = q / np.linalg.norm(q)
        return float(abs(np.vdot(a, q)) ** 2), q

    r_mat = np.outer(v, v.conj()) - (t * rho * p_d) * gram
    dvals, u_basis = np.linalg.eigh(0.5 * (r_mat + r_mat.conj().T))
    dvals, u_basis = dvals[::-1].copy(), u_basis[:, ::-1]
    dvals = _perturb_repeated(dvals)
    b = u_basis.conj().T @ a
    z = np.abs(b) ** 2

    if chan.m_t == 2:
        val, s1 = _gain_m2(dvals[None, :], z[None, :], np.array([t]))
        if np.isfinite(val[0]):
            mods = np.sqrt(np.array([s1[0], 1.0 - s1[0]]))
            phases = np.where(np.abs(b) > _TINY, b / np.maximum(np.abs(b), _TINY), 1.0)
            q = u_basis @ (mods * phases)
            return float(val[0]), q / np.linalg.norm(q)
    else:
        vals, l1, l2, found = _dual_gain_scan(dvals[None, :], z[None, :], np.array([t]))
        if found[0]:
            mu = l1[0] * dvals + l2[0]
            qp = b / mu
            q = u_basis @ qp
            q = q / np.linalg.norm(q)
            t_achieved = float(
                abs(np.vdot(v, q)) ** 2 / (1.0 + rho * p_d * np.real(np.vdot(q, gram @ q)))
            )
            if abs(t_achieved - t) <= 1e-6 * max(1.0, t):
                return float(abs(np.vdot(a, q)) ** 2), q

    logger.warning("dual solver found no multiplier root at t=%.6g; using sphere-grid fallback", t)
    from .oracles import GridSpec, sphere_grid_max  # local import to avoid a cycle

    if chan.m_t > 3:
        raise RuntimeError("no dual root found and the grid fallback supports m_t <= 3 only")
    constraint = r_mat
    val, q = sphere_grid_max(
        lambda qs: np.abs(qs @ a.conj()) ** 2,
        chan.m_t,
        GridSpec(resolution=192 if chan.m_t == 2 else 48),
        constraint=constraint,
        level=t,
    )
    return float(val), q


def _coupling_profile(
    chan: ChannelRealization, ts: np.ndarray, p_d: float, rho: float
) -> tuple[np.ndarray, np.ndarray]:
    """Batched coupling gain over a grid of interference levels.

    Returns (values, ok); entries with ok False had no dual root (the
    caller simply skips those grid points).
    """
    v, gram, a, t_max = _h_data(chan, p_d, rho)
    ts = np.asarray(ts, dtype=float)
    vals = np.empty_like(ts)
    ok = np.ones(ts.shape, dtype=bool)

    lo_mask = ts <= 1e-12 * max(t_max, 1.0)
    hi_mask = ts >= t_max * (1.0 - 1e-12)
    mid_mask = ~(lo_mask | hi_mask)

    if np.any(lo_mask):
        zf_val, _ = _zf_direction(v, a)
        vals[lo_mask] = zf_val
    if np.any(hi_mask):
        q = np.linalg.solve(np.eye(chan.m_t) + rho * p_d * gram, v)
        q = q / np.linalg.norm(q)
        vals[hi_mask] = abs(np.vdot(a, q)) ** 2
    if np.any(mid_mask):
        tm = ts[mid_mask]
        r_stack = np.outer(v, v.conj())[None, :, :] - (tm * rho * p_d)[:, None, None] * gram[None, :, :]
        r_stack = 0.5 * (r_stack + np.conj(np.swapaxes(r_stack, -1, -2)))
        dv, ub = np.linalg.eigh(r_stack)
        dv, ub = dv[:, ::-1].copy(), ub[:, :, ::-1]
        dv = _perturb_repeated(dv)
        b = np.einsum("nij,i->nj", ub.conj(), a)
        z = np.abs(b) ** 2
        if chan.m_t == 2:
            mv, _ = _gain_m2(dv, z, tm)
            good = np.isfinite(mv)
        else:
            mv, _, _, good = _dual_gain_scan(dv, z, tm)
        vals[mid_mask] = np.where(good, mv, -np.inf)
        ok[mid_mask] = good
    return vals, ok


def jamming_fixed_rx(
    chan: ChannelRealization, r: np.ndarray, p_s: float, p_d: float, rho: float
) -> JammingSearch:
    """Best rank-1 jamming covariance for a fixed receive filter r.

    Golden-section over the received self-interference power, using the
    closed-form coupling gain; the ratio being maximized is quasi-concave
    in that variable.  The returned covariance always spends the full
    budget (excess power, if useless, is dumped orthogonally to both
    coupling directions).
    """
    v1 = chan.h_li.conj().T @ r
    a = chan.h_ed.conj().T @ chan.h_se
    n1_sq = float(np.real(np.vdot(v1, v1)))
    n2_sq = float(np.real(np.vdot(a, a)))
    gain_se = float(np.real(np.vdot(chan.h_se, chan.h_se)))
    hr2 = abs(np.vdot(r, chan.h_sd)) ** 2

    if n2_sq < _TINY**2 or p_d <= 0.0:
        # jamming cannot reach the eavesdropper: keep it away from ourselves
        q = _any_orthogonal_unit(v1 / np.sqrt(n1_sq)) if n1_sq > _TINY**2 else _fallback_unit(a)
        rep = secrecy_rate_general(chan, p_d * np.outer(q, q.conj()), r, p_s, rho)
        return JammingSearch(0.0, q, rep.secrecy, 1)
    if n1_sq < _TINY**2:
        q = a / np.sqrt(n2_sq)
        rep = secrecy_rate_general(chan, p_d * np.outer(q, q.conj()), r, p_s, rho)
        return JammingSearch(0.0, q, rep.secrecy, 1)

    pair = DirectionPair.from_vectors(v1, a)
    if np.sqrt(max(1.0 - pair.corr**2, 0.0)) < _ALIGN_TOL:
        warnings.warn("self- and eavesdropper-coupling directions are aligned; "
                      "jamming the eavesdropper necessarily self-interferes")

    t_hi = p_d * n1_sq

    def objective(t: float) -> float:
        frac = min(max(t / t_hi, 0.0), 1.0)
        g = 1.0 - (pair.corr * np.sqrt(1.0 - frac) - np.sqrt((1.0 - pair.corr**2) * frac)) ** 2
        jam = p_d * n2_sq * g / gain_se
        return (1.0 + p_s * hr2 / (1.0 + rho * t)) / (1.0 + p_s * gain_se / (1.0 + jam))

    t_star, _, evals = grid_then_golden(objective, 0.0, t_hi, n=65, tol=1e-8 * max(t_hi, 1.0))
    _, q = eve_coupling(pair, t_star / t_hi)
    rep = secrecy_rate_general(chan, p_d * np.outer(q, q.conj()), r, p_s, rho)
    return JammingSearch(float(t_star), q, rep.secrecy, evals)


def _power_only_design(
    chan: ChannelRealization, p_s: float, p_d: float, rho: float
) -> JammingSearch:
    """Single transmit antenna: the only freedom is the spent power."""
    q = np.ones(1, dtype=complex)
    q_outer = np.outer(q, q.conj())

    def rate_at(p: float) -> float:
        r = mmse_receiver_optimal(chan.h_li, p * q_outer, chan.h_sd, rho)
        return secrecy_rate_general(chan, p * q_outer, r, p_s, rho).secrecy

    p_star, _, evals = grid_then_golden(rate_at, 0.0, p_d, n=65, tol=1e-8 * max(p_d, 1.0))
    r = mmse_receiver_optimal(chan.h_li, p_star * q_outer, chan.h_sd, rho)
    rep = secrecy_rate_general(chan, p_star * q_outer, r, p_s, rho)
    t_star = float(
        abs(np.vdot(chan.h_li.conj().T @ chan.h_sd, q)) ** 2
        / (1.0 + rho * p_star * np.real(np.vdot(q, (chan.h_li.conj().T @ chan.h_li) @ q)))
    )
    return JammingSearch(t_star, q, rep.secrecy, evals, p_d_used=float(p_star))


def jamming_opt_rx(
    chan: ChannelRealization, p_s: float, p_d: float, rho: float
) -> JammingSearch:
    """Jointly optimal jamming direction and linear receiver.

    Searches the post-whitening self-interference level t on a two-stage
    dense grid (the constrained coupling gain is evaluated in batch),
    then a golden polish; the receiver is rebuilt from the winning
    covariance and the reported rate re-verified with the general
    evaluator.
    """
    if chan.m_t == 1:
        return _power_only_design(chan, p_s, p_d, rho)
    v, gram, a, t_max = _h_data(chan, p_d, rho)
    n_sd = float(np.real(np.vdot(chan.h_sd, chan.h_sd)))
    gain_se = float(np.real(np.vdot(chan.h_se, chan.h_se)))

    if rho * p_d == 0.0 or t_max <= _TINY:
        na = np.linalg.norm(a)
        q = a / na if na > _TINY else _fallback_unit(a)
        evals = 1
        t_star = float(abs(np.vdot(v, q)) ** 2 / (1.0 + rho * p_d * np.real(np.vdot(q, gram @ q))))
    else:
        def rate_of(ts: np.ndarray, hvals: np.ndarray) -> np.ndarray:
            legit = 1.0 + p_s * n_sd - rho * p_s * p_d * ts
            leak = 1.0 + p_s * gain_se / (1.0 + p_d * hvals / gain_se)
            return np.log2(np.maximum(legit, 1e-300) / leak)

        evals = 0
        lo, hi = 0.0, t_max
        t_star = 0.0
        points = 65 if chan.m_t == 2 else 33  # the dual scan dominates for m_t >= 3
        for _stage in range(3):
            ts = np.linspace(lo, hi, points)
            hvals, ok = _coupling_profile(chan, ts, p_d, rho)
            evals += ts.size
            rates = np.where(ok, rate_of(ts, hvals), -np.inf)
            i = int(np.argmax(rates))
            t_star = float(ts[i])
            lo = float(ts[max(i - 1, 0)])
            hi = float(ts[min(i + 1, ts.size - 1)])
        _, q = eve_coupling_constrained(chan, t_star, p_d, rho)

    q_cov = p_d * np.outer(q, q.conj())
    r = mmse_receiver_optimal(chan.h_li, q_cov, chan.h_sd, rho)
    rep = secrecy_rate_general(chan, q_cov, r, p_s, rho)
    return JammingSearch(float(t_star), q, rep.secrecy, evals)


def jamming_zf(
    chan: ChannelRealization, p_s: float, p_d: float, rho: float
):
    """Zero-forcing design: jam in the direction closest to the
    eavesdropper coupling inside the null space of the self-interference
    row h_sd^H H; the receiver then reduces to MRC."""
    from .config import JammingDesign

    if chan.m_t < 2:
        raise ValueError("zero forcing needs at least two transmit antennas")
    v = chan.h_li.conj().T @ chan.h_sd
    a = chan.h_ed.conj().T @ chan.h_se
    _, q = _zf_direction(v, a)
    r = mrc_receiver(chan.h_sd)
    rep = secrecy_rate_general(chan, p_d * np.outer(q, q.conj()), r, p_s, rho)
    return JammingDesign(q=q, p_d_used=p_d, p_s_used=p_s, r=r, rate=rep)


# ---------------------------------------------------------------------------
# Joint source/destination power allocation
# ---------------------------------------------------------------------------


def _best_ps_for_split(
    hr2: float, gain_se: float, ghat: float, g1: float, p_t: float
) -> tuple[float, float]:
    """Inner power allocation for the fixed-receiver joint problem.

    With the split fraction fixed, both SINR denominators are affine in
    p_s, so the derivative numerator of the ratio is an exact quadratic;
    its admissible roots plus the full-power endpoint are the only
    candidates.  g1 = rho n1^2 tau, ghat = n2^2 g(tau) / ||h_se||^2.
    Returns (p_s, ratio value).
    """
    pcap = 1.0 + g1 * p_t
    gcap = 1.0 + ghat * p_t

    def ratio(sig: float) -> float:
        b1 = pcap - g1 * sig
        b2 = gcap - ghat * sig
        return (1.0 + sig * hr2 / b1) / (1.0 + sig * gain_se / b2)

    def deriv_num(sig: float) -> float:
        b1 = pcap - g1 * sig
        b2 = gcap - ghat * sig
        num = (b1 + sig * hr2) * b2
        den = b1 * (b2 + sig * gain_se)
        dnum = (hr2 - g1) * b2 - ghat * (b1 + sig * hr2)
        dden = -g1 * (b2 + sig * gain_se) + (gain_se - ghat) * b1
        return dnum * den - num * dden

    w0 = deriv_num(0.0)
    wm = deriv_num(0.5 * p_t)
    wp = deriv_num(p_t)
    qa = 2.0 * (w0 - 2.0 * wm + wp) / (p_t * p_t)
    qb = (-3.0 * w0 + 4.0 * wm - wp) / p_t
    qc = w0
    candidates = [p_t]
    if abs(qa) > 1e-300:
        disc = qb * qb - 4.0 * qa * qc
        if disc >= 0.0:
            sq = np.sqrt(disc)
            for root in ((-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)):
                if 0.0 < root < p_t:
                    candidates.append(float(root))
    elif abs(qb) > 1e-300:
        root = -qc / qb
        if 0.0 < root < p_t:
            candidates.append(float(root))
    best = max(candidates, key=ratio)
    return best, ratio(best)


def joint_power_fixed_rx(
    chan: ChannelRealization, r: np.ndarray, p_t: float, rho: float
) -> tuple[float, JammingSearch]:
    """Joint source power / jamming design under a total budget, fixed
    receiver: outer 1-D search over the coupling split, inner closed-form
    power allocation.  Returns (p_s, search result); p_d = p_t - p_s."""
    if p_t <= 0.0:
        raise ValueError("p_t must be positive")
    v1 = chan.h_li.conj().T @ r
    a = chan.h_ed.conj().T @ chan.h_se
    n1_sq = float(np.real(np.vdot(v1, v1)))
    n2_sq = float(np.real(np.vdot(a, a)))
    gain_se = float(np.real(np.vdot(chan.h_se, chan.h_se)))
    hr2 = abs(np.vdot(r, chan.h_sd)) ** 2

    if n2_sq < _TINY**2 or n1_sq < _TINY**2:
        # no meaningful trade-off; give everything to the source
        q = _fallback_unit(a) if n2_sq < _TINY**2 else a / np.sqrt(n2_sq)
        rep = secrecy_rate_general(chan, np.zeros((chan.m_t, chan.m_t)), r, p_t, rho)
        return p_t, JammingSearch(0.0, q, rep.secrecy, 1)

    pair = DirectionPair.from_vectors(v1, a)
    corr = pair.corr

    def split_value(frac: float) -> float:
        g = 1.0 - (corr * np.sqrt(1.0 - frac) - np.sqrt((1.0 - corr**2) * frac)) ** 2
        _, val = _best_ps_for_split(hr2, gain_se, n2_sq * g / gain_se, rho * n1_sq * frac, p_t)
        return val

    frac_star, _, evals = grid_then_golden(split_value, 0.0, 1.0, n=65, tol=1e-8)
    g_star = 1.0 - (corr * np.sqrt(1.0 - frac_star) - np.sqrt((1.0 - corr**2) * frac_star)) ** 2
    p_s_star, _ = _best_ps_for_split(
        hr2, gain_se, n2_sq * g_star / gain_se, rho * n1_sq * frac_star, p_t
    )
    p_d_star = max(p_t - p_s_star, 0.0)
    _, q = eve_coupling(pair, frac_star)
    rep = secrecy_rate_general(chan, p_d_star * np.outer(q, q.conj()), r, p_s_star, rho)
    return p_s_star, JammingSearch(
        float(frac_star * p_d_star * n1_sq), q, rep.secrecy, evals
    )


def joint_power_opt_rx(
    chan: ChannelRealization, p_t: float, rho: float
) -> tuple[float, JammingSearch]:
    """Joint allocation with the optimal receiver: outer grid over the
    source power, inner full design.  Returns (p_s, search result)."""
    if p_t <= 0.0:
        raise ValueError("p_t must be positive")

    cache: dict[float, JammingSearch] = {}

    def value(p_s: float) -> float:
        p_s = min(max(p_s, 1e-9 * p_t), p_t)
        res = jamming_opt_rx(chan, p_s, p_t - p_s, rho)
        cache[p_s] = res
        return res.secrecy

    p_grid = np.linspace(p_t / 16.0, p_t, 16)
    vals = [value(p) for p in p_grid]
    i = int(np.argmax(vals))
    lo = p_grid[max(i - 1, 0)]
    hi = p_grid[min(i + 1, len(p_grid) - 1)]
    p_ref, f_ref, _ = golden_max(value, lo, hi, tol=1e-3 * p_t, max_iter=24)
    if f_ref >= vals[i]:
        p_star = min(max(p_ref, 1e-9 * p_t), p_t)
    else:
        p_star = float(p_grid[i])
    return p_star, cache[p_star]
