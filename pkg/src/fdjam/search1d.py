"""Shared 1-D maximization helpers (dense grid + golden-section refinement)."""
from __future__ import annotations

from typing import Callable

import numpy as np

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


def golden_max(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-8,
    max_iter: int = 200,
) -> tuple[float, float, int]:
    """Golden-section maximization of a unimodal f on [lo, hi].

    Returns (argmax, value, evaluations).  On flat regions it converges to
    some point of the plateau, which is fine for quasi-concave objectives.
    """
    a, b = float(lo), float(hi)
    if b < a:
        a, b = b, a
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    best_x, best_f = (c, fc) if fc >= fd else (d, fd)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
        evals += 1
        x, fx = (c, fc) if fc >= fd else (d, fd)
        if fx > best_f:
            best_x, best_f = x, fx
    return best_x, best_f, evals


def grid_then_golden(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    n: int = 65,
    tol: float = 1e-8,
) -> tuple[float, float, int]:
    """Dense grid scan followed by golden refinement around the best cell.

    The grid guards against multi-modal or flat objectives where pure
    golden-section could lock onto the wrong region.
    """
    lo, hi = float(lo), float(hi)
    if hi <= lo:
        return lo, f(lo), 1
    xs = np.linspace(lo, hi, n)
    vals = [f(x) for x in xs]
    i = int(np.argmax(vals))
    evals = n
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, n - 1)]
    x_g, f_g, ev = golden_max(f, a, b, tol=tol)
    evals += ev
    if f_g >= vals[i]:
        return x_g, f_g, evals
    return float(xs[i]), float(vals[i]), evals
