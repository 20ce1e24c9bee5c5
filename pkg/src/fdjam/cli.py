"""Command-line surface: one-shot solves, preset sweeps and oracle checks."""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from . import oracles
from .channels import mix_seed, sample_channels
from .config import SystemConfig
from .experiments import (
    METHODS,
    PRESETS,
    ExperimentSpec,
    _instant_rate,
    _hd_vector,
    figure_preset,
    load_spec,
    run_experiment,
    write_csv,
)
from .jamming import eve_coupling, eve_coupling_constrained, jamming_opt_rx, DirectionPair
from .oracles import GridSpec, grid_power_search, mc_outage, psd_grid_search, sphere_grid_max
from .cdi import OutageParams, outage_probability
from .siso import ScalarChannels, optimal_jamming_power, rate_ratio


def _cmd_solve(args: argparse.Namespace) -> int:
    cfg = SystemConfig(
        m_t=args.mt, m_r=args.mr, m_e=args.me, rho=args.rho, p_t=10.0 ** (args.snr_db / 10.0)
    )
    spec = ExperimentSpec(methods=(args.method,), config=cfg, trials=1, seed=args.seed)
    chan = sample_channels(cfg, mix_seed(args.seed, 0x00C4A11, 0, 0, 0))
    hd_chans = _hd_vector(spec, 0, 0, cfg.m_total, cfg.sigma_s_sq)
    rate, pd_used = _instant_rate(args.method, spec, cfg, chan, hd_chans, cfg.p_t, cfg.rho)
    print(
        json.dumps(
            {
                "method": args.method,
                "snr_db": args.snr_db,
                "rho": cfg.rho,
                "secrecy_bits": rate,
                "p_d_used": pd_used,
                "seed": args.seed,
            },
            indent=2,
        )
    )
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    if args.preset:
        spec = figure_preset(args.preset)
    elif args.config:
        spec = load_spec(args.config)
    else:
        print("sweep needs --preset or --config", file=sys.stderr)
        return 2
    if args.trials is not None:
        spec = dataclasses.replace(spec, trials=args.trials)
    if args.seed is not None:
        spec = dataclasses.replace(spec, seed=args.seed)
    table = run_experiment(spec, threads=args.threads)
    if args.out:
        write_csv(table, args.out, timing=args.timing)
        print(f"wrote {len(table.rows)} rows to {args.out}")
    else:
        for row in table.rows:
            print(
                f"{row.method:28s} {row.sweep_var}={row.sweep_value:<8g} "
                f"rate={row.mean_rate:.4f} +- {row.stderr:.4f} bits "
                f"(pd={row.mean_pd_used:.3g})"
            )
    if not table.valid:
        print(f"warning: {table.failures}/{table.attempted} solver cells failed", file=sys.stderr)
        return 1
    return 0


def _check_gt(instances: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        c1 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        c2 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        pair = DirectionPair.from_vectors(c1, c2)
        for t in rng.uniform(0.0, 1.0, 5):
            val, _ = eve_coupling(pair, t)
            ref, _ = sphere_grid_max(
                lambda qs: np.abs(qs @ pair.eve_dir.conj()) ** 2,
                2,
                GridSpec(resolution=256),
                constraint=np.outer(pair.self_dir, pair.self_dir.conj()),
                level=float(t),
            )
            worst = max(worst, abs(val - ref))
    return worst


def _check_ht(instances: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    cfg = SystemConfig()
    worst = 0.0
    p_d, rho = 5.0, 0.5
    for k in range(instances):
        chan = sample_channels(cfg, mix_seed(seed, k))
        v = chan.h_li.conj().T @ chan.h_sd
        gram = chan.h_li.conj().T @ chan.h_li
        a = chan.h_ed.conj().T @ chan.h_se
        t_max = float(np.real(np.vdot(v, np.linalg.solve(np.eye(2) + rho * p_d * gram, v))))
        for frac in rng.uniform(0.05, 0.95, 4):
            t = float(frac * t_max)
            val, _ = eve_coupling_constrained(chan, t, p_d, rho)
            ref, _ = sphere_grid_max(
                lambda qs: np.abs(qs @ a.conj()) ** 2,
                2,
                GridSpec(resolution=256),
                constraint=np.outer(v, v.conj()) - t * rho * p_d * gram,
                level=t,
            )
            worst = max(worst, abs(val - ref))
    return worst


def _check_rank1(instances: int, seed: int) -> float:
    cfg = SystemConfig()
    worst = 0.0
    for k in range(instances):
        chan = sample_channels(cfg, mix_seed(seed, 7, k))
        res = jamming_opt_rx(chan, 5.0, 5.0, 0.5)
        ref, _ = psd_grid_search(chan, 5.0, 5.0, 0.5, GridSpec(resolution=24, power_steps=21))
        worst = max(worst, ref - res.secrecy)
    return worst


def _check_outage(instances: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        params = OutageParams(
            float(rng.uniform(0.3, 5.0)),
            float(rng.uniform(0.3, 5.0)),
            int(rng.integers(1, 4)),
            int(rng.integers(1, 4)),
        )
        closed = outage_probability(params)
        est, se = mc_outage(params, 200000, int(rng.integers(1 << 31)))
        worst = max(worst, abs(closed - est) - 3.0 * se)
    return worst


def _check_siso(instances: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        ch = ScalarChannels(*np.maximum(rng.exponential(1.0, 4), 1e-6))
        p_s = float(10.0 ** rng.uniform(0.0, 2.0))
        p_d_max = float(10.0 ** rng.uniform(0.0, 2.0))
        rho = float(rng.uniform(0.0, 1.0))
        sol = optimal_jamming_power(ch, p_s, rho, p_d_max)
        _, ref = grid_power_search(lambda p: rate_ratio(ch, p_s, rho, p), 0.0, p_d_max, 10001)
        worst = max(worst, ref - sol.objective)
    return worst


_CHECKS = {
    "gt": (_check_gt, 1e-3, "closed-form coupling gain vs constrained sphere grid"),
    "ht": (_check_ht, 1e-3, "dual-system coupling gain vs constrained sphere grid"),
    "rank1": (_check_rank1, 1e-3, "rank-1 design vs full-covariance grid"),
    "outage": (_check_outage, 0.0, "closed-form outage probability vs Monte Carlo (3 sigma)"),
    "siso": (_check_siso, 1e-6, "closed-form jamming power vs dense power grid"),
}


def _cmd_oracle(args: argparse.Namespace) -> int:
    fn, tol, desc = _CHECKS[args.check]
    worst = fn(args.instances, args.seed)
    ok = worst <= tol
    print(f"{args.check}: {desc}")
    print(f"  instances={args.instances} worst deviation={worst:.3e} tolerance={tol:g} "
          f"-> {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="fdjam",
        description="Secrecy-rate solvers and Monte Carlo sweeps for a full-duplex jamming receiver.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one channel realization and print a JSON report")
    p_solve.add_argument("--method", choices=[m for m in METHODS if not m.startswith("cdi")],
                         default="fd_opt_rx")
    p_solve.add_argument("--snr-db", type=float, default=15.0)
    p_solve.add_argument("--rho", type=float, default=0.5)
    p_solve.add_argument("--mt", type=int, default=2)
    p_solve.add_argument("--mr", type=int, default=2)
    p_solve.add_argument("--me", type=int, default=2)
    p_solve.add_argument("--seed", type=int, default=1)
    p_solve.set_defaults(func=_cmd_solve)

    p_sweep = sub.add_parser("sweep", help="run a preset or configured sweep")
    p_sweep.add_argument("--preset", choices=PRESETS)
    p_sweep.add_argument("--config", help="JSON file mirroring ExperimentSpec fields")
    p_sweep.add_argument("--trials", type=int)
    p_sweep.add_argument("--seed", type=int)
    p_sweep.add_argument("--out", help="CSV output path")
    p_sweep.add_argument("--threads", type=int, default=None,
                         help=f"worker processes (default: $FD_SECRECY_THREADS or 1)")
    p_sweep.add_argument("--timing", action="store_true",
                         help="record wall-clock times in the CSV (breaks byte determinism)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_oracle = sub.add_parser("oracle", help="cross-check a solver against its brute-force oracle")
    p_oracle.add_argument("--check", choices=sorted(_CHECKS), required=True)
    p_oracle.add_argument("--instances", type=int, default=20)
    p_oracle.add_argument("--seed", type=int, default=1)
    p_oracle.set_defaults(func=_cmd_oracle)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
