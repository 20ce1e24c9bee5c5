"""Seeded Monte Carlo experiment runner, figure presets and CSV output.

Determinism contract: the channel realization of trial k depends only on
(spec.seed, antenna split index, k), never on the sweep point, the method
list or the worker count; aggregation always reduces in trial order.
"""
from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .cdi import CdiSpec, ergodic_power_split, ergodic_rate_mc, outage_power_split, outage_secrecy_rate
from .channels import mix_seed, mmse_receiver_fixed, sample_channels
from .config import ChannelRealization, DegenerateChannelError, SystemConfig
from .dcprog import dc_solve
from .jamming import jamming_fixed_rx, jamming_opt_rx, jamming_zf, joint_power_opt_rx
from .rates import secrecy_rate_hd
from .siso import ScalarChannels, joint_power_split, optimal_jamming_power

METHODS = (
    "hd",
    "fd_equal_split",
    "fd_opt_pa",
    "fd_fixed_mmse",
    "fd_opt_rx",
    "fd_joint_pa",
    "fd_zf",
    "fd_dc_mmse_eve",
    "cdi_ergodic",
    "cdi_outage",
)
PRESETS = ("fig3", "fig4", "fig5", "fig6", "fig7", "fig8")
KINDS = ("instant", "ergodic", "outage")
CSV_HEADER = "method,sweep_var,sweep_value,trials,mean_rate_bits,stderr_bits,mean_pd_used,wall_ms"

_TAG_CHAN = 0x00C4A11
_TAG_HD = 0x00DD001
_TAG_ERG = 0x00E6000
THREADS_ENV = "FD_SECRECY_THREADS"


@dataclass(frozen=True)
class SweepAxis:
    """Swept variable: either total SNR in dB or the LI coefficient."""

    variable: str
    lo: float
    hi: float
    steps: int

    def __post_init__(self) -> None:
        if self.variable not in ("snr_db", "rho"):
            raise ValueError("sweep variable must be 'snr_db' or 'rho'")
        if self.steps < 1 or self.hi < self.lo:
            raise ValueError("bad sweep axis")

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


@dataclass(frozen=True)
class ExperimentSpec:
    """Declarative description of one sweep experiment."""

    preset: str = "custom"
    methods: tuple[str, ...] = ("hd",)
    sweep: SweepAxis = SweepAxis("snr_db", 0.0, 20.0, 5)
    trials: int = 500
    seed: int = 20240
    config: SystemConfig = field(default_factory=SystemConfig)
    kind: str = "instant"
    epsilon: float = 0.1
    antenna_splits: tuple[tuple[int, int], ...] | None = None  # (m_r, m_t) variants
    ergodic_draws: int = 2000

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}")

    def labels(self) -> list[tuple[str, int, int]]:
        """(row label, m_r, m_t) per method/antenna-split combination."""
        if self.antenna_splits is None:
            return [(m, self.config.m_r, self.config.m_t) for m in self.methods]
        out = []
        for m_r, m_t in self.antenna_splits:
            for m in self.methods:
                out.append((f"{m}[mr{m_r}mt{m_t}]", m_r, m_t))
        return out


@dataclass(frozen=True)
class ResultRow:
    method: str
    sweep_var: str
    sweep_value: float
    trials: int
    mean_rate: float
    stderr: float
    mean_pd_used: float
    wall_ms: float


@dataclass
class ResultTable:
    rows: list[ResultRow]
    failures: int = 0
    attempted: int = 0

    @property
    def valid(self) -> bool:
        """False when more than 1% of solver cells failed."""
        return self.attempted == 0 or self.failures <= 0.01 * self.attempted

    def get(self, method: str, sweep_value: float) -> ResultRow:
        for row in self.rows:
            if row.method == method and np.isclose(row.sweep_value, sweep_value, atol=1e-9):
                return row
        raise KeyError(f"no row ({method!r}, {sweep_value})")

    def methods(self) -> list[str]:
        return sorted({row.method for row in self.rows})


def _siso_scalars(chan: ChannelRealization) -> ScalarChannels:
    return ScalarChannels(
        g_sd=float(abs(chan.h_sd[0]) ** 2),
        g_se=float(abs(chan.h_se[0]) ** 2),
        g_ed=float(abs(chan.h_ed[0, 0]) ** 2),
        g_li=float(abs(chan.h_li[0, 0]) ** 2),
    )


def _hd_vector(
    spec: ExperimentSpec, split: int, trial: int, m_total: int, sigma_s_sq: float = 1.0
) -> tuple[np.ndarray, np.ndarray]:
    """Channels for the half-duplex baseline: all m_total antennas receive,
    and the eavesdropper matches the receive array size (the M_e = M_r
    convention applied to the HD system)."""
    rng = np.random.default_rng(mix_seed(spec.seed, _TAG_HD, split, trial))
    h_hd = (rng.standard_normal(m_total) + 1j * rng.standard_normal(m_total)) / np.sqrt(2.0)
    h_se = np.sqrt(sigma_s_sq / 2.0) * (
        rng.standard_normal(m_total) + 1j * rng.standard_normal(m_total)
    )
    return h_hd, h_se


def _instant_rate(
    method: str,
    spec: ExperimentSpec,
    cfg: SystemConfig,
    chan: ChannelRealization,
    hd_chans: tuple[np.ndarray, np.ndarray],
    p_t: float,
    rho: float,
) -> tuple[float, float]:
    """Secrecy rate and spent jamming power for one trial of one method."""
    half = 0.5 * p_t
    if method == "hd":
        return secrecy_rate_hd(hd_chans[0], hd_chans[1], p_t).secrecy, 0.0
    if method == "fd_equal_split":
        if cfg.m_t == 1 and cfg.m_r == 1:
            sol = optimal_jamming_power(_siso_scalars(chan), half, rho, half)
            return max(0.0, float(np.log2(sol.objective))), sol.p_d_star
        res = jamming_opt_rx(chan, half, half, rho)
        return res.secrecy, half if res.p_d_used is None else res.p_d_used
    if method == "fd_opt_pa":
        if cfg.m_t != 1 or cfg.m_r != 1:
            raise ValueError("fd_opt_pa is the single-antenna allocator")
        alpha, rate = joint_power_split(_siso_scalars(chan), rho, p_t)
        return rate, (1.0 - alpha) * p_t
    if method == "fd_fixed_mmse":
        r = mmse_receiver_fixed(chan.h_li, chan.h_sd, rho)
        res = jamming_fixed_rx(chan, r, half, half, rho)
        return res.secrecy, half if res.p_d_used is None else res.p_d_used
    if method == "fd_opt_rx":
        res = jamming_opt_rx(chan, half, half, rho)
        return res.secrecy, half if res.p_d_used is None else res.p_d_used
    if method == "fd_joint_pa":
        p_s, res = joint_power_opt_rx(chan, p_t, rho)
        spent = (p_t - p_s) if res.p_d_used is None else res.p_d_used
        return res.secrecy, spent
    if method == "fd_zf":
        design = jamming_zf(chan, half, half, rho)
        return design.rate.secrecy, design.p_d_used
    if method == "fd_dc_mmse_eve":
        q_cov, rep, _ = dc_solve(chan, half, half, rho)
        return rep.secrecy, float(np.real(np.trace(q_cov)))
    raise ValueError(f"method {method!r} not available for instantaneous-CSI sweeps")


def _ergodic_rate(
    method: str,
    spec: ExperimentSpec,
    cfg: SystemConfig,
    chan: ChannelRealization,
    hd_chans: tuple[np.ndarray, np.ndarray],
    p_t: float,
    split: int,
    trial: int,
) -> tuple[float, float]:
    draws = spec.ergodic_draws
    inner_seed = mix_seed(spec.seed, _TAG_ERG, split, trial)
    if method == "hd":
        rng = np.random.default_rng(inner_seed)
        h_se = np.sqrt(cfg.sigma_s_sq / 2.0) * (
            rng.standard_normal((draws, cfg.m_total)) + 1j * rng.standard_normal((draws, cfg.m_total))
        )
        legit = np.log2(1.0 + p_t * np.linalg.norm(hd_chans[0]) ** 2)
        leak = np.log2(1.0 + p_t * np.linalg.norm(h_se, axis=1) ** 2)
        return float(np.maximum(0.0, legit - leak).mean()), 0.0
    if method == "cdi_ergodic":
        p_s, p_d, _ = ergodic_power_split(cfg, chan.h_sd, p_t=p_t)
        mean, _ = ergodic_rate_mc(cfg, chan.h_sd, p_s, p_d, draws, inner_seed)
        return mean, p_d
    raise ValueError(f"method {method!r} not available for ergodic sweeps")


def _outage_rate(
    method: str,
    spec: ExperimentSpec,
    cfg: SystemConfig,
    chan: ChannelRealization,
    hd_chans: tuple[np.ndarray, np.ndarray],
    p_t: float,
) -> tuple[float, float]:
    cdi = CdiSpec(cfg, spec.epsilon, chan.h_sd, chan.h_li)
    if method == "hd":
        hd_cdi = CdiSpec(replace(cfg, m_e=cfg.m_total), spec.epsilon, hd_chans[0], chan.h_li)
        return outage_secrecy_rate(hd_cdi, p_t, 0.0), 0.0
    if method == "fd_equal_split":
        return outage_secrecy_rate(cdi, 0.5 * p_t, 0.5 * p_t), 0.5 * p_t
    if method == "cdi_outage":
        _, p_d, rate = outage_power_split(cdi, p_t)
        return rate, p_d
    raise ValueError(f"method {method!r} not available for outage sweeps")


def _run_block(args: tuple) -> tuple:
    """Worker: evaluate all method labels for one sweep point and a block
    of trials.  Returns (point_index, lo, rates, pd_used, fails, wall_ms)."""
    spec, point_index, lo, hi = args
    value = float(spec.sweep.values()[point_index])
    p_t = 10.0 ** (value / 10.0) if spec.sweep.variable == "snr_db" else spec.config.p_t
    rho = value if spec.sweep.variable == "rho" else spec.config.rho

    labels = spec.labels()
    n = hi - lo
    rates = np.full((n, len(labels)), np.nan)
    pd_used = np.full((n, len(labels)), np.nan)
    wall = np.zeros(len(labels))
    fails = 0

    splits = spec.antenna_splits or ((spec.config.m_r, spec.config.m_t),)
    for b, trial in enumerate(range(lo, hi)):
        col = 0
        for s_idx, (m_r, m_t) in enumerate(splits):
            cfg = replace(spec.config, m_r=m_r, m_t=m_t, rho=rho, p_t=p_t)
            chan = None
            for attempt in range(8):
                try:
                    chan = sample_channels(cfg, mix_seed(spec.seed, _TAG_CHAN, s_idx, trial, attempt))
                    break
                except DegenerateChannelError:
                    continue
            hd_chans = _hd_vector(spec, s_idx, trial, cfg.m_total, cfg.sigma_s_sq)
            for method in spec.methods:
                t0 = time.perf_counter()
                try:
                    if chan is None:
                        raise DegenerateChannelError("no usable channel draw")
                    if spec.kind == "instant":
                        rate, spent = _instant_rate(method, spec, cfg, chan, hd_chans, p_t, rho)
                    elif spec.kind == "ergodic":
                        rate, spent = _ergodic_rate(method, spec, cfg, chan, hd_chans, p_t, s_idx, trial)
                    else:
                        rate, spent = _outage_rate(method, spec, cfg, chan, hd_chans, p_t)
                    rates[b, col] = rate
                    pd_used[b, col] = spent
                except Exception:
                    fails += 1
                wall[col] += (time.perf_counter() - t0) * 1e3
                col += 1
    return point_index, lo, rates, pd_used, fails, wall


def resolve_threads(threads: int | None = None) -> int:
    """Worker-pool size: explicit argument, else the FD_SECRECY_THREADS
    cap, else 1."""
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return 1


def run_experiment(spec: ExperimentSpec, threads: int | None = None) -> ResultTable:
    """Run every (method, sweep point) cell of the experiment.

    Identical (spec, seed) produce identical tables for any worker count:
    trials use slot-indexed seeds and the reduction is in trial order.
    Failed solver cells are excluded from the averages and counted; a run
    with more than 1% failures is flagged invalid.
    """
    n_threads = resolve_threads(threads)
    values = spec.sweep.values()
    labels = spec.labels()

    block = max(8, spec.trials // max(1, 4 * n_threads))
    tasks = []
    for p_idx in range(len(values)):
        for lo in range(0, spec.trials, block):
            tasks.append((spec, p_idx, lo, min(lo + block, spec.trials)))

    rates = np.full((len(values), spec.trials, len(labels)), np.nan)
    pd_used = np.full((len(values), spec.trials, len(labels)), np.nan)
    wall = np.zeros((len(values), len(labels)))
    failures = 0

    if n_threads == 1:
        results = map(_run_block, tasks)
    else:
        pool = ProcessPoolExecutor(max_workers=n_threads)
        results = pool.map(_run_block, tasks)
    for p_idx, lo, r_blk, p_blk, fails, w_blk in results:
        rates[p_idx, lo : lo + r_blk.shape[0]] = r_blk
        pd_used[p_idx, lo : lo + p_blk.shape[0]] = p_blk
        wall[p_idx] += w_blk
        failures += fails
    if n_threads > 1:
        pool.shutdown()

    rows = []
    for c, (label, _, _) in enumerate(labels):
        for p_idx, value in enumerate(values):
            col = rates[p_idx, :, c]
            good = np.isfinite(col)
            n_good = int(good.sum())
            mean = float(col[good].mean()) if n_good else float("nan")
            stderr = (
                float(col[good].std(ddof=1) / np.sqrt(n_good)) if n_good > 1 else 0.0
            )
            mean_pd = float(pd_used[p_idx, good, c].mean()) if n_good else float("nan")
            rows.append(
                ResultRow(
                    method=label,
                    sweep_var=spec.sweep.variable,
                    sweep_value=float(value),
                    trials=n_good,
                    mean_rate=mean,
                    stderr=stderr,
                    mean_pd_used=mean_pd,
                    wall_ms=float(wall[p_idx, c]),
                )
            )
    rows.sort(key=lambda r: (r.method, r.sweep_value))
    return ResultTable(rows, failures=failures, attempted=len(values) * spec.trials * len(labels))


def figure_preset(name: str, trials: int = 500, seed: int = 20240) -> ExperimentSpec:
    """Preset sweeps mirroring the simulator's standard experiments.

    fig3: single-antenna terminals, secrecy rate vs total SNR.
    fig4: 2x2 destination, rate vs SNR for fixed/optimal receivers, joint
          allocation and an MMSE-combining eavesdropper.
    fig5: rate vs the LI coefficient at 15 dB.
    fig6: ergodic rate vs SNR with eavesdropper statistics only.
    fig7: 10%-outage rate vs SNR with eavesdropper statistics only.
    fig8: antenna-split comparison (4 antennas total, 4-antenna
          eavesdropper) vs SNR.
    """
    if name == "fig3":
        return ExperimentSpec(
            preset=name,
            methods=("hd", "fd_equal_split", "fd_opt_pa"),
            sweep=SweepAxis("snr_db", 0.0, 60.0, 13),
            trials=trials,
            seed=seed,
            config=SystemConfig(m_t=1, m_r=1, m_e=1),
        )
    if name == "fig4":
        # fd_dc_mmse_eve is deliberately not in the default list: the DC
        # iteration needs hundreds of majorization steps above ~30 dB and
        # would dominate the sweep; run it via --config when wanted.
        return ExperimentSpec(
            preset=name,
            methods=("hd", "fd_fixed_mmse", "fd_opt_rx", "fd_joint_pa"),
            sweep=SweepAxis("snr_db", 0.0, 40.0, 9),
            trials=trials,
            seed=seed,
            config=SystemConfig(),
        )
    if name == "fig5":
        return ExperimentSpec(
            preset=name,
            methods=("hd", "fd_fixed_mmse", "fd_opt_rx", "fd_zf"),
            sweep=SweepAxis("rho", 0.0, 0.9, 10),
            trials=trials,
            seed=seed,
            config=SystemConfig(p_t=10.0**1.5),
        )
    if name == "fig6":
        return ExperimentSpec(
            preset=name,
            methods=("hd", "cdi_ergodic"),
            sweep=SweepAxis("snr_db", 0.0, 40.0, 9),
            trials=trials,
            seed=seed,
            config=SystemConfig(),
            kind="ergodic",
        )
    if name == "fig7":
        return ExperimentSpec(
            preset=name,
            methods=("hd", "fd_equal_split", "cdi_outage"),
            sweep=SweepAxis("snr_db", 0.0, 40.0, 9),
            trials=trials,
            seed=seed,
            config=SystemConfig(),
            kind="outage",
            epsilon=0.1,
        )
    if name == "fig8":
        return ExperimentSpec(
            preset=name,
            methods=("fd_opt_rx",),
            sweep=SweepAxis("snr_db", 0.0, 30.0, 7),
            trials=trials,
            seed=seed,
            config=SystemConfig(m_e=4),
            antenna_splits=((1, 3), (2, 2), (3, 1)),
        )
    raise ValueError(f"unknown preset {name!r}; choose from {PRESETS}")


def spec_from_dict(data: dict) -> ExperimentSpec:
    """Build a spec from the flat JSON config format (CLI --config)."""
    base = figure_preset(data["preset"]) if data.get("preset", "custom") != "custom" else ExperimentSpec()
    kwargs: dict = {}
    if "methods" in data:
        kwargs["methods"] = tuple(data["methods"])
    if "sweep" in data:
        s = data["sweep"]
        kwargs["sweep"] = SweepAxis(s["variable"], float(s["lo"]), float(s["hi"]), int(s["steps"]))
    for key in ("trials", "seed", "kind", "epsilon", "ergodic_draws", "preset"):
        if key in data:
            kwargs[key] = data[key]
    if "antenna_splits" in data and data["antenna_splits"] is not None:
        kwargs["antenna_splits"] = tuple((int(a), int(b)) for a, b in data["antenna_splits"])
    if "config" in data:
        kwargs["config"] = replace(base.config, **data["config"])
    return replace(base, **kwargs)


def load_spec(path: str) -> ExperimentSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return spec_from_dict(json.load(fh))


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def write_csv(table: ResultTable, path: str, timing: bool = False) -> None:
    """Write the table with 6-significant-digit values, UTF-8,
    newline-terminated.  wall_ms is zeroed unless timing=True so that
    repeated runs of the same seed produce byte-identical files."""
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            for row in table.rows:
                wall = row.wall_ms if timing else 0.0
                fh.write(
                    ",".join(
                        (
                            row.method,
                            row.sweep_var,
                            _fmt(row.sweep_value),
                            str(row.trials),
                            _fmt(row.mean_rate),
                            _fmt(row.stderr),
                            _fmt(row.mean_pd_used),
                            _fmt(wall),
                        )
                    )
                    + "\n"
                )
    except OSError as exc:
        raise OSError(f"cannot write results to {path!r}: {exc}") from exc


def load_csv(path: str) -> list[dict]:
    """Parse a results CSV back into dict rows (floats re-parsed)."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        rows = []
        for line in fh:
            parts = line.strip().split(",")
            row: dict = dict(zip(header, parts))
            for key in ("sweep_value", "mean_rate_bits", "stderr_bits", "mean_pd_used", "wall_ms"):
                row[key] = float(row[key])
            row["trials"] = int(row["trials"])
            rows.append(row)
    return rows
