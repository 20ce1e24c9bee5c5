"""Secrecy-rate optimization for a full-duplex jamming receiver.

A destination that receives and jams at the same time trades residual
loop interference against eavesdropper degradation.  This package holds
the closed-form and search-based designs (power control, rank-1 jamming
covariances, distribution-only designs, difference-of-convex iterations),
brute-force oracles to validate them, and a seeded Monte Carlo sweep
runner with CSV output.
"""

from .config import (
    ChannelRealization,
    DegenerateChannelError,
    InfeasibleConstraintError,
    InvalidCovarianceError,
    JammingDesign,
    RateReport,
    SystemConfig,
)
from .channels import (
    mix_seed,
    mmse_receiver_fixed,
    mmse_receiver_optimal,
    mrc_receiver,
    sample_channels,
)
from .rates import secrecy_rate_general, secrecy_rate_hd, secrecy_rate_mmse_pair
from .siso import (
    PdSolution,
    ScalarChannels,
    high_snr_limit,
    jamming_power_is_monotone,
    joint_power_split,
    optimal_jamming_power,
    positive_secrecy_feasible,
    rate_ratio,
)
from .jamming import (
    DirectionPair,
    JammingSearch,
    eve_coupling,
    eve_coupling_constrained,
    jamming_fixed_rx,
    jamming_opt_rx,
    jamming_zf,
    joint_power_fixed_rx,
    joint_power_opt_rx,
)
from .cdi import (
    CdiSpec,
    OutageParams,
    chi_sq_jamming_sample,
    ergodic_power_split,
    ergodic_rate_mc,
    null_basis,
    outage_power_split,
    outage_probability,
    outage_secrecy_rate,
)
from .dcprog import DcState, dc_solve, dc_step, mmse_pair_objective
from .oracles import GridSpec, grid_power_search, mc_outage, psd_grid_search, sphere_grid_max
from .experiments import (
    ExperimentSpec,
    ResultRow,
    ResultTable,
    SweepAxis,
    figure_preset,
    load_csv,
    load_spec,
    run_experiment,
    write_csv,
)

__version__ = "0.1.0"
