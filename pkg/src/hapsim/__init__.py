"""Link-level Monte Carlo sum-rate simulator for a relayed MIMO X network.

M aerial platforms serve N ground stations through a multi-antenna
decode-and-forward relay.  Channels are Rician (steering-vector
line-of-sight plus Rayleigh scattering) with inverse-square path loss;
receivers zero-force, and network capacity follows the two-hop min-cut with
the interference-alignment prefactor M*N/(M+N-1).
"""

from .capacity import (
    CapacityBreakdown,
    NetworkConfig,
    asymptotic_capacity,
    df_capacity,
    dof,
    hop_sum_rate,
    no_relay_baseline,
)
from .channel import (
    RicianLink,
    apply_path_loss,
    db_to_linear,
    los_channel,
    rayleigh_channel,
    rician_mix,
    synth_link,
)
from .geometry import (
    FAR_FIELD_FACTOR,
    LinkGeometry,
    ScenarioLayout,
    link_distances,
    min_hap_separation,
)
from .scenario import (
    DEFAULTS,
    Scenario,
    ScenarioError,
    dump_scenario,
    effective_mapping,
    load_scenario,
    scenario_from_mapping,
)
from .simulator import (
    RELAY_ALTITUDE_M,
    SNR_DB,
    SnrSweepResult,
    SumRateCurve,
    SweepSpec,
    TrialEnsemble,
    bootstrap_mean_ci,
    find_optimal_altitude,
    run_altitude_sweep,
    run_snr_sweep,
    trial_rng,
)
from .zfcore import (
    CONDITION_LIMIT,
    SingularChannelError,
    StreamSnr,
    projection_complement,
    zf_all_streams,
    zf_stream_snr,
)

__version__ = "0.1.0"

__all__ = [
    "CONDITION_LIMIT",
    "CapacityBreakdown",
    "DEFAULTS",
    "FAR_FIELD_FACTOR",
    "LinkGeometry",
    "NetworkConfig",
    "RELAY_ALTITUDE_M",
    "RicianLink",
    "SNR_DB",
    "Scenario",
    "ScenarioError",
    "ScenarioLayout",
    "SingularChannelError",
    "SnrSweepResult",
    "StreamSnr",
    "SumRateCurve",
    "SweepSpec",
    "TrialEnsemble",
    "apply_path_loss",
    "asymptotic_capacity",
    "bootstrap_mean_ci",
    "db_to_linear",
    "df_capacity",
    "dof",
    "dump_scenario",
    "effective_mapping",
    "find_optimal_altitude",
    "hop_sum_rate",
    "link_distances",
    "load_scenario",
    "los_channel",
    "min_hap_separation",
    "no_relay_baseline",
    "projection_complement",
    "rayleigh_channel",
    "rician_mix",
    "run_altitude_sweep",
    "run_snr_sweep",
    "scenario_from_mapping",
    "synth_link",
    "trial_rng",
    "zf_all_streams",
    "zf_stream_snr",
]
