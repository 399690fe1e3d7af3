"""Reference pulse attack analysis for LLO-CVQKD."""

from .attack import (
    AttackReport,
    AttackState,
    attack_report,
    critical_distance,
    noise_tolerance,
    null_key_distance,
    post_attack_budget,
)
from .countermeasure import MonitorVerdict, amplitude_monitor, conservative_key_rate
from .errors import ConfigError, EstimationError, NumericalError, ParameterError
from .keyrate import EigenSet, KeyRateReport, g_entropy, holevo_bound, key_rate, mutual_information
from .montecarlo import PulseBatch, estimate_excess_noise, simulate_batch
from .noise import NoiseBudget, drift_variance, phase_error_variance, solve_noise_budget
from .params import (
    AttackScenario,
    ModelOptions,
    SystemParams,
    effective_v,
    load_config,
    preset,
    transmittance,
)

__version__ = "0.1.0"
