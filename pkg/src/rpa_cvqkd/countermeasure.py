"""Detection and mitigation of the reference pulse attack."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .attack import attack_report
from .montecarlo import PulseBatch
from .noise import solve_noise_budget
from .params import DEFAULT_OPTIONS, AttackScenario, ModelOptions, SystemParams, transmittance

MIN_MONITOR_SAMPLES = 1000
DEFAULT_THRESHOLD_SIGMA = 5.0


@dataclass(frozen=True)
class MonitorVerdict:
    mean_ratio: float
    expected_ratio: float
    z_score: float
    alarm: bool
    threshold_sigma: float
    n: int
    sufficient_data: bool = True

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def rician_mean(nu: float, sigma: float) -> float:
    """Mean of |X + iP| for independent N(nu cos, sigma^2), N(nu sin, sigma^2)."""
    if sigma == 0.0:
        return nu
    x = nu * nu / (4.0 * sigma * sigma)
    # sigma*sqrt(pi/2)*L_{1/2}(-nu^2/(2 sigma^2)), written with scaled Bessels
    lag = (1.0 + 2.0 * x) * special.i0e(x) + 2.0 * x * special.i1e(x)
    return sigma * math.sqrt(math.pi / 2.0) * float(lag)


def amplitude_monitor(
    batch: PulseBatch,
    params: SystemParams,
    scenario: AttackScenario,
    threshold_sigma: float = DEFAULT_THRESHOLD_SIGMA,
) -> MonitorVerdict:
    """Compare the received reference amplitude with what T_std predicts.

    Bob knows E_Ref (announced by Alice), the signal transmittance from
    parameter estimation and his own noise level, so he can predict the
    mean measured amplitude. The noise floor biases |X + iP| upwards; the
    expectation includes that bias exactly (Rician mean) rather than
    comparing against the bare sqrt(T_std*eta/2)*E_Ref.
    """
    n = batch.n
    if n < MIN_MONITOR_SAMPLES:
        return MonitorVerdict(
            math.nan, math.nan, math.nan, False, threshold_sigma, n, sufficient_data=False
        )
    amp = np.hypot(batch.x_ref, batch.p_ref) / batch.e_ref
    mean_ratio = float(amp.mean())
    se = float(amp.std(ddof=1)) / math.sqrt(n)

    t_std = transmittance(params.alpha_std, scenario.length_km)
    k = math.sqrt(t_std * params.eta / 2.0)
    chi_t = solve_noise_budget(params, scenario.length_km).chi_total
    sigma = k * math.sqrt(chi_t + 1.0)
    expected = rician_mean(k * batch.e_ref, sigma) / batch.e_ref

    z = (mean_ratio - expected) / se if se > 0 else math.copysign(math.inf, mean_ratio - expected)
    return MonitorVerdict(
        mean_ratio=mean_ratio,
        expected_ratio=expected,
        z_score=z,
        alarm=abs(z) > threshold_sigma,
        threshold_sigma=threshold_sigma,
        n=n,
    )


def conservative_key_rate(
    params: SystemParams,
    scenario: AttackScenario,
    options: ModelOptions = DEFAULT_OPTIONS,
) -> float:
    """Key rate with Eve's information bounded on the worst-case noise
    budget (tolerance counted in full): beta*I_AB - chi_BE^actual."""
    return attack_report(params, scenario, options).truly_secure
