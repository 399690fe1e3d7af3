"""The reference pulse attack.

Eve routes the reference pulses through a lower-loss fibre so that they
arrive brighter, which lowers the phase-estimation noise Bob sees. She
spends the freed noise margin attacking the signal, leaving the total
excess noise that Alice and Bob estimate unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .keyrate import KeyRateReport, holevo_bound, report_from_budget
from .noise import NoiseBudget, solve_noise_budget, without_relief
from .params import (
    DEFAULT_OPTIONS,
    AttackScenario,
    ModelOptions,
    SystemParams,
    transmittance,
)

SEARCH_BRACKET_KM = (0.0, 60.0)
SCAN_STEP_KM = 0.25
DISTANCE_TOL_KM = 1e-4


@dataclass(frozen=True)
class AttackState:
    xi_tole: float
    xi_e_rpa: float
    xi_error_low: float
    t_std: float
    t_low: float


@dataclass(frozen=True)
class AttackReport:
    keyrate_report: KeyRateReport
    actual_budget: NoiseBudget
    attack_state: AttackState
    scenario: AttackScenario
    chi_be_actual: float
    k_eff: float
    k_eff_clamped: float
    truly_secure: float
    attack_induced_insecure: float
    estimated_insecure: float
    keff_denominator: str

    @property
    def i_ab(self) -> float:
        return self.keyrate_report.i_ab

    @property
    def chi_be(self) -> float:
        return self.keyrate_report.chi_be


def noise_tolerance(
    params: SystemParams,
    scenario: AttackScenario,
    baseline: NoiseBudget,
    attack_fraction: float = 1.0,
) -> AttackState:
    """Noise margin freed by sending the reference pulses over ``alpha_low``.

    The estimation-error noise scales with the received reference power,
    so moving the reference from T_std to T_low multiplies it by
    T_std/T_low; the difference is the tolerance Eve may spend.
    """
    scenario.check_against(params)
    length = scenario.length_km
    t_std = transmittance(params.alpha_std, length)
    t_low = transmittance(scenario.alpha_low, length)
    gap = transmittance(params.alpha_std - scenario.alpha_low, length)
    xi_error_low = baseline.xi_error * gap
    xi_tole = baseline.xi_error * (1.0 - gap)
    return AttackState(
        xi_tole=xi_tole,
        xi_e_rpa=attack_fraction * xi_tole,
        xi_error_low=xi_error_low,
        t_std=t_std,
        t_low=t_low,
    )


def post_attack_budget(
    params: SystemParams,
    scenario: AttackScenario,
    options: ModelOptions = DEFAULT_OPTIONS,
    state: AttackState | None = None,
) -> tuple[NoiseBudget, NoiseBudget]:
    """(estimated, actual) budgets under attack.

    The estimated budget is what parameter estimation reports; the actual
    one counts Eve's injected noise without the phase-noise relief.
    """
    if state is None:
        baseline = solve_noise_budget(params, scenario.length_km, chi_t_mode=options.chi_t_mode)
        state = noise_tolerance(params, scenario, baseline, options.attack_fraction)
    estimated = solve_noise_budget(
        params, scenario.length_km, state, chi_t_mode=options.chi_t_mode
    )
    return estimated, without_relief(estimated)


def _keff(stolen: float, denominator: float) -> float:
    if stolen <= 0.0:
        return 0.0
    if denominator <= 0.0:
        return math.inf
    return stolen / denominator


def attack_report(
    params: SystemParams,
    scenario: AttackScenario,
    options: ModelOptions = DEFAULT_OPTIONS,
) -> AttackReport:
    baseline = solve_noise_budget(params, scenario.length_km, chi_t_mode=options.chi_t_mode)
    state = noise_tolerance(params, scenario, baseline, options.attack_fraction)
    estimated, actual = post_attack_budget(params, scenario, options, state)

    rep = report_from_budget(params, estimated)
    chi_be_actual, _ = holevo_bound(
        params, actual.t, actual.chi_line, actual.chi_het, actual.chi_total
    )
    stolen = max(chi_be_actual - rep.chi_be, 0.0)
    if options.keff_denominator == "reconciled":
        denominator = params.beta * rep.i_ab - rep.chi_be
    else:
        denominator = rep.i_ab - rep.chi_be
    k_eff = _keff(stolen, denominator)
    return AttackReport(
        keyrate_report=rep,
        actual_budget=actual,
        attack_state=state,
        scenario=scenario,
        chi_be_actual=chi_be_actual,
        k_eff=k_eff,
        k_eff_clamped=min(k_eff, 1.0),
        truly_secure=params.beta * rep.i_ab - chi_be_actual,
        attack_induced_insecure=chi_be_actual - rep.chi_be,
        estimated_insecure=rep.chi_be,
        keff_denominator=options.keff_denominator,
    )


def first_crossing(
    f: Callable[[float], float],
    bracket: tuple[float, float] = SEARCH_BRACKET_KM,
    step: float = SCAN_STEP_KM,
    tol: float = DISTANCE_TOL_KM,
) -> float | None:
    """Smallest L in ``bracket`` where ``f`` turns non-negative, or None.

    A coarse scan locates the first sign change, bisection refines it.
    """
    lo, hi = bracket
    if f(lo) >= 0.0:
        return lo
    n = max(1, math.ceil((hi - lo) / step))
    prev = lo
    for i in range(1, n + 1):
        x = min(lo + i * step, hi)
        if f(x) >= 0.0:
            a, b = prev, x
            while b - a > tol:
                mid = 0.5 * (a + b)
                if f(mid) >= 0.0:
                    b = mid
                else:
                    a = mid
            return 0.5 * (a + b)
        prev = x
    return None


def critical_distance(
    params: SystemParams,
    alpha_low: float,
    target_keff: float = 1.0,
    options: ModelOptions = DEFAULT_OPTIONS,
) -> float | None:
    """Shortest channel length at which the attack efficiency reaches
    ``target_keff``; None when it never does within the search bracket."""

    def f(length: float) -> float:
        rep = attack_report(params, AttackScenario(length, alpha_low), options)
        return rep.k_eff_clamped - target_keff

    return first_crossing(f)


def null_key_distance(
    params: SystemParams, options: ModelOptions = DEFAULT_OPTIONS
) -> float | None:
    """Length at which the attack-free key rate falls to zero."""

    def f(length: float) -> float:
        noise = solve_noise_budget(params, length, chi_t_mode=options.chi_t_mode)
        return -report_from_budget(params, noise).key_rate

    return first_crossing(f)
