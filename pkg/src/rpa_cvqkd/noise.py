"""Excess-noise ledger and the total added-noise chain.

The phase-estimation error depends on the total noise chi_t, and chi_t
depends on the phase noise through xi_t and chi_line. The budget is
therefore solved as a fixed point (or, on request, in one pass).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .errors import NumericalError, ParameterError
from .params import ChiTMode, SystemParams, transmittance

MAX_ITERATIONS = 100
REL_TOL = 1e-12


@dataclass(frozen=True)
class NoiseBudget:
    """Decomposed excess-noise ledger for one channel length.

    ``xi_attack`` is the extra signal noise Eve injects and ``xi_relief``
    the phase-noise reduction she obtains; both are zero without an attack,
    so that ``xi_total = xi_e + xi_attack + xi_phase - xi_relief``.
    """

    length_km: float
    t: float
    v_drift: float
    v_error: float
    xi_drift: float
    xi_error: float
    xi_phase: float
    xi_e: float
    xi_attack: float
    xi_relief: float
    xi_total: float
    chi_line: float
    chi_het: float
    chi_total: float
    fixed_point_iterations: int

    def to_dict(self) -> dict[str, float | int]:
        return dataclasses.asdict(self)


def drift_variance(params: SystemParams) -> float:
    """Relative phase drift variance 2*pi*(dnu_A + dnu_B)/f_rep, in rad^2."""
    if params.f_rep <= 0:
        raise ParameterError("f_rep must be > 0")
    return 2.0 * math.pi * (params.dnu_a + params.dnu_b) / params.f_rep


def phase_error_variance(chi_t: float, e_ref_sq: float) -> float:
    """Reference-phase estimation variance (chi_t + 1)/E_Ref^2, in rad^2."""
    if not e_ref_sq > 0:
        raise ParameterError("e_ref_sq must be > 0")
    if chi_t < 0:
        raise ParameterError("chi_t must be >= 0")
    return (chi_t + 1.0) / e_ref_sq


def heterodyne_noise(params: SystemParams) -> float:
    """Detection noise chi_het = [1 + (1 - eta) + 2 V_ele] / eta."""
    return (1.0 + (1.0 - params.eta) + 2.0 * params.v_ele) / params.eta


def solve_noise_budget(
    params: SystemParams,
    length_km: float,
    attack=None,
    *,
    chi_t_mode: ChiTMode = "fixed_point",
    initial_xi_phase: float | None = None,
) -> NoiseBudget:
    """Solve the noise ledger at ``length_km`` on the standard fibre.

    With an :class:`~rpa_cvqkd.attack.AttackState` the total excess noise
    becomes ``xi_e + xi_e_rpa + xi_phase - xi_tole`` (what Alice and Bob
    estimate during the attack). ``initial_xi_phase`` overrides the
    drift-only starting point of the iteration.
    """
    if attack is None:
        added, relief = 0.0, 0.0
    else:
        added, relief = attack.xi_e_rpa, attack.xi_tole
    return _solve(params, length_km, added, relief, chi_t_mode, initial_xi_phase)


def _solve(
    params: SystemParams,
    length_km: float,
    added: float,
    relief: float,
    chi_t_mode: ChiTMode,
    initial_xi_phase: float | None,
) -> NoiseBudget:
    if length_km < 0 or not math.isfinite(length_km):
        raise ParameterError("length_km must be finite and >= 0")
    t = transmittance(params.alpha_std, length_km)
    if t <= 0.0:
        raise ParameterError(f"transmittance underflows to 0 at L={length_km} km")

    e_ref_sq = params.e_ref_sq
    v_drift = drift_variance(params)
    xi_drift = params.v_a * v_drift
    chi_het = heterodyne_noise(params)

    def chain(xi_phase: float) -> tuple[float, float, float]:
        xi_total = params.xi_e + added + xi_phase - relief
        chi_line = 1.0 / t - 1.0 + xi_total
        return xi_total, chi_line, chi_line + chi_het / t

    xi_phase = xi_drift if initial_xi_phase is None else initial_xi_phase
    _, _, chi_t = chain(xi_phase)
    iterations = 0
    while True:
        iterations += 1
        v_error = phase_error_variance(max(chi_t, 0.0), e_ref_sq)
        xi_error = params.v_a * v_error
        xi_phase = xi_error + xi_drift
        _, _, chi_next = chain(xi_phase)
        if chi_t_mode == "one_shot":
            break
        if not math.isfinite(chi_next):
            raise NumericalError("noise budget diverged", last_value=chi_t)
        converged = abs(chi_next - chi_t) <= REL_TOL * max(1.0, abs(chi_t))
        chi_t = chi_next
        if converged:
            break
        if iterations >= MAX_ITERATIONS:
            raise NumericalError(
                f"noise budget did not converge in {MAX_ITERATIONS} iterations",
                last_value=chi_next,
            )

    xi_total, chi_line, chi_total = chain(xi_phase)
    if chi_total < 0:
        raise NumericalError("negative total noise", last_value=chi_total)
    return NoiseBudget(
        length_km=float(length_km),
        t=t,
        v_drift=v_drift,
        v_error=v_error,
        xi_drift=xi_drift,
        xi_error=xi_error,
        xi_phase=xi_phase,
        xi_e=params.xi_e,
        xi_attack=added,
        xi_relief=relief,
        xi_total=xi_total,
        chi_line=chi_line,
        chi_het=chi_het,
        chi_total=chi_total,
        fixed_point_iterations=iterations,
    )


def without_relief(budget: NoiseBudget) -> NoiseBudget:
    """The same ledger with the phase-noise relief removed.

    This is the noise Eve's information must be bounded with: her injected
    noise counted in full, the phase noise left at its pre-attack level.
    """
    xi_total = budget.xi_e + budget.xi_attack + budget.xi_phase
    chi_line = 1.0 / budget.t - 1.0 + xi_total
    return dataclasses.replace(
        budget,
        xi_relief=0.0,
        xi_total=xi_total,
        chi_line=chi_line,
        chi_total=chi_line + budget.chi_het / budget.t,
    )
