"""Pulse-level Monte Carlo of the LLO-CVQKD link.

Each pulse pair is simulated explicitly: Alice's Gaussian-modulated
signal, a reference pulse prepared at zero phase, an arbitrary channel
phase, heterodyne measurement of both, atan2 phase estimation from the
reference and de-rotation of the signal. Nothing here calls the analytic
key-rate code; the analytic noise model only supplies the physical noise
levels the detector sees, so the estimator statistics can be compared
against the closed forms independently.

Noise accounting, per measured quadrature at Bob (shot-noise units):

* signal: ``sqrt(T*eta/2) * (rotated X_A + vacuum + excess)`` plus a
  detection vacuum of variance ``1 - T*eta/2`` and electronic noise, so
  that the input-referred conditional variance is ``1 + chi_t``;
* reference: amplitude ``sqrt(T_ref*eta/2) * E_Ref`` with additive noise
  of variance ``(T_std*eta/2) * (chi_t + 1)``. The noise floor is set by
  Bob's detection chain and the real channel, and does not move when Eve
  reroutes the reference, only the amplitude does.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .attack import noise_tolerance
from .errors import EstimationError, ParameterError
from .noise import NoiseBudget, drift_variance, solve_noise_budget
from .params import AttackScenario, SystemParams, transmittance

RNG_ALGORITHM = "numpy PCG64 seeded by SeedSequence([seed, shard])"
SHARD_SIZE = 1 << 18


@dataclass(frozen=True)
class PulseBatch:
    n: int
    seed: int
    x_a: np.ndarray
    p_a: np.ndarray
    phi_ref: np.ndarray
    phi_true: np.ndarray
    x_ref: np.ndarray
    p_ref: np.ndarray
    phi_hat: np.ndarray
    x_b: np.ndarray
    p_b: np.ndarray
    attack_on: bool
    t_std: float
    t_ref: float
    e_ref: float
    xi_signal: float
    xi_e_rpa: float
    chi_t: float

    @property
    def phase_error(self) -> np.ndarray:
        """Estimation error phi_hat - phi_R, wrapped to (-pi, pi]."""
        return _wrap(self.phi_hat - self.phi_ref)

    @property
    def residual_phase(self) -> np.ndarray:
        """phi_hat - phi_s: what remains after correcting the signal."""
        return _wrap(self.phi_hat - self.phi_true)

    def dump_csv(self, path: str | Path) -> None:
        cols = ["x_a", "p_a", "phi_ref", "phi_true", "x_ref", "p_ref", "phi_hat", "x_b", "p_b"]
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(cols)
            w.writerows(zip(*(getattr(self, c).tolist() for c in cols)))


def _wrap(a: np.ndarray) -> np.ndarray:
    return np.angle(np.exp(1j * a))


def _shard(
    seed: int,
    index: int,
    size: int,
    v_a: float,
    v_drift: float,
    k_sig: float,
    k_ref: float,
    e_ref: float,
    ref_noise_sd: float,
    det_vac_sd: float,
    ele_sd: float,
    xi_sd: float,
) -> tuple[np.ndarray, ...]:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))
    sd_a = math.sqrt(v_a)
    x_a = rng.normal(0.0, sd_a, size)
    p_a = rng.normal(0.0, sd_a, size)
    phi_ref = rng.uniform(-math.pi, math.pi, size)
    phi_s = phi_ref + rng.normal(0.0, math.sqrt(v_drift), size)

    # reference: zero-phase preparation, X = E_Ref, P = 0
    x_ref = k_ref * e_ref * np.cos(phi_ref) + rng.normal(0.0, ref_noise_sd, size)
    p_ref = k_ref * e_ref * np.sin(phi_ref) + rng.normal(0.0, ref_noise_sd, size)
    phi_hat = np.arctan2(p_ref, x_ref)

    # signal: coherent-state vacuum and Eve's noise ride on the rotated field
    xs = x_a + rng.normal(0.0, 1.0, size) + rng.normal(0.0, xi_sd, size)
    ps = p_a + rng.normal(0.0, 1.0, size) + rng.normal(0.0, xi_sd, size)
    c, s = np.cos(phi_s), np.sin(phi_s)
    x_rx = k_sig * (c * xs - s * ps) + rng.normal(0.0, det_vac_sd, size) + rng.normal(0.0, ele_sd, size)
    p_rx = k_sig * (s * xs + c * ps) + rng.normal(0.0, det_vac_sd, size) + rng.normal(0.0, ele_sd, size)

    ch, sh = np.cos(phi_hat), np.sin(phi_hat)
    x_b = ch * x_rx + sh * p_rx
    p_b = -sh * x_rx + ch * p_rx
    return x_a, p_a, phi_ref, phi_s, x_ref, p_ref, phi_hat, x_b, p_b


def simulate_batch(
    params: SystemParams,
    scenario: AttackScenario,
    attack_on: bool,
    n: int,
    seed: int,
    *,
    xi_e_rpa: float | None = None,
    budget: NoiseBudget | None = None,
    workers: int = 1,
) -> PulseBatch:
    """Simulate ``n`` signal/reference pulse pairs.

    With ``attack_on`` the reference travels over ``alpha_low`` and Eve adds
    ``xi_e_rpa`` of excess noise to the signal (default: the full tolerance
    of the scenario). ``budget`` overrides the analytic noise level used for
    the reference noise floor. The output depends only on (inputs, n, seed),
    not on ``workers``.
    """
    if n < 1:
        raise ParameterError("n must be >= 1")
    scenario.check_against(params)
    length = scenario.length_km
    if budget is None:
        budget = solve_noise_budget(params, length)
    t_std = transmittance(params.alpha_std, length)
    t_low = transmittance(scenario.alpha_low, length)
    t_ref = t_low if attack_on else t_std

    if not attack_on:
        rpa = 0.0
    elif xi_e_rpa is not None:
        rpa = xi_e_rpa
    else:
        rpa = noise_tolerance(params, scenario, budget).xi_e_rpa
    if rpa < 0:
        raise ParameterError("xi_e_rpa must be >= 0")

    eta = params.eta
    e_ref = math.sqrt(params.e_ref_sq)
    k_sig = math.sqrt(t_std * eta / 2.0)
    k_ref = math.sqrt(t_ref * eta / 2.0)
    det_vac = 1.0 - t_std * eta / 2.0
    xi_signal = params.xi_e + rpa
    common = (
        params.v_a,
        drift_variance(params),
        k_sig,
        k_ref,
        e_ref,
        k_sig * math.sqrt(budget.chi_total + 1.0),
        math.sqrt(max(det_vac, 0.0)),
        math.sqrt(params.v_ele),
        math.sqrt(xi_signal),
    )
    sizes = [SHARD_SIZE] * (n // SHARD_SIZE)
    if n % SHARD_SIZE:
        sizes.append(n % SHARD_SIZE)
    jobs = [(seed, i, size, *common) for i, size in enumerate(sizes)]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda j: _shard(*j), jobs))
    else:
        parts = [_shard(*j) for j in jobs]
    cols = [np.concatenate(c) for c in zip(*parts)]
    x_a, p_a, phi_ref, phi_s, x_ref, p_ref, phi_hat, x_b, p_b = cols
    return PulseBatch(
        n=n,
        seed=seed,
        x_a=x_a,
        p_a=p_a,
        phi_ref=phi_ref,
        phi_true=phi_s,
        x_ref=x_ref,
        p_ref=p_ref,
        phi_hat=phi_hat,
        x_b=x_b,
        p_b=p_b,
        attack_on=attack_on,
        t_std=t_std,
        t_ref=t_ref,
        e_ref=e_ref,
        xi_signal=xi_signal,
        xi_e_rpa=rpa,
        chi_t=budget.chi_total,
    )


def var_with_se(x: np.ndarray) -> tuple[float, float]:
    """Sample variance and its standard error (from the fourth moment)."""
    x = np.asarray(x, dtype=float)
    n = x.size
    d = x - x.mean()
    m2 = float(np.mean(d * d))
    m4 = float(np.mean(d**4))
    var = m2 * n / (n - 1)
    return var, math.sqrt(max(m4 - m2 * m2, 0.0) / n)


@dataclass(frozen=True)
class ChannelEstimate:
    t_hat: float
    t_hat_se: float
    xi_hat: float
    xi_hat_se: float
    chi_t_hat: float
    samples: int


def estimate_excess_noise(
    batch: PulseBatch, params: SystemParams, scenario: AttackScenario | None = None
) -> ChannelEstimate:
    """Channel estimation as Alice and Bob would run it on revealed data.

    Both corrected quadratures are regressed on Alice's; the slope gives
    sqrt(T*eta/2), the residual variance minus the calibrated shot and
    electronic noise gives the input-referred excess noise. ``scenario`` is
    accepted for symmetry with the other operations; the estimate uses only
    the data and the trusted detector calibration (eta, V_ele).
    """
    a = np.concatenate([batch.x_a, batch.p_a])
    b = np.concatenate([batch.x_b, batch.p_b])
    m = a.size
    var_a = float(np.dot(a, a) / m)
    if var_a <= 0.0 or m < 3:
        raise EstimationError("degenerate regression: Alice's data has no variance")
    slope = float(np.dot(a, b) / np.dot(a, a))
    resid = b - slope * a
    r_var, r_se = var_with_se(resid)
    k2 = slope * slope
    if k2 <= 0:
        raise EstimationError("estimated transmittance is zero")
    slope_se = math.sqrt(r_var / (m * var_a))
    t_hat = 2.0 * k2 / params.eta
    t_hat_se = 4.0 * abs(slope) * slope_se / params.eta
    xi_hat = (r_var - 1.0 - params.v_ele) / k2
    xi_se = r_se / k2
    chi_het = (1.0 + (1.0 - params.eta) + 2.0 * params.v_ele) / params.eta
    chi_t_hat = 1.0 / t_hat - 1.0 + xi_hat + chi_het / t_hat
    return ChannelEstimate(t_hat, t_hat_se, xi_hat, xi_se, chi_t_hat, m)


def predicted_bob_variance(params: SystemParams, t: float, xi_signal: float) -> float:
    """Analytic per-quadrature variance of Bob's data.

    Rotation leaves the isotropic Gaussian signal variance unchanged, so
    phase noise does not appear here, only in the conditional variance.
    """
    k2 = t * params.eta / 2.0
    return k2 * (params.v_a + 1.0 + xi_signal) + (1.0 - k2) + params.v_ele


def phase_error_slope(
    params: SystemParams,
    scenario: AttackScenario,
    ratios: tuple[float, ...] = (100.0, 400.0, 1600.0),
    n: int = 1_000_000,
    seed: int = 0,
) -> tuple[float, list[float]]:
    """Log-log slope of the empirical phase-error variance against E_Ref^2."""
    e2, v = [], []
    for i, ratio in enumerate(ratios):
        p = params.replace(ref_amp_ratio=ratio)
        batch = simulate_batch(p, scenario, False, n, seed + i)
        e2.append(p.e_ref_sq)
        v.append(float(np.var(batch.phase_error)))
    slope = float(np.polyfit(np.log(e2), np.log(v), 1)[0])
    return slope, v
