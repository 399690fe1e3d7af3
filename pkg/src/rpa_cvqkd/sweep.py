"""Parameter sweeps and the Monte Carlo validation summary."""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .attack import attack_report
from .countermeasure import MIN_MONITOR_SAMPLES, amplitude_monitor
from .errors import ConfigError
from .montecarlo import (
    RNG_ALGORITHM,
    estimate_excess_noise,
    phase_error_slope,
    predicted_bob_variance,
    simulate_batch,
    var_with_se,
)
from .noise import solve_noise_budget
from .params import DEFAULT_OPTIONS, AttackScenario, ModelOptions, SystemParams
from .report import attack_row, write_rows

SWEEP_AXES = ("alpha_low", "length_km", "ref_amp_ratio", "v_a")

PHASE_VAR_REL_TOL = 0.05
SLOPE_TOL = 0.05
INVISIBILITY_SIGMAS = 3.0
BOB_VAR_SIGMAS = 5.0
MIN_PHASE_SAMPLES = 10_000


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    start: float
    stop: float
    steps: int
    params: SystemParams = field(default_factory=SystemParams)
    scenario: AttackScenario = field(default_factory=AttackScenario)

    def __post_init__(self) -> None:
        if self.axis not in SWEEP_AXES:
            raise ConfigError(f"invalid sweep axis {self.axis!r}; choose from {SWEEP_AXES}")
        if self.steps < 2:
            raise ConfigError("a sweep needs steps >= 2")
        if not self.start < self.stop:
            raise ConfigError("sweep needs start < stop")

    def points(self) -> list[float]:
        return [round(float(x), 12) for x in np.linspace(self.start, self.stop, self.steps)]

    def point(self, value: float) -> tuple[SystemParams, AttackScenario]:
        if self.axis in ("alpha_low", "length_km"):
            return self.params, self.scenario.replace(**{self.axis: value})
        return self.params.replace(**{self.axis: value}), self.scenario


def run_sweep(
    spec: SweepSpec,
    out_path: str | Path | None,
    options: ModelOptions = DEFAULT_OPTIONS,
) -> list[dict]:
    """Evaluate the attack report at every grid point, in grid order."""
    rows = []
    for value in spec.points():
        params, scenario = spec.point(value)
        row = attack_row(attack_report(params, scenario, options))
        if spec.axis in ("ref_amp_ratio", "v_a"):
            row = {spec.axis: value, **row}
        rows.append(row)
    columns = list(rows[0])
    write_rows(out_path, rows, columns)
    return rows


def _check(name: str, passed: bool | None, measured: dict, tolerance: dict, reason: str = "") -> dict:
    out = {"property": name, "status": "skipped" if passed is None else ("pass" if passed else "fail")}
    out["measured"] = measured
    out["tolerance"] = tolerance
    if reason:
        out["reason"] = reason
    return out


def _clean(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_clean(v) for v in obj]
    return obj


def run_mc_validate(
    params: SystemParams,
    scenario: AttackScenario,
    n: int,
    seed: int,
    out_path: str | Path | None = None,
    dump_dir: str | Path | None = None,
) -> dict:
    """Simulate attack-off and attack-on batches and check them against the
    analytic model. Returns (and optionally writes) a JSON-able summary."""
    budget = solve_noise_budget(params, scenario.length_km)
    off = simulate_batch(params, scenario, False, n, seed, budget=budget)
    on = simulate_batch(params, scenario, True, n, seed + 1, budget=budget)
    checks = []

    v_error = budget.v_error
    if n >= MIN_PHASE_SAMPLES:
        emp = float(np.var(off.residual_phase))
        rel = abs(emp - v_error) / v_error
        checks.append(
            _check(
                "phase_error_variance",
                rel <= PHASE_VAR_REL_TOL,
                {"empirical": emp, "analytic": v_error, "relative_error": rel},
                {"relative": PHASE_VAR_REL_TOL},
            )
        )
        slope, variances = phase_error_slope(params, scenario, n=n, seed=seed + 2)
        checks.append(
            _check(
                "phase_error_slope",
                abs(slope + 1.0) <= SLOPE_TOL,
                {"slope": slope, "variances": variances},
                {"absolute": SLOPE_TOL},
            )
        )
        err = off.phase_error
        mean, se = float(err.mean()), float(err.std(ddof=1)) / math.sqrt(n)
        checks.append(
            _check(
                "phase_estimate_unbiased",
                abs(mean) <= 3.0 * se,
                {"mean": mean, "standard_error": se},
                {"sigmas": 3.0},
            )
        )
    else:
        reason = f"n={n} below {MIN_PHASE_SAMPLES} samples"
        checks.append(_check("phase_error_variance", None, {}, {}, reason))
        checks.append(_check("phase_error_slope", None, {}, {}, reason))
        checks.append(_check("phase_estimate_unbiased", None, {}, {}, reason))

    var_b, var_se = var_with_se(off.x_b)
    pred = predicted_bob_variance(params, off.t_std, off.xi_signal)
    checks.append(
        _check(
            "bob_variance",
            abs(var_b - pred) <= BOB_VAR_SIGMAS * var_se,
            {"empirical": var_b, "analytic": pred, "standard_error": var_se},
            {"sigmas": BOB_VAR_SIGMAS},
        )
    )

    est_off = est_on = None
    if n >= 3:
        est_off = estimate_excess_noise(off, params, scenario)
        est_on = estimate_excess_noise(on, params, scenario)
        diff = est_on.xi_hat - est_off.xi_hat
        comb = math.hypot(est_on.xi_hat_se, est_off.xi_hat_se)
        checks.append(
            _check(
                "attack_invisible",
                abs(diff) <= INVISIBILITY_SIGMAS * comb,
                {
                    "xi_hat_off": est_off.xi_hat,
                    "xi_hat_on": est_on.xi_hat,
                    "difference": diff,
                    "combined_standard_error": comb,
                },
                {"sigmas": INVISIBILITY_SIGMAS},
            )
        )

    mon_off = amplitude_monitor(off, params, scenario)
    mon_on = amplitude_monitor(on, params, scenario)
    if n >= MIN_MONITOR_SAMPLES:
        checks.append(
            _check("monitor_silent_without_attack", not mon_off.alarm, mon_off.to_dict(), {"sigma": mon_off.threshold_sigma})
        )
        attack_visible = on.t_ref != on.t_std
        checks.append(
            _check(
                "monitor_alarms_on_attack",
                mon_on.alarm if attack_visible else None,
                mon_on.to_dict(),
                {"sigma": mon_on.threshold_sigma},
                "" if attack_visible else "alpha_low equals alpha_std; nothing to detect",
            )
        )
    else:
        reason = f"insufficient data: n={n} below {MIN_MONITOR_SAMPLES}"
        checks.append(_check("monitor_silent_without_attack", None, mon_off.to_dict(), {}, reason))
        checks.append(_check("monitor_alarms_on_attack", None, mon_on.to_dict(), {}, reason))

    summary = {
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "rng": RNG_ALGORITHM,
        "seed": seed,
        "samples": n,
        "length_km": scenario.length_km,
        "alpha_low": scenario.alpha_low,
        "analytic": {
            "chi_t": budget.chi_total,
            "xi_t": budget.xi_total,
            "v_error": v_error,
            "v_drift": budget.v_drift,
            "xi_e_rpa": on.xi_e_rpa,
        },
        "estimates": {
            "off": None if est_off is None else dataclasses.asdict(est_off),
            "on": None if est_on is None else dataclasses.asdict(est_on),
        },
        "checks": checks,
        "all_passed": all(c["status"] != "fail" for c in checks),
    }
    summary = _clean(summary)
    if out_path is not None:
        Path(out_path).write_text(json.dumps(summary, indent=2, sort_keys=True), encoding="utf-8")
    if dump_dir is not None:
        d = Path(dump_dir)
        d.mkdir(parents=True, exist_ok=True)
        off.dump_csv(d / "batch_attack_off.csv")
        on.dump_csv(d / "batch_attack_on.csv")
    return summary
