"""System parameters, attack scenarios and the fibre-loss model.

All variances are in shot-noise units (vacuum quadrature variance N0 = 1).
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Literal

from .errors import ConfigError, ParameterError

KeffDenominator = Literal["as_printed", "reconciled"]
ChiTMode = Literal["fixed_point", "one_shot"]

KEFF_DENOMINATORS = ("as_printed", "reconciled")
CHI_T_MODES = ("fixed_point", "one_shot")

HOLLOW_CORE_DB_PER_KM = 0.1419


@dataclass(frozen=True)
class SystemParams:
    """Protocol and device constants of an LLO-CVQKD link."""

    v_a: float = 4.0
    beta: float = 0.97
    eta: float = 0.5
    v_ele: float = 0.01
    xi_e: float = 0.01
    f_rep: float = 100e6
    dnu_a: float = 1.9e3
    dnu_b: float = 1.9e3
    ref_amp_ratio: float = 100.0
    alpha_std: float = 0.2
    n0: float = 1.0

    def __post_init__(self) -> None:
        checks = [
            (self.v_a > 0, "v_a must be > 0"),
            (0 < self.beta <= 1, "beta must lie in (0, 1]"),
            (0 < self.eta <= 1, "eta must lie in (0, 1]"),
            (self.v_ele >= 0, "v_ele must be >= 0"),
            (self.xi_e >= 0, "xi_e must be >= 0"),
            (self.f_rep > 0, "f_rep must be > 0"),
            (self.dnu_a >= 0 and self.dnu_b >= 0, "linewidths must be >= 0"),
            (self.ref_amp_ratio > 0, "ref_amp_ratio must be > 0"),
            (self.alpha_std >= 0, "alpha_std must be >= 0"),
            (self.n0 == 1.0, "n0 is fixed to 1 (shot-noise units)"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ParameterError(msg)
        for f in dataclasses.fields(self):
            if not math.isfinite(getattr(self, f.name)):
                raise ParameterError(f"{f.name} must be finite")

    @property
    def e_ref_sq(self) -> float:
        """Squared reference-pulse amplitude E_Ref^2 = ref_amp_ratio * V_A."""
        return self.ref_amp_ratio * self.v_a

    def replace(self, **changes: Any) -> SystemParams:
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class AttackScenario:
    """Channel length (both legs) and the reference-leg loss coefficient."""

    length_km: float = 20.0
    alpha_low: float = 0.0

    def __post_init__(self) -> None:
        if not (self.length_km >= 0 and math.isfinite(self.length_km)):
            raise ParameterError("length_km must be finite and >= 0")
        if not (self.alpha_low >= 0 and math.isfinite(self.alpha_low)):
            raise ParameterError("alpha_low must be finite and >= 0")

    def check_against(self, params: SystemParams) -> None:
        if self.alpha_low > params.alpha_std:
            raise ParameterError(
                f"alpha_low={self.alpha_low} exceeds alpha_std={params.alpha_std}"
            )

    def replace(self, **changes: Any) -> AttackScenario:
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class ModelOptions:
    """Switches for the modelling choices the equations leave open.

    keff_denominator
        ``reconciled`` divides the stolen information by beta*I_AB - chi_BE,
        ``as_printed`` by I_AB - chi_BE.
    chi_t_mode
        ``fixed_point`` solves the self-referential phase-error noise to
        convergence, ``one_shot`` evaluates it once from the drift-only
        total noise.
    attack_fraction
        Fraction of the available tolerance Eve spends on the signal.
    """

    keff_denominator: KeffDenominator = "reconciled"
    chi_t_mode: ChiTMode = "fixed_point"
    attack_fraction: float = 1.0

    def __post_init__(self) -> None:
        if self.keff_denominator not in KEFF_DENOMINATORS:
            raise ParameterError(f"unknown keff_denominator {self.keff_denominator!r}")
        if self.chi_t_mode not in CHI_T_MODES:
            raise ParameterError(f"unknown chi_t_mode {self.chi_t_mode!r}")
        if not 0.0 <= self.attack_fraction <= 1.0:
            raise ParameterError("attack_fraction must lie in [0, 1]")


DEFAULT_OPTIONS = ModelOptions()

PRESETS: dict[str, SystemParams] = {"paper2017": SystemParams()}
PRESET_SCENARIOS: dict[str, AttackScenario] = {"paper2017": AttackScenario()}


def preset(name: str = "paper2017") -> SystemParams:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; known: {sorted(PRESETS)}") from None


def transmittance(alpha_db_per_km: float, length_km: float) -> float:
    """Power transmittance 10^(-alpha*L/10) of a fibre span."""
    if alpha_db_per_km < 0 or length_km < 0:
        raise ParameterError("attenuation and length must be non-negative")
    return 10.0 ** (-alpha_db_per_km * length_km / 10.0)


def effective_v(params: SystemParams) -> float:
    """Alice's total quadrature variance V = V_A + 1 (modulation plus vacuum)."""
    return params.v_a + params.n0


@dataclass(frozen=True)
class Config:
    params: SystemParams = field(default_factory=SystemParams)
    scenario: AttackScenario = field(default_factory=AttackScenario)
    options: ModelOptions = field(default_factory=ModelOptions)


_PARAM_KEYS = tuple(f.name for f in dataclasses.fields(SystemParams))
_SCENARIO_KEYS = tuple(f.name for f in dataclasses.fields(AttackScenario))
_OPTION_KEYS = tuple(f.name for f in dataclasses.fields(ModelOptions))


def config_from_dict(doc: dict[str, Any]) -> Config:
    """Build a :class:`Config` from a flat mapping.

    Keys are the field names of SystemParams, AttackScenario and
    ModelOptions plus ``preset``. Unknown keys are rejected. Missing
    parameter/scenario keys are filled from the preset only when one is
    named; otherwise every one of them must be present.
    """
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    allowed = set(_PARAM_KEYS) | set(_SCENARIO_KEYS) | set(_OPTION_KEYS) | {"preset"}
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise ConfigError(f"unknown config keys: {unknown}")

    preset_name = doc.get("preset")
    if preset_name is not None:
        base_p = dataclasses.asdict(preset(preset_name))
        base_s = dataclasses.asdict(PRESET_SCENARIOS[preset_name])
    else:
        missing = [k for k in _PARAM_KEYS + _SCENARIO_KEYS if k not in doc and k != "n0"]
        if missing:
            raise ConfigError(f"missing config keys (no preset given): {missing}")
        base_p = {"n0": 1.0}
        base_s = {}

    p_kw = {**base_p, **{k: doc[k] for k in _PARAM_KEYS if k in doc}}
    s_kw = {**base_s, **{k: doc[k] for k in _SCENARIO_KEYS if k in doc}}
    o_kw = {k: doc[k] for k in _OPTION_KEYS if k in doc}
    for k, v in {**p_kw, **s_kw}.items():
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{k} must be a number, got {v!r}")
    try:
        params = SystemParams(**{k: float(v) for k, v in p_kw.items()})
        scenario = AttackScenario(**{k: float(v) for k, v in s_kw.items()})
        options = ModelOptions(**o_kw)
        scenario.check_against(params)
    except ParameterError as exc:
        raise ConfigError(str(exc)) from exc
    return Config(params, scenario, options)


def load_config(path: str | Path) -> Config:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_dict(doc)
