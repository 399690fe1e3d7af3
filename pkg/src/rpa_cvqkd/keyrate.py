"""Collective-attack key rate with heterodyne detection and reverse
reconciliation: mutual information, symplectic eigenvalues, Holevo bound."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .errors import NumericalError, ParameterError
from .noise import NoiseBudget, solve_noise_budget
from .params import (
    DEFAULT_OPTIONS,
    AttackScenario,
    ModelOptions,
    SystemParams,
    effective_v,
)

CLAMP_TOL = 1e-9
# a pair whose discriminant is this small (relative to s^2) is degenerate
# up to rounding; sqrt of rounding noise would otherwise split it by ~1e-8
DEGENERATE_TOL = 1e-13


@dataclass(frozen=True)
class EigenSet:
    lambda1: float
    lambda2: float
    lambda3: float
    lambda4: float
    lambda5: float
    a_term: float
    b_term: float
    c_term: float
    d_term: float

    @property
    def lambdas(self) -> tuple[float, float, float, float, float]:
        return (self.lambda1, self.lambda2, self.lambda3, self.lambda4, self.lambda5)


@dataclass(frozen=True)
class KeyRateReport:
    i_ab: float
    chi_be: float
    key_rate: float
    eigenset: EigenSet
    noise: NoiseBudget

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def g_entropy(x: float) -> float:
    """Entropy function G(x) = (x+1) log2(x+1) - x log2 x, in bits."""
    if x < -CLAMP_TOL:
        raise ParameterError(f"G(x) undefined for x={x}")
    if x <= 0.0:
        return 0.0
    return (x + 1.0) * math.log2(x + 1.0) - x * math.log2(x)


def mutual_information(params: SystemParams, noise: NoiseBudget) -> float:
    """I_AB = log2((V + chi_t)/(1 + chi_t)) for heterodyne detection."""
    chi_t = noise.chi_total
    if chi_t < 0:
        raise ParameterError("chi_t must be >= 0")
    v = effective_v(params)
    return math.log2((v + chi_t) / (1.0 + chi_t))


def _pair(s: float, p: float, name: str) -> tuple[float, float]:
    """Roots sqrt((s +- sqrt(s^2 - 4p))/2) with the clamping policy."""
    disc = s * s - 4.0 * p
    if disc < 0:
        if disc < -CLAMP_TOL * s * s:
            raise NumericalError(f"negative discriminant for {name}: {disc}", last_value=disc)
        disc = 0.0
    elif disc < DEGENERATE_TOL * s * s:
        disc = 0.0
    root = math.sqrt(disc)
    hi = math.sqrt(0.5 * (s + root))
    # lambda_hi * lambda_lo = sqrt(p); avoids cancellation in s - root
    lo = math.sqrt(p) / hi if hi > 0 else 0.0
    return max(hi, lo), min(hi, lo)


def _clamped_g(lam: float) -> float:
    if lam < 1.0:
        if lam < 1.0 - CLAMP_TOL:
            raise NumericalError(f"unphysical symplectic eigenvalue {lam}", last_value=lam)
        lam = 1.0
    return g_entropy((lam - 1.0) / 2.0)


def holevo_bound(
    params: SystemParams, t: float, chi_line: float, chi_het: float, chi_t: float
) -> tuple[float, EigenSet]:
    """Holevo bound chi_BE = S(E) - S(E|B) and the eigenvalues behind it."""
    if not 0.0 < t <= 1.0:
        raise ParameterError("t must lie in (0, 1]")
    if min(chi_line, chi_het, chi_t) < 0:
        raise ParameterError("noise terms must be >= 0")
    v = effective_v(params)

    a = v * v * (1.0 - 2.0 * t) + 2.0 * t + t * t * (v + chi_line) ** 2
    b = (t * (v * chi_line + 1.0)) ** 2
    sqrt_b = math.sqrt(b)
    norm = (t * (v + chi_t)) ** 2
    c = (
        a * chi_het**2
        + b
        + 1.0
        + 2.0 * chi_het * (v * sqrt_b + t * (v + chi_line))
        + 2.0 * t * (v * v - 1.0)
    ) / norm
    d = ((v + sqrt_b * chi_het) / (t * (v + chi_t))) ** 2

    l1, l2 = _pair(a, b, "A/B")
    l3, l4 = _pair(c, d, "C/D")
    l5 = 1.0
    s_e = _clamped_g(l1) + _clamped_g(l2)
    s_e_given_b = _clamped_g(l3) + _clamped_g(l4) + _clamped_g(l5)
    eig = EigenSet(l1, l2, l3, l4, l5, a, b, c, d)
    return s_e - s_e_given_b, eig


def report_from_budget(params: SystemParams, noise: NoiseBudget) -> KeyRateReport:
    i_ab = mutual_information(params, noise)
    chi_be, eig = holevo_bound(params, noise.t, noise.chi_line, noise.chi_het, noise.chi_total)
    return KeyRateReport(
        i_ab=i_ab,
        chi_be=chi_be,
        key_rate=params.beta * i_ab - chi_be,
        eigenset=eig,
        noise=noise,
    )


def key_rate(
    params: SystemParams,
    scenario: AttackScenario,
    options: ModelOptions = DEFAULT_OPTIONS,
) -> KeyRateReport:
    """Key rate K = beta*I_AB - chi_BE (bits/symbol) without an attack."""
    noise = solve_noise_budget(params, scenario.length_km, chi_t_mode=options.chi_t_mode)
    return report_from_budget(params, noise)
