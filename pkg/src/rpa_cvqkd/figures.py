"""Figure data (CSV) and line plots (SVG) for the attack analysis."""

from __future__ import annotations

from pathlib import Path
from typing import Callable

import numpy as np

from .attack import attack_report
from .params import (
    DEFAULT_OPTIONS,
    HOLLOW_CORE_DB_PER_KM,
    AttackScenario,
    ModelOptions,
    SystemParams,
)
from .report import read_rows, write_rows

FIGURE_IDS = ("fig4", "fig5", "fig6", "fig7")
FIG_LENGTH_KM = 20.0

FIG4_COLUMNS = ("alpha_low", "xi_phase_no_attack", "xi_phase_attack", "xi_tole", "tole_fraction")
FIG5_COLUMNS = ("alpha_low", "i_ab", "beta_i_ab", "chi_be_rpa", "chi_be_actual", "k_eff", "k_eff_clamped")
FIG6_COLUMNS = ("length_km", "alpha_low", "i_ab", "beta_i_ab", "chi_be_rpa", "chi_be_actual")
FIG7_COLUMNS = ("length_km", "alpha_low", "k_eff", "k_eff_clamped")


def _grid(start: float, stop: float, steps: int) -> list[float]:
    return [round(float(x), 10) for x in np.linspace(start, stop, steps)]


def alpha_grid(params: SystemParams, steps: int = 201) -> list[float]:
    return _grid(0.0, params.alpha_std, steps)


def length_grid(stop: float = 30.0, steps: int = 301) -> list[float]:
    return _grid(0.0, stop, steps)


def fig4_rows(params: SystemParams, options: ModelOptions = DEFAULT_OPTIONS) -> list[dict]:
    rows = []
    for a in alpha_grid(params):
        rep = attack_report(params, AttackScenario(FIG_LENGTH_KM, a), options)
        xi_phase = rep.keyrate_report.noise.xi_phase
        tole = rep.attack_state.xi_tole
        rows.append(
            {
                "alpha_low": a,
                "xi_phase_no_attack": xi_phase,
                "xi_phase_attack": xi_phase - tole,
                "xi_tole": tole,
                "tole_fraction": tole / xi_phase,
            }
        )
    return rows


def fig5_rows(params: SystemParams, options: ModelOptions = DEFAULT_OPTIONS) -> list[dict]:
    rows = []
    for a in alpha_grid(params):
        rep = attack_report(params, AttackScenario(FIG_LENGTH_KM, a), options)
        rows.append(
            {
                "alpha_low": a,
                "i_ab": rep.i_ab,
                "beta_i_ab": params.beta * rep.i_ab,
                "chi_be_rpa": rep.chi_be,
                "chi_be_actual": rep.chi_be_actual,
                "k_eff": rep.k_eff,
                "k_eff_clamped": rep.k_eff_clamped,
            }
        )
    return rows


def fig6_rows(params: SystemParams, options: ModelOptions = DEFAULT_OPTIONS) -> list[dict]:
    rows = []
    for a in (0.0, HOLLOW_CORE_DB_PER_KM, params.alpha_std):
        for length in length_grid():
            rep = attack_report(params, AttackScenario(length, a), options)
            rows.append(
                {
                    "length_km": length,
                    "alpha_low": a,
                    "i_ab": rep.i_ab,
                    "beta_i_ab": params.beta * rep.i_ab,
                    "chi_be_rpa": rep.chi_be,
                    "chi_be_actual": rep.chi_be_actual,
                }
            )
    return rows


def fig7_rows(params: SystemParams, options: ModelOptions = DEFAULT_OPTIONS) -> list[dict]:
    rows = []
    for a in (0.0, HOLLOW_CORE_DB_PER_KM):
        for length in length_grid():
            rep = attack_report(params, AttackScenario(length, a), options)
            rows.append(
                {
                    "length_km": length,
                    "alpha_low": a,
                    "k_eff": rep.k_eff,
                    "k_eff_clamped": rep.k_eff_clamped,
                }
            )
    return rows


_FIGURES: dict[str, tuple[Callable, tuple[str, ...]]] = {
    "fig4": (fig4_rows, FIG4_COLUMNS),
    "fig5": (fig5_rows, FIG5_COLUMNS),
    "fig6": (fig6_rows, FIG6_COLUMNS),
    "fig7": (fig7_rows, FIG7_COLUMNS),
}

# (x column, y columns, optional grouping column, y label)
_PLOTS = {
    "fig4": ("alpha_low", ("xi_phase_no_attack", "xi_phase_attack"), None, "phase excess noise (SNU)"),
    "fig5": ("alpha_low", ("i_ab", "chi_be_rpa", "chi_be_actual"), None, "bits/symbol"),
    "fig6": ("length_km", ("i_ab", "chi_be_actual"), "alpha_low", "bits/symbol"),
    "fig7": ("length_km", ("k_eff_clamped",), "alpha_low", "attack efficiency"),
}


def render_svg(csv_path: str | Path, svg_path: str | Path, fig_id: str) -> None:
    """Line plot of a figure CSV. Output is byte-stable for equal input."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    x_col, y_cols, group_col, ylabel = _PLOTS[fig_id]
    rows = read_rows(csv_path)
    with matplotlib.rc_context({"svg.hashsalt": "rpa-cvqkd", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        groups = sorted({r[group_col] for r in rows}, key=float) if group_col else [None]
        for g in groups:
            sub = [r for r in rows if group_col is None or r[group_col] == g]
            x = [float(r[x_col]) for r in sub]
            for y_col in y_cols:
                y = [float(r[y_col]) for r in sub]
                label = y_col if g is None else f"{y_col} (alpha_low={float(g):g})"
                ax.plot(x, y, label=label)
        ax.set_xlabel(x_col)
        ax.set_ylabel(ylabel)
        ax.set_title(fig_id)
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=7)
        fig.tight_layout()
        fig.savefig(svg_path, format="svg", metadata={"Date": None})
        plt.close(fig)


def run_figure(
    fig_id: str,
    params: SystemParams,
    out_dir: str | Path,
    options: ModelOptions = DEFAULT_OPTIONS,
    svg: bool = True,
) -> tuple[Path, Path | None]:
    if fig_id not in _FIGURES:
        raise ValueError(f"unknown figure {fig_id!r}; choose from {FIGURE_IDS}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    builder, columns = _FIGURES[fig_id]
    csv_path = out / f"{fig_id}.csv"
    write_rows(csv_path, builder(params, options), columns)
    svg_path = None
    if svg:
        svg_path = out / f"{fig_id}.svg"
        render_svg(csv_path, svg_path, fig_id)
    return csv_path, svg_path
