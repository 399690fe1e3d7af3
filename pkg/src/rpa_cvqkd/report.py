"""Flat CSV/JSON views of the analysis results.

Column order is part of the external contract.
"""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Iterable, Sequence

from .attack import AttackReport
from .keyrate import KeyRateReport

KEYRATE_COLUMNS = (
    "length_km",
    "alpha_low",
    "i_ab",
    "chi_be",
    "chi_be_actual",
    "key_rate",
    "k_eff",
    "k_eff_clamped",
    "lambda1",
    "lambda2",
    "lambda3",
    "lambda4",
    "lambda5",
    "xi_error",
    "xi_tole",
    "chi_t",
    "key_rate_conservative",
)


def _fmt(v: object) -> str:
    if v is None or v == "":
        return ""
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(v)


def keyrate_row(rep: KeyRateReport, alpha_low: float | None = None) -> dict[str, object]:
    """Row for an attack-free evaluation; attack columns are left empty."""
    e = rep.eigenset
    return {
        "length_km": rep.noise.length_km,
        "alpha_low": alpha_low,
        "i_ab": rep.i_ab,
        "chi_be": rep.chi_be,
        "chi_be_actual": None,
        "key_rate": rep.key_rate,
        "k_eff": None,
        "k_eff_clamped": None,
        "lambda1": e.lambda1,
        "lambda2": e.lambda2,
        "lambda3": e.lambda3,
        "lambda4": e.lambda4,
        "lambda5": e.lambda5,
        "xi_error": rep.noise.xi_error,
        "xi_tole": None,
        "chi_t": rep.noise.chi_total,
        "key_rate_conservative": None,
    }


def attack_row(rep: AttackReport) -> dict[str, object]:
    row = keyrate_row(rep.keyrate_report, rep.scenario.alpha_low)
    row.update(
        chi_be_actual=rep.chi_be_actual,
        k_eff=rep.k_eff,
        k_eff_clamped=rep.k_eff_clamped,
        xi_tole=rep.attack_state.xi_tole,
        key_rate_conservative=rep.truly_secure,
    )
    return row


def write_rows(
    path: str | Path | None,
    rows: Iterable[dict[str, object]],
    columns: Sequence[str] = KEYRATE_COLUMNS,
) -> str:
    """Serialize rows to CSV text; also write it to ``path`` when given."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row.get(c)) for c in columns])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def read_rows(path: str | Path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))
