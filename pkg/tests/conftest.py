import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rpa_cvqkd.params import AttackScenario, ModelOptions, preset  # noqa: E402


@pytest.fixture
def paper():
    return preset("paper2017")


@pytest.fixture
def ideal(paper):
    """Noise-free devices with an effectively infinite reference amplitude."""
    return paper.replace(eta=1.0, v_ele=0.0, xi_e=0.0, dnu_a=0.0, dnu_b=0.0, ref_amp_ratio=1e12)


@pytest.fixture
def scenario20():
    return AttackScenario(20.0, 0.0)


@pytest.fixture
def as_printed():
    return ModelOptions(keff_denominator="as_printed")


# acceptance outcomes, printed once at the end of the session
ACCEPTANCE_RESULTS: list[tuple[int, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
