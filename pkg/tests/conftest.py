import numpy as np
import pytest

from xxbell import ChainSpec, field_sweep
from xxbell.threshold import SearchConfig

# (B, T0) pairs of the published field table; None means no violation
TABLE_FIELDS = [round(0.1 * k, 1) for k in range(16)]
TABLE_THRESHOLDS = [0.626, 0.611, 0.556, 0.447, 0.248, None, 0.122, 0.243,
                    0.351, 0.427, 0.467, 0.472, 0.436, 0.343, 0.18, None]
EXTRA_NONE_FIELDS = [1.6, 2.0]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def table_sweep():
    """Threshold reports for the table fields plus a few fields beyond 1.5."""
    fields = TABLE_FIELDS + EXTRA_NONE_FIELDS
    reports = field_sweep(ChainSpec(4), fields, search=SearchConfig())
    return dict(zip(fields, reports))


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
