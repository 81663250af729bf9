import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("lab", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("lab")

ACCEPTANCE_LINES: list[str] = []
TIMINGS: dict[str, float] = {}


@pytest.fixture(scope="session")
def degen_records():
    from latinlab.degenerations import enumerate_degenerations
    t = time.perf_counter()
    out = enumerate_degenerations()
    TIMINGS["enumerate"] = time.perf_counter() - t
    return out


@pytest.fixture(scope="session")
def degen_report(degen_records):
    from latinlab.degenerations import degeneration_report
    t = time.perf_counter()
    out = degeneration_report(degen_records)
    TIMINGS["report"] = time.perf_counter() - t
    return out


@pytest.fixture
def verdict():
    """Record and print one PASS/FAIL line for an acceptance criterion."""
    def emit(label: str, passed: bool, detail: str = "", soft: bool = False) -> bool:
        tag = "PASS" if passed else ("FAIL (soft, not gating)" if soft else "FAIL")
        line = f"criterion {label}: {tag}  {detail}".rstrip()
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
