import numpy as np
import pytest


def pytest_configure(config):
    config._criterion_lines = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240615)


@pytest.fixture
def report_criterion(request):
    """Record one pass/fail line per acceptance criterion; repeated in the terminal summary."""

    def report(label: str, passed: bool, detail: str) -> bool:
        line = f"criterion {label:>3}: {'PASS' if passed else 'FAIL'}  {detail}"
        request.config._criterion_lines.append(line)
        print(line)
        return passed

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_criterion_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
