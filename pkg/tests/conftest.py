import pytest

from lotkafit.data import load_lotka_chemistry, sufficient_stats, to_curve

# criterion number -> (passed, detail), filled by test_acceptance
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def lotka():
    return load_lotka_chemistry()


@pytest.fixture(scope="session")
def lotka_stats(lotka):
    return sufficient_stats(lotka)


@pytest.fixture(scope="session")
def lotka_curve(lotka):
    return to_curve(lotka)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
