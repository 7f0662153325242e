import pytest

from equitest import fit_ols, load_salaries

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def salaries_full():
    return load_salaries()


@pytest.fixture(scope="session")
def salaries_simple():
    return load_salaries(["sex"])


@pytest.fixture(scope="session")
def fit_full(salaries_full):
    return fit_ols(salaries_full)


@pytest.fixture(scope="session")
def fit_simple(salaries_simple):
    return fit_ols(salaries_simple)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}")
