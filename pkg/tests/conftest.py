from fractions import Fraction

import pytest
from hypothesis import strategies as st

from terminal_flops.poly import Polynomial

VARS = ("x", "y", "z", "u")


@st.composite
def polynomials(draw, variables=VARS, max_terms=5, max_degree=4, max_coeff=6):
    n = len(variables)
    exps = draw(st.lists(st.tuples(*[st.integers(0, max_degree)] * n), max_size=max_terms))
    coeffs = draw(st.lists(st.fractions(min_value=-max_coeff, max_value=max_coeff, max_denominator=4),
                           min_size=len(exps), max_size=len(exps)))
    return Polynomial(variables, dict(zip(exps, coeffs)))


def monomial(exp, c=1):
    return Polynomial(VARS, {tuple(exp): Fraction(c)})


@pytest.fixture
def data_dir():
    from pathlib import Path

    return Path(__file__).resolve().parent.parent / "data"


_CRITERIA: list[str] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.failed):
        verdict = "PASS" if report.passed else "FAIL"
        _CRITERIA.append(f"criterion {number} ({title}): {verdict} in {report.duration:.2f}s")


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
