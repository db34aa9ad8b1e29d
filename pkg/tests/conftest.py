import numpy as np
import pytest

from clarkframes import AtomicMeasure, DensityMeasure, SelfSimilarMeasure


def dirac():
    return AtomicMeasure([0.0], [1.0])


def two_atom():
    return AtomicMeasure([0.0, 0.5], [0.5, 0.5])


def three_atom():
    # non-symmetric: separates u from conj(u)
    return AtomicMeasure([0.0, 1.0 / 3.0, 0.5], [0.5, 0.3, 0.2])


def cantor(**kw):
    kw.setdefault("product_depth", 30)
    return SelfSimilarMeasure.cantor(**kw)


def one_plus_cos():
    return DensityMeasure.one_plus_cos()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ATOMIC = {"dirac": dirac, "two_atom": two_atom, "three_atom": three_atom}


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(capsys):
    """Record and print one pass/fail line for an acceptance criterion."""

    def report(number, passed, detail):
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print("\n" + line)
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
