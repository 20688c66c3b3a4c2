import pytest

from semiorbit import catalog
from semiorbit.config import SolverSettings


@pytest.fixture
def settings():
    return SolverSettings()


@pytest.fixture
def meson():
    """T = 2|p|, V = r: two massless particles on a linear potential."""
    return catalog.meson_hamiltonian(1.0)


@pytest.fixture
def oscillator():
    return catalog.nonrelativistic_kinetic(1.0), catalog.harmonic_potential(1.0)


@pytest.fixture
def coulomb():
    return catalog.nonrelativistic_kinetic(1.0), catalog.coulomb_potential(1.0)


@pytest.fixture
def baryon():
    return catalog.baryon_spec(1.0, 0.0)


@pytest.fixture
def oscillator3():
    return catalog.oscillator_spec(1.0, 1.0, 1.0)


def pytest_sessionfinish(session, exitstatus):
    """Write failed test reports to pytest_reports.txt after test session."""
    if exitstatus == 0:
        return  # No failures

    failures = []

    terminalreporter = session.config.pluginmanager.get_plugin("terminalreporter")
    if terminalreporter:
        for rep in terminalreporter.stats.get("failed", []):
            failures.append(f"{rep.nodeid}\n{rep.longrepr}\n\n")

    if failures:
        with open("pytest_reports.txt", "w", encoding="utf-8") as f:
            f.writelines(failures)
