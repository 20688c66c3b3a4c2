import numpy as np
import pytest

from semiorbit.config import SolverSettings
from semiorbit.errors import DegenerateLambdaError, DomainError, NoOrbitError, UnstableOrbitError
from semiorbit.expr import parse_model
from semiorbit.orbit import find_circular_orbit, log_grid, scan_roots, solve_orbit, stationarity_residual


def test_log_grid_hits_powers_of_ten():
    grid = log_grid((1e-8, 1e8), 64)
    assert grid.size == 1025
    assert grid[0] == pytest.approx(1e-8)
    assert grid[-1] == pytest.approx(1e8)
    assert 1.0 in grid
    assert 10.0 in grid


def test_scan_counts_exact_grid_zeros_once():
    def residual(r):
        return (r - 1.0) * (r - 10.0)

    assert scan_roots(residual, residual) == [1.0, 10.0]


def test_scan_refines_sign_changes():
    def residual(r):
        return (r - 2.0) * (r - 30.0)

    roots = scan_roots(residual, residual)
    assert roots == pytest.approx([2.0, 30.0], rel=1e-13)


def test_scan_falls_back_to_pointwise_outside_domain():
    f = parse_model("sqrt(r - 1) - 1", "r")
    roots = scan_roots(f, f)
    assert roots == pytest.approx([2.0], rel=1e-13)


def test_scan_respects_bracket():
    def residual(r):
        return r - 5.0

    assert scan_roots(residual, residual, SolverSettings(bracket=(10.0, 100.0))) == []


def test_no_orbit_when_force_never_balances():
    T = parse_model("p^2/2", "p")
    V = parse_model("-r", "r")
    with pytest.raises(NoOrbitError) as exc:
        find_circular_orbit(T, V, 1.5)
    assert exc.value.roots_found == 0


def test_unstable_orbit():
    T = parse_model("p^2/2", "p")
    V = parse_model("-1/r^3", "r")
    with pytest.raises(UnstableOrbitError) as exc:
        solve_orbit(T, V, 1.5, 0.5)
    assert exc.value.r0 == pytest.approx(3 / 1.5**2)
    assert exc.value.k < 0


def test_degenerate_lambda():
    T = parse_model("p^2/2", "p")
    V = parse_model("r^2/2", "r")
    with pytest.raises(DegenerateLambdaError):
        solve_orbit(T, V, 0.0, 0.5)


def test_kinetic_must_increase():
    T = parse_model("-p^2", "p")
    V = parse_model("-r^2", "r")
    with pytest.raises(DomainError):
        solve_orbit(T, V, 1.0, 0.5)


def test_solution_fields_for_oscillator():
    T = parse_model("p^2/2", "p")
    V = parse_model("r^2/2", "r")
    solution = solve_orbit(T, V, 2.0, 1.5, method="unit")
    assert solution.r0 == pytest.approx(np.sqrt(2.0), rel=1e-12)
    assert solution.mu == pytest.approx(1.0, rel=1e-12)
    assert solution.k == pytest.approx(4.0, rel=1e-12)
    assert solution.E0 == pytest.approx(2.0, rel=1e-12)
    assert solution.deltaE == pytest.approx(3.0, rel=1e-12)
    assert solution.E == pytest.approx(5.0, rel=1e-12)
    assert solution.E_squared == pytest.approx(4.0 + 12.0, rel=1e-12)
    assert solution.diagnostics["method"] == "unit"
    assert solution.diagnostics["roots_found"] == 1
    assert solution.diagnostics["lambda"] == 2.0
    assert abs(stationarity_residual(T, V, 2.0, solution.r0)) <= 1e-10 * max(1.0, solution.r0)


def test_multiplicity_scales_everything():
    T = parse_model("p^2/2", "p")
    V = parse_model("r^2/2", "r")
    single = solve_orbit(T, V, 2.0, 1.5)
    triple = solve_orbit(T, V, 2.0, 1.5, multiplicity=3.0)
    assert triple.r0 == single.r0
    assert triple.E == pytest.approx(3 * single.E, rel=1e-14)
