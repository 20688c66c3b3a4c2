"""Stationary circular orbits and the harmonic expansion around them.

Shared by the two-body and three-body DOS solvers and by the auxiliary-field
solver: all of them look for the radius minimizing ``T(lam/r) + V(r)``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
from scipy.optimize import brentq

from .config import DEFAULT_SETTINGS, SolverSettings
from .errors import DegenerateLambdaError, DomainError, NoOrbitError, UnstableOrbitError
from .expr import FunctionModel

logger = logging.getLogger(__name__)

RESIDUAL_RTOL = 1e-10


@dataclass(frozen=True)
class DosSolution:
    """Circular orbit plus harmonic radial correction.

    ``E_squared`` is ``E0**2 + 2*E0*deltaE``: the square of ``E`` without the
    second-order radial term.
    """

    r0: float
    E0: float
    mu: float
    k: float
    deltaE: float
    E: float
    E_squared: float
    diagnostics: dict[str, Any] = field(default_factory=dict, compare=False, hash=False)


@dataclass(frozen=True)
class OrbitRoot:
    radius: float
    energy: float
    residual: float
    roots_found: int
    discarded: tuple[float, ...] = ()


def log_grid(bracket: tuple[float, float], points_per_decade: int) -> np.ndarray:
    lo, hi = bracket
    decades = math.log10(hi / lo)
    count = max(2, int(round(decades * points_per_decade)) + 1)
    return np.logspace(math.log10(lo), math.log10(hi), count)


def _sample(residual_array, residual_scalar, grid: np.ndarray) -> np.ndarray:
    try:
        with np.errstate(all="ignore"):
            return np.asarray(residual_array(grid), dtype=float)
    except DomainError:
        # fall back to pointwise evaluation; points outside the domain carry no information
        values = np.empty_like(grid)
        for i, r in enumerate(grid):
            try:
                values[i] = residual_scalar(float(r))
            except (DomainError, OverflowError, ZeroDivisionError):
                values[i] = np.nan
        return values


def scan_roots(
    residual_array: Callable[[np.ndarray], np.ndarray],
    residual_scalar: Callable[[float], float],
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> list[float]:
    """Every root of a residual found by a sign-change scan over a log grid.

    Grid points where the residual vanishes exactly count as roots; sign
    changes between neighbouring finite samples are refined with Brent's method.
    """
    grid = log_grid(settings.bracket, settings.points_per_decade)
    values = _sample(residual_array, residual_scalar, grid)
    finite = np.isfinite(values)

    roots = [float(r) for r in grid[finite & (values == 0.0)]]
    left, right = values[:-1], values[1:]
    crossings = np.nonzero(finite[:-1] & finite[1:] & (left * right < 0))[0]
    for i in crossings:
        lo, hi = float(grid[i]), float(grid[i + 1])
        roots.append(
            float(brentq(residual_scalar, lo, hi, xtol=1e-3 * settings.root_rtol * lo, rtol=settings.root_rtol))
        )
    logger.debug("Scanned %d grid points, %d root(s)", grid.size, len(roots))
    return sorted(roots)


def circular_energy(T: FunctionModel, V: FunctionModel, lam: float, r):
    """``T(lam/r) + V(r)``, the energy of a circular orbit of radius r."""
    return T(lam / r) + V(r)


def stationarity_residual(T: FunctionModel, V: FunctionModel, lam: float, r):
    """``lam*T'(lam/r)/r**2 - V'(r)``, zero at a stationary circular orbit."""
    return lam * T.derivative(lam / r) / (r * r) - V.derivative(r)


def find_circular_orbit(
    T: FunctionModel,
    V: FunctionModel,
    lam: float,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> OrbitRoot:
    """The stationary radius of lowest circular energy."""
    roots = scan_roots(
        lambda r: stationarity_residual(T, V, lam, r),
        lambda r: stationarity_residual(T, V, lam, r),
        settings,
    )
    if not roots:
        lo, hi = settings.bracket
        raise NoOrbitError(
            f"No stationary radius for lambda={lam:g} in [{lo:g}, {hi:g}]",
            roots_found=0,
        )

    energies = [circular_energy(T, V, lam, r) for r in roots]
    best = int(np.argmin(energies))
    radius = roots[best]
    discarded = tuple(r for i, r in enumerate(roots) if i != best)
    if discarded:
        logger.debug("Kept r0=%.12g, discarded stationary radii %s", radius, discarded)

    residual = abs(stationarity_residual(T, V, lam, radius))
    scale = max(1.0, abs(V.derivative(radius)))
    if residual > RESIDUAL_RTOL * scale:
        logger.warning("Stationarity residual %.3g at r0=%.12g exceeds tolerance", residual, radius)
    return OrbitRoot(radius, energies[best], residual, len(roots), discarded)


def solve_orbit(
    T: FunctionModel,
    V: FunctionModel,
    lam: float,
    radial_factor: float,
    multiplicity: float = 1.0,
    settings: SolverSettings = DEFAULT_SETTINGS,
    method: str = "dos",
) -> DosSolution:
    """Circular orbit energy plus harmonic radial quanta.

    ``E = multiplicity * (T(q) + V(r0) + sqrt(k/mu) * radial_factor)`` with
    ``q = lam/r0``.
    """
    if lam <= 0:
        raise DegenerateLambdaError(
            f"lambda={lam:g} has no circular orbit; use WKB quantization instead"
        )
    orbit = find_circular_orbit(T, V, lam, settings)
    r0 = orbit.radius
    t = T.jet(lam / r0)
    v = V.jet(r0)
    if not t.d1 > 0:
        raise DomainError(f"T' must be positive, got {t.d1:.6g} at p={lam / r0:.6g}", lam / r0)

    mu = lam / (r0 * t.d1)
    k = lam / r0**4 * (2.0 * r0 * t.d1 + lam * t.d2) + v.d2
    if not k > 0:
        raise UnstableOrbitError(r0, k)

    omega = math.sqrt(k / mu)
    E0 = multiplicity * (t.value + v.value)
    deltaE = multiplicity * omega * radial_factor
    diagnostics = {
        "method": method,
        "residual": orbit.residual,
        "roots_found": orbit.roots_found,
        "discarded_roots": list(orbit.discarded),
        "lambda": lam,
    }
    return DosSolution(
        r0=r0,
        E0=E0,
        mu=mu,
        k=k,
        deltaE=deltaE,
        E=E0 + deltaE,
        E_squared=E0 * E0 + 2.0 * E0 * deltaE,
        diagnostics=diagnostics,
    )
