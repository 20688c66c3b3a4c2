"""Two-body dominantly-orbital-state (DOS) solver.

The orbital factor ``l(l+D-2)`` is replaced by ``lam**2`` with
``lam = l + (D-2)/2``. The state is a circular orbit of radius ``r0`` with
small harmonic radial oscillations, each quantum worth ``sqrt(k/mu)``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_SETTINGS, SolverSettings
from .errors import DegenerateLambdaError, NoOrbitError
from .expr import FunctionModel
from .guard import guarded
from .orbit import (
    DosSolution,
    circular_energy,
    find_circular_orbit,
    scan_roots,
    solve_orbit,
    stationarity_residual,
)
from .param_check import ArgKind, ParamCheck, between, dimension, positive, quantum_number

logger = logging.getLogger(__name__)

__all__ = [
    "DosSolution",
    "QuantumNumbers2B",
    "anyon_energy",
    "anyon_lambda",
    "anyon_radius",
    "circular_energy",
    "dos_energy",
    "dos_energy_squared",
    "lambda_of",
    "solve_r0",
    "stationarity_residual",
]

_QN_CHECKS = (
    ParamCheck("D", dimension(), ArgKind.KEYWORD),
    ParamCheck("l", quantum_number(), ArgKind.KEYWORD),
    ParamCheck("n", quantum_number(), ArgKind.KEYWORD),
)


@dataclass(frozen=True)
class QuantumNumbers2B:
    D: int
    l: int
    n: int

    def __post_init__(self):
        for check in _QN_CHECKS:
            check.validate(getattr(self, check.name))

    @property
    def lam(self) -> float:
        return lambda_of(self.l, self.D)


@guarded(l=quantum_number(), D=dimension())
def lambda_of(l: int, D: int) -> float:
    return l + (D - 2) / 2


def solve_r0(
    T: FunctionModel,
    V: FunctionModel,
    lam: float,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> float:
    """Radius of the stationary circular orbit of lowest energy."""
    if lam <= 0:
        raise DegenerateLambdaError(f"lambda={lam:g} has no circular orbit")
    return find_circular_orbit(T, V, lam, settings).radius


def dos_energy(
    T: FunctionModel,
    V: FunctionModel,
    qn: QuantumNumbers2B,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> DosSolution:
    solution = solve_orbit(T, V, qn.lam, qn.n + 0.5, settings=settings, method="dos")
    logger.debug("DOS D=%d l=%d n=%d: r0=%.12g E=%.12g", qn.D, qn.l, qn.n, solution.r0, solution.E)
    return solution


def dos_energy_squared(
    T: FunctionModel,
    V: FunctionModel,
    qn: QuantumNumbers2B,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> float:
    return dos_energy(T, V, qn, settings).E_squared


@guarded(l=quantum_number(), alpha=between(0.0, 1.0))
def anyon_lambda(l: int, alpha: float) -> float:
    return abs(l - alpha)


@guarded(l=quantum_number(), n=quantum_number(), alpha=between(0.0, 1.0))
def anyon_energy(
    T: FunctionModel,
    V: FunctionModel,
    l: int,
    n: int,
    alpha: float,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> DosSolution:
    """Relative motion of two anyons in two dimensions, ``l`` replaced by ``|l - alpha|``.

    The reduced mass belongs in ``T``.
    """
    lam = anyon_lambda(l, alpha)
    return solve_orbit(T, V, lam, n + 0.5, settings=settings, method="dos-anyon")


@guarded(mu=positive(), l=quantum_number(), alpha=between(0.0, 1.0))
def anyon_radius(
    mu: float,
    V: FunctionModel,
    l: int,
    alpha: float,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> float:
    """Solve ``|l - alpha|**2 = mu * r0**3 * V'(r0)`` for a nonrelativistic pair."""
    lam = anyon_lambda(l, alpha)
    if lam <= 0:
        raise DegenerateLambdaError("l = alpha leaves no circular orbit")

    def residual(r):
        return mu * r**3 * V.derivative(r) - lam * lam

    roots = scan_roots(residual, residual, settings)
    if not roots:
        raise NoOrbitError(f"No anyon orbit radius for lambda={lam:g}", roots_found=0)
    energies = [lam * lam / (2.0 * mu * r * r) + V(r) for r in roots]
    return float(roots[int(np.argmin(energies))])
