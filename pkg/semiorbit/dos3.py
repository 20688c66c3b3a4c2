"""Three identical particles in the DOS approximation.

The particles sit at the apexes of an equilateral triangle of side ``x``. With
a one-body potential U (distance to the center of mass) and a pairwise
potential V the energy is ``3*[T(q) + W(x)]`` where ``W(x) = U(x/sqrt(3)) + V(x)``.
Orbital and radial excitations enter through ``lambda3`` and ``nu3``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Mapping

from .config import DEFAULT_SETTINGS, SolverSettings
from .expr import BinaryOp, Constant, FunctionModel, Variable, parse_model
from .guard import guarded
from .orbit import DosSolution, solve_orbit
from .param_check import ArgKind, ParamCheck, dimension, quantum_number

logger = logging.getLogger(__name__)

SQRT3 = math.sqrt(3.0)
PAIR_VARIABLE = "x"

_QN_CHECKS = (
    ParamCheck("D", dimension(), ArgKind.KEYWORD),
    ParamCheck("L", quantum_number(), ArgKind.KEYWORD),
    ParamCheck("N", quantum_number(), ArgKind.KEYWORD),
)


@guarded(L=quantum_number(), D=dimension())
def lambda3(L: int, D: int) -> float:
    return (L + D - 2) / SQRT3


@guarded(N=quantum_number())
def nu3(N: int) -> float:
    return (N + 1) / SQRT3


@dataclass(frozen=True)
class QuantumNumbers3B:
    """``L = l1 + l2`` and ``N = n1 + n2`` summed over the two Jacobi coordinates."""

    D: int
    L: int
    N: int

    def __post_init__(self):
        for check in _QN_CHECKS:
            check.validate(getattr(self, check.name))

    @property
    def lam(self) -> float:
        return lambda3(self.L, self.D)

    @property
    def nu(self) -> float:
        return nu3(self.N)


@dataclass(frozen=True)
class ThreeBodySpec:
    """One kinetic term shared by the three particles, plus the U and V potentials."""

    T: FunctionModel
    U: FunctionModel
    V: FunctionModel

    @classmethod
    def from_sources(
        cls,
        T: str,
        U: str,
        V: str,
        kinetic_var: str = "p",
        potential_var: str = "r",
        parameters: Mapping[str, float] | None = None,
    ) -> "ThreeBodySpec":
        return cls(
            parse_model(T, kinetic_var, parameters),
            parse_model(U, potential_var, parameters),
            parse_model(V, potential_var, parameters),
        )

    @cached_property
    def W(self) -> FunctionModel:
        return effective_potential(self)


def effective_potential(spec: ThreeBodySpec) -> FunctionModel:
    """``W(x) = U(x/sqrt(3)) + V(x)`` as a composed model in ``x``."""
    to_center = FunctionModel(BinaryOp("/", Variable(PAIR_VARIABLE), Constant(SQRT3)), PAIR_VARIABLE)
    return spec.U.compose(to_center) + spec.V.with_variable(PAIR_VARIABLE)


def dos3_energy(
    spec: ThreeBodySpec,
    qn: QuantumNumbers3B,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> DosSolution:
    solution = solve_orbit(spec.T, spec.W, qn.lam, qn.nu, multiplicity=3.0, settings=settings, method="dos3")
    logger.debug("DOS3 D=%d L=%d N=%d: x0=%.12g E=%.12g", qn.D, qn.L, qn.N, solution.r0, solution.E)
    return solution


def dos3_energy_squared(
    spec: ThreeBodySpec,
    qn: QuantumNumbers3B,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> float:
    return dos3_energy(spec, qn, settings).E_squared


def regge_slope_ratio(
    energy_squared: Callable[[int, int], float],
    orbital: int = 1,
    radial: int = 0,
) -> float:
    """Ratio of the radial to the orbital Regge slope of ``energy_squared(orbital, radial)``.

    Slopes are unit differences, exact when E**2 is linear in both numbers.
    """
    base = energy_squared(orbital, radial)
    radial_slope = energy_squared(orbital, radial + 1) - base
    orbital_slope = energy_squared(orbital + 1, radial) - base
    return radial_slope / orbital_slope
