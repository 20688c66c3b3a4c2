"""Auxiliary-field (envelope) approximation.

The Hamiltonian is replaced by a solvable one built on an auxiliary potential
P. The energy comes from the same stationary-orbit condition as the DOS
method with ``lam`` replaced by the global quantum number Q of P, and without
radial quanta. Whether the result bounds the true level from above or below
follows from the convexity of ``h(y) = T(sqrt(y))`` and ``g(z) = V(P^-1(z))``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from .config import DEFAULT_SETTINGS, SolverSettings
from .dos3 import SQRT3, ThreeBodySpec
from .errors import DomainError
from .expr import BinaryOp, Call, Constant, FunctionModel, Negate, Power, Variable
from .guard import guarded
from .orbit import find_circular_orbit
from .param_check import dimension, quantum_number

logger = logging.getLogger(__name__)

CONVEXITY_RTOL = 1e-12


class AuxPotential(Enum):
    HARMONIC = "harmonic"  # P(x) = x^2
    COULOMB_LIKE = "coulomb-like"  # P(x) = -1/x


class ConvexityVerdict(Enum):
    CONCAVE = "concave"
    CONVEX = "convex"
    FLAT = "flat"
    MIXED = "mixed"


class BoundClass(Enum):
    UPPER_BOUND = "UpperBound"
    LOWER_BOUND = "LowerBound"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class BoundClassification:
    bound: BoundClass
    h: ConvexityVerdict
    g: ConvexityVerdict

    @property
    def exact(self) -> bool:
        """Both h and g flat: the Hamiltonian belongs to the auxiliary family."""
        return self.h is ConvexityVerdict.FLAT and self.g is ConvexityVerdict.FLAT

    def as_dict(self) -> dict[str, Any]:
        return {"bound": self.bound.value, "h": self.h.value, "g": self.g.value, "exact": self.exact}


@dataclass(frozen=True)
class AfSolution:
    r0: float
    E: float
    Q: float
    aux: AuxPotential
    diagnostics: dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    @property
    def E_squared(self) -> float:
        return self.E * self.E


@guarded(l=quantum_number(), n=quantum_number(), D=dimension())
def af_quantum_number(aux: AuxPotential, l: int, n: int, D: int) -> float:
    if aux is AuxPotential.HARMONIC:
        return 2 * n + l + D / 2
    return n + l + (D - 1) / 2


def _af_orbit(T, V, Q, settings, multiplicity, aux) -> AfSolution:
    if Q <= 0:
        raise DomainError(f"Auxiliary quantum number must be positive, got {Q:g}", Q)
    orbit = find_circular_orbit(T, V, Q, settings)
    energy = multiplicity * orbit.energy
    return AfSolution(
        r0=orbit.radius,
        E=energy,
        Q=Q,
        aux=aux,
        diagnostics={
            "residual": orbit.residual,
            "roots_found": orbit.roots_found,
            "discarded_roots": list(orbit.discarded),
        },
    )


def af2_solve(
    T: FunctionModel,
    V: FunctionModel,
    l: int,
    n: int,
    D: int,
    aux: AuxPotential = AuxPotential.HARMONIC,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> AfSolution:
    Q = af_quantum_number(aux, l, n, D)
    return _af_orbit(T, V, Q, settings, 1.0, aux)


def af2_energy(
    T: FunctionModel,
    V: FunctionModel,
    l: int,
    n: int,
    D: int,
    aux: AuxPotential = AuxPotential.HARMONIC,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> float:
    return af2_solve(T, V, l, n, D, aux, settings).E


@guarded(L=quantum_number(), N=quantum_number(), D=dimension())
def af3_solve(
    spec: ThreeBodySpec,
    L: int,
    N: int,
    D: int,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> AfSolution:
    """Harmonic auxiliary only: ``lam = (2N + L + D)/sqrt(3)``, ``E = 3*[T + W]``."""
    Q = (2 * N + L + D) / SQRT3
    return _af_orbit(spec.T, spec.W, Q, settings, 3.0, AuxPotential.HARMONIC)


def af3_energy(
    spec: ThreeBodySpec,
    L: int,
    N: int,
    D: int,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> float:
    return af3_solve(spec, L, N, D, settings).E


def _aux_inverse(aux: AuxPotential, variable: str) -> FunctionModel:
    z = Variable(variable)
    if aux is AuxPotential.HARMONIC:
        return FunctionModel(Call("sqrt", z), variable)
    return FunctionModel(Negate(BinaryOp("/", Constant(1.0), z)), variable)


def _aux_potential(aux: AuxPotential, variable: str) -> FunctionModel:
    x = Variable(variable)
    if aux is AuxPotential.HARMONIC:
        return FunctionModel(Power(x, Constant(2.0)), variable)
    return FunctionModel(Negate(BinaryOp("/", Constant(1.0), x)), variable)


def _verdict(f: FunctionModel, samples: np.ndarray) -> ConvexityVerdict:
    jet = f.jet(samples)
    if not (np.all(np.isfinite(jet.value)) and np.all(np.isfinite(jet.d2))):
        raise DomainError(f"'{f}' is not finite on the convexity sampling range")
    # natural size of a second derivative at each sample
    scale = np.abs(jet.d1 / samples) + np.abs(jet.value / samples**2)
    slack = CONVEXITY_RTOL * np.maximum(scale, np.finfo(float).tiny)
    concave = bool(np.all(jet.d2 <= slack))
    convex = bool(np.all(jet.d2 >= -slack))
    if concave and convex:
        return ConvexityVerdict.FLAT
    if concave:
        return ConvexityVerdict.CONCAVE
    if convex:
        return ConvexityVerdict.CONVEX
    return ConvexityVerdict.MIXED


def classify_bound(
    T: FunctionModel,
    V: FunctionModel,
    aux: AuxPotential,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> BoundClassification:
    """Direction of the auxiliary-field bound, decided on a sampled range.

    A flat function never vetoes; both flat is reported as an upper bound
    with ``exact`` set.
    """
    lo, hi = settings.convexity_range
    samples = np.logspace(math.log10(lo), math.log10(hi), settings.convexity_points)

    h = T.compose(FunctionModel(Call("sqrt", Variable("y")), "y"))
    g = V.compose(_aux_inverse(aux, "z"))
    z_samples = samples if aux is AuxPotential.HARMONIC else -samples[::-1]

    # T proportional to p^2 or V to P: that factor is already in the auxiliary family
    if T.proportional_to(_aux_potential(AuxPotential.HARMONIC, T.variable), samples):
        h_verdict = ConvexityVerdict.FLAT
    else:
        h_verdict = _verdict(h, samples)
    if V.proportional_to(_aux_potential(aux, V.variable), samples):
        g_verdict = ConvexityVerdict.FLAT
    else:
        g_verdict = _verdict(g, z_samples)
    verdicts = {h_verdict, g_verdict} - {ConvexityVerdict.FLAT}

    if not verdicts or verdicts == {ConvexityVerdict.CONCAVE}:
        bound = BoundClass.UPPER_BOUND
    elif verdicts == {ConvexityVerdict.CONVEX}:
        bound = BoundClass.LOWER_BOUND
    else:
        bound = BoundClass.UNKNOWN
        logger.warning("No definite bound: h is %s, g is %s", h_verdict.value, g_verdict.value)
    return BoundClassification(bound, h_verdict, g_verdict)


def default_aux(V: FunctionModel, settings: SolverSettings = DEFAULT_SETTINGS) -> AuxPotential:
    """Harmonic for confining potentials, Coulomb-like otherwise.

    Confining means V' > 0 on every sample and the virial ``r*V'(r)`` does not
    decay between the ends of the sampling range.
    """
    lo, hi = settings.convexity_range
    samples = np.logspace(math.log10(lo), math.log10(hi), settings.convexity_points)
    slope = V.derivative(samples)
    virial = samples * slope
    if np.all(slope > 0) and virial[-1] >= virial[0]:
        return AuxPotential.HARMONIC
    return AuxPotential.COULOMB_LIKE
