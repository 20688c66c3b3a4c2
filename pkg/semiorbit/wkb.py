"""WKB quantization for states without orbital motion (D=2 with l=0, or L=0).

The action ``integral_0^{r*} T^-1(E - V(r)) dr`` is set equal to ``pi*(n + 1/2)``
for two bodies and ``integral_0^{x*} T^-1(E/3 - W(x)) dx = pi*(N + 1)/sqrt(3)``
for three. Both inverses are computed numerically.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any

from scipy.integrate import quad
from scipy.optimize import brentq

from .config import DEFAULT_SETTINGS, SolverSettings
from .dos3 import SQRT3, ThreeBodySpec
from .errors import DomainError, NoConvergenceError, NotBracketedError
from .expr import FunctionModel, invert_monotone
from .guard import guarded
from .param_check import quantum_number

logger = logging.getLogger(__name__)

MAX_DOUBLINGS = 200


@dataclass(frozen=True)
class ActionIntegral:
    value: float
    turning_point: float
    p_max: float
    error: float


@dataclass(frozen=True)
class WkbSolution:
    E: float
    turning_point: float
    action: float
    iterations: int
    diagnostics: dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    @property
    def E_squared(self) -> float:
        return self.E * self.E


def _origin_values(T: FunctionModel, V: FunctionModel) -> tuple[float, float]:
    try:
        v0 = V(0.0)
    except DomainError as exc:
        raise DomainError(
            f"WKB quantization needs a finite potential at the origin, '{V}' is singular there", 0.0
        ) from exc
    t0 = T(0.0)
    if not (math.isfinite(t0) and math.isfinite(v0)):
        raise DomainError(f"T(0)={t0} and V(0)={v0} must both be finite", 0.0)
    return t0, v0


def _upper_limit(f: FunctionModel, level: float) -> float:
    """A point ``hi > 0`` with ``f(hi) >= level``, found by doubling from 1."""
    hi = 1.0
    for _ in range(MAX_DOUBLINGS):
        if f(hi) >= level:
            return hi
        hi *= 2.0
    raise NotBracketedError(f"'{f}' never reaches {level:.6g}")


def action_integral(
    T: FunctionModel,
    V: FunctionModel,
    E: float,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> ActionIntegral:
    """The quantization integral at energy E.

    The substitution ``r = r*(1 - u**2)`` removes the square-root behaviour of
    the integrand at the turning point r*.
    """
    t0, v0 = _origin_values(T, V)
    if E <= t0 + v0:
        return ActionIntegral(0.0, 0.0, 0.0, 0.0)

    r_star = invert_monotone(V, E - t0, 0.0, _upper_limit(V, E - t0))
    p_max = invert_monotone(T, E - v0, 0.0, _upper_limit(T, E - v0))
    t_max = T(p_max)

    def momentum(y: float) -> float:
        if y <= t0:
            return 0.0
        if y >= t_max:
            return p_max
        return invert_monotone(T, y, 0.0, p_max, check=False)

    def integrand(u: float) -> float:
        r = r_star * (1.0 - u * u)
        return 2.0 * r_star * u * momentum(E - V(r))

    value, error = quad(integrand, 0.0, 1.0, epsabs=settings.quad_tol, epsrel=0.0, limit=200)
    return ActionIntegral(value, r_star, p_max, error)


def _quantize(
    T: FunctionModel,
    V: FunctionModel,
    target: float,
    settings: SolverSettings,
) -> WkbSolution:
    t0, v0 = _origin_values(T, V)
    e_lo = t0 + v0
    span = 1.0
    iterations = 0
    while action_integral(T, V, e_lo + span, settings).value <= target:
        iterations += 1
        if iterations >= settings.max_outer_iterations:
            raise NoConvergenceError(f"Action never exceeds {target:.6g}", iterations)
        span *= 2.0
    e_hi = e_lo + span

    def mismatch(E: float) -> float:
        return action_integral(T, V, E, settings).value - target

    xtol = 1e-14 * max(1.0, abs(e_lo), abs(e_hi))
    energy, result = brentq(
        mismatch,
        e_lo,
        e_hi,
        xtol=xtol,
        rtol=max(settings.root_rtol, 1e-13),
        maxiter=settings.max_outer_iterations,
        full_output=True,
        disp=False,
    )
    iterations += result.iterations
    if not result.converged:
        raise NoConvergenceError(f"WKB energy search did not converge for target {target:.6g}", iterations)

    final = action_integral(T, V, energy, settings)
    logger.debug(
        "WKB target %.12g: E=%.15g after %d iterations, quadrature error %.2g",
        target,
        energy,
        iterations,
        final.error,
    )
    return WkbSolution(
        E=float(energy),
        turning_point=final.turning_point,
        action=final.value,
        iterations=iterations,
        diagnostics={"quad_error": final.error, "p_max": final.p_max, "target": target},
    )


@guarded(n=quantum_number())
def wkb2_solve(
    T: FunctionModel,
    V: FunctionModel,
    n: int,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> WkbSolution:
    return _quantize(T, V, math.pi * (n + 0.5), settings)


def wkb2_energy(
    T: FunctionModel,
    V: FunctionModel,
    n: int,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> float:
    return wkb2_solve(T, V, n, settings).E


@guarded(N=quantum_number())
def wkb3_solve(
    spec: ThreeBodySpec,
    N: int,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> WkbSolution:
    """Solve for ``E/3`` against the reduced problem in W, then scale back."""
    reduced = _quantize(spec.T, spec.W, math.pi * (N + 1) / SQRT3, settings)
    return WkbSolution(
        E=3.0 * reduced.E,
        turning_point=reduced.turning_point,
        action=reduced.action,
        iterations=reduced.iterations,
        diagnostics=reduced.diagnostics,
    )


def wkb3_energy(
    spec: ThreeBodySpec,
    N: int,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> float:
    return wkb3_solve(spec, N, settings).E
