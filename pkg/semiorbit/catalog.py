"""Closed-form spectra, model builders and published reference values.

Everything here is an independent formula; :mod:`semiorbit.oracle` checks the
numerical pipelines against it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Any

from .dos3 import SQRT3, ThreeBodySpec
from .errors import DomainError
from .expr import FunctionModel, constant_model, parse_model
from .guard import guarded
from .param_check import ArgKind, ParamCheck, between, dimension, non_negative, positive, quantum_number

SQRT2 = math.sqrt(2.0)

# --------------------------------------------------------------------------
# Parameters
# --------------------------------------------------------------------------

_PARAM_CHECKS = (
    ParamCheck("m", positive(), ArgKind.KEYWORD),
    ParamCheck("anyon_alpha", between(0.0, 1.0), ArgKind.KEYWORD),
    ParamCheck("beta", non_negative(), ArgKind.KEYWORD),
)


@dataclass(frozen=True)
class ModelParams:
    """Strengths shared by the catalog models.

    ``coulomb_alpha`` is a coupling, ``anyon_alpha`` a statistics parameter.
    """

    m: float = 1.0
    k: float = 1.0
    rho: float = 0.0
    coulomb_alpha: float = 1.0
    anyon_alpha: float = 0.0
    a: float = 1.0
    b: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        for check in _PARAM_CHECKS:
            check.validate(getattr(self, check.name))

    @property
    def c(self) -> float:
        return self.a + SQRT3 * self.b

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ModelParams":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"Unknown model parameters: {sorted(unknown)}")
        return cls(**{key: float(value) for key, value in data.items()})

    def copy_with(self, **changes) -> "ModelParams":
        return replace(self, **changes)


# --------------------------------------------------------------------------
# Model builders
# --------------------------------------------------------------------------


@guarded(m=positive())
def nonrelativistic_kinetic(m: float = 1.0) -> FunctionModel:
    return parse_model("p^2/(2*m)", "p", {"m": m})


@guarded(factor=positive())
def ultrarelativistic_kinetic(factor: float = 1.0) -> FunctionModel:
    return parse_model("c*sqrt(p^2)", "p", {"c": factor})


@guarded(m=positive(), beta=non_negative())
def minimal_length_kinetic(m: float = 1.0, beta: float = 0.0) -> FunctionModel:
    return parse_model("p^2/(2*m) + beta*p^4/m", "p", {"m": m, "beta": beta})


def harmonic_potential(k: float = 1.0, var: str = "r") -> FunctionModel:
    """``k*r^2/2``."""
    return parse_model(f"k*{var}^2/2", var, {"k": k})


def quadratic_potential(k: float = 1.0, var: str = "r") -> FunctionModel:
    """``k*r^2``, the pairwise and one-body oscillator form used for three bodies."""
    return parse_model(f"k*{var}^2", var, {"k": k})


def coulomb_potential(alpha: float = 1.0, var: str = "r") -> FunctionModel:
    return parse_model(f"-alpha/{var}", var, {"alpha": alpha})


def linear_potential(a: float = 1.0, var: str = "r") -> FunctionModel:
    return parse_model(f"a*{var}", var, {"a": a})


@guarded(a=positive())
def meson_hamiltonian(a: float = 1.0) -> tuple[FunctionModel, FunctionModel]:
    """Two massless particles bound by a linear potential."""
    return ultrarelativistic_kinetic(2.0), linear_potential(a)


def baryon_spec(a: float = 1.0, b: float = 0.0) -> ThreeBodySpec:
    """Three massless particles with a one-body ``a*y`` and pairwise ``b*x`` confinement."""
    if a < 0 or b < 0 or a + b <= 0:
        raise DomainError(f"Need a, b >= 0 and a + b > 0, got a={a}, b={b}")
    return ThreeBodySpec(ultrarelativistic_kinetic(), linear_potential(a), linear_potential(b))


@guarded(m=positive())
def oscillator_spec(m: float = 1.0, k: float = 1.0, rho: float = 0.0) -> ThreeBodySpec:
    if k + 3 * rho <= 0:
        raise DomainError(f"Need k + 3*rho > 0, got k={k}, rho={rho}")
    return ThreeBodySpec(nonrelativistic_kinetic(m), quadratic_potential(k), quadratic_potential(rho))


@guarded(m=positive(), k=positive(), beta=non_negative())
def minimal_length_spec(m: float = 1.0, k: float = 1.0, beta: float = 0.0) -> ThreeBodySpec:
    return ThreeBodySpec(minimal_length_kinetic(m, beta), constant_model(0.0, "r"), quadratic_potential(k))


# --------------------------------------------------------------------------
# Closed forms
# --------------------------------------------------------------------------


@guarded(m=positive(), D=dimension(), l=quantum_number(), n=quantum_number())
def coulomb_dos(m: float, alpha: float, D: int, l: int, n: int) -> float:
    lam = l + (D - 2) / 2
    if lam <= 0:
        raise DomainError("The DOS Coulomb level needs l + (D-2)/2 > 0", lam)
    scale = m * alpha * alpha
    return -scale / (2 * lam**2) + scale / lam**3 * (n + 0.5)


@guarded(m=positive(), D=dimension(), l=quantum_number(), n=quantum_number())
def coulomb_exact(m: float, alpha: float, D: int, l: int, n: int) -> float:
    return -m * alpha * alpha / (2 * (n + l + (D - 1) / 2) ** 2)


@guarded(m=positive(), k=positive(), D=dimension(), l=quantum_number(), n=quantum_number())
def ho2_exact(m: float, k: float, D: int, l: int, n: int) -> float:
    return math.sqrt(k / m) * (2 * n + l + D / 2)


@guarded(
    m=positive(),
    D=dimension(),
    l1=quantum_number(),
    l2=quantum_number(),
    n1=quantum_number(),
    n2=quantum_number(),
)
def ho3_exact(m: float, k: float, rho: float, D: int, l1: int, l2: int, n1: int, n2: int) -> float:
    if k + 3 * rho <= 0:
        raise DomainError(f"Need k + 3*rho > 0, got k={k}, rho={rho}")
    return math.sqrt(2 * (k + 3 * rho) / m) * (2 * n1 + 2 * n2 + l1 + l2 + D)


@guarded(mu=positive(), k=positive(), l=quantum_number(), n=quantum_number(), alpha=between(0.0, 1.0))
def anyon_ho_exact(mu: float, k: float, l: int, n: int, alpha: float) -> float:
    return math.sqrt(k / mu) * (2 * n + abs(l - alpha) + 1)


@guarded(a=non_negative(), D=dimension(), l=quantum_number(), n=quantum_number())
def meson_sq(a: float, D: int, l: int, n: int) -> float:
    return 8 * a * (SQRT2 * n + l + (D - 2 + SQRT2) / 2)


@guarded(a=non_negative(), n=quantum_number())
def meson_wkb_sq(a: float, n: int) -> float:
    return 4 * math.pi * a * (n + 0.5)


@guarded(a=non_negative(), D=dimension(), l=quantum_number(), n=quantum_number())
def meson_af_sq(a: float, D: int, l: int, n: int) -> float:
    return 8 * a * (2 * n + l + D / 2)


@guarded(a=non_negative(), b=non_negative(), D=dimension(), L=quantum_number(), N=quantum_number())
def baryon_sq(a: float, b: float, D: int, L: int, N: int) -> float:
    c = a + SQRT3 * b
    return 12 * c * (SQRT2 * N + L + D - 2 + SQRT2)


@guarded(a=non_negative(), b=non_negative(), N=quantum_number())
def baryon_wkb_sq(a: float, b: float, N: int) -> float:
    return 6 * math.pi * (a + SQRT3 * b) * (N + 1)


@guarded(a=non_negative(), b=non_negative(), D=dimension(), L=quantum_number(), N=quantum_number())
def baryon_af_sq(a: float, b: float, D: int, L: int, N: int) -> float:
    return 12 * (a + SQRT3 * b) * (2 * N + L + D)


@guarded(m=positive(), k=positive(), beta=non_negative(), D=dimension(), L=quantum_number(), N=quantum_number())
def minimal_length_ho3(m: float, k: float, beta: float, D: int, L: int, N: int) -> float:
    """First order in beta; pairwise oscillator ``k*x^2`` only."""
    return math.sqrt(6 * k / m) * (2 * N + L + D) + 2 * k * (L + D - 2) * (6 * N + L + D + 4) * beta


@guarded(m=positive(), k=positive(), beta=non_negative(), lam=positive())
def minimal_length_x0(m: float, k: float, beta: float, lam: float) -> float:
    s = (2 * k * m) ** 0.25
    return math.sqrt(lam) / s + lam**1.5 * s * beta


# --------------------------------------------------------------------------
# Published meson spectrum, E/sqrt(a) for D=3
# --------------------------------------------------------------------------

_TABLE1 = {
    # (l, n): (lagrange mesh, DOS squared, auxiliary field)
    (0, 0): (3.157, 3.108, 3.464),
    (0, 1): (4.709, 4.579, 5.292),
    (0, 2): (5.889, 5.682, 6.633),
    (0, 3): (6.871, 6.603, 7.746),
    (1, 0): (4.225, 4.202, 4.472),
    (1, 1): (5.457, 5.382, 6.000),
    (1, 2): (6.483, 6.347, 7.211),
    (1, 3): (7.375, 7.183, 8.246),
    (2, 0): (5.079, 5.065, 5.292),
    (2, 1): (6.130, 6.080, 6.633),
    (2, 2): (7.047, 6.949, 7.746),
    (2, 3): (7.867, 7.720, 8.718),
    (3, 0): (5.811, 5.801, 6.000),
    (3, 1): (6.724, 6.706, 7.211),
    (3, 2): (7.577, 7.502, 8.246),
    (3, 3): (8.338, 8.222, 9.165),
}

TABLE1_TOLERANCE = 0.0005


@dataclass(frozen=True)
class ReferenceRow:
    l: int
    n: int
    lagrange: float
    dos: float
    af: float


@dataclass(frozen=True)
class ReferenceTable:
    rows: tuple[ReferenceRow, ...]

    def __post_init__(self):
        keys = {(row.l, row.n) for row in self.rows}
        if len(self.rows) != 16 or keys != {(l, n) for l in range(4) for n in range(4)}:
            raise ValueError("Reference table must hold each (l, n) in {0..3}x{0..3} exactly once")
        for row in self.rows:
            if row.lagrange > row.af:
                raise ValueError(f"Auxiliary-field value below the accurate one at l={row.l}, n={row.n}")

    def cell(self, l: int, n: int) -> ReferenceRow:
        for row in self.rows:
            if (row.l, row.n) == (l, n):
                return row
        raise KeyError((l, n))

    def perturbed(self, l: int, n: int, delta: float) -> "ReferenceTable":
        """A copy with the DOS value of one cell shifted by ``delta``."""
        rows = tuple(
            replace(row, dos=row.dos + delta) if (row.l, row.n) == (l, n) else row for row in self.rows
        )
        return ReferenceTable(rows)


def table1_reference() -> ReferenceTable:
    return ReferenceTable(tuple(ReferenceRow(l, n, *values) for (l, n), values in sorted(_TABLE1.items())))


# --------------------------------------------------------------------------
# Baryon Regge curves
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Fig1Row:
    Q: int
    L: int
    N: int
    E_dos: float
    E_af: float


def quanta_pairs(Q: int) -> list[tuple[int, int]]:
    """All (L, N) with ``L + 2N = Q``, highest L first."""
    return [(Q - 2 * N, N) for N in range(Q // 2 + 1)]


@guarded(qmax=quantum_number(), D=dimension())
def fig1_curves(a: float, b: float, qmax: int, D: int = 3) -> list[Fig1Row]:
    """Closed-form DOS and AF baryon levels for every ``L + 2N <= qmax``.

    At D=2, L=0 the DOS expansion degenerates and the WKB level takes its place.
    """
    rows = []
    for Q in range(qmax + 1):
        for L, N in quanta_pairs(Q):
            if L == 0 and D == 2:
                E_dos = math.sqrt(baryon_wkb_sq(a, b, N))
            else:
                E_dos = math.sqrt(baryon_sq(a, b, D, L, N))
            rows.append(Fig1Row(Q, L, N, E_dos, math.sqrt(baryon_af_sq(a, b, D, L, N))))
    return rows
