"""Cross-validation of the numerical pipelines against the closed forms.

Each family pairs a solver with a catalog formula over a grid of quantum
numbers and model strengths. Cells are independent and may be evaluated
concurrently.
"""
from __future__ import annotations

import asyncio
import logging
import math
from dataclasses import dataclass
from functools import partial
from typing import Callable, Iterable

from . import catalog
from .af import AuxPotential, af2_energy, af3_energy
from .config import DEFAULT_SETTINGS, SolverSettings
from .dos2 import QuantumNumbers2B, anyon_energy, dos_energy, dos_energy_squared
from .dos3 import QuantumNumbers3B, dos3_energy, dos3_energy_squared
from .errors import SemiOrbitError
from .wkb import wkb2_energy, wkb3_energy

logger = logging.getLogger(__name__)

EXACT_RTOL = 1e-9
WKB_RTOL = 1e-8
# the closed form is first order in beta
MINIMAL_LENGTH_RTOL = 1e-5


@dataclass(frozen=True)
class Cell:
    label: str
    compute: Callable[[], float]
    reference: Callable[[], float]


@dataclass(frozen=True)
class CellResult:
    label: str
    value: float
    reference: float
    rel_error: float
    error: str | None = None


@dataclass(frozen=True)
class Family:
    name: str
    tolerance: float
    cells: tuple[Cell, ...]


@dataclass(frozen=True)
class FamilyReport:
    name: str
    cells: int
    max_rel_error: float
    tolerance: float
    failures: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.failures


def relative_error(value: float, reference: float) -> float:
    """Relative error, falling back to absolute error for references near zero."""
    if not math.isfinite(value):
        return math.inf
    if abs(reference) > 1e-12:
        return abs(value - reference) / abs(reference)
    return abs(value - reference)


def _evaluate(cell: Cell) -> CellResult:
    try:
        value = cell.compute()
        reference = cell.reference()
    except SemiOrbitError as exc:
        return CellResult(cell.label, math.nan, math.nan, math.inf, f"{type(exc).__name__}: {exc}")
    return CellResult(cell.label, value, reference, relative_error(value, reference))


async def evaluate_cells_async(cells: Iterable[Cell], workers: int = 4) -> list[CellResult]:
    semaphore = asyncio.Semaphore(workers)

    async def run(cell: Cell) -> CellResult:
        async with semaphore:
            return await asyncio.to_thread(_evaluate, cell)

    return list(await asyncio.gather(*(run(cell) for cell in cells)))


def evaluate_cells(cells: Iterable[Cell], workers: int = 4) -> list[CellResult]:
    return asyncio.run(evaluate_cells_async(list(cells), workers))


def summarize(family: Family, results: list[CellResult]) -> FamilyReport:
    worst = max((r.rel_error for r in results), default=0.0)
    failures = tuple(
        r.label + (f" ({r.error})" if r.error else f" rel.err {r.rel_error:.3g}")
        for r in results
        if r.error or not r.rel_error <= family.tolerance
    )
    return FamilyReport(family.name, len(results), worst, family.tolerance, failures)


# --------------------------------------------------------------------------
# Families
# --------------------------------------------------------------------------

_MASS_STRENGTH = ((1.0, 1.0), (0.5, 2.0), (2.0, 0.5))
_THREE_BODY_OSCILLATORS = ((1.0, 1.0, 0.0), (0.5, 0.0, 1.0), (2.0, 1.0, 1.0))
_BARYON_STRENGTHS = ((1.0, 0.0), (0.0, 1.0), (0.2, 0.1))


def _squared(fn: Callable[[], float]) -> Callable[[], float]:
    def inner() -> float:
        return fn() ** 2

    return inner


def _ho2_family(settings: SolverSettings) -> Family:
    cells = []
    for m, k in _MASS_STRENGTH:
        T, V = catalog.nonrelativistic_kinetic(m), catalog.harmonic_potential(k)
        for D in range(2, 6):
            for l in range(1, 11):
                for n in range(6):
                    qn = QuantumNumbers2B(D, l, n)
                    cells.append(
                        Cell(
                            f"m={m} k={k} D={D} l={l} n={n}",
                            lambda T=T, V=V, qn=qn: dos_energy(T, V, qn, settings).E,
                            partial(catalog.ho2_exact, m, k, D, l, n),
                        )
                    )
    return Family("ho2-dos", EXACT_RTOL, tuple(cells))


def _coulomb2_family(settings: SolverSettings) -> Family:
    cells = []
    for m, alpha in _MASS_STRENGTH:
        T, V = catalog.nonrelativistic_kinetic(m), catalog.coulomb_potential(alpha)
        for D in range(2, 6):
            for l in range(1, 11):
                for n in range(6):
                    qn = QuantumNumbers2B(D, l, n)
                    cells.append(
                        Cell(
                            f"m={m} alpha={alpha} D={D} l={l} n={n}",
                            lambda T=T, V=V, qn=qn: dos_energy(T, V, qn, settings).E,
                            partial(catalog.coulomb_dos, m, alpha, D, l, n),
                        )
                    )
    return Family("coulomb2-dos", EXACT_RTOL, tuple(cells))


def _meson_families(settings: SolverSettings) -> list[Family]:
    T, V = catalog.meson_hamiltonian(1.0)
    dos_cells, af_cells = [], []
    for D in (2, 3, 4):
        for l in range(0 if D > 2 else 1, 11):
            for n in range(6):
                qn = QuantumNumbers2B(D, l, n)
                dos_cells.append(
                    Cell(
                        f"D={D} l={l} n={n}",
                        partial(dos_energy_squared, T, V, qn, settings),
                        partial(catalog.meson_sq, 1.0, D, l, n),
                    )
                )
        for l in range(7):
            for n in range(7):
                af_cells.append(
                    Cell(
                        f"D={D} l={l} n={n}",
                        _squared(partial(af2_energy, T, V, l, n, D, AuxPotential.HARMONIC, settings)),
                        partial(catalog.meson_af_sq, 1.0, D, l, n),
                    )
                )
    wkb_cells = [
        Cell(f"n={n}", _squared(partial(wkb2_energy, T, V, n, settings)), partial(catalog.meson_wkb_sq, 1.0, n))
        for n in range(9)
    ]
    return [
        Family("meson-dos-squared", EXACT_RTOL, tuple(dos_cells)),
        Family("meson-af", EXACT_RTOL, tuple(af_cells)),
        Family("meson-wkb", WKB_RTOL, tuple(wkb_cells)),
    ]


def _two_body_exact_af(settings: SolverSettings) -> list[Family]:
    oscillator = (catalog.nonrelativistic_kinetic(), catalog.harmonic_potential())
    coulomb = (catalog.nonrelativistic_kinetic(), catalog.coulomb_potential())
    ho_cells, coulomb_cells = [], []
    for D in (2, 3, 4):
        for l in range(7):
            for n in range(7):
                ho_cells.append(
                    Cell(
                        f"D={D} l={l} n={n}",
                        partial(af2_energy, *oscillator, l, n, D, AuxPotential.HARMONIC, settings),
                        partial(catalog.ho2_exact, 1.0, 1.0, D, l, n),
                    )
                )
                coulomb_cells.append(
                    Cell(
                        f"D={D} l={l} n={n}",
                        partial(af2_energy, *coulomb, l, n, D, AuxPotential.COULOMB_LIKE, settings),
                        partial(catalog.coulomb_exact, 1.0, 1.0, D, l, n),
                    )
                )
    return [
        Family("ho2-af", EXACT_RTOL, tuple(ho_cells)),
        Family("coulomb2-af", EXACT_RTOL, tuple(coulomb_cells)),
    ]


def _ho2_wkb_family(settings: SolverSettings) -> Family:
    cells = []
    for m, k in _MASS_STRENGTH:
        T, V = catalog.nonrelativistic_kinetic(m), catalog.harmonic_potential(k)
        for n in range(9):
            cells.append(
                Cell(
                    f"m={m} k={k} n={n}",
                    partial(wkb2_energy, T, V, n, settings),
                    partial(catalog.ho2_exact, m, k, 2, 0, n),
                )
            )
    return Family("ho2-wkb", WKB_RTOL, tuple(cells))


def _ho3_families(settings: SolverSettings) -> list[Family]:
    dos_cells = []
    for m, k, rho in _THREE_BODY_OSCILLATORS:
        spec = catalog.oscillator_spec(m, k, rho)
        for D in range(2, 6):
            for L in range(1, 11):
                for N in range(6):
                    qn = QuantumNumbers3B(D, L, N)
                    dos_cells.append(
                        Cell(
                            f"m={m} k={k} rho={rho} D={D} L={L} N={N}",
                            lambda spec=spec, qn=qn: dos3_energy(spec, qn, settings).E,
                            partial(catalog.ho3_exact, m, k, rho, D, L, 0, N, 0),
                        )
                    )
    spec = catalog.oscillator_spec(1.0, 1.0, 1.0)
    wkb_cells = [
        Cell(f"N={N}", partial(wkb3_energy, spec, N, settings), partial(catalog.ho3_exact, 1.0, 1.0, 1.0, 2, 0, 0, N, 0))
        for N in range(9)
    ]
    return [Family("ho3-dos", EXACT_RTOL, tuple(dos_cells)), Family("ho3-wkb", WKB_RTOL, tuple(wkb_cells))]


def _baryon_families(settings: SolverSettings) -> list[Family]:
    dos_cells, af_cells = [], []
    for a, b in _BARYON_STRENGTHS:
        spec = catalog.baryon_spec(a, b)
        for D in (2, 3, 4):
            for L in range(1, 11):
                for N in range(6):
                    dos_cells.append(
                        Cell(
                            f"a={a} b={b} D={D} L={L} N={N}",
                            partial(dos3_energy_squared, spec, QuantumNumbers3B(D, L, N), settings),
                            partial(catalog.baryon_sq, a, b, D, L, N),
                        )
                    )
            for L in range(7):
                for N in range(7):
                    af_cells.append(
                        Cell(
                            f"a={a} b={b} D={D} L={L} N={N}",
                            _squared(partial(af3_energy, spec, L, N, D, settings)),
                            partial(catalog.baryon_af_sq, a, b, D, L, N),
                        )
                    )
    spec = catalog.baryon_spec(1.0, 0.0)
    wkb_cells = [
        Cell(f"N={N}", _squared(partial(wkb3_energy, spec, N, settings)), partial(catalog.baryon_wkb_sq, 1.0, 0.0, N))
        for N in range(9)
    ]
    return [
        Family("baryon-dos-squared", EXACT_RTOL, tuple(dos_cells)),
        Family("baryon-af", EXACT_RTOL, tuple(af_cells)),
        Family("baryon-wkb", WKB_RTOL, tuple(wkb_cells)),
    ]


def _anyon_family(settings: SolverSettings) -> Family:
    T, V = catalog.nonrelativistic_kinetic(1.0), catalog.harmonic_potential(1.0)
    cells = []
    for alpha in (0.0, 0.25, 0.5, 0.75, 1.0):
        for l in range(3):
            if l == alpha:
                continue
            for n in range(3):
                cells.append(
                    Cell(
                        f"alpha={alpha} l={l} n={n}",
                        lambda l=l, n=n, alpha=alpha: anyon_energy(T, V, l, n, alpha, settings).E,
                        partial(catalog.anyon_ho_exact, 1.0, 1.0, l, n, alpha),
                    )
                )
    return Family("anyon-ho", EXACT_RTOL, tuple(cells))


def _minimal_length_family(settings: SolverSettings) -> Family:
    beta = 1e-4
    spec = catalog.minimal_length_spec(1.0, 1.0, beta)
    cells = [
        Cell(
            f"beta={beta} L={L} N={N}",
            lambda qn=QuantumNumbers3B(3, L, N): dos3_energy(spec, qn, settings).E,
            partial(catalog.minimal_length_ho3, 1.0, 1.0, beta, 3, L, N),
        )
        for L, N in ((0, 0), (1, 0), (2, 1))
    ]
    return Family("minimal-length", MINIMAL_LENGTH_RTOL, tuple(cells))


def oracle_families(settings: SolverSettings = DEFAULT_SETTINGS) -> list[Family]:
    return [
        _ho2_family(settings),
        _coulomb2_family(settings),
        *_meson_families(settings),
        *_two_body_exact_af(settings),
        _ho2_wkb_family(settings),
        *_ho3_families(settings),
        *_baryon_families(settings),
        _anyon_family(settings),
        _minimal_length_family(settings),
    ]


async def run_oracle_suite_async(
    settings: SolverSettings = DEFAULT_SETTINGS,
    workers: int = 4,
    families: list[Family] | None = None,
) -> list[FamilyReport]:
    reports = []
    for family in families if families is not None else oracle_families(settings):
        results = await evaluate_cells_async(family.cells, workers)
        report = summarize(family, results)
        logger.debug("%s: %d cells, max rel.err %.3g", report.name, report.cells, report.max_rel_error)
        reports.append(report)
    return reports


def run_oracle_suite(
    settings: SolverSettings = DEFAULT_SETTINGS,
    workers: int = 4,
    families: list[Family] | None = None,
) -> list[FamilyReport]:
    return asyncio.run(run_oracle_suite_async(settings, workers, families))
