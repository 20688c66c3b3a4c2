"""Semiclassical spectra of few-body Hamiltonians with arbitrary kinetic energy.

Dominantly-orbital-state, WKB and auxiliary-field approximations for two
bodies and three identical bodies, with closed-form references.
"""
__version__ = "0.1.0"

from .af import (
    AfSolution,
    AuxPotential,
    BoundClass,
    BoundClassification,
    ConvexityVerdict,
    af2_energy,
    af2_solve,
    af3_energy,
    af3_solve,
    af_quantum_number,
    classify_bound,
    default_aux,
)
from .config import SolverSettings
from .dos2 import (
    DosSolution,
    QuantumNumbers2B,
    anyon_energy,
    anyon_lambda,
    anyon_radius,
    dos_energy,
    dos_energy_squared,
    lambda_of,
    solve_r0,
)
from .dos3 import (
    QuantumNumbers3B,
    ThreeBodySpec,
    dos3_energy,
    dos3_energy_squared,
    effective_potential,
    lambda3,
    nu3,
    regge_slope_ratio,
)
from .errors import (
    DegenerateLambdaError,
    DomainError,
    ExpressionSyntaxError,
    NoConvergenceError,
    NonMonotoneError,
    NoOrbitError,
    NotBracketedError,
    SemiOrbitError,
    UnknownIdentifierError,
    UnstableOrbitError,
)
from .expr import FunctionModel, Jet2, eval_jet2, invert_monotone, parse, parse_model
from .guard import GuardContext, guarded
from .param_check import ParamCheck
from .wkb import action_integral, wkb2_energy, wkb2_solve, wkb3_energy, wkb3_solve

__all__ = [
    "AfSolution",
    "AuxPotential",
    "BoundClass",
    "BoundClassification",
    "ConvexityVerdict",
    "DegenerateLambdaError",
    "DomainError",
    "DosSolution",
    "ExpressionSyntaxError",
    "FunctionModel",
    "GuardContext",
    "Jet2",
    "NoConvergenceError",
    "NoOrbitError",
    "NonMonotoneError",
    "NotBracketedError",
    "ParamCheck",
    "QuantumNumbers2B",
    "QuantumNumbers3B",
    "SemiOrbitError",
    "SolverSettings",
    "ThreeBodySpec",
    "UnknownIdentifierError",
    "UnstableOrbitError",
    "action_integral",
    "af2_energy",
    "af2_solve",
    "af3_energy",
    "af3_solve",
    "af_quantum_number",
    "anyon_energy",
    "anyon_lambda",
    "anyon_radius",
    "classify_bound",
    "default_aux",
    "dos3_energy",
    "dos3_energy_squared",
    "dos_energy",
    "dos_energy_squared",
    "effective_potential",
    "eval_jet2",
    "guarded",
    "invert_monotone",
    "lambda3",
    "lambda_of",
    "nu3",
    "parse",
    "parse_model",
    "regge_slope_ratio",
    "solve_r0",
    "wkb2_energy",
    "wkb2_solve",
    "wkb3_energy",
    "wkb3_solve",
]
