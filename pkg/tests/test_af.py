import logging
import math

import pytest

from semiorbit import catalog
from semiorbit.af import (
    AuxPotential,
    BoundClass,
    ConvexityVerdict,
    af2_energy,
    af2_solve,
    af3_energy,
    af3_solve,
    af_quantum_number,
    classify_bound,
    default_aux,
)
from semiorbit.errors import DomainError
from semiorbit.expr import parse_model


@pytest.mark.parametrize(
    "aux, l, n, D, expected",
    [
        (AuxPotential.HARMONIC, 0, 0, 3, 1.5),
        (AuxPotential.COULOMB_LIKE, 1, 0, 3, 2.0),
        (AuxPotential.HARMONIC, 2, 1, 2, 5.0),
        (AuxPotential.COULOMB_LIKE, 0, 2, 2, 2.5),
    ],
)
def test_quantum_number(aux, l, n, D, expected):
    assert af_quantum_number(aux, l, n, D) == expected


def test_quantum_number_is_guarded():
    with pytest.raises(DomainError):
        af_quantum_number(AuxPotential.HARMONIC, 0, 0, 1)


def test_aux_names():
    assert AuxPotential("coulomb-like") is AuxPotential.COULOMB_LIKE
    assert BoundClass.UPPER_BOUND.value == "UpperBound"


@pytest.mark.parametrize("l, n, expected", [(0, 0, 12.0), (3, 3, 84.0), (1, 2, 52.0)])
def test_meson_examples(meson, l, n, expected):
    T, V = meson
    solution = af2_solve(T, V, l, n, 3)
    assert solution.E_squared == pytest.approx(expected, rel=1e-10)
    assert solution.Q == 2 * n + l + 1.5
    assert solution.aux is AuxPotential.HARMONIC


def test_meson_matches_published_af_column(meson):
    T, V = meson
    for row in catalog.table1_reference().rows:
        E = af2_energy(T, V, row.l, row.n, 3)
        assert E**2 == pytest.approx(catalog.meson_af_sq(1.0, 3, row.l, row.n), rel=1e-9)
        assert E == pytest.approx(row.af, abs=1e-3)
        assert E >= row.lagrange


def test_coulomb_is_exact(coulomb):
    T, V = coulomb
    E = af2_energy(T, V, 1, 0, 3, AuxPotential.COULOMB_LIKE)
    assert E == pytest.approx(-0.125, rel=1e-12)
    for D in (2, 3, 4):
        for l in range(4):
            for n in range(3):
                E = af2_energy(T, V, l, n, D, AuxPotential.COULOMB_LIKE)
                assert E == pytest.approx(catalog.coulomb_exact(1.0, 1.0, D, l, n), rel=1e-10)


def test_oscillator_is_exact(oscillator):
    T, V = oscillator
    for D in (2, 3, 4):
        for l in range(4):
            for n in range(3):
                E = af2_energy(T, V, l, n, D)
                assert E == pytest.approx(catalog.ho2_exact(1.0, 1.0, D, l, n), rel=1e-10)


def test_two_body_degeneracy(meson):
    T, V = meson
    assert af2_energy(T, V, 2, 0, 3) == af2_energy(T, V, 0, 1, 3)
    assert af2_energy(T, V, 3, 1, 3) == af2_energy(T, V, 1, 2, 3)


@pytest.mark.parametrize("L, N, expected", [(0, 0, 36.0), (2, 0, 60.0), (1, 0, 48.0)])
def test_baryon_examples(baryon, L, N, expected):
    assert af3_energy(baryon, L, N, 3) ** 2 == pytest.approx(expected, rel=1e-10)


def test_baryon_closed_form():
    spec = catalog.baryon_spec(0.2, 0.0)
    for L in range(4):
        for N in range(3):
            solution = af3_solve(spec, L, N, 3)
            assert solution.E_squared == pytest.approx(catalog.baryon_af_sq(0.2, 0.0, 3, L, N), rel=1e-10)
    assert af3_energy(spec, 0, 0, 3) == pytest.approx(math.sqrt(7.2), rel=1e-10)


def test_three_body_degeneracy(baryon):
    E_orbital = af3_energy(baryon, 2, 0, 3)
    E_radial = af3_energy(baryon, 0, 1, 3)
    assert E_orbital == pytest.approx(E_radial, rel=1e-12)


def test_three_body_oscillator_is_exact(oscillator3):
    for L in range(3):
        for N in range(3):
            E = af3_energy(oscillator3, L, N, 3)
            assert E == pytest.approx(catalog.ho3_exact(1.0, 1.0, 1.0, 3, L, 0, N, 0), rel=1e-10)


def test_af_bounds_dos_from_above_for_mesons(meson):
    from semiorbit.dos2 import QuantumNumbers2B, dos_energy_squared

    T, V = meson
    for l in range(4):
        for n in range(4):
            assert af2_energy(T, V, l, n, 3) ** 2 > dos_energy_squared(T, V, QuantumNumbers2B(3, l, n))


def test_classify_meson_is_upper_bound(meson):
    T, V = meson
    result = classify_bound(T, V, AuxPotential.HARMONIC)
    assert result.bound is BoundClass.UPPER_BOUND
    assert result.h is ConvexityVerdict.CONCAVE
    assert result.g is ConvexityVerdict.CONCAVE
    assert not result.exact


def test_classify_coulomb_is_exact(coulomb):
    T, V = coulomb
    result = classify_bound(T, V, AuxPotential.COULOMB_LIKE)
    assert result.bound is BoundClass.UPPER_BOUND
    assert result.exact
    assert result.as_dict() == {"bound": "UpperBound", "h": "flat", "g": "flat", "exact": True}


def test_classify_oscillator_is_exact(oscillator):
    T, V = oscillator
    result = classify_bound(T, V, AuxPotential.HARMONIC)
    assert result.bound is BoundClass.UPPER_BOUND
    assert result.exact


def test_classify_flat_kinetic_does_not_veto():
    T = parse_model("p^2/2", "p")
    V = parse_model("r", "r")
    result = classify_bound(T, V, AuxPotential.HARMONIC)
    assert result.h is ConvexityVerdict.FLAT
    assert result.g is ConvexityVerdict.CONCAVE
    assert result.bound is BoundClass.UPPER_BOUND


def test_classify_lower_bound():
    T = parse_model("p^4", "p")
    V = parse_model("r^4", "r")
    result = classify_bound(T, V, AuxPotential.HARMONIC)
    assert result.bound is BoundClass.LOWER_BOUND
    assert (result.h, result.g) == (ConvexityVerdict.CONVEX, ConvexityVerdict.CONVEX)


def test_classify_mixed_is_unknown(meson, caplog):
    T, _ = meson
    V = parse_model("r^4", "r")
    with caplog.at_level(logging.WARNING, logger="semiorbit.af"):
        result = classify_bound(T, V, AuxPotential.HARMONIC)
    assert result.bound is BoundClass.UNKNOWN
    assert "No definite bound" in caplog.text


@pytest.mark.parametrize(
    "potential, expected",
    [
        ("r", AuxPotential.HARMONIC),
        ("r^2/2", AuxPotential.HARMONIC),
        ("r^0.5", AuxPotential.HARMONIC),
        ("-1/r", AuxPotential.COULOMB_LIKE),
        ("-exp(-r)", AuxPotential.COULOMB_LIKE),
    ],
)
def test_default_aux(potential, expected):
    assert default_aux(parse_model(potential, "r")) is expected


def test_classify_exempts_auxiliary_family_from_sampling(monkeypatch):
    import semiorbit.af as af_module

    sampled = []
    real_verdict = af_module._verdict

    def recording_verdict(f, samples):
        sampled.append(str(f))
        return real_verdict(f, samples)

    monkeypatch.setattr(af_module, "_verdict", recording_verdict)

    result = classify_bound(parse_model("p^2/2", "p"), parse_model("-2/r", "r"), AuxPotential.COULOMB_LIKE)
    assert result.exact
    assert sampled == []

    result = classify_bound(parse_model("p^2", "p"), parse_model("r", "r"), AuxPotential.HARMONIC)
    assert (result.h, result.g) == (ConvexityVerdict.FLAT, ConvexityVerdict.CONCAVE)
    assert len(sampled) == 1
