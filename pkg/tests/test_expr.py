import math

import numpy as np
import pytest

from semiorbit import catalog
from semiorbit.errors import (
    DomainError,
    ExpressionSyntaxError,
    NonMonotoneError,
    NotBracketedError,
    UnknownIdentifierError,
)
from semiorbit.expr import (
    BinaryOp,
    Call,
    Constant,
    FunctionModel,
    Negate,
    Power,
    Variable,
    constant_model,
    eval_jet2,
    invert_monotone,
    parse,
    parse_model,
)


def test_parse_builds_tree():
    assert parse("p^2/2", "p") == BinaryOp("/", Power(Variable("p"), Constant(2.0)), Constant(2.0))
    assert parse("sqrt(p)", "p") == Call("sqrt", Variable("p"))
    assert parse("-1/r", "r") == BinaryOp("/", Negate(Constant(1.0)), Variable("r"))


def test_parse_minimal_length_kinetic():
    T = parse_model("p^2/2 + 0.01*p^4", "p")
    assert T(2.0) == pytest.approx(2.0 + 0.16)


@pytest.mark.parametrize(
    "source, x, expected",
    [
        ("-p^2", 3.0, -9.0),
        ("2^3^2", 0.0, 512.0),
        ("p^-1", 4.0, 0.25),
        ("2*-p", 1.5, -3.0),
        ("2 − p", 1.0, 1.0),
        ("1e-2*p + .5", 10.0, 0.6),
        ("(p+1)*(p-1)", 3.0, 8.0),
        ("8/2/2", 0.0, 2.0),
        ("abs(p) + exp(0) + log(1)", -2.0, 3.0),
    ],
)
def test_precedence_and_associativity(source, x, expected):
    assert parse_model(source, "p")(x) == pytest.approx(expected)


def test_named_parameters():
    V = parse_model("a*r + b", "r", {"a": 0.2, "b": 1.0})
    assert V(5.0) == pytest.approx(2.0)


@pytest.mark.parametrize(
    "source, position",
    [
        ("p^", 2),
        ("(p", 2),
        ("p +* 2", 3),
        ("2 $ p", 2),
        ("sqrt p", 5),
        ("p p", 2),
    ],
)
def test_syntax_errors_carry_position(source, position):
    with pytest.raises(ExpressionSyntaxError) as exc:
        parse(source, "p")
    assert exc.value.position == position
    assert str(exc.value).endswith(f"at position {position}")


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError) as exc:
        parse("2*q", "p")
    assert exc.value.name == "q"
    assert exc.value.position == 2
    with pytest.raises(UnknownIdentifierError):
        parse("sin(p)", "p")


def test_eval_jet2_linear():
    jet = eval_jet2(parse_model("0.2*r", "r"), 5.0)
    assert (jet.value, jet.d1, jet.d2) == (1.0, 0.2, 0.0)


def test_eval_jet2_coulomb():
    jet = eval_jet2(parse("-1/r", "r"), 2.0)
    assert (jet.value, jet.d1, jet.d2) == (-0.5, 0.25, -0.25)


@pytest.mark.parametrize(
    "source, points",
    [
        ("p^2/2 + 0.01*p^4", (0.3, 1.0, 4.0)),
        ("2*sqrt(p^2 + 1)", (0.1, 2.0, 7.0)),
        ("exp(-p)*log(p + 2)", (0.5, 1.5, 3.0)),
        ("p^p", (0.7, 1.3, 2.2)),
        ("-1/p + abs(p - 3)", (0.5, 1.0, 5.0)),
        ("p^1.5/(1 + p)", (0.2, 1.0, 9.0)),
    ],
)
def test_jets_agree_with_finite_differences(source, points):
    f = parse_model(source, "p")
    h = 1e-4
    for x in points:
        jet = f.jet(x)
        d1 = (f(x + h) - f(x - h)) / (2 * h)
        d2 = (f.derivative(x + h) - f.derivative(x - h)) / (2 * h)
        assert jet.value == pytest.approx(f(x), rel=1e-15)
        assert jet.d1 == pytest.approx(d1, rel=1e-6, abs=1e-9)
        assert jet.d2 == pytest.approx(d2, rel=1e-6, abs=1e-6)


def _richardson(rule, x, h):
    """Central difference with the leading h^2 error removed."""
    return (4 * rule(x, h / 2) - rule(x, h)) / 3


CATALOG_MODELS = {
    "massive-kinetic": parse_model("2*sqrt(p^2 + m^2)", "p", {"m": 0.5}),
    "ultrarelativistic": catalog.ultrarelativistic_kinetic(2.0),
    "minimal-length": catalog.minimal_length_kinetic(1.0, 0.01),
    "coulomb": catalog.coulomb_potential(0.7),
    "linear": catalog.linear_potential(0.2),
    "harmonic": catalog.harmonic_potential(3.0),
    "baryon-effective": catalog.baryon_spec(0.2, 0.1).W,
}


@pytest.mark.parametrize("model", CATALOG_MODELS.values(), ids=CATALOG_MODELS.keys())
def test_catalog_jets_agree_with_richardson_differences(model):
    x = np.logspace(-2, 2, 41)
    value = model(x)
    jet = model.jet(x)

    def first(x, h):
        return (model(x + h) - model(x - h)) / (2 * h)

    def second(x, h):
        return (model(x + h) - 2 * model(x) + model(x - h)) / h**2

    d1 = _richardson(first, x, 1e-3 * x)
    d2 = _richardson(second, x, 1e-2 * x)
    # finite differences lose digits relative to the size of f/x and f/x^2
    scale1 = np.abs(jet.d1) + np.abs(value) / x
    scale2 = np.abs(jet.d2) + np.abs(jet.d1) / x + np.abs(value) / x**2

    np.testing.assert_allclose(jet.value, value, rtol=1e-13)
    assert np.all(np.abs(jet.d1 - d1) <= 1e-8 * scale1)
    assert np.all(np.abs(jet.d2 - d2) <= 1e-6 * scale2)


def test_array_evaluation_matches_scalar():
    f = parse_model("2*sqrt(p^2) + 0.5*p^3 - log(p)", "p")
    xs = np.array([0.1, 0.5, 2.0, 10.0])
    values = f(xs)
    jets = f.jet(xs)
    for i, x in enumerate(xs):
        assert values[i] == pytest.approx(f(float(x)), rel=1e-14)
        scalar = f.jet(float(x))
        assert jets.d1[i] == pytest.approx(scalar.d1, rel=1e-14)
        assert jets.d2[i] == pytest.approx(scalar.d2, rel=1e-14)


def test_constant_model_broadcasts():
    c = constant_model(3.0, "r")
    assert np.array_equal(c(np.array([1.0, 2.0])), np.array([3.0, 3.0]))
    jet = c.jet(np.array([1.0, 2.0]))
    assert np.array_equal(jet.d1, np.zeros(2))
    assert c(7.0) == 3.0


@pytest.mark.parametrize(
    "source, x",
    [
        ("sqrt(p)", -1.0),
        ("log(p)", 0.0),
        ("p^(-1)", 0.0),
        ("1/(p - 2)", 2.0),
        ("p^(1/3)", -8.0),
        ("p^p", -1.0),
    ],
)
def test_domain_errors(source, x):
    f = parse_model(source, "p")
    with pytest.raises(DomainError):
        f(x)
    with pytest.raises(DomainError):
        f.jet(x)


def test_domain_error_in_array_reports_point():
    f = parse_model("log(p)", "p")
    with pytest.raises(DomainError) as exc:
        f(np.array([1.0, -2.0, 3.0]))
    assert exc.value.point == -2.0


def test_sqrt_value_at_zero_but_no_derivative():
    f = parse_model("sqrt(p)", "p")
    assert f(0.0) == 0.0
    with pytest.raises(DomainError):
        f.jet(0.0)


def test_integer_powers_at_zero():
    jet = parse_model("p^2", "p").jet(0.0)
    assert (jet.value, jet.d1, jet.d2) == (0.0, 0.0, 2.0)
    jet = parse_model("p^1", "p").jet(0.0)
    assert (jet.value, jet.d1, jet.d2) == (0.0, 1.0, 0.0)


def test_abs_derivative_at_zero_is_zero():
    jet = parse_model("abs(p)", "p").jet(0.0)
    assert (jet.value, jet.d1) == (0.0, 0.0)


def test_overflow_gives_infinity():
    assert math.isinf(parse_model("exp(p)", "p")(1000.0))
    assert math.isinf(parse_model("p^400", "p")(10.0))


def test_model_composition():
    U = parse_model("3*y^2", "y")
    inner = parse_model("x/2", "x")
    composed = U.compose(inner)
    assert composed.variable == "x"
    assert composed(4.0) == pytest.approx(12.0)
    assert composed.derivative(4.0) == pytest.approx(6.0)

    V = parse_model("r", "r")
    total = composed + V
    assert total.variable == "x"
    assert total(4.0) == pytest.approx(16.0)
    assert V.scaled(2.5)(2.0) == pytest.approx(5.0)
    assert V.with_variable("x")(3.0) == 3.0


def test_model_rejects_foreign_variable():
    with pytest.raises(ValueError):
        FunctionModel(parse("p", "p"), "r")


def test_proportional_to():
    samples = np.logspace(-2, 2, 9)
    T = parse_model("p^2/2", "p")
    assert T.proportional_to(parse_model("3*q^2", "q"), samples)
    assert not T.proportional_to(parse_model("p^3", "p"), samples)


def test_models_are_hashable_values():
    assert parse("p^2 + 1", "p") == parse("p^2 + 1", "p")
    assert len({parse("p", "p"), parse("p", "p")}) == 1


def test_invert_monotone_linear():
    assert invert_monotone(parse_model("0.2*r", "r"), 1.0, 0.0, 100.0) == pytest.approx(5.0, rel=1e-12)


def test_invert_monotone_decreasing():
    f = parse_model("1/(1 + x)", "x")
    assert invert_monotone(f, 0.25, 0.0, 10.0) == pytest.approx(3.0, rel=1e-12)


@pytest.mark.parametrize("x", [0.001, 0.5, 3.0, 40.0])
def test_invert_monotone_round_trip(x):
    T = parse_model("p^2/2 + 0.01*p^4", "p")
    assert invert_monotone(T, T(x), 0.0, 100.0) == pytest.approx(x, rel=1e-10)


def test_invert_monotone_endpoints():
    f = parse_model("r^2", "r")
    assert invert_monotone(f, 0.0, 0.0, 2.0) == 0.0
    assert invert_monotone(f, 4.0, 0.0, 2.0) == 2.0


def test_invert_monotone_rejects_non_monotone():
    with pytest.raises(NonMonotoneError):
        invert_monotone(parse_model("(r - 1)^2", "r"), 1.0, 0.0, 3.0)


def test_invert_monotone_not_bracketed():
    with pytest.raises(NotBracketedError):
        invert_monotone(parse_model("0.2*r", "r"), 5.0, 0.0, 1.0)


def test_invert_monotone_empty_bracket():
    with pytest.raises(ValueError):
        invert_monotone(parse_model("r", "r"), 0.5, 1.0, 1.0)
