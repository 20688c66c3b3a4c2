import pytest

import semiorbit.guard as guard_module
from semiorbit.dos2 import lambda_of
from semiorbit.errors import DomainError
from semiorbit.guard import GuardContext, guarded
from semiorbit.param_check import ArgKind, ParamCheck, dimension, positive, quantum_number


def test_keyword_shorthand():
    @guarded(m=positive(), k=positive())
    def omega(m, k):
        return (k / m) ** 0.5

    assert omega(1.0, 4.0) == 2.0

    with pytest.raises(DomainError) as exc:
        omega(-1.0, 4.0)
    assert str(exc.value) == "Invalid value for argument 'm': expected m > 0, got -1.0"

    with pytest.raises(DomainError) as exc:
        omega(m=1.0, k=0)
    assert str(exc.value) == "Invalid value for argument 'k': expected k > 0, got 0"


def test_type_failure_raises_type_error():
    @guarded(n=quantum_number())
    def level(n):
        return n

    with pytest.raises(TypeError) as exc:
        level("3")
    assert str(exc.value) == "Invalid value for argument 'n': expected n >= 0 and n integral, got str"


def test_positional_check_is_renamed():
    @guarded([ParamCheck(0, positive())])
    def f(mass, other):
        return mass

    with pytest.raises(DomainError) as exc:
        f(-2.0, 1)
    assert str(exc.value) == "Invalid value for argument 'mass': expected mass > 0, got -2.0"


def test_dict_checks_and_defaults():
    @guarded({"key": "D", "requirement": dimension(), "arg_kind": ArgKind.KEYWORD})
    def f(l, D=3):
        return l + (D - 2) / 2

    assert f(1) == 1.5
    with pytest.raises(DomainError):
        f(1, D=1)


def test_library_functions_are_guarded():
    assert lambda_of(2, 3) == 2.5
    assert lambda_of(0, 2) == 0
    with pytest.raises(DomainError) as exc:
        lambda_of(-1, 3)
    assert str(exc.value) == "Invalid value for argument 'l': expected l >= 0 and l integral, got -1"
    with pytest.raises(DomainError):
        lambda_of(0, 2.5)


def test_custom_handler_receives_context():
    captured = {}

    def handler(context: GuardContext):
        captured["names"] = [r.param_check.name for r in context.failed_results]
        captured["passed"] = [r.param_check.name for r in context.passed_results]
        captured["func"] = context.func.__name__
        captured["bound"] = dict(context.bound_args.arguments)

    @guarded(a=positive(), b=positive(), c=positive(), on_failure=handler)
    def fn(a, b, c):
        return a + b + c

    with pytest.raises(DomainError):
        fn(-1, 2, -3)
    assert captured["names"] == ["a", "c"]
    assert captured["passed"] == ["b"]
    assert captured["func"] == "fn"
    assert captured["bound"] == {"a": -1, "b": 2, "c": -3}


def test_global_default_handler_override(monkeypatch):
    seen = []
    monkeypatch.setattr(guard_module, "guard_default_handler", lambda context: seen.append(context))

    @guarded(x=positive())
    def fn(x):
        return x

    with pytest.raises(DomainError):
        fn(-1)
    assert len(seen) == 1
    assert seen[0].failed_results[0].value == -1


def test_handler_that_returns_still_blocks_the_call():
    @guarded(l=quantum_number(), D=dimension(), on_failure=lambda context: None)
    def lam(l, D):
        return l + (D - 2) / 2

    assert lam(1, 3) == 1.5
    with pytest.raises(DomainError) as exc:
        lam(-1, 3)
    assert str(exc.value) == "Invalid value for argument 'l': expected l >= 0 and l integral, got -1"


def test_handler_may_raise_its_own_error():
    def handler(context: GuardContext):
        raise RuntimeError(f"{context.func.__name__} rejected")

    @guarded(x=positive(), on_failure=handler)
    def fn(x):
        return x

    with pytest.raises(RuntimeError, match="fn rejected"):
        fn(0)


def test_invalid_param_checks_argument():
    with pytest.raises(TypeError):
        guarded("m > 0")
    with pytest.raises(TypeError):
        guarded([42])


def test_missing_argument_is_python_type_error():
    @guarded(a=positive())
    def fn(a):
        return a

    with pytest.raises(TypeError):
        fn()  # type: ignore


def test_wraps_preserves_metadata():
    @guarded(a=positive())
    def documented(a):
        """Docstring."""
        return a

    assert documented.__name__ == "documented"
    assert documented.__doc__ == "Docstring."
