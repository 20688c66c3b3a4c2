# guard.py
from __future__ import annotations

import inspect
from dataclasses import dataclass
from functools import wraps
from typing import Any, Callable

from .param_check import (
    ArgKind,
    DefaultParamCheck,
    ParamCheck,
    ParamCheckResult,
    Requirement,
)


@dataclass
class GuardContext:
    """Everything known about a guarded call whose preconditions failed."""
    func: Callable
    args: tuple
    kwargs: dict
    signature: inspect.Signature
    bound_args: inspect.BoundArguments
    all_results: list[ParamCheckResult]
    failed_results: list[ParamCheckResult]
    arg_names: list[str]

    @property
    def passed_results(self) -> list[ParamCheckResult]:
        return [r for r in self.all_results if r.passed]


def default_on_guard_failure(context: GuardContext) -> None:
    """Re-raise the first failure: TypeError for types, DomainError for bounds."""
    if not context.failed_results:
        return
    first = context.failed_results[0]
    if first.error is not None:
        raise first.error
    raise TypeError(first.param_check.error_message(first.value, show_type=True))


# Allow global override
guard_default_handler = default_on_guard_failure


class ParamGuard:
    """Core decorator implementation."""

    def __init__(
        self,
        param_checks: ParamCheck | dict | list | None,
        kw_shorthand: dict[str, Requirement],
        on_failure: Callable[[GuardContext], Any] | None = None,
    ):
        self.normalized_checks = self._normalize_checks(param_checks, kw_shorthand)
        self.on_failure = on_failure
        self._signature_cache: dict[Callable, inspect.Signature] = {}

    def _normalize_checks(
        self,
        param_checks: ParamCheck | dict | list | None,
        kw_shorthand: dict[str, Requirement],
    ) -> list[ParamCheck]:
        normalized = []

        if isinstance(param_checks, ParamCheck):
            normalized.append(param_checks)
        elif isinstance(param_checks, dict):
            normalized.append(ParamCheck.from_dict(param_checks))
        elif isinstance(param_checks, list):
            for item in param_checks:
                if isinstance(item, ParamCheck):
                    normalized.append(item)
                elif isinstance(item, dict):
                    normalized.append(ParamCheck.from_dict(item))
                else:
                    raise TypeError(f"Invalid param_checks entry: {type(item)}")
        elif param_checks is not None:
            raise TypeError("param_checks must be a ParamCheck, dict, list, or None")

        for key, requirement in kw_shorthand.items():
            normalized.append(DefaultParamCheck.from_pair(key, requirement))

        return normalized

    def _get_signature(self, func: Callable) -> inspect.Signature:
        if func not in self._signature_cache:
            self._signature_cache[func] = inspect.signature(func)
        return self._signature_cache[func]

    def _rename_check_if_needed(self, pc: ParamCheck, arg_names: list[str]) -> ParamCheck:
        """Give positional checks the real parameter name unless a custom one was set."""
        if pc.name is not None and pc.name != str(pc.key):
            return pc

        if pc.arg_kind == ArgKind.POSITIONAL and isinstance(pc.key, int):
            if 0 <= pc.key < len(arg_names):
                return pc.copy_with(name=arg_names[pc.key])

        return pc

    def _resolve_argument_value(
        self,
        pc: ParamCheck,
        bound_arguments: dict[str, Any],
        arg_names: list[str],
    ) -> Any:
        if pc.arg_kind == ArgKind.POSITIONAL:
            try:
                param_name = arg_names[int(pc.key)]
            except IndexError:
                raise IndexError(
                    f"ParamCheck refers to positional index {pc.key}, "
                    f"but only {len(arg_names)} args were passed."
                )
            return bound_arguments[param_name]

        if pc.key not in bound_arguments:
            raise KeyError(f"Expected keyword '{pc.key}', but it was not provided.")
        return bound_arguments[pc.key]

    def _validate_arguments(
        self,
        bound_arguments: dict[str, Any],
        arg_names: list[str],
    ) -> tuple[list[ParamCheckResult], list[ParamCheckResult]]:
        results: list[ParamCheckResult] = []

        for pc in self.normalized_checks:
            renamed = self._rename_check_if_needed(pc, arg_names)

            if isinstance(pc, DefaultParamCheck) and pc.key not in bound_arguments:
                continue

            value = self._resolve_argument_value(pc, bound_arguments, arg_names)
            try:
                renamed.validate(value)
            except (TypeError, ValueError) as exc:
                results.append(ParamCheckResult(renamed, value, False, exc))
            else:
                results.append(ParamCheckResult(renamed, value, True))

        failed = [r for r in results if not r.passed]
        return results, failed

    def _handle_failures(self, context: GuardContext) -> None:
        if context.failed_results:
            handler = self.on_failure or guard_default_handler
            handler(context)
            # a handler that returns does not let the call through
            default_on_guard_failure(context)

    def __call__(self, func: Callable) -> Callable:
        signature = self._get_signature(func)

        @wraps(func)
        def wrapper(*args, **kwargs):
            bound = signature.bind(*args, **kwargs)
            bound.apply_defaults()

            arg_names = list(bound.arguments.keys())
            all_results, failed_results = self._validate_arguments(bound.arguments, arg_names)

            if failed_results:
                self._handle_failures(
                    GuardContext(
                        func=func,
                        args=args,
                        kwargs=kwargs,
                        signature=signature,
                        bound_args=bound,
                        all_results=all_results,
                        failed_results=failed_results,
                        arg_names=arg_names,
                    )
                )
            return func(*args, **kwargs)

        return wrapper


def guarded(
    param_checks: ParamCheck | dict | list | None = None,
    *,
    on_failure: Callable[[GuardContext], Any] | None = None,
    **kw_requirements: Requirement,
) -> Callable:
    """
    Decorator supporting:
    - @guarded(m=positive(), D=dimension())
    - @guarded([ParamCheck(0, float), ...])
    - @guarded(..., on_failure=handler)
    """
    guard = ParamGuard(
        param_checks=param_checks,
        kw_shorthand=kw_requirements,
        on_failure=on_failure,
    )

    def decorator_wrapper(func: Callable) -> Callable:
        return guard(func)

    return decorator_wrapper
