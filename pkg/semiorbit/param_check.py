from __future__ import annotations

import numbers
import operator
import types
from dataclasses import dataclass, replace
from enum import Enum
from types import UnionType
from typing import Any, Callable, Optional, Type, Union, get_args, get_origin

from .errors import DomainError

ParamKey = str | int


class ArgKind(Enum):
    POSITIONAL = "positional"
    KEYWORD = "keyword"


valid_arg_kind_map = {
    ArgKind.POSITIONAL: int,
    ArgKind.KEYWORD: str,
}

_COMPARATORS: dict[str, Callable[[Any, Any], bool]] = {
    ">": operator.gt,
    ">=": operator.ge,
    "<": operator.lt,
    "<=": operator.le,
}


@dataclass(frozen=True)
class Bound:
    """A numeric requirement such as ``x > 0`` or ``0 <= x <= 1``.

    ``lower``/``upper`` are ``(op, limit)`` pairs; either may be omitted.
    """

    lower: Optional[tuple[str, float]] = None
    upper: Optional[tuple[str, float]] = None
    integral: bool = False

    def __post_init__(self):
        for side in (self.lower, self.upper):
            if side is not None and side[0] not in _COMPARATORS:
                raise ValueError(f"Unsupported comparison '{side[0]}'")
        if self.lower is None and self.upper is None and not self.integral:
            raise ValueError("Bound needs at least one side or integral=True")

    def __call__(self, value: Any) -> bool:
        if self.integral and not float(value).is_integer():
            return False
        if self.lower is not None:
            op, limit = self.lower
            if not _COMPARATORS[op](value, limit):
                return False
        if self.upper is not None:
            op, limit = self.upper
            if not _COMPARATORS[op](value, limit):
                return False
        return True

    def describe(self, name: str) -> str:
        parts = []
        if self.lower is not None and self.upper is not None:
            lo_op, lo = self.lower
            hi_op, hi = self.upper
            flipped = {">": "<", ">=": "<="}[lo_op] if lo_op in (">", ">=") else lo_op
            parts.append(f"{lo:g} {flipped} {name} {hi_op} {hi:g}")
        else:
            for side in (self.lower, self.upper):
                if side is not None:
                    parts.append(f"{name} {side[0]} {side[1]:g}")
        if self.integral:
            parts.append(f"{name} integral")
        return " and ".join(parts)


def positive() -> Bound:
    return Bound(lower=(">", 0.0))


def non_negative() -> Bound:
    return Bound(lower=(">=", 0.0))


def at_least(limit: float, integral: bool = False) -> Bound:
    return Bound(lower=(">=", limit), integral=integral)


def between(lo: float, hi: float) -> Bound:
    return Bound(lower=(">=", lo), upper=("<=", hi))


def quantum_number() -> Bound:
    return Bound(lower=(">=", 0), integral=True)


def dimension() -> Bound:
    return Bound(lower=(">=", 2), integral=True)


Requirement = Type | UnionType | Bound


def get_type_name(tp: Type | UnionType) -> str:
    """
    Return a human-readable type name for hints, unions, generics, etc.
    """
    origin = get_origin(tp)
    args = get_args(tp)

    if isinstance(tp, type):
        return tp.__name__

    if origin is Union or origin is types.UnionType:
        return " | ".join(get_type_name(a) for a in args)

    if origin:
        base = origin.__name__
        inner = ", ".join(get_type_name(a) for a in args)
        return f"{base}[{inner}]"

    return str(tp)


def describe_requirement(requirement: Requirement, name: str) -> str:
    if isinstance(requirement, Bound):
        return requirement.describe(name)
    return get_type_name(requirement)


def _is_type_requirement(requirement: Any) -> bool:
    origin = get_origin(requirement)
    return isinstance(requirement, type) or origin is Union or origin is types.UnionType


@dataclass(frozen=True)
class ParamCheck:
    """One precondition on one argument of a guarded function.

    A type requirement failing raises :class:`TypeError`; a :class:`Bound`
    failing raises :class:`~semiorbit.errors.DomainError`.
    """

    key: ParamKey
    requirement: Requirement
    arg_kind: ArgKind = ArgKind.POSITIONAL
    message: Optional[str] = None
    name: Optional[str] = None

    def __post_init__(self):
        if not isinstance(self.key, (str, int)):
            raise TypeError("key must be str or int")

        if not (isinstance(self.requirement, Bound) or _is_type_requirement(self.requirement)):
            raise TypeError("requirement must be a Python type, Union or Bound")

        expected_key_type = valid_arg_kind_map[self.arg_kind]
        if not isinstance(self.key, expected_key_type):
            raise ValueError(
                f"{self.arg_kind.value} arguments require a {expected_key_type.__name__} key, "
                f"got {type(self.key).__name__}"
            )

        if self.name is None:
            object.__setattr__(self, "name", str(self.key))
        if self.message is None:
            object.__setattr__(self, "message", self._default_message(self.name))

    def _default_message(self, name: str) -> str:
        if isinstance(self.requirement, Bound):
            return (
                f"Invalid value for argument '{name}': "
                f"expected {describe_requirement(self.requirement, name)}"
            )
        return (
            f"Invalid type for argument '{name}': "
            f"expected {describe_requirement(self.requirement, name)}"
        )

    def validate(self, value: Any) -> Any:
        if isinstance(self.requirement, Bound):
            if isinstance(value, bool) or not isinstance(value, numbers.Real):
                raise TypeError(self.error_message(value, show_type=True))
            if not self.requirement(value):
                raise DomainError(self.error_message(value), point=value)
            return value

        origin = get_origin(self.requirement)
        expected = get_args(self.requirement) if origin in (Union, types.UnionType) else self.requirement
        if not isinstance(value, expected):
            raise TypeError(self.error_message(value, show_type=True))
        return value

    @classmethod
    def from_dict(cls, data: dict) -> "ParamCheck":
        raw_kind = data.get("arg_kind", ArgKind.POSITIONAL)

        if isinstance(raw_kind, str):
            arg_kind = ArgKind(raw_kind)
        elif isinstance(raw_kind, ArgKind):
            arg_kind = raw_kind
        else:
            raise TypeError(f"Invalid arg_kind value: {raw_kind}")

        return cls(
            key=data["key"],
            requirement=data["requirement"],
            arg_kind=arg_kind,
            message=data.get("message"),
            name=data.get("name"),
        )

    def error_message(self, value: Any, show_type: bool = False) -> str:
        if show_type or not isinstance(self.requirement, Bound):
            return f"{self.message}, got {type(value).__name__}"
        return f"{self.message}, got {value!r}"

    def copy_with(self, **changes) -> "ParamCheck":
        # an auto-generated message follows a rename
        if "name" in changes and "message" not in changes and self.message == self._default_message(self.name):
            changes["message"] = None
        return replace(self, **changes)


class DefaultParamCheck(ParamCheck):
    """
    ParamCheck that *skips validation if the keyword argument is missing*.
    """

    @classmethod
    def from_pair(cls, key: str, requirement: Requirement):
        return cls(key=key, requirement=requirement, arg_kind=ArgKind.KEYWORD)


@dataclass(frozen=True)
class ParamCheckResult:
    """
    Represents the outcome of a single ParamCheck.
    """

    param_check: ParamCheck
    value: Any
    passed: bool
    error: Optional[Exception] = None

    def __repr__(self):
        status = "PASSED" if self.passed else "FAILED"
        return f"<ParamCheckResult {status} {self.param_check.name}={self.value!r}>"
