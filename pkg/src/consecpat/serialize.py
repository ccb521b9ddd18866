"""JSON encoding of result dataclasses.

Rationals are written as "numerator/denominator" strings; every rational
field (or list of rationals) also gets a sibling ``<name>_float`` for
plotting.  ``from_jsonable`` rebuilds a dataclass from its type hints and
ignores the float siblings.
"""

from __future__ import annotations

import dataclasses
import json
import types
import typing
from fractions import Fraction

from .perm_core import PatternCode, Permutation


def fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(s: str) -> Fraction:
    num, _, den = s.partition("/")
    return Fraction(int(num), int(den or 1))


def _is_fractional(v) -> bool:
    if isinstance(v, Fraction):
        return True
    return isinstance(v, (list, tuple)) and bool(v) and all(isinstance(x, Fraction) for x in v)


def to_jsonable(obj):
    if isinstance(obj, Fraction):
        return fraction_str(obj)
    if isinstance(obj, (PatternCode, Permutation)):
        return str(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {}
        for f in dataclasses.fields(obj):
            v = getattr(obj, f.name)
            out[f.name] = to_jsonable(v)
            if _is_fractional(v):
                out[f.name + "_float"] = float(v) if isinstance(v, Fraction) else [float(x) for x in v]
        return out
    if isinstance(obj, dict):
        return {str(to_jsonable(k)): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalar
        return obj.item()
    return obj


def _decode(tp, value):
    origin = typing.get_origin(tp)
    args = typing.get_args(tp)
    if origin in (typing.Union, types.UnionType):
        if value is None:
            return None
        inner = [a for a in args if a is not type(None)]
        return _decode(inner[0], value)
    if tp is Fraction:
        return parse_fraction(value)
    if tp in (PatternCode, Permutation):
        return tp.parse(value)
    if dataclasses.is_dataclass(tp):
        return from_jsonable(tp, value)
    if origin is tuple:
        if len(args) == 2 and args[1] is Ellipsis:
            return tuple(_decode(args[0], v) for v in value)
        return tuple(_decode(a, v) for a, v in zip(args, value))
    if origin is list:
        return [_decode(args[0], v) for v in value]
    if origin is dict:
        return {_decode(args[0], k): _decode(args[1], v) for k, v in value.items()}
    if tp is float:
        return float(value)
    return value


def from_jsonable(cls, data: dict):
    hints = typing.get_type_hints(cls)
    kwargs = {f.name: _decode(hints[f.name], data[f.name]) for f in dataclasses.fields(cls)}
    return cls(**kwargs)


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2) + "\n"
