"""Pluggable (add, mul) scalar algebras used by the sparse-matrix pipeline.

A semiring here is a value domain plus two associative operations where
``add`` is commutative and ``omitted`` is the additive identity.  Entries
equal to ``omitted`` are never stored and never sent over the wire, which
is sound because ``omitted`` annihilates under ``mul`` and is neutral
under ``add``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

Value = Any

# Counting arithmetic saturates at the signed 64-bit range so every value
# still fits in one machine word.
INT64_MAX = 2**63 - 1
INT64_MIN = -INT64_MAX


@dataclass(frozen=True)
class Semiring:
    """Scalar algebra: ``add``/``mul`` over single-word values.

    ``omitted`` is the additive identity; a missing matrix entry means
    exactly this value.  ``one`` is the multiplicative identity, used for
    identity matrices and for pattern-only input files.
    """

    name: str
    add: Callable[[Value, Value], Value]
    mul: Callable[[Value, Value], Value]
    omitted: Value
    one: Value
    mm_field: str = "integer"
    parse_value: Callable[[str], Value] = field(default=int, repr=False)
    format_value: Callable[[Value], str] = field(default=str, repr=False)

    def fold_add(self, values) -> Value:
        acc = self.omitted
        for v in values:
            acc = self.add(acc, v)
        return acc

    def is_omitted(self, value) -> bool:
        return value == self.omitted


def _sat(x: int) -> int:
    if x > INT64_MAX:
        return INT64_MAX
    if x < INT64_MIN:
        return INT64_MIN
    return x


def _sat_add(x: int, y: int) -> int:
    return _sat(x + y)


def _sat_mul(x: int, y: int) -> int:
    return _sat(x * y)


def _bool_add(x: bool, y: bool) -> bool:
    return x or y


def _bool_mul(x: bool, y: bool) -> bool:
    return x and y


def _bool_parse(tok: str) -> bool:
    return int(tok) != 0


def _bool_format(v: bool) -> str:
    return "1" if v else "0"


def _minplus_add(x, y):
    return x if x <= y else y


def _minplus_mul(x, y):
    # int + math.inf promotes to float inf, which is what we want.
    return x + y


def _minplus_parse(tok: str):
    f = float(tok)
    return int(f) if f == int(f) else f


def _minplus_format(v) -> str:
    if v == math.inf:
        raise ValueError("omitted (infinite) min-plus values are never written")
    return str(int(v)) if v == int(v) else repr(v)


_BOOLEAN = Semiring(
    name="boolean",
    add=_bool_add,
    mul=_bool_mul,
    omitted=False,
    one=True,
    mm_field="pattern",
    parse_value=_bool_parse,
    format_value=_bool_format,
)

_COUNTING = Semiring(
    name="counting",
    add=_sat_add,
    mul=_sat_mul,
    omitted=0,
    one=1,
    mm_field="integer",
    parse_value=int,
    format_value=str,
)

_MIN_PLUS = Semiring(
    name="min-plus",
    add=_minplus_add,
    mul=_minplus_mul,
    omitted=math.inf,
    one=0,
    mm_field="real",
    parse_value=_minplus_parse,
    format_value=_minplus_format,
)


def boolean_semiring() -> Semiring:
    """OR/AND over {False, True}; omitted entries read as False."""
    return _BOOLEAN


def counting_semiring() -> Semiring:
    """Plus/times over 64-bit saturating integers; omitted entries read as 0."""
    return _COUNTING


def min_plus_semiring() -> Semiring:
    """min/plus over integers with +infinity; omitted entries read as +inf."""
    return _MIN_PLUS


SEMIRINGS: dict[str, Semiring] = {
    "bool": _BOOLEAN,
    "count": _COUNTING,
    "minplus": _MIN_PLUS,
}


def semiring_by_name(name: str) -> Semiring:
    try:
        return SEMIRINGS[name]
    except KeyError:
        raise ValueError(
            f"unknown semiring {name!r}; choose from {sorted(SEMIRINGS)}"
        ) from None
