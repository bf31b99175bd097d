"""Filter expressions for asset queries.

Three forms are recognised::

    male          exact match, case-insensitive
    /.*guard.*/   regular expression (re.search, case-insensitive)
    >=5.0         numeric comparison with one of > >= < <= =
"""

from __future__ import annotations

import math
import operator
import re
from dataclasses import dataclass
from typing import Any, Union

from ..errors import FilterParseError, InvalidRegexError, UnparseableNumberError

_NUMERIC = re.compile(r"^\s*(>=|<=|>|<|=)\s*(.*?)\s*$", re.DOTALL)

OPERATORS = {
    ">": operator.gt,
    ">=": operator.ge,
    "<": operator.lt,
    "<=": operator.le,
    "=": operator.eq,
}


def cell_text(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


@dataclass(frozen=True)
class ExactMatch:
    text: str

    def matches(self, value: Any) -> bool:
        return value is not None and cell_text(value).casefold() == self.text.casefold()


@dataclass(frozen=True)
class Regex:
    pattern: str

    def __post_init__(self):
        try:
            compiled = re.compile(self.pattern, re.IGNORECASE)
        except re.error as exc:
            raise InvalidRegexError(f"invalid regex /{self.pattern}/: {exc}", pattern=self.pattern) from None
        object.__setattr__(self, "_compiled", compiled)

    def matches(self, value: Any) -> bool:
        return value is not None and self._compiled.search(cell_text(value)) is not None


@dataclass(frozen=True)
class NumericCmp:
    op: str
    value: float

    def __post_init__(self):
        if self.op not in OPERATORS:
            raise FilterParseError(f"unknown comparison operator {self.op!r}")
        if not math.isfinite(self.value):
            raise UnparseableNumberError(f"comparison value must be finite, got {self.value!r}")

    def matches(self, value: Any) -> bool:
        if value is None:
            return False
        return OPERATORS[self.op](float(value), self.value)


FilterExpr = Union[ExactMatch, Regex, NumericCmp]


def parse_filter(raw: str) -> FilterExpr:
    if not isinstance(raw, str):
        raise FilterParseError(f"filter must be a string, got {type(raw).__name__}")
    if len(raw) >= 2 and raw.startswith("/") and raw.endswith("/"):
        return Regex(raw[1:-1])
    m = _NUMERIC.match(raw)
    if m:
        op, number = m.groups()
        try:
            value = float(number)
        except ValueError:
            raise UnparseableNumberError(
                f"expected a number after {op!r}, got {number!r}", filter=raw
            ) from None
        return NumericCmp(op, value)
    return ExactMatch(raw)
