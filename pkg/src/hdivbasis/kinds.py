"""Reference element kinds."""

from __future__ import annotations

import enum
from fractions import Fraction


class ElementKind(str, enum.Enum):
    QUAD = "quad"
    HEX = "hex"
    TRI = "tri"
    TET = "tet"

    @property
    def dim(self) -> int:
        return 2 if self in (ElementKind.QUAD, ElementKind.TRI) else 3

    @property
    def is_simplex(self) -> bool:
        return self in (ElementKind.TRI, ElementKind.TET)

    @property
    def measure(self) -> Fraction:
        if self is ElementKind.TRI:
            return Fraction(1, 2)
        if self is ElementKind.TET:
            return Fraction(1, 6)
        return Fraction(1)

    @classmethod
    def parse(cls, value: "str | ElementKind") -> "ElementKind":
        if isinstance(value, ElementKind):
            return value
        try:
            return cls(value.lower())
        except ValueError:
            raise ValueError(f"unknown element kind {value!r}") from None
