"""Containers shared by the four element bases."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .kinds import ElementKind
from .polyalgebra import MPoly, VectorField
from .refgeom import Vec

MAX_ORDER = dict.fromkeys(ElementKind, 6)


@dataclass(frozen=True)
class BasisFunction:
    id: int
    category: str
    field: VectorField
    entity: object = None
    indices: tuple[int, ...] = ()
    direction: int | None = None

    @property
    def label(self) -> str:
        parts = [self.category]
        if self.entity is not None:
            parts.append(f"entity={self.entity}")
        if self.indices:
            parts.append("idx=" + ",".join(map(str, self.indices)))
        if self.direction is not None:
            parts.append(f"dir={self.direction}")
        return " ".join(parts)


@dataclass(frozen=True)
class BasisSet:
    kind: ElementKind
    order: int
    functions: tuple[BasisFunction, ...]
    variant: str | None = None

    @property
    def dimension(self) -> int:
        return len(self.functions)

    @property
    def fields(self) -> list[VectorField]:
        return [f.field for f in self.functions]

    def category_counts(self) -> dict[str, int]:
        return dict(Counter(f.category for f in self.functions))

    def select(self, category: str) -> list[BasisFunction]:
        return [f for f in self.functions if f.category == category]

    def reordered(self, permutation: Sequence[int]) -> "BasisSet":
        return replace(self, functions=tuple(self.functions[i] for i in permutation))

    def __len__(self) -> int:
        return len(self.functions)

    def __iter__(self):
        return iter(self.functions)


def number(functions: Iterable[BasisFunction], start: int = 0) -> list[BasisFunction]:
    return [replace(f, id=start + k) for k, f in enumerate(functions)]


def check_order(kind: ElementKind, p: int) -> None:
    top = MAX_ORDER[kind]
    if not isinstance(p, int) or not 1 <= p <= top:
        raise ValueError(f"order for {kind.value} must be in 1..{top}, got {p!r}")


def along(poly: MPoly, vector: Vec, scale_sq: Fraction = Fraction(1)) -> VectorField:
    """``poly * vector`` as a vector field with the given squared scale."""
    return VectorField(tuple(poly * v for v in vector), scale_sq)


def unit_along(poly: MPoly, vector: Vec, coeff_sq: Fraction = Fraction(1)) -> VectorField:
    """``sqrt(coeff_sq) * poly * vector / |vector|``."""
    norm_sq = sum((v * v for v in vector), Fraction(0))
    return along(poly, vector, Fraction(coeff_sq) / norm_sq)


def unit_vector(dim: int, k: int) -> Vec:
    return tuple(Fraction(1 if j == k else 0) for j in range(dim))


def cross(a: Vec, b: Vec) -> Vec:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
