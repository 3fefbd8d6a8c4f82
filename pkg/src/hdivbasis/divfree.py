"""Divergence control with one interior bubble per element.

Given a discrete field ``u`` on an order-``p`` basis, an interior bubble
``chi`` of order ``q = max(m, p + 1)`` is added with the coefficient that
minimizes ``|| div(u + C chi) ||`` in L2 over the reference element.  The
bubble's normal trace vanishes on the whole boundary, so the correction is
invisible to neighbouring elements.

A single scalar cannot cancel a general divergence pointwise, so the
residual is reported rather than assumed to vanish.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import basis_tet, basis_tri
from .assembly import _weighted_gram
from .basis import BasisSet, unit_along, unit_vector
from .kinds import ElementKind
from .polyalgebra import MPoly, VectorField, divergence_field, integrate_reference
from .polynomials1d import integrated_legendre
from .refgeom import make_reference

log = logging.getLogger(__name__)

MIN_ORDER = {ElementKind.QUAD: 2, ElementKind.HEX: 2, ElementKind.TRI: 3, ElementKind.TET: 4}


def bubble_order(kind: ElementKind | str, p: int) -> int:
    kind = ElementKind.parse(kind)
    if p < 1:
        raise ValueError("order must be positive")
    return max(MIN_ORDER[kind], p + 1)


def _tensor_bubble(dim: int, top: int) -> VectorField:
    xs = MPoly.variables(dim)
    high = [integrated_legendre(top).substitute([2 * x - 1]) for x in xs]
    low = [integrated_legendre(2).substitute([2 * x - 1]) for x in xs]
    comps = []
    for k in range(dim):
        term = MPoly.constant(dim, 1)
        for j in range(dim):
            term = term * (high[j] if j == k else low[j])
        comps.append(term)
    return VectorField(tuple(comps))


def bubble_for(kind: ElementKind | str, p: int) -> VectorField:
    """Interior bubble used to augment an order-``p`` field.

    Square and cube: ``L_{q+1}`` in the component's own direction times
    ``L_2`` in the others.  Triangle and tetrahedron: the lowest-index
    interior bubble of order ``q``, summed over the Cartesian directions.
    """
    kind = ElementKind.parse(kind)
    q = bubble_order(kind, p)
    if not kind.is_simplex:
        return _tensor_bubble(kind.dim, q + 1)
    elem = make_reference(kind)
    if kind is ElementKind.TRI:
        scalar = basis_tri.bubble_scalar(elem, q - 3, 0)
        c_sq = basis_tri.bubble_constant_sq(q - 3, 0)
    else:
        scalar = basis_tet.bubble_scalar(elem, q - 4, 0, 0)
        c_sq = basis_tet.bubble_constant_sq(q - 4, 0, 0)
    total = None
    for d in range(kind.dim):
        part = unit_along(scalar, unit_vector(kind.dim, d), c_sq)
        total = part if total is None else total + part
    return total


@dataclass(frozen=True)
class DiscreteField:
    """``sum(coefficients[i] * fields[i])`` on one reference element."""

    kind: ElementKind
    order: int
    fields: tuple[VectorField, ...]
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=float)
        if coeffs.shape != (len(self.fields),):
            raise ValueError(f"expected {len(self.fields)} coefficients, got shape {coeffs.shape}")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def on(cls, basis: BasisSet, coefficients: Sequence[float]) -> "DiscreteField":
        return cls(basis.kind, basis.order, tuple(basis.fields), coefficients)

    @classmethod
    def on_augmented(cls, basis: BasisSet, coefficients: Sequence[float]) -> "DiscreteField":
        """Field on the basis plus its bubble; the last coefficient multiplies the bubble."""
        fields = tuple(basis.fields) + (bubble_for(basis.kind, basis.order),)
        return cls(basis.kind, basis.order, fields, coefficients)


@dataclass(frozen=True)
class AugmentationResult:
    bubble_order: int
    coefficient: float
    norm_before: float
    norm_after: float
    residual_degree: int
    derivative_at_optimum: float


def _divergences(fields: Sequence[VectorField]) -> list[VectorField]:
    return [divergence_field(f) for f in fields]


def _div_gram(fields: Sequence[VectorField], kind: ElementKind) -> np.ndarray:
    return _weighted_gram([list(d.parts) for d in _divergences(fields)], kind)


def augmented_divergence_gram(basis: BasisSet) -> np.ndarray:
    """Gram matrix of the divergences of the basis followed by its bubble."""
    return _div_gram(list(basis.fields) + [bubble_for(basis.kind, basis.order)], basis.kind)


def divergence_norm(u: DiscreteField) -> float:
    """L2 norm of ``div u``; inner products of the divergences are integrated exactly."""
    if not np.any(u.coefficients):
        return 0.0
    g = _div_gram(u.fields, u.kind)
    return float(np.sqrt(max(u.coefficients @ g @ u.coefficients, 0.0)))


def _residual_degree(divs: Sequence[VectorField], weights: Sequence[float]) -> int:
    degs = [d.degree for d, w in zip(divs, weights) if w and not d.is_zero()]
    return max(degs, default=-1)


def augment(u: DiscreteField, p: int | None = None) -> AugmentationResult:
    """Least-squares bubble coefficient ``C = -<div u, div chi> / <div chi, div chi>``."""
    p = u.order if p is None else p
    chi = bubble_for(u.kind, p)
    fields = list(u.fields) + [chi]
    g = _div_gram(fields, u.kind)
    c = u.coefficients
    n = len(c)
    before_sq = max(float(c @ g[:n, :n] @ c), 0.0)
    cross = float(c @ g[:n, n])
    chi_sq = float(g[n, n])
    if chi_sq <= 0:
        log.warning("bubble is divergence-free; no correction possible")
        coeff = 0.0
    else:
        coeff = -cross / chi_sq
    # at the minimizer the quadratic drops by exactly cross**2 / chi_sq
    after_sq = before_sq - (cross * cross / chi_sq if chi_sq > 0 else 0.0)
    before = float(np.sqrt(before_sq))
    after = float(np.sqrt(max(after_sq, 0.0)))
    divs = _divergences(fields)
    return AugmentationResult(
        bubble_order(u.kind, p),
        coeff,
        before,
        after,
        _residual_degree(divs, list(c) + [coeff]),
        2 * (cross + coeff * chi_sq),
    )


def divergence_integral(v: VectorField, kind: ElementKind | str) -> dict[int, Fraction]:
    """``int div v`` over the reference element, as ``{radicand d: I_d}``.

    The integral equals ``sum(sqrt(d) * I_d)``; it vanishes exactly when
    every ``I_d`` does.
    """
    kind = ElementKind.parse(kind)
    return {d: integrate_reference(comps[0], kind) for d, comps in divergence_field(v).parts}
