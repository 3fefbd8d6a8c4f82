"""Hierarchical H(div) basis on the reference triangle.

Edge functions (lowest order and curls of scaled integrated Legendre
polynomials), edge-based interior functions along each edge tangent, and
interior bubbles in the two Cartesian directions.
"""

from __future__ import annotations

from fractions import Fraction

from .basis import BasisFunction, BasisSet, check_order, number, unit_along, unit_vector
from .kinds import ElementKind
from .polyalgebra import MPoly, curl2d
from .polynomials1d import homogenized_jacobi, scaled_integrated_legendre
from .refgeom import ReferenceElement, make_reference

EDGE_N0 = "EdgeN0"
EDGE_HIGHER = "EdgeHigher"
EDGE_INTERIOR = "EdgeInterior"
INTERIOR_BUBBLE = "InteriorBubble"
CATEGORIES = (EDGE_N0, EDGE_HIGHER, EDGE_INTERIOR, INTERIOR_BUBBLE)


def jacobi_ratio(n: int, alpha: int, beta: int, numer: MPoly, denom: MPoly) -> MPoly:
    """``denom^n P_n^(alpha,beta)(2 numer / denom - 1)`` as a polynomial."""
    return homogenized_jacobi(n, alpha, beta).substitute([numer, denom])


def edge_interior_constant_sq(i: int) -> Fraction:
    return Fraction(2 * (i + 2) * (i + 3) * (2 * i + 3) * (2 * i + 5))


def bubble_constant_sq(m: int, n: int) -> Fraction:
    return Fraction(
        (m + 3) * (m + 4) * (2 * m + 5) * (2 * m + n + 6) * (2 * m + n + 7) * (2 * m + 2 * n + 8),
        (m + 1) * (m + 2) * (n + 1) * (n + 2),
    )


def build_edge(elem: ReferenceElement, p: int) -> list[BasisFunction]:
    lam = elem.lam
    out = []
    for eid, (k1, k2) in zip(elem.edge_ids, elem.edges):
        field = curl2d(lam[k1]).times(lam[k2]) - curl2d(lam[k2]).times(lam[k1])
        out.append(BasisFunction(0, EDGE_N0, field, eid))
    for eid, (k1, k2) in zip(elem.edge_ids, elem.edges):
        gamma = lam[k2] - lam[k1]
        t = lam[k2] + lam[k1]
        for j in range(p):
            potential = scaled_integrated_legendre(j + 2).substitute([gamma, t])
            out.append(BasisFunction(0, EDGE_HIGHER, curl2d(potential), eid, (j,)))
    return out


def build_edge_interior(elem: ReferenceElement, p: int) -> list[BasisFunction]:
    # The Jacobi factor is taken in the far endpoint's complement,
    # (1 - lam_k2)^i P_i(2 lam_k1 / (1 - lam_k2) - 1); this is the reading
    # that reproduces the published condition numbers.
    lam = elem.lam
    out = []
    for eid, (k1, k2) in zip(elem.edge_ids, elem.edges):
        tau = elem.edge_data(eid).tangent
        for i in range(p - 1):
            poly = lam[k1] * lam[k2] * jacobi_ratio(i, 0, 2, lam[k1], 1 - lam[k2])
            field = unit_along(poly, tau, edge_interior_constant_sq(i))
            out.append(BasisFunction(0, EDGE_INTERIOR, field, eid, (i,)))
    return out


def bubble_scalar(elem: ReferenceElement, m: int, n: int) -> MPoly:
    """Unscaled scalar factor of the ``(m, n)`` interior bubble."""
    l0, l1, l2 = elem.lam
    return (
        l0 * l1 * l2
        * jacobi_ratio(m, 2, 2, l1, 1 - l0)
        * homogenized_jacobi(n, 2 * m + 5, 2).substitute([l0, MPoly.constant(2, 1)])
    )  # fmt: skip


def build_interior_bubble(elem: ReferenceElement, p: int) -> list[BasisFunction]:
    out = []
    for direction in (1, 2):
        e = unit_vector(2, direction - 1)
        for total in range(p - 2):
            for m in range(total + 1):
                n = total - m
                field = unit_along(bubble_scalar(elem, m, n), e, bubble_constant_sq(m, n))
                out.append(BasisFunction(0, INTERIOR_BUBBLE, field, None, (m, n), direction))
    return out


def build_set(p: int) -> BasisSet:
    check_order(ElementKind.TRI, p)
    elem = make_reference(ElementKind.TRI)
    funcs = build_edge(elem, p) + build_edge_interior(elem, p) + build_interior_bubble(elem, p)
    return BasisSet(ElementKind.TRI, p, tuple(number(funcs)))


def expected_counts(p: int) -> dict[str, int]:
    return {
        EDGE_N0: 3,
        EDGE_HIGHER: 3 * p,
        EDGE_INTERIOR: 3 * (p - 1),
        INTERIOR_BUBBLE: (p - 2) * (p - 1),
    }
