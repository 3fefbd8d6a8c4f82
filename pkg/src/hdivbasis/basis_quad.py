"""Hierarchical H(div) basis on the unit square.

Edge functions (lowest-order Raviart-Thomas and divergence-free curls) and
three interior families built from integrated Legendre polynomials in
``2*xi - 1`` and ``2*eta - 1``.
"""

from __future__ import annotations

from fractions import Fraction

from .basis import BasisFunction, BasisSet, check_order, number
from .kinds import ElementKind
from .polyalgebra import MPoly, VectorField, curl2d
from .polynomials1d import integrated_legendre, legendre
from .refgeom import ReferenceElement, make_reference

EDGE_LOWEST = "EdgeLowest"
EDGE_HIGHER = "EdgeHigher"
INTERIOR_T1 = "InteriorT1"
INTERIOR_T2 = "InteriorT2"
INTERIOR_T3_XI = "InteriorT3Xi"
INTERIOR_T3_ETA = "InteriorT3Eta"
CATEGORIES = (EDGE_LOWEST, EDGE_HIGHER, INTERIOR_T1, INTERIOR_T2, INTERIOR_T3_XI, INTERIOR_T3_ETA)


def shifted(family, n: int, var: MPoly) -> MPoly:
    """``family(n)`` evaluated at ``2*var - 1``."""
    return family(n).substitute([2 * var - 1])


def build_edge_lowest(elem: ReferenceElement) -> list[BasisFunction]:
    out = []
    for eid in elem.edge_ids:
        data = elem.edge_data(eid)
        field = curl2d(data.parameter).times(data.extension * Fraction(1, 2))
        out.append(BasisFunction(0, EDGE_LOWEST, field, eid))
    return out


def build_edge_higher(elem: ReferenceElement, p: int) -> list[BasisFunction]:
    out = []
    for eid in elem.edge_ids:
        data = elem.edge_data(eid)
        for j in range(p):
            potential = data.extension * integrated_legendre(j + 2).substitute([data.parameter])
            out.append(BasisFunction(0, EDGE_HIGHER, curl2d(potential), eid, (j,)))
    return out


def build_interior(elem: ReferenceElement, p: int) -> list[BasisFunction]:
    xi, eta = elem.coords()
    zero = MPoly.zero(2)
    L = {n: (shifted(integrated_legendre, n, xi), shifted(integrated_legendre, n, eta)) for n in range(2, p + 2)}
    dL = {n: (shifted(legendre, n - 1, xi), shifted(legendre, n - 1, eta)) for n in range(2, p + 2)}
    t1, t2 = [], []
    for i in range(p):
        for j in range(p):
            t1.append(BasisFunction(0, INTERIOR_T1, curl2d(L[i + 2][0] * L[j + 2][1]), None, (i, j)))
            comps = (L[i + 2][0] * dL[j + 2][1], dL[i + 2][0] * L[j + 2][1])
            t2.append(BasisFunction(0, INTERIOR_T2, VectorField(comps), None, (i, j)))
    t3x = [BasisFunction(0, INTERIOR_T3_XI, VectorField((L[i + 2][0], zero)), None, (i,), 1) for i in range(p)]
    t3y = [BasisFunction(0, INTERIOR_T3_ETA, VectorField((zero, L[i + 2][1])), None, (i,), 2) for i in range(p)]
    return t1 + t2 + t3x + t3y


def build_set(p: int) -> BasisSet:
    check_order(ElementKind.QUAD, p)
    elem = make_reference(ElementKind.QUAD)
    funcs = build_edge_lowest(elem) + build_edge_higher(elem, p) + build_interior(elem, p)
    return BasisSet(ElementKind.QUAD, p, tuple(number(funcs)))


def expected_counts(p: int) -> dict[str, int]:
    return {
        EDGE_LOWEST: 4,
        EDGE_HIGHER: 4 * p,
        INTERIOR_T1: p * p,
        INTERIOR_T2: p * p,
        INTERIOR_T3_XI: p,
        INTERIOR_T3_ETA: p,
    }
