"""Hierarchical H(div) basis on the reference tetrahedron.

Edge-based face functions come in three variants:

* ``first``: orthonormal, one Jacobi family per (face, edge) pair;
* ``second``: seeded by two lowest-order fields and extended by a Legendre
  recursion in the edge parameter;
* ``ac``: an earlier Legendre-times-barycentric family that is kept only to
  exhibit its linear dependence at ``p = 2``.  It never enters a basis set.

The remaining families (face bubbles, edge-based interior, face-based
interior and interior bubbles) are shared by the first two variants.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .basis import BasisFunction, BasisSet, along, check_order, cross, number, unit_along, unit_vector
from .basis_tri import jacobi_ratio
from .exact_linalg import left_nullspace
from .kinds import ElementKind
from .polyalgebra import MPoly, VectorField, coefficient_rank, coefficient_rows
from .polynomials1d import homogenized_jacobi, legendre
from .refgeom import ReferenceElement, constant_gradient, make_reference

EDGE_FACE_AC = "EdgeFaceAC"
EDGE_FACE_FIRST = "EdgeFaceFirst"
EDGE_FACE_SECOND = "EdgeFaceSecond"
FACE_BUBBLE = "FaceBubble"
EDGE_INTERIOR = "EdgeInterior"
FACE_INTERIOR_1 = "FaceInterior1"
FACE_INTERIOR_2 = "FaceInterior2"
INTERIOR_BUBBLE = "InteriorBubble"
CATEGORIES = (
    EDGE_FACE_AC, EDGE_FACE_FIRST, EDGE_FACE_SECOND, FACE_BUBBLE,
    EDGE_INTERIOR, FACE_INTERIOR_1, FACE_INTERIOR_2, INTERIOR_BUBBLE,
)  # fmt: skip


class Variant(str, Enum):
    FIRST = "first"
    SECOND = "second"
    AC = "ac"

    @classmethod
    def parse(cls, value: "Variant | str") -> "Variant":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown variant {value!r}; expected one of first, second, ac") from None


def _grads(elem: ReferenceElement):
    return [constant_gradient(l) for l in elem.lam]


def sorted_roles(face):
    """``(k1, k2, k3)``: each edge ``k1 < k2`` of the face and the opposite face vertex."""
    a, b, c = face
    return [(a, b, c), (a, c, b), (b, c, a)]


def cyclic_roles(face):
    a, b, c = face
    return [(a, b, c), (b, c, a), (c, a, b)]


def first_kind_constant_sq(i: int) -> Fraction:
    return Fraction(3 * (2 * i + 4) * (2 * i + 5))


def build_edge_face_first(elem: ReferenceElement, p: int) -> list[BasisFunction]:
    lam, grad = elem.lam, _grads(elem)
    out = []
    for fid, face in zip(elem.face_ids, elem.faces):
        for k1, k2, k3 in sorted_roles(face):
            direction = cross(grad[k1], grad[k2])
            for i in range(p):
                poly = lam[k3] * jacobi_ratio(i, 3, 0, lam[k2], 1 - lam[k1])
                field = unit_along(poly, direction, first_kind_constant_sq(i))
                out.append(BasisFunction(0, EDGE_FACE_FIRST, field, (fid, (k1, k2)), (i,)))
    return out


def build_edge_face_second(elem: ReferenceElement, p: int) -> list[BasisFunction]:
    lam, grad = elem.lam, _grads(elem)
    out = []
    for fid, face in zip(elem.face_ids, elem.faces):
        for k1, k2, k3 in cyclic_roles(face):
            gamma = lam[k2] - lam[k1]
            seed0 = unit_along(lam[k1], cross(grad[k2], grad[k3]))
            seed1 = unit_along(lam[k1] * lam[k2], cross(grad[k3], grad[k1]))
            members = [seed0, seed1]
            for i in range(1, p - 1):
                li = legendre(i).substitute([gamma])
                lm = legendre(i - 1).substitute([gamma])
                members.append(seed1.times(li) + seed0.times(lm))
            for i, field in enumerate(members[:p]):
                out.append(BasisFunction(0, EDGE_FACE_SECOND, field, (fid, (k1, k2)), (i,)))
    return out


def build_edge_face_ac(elem: ReferenceElement, p: int) -> list[BasisFunction]:
    """Legendre polynomials of the face edge opposite ``k1``, times ``lam_k1 grad(lam_k2) x grad(lam_k3)``."""
    lam, grad = elem.lam, _grads(elem)
    out = []
    for fid, face in zip(elem.face_ids, elem.faces):
        for k1, k2, k3 in cyclic_roles(face):
            gamma = lam[k3] - lam[k2]
            direction = cross(grad[k2], grad[k3])
            for i in range(p):
                field = along(legendre(i).substitute([gamma]) * lam[k1], direction)
                out.append(BasisFunction(0, EDGE_FACE_AC, field, (fid, (k1, k2)), (i,)))
    return out


def build_edge_face(elem: ReferenceElement, p: int, variant: Variant | str) -> list[BasisFunction]:
    variant = Variant.parse(variant)
    if variant is Variant.FIRST:
        return build_edge_face_first(elem, p)
    if variant is Variant.SECOND:
        return build_edge_face_second(elem, p)
    if p > 4:
        raise ValueError("the ac family is only provided for p <= 4")
    return build_edge_face_ac(elem, p)


def face_scalar(elem: ReferenceElement, face, m: int, n: int) -> MPoly:
    """Unscaled scalar shared by the face bubbles and face-based interior functions."""
    lam = elem.lam
    j2, j3, j4 = face
    return (
        lam[j2] * lam[j3] * lam[j4]
        * jacobi_ratio(m, 2 * n + 3, 2, lam[j3], 1 - lam[j2])
        * jacobi_ratio(n, 0, 2, lam[j4], 1 - lam[j2] - lam[j3])
    )  # fmt: skip


def face_constant_sq(m: int, n: int) -> Fraction:
    s = m + n
    return Fraction(
        (2 * n + 3) * (s + 3) * (m + 2 * n + 4) * (m + 2 * n + 5) * (2 * s + 7) * (2 * s + 8) * (2 * s + 9),
        (m + 1) * (m + 2),
    )


def _face_indices(p: int):
    for total in range(p - 2):
        for m in range(total + 1):
            yield m, total - m


def build_face_bubble(elem: ReferenceElement, p: int) -> list[BasisFunction]:
    grad = _grads(elem)
    out = []
    for fid, face in zip(elem.face_ids, elem.faces):
        _, j3, j4 = face
        direction = cross(grad[j3], grad[j4])
        for m, n in _face_indices(p):
            field = unit_along(face_scalar(elem, face, m, n), direction, face_constant_sq(m, n))
            out.append(BasisFunction(0, FACE_BUBBLE, field, fid, (m, n)))
    return out


def edge_interior_constant_sq(i: int) -> Fraction:
    return Fraction((i + 3) ** 2 * (2 * i + 4) * (2 * i + 5) * (2 * i + 7), i + 1)


def build_edge_interior(elem: ReferenceElement, p: int) -> list[BasisFunction]:
    lam = elem.lam
    out = []
    for eid, (k1, k2) in zip(elem.edge_ids, elem.edges):
        tau = elem.edge_data(eid).tangent
        for i in range(p - 1):
            poly = lam[k1] * lam[k2] * jacobi_ratio(i, 1, 2, lam[k2], 1 - lam[k1])
            field = unit_along(poly, tau, edge_interior_constant_sq(i))
            out.append(BasisFunction(0, EDGE_INTERIOR, field, eid, (i,)))
    return out


def build_face_interior(elem: ReferenceElement, p: int) -> list[BasisFunction]:
    verts = elem.vertices
    out = []
    for category, slot in ((FACE_INTERIOR_1, 1), (FACE_INTERIOR_2, 2)):
        for fid, face in zip(elem.face_ids, elem.faces):
            tau = tuple(a - b for a, b in zip(verts[face[slot]], verts[face[0]]))
            for m, n in _face_indices(p):
                field = unit_along(face_scalar(elem, face, m, n), tau, face_constant_sq(m, n))
                out.append(BasisFunction(0, category, field, fid, (m, n)))
    return out


def bubble_scalar(elem: ReferenceElement, l: int, m: int, n: int) -> MPoly:
    l0, l1, l2, l3 = elem.lam
    one = MPoly.constant(3, 1)
    return (
        l0 * l1 * l2 * l3
        * homogenized_jacobi(l, 2 * m + 2 * n + 8, 2).substitute([l1, one])
        * jacobi_ratio(m, 2 * n + 5, 2, l2, 1 - l1)
        * jacobi_ratio(n, 2, 2, l3, 1 - l1 - l2)
    )  # fmt: skip


def bubble_constant_sq(l: int, m: int, n: int) -> Fraction:
    s = l + m + n
    c1 = Fraction(
        (s + m + n + 9) * (s + m + n + 10) * (2 * s + 11) * (m + 2 * n + 6),
        (l + 1) * (m + 1) * (n + 1),
    )
    c2 = Fraction(
        (m + 2 * n + 7) * (2 * m + 2 * n + 8) * (n + 3) * (n + 4) * (2 * n + 5),
        (l + 2) * (m + 2) * (n + 2),
    )
    return c1 * c2


def _bubble_indices(p: int):
    for total in range(p - 3):
        for l in range(total + 1):
            for m in range(total - l + 1):
                yield l, m, total - l - m


def build_interior_bubble(elem: ReferenceElement, p: int) -> list[BasisFunction]:
    out = []
    for direction in (1, 2, 3):
        e = unit_vector(3, direction - 1)
        for l, m, n in _bubble_indices(p):
            field = unit_along(bubble_scalar(elem, l, m, n), e, bubble_constant_sq(l, m, n))
            out.append(BasisFunction(0, INTERIOR_BUBBLE, field, None, (l, m, n), direction))
    return out


def build_set(p: int, variant: Variant | str = Variant.FIRST) -> BasisSet:
    variant = Variant.parse(variant)
    if variant is Variant.AC:
        raise ValueError("the ac family is not a basis; use degeneracy_certificate")
    check_order(ElementKind.TET, p)
    elem = make_reference(ElementKind.TET)
    funcs = (
        build_edge_face(elem, p, variant)
        + build_face_bubble(elem, p)
        + build_edge_interior(elem, p)
        + build_face_interior(elem, p)
        + build_interior_bubble(elem, p)
    )
    return BasisSet(ElementKind.TET, p, tuple(number(funcs)), variant.value)


def expected_counts(p: int, variant: Variant | str = Variant.FIRST) -> dict[str, int]:
    variant = Variant.parse(variant)
    edge_face = EDGE_FACE_FIRST if variant is Variant.FIRST else EDGE_FACE_SECOND
    return {
        edge_face: 12 * p,
        FACE_BUBBLE: 2 * (p - 2) * (p - 1),
        EDGE_INTERIOR: 6 * (p - 1),
        FACE_INTERIOR_1: 2 * (p - 2) * (p - 1),
        FACE_INTERIOR_2: 2 * (p - 2) * (p - 1),
        INTERIOR_BUBBLE: (p - 3) * (p - 2) * (p - 1) // 2,
    }


@dataclass(frozen=True)
class DegeneracyCertificate:
    order: int
    count: int
    rank: int
    nullspace: tuple[tuple[Fraction, ...], ...]
    labels: tuple[str, ...]

    @property
    def deficit(self) -> int:
        return self.count - self.rank


def ac_family(p: int) -> list[BasisFunction]:
    if not 1 <= p <= 4:
        raise ValueError(f"the ac family is only provided for 1 <= p <= 4, got {p!r}")
    return number(build_edge_face_ac(make_reference(ElementKind.TET), p))


def degeneracy_certificate(p: int) -> DegeneracyCertificate:
    """Exact rank of the ``ac`` family and a rational basis of its dependencies."""
    funcs = ac_family(p)
    fields = [f.field for f in funcs]
    rows, radicand = coefficient_rows(fields)
    assert radicand == 1  # the ac family has rational coefficients
    null = left_nullspace([[a for a, _ in row] for row in rows])
    rank = coefficient_rank(fields)
    assert rank + len(null) == len(funcs)
    return DegeneracyCertificate(
        p, len(funcs), rank, tuple(tuple(v) for v in null), tuple(f"{f.label}" for f in funcs)
    )


def combine(functions: list[BasisFunction], coefficients) -> VectorField:
    """``sum(c_i * Phi_i)`` for rational coefficients."""
    total = None
    for f, c in zip(functions, coefficients):
        term = f.field.times(Fraction(c))
        total = term if total is None else total + term
    return total
