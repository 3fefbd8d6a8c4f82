"""Exact property checks for the basis sets.

Each check returns :class:`CheckResult` records.  Structural claims
(divergence-free families, vanishing traces, rank) are decided with exact
rational arithmetic; orthonormality compares Gram blocks with the identity
at a floating-point tolerance.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from . import basis_hex, basis_quad, basis_tet, basis_tri
from .assembly import _mass_rows, _weighted_gram
from .basis import BasisFunction, BasisSet
from .kinds import ElementKind
from .polyalgebra import VectorField, coefficient_rank, divergence_field
from .refgeom import Facet, ReferenceElement, make_reference

ORTHONORMAL_TOL = 1e-10


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def all_passed(results) -> bool:
    return all(r.passed for r in results)


# helpers -----------------------------------------------------------------------


def _normal_trace(field: VectorField, facet: Facet) -> VectorField:
    return field.dot(facet.normal).restrict(facet.parametrization)


def _vanishes_on(field: VectorField, facet: Facet) -> bool:
    return field.restrict(facet.parametrization).is_zero()


def normal_trace_vanishes(field: VectorField, kind: ElementKind | str) -> bool:
    """Whether ``n . field`` restricts to zero on every boundary facet."""
    elem = make_reference(ElementKind.parse(kind))
    return all(_normal_trace(field, f).is_zero() for f in _facet_map(elem).values())


def _is_constant(field: VectorField, value: int) -> bool:
    """Whether a one-component field is the rational constant ``value``."""
    if len(field.parts) != 1 or field.parts[0][0] != 1:
        return False
    poly = field.parts[0][1][0]
    return poly.is_constant() and poly.constant_term() == value


def _tangential_trace(field: VectorField, elem: ReferenceElement, edge_id: int) -> VectorField:
    return field.dot(elem.edge_data(edge_id).tangent).restrict(elem.edge_facet(edge_id).parametrization)


def _facet_map(elem: ReferenceElement) -> dict:
    if elem.dim == 2:
        return {e: elem.edge_facet(e) for e in elem.edge_ids}
    return {f: elem.face_facet(f) for f in elem.face_ids}


def _name(f: BasisFunction, what: str) -> str:
    return f"{f.label} #{f.id}: {what}"


# divergence ----------------------------------------------------------------------

DIVERGENCE_FREE = {
    ElementKind.QUAD: (basis_quad.EDGE_HIGHER, basis_quad.INTERIOR_T1),
    ElementKind.HEX: (basis_hex.FACE_HIGHER_IJ, basis_hex.FACE_HIGHER_I, basis_hex.FACE_HIGHER_J) + basis_hex.T1,
    ElementKind.TRI: (basis_tri.EDGE_HIGHER,),
    ElementKind.TET: (),
}
UNIT_DIVERGENCE = {ElementKind.QUAD: basis_quad.EDGE_LOWEST, ElementKind.HEX: basis_hex.FACE_RT0}


def check_divfree(basis: BasisSet) -> list[CheckResult]:
    out = []
    for f in basis:
        if f.category in DIVERGENCE_FREE[basis.kind]:
            out.append(CheckResult(_name(f, "div = 0"), divergence_field(f.field).is_zero()))
        elif f.category == UNIT_DIVERGENCE.get(basis.kind):
            div = divergence_field(f.field)
            ok = _is_constant(div, 1) or _is_constant(div, -1)
            out.append(CheckResult(_name(f, "div = +-1"), ok))
    return out


# traces --------------------------------------------------------------------------


def _quad_traces(basis: BasisSet, elem: ReferenceElement) -> list[CheckResult]:
    facets = _facet_map(elem)
    out = []
    for f in basis:
        if f.category == basis_quad.EDGE_LOWEST:
            data = elem.edge_data(f.entity)
            out.append(CheckResult(_name(f, "tangential component = 0"), f.field.dot(data.tangent).is_zero()))
            trace = _normal_trace(f.field, facets[f.entity])
            out.append(CheckResult(_name(f, "normal trace = 1 on own edge"), _is_constant(trace, 1)))
        elif f.category == basis_quad.EDGE_HIGHER:
            for eid, facet in facets.items():
                if eid != f.entity:
                    ok = _normal_trace(f.field, facet).is_zero()
                    out.append(CheckResult(_name(f, f"normal trace = 0 on edge {eid}"), ok))
        elif f.category in (basis_quad.INTERIOR_T2, basis_quad.INTERIOR_T3_XI, basis_quad.INTERIOR_T3_ETA):
            for eid, facet in facets.items():
                ok = _normal_trace(f.field, facet).is_zero()
                out.append(CheckResult(_name(f, f"normal trace = 0 on edge {eid}"), ok))
    return out


def _opposite_hex_face(elem: ReferenceElement, fid: int) -> int:
    verts = set(elem.faces[elem.face_index(fid)])
    (opp,) = [g for g, face in zip(elem.face_ids, elem.faces) if not verts & set(face)]
    return opp


def _hex_traces(basis: BasisSet, elem: ReferenceElement) -> list[CheckResult]:
    facets = _facet_map(elem)
    out = []
    for f in basis:
        if f.category == basis_hex.FACE_RT0:
            trace = _normal_trace(f.field, facets[f.entity])
            out.append(CheckResult(_name(f, "normal trace = 1 on own face"), _is_constant(trace, 1)))
            opp = _opposite_hex_face(elem, f.entity)
            ok = _normal_trace(f.field, facets[opp]).is_zero()
            out.append(CheckResult(_name(f, f"normal trace = 0 on opposite face {opp}"), ok))
        elif f.category in (basis_hex.FACE_HIGHER_IJ, basis_hex.FACE_HIGHER_I, basis_hex.FACE_HIGHER_J):
            for fid, facet in facets.items():
                if fid != f.entity:
                    ok = _normal_trace(f.field, facet).is_zero()
                    out.append(CheckResult(_name(f, f"normal trace = 0 on face {fid}"), ok))
        else:
            for fid, facet in facets.items():
                ok = _normal_trace(f.field, facet).is_zero()
                out.append(CheckResult(_name(f, f"normal trace = 0 on face {fid}"), ok))
    return out


def _tri_traces(basis: BasisSet, elem: ReferenceElement) -> list[CheckResult]:
    facets = _facet_map(elem)
    out = []
    for f in basis:
        if f.category in (basis_tri.EDGE_N0, basis_tri.EDGE_HIGHER):
            for eid, facet in facets.items():
                if eid != f.entity:
                    ok = _normal_trace(f.field, facet).is_zero()
                    out.append(CheckResult(_name(f, f"normal trace = 0 on edge {eid}"), ok))
        elif f.category == basis_tri.EDGE_INTERIOR:
            for eid, facet in facets.items():
                ok = _normal_trace(f.field, facet).is_zero()
                out.append(CheckResult(_name(f, f"normal trace = 0 on edge {eid}"), ok))
                if eid != f.entity:
                    ok = _tangential_trace(f.field, elem, eid).is_zero()
                    out.append(CheckResult(_name(f, f"tangential trace = 0 on edge {eid}"), ok))
        elif f.category == basis_tri.INTERIOR_BUBBLE:
            for eid, facet in facets.items():
                out.append(CheckResult(_name(f, f"vanishes on edge {eid}"), _vanishes_on(f.field, facet)))
    return out


def _cross_trace_zero(field: VectorField, facet: Facet) -> bool:
    return field.cross(facet.normal).restrict(facet.parametrization).is_zero()


def tet_traces(functions, elem: ReferenceElement) -> list[CheckResult]:
    faces = _facet_map(elem)
    edges = {e: elem.edge_facet(e) for e in elem.edge_ids}
    out = []
    for f in functions:
        if f.category in (basis_tet.EDGE_FACE_FIRST, basis_tet.EDGE_FACE_SECOND, basis_tet.EDGE_FACE_AC):
            owner = f.entity[0]
            for fid, facet in faces.items():
                if fid != owner:
                    ok = _normal_trace(f.field, facet).is_zero()
                    out.append(CheckResult(_name(f, f"normal trace = 0 on face {fid}"), ok))
        elif f.category == basis_tet.FACE_BUBBLE:
            for eid, facet in edges.items():
                out.append(CheckResult(_name(f, f"vanishes on edge {eid}"), _vanishes_on(f.field, facet)))
            for fid, facet in faces.items():
                if fid != f.entity:
                    ok = _normal_trace(f.field, facet).is_zero()
                    out.append(CheckResult(_name(f, f"normal trace = 0 on face {fid}"), ok))
        elif f.category == basis_tet.EDGE_INTERIOR:
            for fid, facet in faces.items():
                ok = _normal_trace(f.field, facet).is_zero()
                out.append(CheckResult(_name(f, f"normal trace = 0 on face {fid}"), ok))
            for eid in elem.edge_ids:
                if eid != f.entity:
                    ok = _tangential_trace(f.field, elem, eid).is_zero()
                    out.append(CheckResult(_name(f, f"tangential trace = 0 on edge {eid}"), ok))
        elif f.category in (basis_tet.FACE_INTERIOR_1, basis_tet.FACE_INTERIOR_2):
            for fid, facet in faces.items():
                ok = _normal_trace(f.field, facet).is_zero()
                out.append(CheckResult(_name(f, f"normal trace = 0 on face {fid}"), ok))
                if fid != f.entity:
                    ok = _cross_trace_zero(f.field, facet)
                    out.append(CheckResult(_name(f, f"n x field = 0 on face {fid}"), ok))
            for eid, facet in edges.items():
                out.append(CheckResult(_name(f, f"vanishes on edge {eid}"), _vanishes_on(f.field, facet)))
        elif f.category == basis_tet.INTERIOR_BUBBLE:
            for fid, facet in faces.items():
                out.append(CheckResult(_name(f, f"vanishes on face {fid}"), _vanishes_on(f.field, facet)))
    return out


def check_traces(basis: BasisSet) -> list[CheckResult]:
    elem = make_reference(basis.kind)
    if basis.kind is ElementKind.QUAD:
        return _quad_traces(basis, elem)
    if basis.kind is ElementKind.HEX:
        return _hex_traces(basis, elem)
    if basis.kind is ElementKind.TRI:
        return _tri_traces(basis, elem)
    return tet_traces(basis.functions, elem)


# orthonormality ------------------------------------------------------------------


def orthonormal_blocks(basis: BasisSet) -> dict[str, list[int]]:
    """Index groups whose Gram matrix is claimed to be the identity."""
    groups: dict[str, list[int]] = defaultdict(list)
    for k, f in enumerate(basis):
        key = None
        if basis.kind is ElementKind.TRI:
            if f.category == basis_tri.EDGE_INTERIOR:
                key = f"{f.category} edge {f.entity}"
            elif f.category == basis_tri.INTERIOR_BUBBLE:
                key = f"{f.category} dir {f.direction}"
        elif basis.kind is ElementKind.TET:
            if f.category == basis_tet.EDGE_FACE_FIRST:
                fid, edge = f.entity
                key = f"{f.category} face {fid} edge {edge}"
            elif f.category in (basis_tet.FACE_BUBBLE, basis_tet.FACE_INTERIOR_1, basis_tet.FACE_INTERIOR_2):
                key = f"{f.category} face {f.entity}"
            elif f.category == basis_tet.EDGE_INTERIOR:
                key = f"{f.category} edge {f.entity}"
            elif f.category == basis_tet.INTERIOR_BUBBLE:
                key = f"{f.category} dir {f.direction}"
        if key is not None:
            groups[key].append(k)
    return dict(groups)


def gram_block(basis: BasisSet, indices) -> np.ndarray:
    fields = [basis.functions[i].field for i in indices]
    return _weighted_gram(_mass_rows(fields), basis.kind)


def check_orthonormal(basis: BasisSet, tol: float = ORTHONORMAL_TOL) -> list[CheckResult]:
    out = []
    for key, idx in orthonormal_blocks(basis).items():
        dev = float(np.abs(gram_block(basis, idx) - np.eye(len(idx))).max())
        out.append(CheckResult(f"{key}: Gram = I", dev <= tol, f"max deviation {dev:.3e}"))
    return out


def cross_direction_bubble_gram(basis: BasisSet) -> float | None:
    """Largest Gram entry between bubbles of different directions (reported, not asserted)."""
    bubble = basis_tri.INTERIOR_BUBBLE if basis.kind is ElementKind.TRI else basis_tet.INTERIOR_BUBBLE
    idx = [k for k, f in enumerate(basis) if f.category == bubble]
    if not idx:
        return None
    g = gram_block(basis, idx)
    dirs = [basis.functions[k].direction for k in idx]
    mask = np.array([[a != b for b in dirs] for a in dirs])
    return float(np.abs(g[mask]).max()) if mask.any() else None


# rank and dimensions -------------------------------------------------------------


def expected_counts(basis: BasisSet) -> dict[str, int]:
    if basis.kind is ElementKind.QUAD:
        return basis_quad.expected_counts(basis.order)
    if basis.kind is ElementKind.HEX:
        return basis_hex.expected_counts(basis.order)
    if basis.kind is ElementKind.TRI:
        return basis_tri.expected_counts(basis.order)
    return basis_tet.expected_counts(basis.order, basis.variant)


def expected_dimension(kind: ElementKind, p: int) -> int:
    return {
        ElementKind.QUAD: 2 * (p + 2) * (p + 1),
        ElementKind.HEX: 3 * (p + 2) * (p + 1) ** 2,
        ElementKind.TRI: (p + 1) * (p + 2),
        ElementKind.TET: (p + 1) * (p + 2) * (p + 3) // 2,
    }[kind]


def check_dims(basis: BasisSet) -> list[CheckResult]:
    got = basis.category_counts()
    out = [
        CheckResult(
            f"{cat} count", got.get(cat, 0) == want, f"{got.get(cat, 0)} (expected {want})"
        )
        for cat, want in expected_counts(basis).items()
    ]
    want = expected_dimension(basis.kind, basis.order)
    out.append(CheckResult("dimension", basis.dimension == want, f"{basis.dimension} (expected {want})"))
    return out


def check_rank(basis: BasisSet) -> list[CheckResult]:
    rank = coefficient_rank(basis.fields)
    out = [CheckResult("rank = dimension", rank == basis.dimension, f"rank {rank}, dimension {basis.dimension}")]
    if basis.kind is ElementKind.TET:
        pairs: dict = defaultdict(list)
        for f in basis:
            if f.category in (basis_tet.EDGE_FACE_FIRST, basis_tet.EDGE_FACE_SECOND):
                pairs[f.entity].append(f.field)
        family = [fld for fields in pairs.values() for fld in fields]
        r = coefficient_rank(family)
        out.append(CheckResult("edge-face family rank = 12p", r == 12 * basis.order, f"rank {r}"))
        for (fid, edge), fields in pairs.items():
            r = coefficient_rank(fields)
            out.append(CheckResult(f"face {fid} edge {edge}: rank = p", r == basis.order, f"rank {r}"))
    return out


def build(kind: ElementKind | str, p: int, variant: str | None = None) -> BasisSet:
    """Basis set for any element kind; ``variant`` applies to the tetrahedron only."""
    kind = ElementKind.parse(kind)
    if kind is ElementKind.TET:
        return basis_tet.build_set(p, variant or basis_tet.Variant.FIRST)
    if variant is not None:
        raise ValueError("variants exist only for the tetrahedron")
    return {ElementKind.QUAD: basis_quad, ElementKind.HEX: basis_hex, ElementKind.TRI: basis_tri}[kind].build_set(p)


__all__ = [
    "CheckResult",
    "all_passed",
    "build",
    "check_dims",
    "check_divfree",
    "check_orthonormal",
    "check_rank",
    "check_traces",
    "cross_direction_bubble_gram",
    "expected_dimension",
    "gram_block",
    "normal_trace_vanishes",
    "orthonormal_blocks",
    "tet_traces",
]

