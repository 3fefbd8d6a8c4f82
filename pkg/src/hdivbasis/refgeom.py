"""Reference elements: vertices, entity numbering and parameterization polynomials.

Numbering conventions (vertex indices are 0-based in code):

* Quad, vertices ``V1..V4`` stored as ``0..3``; edges ``[V1,V2], [V2,V3],
  [V3,V4], [V4,V1]`` (counter-clockwise, so ``n_e = grad(lambda_e)`` is outward).
* Hex, vertices ``V1..V8`` stored as ``0..7``; edges are the bottom ring, the top
  ring, then the four vertical edges; faces bottom, top, front (eta=0),
  right (xi=1), back (eta=1), left (xi=0).
* Tri, edge ``e_j = [j1, j2]`` with ``j = j1 + j2``, ids 1..3.
* Tet, edge ``e_j = [j1, j2]`` with ``j = j1 + j2 + sign(j1)``, ids 1..6; face
  ``f_j`` is the sorted triple of the other three vertices, ids 0..3.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .kinds import ElementKind
from .polyalgebra import MPoly

Vec = tuple[Fraction, ...]


def _vec(*xs) -> Vec:
    return tuple(Fraction(x) for x in xs)


def _sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def _cross(a: Vec, b: Vec) -> Vec:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a: Vec, b: Vec) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def constant_gradient(p: MPoly) -> Vec:
    """Gradient of an affine polynomial as a constant vector."""
    if p.degree > 1:
        raise ValueError("gradient is not constant")
    return tuple(p.diff(k).constant_term() for k in range(p.dim))


@dataclass(frozen=True)
class Facet:
    """An edge or face seen as an affinely parameterized subset of the element.

    ``parametrization[k]`` gives ambient coordinate ``k`` in terms of the
    facet's own coordinates (``t`` on an edge, ``(s, t)`` on a face), with the
    facet's first vertex at the origin.  ``normal`` is an outward normal that is
    not necessarily unit length (codimension-one facets only).
    """

    kind: ElementKind
    label: str
    vertices: tuple[int, ...]
    parametrization: tuple[MPoly, ...]
    normal: Vec | None = None

    @property
    def ambient_dim(self) -> int:
        return self.kind.dim

    @property
    def dim(self) -> int:
        return self.parametrization[0].dim

    @property
    def normal_norm_sq(self) -> Fraction:
        return _dot(self.normal, self.normal)

    def contains(self, point) -> bool:
        """Whether an ambient point lies on the facet's affine hull."""
        if self.normal is None:
            raise ValueError("containment test needs a codimension-one facet")
        origin = tuple(p.constant_term() for p in self.parametrization)
        return _dot(self.normal, _sub(tuple(Fraction(x) for x in point), origin)) == 0


@dataclass(frozen=True)
class EdgeData:
    id: int
    endpoints: tuple[int, int]
    parameter: MPoly  # zeta_e (tensor) or gamma_e (simplex)
    tangent: Vec
    extension: MPoly | None = None  # lambda_e, tensor elements only
    normal: Vec | None = None  # outward normal, 2-D elements only


@dataclass(frozen=True)
class FaceData:
    id: int
    vertices: tuple[int, ...]
    normal: Vec  # outward; unit for hex, unnormalized for tet
    param: tuple[MPoly, MPoly] | None = None  # (xi_f, eta_f), hex only
    extension: MPoly | None = None  # lambda_f, hex only

    @property
    def normal_norm_sq(self) -> Fraction:
        return _dot(self.normal, self.normal)


@dataclass(frozen=True)
class ReferenceElement:
    kind: ElementKind
    vertices: tuple[Vec, ...]
    edges: tuple[tuple[int, int], ...]
    edge_ids: tuple[int, ...]
    faces: tuple[tuple[int, ...], ...]
    face_ids: tuple[int, ...]
    lam: tuple[MPoly, ...]
    sigma: tuple[MPoly, ...] = field(default=())

    @property
    def dim(self) -> int:
        return self.kind.dim

    def coords(self) -> tuple[MPoly, ...]:
        return MPoly.variables(self.dim)

    # edges ---------------------------------------------------------------
    def edge_index(self, edge_id: int) -> int:
        try:
            return self.edge_ids.index(edge_id)
        except ValueError:
            raise ValueError(f"{self.kind.value} has no edge {edge_id!r}; valid ids {self.edge_ids}") from None

    def edge_data(self, edge_id: int) -> EdgeData:
        i, j = self.edges[self.edge_index(edge_id)]
        if self.kind.is_simplex:
            gamma = self.lam[j] - self.lam[i]
            tangent = _sub(self.vertices[j], self.vertices[i])
            normal = None
            if self.dim == 2:
                (opposite,) = {0, 1, 2} - {i, j}
                normal = tuple(-g for g in constant_gradient(self.lam[opposite]))
            return EdgeData(edge_id, (i, j), gamma, tangent, None, normal)
        zeta = self.sigma[j] - self.sigma[i]
        ext = self.lam[i] + self.lam[j]
        tangent = tuple(g / 2 for g in constant_gradient(zeta))
        normal = constant_gradient(ext) if self.dim == 2 else None
        return EdgeData(edge_id, (i, j), zeta, tangent, ext, normal)

    def edge_facet(self, edge_id: int) -> Facet:
        i, j = self.edges[self.edge_index(edge_id)]
        a, b = self.vertices[i], self.vertices[j]
        (t,) = MPoly.variables(1)
        par = tuple(t * (bk - ak) + ak for ak, bk in zip(a, b))
        normal = self.edge_data(edge_id).normal if self.dim == 2 else None
        return Facet(self.kind, f"edge {edge_id}", (i, j), par, normal)

    # faces ---------------------------------------------------------------
    def face_index(self, face_id: int) -> int:
        if self.dim != 3:
            raise ValueError(f"{self.kind.value} has no faces")
        try:
            return self.face_ids.index(face_id)
        except ValueError:
            raise ValueError(f"{self.kind.value} has no face {face_id!r}; valid ids {self.face_ids}") from None

    def face_data(self, face_id: int) -> FaceData:
        verts = self.faces[self.face_index(face_id)]
        if self.kind is ElementKind.TET:
            normal = tuple(-g for g in constant_gradient(self.lam[face_id]))
            return FaceData(face_id, verts, normal)
        i, j, _k, l = verts
        ext = sum((self.lam[v] for v in verts), MPoly.zero(3))
        return FaceData(
            face_id,
            verts,
            constant_gradient(ext),
            (self.sigma[i] - self.sigma[j], self.sigma[i] - self.sigma[l]),
            ext,
        )

    def face_facet(self, face_id: int) -> Facet:
        data = self.face_data(face_id)
        verts = data.vertices
        a = self.vertices[verts[0]]
        b = self.vertices[verts[1]]
        c = self.vertices[verts[-1]]
        s, t = MPoly.variables(2)
        par = tuple(s * (bk - ak) + t * (ck - ak) + ak for ak, bk, ck in zip(a, b, c))
        return Facet(self.kind, f"face {face_id}", verts, par, data.normal)

    def boundary_facets(self) -> list[Facet]:
        """Codimension-one facets: edges in 2-D, faces in 3-D."""
        if self.dim == 2:
            return [self.edge_facet(e) for e in self.edge_ids]
        return [self.face_facet(f) for f in self.face_ids]

    def edge_facets(self) -> list[Facet]:
        return [self.edge_facet(e) for e in self.edge_ids]


def _tensor_lambdas(dim: int, vertices) -> tuple[tuple[MPoly, ...], tuple[MPoly, ...]]:
    xs = MPoly.variables(dim)
    lam, sig = [], []
    for v in vertices:
        factors = [x if c == 1 else 1 - x for x, c in zip(xs, v)]
        prod = MPoly.constant(dim, 1)
        for f in factors:
            prod = prod * f
        lam.append(prod)
        sig.append(sum(factors, MPoly.zero(dim)))
    return tuple(lam), tuple(sig)


@lru_cache(maxsize=None)
def make_reference(kind: ElementKind | str) -> ReferenceElement:
    kind = ElementKind.parse(kind)
    if kind is ElementKind.QUAD:
        verts = (_vec(0, 0), _vec(1, 0), _vec(1, 1), _vec(0, 1))
        lam, sig = _tensor_lambdas(2, verts)
        edges = ((0, 1), (1, 2), (2, 3), (3, 0))
        return ReferenceElement(kind, verts, edges, (1, 2, 3, 4), (), (), lam, sig)
    if kind is ElementKind.HEX:
        verts = (
            _vec(0, 0, 0), _vec(1, 0, 0), _vec(1, 1, 0), _vec(0, 1, 0),
            _vec(0, 0, 1), _vec(1, 0, 1), _vec(1, 1, 1), _vec(0, 1, 1),
        )  # fmt: skip
        lam, sig = _tensor_lambdas(3, verts)
        edges = (
            (0, 1), (1, 2), (2, 3), (3, 0),
            (4, 5), (5, 6), (6, 7), (7, 4),
            (0, 4), (1, 5), (2, 6), (3, 7),
        )  # fmt: skip
        faces = ((0, 1, 2, 3), (4, 5, 6, 7), (0, 1, 5, 4), (1, 2, 6, 5), (2, 3, 7, 6), (3, 0, 4, 7))
        return ReferenceElement(kind, verts, edges, tuple(range(1, 13)), faces, tuple(range(1, 7)), lam, sig)
    xs = MPoly.variables(kind.dim)
    lam = (1 - sum(xs, MPoly.zero(kind.dim)),) + xs
    if kind is ElementKind.TRI:
        verts = (_vec(0, 0), _vec(1, 0), _vec(0, 1))
        edges = ((0, 1), (0, 2), (1, 2))
        return ReferenceElement(kind, verts, edges, (1, 2, 3), (), (), lam)
    verts = (_vec(0, 0, 0), _vec(1, 0, 0), _vec(0, 1, 0), _vec(0, 0, 1))
    edges = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
    edge_ids = tuple(j1 + j2 + (1 if j1 > 0 else 0) for j1, j2 in edges)
    faces = tuple(tuple(v for v in range(4) if v != j) for j in range(4))
    return ReferenceElement(kind, verts, edges, edge_ids, faces, (0, 1, 2, 3), lam)


def face_data(elem: ReferenceElement, face_id: int) -> FaceData:
    return elem.face_data(face_id)


def edge_data(elem: ReferenceElement, edge_id: int) -> EdgeData:
    return elem.edge_data(edge_id)
