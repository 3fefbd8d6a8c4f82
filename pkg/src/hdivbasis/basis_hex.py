"""Hierarchical H(div) basis on the unit cube.

Face functions are the lowest-order Raviart-Thomas fields plus curls of
face-supported vector potentials; interior functions come in a
divergence-free type and two types with vanishing normal trace.  Interior
formulas use ``xi1, eta2, zeta3 = 2*xi - 1, 2*eta - 1, 2*zeta - 1``.
"""

from __future__ import annotations

from .basis import BasisFunction, BasisSet, along, check_order, number
from .kinds import ElementKind
from .polyalgebra import MPoly, VectorField, curl3d, gradient
from .polynomials1d import integrated_legendre, legendre
from .refgeom import ReferenceElement, make_reference

FACE_RT0 = "FaceRT0"
FACE_HIGHER_IJ = "FaceHigherIJ"
FACE_HIGHER_I = "FaceHigherI"
FACE_HIGHER_J = "FaceHigherJ"
T1 = tuple(f"InteriorT1_{k}" for k in range(1, 6))
T2 = tuple(f"InteriorT2_{k}" for k in range(1, 5))
T3 = tuple(f"InteriorT3_{k}" for k in range(1, 4))
CATEGORIES = (FACE_RT0, FACE_HIGHER_IJ, FACE_HIGHER_I, FACE_HIGHER_J) + T1 + T2 + T3


def build_face_rt0(elem: ReferenceElement) -> list[BasisFunction]:
    out = []
    for fid in elem.face_ids:
        data = elem.face_data(fid)
        out.append(BasisFunction(0, FACE_RT0, along(data.extension, data.normal), fid))
    return out


def build_face_higher(elem: ReferenceElement, p: int) -> list[BasisFunction]:
    out = []
    for fid in elem.face_ids:
        data = elem.face_data(fid)
        lam = data.extension
        xi_f, eta_f = data.param
        Lx = [integrated_legendre(n + 2).substitute([xi_f]) for n in range(p)]
        Ly = [integrated_legendre(n + 2).substitute([eta_f]) for n in range(p)]
        grad_xi, grad_eta = gradient(xi_f), gradient(eta_f)
        for i in range(p):
            for j in range(p):
                w = gradient(Lx[i]).times(lam * Ly[j]) - gradient(Ly[j]).times(lam * Lx[i])
                out.append(BasisFunction(0, FACE_HIGHER_IJ, curl3d(w), fid, (i, j)))
        for i in range(p):
            out.append(BasisFunction(0, FACE_HIGHER_I, curl3d(grad_eta.times(lam * Lx[i])), fid, (i,)))
        for j in range(p):
            out.append(BasisFunction(0, FACE_HIGHER_J, curl3d(grad_xi.times(lam * Ly[j])), fid, (j,)))
    return out


def _field(x=None, y=None, z=None) -> VectorField:
    zero = MPoly.zero(3)
    return VectorField((x or zero, y or zero, z or zero))


def build_interior(elem: ReferenceElement, p: int) -> list[BasisFunction]:
    coords = elem.coords()
    # L[a][n] = L_{n+2}, l[a][n] = ell_{n+1} in the shifted coordinate of axis a
    L = [[integrated_legendre(n + 2).substitute([2 * c - 1]) for n in range(p)] for c in coords]
    l = [[legendre(n + 1).substitute([2 * c - 1]) for n in range(p)] for c in coords]
    r = range(p)
    out = []

    def add(cat, field, idx):
        out.append(BasisFunction(0, cat, field, None, idx))

    for i in r:
        for j in r:
            for k in r:
                add(T1[0], _field(x=L[0][i] * l[1][j] * l[2][k] * 4, z=-(l[0][i] * l[1][j] * L[2][k]) * 4), (i, j, k))
    for i in r:
        for j in r:
            for k in r:
                add(T1[1], _field(y=l[0][i] * L[1][j] * l[2][k] * 4, z=-(l[0][i] * l[1][j] * L[2][k]) * 4), (i, j, k))
    for j in r:
        for k in r:
            add(T1[2], _field(y=-(L[1][j] * l[2][k]) * 2, z=l[1][j] * L[2][k] * 2), (j, k))
    for i in r:
        for k in r:
            add(T1[3], _field(x=L[0][i] * l[2][k] * 2, z=-(l[0][i] * L[2][k]) * 2), (i, k))
    for i in r:
        for j in r:
            add(T1[4], _field(x=L[0][i] * l[1][j] * 2, y=-(l[0][i] * L[1][j]) * 2), (i, j))

    for i in r:
        for j in r:
            for k in r:
                add(T2[0], _field(x=L[0][i] * l[1][j] * l[2][k], y=l[0][i] * L[1][j] * l[2][k]), (i, j, k))
    for j in r:
        for k in r:
            add(T2[1], _field(y=L[1][j] * l[2][k], z=l[1][j] * L[2][k]), (j, k))
    for i in r:
        for k in r:
            add(T2[2], _field(x=L[0][i] * l[2][k], z=l[0][i] * L[2][k]), (i, k))
    for i in r:
        for j in r:
            add(T2[3], _field(x=L[0][i] * l[1][j], y=l[0][i] * L[1][j]), (i, j))

    for axis in range(3):
        for n in r:
            comps = [None, None, None]
            comps[axis] = L[axis][n]
            out.append(BasisFunction(0, T3[axis], _field(*comps), None, (n,), axis + 1))
    return out


def build_set(p: int) -> BasisSet:
    check_order(ElementKind.HEX, p)
    elem = make_reference(ElementKind.HEX)
    funcs = build_face_rt0(elem) + build_face_higher(elem, p) + build_interior(elem, p)
    return BasisSet(ElementKind.HEX, p, tuple(number(funcs)))


def expected_counts(p: int) -> dict[str, int]:
    counts = {FACE_RT0: 6, FACE_HIGHER_IJ: 6 * p * p, FACE_HIGHER_I: 6 * p, FACE_HIGHER_J: 6 * p}
    counts.update(dict(zip(T1, (p**3, p**3, p * p, p * p, p * p))))
    counts.update(dict(zip(T2, (p**3, p * p, p * p, p * p))))
    counts.update(dict.fromkeys(T3, p))
    return counts
