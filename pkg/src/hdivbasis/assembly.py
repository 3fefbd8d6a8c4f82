"""Quadrature, mass and stiffness matrices, and their spectra.

Two independent assembly paths are provided.  The exact path integrates
every product of monomials in rational arithmetic and only rounds the final
entries; the quadrature path evaluates the fields in floating point on a
Gauss-Legendre rule (collapsed onto the simplex for triangles and tetrahedra).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .basis import BasisSet
from .kinds import ElementKind
from .polyalgebra import MPoly, VectorField

EXACT = "exact"
QUADRATURE = "quadrature"
ZERO_THRESHOLD = 1e-10


# quadrature -------------------------------------------------------------------


LD = np.longdouble


@dataclass(frozen=True)
class QuadratureRule:
    """Points and positive weights on a reference element.

    ``points``/``weights`` are double precision; ``points_ext``/``weights_ext``
    hold the same rule in extended precision (``numpy.longdouble``).
    """

    kind: ElementKind
    degree: int
    points: np.ndarray
    weights: np.ndarray
    points_ext: np.ndarray
    weights_ext: np.ndarray

    def integrate(self, values: np.ndarray) -> float:
        return float(self.weights @ values)


def _gauss01(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule on [0, 1], nodes polished by Newton steps in extended precision."""
    x0, _ = np.polynomial.legendre.leggauss(n)
    x = x0.astype(LD)
    for _ in range(3):
        p_prev, p = np.ones_like(x), x.copy()
        for k in range(2, n + 1):
            p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
        dp = n * (x * p - p_prev) / (x * x - 1) if n > 1 else np.ones_like(x)
        if n == 1:
            p = x
        x = x - p / dp
    p_prev, p = np.ones_like(x), x.copy()
    for k in range(2, n + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    dp = n * (x * p - p_prev) / (x * x - 1) if n > 1 else np.ones_like(x)
    w = 2 / ((1 - x * x) * dp * dp)
    return (x + 1) / 2, w / 2


def collapsed_points_per_axis(degree: int, dim: int) -> int:
    return math.ceil((degree + dim + 2) / 2) + 1


@lru_cache(maxsize=None)
def _rule(kind: ElementKind, degree: int) -> QuadratureRule:
    dim = kind.dim
    if kind.is_simplex:
        n = collapsed_points_per_axis(degree, dim)
    else:
        n = max(1, math.ceil((degree + 1) / 2))
    x, w = _gauss01(n)
    u = np.stack([g.ravel() for g in np.meshgrid(*([x] * dim), indexing="ij")], axis=1)
    weights = np.prod(np.stack([g.ravel() for g in np.meshgrid(*([w] * dim), indexing="ij")], axis=1), axis=1)
    if kind is ElementKind.TRI:
        a, b = u[:, 0], u[:, 1]
        points = np.stack([a, b * (1 - a)], axis=1)
        weights = weights * (1 - a)
    elif kind is ElementKind.TET:
        a, b, c = u[:, 0], u[:, 1], u[:, 2]
        points = np.stack([a, b * (1 - a), c * (1 - a) * (1 - b)], axis=1)
        weights = weights * (1 - a) ** 2 * (1 - b)
    else:
        points = u
    arrays = [points.astype(float), weights.astype(float), points, weights]
    for arr in arrays:
        arr.setflags(write=False)
    return QuadratureRule(kind, degree, *arrays)


def quadrature(kind: ElementKind | str, degree: int) -> QuadratureRule:
    """Rule integrating every polynomial of total degree ``<= degree`` exactly.

    On the square and cube the rule is a tensor product, so it is also exact
    for every polynomial of degree ``<= degree`` in each variable separately.
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    return _rule(ElementKind.parse(kind), int(degree))


# exact Gram matrices ----------------------------------------------------------


def _lcm_den(values) -> int:
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return den


def _moment_matrix(monos: list[tuple[int, ...]], kind: ElementKind) -> tuple[np.ndarray, int]:
    """Integer matrix ``G`` and denominator ``D`` with ``G/D = [int x^(a+b)]``."""
    dim = kind.dim
    top = 2 * max(sum(m) for m in monos)
    if kind.is_simplex:
        den = math.factorial(top + dim)
        fact = [math.factorial(k) for k in range(top + 1)]

        def moment(e):
            num = den // math.factorial(sum(e) + dim)
            for k in e:
                num *= fact[k]
            return num

    else:
        one_d = math.lcm(*range(1, max(max(m) for m in monos) * 2 + 2))
        den = one_d**dim

        def moment(e):
            num = 1
            for k in e:
                num *= one_d // (k + 1)
            return num

    n = len(monos)
    g = np.empty((n, n), dtype=object)
    for i, a in enumerate(monos):
        for j in range(i, n):
            b = monos[j]
            g[i, j] = g[j, i] = moment(tuple(x + y for x, y in zip(a, b)))
    return g, den


def exact_gram(rows: Sequence[Sequence[MPoly]], kind: ElementKind) -> list[list[Fraction]]:
    """Exact ``G[a][b] = sum_k int rows[a][k] * rows[b][k]`` over the reference element."""
    kind = ElementKind.parse(kind)
    monos = sorted({m for row in rows for p in row for m in p.terms})
    n = len(rows)
    if not monos:
        return [[Fraction(0)] * n for _ in range(n)]
    index = {m: j for j, m in enumerate(monos)}
    g, den = _moment_matrix(monos, kind)
    ncomp = len(rows[0])
    row_den = [_lcm_den(c for p in row for c in p.terms.values()) for row in rows]
    total = np.zeros((n, n), dtype=object)
    total[:] = 0
    for k in range(ncomp):
        live = [r for r in range(n) if rows[r][k].terms]
        if not live:
            continue
        a = np.zeros((len(live), len(monos)), dtype=object)
        a[:] = 0
        for i, r in enumerate(live):
            for m, c in rows[r][k].terms.items():
                a[i, index[m]] = int(c * row_den[r])
        total[np.ix_(live, live)] += a.dot(g).dot(a.T)
    return [[Fraction(int(total[i, j]), row_den[i] * row_den[j] * den) for j in range(n)] for i in range(n)]


def _weighted_gram(row_sets: list[list[tuple[int, Sequence[MPoly]]]], kind: ElementKind) -> np.ndarray:
    """Fold per-part exact Gram entries into float entries ``sum sqrt(d d') R``."""
    flat, owner, radicand = [], [], []
    for a, parts in enumerate(row_sets):
        for d, comps in parts:
            flat.append(list(comps))
            owner.append(a)
            radicand.append(d)
    exact = exact_gram(flat, kind)
    n = len(row_sets)
    out = np.zeros((n, n))
    for i in range(len(flat)):
        for j in range(len(flat)):
            entry = exact[i][j]
            if entry:
                d = radicand[i] * radicand[j]
                root = math.isqrt(d)
                w = float(entry * root) if root * root == d else float(entry) * math.sqrt(d)
                out[owner[i], owner[j]] += w
    return out


def _mass_rows(fields: Sequence[VectorField]):
    return [list(f.parts) for f in fields]


def _stiffness_rows(fields: Sequence[VectorField]):
    rows = []
    for f in fields:
        rows.append([(d, [g for row in jac for g in row]) for d, jac in f.jacobian_parts()])
    return rows


# quadrature Gram matrices ------------------------------------------------------
#
# Products of expanded monomials cancel badly away from the origin, so each
# polynomial is first re-centred exactly at the element's centroid; values
# and sums are then formed in extended precision.


def _centroid(kind: ElementKind) -> tuple[Fraction, ...]:
    if kind.is_simplex:
        return (Fraction(1, kind.dim + 1),) * kind.dim
    return (Fraction(1, 2),) * kind.dim


def _to_ld(c: Fraction):
    def big(n: int):
        if abs(n) < 2**62:
            return LD(n)
        sign = -1 if n < 0 else 1
        n = abs(n)
        return sign * (big(n >> 62) * LD(2**62) + LD(n & (2**62 - 1)))

    return big(c.numerator) / big(c.denominator)


def _integrand_degree(rows, kind: ElementKind) -> int:
    polys = [p for parts in rows for _, comps in parts for p in comps]
    if kind.is_simplex:
        return 2 * max((p.degree for p in polys), default=0)
    return 2 * max((max(m) for p in polys for m in p.terms), default=0)


def _quadrature_gram(rows, kind: ElementKind) -> np.ndarray:
    """``G[a, b] = sum_k int f_a[k] f_b[k]`` for rows of ``(radicand, polys)`` parts.

    The polynomials must already be re-centred at the element's centroid.
    """
    rule = quadrature(kind, max(_integrand_degree(rows, kind), 0))
    center = _centroid(kind)
    pts = rule.points_ext - np.array([_to_ld(c) for c in center], dtype=LD)
    ncomp = len(rows[0][0][1])
    monos = sorted({m for parts in rows for _, comps in parts for p in comps for m in p.terms})
    index = {m: j for j, m in enumerate(monos)}
    top = max((max(m) for m in monos), default=0)
    powers = [np.stack([pts[:, k] ** e for e in range(top + 1)], axis=1) for k in range(kind.dim)]
    vmat = np.ones((pts.shape[0], len(monos)), dtype=LD)
    for j, m in enumerate(monos):
        for k, e in enumerate(m):
            if e:
                vmat[:, j] *= powers[k][:, e]
    n = len(rows)
    coeffs = np.zeros((len(monos), n * ncomp), dtype=LD)
    for a, parts in enumerate(rows):
        for d, comps in parts:
            root = np.sqrt(LD(d))
            for k, p in enumerate(comps):
                for m, c in p.terms.items():
                    coeffs[index[m], a * ncomp + k] += root * _to_ld(c)
    values = (vmat @ coeffs).reshape(pts.shape[0], n, ncomp)
    weighted = values * rule.weights_ext[:, None, None]
    gram = np.zeros((n, n), dtype=LD)
    for k in range(ncomp):
        gram += weighted[:, :, k].T @ values[:, :, k]
    return gram.astype(float)


def _centred(fields: Sequence[VectorField], kind: ElementKind) -> list[VectorField]:
    center = _centroid(kind)
    return [f.shift(center) for f in fields]


def _fields(basis: BasisSet | Sequence[VectorField]) -> tuple[list[VectorField], ElementKind]:
    if isinstance(basis, BasisSet):
        return basis.fields, basis.kind
    raise TypeError("expected a BasisSet")


def _check_path(path: str) -> str:
    if path not in (EXACT, QUADRATURE):
        raise ValueError(f"unknown assembly path {path!r}; expected exact or quadrature")
    return path


def mass_matrix(basis: BasisSet, path: str = EXACT) -> np.ndarray:
    """``M[a, b] = <Phi_a, Phi_b>`` on the reference element."""
    fields, kind = _fields(basis)
    if _check_path(path) == EXACT:
        m = _weighted_gram(_mass_rows(fields), kind)
    else:
        m = _quadrature_gram(_mass_rows(_centred(fields, kind)), kind)
    return (m + m.T) / 2


def stiffness_matrix(basis: BasisSet, path: str = EXACT) -> np.ndarray:
    """``S[a, b] = <grad Phi_a : grad Phi_b>``, the Frobenius contraction of the Jacobians."""
    fields, kind = _fields(basis)
    if _check_path(path) == EXACT:
        s = _weighted_gram(_stiffness_rows(fields), kind)
    else:
        s = _quadrature_gram(_stiffness_rows(_centred(fields, kind)), kind)
    return (s + s.T) / 2


def exact_mass_fractions(fields: Sequence[VectorField], kind: ElementKind | str) -> list[list[Fraction]]:
    """Exact Gram matrix of single-part fields with rational squared scales folded in.

    Each entry is ``sqrt(d_a d_b) * R_ab``; for single-part fields whose
    radicands agree the product is rational, otherwise ``ValueError``.
    """
    kind = ElementKind.parse(kind)
    flat = []
    for f in fields:
        if not f.is_single:
            raise ValueError("exact rational Gram needs single-part fields")
        flat.append(f.parts[0])
    exact = exact_gram([list(c) for _, c in flat], kind)
    out = []
    for i, (di, _) in enumerate(flat):
        row = []
        for j, (dj, _) in enumerate(flat):
            root = math.isqrt(di * dj)
            if root * root != di * dj:
                if exact[i][j]:
                    raise ValueError("entry is irrational")
                row.append(Fraction(0))
            else:
                row.append(exact[i][j] * root)
        out.append(row)
    return out


# eigenvalues -------------------------------------------------------------------


class ConvergenceError(RuntimeError):
    pass


def eigenvalues(a: np.ndarray, tol: float = 1e-13, max_sweeps: int = 100) -> np.ndarray:
    """All eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending."""
    a = np.array(a, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(1.0, np.abs(a).max(initial=0))):
        raise ValueError("matrix is not symmetric")
    a = (a + a.T) / 2
    n = a.shape[0]
    norm = np.linalg.norm(a)
    if n < 2 or norm == 0:
        return np.sort(np.diag(a))

    mask = ~np.eye(n, dtype=bool)

    def off(m):
        return float(np.linalg.norm(m[mask]))

    # rotating away entries this small cannot move the stopping test
    negligible = 1e-18 * norm
    for _ in range(max_sweeps):
        if off(a) <= tol * norm:
            return np.sort(np.diag(a))
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= negligible:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < 1e-150 * abs(diff):
                    t = apq / diff
                else:
                    theta = diff / (2 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1))
                c = 1 / math.sqrt(t * t + 1)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
    if off(a) <= tol * norm:
        return np.sort(np.diag(a))
    raise ConvergenceError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


@dataclass(frozen=True)
class CondReport:
    kind: str
    order: int
    variant: str | None
    matrix: str
    lambda_max: float
    lambda_min: float
    kappa: float
    excluded: int

    def to_dict(self) -> dict:
        return asdict(self)


def condition_number(
    a: np.ndarray,
    exclude_zeros: bool = False,
    threshold: float = ZERO_THRESHOLD,
    *,
    kind: str = "",
    order: int = 0,
    variant: str | None = None,
    matrix: str = "",
    spectrum: np.ndarray | None = None,
) -> CondReport:
    """``kappa = lambda_max / lambda_min``, optionally ignoring eigenvalues ``<= threshold * lambda_max``."""
    lam = eigenvalues(a) if spectrum is None else np.sort(np.asarray(spectrum, dtype=float))
    top = float(lam[-1])
    if top <= 0:
        raise ValueError("largest eigenvalue must be positive")
    excluded = 0
    if exclude_zeros:
        keep = lam[lam > threshold * top]
        excluded = int(lam.size - keep.size)
        lam = keep
    if lam.size == 0:
        raise ValueError("all eigenvalues were excluded")
    low = float(lam[0])
    if low <= 0:
        raise ValueError("matrix is not positive definite")
    return CondReport(kind, order, variant, matrix, top, low, top / low, excluded)


def mass_condition(basis: BasisSet, path: str = EXACT) -> CondReport:
    return condition_number(
        mass_matrix(basis, path), kind=basis.kind.value, order=basis.order, variant=basis.variant, matrix="mass"
    )


def stiffness_condition(basis: BasisSet, path: str = EXACT, threshold: float = ZERO_THRESHOLD) -> CondReport:
    return condition_number(
        stiffness_matrix(basis, path),
        exclude_zeros=True,
        threshold=threshold,
        kind=basis.kind.value,
        order=basis.order,
        variant=basis.variant,
        matrix="stiffness",
    )


# serialization -----------------------------------------------------------------


def format_float(x: float) -> str:
    return f"{x:.17g}"


def matrix_to_csv(a: np.ndarray) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in np.asarray(a, dtype=float):
        writer.writerow([format_float(v) for v in row])
    return buf.getvalue()


def matrix_from_csv(text: str) -> np.ndarray:
    return np.array([[float(v) for v in row] for row in csv.reader(io.StringIO(text)) if row])


def matrix_to_json(a: np.ndarray) -> str:
    rows = ",".join("[" + ",".join(format_float(v) for v in row) + "]" for row in np.asarray(a, dtype=float))
    return "[" + rows + "]"


def matrix_from_json(text: str) -> np.ndarray:
    return np.array(json.loads(text), dtype=float)
