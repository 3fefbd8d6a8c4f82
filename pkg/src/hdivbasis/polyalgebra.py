"""Exact sparse multivariate polynomials over the rationals.

Every scalar field in the package is an :class:`MPoly`: a mapping from
exponent tuples to :class:`fractions.Fraction` coefficients.  Vector fields
carry their normalization constants as exact square roots, so that those
constants never leak rounding into structural checks such as divergence,
traces and rank.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .kinds import ElementKind

Exponents = tuple[int, ...]
Scalar = Union[int, Fraction]


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"exact coefficient required, got {type(c).__name__}")


class MPoly:
    """Sparse polynomial in ``dim`` variables with rational coefficients.

    Instances are treated as immutable; all operations return new objects.
    """

    __slots__ = ("dim", "terms", "_hash")

    def __init__(self, dim: int, terms: Mapping[Exponents, Scalar] | None = None):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.dim = dim
        clean: dict[Exponents, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                if len(mono) != dim:
                    raise ValueError(f"monomial {mono} does not have length {dim}")
                c = _as_fraction(c)
                if c:
                    clean[tuple(mono)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, dim: int, terms: dict[Exponents, Fraction]) -> "MPoly":
        obj = cls.__new__(cls)
        obj.dim = dim
        obj.terms = terms
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def zero(cls, dim: int) -> "MPoly":
        return cls._raw(dim, {})

    @classmethod
    def constant(cls, dim: int, c: Scalar) -> "MPoly":
        c = _as_fraction(c)
        return cls._raw(dim, {(0,) * dim: c} if c else {})

    @classmethod
    def variable(cls, dim: int, index: int) -> "MPoly":
        if not 0 <= index < dim:
            raise ValueError(f"variable index {index} out of range for dimension {dim}")
        mono = tuple(1 if k == index else 0 for k in range(dim))
        return cls._raw(dim, {mono: Fraction(1)})

    @classmethod
    def variables(cls, dim: int) -> tuple["MPoly", ...]:
        return tuple(cls.variable(dim, k) for k in range(dim))

    @classmethod
    def affine(cls, coeffs: Sequence[Scalar], const: Scalar = 0) -> "MPoly":
        """``const + sum(coeffs[k] * x_k)``."""
        dim = len(coeffs)
        terms: dict[Exponents, Scalar] = {(0,) * dim: const}
        for k, c in enumerate(coeffs):
            terms[tuple(1 if j == k else 0 for j in range(dim))] = c
        return cls(dim, terms)

    # inspection
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.dim, Fraction(0))

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    # arithmetic
    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.dim != self.dim:
                raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.constant(self.dim, other)
        return NotImplemented

    def __add__(self, other) -> "MPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return MPoly._raw(self.dim, out)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly._raw(self.dim, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "MPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "MPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c: Scalar) -> "MPoly":
        c = _as_fraction(c)
        if not c:
            return MPoly.zero(self.dim)
        return MPoly._raw(self.dim, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other) -> "MPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponents, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return MPoly._raw(self.dim, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "MPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / _as_fraction(other))
        return NotImplemented

    def __pow__(self, n: int) -> "MPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = MPoly.constant(self.dim, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MPoly.constant(self.dim, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dim, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"MPoly({self.dim}, {self.to_str()})"

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or (["x", "y", "z"][: self.dim] if self.dim <= 3 else [f"x{k}" for k in range(self.dim)])
        parts = []
        for m in sorted(self.terms, key=lambda m: (-sum(m), tuple(-e for e in m))):
            c = self.terms[m]
            factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e]
            mono = "*".join(factors)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # evaluation
    def __call__(self, *point):
        if len(point) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(point)}")
        total = 0
        for m, c in self.terms.items():
            term = c
            for x, e in zip(point, m):
                if e:
                    term = term * x**e
            total = total + term
        return total

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Float evaluation at an ``(N, dim)`` array of points."""
        points = np.asarray(points, dtype=float)
        if not self.terms:
            return np.zeros(points.shape[0])
        exps = np.array(list(self.terms.keys()), dtype=int)
        coeffs = np.array([float(c) for c in self.terms.values()])
        vals = np.ones((points.shape[0], exps.shape[0]))
        for k in range(self.dim):
            vals *= points[:, k : k + 1] ** exps[:, k]
        return vals @ coeffs

    # calculus
    def diff(self, index: int) -> "MPoly":
        if not 0 <= index < self.dim:
            raise ValueError(f"variable index {index} out of range for dimension {self.dim}")
        out: dict[Exponents, Fraction] = {}
        for m, c in self.terms.items():
            e = m[index]
            if e:
                out[m[:index] + (e - 1,) + m[index + 1 :]] = c * e
        return MPoly._raw(self.dim, out)

    def shift(self, offsets: Sequence[Scalar]) -> "MPoly":
        """Exact Taylor shift: the polynomial ``u -> self(u + offsets)``."""
        if len(offsets) != self.dim:
            raise ValueError("one offset per variable required")
        if not self.terms:
            return self
        # integer arithmetic on a common denominator, one variable at a time
        den = 1
        for c in self.terms.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = {m: int(c * den) for m, c in self.terms.items()}
        for k, h in enumerate(offsets):
            h = _as_fraction(h)
            if not h:
                continue
            a, b = h.numerator, h.denominator
            top = max(m[k] for m in ints)
            out: dict[Exponents, int] = {}
            for m, c in ints.items():
                e = m[k]
                for j in range(e + 1):
                    key = m[:k] + (j,) + m[k + 1 :]
                    out[key] = out.get(key, 0) + c * math.comb(e, j) * a ** (e - j) * b ** (top - e + j)
            ints = {m: c for m, c in out.items() if c}
            den *= b**top
        return MPoly._raw(self.dim, {m: Fraction(c, den) for m, c in ints.items()})

    def substitute(self, forms: Sequence["MPoly"]) -> "MPoly":
        """Compose: replace variable ``k`` by ``forms[k]`` (all forms share one dimension)."""
        if len(forms) != self.dim:
            raise ValueError(f"need {self.dim} substitution polynomials, got {len(forms)}")
        target = forms[0].dim
        if any(f.dim != target for f in forms):
            raise ValueError("substitution polynomials must share a dimension")
        powers: list[dict[int, MPoly]] = [{0: MPoly.constant(target, 1)} for _ in forms]

        def power(k: int, e: int) -> MPoly:
            cache = powers[k]
            if e not in cache:
                cache[e] = power(k, e - 1) * forms[k]
            return cache[e]

        result = MPoly.zero(target)
        for m, c in self.terms.items():
            term = MPoly.constant(target, c)
            for k, e in enumerate(m):
                if e:
                    term = term * power(k, e)
            result = result + term
        return result

    def monomials(self) -> list[Exponents]:
        return sorted(self.terms)


@lru_cache(maxsize=None)
def squarefree_split(value: Fraction) -> tuple[Fraction, int]:
    """Write a positive rational ``q`` as ``r**2 * d`` with ``r`` rational and ``d`` squarefree.

    ``sqrt(q) == r * sqrt(d)``.
    """
    value = Fraction(value)
    if value <= 0:
        raise ValueError("expected a positive rational")
    k = value.numerator * value.denominator
    square, d = 1, 1
    f = 2
    while f * f <= k:
        while k % (f * f) == 0:
            k //= f * f
            square *= f
        if k % f == 0:
            k //= f
            d *= f
        f += 1
    d *= k
    return Fraction(square, value.denominator), d


Part = tuple[int, tuple[MPoly, ...]]


class VectorField:
    """A polynomial vector field with coefficients in a field of square roots.

    The represented field is ``sum(sqrt(d) * P_d)`` over the stored parts,
    where each radicand ``d`` is a squarefree positive integer and ``P_d`` a
    tuple of rational polynomials.  Because square roots of distinct
    squarefree integers are linearly independent over the rationals, the
    field is zero exactly when every part is zero; all structural checks use
    this.  The common case is a single part: ``VectorField(components,
    scale_sq)`` stands for ``sqrt(scale_sq) * components``.

    A scalar field with irrational coefficients is a one-component field.
    """

    __slots__ = ("parts", "ncomp", "dim")

    def __init__(self, components: Sequence[MPoly], scale_sq: Scalar = 1):
        comps = tuple(components)
        if not comps:
            raise ValueError("vector field needs at least one component")
        dim = comps[0].dim
        if any(c.dim != dim for c in comps):
            raise ValueError("components must share a dimension")
        sq = _as_fraction(scale_sq)
        if sq <= 0:
            raise ValueError("scale must be positive")
        r, d = squarefree_split(sq)
        self.dim = dim
        self.ncomp = len(comps)
        self.parts = ((d, tuple(c.scale(r) for c in comps)),)

    @classmethod
    def from_parts(cls, parts: Mapping[int, Sequence[MPoly]] | Iterable[Part], dim: int, ncomp: int) -> "VectorField":
        items = parts.items() if isinstance(parts, Mapping) else parts
        merged: dict[int, list[MPoly]] = {}
        for d, comps in items:
            if len(comps) != ncomp:
                raise ValueError("component count mismatch")
            acc = merged.setdefault(d, [MPoly.zero(dim)] * ncomp)
            merged[d] = [a + c for a, c in zip(acc, comps)]
        obj = cls.__new__(cls)
        obj.dim = dim
        obj.ncomp = ncomp
        kept = tuple((d, tuple(merged[d])) for d in sorted(merged) if any(not c.is_zero() for c in merged[d]))
        obj.parts = kept or ((1, tuple(MPoly.zero(dim) for _ in range(ncomp))),)
        return obj

    def map_parts(self, fn, ncomp: int | None = None) -> "VectorField":
        """Apply a rational-linear map ``components -> components`` to every part."""
        out = [(d, tuple(fn(comps))) for d, comps in self.parts]
        dim = out[0][1][0].dim
        return VectorField.from_parts(out, dim, ncomp if ncomp is not None else len(out[0][1]))

    # single-part access
    def _single(self) -> Part:
        if len(self.parts) != 1:
            raise ValueError("field mixes several square-root classes; use .parts")
        return self.parts[0]

    @property
    def components(self) -> tuple[MPoly, ...]:
        """Rational components of a single-part field; the field is ``scale * components``."""
        return self._single()[1]

    @property
    def scale_sq(self) -> int:
        return self._single()[0]

    @property
    def scale(self) -> float:
        return math.sqrt(self._single()[0])

    @property
    def is_single(self) -> bool:
        return len(self.parts) == 1

    def __len__(self) -> int:
        return self.ncomp

    def __repr__(self) -> str:
        inner = " + ".join(
            f"sqrt({d})*(" + ", ".join(c.to_str() for c in comps) + ")" for d, comps in self.parts
        )
        return f"VectorField({inner})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.dim == other.dim and self.ncomp == other.ncomp and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def is_zero(self) -> bool:
        return all(c.is_zero() for _, comps in self.parts for c in comps)

    @property
    def degree(self) -> int:
        return max(c.degree for _, comps in self.parts for c in comps)

    # algebra
    def __add__(self, other: "VectorField") -> "VectorField":
        if (self.dim, self.ncomp) != (other.dim, other.ncomp):
            raise ValueError("shape mismatch")
        return VectorField.from_parts(self.parts + other.parts, self.dim, self.ncomp)

    def __neg__(self) -> "VectorField":
        return self.times(-1)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + (-other)

    def times(self, factor) -> "VectorField":
        """Multiply by a rational scalar or a rational polynomial."""
        return self.map_parts(lambda comps: [c * factor for c in comps])

    def scaled_sqrt(self, scale_sq: Scalar) -> "VectorField":
        """Multiply by ``sqrt(scale_sq)``."""
        r, d = squarefree_split(_as_fraction(scale_sq))
        out = []
        for e, comps in self.parts:
            r2, de = squarefree_split(Fraction(d * e))
            out.append((de, tuple(c.scale(r * r2) for c in comps)))
        return VectorField.from_parts(out, self.dim, self.ncomp)

    def component(self, k: int) -> "VectorField":
        return self.map_parts(lambda comps: [comps[k]], ncomp=1)

    def dot(self, vector: Sequence[Scalar]) -> "VectorField":
        """``field . vector`` for a constant rational vector, as a one-component field."""
        vec = [_as_fraction(v) for v in vector]
        if len(vec) != self.ncomp:
            raise ValueError("vector length does not match component count")

        def fn(comps):
            out = MPoly.zero(self.dim)
            for c, v in zip(comps, vec):
                if v:
                    out = out + c.scale(v)
            return [out]

        return self.map_parts(fn, ncomp=1)

    def cross(self, vector: Sequence[Scalar]) -> "VectorField":
        """``vector x field`` for a constant rational 3-vector."""
        if self.ncomp != 3:
            raise ValueError("cross product needs three components")
        a = [_as_fraction(v) for v in vector]

        def fn(comps):
            u, v, w = comps
            return [w.scale(a[1]) - v.scale(a[2]), u.scale(a[2]) - w.scale(a[0]), v.scale(a[0]) - u.scale(a[1])]

        return self.map_parts(fn)

    def shift(self, offsets: Sequence[Scalar]) -> "VectorField":
        """The field ``u -> self(u + offsets)``, exactly."""
        return self.map_parts(lambda comps: [c.shift(offsets) for c in comps])

    def restrict(self, parametrization: Sequence[MPoly]) -> "VectorField":
        return self.map_parts(lambda comps: [c.substitute(parametrization) for c in comps])

    def jacobian_parts(self) -> tuple[tuple[int, tuple[tuple[MPoly, ...], ...]], ...]:
        """Per part, ``J[k][j] = d(component k)/d(x_j)`` of the rational polynomials."""
        return tuple((d, tuple(tuple(c.diff(j) for j in range(self.dim)) for c in comps)) for d, comps in self.parts)

    def jacobian(self) -> tuple[tuple[MPoly, ...], ...]:
        """Jacobian of a single-part field's rational components."""
        comps = self.components
        return tuple(tuple(c.diff(j) for j in range(self.dim)) for c in comps)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Float values, shape ``(N, ncomp)``."""
        points = np.asarray(points, dtype=float)
        out = np.zeros((points.shape[0], self.ncomp))
        for d, comps in self.parts:
            out += math.sqrt(d) * np.stack([c.evaluate(points) for c in comps], axis=1)
        return out

    def evaluate_jacobian(self, points: np.ndarray) -> np.ndarray:
        """Float Jacobians, shape ``(N, ncomp, dim)``."""
        points = np.asarray(points, dtype=float)
        out = np.zeros((points.shape[0], self.ncomp, self.dim))
        for d, jac in self.jacobian_parts():
            for k, row in enumerate(jac):
                for j, g in enumerate(row):
                    out[:, k, j] += math.sqrt(d) * g.evaluate(points)
        return out


# free-function surface -------------------------------------------------------


def arith(a: MPoly, b: MPoly, op: str) -> MPoly:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def partial_derivative(a: MPoly, var_index: int) -> MPoly:
    return a.diff(var_index)


def gradient(a: MPoly) -> VectorField:
    return VectorField(tuple(a.diff(k) for k in range(a.dim)))


def divergence_field(v: VectorField) -> VectorField:
    """Exact divergence of any field, as a one-component field."""
    if v.ncomp != v.dim:
        raise ValueError("divergence needs as many components as variables")

    def fn(comps):
        out = MPoly.zero(v.dim)
        for k, c in enumerate(comps):
            out = out + c.diff(k)
        return [out]

    return v.map_parts(fn, ncomp=1)


def divergence(v: VectorField) -> MPoly:
    """Divergence of a single-part field's rational components.

    The divergence of the field itself is ``v.scale * divergence(v)``; for
    fields mixing several square-root classes use :func:`divergence_field`.
    """
    if not v.is_single:
        raise ValueError("field mixes several square-root classes; use divergence_field")
    return divergence_field(v).parts[0][1][0]


def curl2d(u: MPoly) -> VectorField:
    """``(du/deta, -du/dxi)``."""
    if u.dim != 2:
        raise ValueError("curl2d needs a polynomial in two variables")
    return VectorField((u.diff(1), -u.diff(0)))


def curl3d(w: VectorField) -> VectorField:
    if w.dim != 3 or w.ncomp != 3:
        raise ValueError("curl3d needs a 3-component field in three variables")

    def fn(comps):
        u, v, t = comps
        return [t.diff(1) - v.diff(2), u.diff(2) - t.diff(0), v.diff(0) - u.diff(1)]

    return w.map_parts(fn)


def substitute_affine(a: MPoly, forms: Sequence[MPoly]) -> MPoly:
    return a.substitute(forms)


def restrict_to_facet(a: "MPoly | VectorField", facet) -> "MPoly | VectorField":
    """Pull ``a`` back to the facet's own coordinates.

    ``facet`` is anything with ``ambient_dim`` and ``parametrization`` (one
    affine polynomial in facet coordinates per ambient variable), such as
    :class:`hdivbasis.refgeom.Facet`.
    """
    if a.dim != facet.ambient_dim:
        raise ValueError(f"facet lives in dimension {facet.ambient_dim}, polynomial in {a.dim}")
    if isinstance(a, VectorField):
        return a.restrict(facet.parametrization)
    return a.substitute(facet.parametrization)


@lru_cache(maxsize=None)
def monomial_integral(exponents: Exponents, kind: ElementKind) -> Fraction:
    """Exact integral of ``x^exponents`` over the reference domain of ``kind``."""
    if len(exponents) != kind.dim:
        raise ValueError("monomial dimension does not match element")
    if kind.is_simplex:
        num = 1
        for e in exponents:
            num *= math.factorial(e)
        return Fraction(num, math.factorial(sum(exponents) + kind.dim))
    out = Fraction(1)
    for e in exponents:
        out /= e + 1
    return out


def integrate_reference(a: MPoly, kind: ElementKind) -> Fraction:
    kind = ElementKind.parse(kind)
    if a.dim != kind.dim:
        raise ValueError(f"polynomial in {a.dim} variables cannot be integrated over {kind.value}")
    return sum((c * monomial_integral(m, kind) for m, c in a.terms.items()), Fraction(0))


def coefficient_rows(fields: Sequence[VectorField]) -> tuple[list[list], int]:
    """Stacked (component, monomial) coefficients of each field.

    Each row is divided by the square root of its first radicand, after which
    every entry lies in ``Q(sqrt(m))`` for one squarefree ``m``.  Returns rows
    of ``(rational, rational)`` pairs meaning ``a + b*sqrt(m)``, and ``m``.
    Rows spanning more than two square-root classes, or different ``m``
    across rows, are not supported.
    """
    keys = set()
    for f in fields:
        for _, comps in f.parts:
            for k, comp in enumerate(comps):
                keys.update((k, mono) for mono in comp.terms)
    index = {key: j for j, key in enumerate(sorted(keys))}
    radicand = 1
    rows = []
    for f in fields:
        row = [[Fraction(0), Fraction(0)] for _ in index]
        d0 = f.parts[0][0]
        for d, comps in f.parts:
            r, m = squarefree_split(Fraction(d * d0))
            slot = 0
            if m != 1:
                if radicand not in (1, m):
                    raise NotImplementedError("fields span more than one quadratic extension")
                radicand, slot = m, 1
            factor = r / d0
            for k, comp in enumerate(comps):
                for mono, c in comp.terms.items():
                    row[index[(k, mono)]][slot] += c * factor
        rows.append([tuple(e) for e in row])
    return rows, radicand


def coefficient_rank(fields: Sequence[VectorField]) -> int:
    """Exact rank, over the reals, of a family of vector fields.

    Single-part fields reduce to rational rows (positive scales do not change
    the rank); mixed fields are eliminated exactly in ``Q(sqrt(m))``.
    """
    from .exact_linalg import rank, rank_quadratic

    fields = list(fields)
    if not fields:
        return 0
    if len({(f.dim, f.ncomp) for f in fields}) != 1:
        raise ValueError("fields must share dimension and component count")
    rows, m = coefficient_rows(fields)
    if m == 1:
        return rank([[a for a, _ in row] for row in rows])
    return rank_quadratic(rows, m)
