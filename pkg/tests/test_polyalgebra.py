from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hdivbasis.kinds import ElementKind
from hdivbasis.polyalgebra import (
    MPoly,
    VectorField,
    coefficient_rank,
    curl2d,
    curl3d,
    divergence,
    divergence_field,
    gradient,
    integrate_reference,
    monomial_integral,
    restrict_to_facet,
    squarefree_split,
)
from hdivbasis.refgeom import make_reference

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def polys(draw, dim=2, max_terms=4, max_exp=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        mono = tuple(draw(st.integers(0, max_exp)) for _ in range(dim))
        terms[mono] = draw(coeffs)
    return MPoly(dim, terms)


points = st.tuples(coeffs, coeffs)


@given(polys(), polys(), polys())
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert a - a == MPoly.zero(2)


@given(polys(), polys(), points)
def test_evaluation_is_a_homomorphism(a, b, pt):
    assert (a * b)(*pt) == a(*pt) * b(*pt)
    assert (a + b)(*pt) == a(*pt) + b(*pt)


@given(polys(), polys(), st.integers(0, 1))
def test_product_rule(a, b, k):
    assert (a * b).diff(k) == a.diff(k) * b + a * b.diff(k)


@given(polys(), points, points)
def test_shift_matches_evaluation(a, offset, pt):
    shifted = a.shift(offset)
    assert shifted(*pt) == a(pt[0] + offset[0], pt[1] + offset[1])


@given(polys(), st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=1, max_size=5))
def test_float_evaluation_agrees_with_exact(a, pts):
    arr = np.array(pts)
    exact = [float(a(Fraction(x), Fraction(y))) for x, y in pts]
    np.testing.assert_allclose(a.evaluate(arr), exact, rtol=1e-12, atol=1e-12)


def test_constructors_and_queries():
    x, y = MPoly.variables(2)
    p = 3 * x**2 * y - y + 2
    assert p.degree == 3
    assert p.constant_term() == 2
    assert not p.is_homogeneous()
    assert MPoly.constant(2, 5).is_constant()
    assert MPoly.affine([1, -2], 3) == x - 2 * y + 3
    assert p.to_str() == "3*x^2*y - y + 2"


def test_dimension_mismatch_raises():
    with pytest.raises(ValueError):
        MPoly.variable(2, 0) + MPoly.variable(3, 0)
    with pytest.raises(ValueError):
        MPoly(2, {(1,): 1})


def test_substitute_composes():
    x, y = MPoly.variables(2)
    p = x * y + x
    assert p.substitute([y, x]) == x * y + y
    (t,) = MPoly.variables(1)
    assert p.substitute([t, 1 - t]) == -(t**2) + 2 * t


@pytest.mark.parametrize(
    "value, expected",
    [(Fraction(8), (2, 2)), (Fraction(12), (2, 3)), (Fraction(1, 2), (Fraction(1, 2), 2)), (Fraction(9, 4), (Fraction(3, 2), 1))],
)
def test_squarefree_split(value, expected):
    r, d = squarefree_split(value)
    assert (r, d) == expected
    assert r * r * d == value


def test_field_scale_folds_rational_part():
    x, y = MPoly.variables(2)
    f = VectorField((x, y), 12)  # sqrt(12) = 2 sqrt(3)
    assert f.scale_sq == 3
    assert f.components == (2 * x, 2 * y)


def test_distinct_radicands_are_independent():
    x, y = MPoly.variables(2)
    a = VectorField((x, y), 2)
    b = VectorField((x, y), 3)
    total = a + b
    assert not total.is_single
    assert not total.is_zero()
    assert (total - b - a).is_zero()
    # sqrt(8) = 2 sqrt(2): the same square-root class collapses
    assert (VectorField((x, y), 8) - a.times(2)).is_zero()


def test_div_curl_vanishes():
    s, t = MPoly.variables(2)
    assert divergence_field(curl2d(s**2 * t + 2 * t**3)).is_zero()
    x, y, z = MPoly.variables(3)
    u = x**2 * y + z**3 * x
    w = VectorField((x * y * z, y**2, x**3 * z), 5)
    assert divergence_field(curl3d(w)).is_zero()
    assert curl3d(gradient(u)).is_zero()


def test_divergence_of_gradient_is_laplacian():
    x, y = MPoly.variables(2)
    u = x**3 + x * y**2
    assert divergence(gradient(u)) == 6 * x + 2 * x


def test_divergence_rejects_mixed_fields():
    x, y = MPoly.variables(2)
    mixed = VectorField((x, y), 2) + VectorField((y, x), 3)
    with pytest.raises(ValueError):
        divergence(mixed)
    assert divergence_field(mixed).is_zero() is False


def test_dot_and_cross():
    x, y, z = MPoly.variables(3)
    f = VectorField((x, y, z))
    assert f.dot((1, 0, 0)).parts[0][1][0] == x
    # e_z x (x, y, z) = (-y, x, 0)
    assert f.cross((0, 0, 1)) == VectorField((-y, x, MPoly.zero(3)))


@pytest.mark.parametrize(
    "kind, exps, expected",
    [
        ("quad", (3, 3), Fraction(1, 16)),
        ("hex", (1, 2, 0), Fraction(1, 6)),
        ("tri", (1, 1), Fraction(1, 24)),
        ("tet", (1, 1, 1), Fraction(1, 720)),
        ("tet", (0, 0, 0), Fraction(1, 6)),
    ],
)
def test_monomial_integral(kind, exps, expected):
    assert monomial_integral(exps, ElementKind.parse(kind)) == expected


def test_barycentric_product_integral():
    lam = make_reference("tri").lam
    assert integrate_reference(lam[0] * lam[1] * lam[2], "tri") == Fraction(1, 120)


def test_restriction_to_edge():
    elem = make_reference("tri")
    facet = elem.edge_facet(3)  # from (1, 0) to (0, 1)
    assert restrict_to_facet(elem.lam[0], facet).is_zero()
    f = VectorField(elem.coords())
    (t,) = MPoly.variables(1)
    assert restrict_to_facet(f, facet) == VectorField((1 - t, t))


def test_jacobian_and_evaluation():
    x, y = MPoly.variables(2)
    f = VectorField((x**2 * y, y), 4)
    jac = f.evaluate_jacobian(np.array([[1.0, 2.0]]))
    np.testing.assert_allclose(jac[0], 2 * np.array([[4.0, 1.0], [0.0, 1.0]]))
    np.testing.assert_allclose(f.evaluate(np.array([[1.0, 2.0]])), [[4.0, 4.0]])


def test_coefficient_rank():
    x, y = MPoly.variables(2)
    fields = [VectorField((x, y)), VectorField((x, y), 2), VectorField((y, x))]
    assert coefficient_rank(fields) == 2
    mixed = VectorField((x, y), 2) + VectorField((y, x))
    assert coefficient_rank([mixed, VectorField((x, y)), VectorField((y, x))]) == 2
    assert coefficient_rank([mixed, VectorField((x, y))]) == 2
