from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hdivbasis import assembly, basis_tet
from hdivbasis.assembly import (
    ConvergenceError,
    condition_number,
    eigenvalues,
    exact_mass_fractions,
    matrix_from_csv,
    matrix_from_json,
    matrix_to_csv,
    matrix_to_json,
    quadrature,
)
from hdivbasis.basis import BasisFunction, BasisSet
from hdivbasis.kinds import ElementKind
from hdivbasis.polyalgebra import MPoly, VectorField, monomial_integral

from helpers import basis, mass, stiffness


def test_quad_rule_degree_three():
    rule = quadrature("quad", 3)
    assert len(rule.weights) == 4
    x, y = rule.points.T
    assert rule.integrate(x**3 * y**3) == pytest.approx(1 / 16, abs=1e-15)


def test_tri_rule_barycentric_product():
    rule = quadrature("tri", 3)
    x, y = rule.points.T
    assert abs(rule.integrate((1 - x - y) * x * y) - 1 / 120) <= 1e-15


@pytest.mark.parametrize("kind, measure", [("quad", 1), ("hex", 1), ("tri", 1 / 2), ("tet", 1 / 6)])
def test_weights_sum_to_measure(kind, measure):
    rule = quadrature(kind, 4)
    assert np.all(rule.weights > 0)
    assert rule.weights.sum() == pytest.approx(measure, rel=1e-15)


@st.composite
def monomial_cases(draw):
    kind = draw(st.sampled_from(list(ElementKind)))
    degree = draw(st.integers(0, 12))
    exps = [0] * kind.dim
    for _ in range(degree):
        exps[draw(st.integers(0, kind.dim - 1))] += 1
    return kind, degree, tuple(exps)


@given(monomial_cases())
def test_rules_are_exact_to_their_degree(case):
    kind, degree, exps = case
    rule = quadrature(kind, degree)
    values = np.prod(rule.points ** np.array(exps), axis=1)
    exact = float(monomial_integral(exps, kind))
    assert abs(rule.integrate(values) - exact) <= 1e-13 * max(exact, 1e-300) + 1e-16


def test_tri_mass_p1_positive_definite():
    m = mass("tri", 1)
    assert m.shape == (6, 6)
    assert np.array_equal(m, m.T)
    assert eigenvalues(m)[0] > 0


def test_stiffness_of_constant_field_vanishes():
    x, y = MPoly.variables(2)
    one = MPoly.constant(2, 1)
    funcs = (
        BasisFunction(0, "const", VectorField((one, one * 2))),
        BasisFunction(1, "linear", VectorField((x, y))),
    )
    s = assembly.stiffness_matrix(BasisSet(ElementKind.TRI, 1, funcs))
    assert np.all(s[0] == 0) and np.all(s[:, 0] == 0)
    assert s[1, 1] == pytest.approx(1.0)  # |I|_F^2 times the area


def test_exact_mass_fractions():
    x, y = MPoly.variables(2)
    gram = exact_mass_fractions([VectorField((x, y)), VectorField((y, x), 4)], "quad")
    assert gram == [[Fraction(2, 3), Fraction(1)], [Fraction(1), Fraction(8, 3)]]


@pytest.mark.parametrize("kind, p, variant", [("tri", 3, None), ("quad", 2, None), ("hex", 1, None), ("tet", 2, "second")])
def test_paths_agree(kind, p, variant):
    for build in (mass, stiffness):
        exact = build(kind, p, variant)
        quad = build(kind, p, variant, assembly.QUADRATURE)
        assert np.abs(exact - quad).max() <= 1e-12


def test_unknown_path():
    with pytest.raises(ValueError):
        assembly.mass_matrix(basis("tri", 1), "midpoint")


def test_eigenvalues_identity():
    assert eigenvalues(np.eye(5)).tolist() == [1.0] * 5


def test_eigenvalues_known_spectrum():
    rng = np.random.default_rng(3)
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    a = q @ np.diag([1.0, 2.0, 3.0]) @ q.T
    np.testing.assert_allclose(eigenvalues((a + a.T) / 2), [1, 2, 3], atol=1e-12)


@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_eigenvalues_match_lapack(n, seed):
    a = np.random.default_rng(seed).standard_normal((n, n))
    a = a + a.T
    np.testing.assert_allclose(eigenvalues(a), np.linalg.eigvalsh(a), atol=1e-12 * max(1, np.abs(a).max()) * n)


def test_eigenvalues_non_convergence():
    a = np.random.default_rng(0).standard_normal((8, 8))
    with pytest.raises(ConvergenceError):
        eigenvalues(a + a.T, max_sweeps=1)


def test_condition_number_identity():
    rep = condition_number(np.eye(4))
    assert rep.kappa == 1 and rep.excluded == 0


def test_condition_number_excludes_kernel():
    rep = condition_number(np.diag([0.0, 1e-14, 2.0, 8.0]), exclude_zeros=True)
    assert rep.excluded == 2
    assert rep.kappa == 4


def test_condition_number_rejects_zero_matrix():
    with pytest.raises(ValueError):
        condition_number(np.zeros((2, 2)), exclude_zeros=True)


def test_tri_p1_conditioning():
    assert assembly.mass_condition(basis("tri", 1)).kappa == pytest.approx(2.016e1, rel=0.005)
    rep = assembly.stiffness_condition(basis("tri", 1))
    assert rep.kappa == pytest.approx(1.040e1, rel=0.005)
    assert rep.excluded == 2  # the constant fields


def test_tet_p2_conditioning():
    first = assembly.condition_number(mass("tet", 2, "first"))
    second = assembly.condition_number(mass("tet", 2, "second"))
    assert first.kappa == pytest.approx(6.987e3, rel=0.02)
    assert second.kappa == pytest.approx(7.733e4, rel=0.02)
    assert first.kappa / second.kappa == pytest.approx(0.090, rel=0.03)


def test_ac_gram_is_singular():
    fields = [f.field for f in basis_tet.ac_family(2)]
    funcs = tuple(BasisFunction(k, "ac", f) for k, f in enumerate(fields))
    lam = eigenvalues(assembly.mass_matrix(BasisSet(ElementKind.TET, 2, funcs)))
    assert lam[0] <= 1e-12 * lam[-1]


def test_condition_number_invariant_under_reordering():
    s = basis("tri", 3)
    perm = np.random.default_rng(1).permutation(s.dimension)
    shuffled = s.reordered(perm)
    k1 = assembly.mass_condition(s).kappa
    k2 = assembly.mass_condition(shuffled).kappa
    assert k2 == pytest.approx(k1, rel=1e-10)


def test_mass_spectra_positive_for_all_small_sets():
    for kind in ("quad", "hex", "tri", "tet"):
        assert eigenvalues(mass(kind, 2, "first" if kind == "tet" else None))[0] > 0


def test_matrix_serialization_round_trip():
    a = mass("tri", 2)
    assert np.array_equal(matrix_from_csv(matrix_to_csv(a)), a)
    assert np.array_equal(matrix_from_json(matrix_to_json(a)), a)
    first = matrix_to_csv(a).splitlines()[0].split(",")[0]
    assert len(first.replace("0.", "").lstrip("0")) >= 16
