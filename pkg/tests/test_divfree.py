from fractions import Fraction

import numpy as np
import pytest

from hdivbasis import basis_quad, checks, divfree
from hdivbasis.divfree import DiscreteField, augment, bubble_for, bubble_order, divergence_integral, divergence_norm

from helpers import basis

KINDS = ("quad", "hex", "tri", "tet")


@pytest.mark.parametrize(
    "kind, p, q", [("quad", 1, 2), ("quad", 3, 4), ("hex", 1, 2), ("tri", 1, 3), ("tri", 3, 4), ("tet", 3, 4), ("tet", 4, 5)]
)
def test_bubble_order(kind, p, q):
    assert bubble_order(kind, p) == q


def test_quad_bubble_uses_l3_and_l2():
    chi = bubble_for("quad", 1)
    # L_3 in x times L_2 in y: degree 3 + 2
    assert chi.degree == 5
    assert checks.normal_trace_vanishes(chi, "quad")


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_bubble_boundary_and_mean(kind, p):
    chi = bubble_for(kind, p)
    assert checks.normal_trace_vanishes(chi, kind)
    assert all(v == 0 for v in divergence_integral(chi, kind).values())
    assert not chi.is_zero()


def test_norm_of_divergence_free_members():
    s = basis("quad", 2)
    c = np.array([1.0 if f.category == basis_quad.INTERIOR_T1 else 0.0 for f in s])
    assert divergence_norm(DiscreteField.on(s, c)) <= 1e-13


def test_norm_of_single_rt0():
    s = basis("quad", 1)
    c = np.zeros(s.dimension)
    c[0] = 1
    assert divergence_norm(DiscreteField.on(s, c)) == pytest.approx(1.0, abs=1e-15)


def test_norm_of_zero_field():
    s = basis("tri", 2)
    assert divergence_norm(DiscreteField.on(s, np.zeros(s.dimension))) == 0


def test_coefficient_length_checked():
    with pytest.raises(ValueError):
        DiscreteField.on(basis("tri", 1), [1.0, 2.0])


@pytest.mark.parametrize("kind", KINDS)
def test_scaled_bubble_is_removed(kind):
    s = basis(kind, 2, "first" if kind == "tet" else None)
    c = np.zeros(s.dimension + 1)
    c[-1] = 2.0
    u = DiscreteField.on_augmented(s, c)
    res = augment(u, p=2)
    assert res.coefficient == pytest.approx(-2.0, rel=1e-12)
    assert res.norm_after <= 1e-12 * res.norm_before


def test_random_tri_field():
    s = basis("tri", 2)
    rng = np.random.default_rng(11)
    res = augment(DiscreteField.on(s, rng.standard_normal(s.dimension)))
    assert res.norm_after <= res.norm_before
    assert abs(res.derivative_at_optimum) <= 1e-10
    assert res.bubble_order == 3
    assert res.residual_degree >= 0


def test_divergence_free_input_needs_no_correction():
    s = basis("tri", 3)
    c = np.array([1.0 if f.category == "EdgeHigher" else 0.0 for f in s])
    assert augment(DiscreteField.on(s, c)).coefficient == 0


def test_tensor_bubble_is_orthogonal_to_low_order_divergences():
    # div chi is built from ell_q, which is orthogonal to every polynomial of
    # lower degree in that variable, so the correction is always zero here
    s = basis("quad", 2)
    res = augment(DiscreteField.on(s, np.random.default_rng(2).standard_normal(s.dimension)))
    assert res.coefficient == pytest.approx(0.0, abs=1e-14)
    assert res.norm_after == pytest.approx(res.norm_before, rel=1e-14)


def test_integral_is_split_by_radicand():
    chi = bubble_for("tet", 1)
    integrals = divergence_integral(chi, "tet")
    assert integrals and all(isinstance(v, Fraction) for v in integrals.values())


def test_guard_for_divergence_free_bubble(monkeypatch, caplog):
    s = basis("quad", 1)
    solenoidal = s.select(basis_quad.INTERIOR_T1)[0].field
    monkeypatch.setattr(divfree, "bubble_for", lambda kind, p: solenoidal)
    res = augment(DiscreteField.on(s, np.ones(s.dimension)))
    assert res.coefficient == 0.0
    assert "divergence-free" in caplog.text
