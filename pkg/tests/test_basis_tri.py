import numpy as np
import pytest

from hdivbasis import basis_tri, checks
from hdivbasis.polyalgebra import divergence

from helpers import basis


@pytest.mark.parametrize("p, dim", [(1, 6), (2, 12), (3, 20), (4, 30)])
def test_dimension(p, dim):
    assert basis("tri", p).dimension == dim


def test_counts_p3():
    counts = basis("tri", 3).category_counts()
    assert counts[basis_tri.EDGE_N0] + counts[basis_tri.EDGE_HIGHER] == 12
    assert counts[basis_tri.EDGE_INTERIOR] == 6
    assert counts[basis_tri.INTERIOR_BUBBLE] == 2
    assert counts == basis_tri.expected_counts(3)


def test_edge_interior_count_p4():
    assert basis("tri", 4).category_counts()[basis_tri.EDGE_INTERIOR] == 9


def test_bubbles_p3_two_directions():
    bubbles = basis("tri", 3).select(basis_tri.INTERIOR_BUBBLE)
    assert sorted((f.indices, f.direction) for f in bubbles) == [((0, 0), 1), ((0, 0), 2)]


def test_whitney_functions_have_constant_divergence():
    for f in basis("tri", 1).select(basis_tri.EDGE_N0):
        d = divergence(f.field)
        assert d.is_constant() and d != 0


def test_higher_edge_functions_are_divergence_free():
    for f in basis("tri", 4).select(basis_tri.EDGE_HIGHER):
        assert divergence(f.field).is_zero()


@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_properties(p):
    s = basis("tri", p)
    for fn in (checks.check_divfree, checks.check_traces, checks.check_rank, checks.check_orthonormal):
        failed = [r for r in fn(s) if not r.passed]
        assert not failed, failed[:3]


def test_edge_interior_block_is_identity():
    s = basis("tri", 4)
    idx = [k for k, f in enumerate(s) if f.category == basis_tri.EDGE_INTERIOR and f.entity == 2]
    np.testing.assert_allclose(checks.gram_block(s, idx), np.eye(3), atol=1e-12)


def test_cross_direction_bubbles_reported():
    value = checks.cross_direction_bubble_gram(basis("tri", 4))
    assert value is not None and value >= 0


@pytest.mark.parametrize("p", [1, 2, 3])
def test_hierarchical(p):
    assert set(basis("tri", p).fields) <= set(basis("tri", p + 1).fields)


@pytest.mark.parametrize("p", [5, 6])
def test_orders_beyond_the_tables(p):
    s = basis("tri", p)
    assert s.dimension == (p + 1) * (p + 2)
    for fn in (checks.check_rank, checks.check_traces, checks.check_divfree, checks.check_orthonormal):
        assert checks.all_passed(fn(s))
