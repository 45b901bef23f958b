"""
test_ringoid.py
---------------
Ringoid validation, the built-in ring constructors, regularity and one-sided
ideals.
"""

import os
import sys

import pytest

# Add src directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from errors import AxiomViolation, DocumentError, DomainMismatch, ScopeError
from groups import FinAbGroup
from ring_library import RING_OBJECT, cyclic_ring, matrix_ring, polynomial_ring, product_ring, quiver_category
from ringoid import (
    Morph,
    ideal_generated,
    build_ringoid,
    enumerate_left_ideals,
    enumerate_right_ideals,
    is_von_neumann_regular,
)


@pytest.fixture(scope="module")
def a2():
    return quiver_category(2, ["P", "Q"], [("r", "P", "Q")], name="a2f2")


def test_cyclic_ring_multiplication():
    R = cyclic_ring(6)
    assert R.is_ring and R.total_order == 6
    assert R.mul((2,), (3,)) == (0,)
    assert R.mul((5,), (5,)) == (1,)
    assert cyclic_ring(1).total_order == 1


def test_dual_numbers():
    R = polynomial_ring(2, [1, 0, 0])
    e = R.hom(RING_OBJECT, RING_OBJECT).basis(1)
    assert R.mul(e, e) == (0, 0)
    assert R.label(RING_OBJECT, RING_OBJECT, 1) == "e"
    with pytest.raises(DocumentError):
        polynomial_ring(4, [1, 0, 0])


def test_product_and_matrix_rings():
    P = product_ring(cyclic_ring(2), cyclic_ring(2))
    assert P.identities[RING_OBJECT] == (1, 1)
    assert P.mul((1, 0), (0, 1)) == (0, 0)

    M = matrix_ring(cyclic_ring(2), 2)
    assert M.total_order == 16
    labels = [M.label(RING_OBJECT, RING_OBJECT, i) for i in range(4)]
    assert labels == ["E11", "E12", "E21", "E22"]
    e12, e21 = (0, 1, 0, 0), (0, 0, 1, 0)
    assert M.mul(e12, e21) == (1, 0, 0, 0)
    assert M.mul(e21, e12) == (0, 0, 0, 1)


def test_quiver_category_homs(a2):
    assert a2.hom("P", "Q").order == 2
    assert a2.hom("Q", "P").order == 1
    assert not a2.is_ring
    r = a2.basis("P", "Q")[0]
    assert a2.compose_morph(a2.identity("Q"), r) == r
    with pytest.raises(DomainMismatch):
        a2.compose_morph(r, r)


def test_cyclic_quiver_without_relations_is_rejected():
    with pytest.raises(DocumentError):
        quiver_category(2, ["P"], [("a", "P", "P")])


def test_opposite_swaps_hom_groups(a2):
    op = a2.opposite
    assert op.hom("Q", "P").order == 2
    assert op.hom("P", "Q").order == 1
    assert op.opposite is a2


@pytest.mark.parametrize("make", [
    lambda: quiver_category(2, ["P", "Q"], [("r", "P", "Q")]),
    lambda: matrix_ring(cyclic_ring(2), 2),
    lambda: cyclic_ring(4),
    lambda: polynomial_ring(2, [1, 0, 0]),
])
def test_opposite_is_an_involution(make):
    ring = make()
    op = ring.opposite
    rebuilt = build_ringoid(op.name, op.objects, op.homs, op.table, op.identities, op.labels)
    assert rebuilt.opposite is not ring
    assert rebuilt.opposite.structurally_equal(ring)


def test_identity_violation_carries_witness():
    key = (RING_OBJECT, RING_OBJECT)
    with pytest.raises(AxiomViolation) as info:
        build_ringoid("bad", [RING_OBJECT], {key: FinAbGroup((4,))}, {key + (RING_OBJECT,): [[(1,)]]}, {RING_OBJECT: (2,)})
    assert info.value.kind == "identity"


@pytest.mark.parametrize("ring, regular", [
    (cyclic_ring(6), True),
    (cyclic_ring(4), False),
    (product_ring(cyclic_ring(2), cyclic_ring(2)), True),
    (matrix_ring(cyclic_ring(2), 2), True),
    (polynomial_ring(2, [1, 0, 0]), False),
])
def test_von_neumann_regularity(ring, regular):
    result = is_von_neumann_regular(ring)
    assert result.regular is regular
    if regular:
        for r, s in result.witnesses.items():
            assert ring.compose_morph(r, ring.compose_morph(s, r)) == r
    else:
        assert result.counterexample is not None


def test_regularity_counterexample_over_z4():
    result = is_von_neumann_regular(cyclic_ring(4))
    assert result.counterexample == Morph(RING_OBJECT, RING_OBJECT, (2,))


def test_quiver_is_not_regular(a2):
    result = is_von_neumann_regular(a2)
    assert not result.regular
    assert result.counterexample.dom == "P" and result.counterexample.cod == "Q"


@pytest.mark.parametrize("ring, count", [
    (cyclic_ring(4), 3),
    (cyclic_ring(6), 4),
    (polynomial_ring(2, [1, 0, 0]), 3),
    (product_ring(cyclic_ring(2), cyclic_ring(2)), 4),
    (matrix_ring(cyclic_ring(2), 2), 5),
])
def test_left_ideal_counts(ring, count):
    ideals = enumerate_left_ideals(ring, RING_OBJECT)
    assert len(ideals) == count
    assert ideals[0].is_zero()
    assert ideals[-1].order == ring.total_order
    assert len(enumerate_right_ideals(ring, RING_OBJECT)) == count


def test_ideals_on_a_ringoid(a2):
    # subfunctors of (P, -): 0, the arrow alone, everything
    assert [I.order for I in enumerate_left_ideals(a2, "P")] == [2, 3, 4]


def test_ring_only_operations_refuse_ringoids(a2):
    with pytest.raises(ScopeError):
        a2.require_ring("regular_module")


def test_ideal_generated(a2):
    z4 = cyclic_ring(4)
    two = ideal_generated(z4, RING_OBJECT, [Morph(RING_OBJECT, RING_OBJECT, (2,))])
    assert sorted(two.parts[RING_OBJECT].elements()) == [(0,), (2,)]

    r = a2.basis("P", "Q")[0]
    arrow = ideal_generated(a2, "P", [r])
    assert arrow.parts["P"].order == 1 and arrow.parts["Q"].order == 2
    assert arrow.contains(r)
    assert ideal_generated(a2, "P", []).is_zero()
    with pytest.raises(DomainMismatch):
        ideal_generated(a2, "Q", [r])


def test_zero_ring_is_regular():
    assert is_von_neumann_regular(cyclic_ring(1)).regular
