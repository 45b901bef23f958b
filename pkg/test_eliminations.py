"""
test_eliminations.py
--------------------
Quantifier elimination, embeddings of pairs into home sorts, and the
regularity harness that runs both.
"""

import os
import sys

import pytest

# Add src directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from eliminations import (
    FOUND,
    NOT_FOUND,
    PROVABLY_NONE,
    annihilator_formulas,
    embed_search,
    has_trivial_kernel,
    home_pair,
    qe_search,
    vnr_harness,
)
from pp_dsl import parse_formula
from pp_formula import equivalent
from pp_pairs import make_morphism, make_pair
from ring_library import RING_OBJECT, cyclic_ring, product_ring


@pytest.fixture(scope="module")
def z4():
    return cyclic_ring(4)


@pytest.fixture(scope="module")
def z6():
    return cyclic_ring(6)


def f(text, R):
    return parse_formula(text, R, "right")


def test_annihilator_candidates(z4, z6):
    assert len(annihilator_formulas(z4, "right")) == 3
    assert len(annihilator_formulas(z6, "right")) == 4


def test_divisibility_over_z6_is_quantifier_free(z6):
    result = qe_search(f("E y . x = y*2", z6))
    assert result.status == FOUND
    assert result.formula.is_quantifier_free
    assert equivalent(result.formula, f("x*3 = 0", z6))


def test_divisibility_over_z4_has_no_equivalent(z4):
    result = qe_search(f("E y . x = y*2", z4))
    assert result.status == PROVABLY_NONE
    assert result.formula is None
    assert result.checked == 3


def test_quantifier_free_input_is_returned(z4):
    phi = f("x*2 = 0", z4)
    result = qe_search(phi)
    assert result.status == FOUND and result.formula is phi


def test_two_variable_search(z6):
    phi = f("x1, x2 | E y . x1 = y*2 ; x2 = y*2", z6)
    result = qe_search(phi, bound=2)
    assert result.status == FOUND
    assert equivalent(result.formula, f("x1, x2 | x1 = x2 ; x1*3 = 0", z6))


def test_embedding_over_z6(z6):
    p = make_pair(f("x = x", z6), f("E y . x = y*2", z6))
    result = embed_search(p)
    assert result.status == FOUND
    assert result.home == (RING_OBJECT,)
    assert equivalent(result.morphism.rho, f("x1, x2 | x2 = x1*3", z6))
    assert has_trivial_kernel(result.morphism)


def test_doubling_over_z4_is_not_monic(z4):
    p = make_pair(f("x = x", z4), f("E y . x = y*2", z4))
    target = home_pair(z4, "right", (RING_OBJECT,))
    m = make_morphism(f("x1, x2 | x2 = x1*2", z4), p, target)
    # the kernel is x*2 = 0, which is strictly weaker than divisibility on z2
    assert not has_trivial_kernel(m)
    assert embed_search(p, bound=16).status == NOT_FOUND


def test_small_bound_reports_boundedness(z4):
    p = make_pair(f("x*2 = 0", z4), f("E y . x = y*2", z4))
    result = embed_search(p, bound=2)
    assert result.status == NOT_FOUND
    assert result.certificate["candidates_tried"] > 0


def test_embedding_obstruction_is_a_proof(z4):
    # a pair whose value on R exceeds every home sort cannot embed
    p = make_pair(f("x1, x2 | x1 = x1", z4), f("x1, x2 | x1 = 0 ; x2 = 0", z4))
    result = embed_search(p, home=[(RING_OBJECT,)])
    assert result.status == PROVABLY_NONE
    assert RING_OBJECT in result.certificate


@pytest.mark.parametrize("ring", [cyclic_ring(6), cyclic_ring(1), product_ring(cyclic_ring(2), cyclic_ring(2))])
def test_harness_on_regular_rings(ring):
    report = vnr_harness(ring)
    assert report.regular
    assert report.anomalies == []
    assert report.items
    assert all(item.status == FOUND for item in report.items)


def test_harness_with_two_free_variables():
    ring = product_ring(cyclic_ring(2), cyclic_ring(2))
    report = vnr_harness(ring, bound_cols=2, qe_bound=2, embed_bound=256, max_free=2)
    assert report.regular
    assert report.anomalies == []
    assert any(item.kind == "qe" and "|" in item.subject for item in report.items)

def test_harness_on_z4(z4):
    report = vnr_harness(z4)
    assert not report.regular
    assert report.counterexample
    assert report.count("qe", PROVABLY_NONE) >= 1
