"""
test_pp_pairs.py
----------------
pp-pairs, pp-definable morphisms, kernels, images and cokernels, Serre
membership, localisation and evaluation at the ringoid.
"""

import os
import sys

import pytest

# Add src directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from errors import NotAPair, Rejected, SideMismatch
from modules import direct_sum, regular_module, representable
from pp_dsl import parse_formula
from pp_formula import equivalent
from pp_pairs import (
    compose_morphisms,
    eps_example_sorts,
    eps_example_table,
    identity_morphism,
    induced_map,
    is_closed_on,
    kernel_cokernel_image,
    localized_iso,
    make_morphism,
    make_pair,
    matrix_morphism,
    pair_value,
    serre_membership,
    simple_module,
    eval_pair_to_module,
)
from ring_library import RING_OBJECT, cyclic_ring, polynomial_ring, quiver_category


@pytest.fixture(scope="module")
def f2e():
    return polynomial_ring(2, [1, 0, 0], name="f2e")


@pytest.fixture(scope="module")
def test_modules(f2e):
    R = regular_module(f2e, "right")
    S1 = simple_module(f2e)
    return [R, S1, direct_sum(R, S1)]


def pair(R, top, bottom, side="right"):
    return make_pair(parse_formula(top, R, side), parse_formula(bottom, R, side))


def test_five_sorts_over_f2(f2e):
    table = eps_example_table(f2e)
    assert table["orders"] == {"Q1": 8, "Q2": 4, "T1": 2, "I2": 4, "T2": 2}
    assert [name for name, member in table["serre"].items() if member] == ["T2"]
    assert set(table["localized_iso"].values()) == {"iso"}


def test_five_sorts_over_f3():
    R = polynomial_ring(3, [1, 0, 0], name="f3e")
    table = eps_example_table(R)
    assert table["orders"] == {"Q1": 27, "Q2": 9, "T1": 3, "I2": 9, "T2": 3}


def test_pairs_and_values(f2e, test_modules):
    p = pair(f2e, "x*e = 0", "E y . x = y*e")
    R, S1, _ = test_modules
    assert pair_value(p, R).order == 1
    assert pair_value(p, S1).order == 2
    assert is_closed_on(p, R) and not is_closed_on(p, S1)
    with pytest.raises(NotAPair):
        pair(f2e, "x*e = 0", "x = x")


def test_multiplication_by_e(f2e, test_modules):
    source = pair(f2e, "x = x", "x = 0")
    target = pair(f2e, "E y . x = y*e", "x = 0")
    m = make_morphism(parse_formula("x1, x2 | x2 = x1*e", f2e, "right"), source, target)
    parts = kernel_cokernel_image(m)
    assert equivalent(parts.kernel.top, parse_formula("x*e = 0", f2e, "right"))
    for M in test_modules:
        assert is_closed_on(parts.cokernel, M)
        f = induced_map(m, M)
        assert pair_value(parts.kernel, M).order == f.kernel().order
        assert pair_value(parts.image, M).order == f.image().order
    R = test_modules[0]
    assert induced_map(m, R).kernel().order == 2


def test_rejected_morphism_names_its_condition(f2e):
    source = pair(f2e, "x = x", "x = 0")
    target = pair(f2e, "E y . x = y*e", "x = 0")
    with pytest.raises(Rejected) as info:
        make_morphism(parse_formula("x1, x2 | x2 = x1", f2e, "right"), source, target)
    assert info.value.condition == 1


def test_composition_and_identities(f2e, test_modules):
    source = pair(f2e, "x = x", "x = 0")
    target = pair(f2e, "E y . x = y*e", "x = 0")
    e = f2e.hom(RING_OBJECT, RING_OBJECT).basis(1)
    m = matrix_morphism(source, target, [[e]])
    composite = compose_morphisms(identity_morphism(source), m)
    for M in test_modules:
        assert induced_map(composite, M) == induced_map(m, M)
        ident = induced_map(identity_morphism(source), M)
        assert ident.kernel().order == 1 and ident.is_surjective()


def test_serre_membership_and_localisation(f2e):
    sorts = eps_example_sorts(f2e)
    regular = [regular_module(f2e, "right")]
    assert serre_membership(sorts["T2"], regular)
    assert not serre_membership(sorts["Q1"], regular)
    verdict = localized_iso(sorts["Q1"], sorts["Q2"], regular)
    assert verdict.status == "not_iso"
    assert verdict.certificate["orders"] == [4, 2]
    verdict = localized_iso(sorts["Q2"], sorts["T1"], regular)
    assert verdict.status == "iso" and verdict.morphism is not None


def test_evaluation_at_the_ringoid_is_representable():
    R = quiver_category(2, ["P", "Q"], [("r", "P", "Q")])
    p = pair(R, "x:P | x = x", "x:P | x = 0", "left")
    M = eval_pair_to_module(p)
    assert M.side == "right"
    assert {Q: M.fibers[Q].order for Q in R.objects} == {"P": 2, "Q": 1}
    with pytest.raises(SideMismatch):
        eval_pair_to_module(pair(R, "x:P | x = x", "x:P | x = 0", "right"))


def test_evaluation_of_pairs_over_z4():
    z4 = cyclic_ring(4)
    M = eval_pair_to_module(pair(z4, "E y . x = 2*y", "x = 0", "left"))
    assert M.order == 2
    assert eval_pair_to_module(pair(z4, "E y . x = 2*y", "E y . x = 2*y", "left")).is_zero()
