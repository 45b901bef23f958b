"""
test_duality.py
---------------
Elementary duality, tensor products over ringoids and the tensor criterion
with its witness formulas.
"""

import itertools
import os
import sys

import pytest

# Add src directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from catalog import get_ring
from duality import dual, dual_axioms, dual_pair, herzog_check
from errors import SideMismatch
from groups import FinAbGroup
from modules import SortedTuple, build_module, direct_sum, regular_module, representable, submodule_generated
from pp_dsl import parse_formula
from pp_formula import conj, equivalent, implies, pp_sum, sampled_formulas, trivial_formula, zero_formula
from pp_pairs import make_pair
from ring_library import RING_OBJECT, cyclic_ring, quiver_category
from tensor import Tensor, tensor_map


@pytest.fixture(scope="module")
def z4():
    return cyclic_ring(4)


def z2_module(R, side):
    return build_module(R, side, {RING_OBJECT: FinAbGroup((2,))}, {(RING_OBJECT, RING_OBJECT): [[[1]]]}, name="z2")


def one(value):
    return SortedTuple((RING_OBJECT,), ((value,),))


def test_dual_of_trivial_formula_is_zero(z4):
    d = dual(trivial_formula(z4, "right", [RING_OBJECT]))
    assert d.side == "left"
    assert equivalent(d, zero_formula(z4, "left", [RING_OBJECT]))


def test_dual_of_divisibility(z4):
    divisible = parse_formula("E y . x = y*2", z4, "right")
    d = dual(divisible)
    assert equivalent(d, parse_formula("2*x = 0", z4, "left"))
    assert equivalent(dual(d), divisible)


@pytest.mark.parametrize("side", ["right", "left"])
def test_duality_is_an_antitone_involution(z4, side):
    family = sampled_formulas(z4, side, max_free=2, max_bound=1, max_cols=2)
    for phi in family:
        assert equivalent(dual(dual(phi)), phi)
    for phi, psi in itertools.product(family, repeat=2):
        if phi.free_sorts != psi.free_sorts:
            continue
        assert bool(implies(psi, phi)) == bool(implies(dual(phi), dual(psi)))


@pytest.mark.parametrize("ring", ["z4", "a2f2"])
def test_duality_exchanges_meets_and_sums(ring):
    R = get_ring(ring)
    family = sampled_formulas(R, "right", max_free=2, max_bound=1, max_cols=2)
    for phi, psi in itertools.product(family, repeat=2):
        if phi.free_sorts != psi.free_sorts:
            continue
        assert equivalent(dual(conj(phi, psi)), pp_sum(dual(phi), dual(psi)))
        assert equivalent(dual(pp_sum(phi, psi)), conj(dual(phi), dual(psi)))

def test_duality_on_a_ringoid():
    R = quiver_category(2, ["P", "Q"], [("r", "P", "Q")])
    phi = parse_formula("x:Q | x*r = 0", R, "right")
    assert equivalent(dual(dual(phi)), phi)
    assert dual(phi).free_sorts == ("Q",)


def test_dual_pairs(z4):
    everything = trivial_formula(z4, "right", [RING_OBJECT])
    nothing = zero_formula(z4, "right", [RING_OBJECT])
    d = dual_pair(make_pair(everything, nothing))
    assert equivalent(d.top, trivial_formula(z4, "left", [RING_OBJECT]))
    assert equivalent(d.bottom, zero_formula(z4, "left", [RING_OBJECT]))

    killed = parse_formula("x*2 = 0", z4, "right")
    divisible = parse_formula("E y . x = y*2", z4, "right")
    d = dual_pair(make_pair(killed, divisible))
    assert d.side == "left"
    assert equivalent(d.top, parse_formula("2*x = 0", z4, "left"))
    assert equivalent(d.bottom, parse_formula("E y . x = 2*y", z4, "left"))


def test_tensor_orders(z4):
    R_right, R_left = regular_module(z4, "right"), regular_module(z4, "left")
    z2_right, z2_left = z2_module(z4, "right"), z2_module(z4, "left")
    assert Tensor(R_right, R_left).order == 4
    assert Tensor(z2_right, R_left).order == 2
    assert Tensor(z2_right, z2_left).order == 2
    with pytest.raises(SideMismatch):
        Tensor(R_left, R_right)


def test_tensor_is_additive_in_each_argument(z4):
    M, M2 = z2_module(z4, "right"), regular_module(z4, "right")
    N, N2 = z2_module(z4, "left"), regular_module(z4, "left")
    assert Tensor(direct_sum(M, M2), N).order == Tensor(M, N).order * Tensor(M2, N).order
    assert Tensor(M, direct_sum(N, N2)).order == Tensor(M, N).order * Tensor(M, N2).order
    assert Tensor(direct_sum(M2, M2), direct_sum(N2, N)).order == 4 * 2 * 4 * 2

def test_tensor_with_representables_evaluates():
    R = quiver_category(2, ["P", "Q"], [("r", "P", "Q")])
    assert Tensor(representable(R, "P", "right"), representable(R, "P", "left")).order == 2
    assert Tensor(representable(R, "Q", "right"), representable(R, "P", "left")).order == 2
    assert Tensor(representable(R, "P", "right"), representable(R, "Q", "left")).order == 1


def test_tensoring_the_ideal_inclusion_with_z2(z4):
    R_left = regular_module(z4, "left")
    _, inclusion = submodule_generated(R_left, [(RING_OBJECT, (2,))]).embedded
    assert not tensor_map(z2_module(z4, "right"), inclusion).is_injective()
    assert tensor_map(regular_module(z4, "right"), inclusion).is_injective()


def test_herzog_witness_and_nonzero_class(z4):
    M, N = z2_module(z4, "right"), regular_module(z4, "left")

    result = herzog_check(one(1), M, one(2), N)
    assert result.status == "witness"
    assert equivalent(result.formula, parse_formula("x*2 = 0", z4, "right"))

    result = herzog_check(one(1), M, one(1), N)
    assert result.status == "nonzero"
    assert result.class_order == 2

    result = herzog_check(one(0), M, one(1), N)
    assert result.status == "witness"
    assert equivalent(result.formula, zero_formula(z4, "right", [RING_OBJECT]))


def test_herzog_agrees_with_the_tensor_on_every_pair(z4):
    family = sampled_formulas(z4, "right", max_free=1, max_bound=1, max_cols=2)
    rights = [z2_module(z4, "right"), regular_module(z4, "right")]
    lefts = [z2_module(z4, "left"), regular_module(z4, "left")]
    for M, N in itertools.product(rights, lefts):
        T = Tensor(M, N)
        for r, s in itertools.product(M.elements(RING_OBJECT), N.elements(RING_OBJECT)):
            rt, st = SortedTuple((RING_OBJECT,), (r,)), SortedTuple((RING_OBJECT,), (s,))
            result = herzog_check(rt, M, st, N, family=family, tensor_product=T)
            assert (result.status == "witness") == (not any(T.class_of(rt, st)))


def test_herzog_needs_a_right_and_a_left_module(z4):
    R_right = regular_module(z4, "right")
    with pytest.raises(SideMismatch):
        herzog_check(one(1), R_right, one(1), R_right)


def test_dual_axioms_translate_each_pair(z4):
    killed = parse_formula("x*2 = 0", z4, "right")
    divisible = parse_formula("E y . x = y*2", z4, "right")
    axioms = [make_pair(killed, divisible), make_pair(trivial_formula(z4, "right", [RING_OBJECT]), killed)]
    duals = dual_axioms(axioms)
    assert len(duals) == 2
    assert all(d.side == "left" for d in duals)
    for p, d in zip(axioms, duals):
        assert equivalent(d.top, dual(p.bottom)) and equivalent(d.bottom, dual(p.top))
    assert all(equivalent(p.top, q.top) for p, q in zip(axioms, dual_axioms(duals)))
