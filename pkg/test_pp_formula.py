"""
test_pp_formula.py
------------------
pp formulas: the text syntax, evaluation, implication, constructors,
principal types, ideals and the sampled family.
"""

import os
import sys

import pytest

# Add src directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from errors import ArityError, DslSyntaxError, NotAPair, SideMismatch
from modules import SortedTuple, build_module, direct_sum, hom_set, regular_module, representable
from groups import FinAbGroup
from pp_dsl import format_formula, parse_formula
from pp_formula import (
    conj,
    embed,
    equivalent,
    evaluate,
    exists_project,
    implies,
    invariant,
    make_formula,
    pp_ideal,
    pp_sum,
    principal_type,
    rename,
    sampled_formulas,
    satisfies,
    substitute,
    trivial_formula,
    zero_formula,
)
from ring_library import RING_OBJECT, cyclic_ring, polynomial_ring, quiver_category


@pytest.fixture(scope="module")
def z4():
    return cyclic_ring(4)


@pytest.fixture(scope="module")
def z2(z4):
    return build_module(z4, "right", {RING_OBJECT: FinAbGroup((2,))}, {(RING_OBJECT, RING_OBJECT): [[[1]]]}, name="z2")


@pytest.fixture(scope="module")
def a2():
    return quiver_category(2, ["P", "Q"], [("r", "P", "Q")])


def f(text, R, side="right"):
    return parse_formula(text, R, side)


def one(value):
    return SortedTuple((RING_OBJECT,), ((value,),))


def test_evaluation_over_z4(z4, z2):
    R = regular_module(z4, "right")
    divisible = f("E y . x = y*2", z4)
    killed = f("x*2 = 0", z4)
    assert evaluate(divisible, R).order == 2
    assert evaluate(divisible, z2).order == 1
    assert evaluate(killed, R).order == 2
    assert evaluate(killed, z2).order == 2
    assert [t.entries for t in evaluate(divisible, R).tuples()] == [((0,),), ((2,),)]


@pytest.mark.parametrize("text", [
    "E y . x = y*2",
    "x*2 = 0",
    "x1 | x1*2 = 0",
    "x1, x2 | x1 = x2*2",
    "x1, x2 | E y . x1 = y ; x2 = y*3",
])
def test_structured_and_enumerate_agree(z4, z2, text):
    M = direct_sum(regular_module(z4, "right"), z2)
    phi = f(text, z4)
    assert evaluate(phi, M, "structured").equals(evaluate(phi, M, "enumerate"))
    assert evaluate(phi, M, "auto").equals(evaluate(phi, M, "structured"))


def test_satisfies(z4):
    R = regular_module(z4, "right")
    divisible = f("E y . x = y*2", z4)
    assert satisfies(divisible, R, one(2))
    assert not satisfies(divisible, R, one(1))


def test_implication_and_counterexample(z4):
    divisible = f("E y . x = y*2", z4)
    killed = f("x*2 = 0", z4)
    assert implies(divisible, killed)
    verdict = implies(killed, divisible)
    assert not verdict
    C, c = verdict.counterexample
    assert C.order == 2
    assert satisfies(killed, C, c) and not satisfies(divisible, C, c)


def test_constructors(z4):
    divisible = f("E y . x = y*2", z4)
    killed = f("x*2 = 0", z4)
    assert equivalent(conj(killed, divisible), divisible)
    assert equivalent(pp_sum(killed, divisible), killed)
    assert equivalent(pp_sum(zero_formula(z4, "right", [RING_OBJECT]), divisible), divisible)

    pairs = f("x1, x2 | x1*2 = x2", z4)
    assert equivalent(exists_project(pairs, [0]), trivial_formula(z4, "right", [RING_OBJECT]))
    assert equivalent(exists_project(pairs, [1]), divisible)
    swapped = rename(pairs, [1, 0])
    assert equivalent(swapped, f("x1, x2 | x2*2 = x1", z4))

    lifted = embed(killed, (RING_OBJECT, RING_OBJECT), [1])
    assert lifted.n == 2
    assert evaluate(lifted, regular_module(z4, "right")).order == 8


def test_substitution(z4):
    killed = f("x*2 = 0", z4)
    assert equivalent(substitute(killed, [RING_OBJECT], [[(2,)]]), trivial_formula(z4, "right", [RING_OBJECT]))
    assert equivalent(substitute(killed, [RING_OBJECT], [[(3,)]]), killed)
    with pytest.raises(ArityError):
        substitute(killed, [], [])


def test_dsl_round_trip(z4, a2):
    for text in ("E y . x = y*2", "x*2 = 0", "x1, x2 | x1 + x2*3 = 0"):
        phi = f(text, z4)
        assert equivalent(f(format_formula(phi), z4), phi)
    psi = f("x:Q | x*r = 0", a2)
    assert format_formula(psi).startswith("x:Q |")
    assert equivalent(f(format_formula(psi), a2), psi)


def test_dsl_errors_carry_positions(z4, a2):
    with pytest.raises(DslSyntaxError) as info:
        f("x * = 0", z4)
    assert info.value.line == 1 and info.value.column > 1
    with pytest.raises(DslSyntaxError):
        f("x = 0", a2)
    with pytest.raises(DslSyntaxError):
        f("x:P | x*r = 0", a2)
    with pytest.raises(DslSyntaxError):
        f("E y . y = 0", z4)


def test_trivial_equation_has_no_column(z4):
    assert f("x = x", z4).k == 0


def test_free_realization(z4):
    C, c = f("x*2 = 0", z4).free_realization
    assert C.order == 2
    C, c = f("x = x", z4).free_realization
    assert C.order == 4


def test_principal_types(z4, z2):
    R = regular_module(z4, "right")
    assert equivalent(principal_type(one(2), R), f("E y . x = y*2", z4))
    assert equivalent(principal_type(one(1), R), trivial_formula(z4, "right", [RING_OBJECT]))
    assert equivalent(principal_type(one(1), z2), f("x*2 = 0", z4))


def test_ideal_defined_by_a_formula(z4):
    ideal = pp_ideal(f("x*2 = 0", z4))
    assert ideal.order == 2
    with pytest.raises(ArityError):
        pp_ideal(f("x1, x2 | x1 = x2", z4))


def test_invariants(z4, z2):
    everything = trivial_formula(z4, "right", [RING_OBJECT])
    nothing = zero_formula(z4, "right", [RING_OBJECT])
    assert invariant(everything, nothing, z2) == 2
    assert invariant(everything, f("E y . x = y*2", z4), regular_module(z4, "right")) == 2
    with pytest.raises(NotAPair):
        invariant(f("E y . x = y*2", z4), f("x*2 = 0", z4), z2)


def test_left_formulas_on_a_ringoid(a2):
    phi = f("x:P | r*x = 0", a2, "left")
    assert evaluate(phi, representable(a2, "P", "left")).order == 1
    with pytest.raises(SideMismatch):
        evaluate(phi, representable(a2, "P", "right"))


def test_sampled_family_over_z4(z4):
    family = sampled_formulas(z4, "right", max_free=1, max_bound=1, max_cols=2)
    assert len(family) == 4
    for a, b in zip(family, family[1:]):
        assert not equivalent(a, b)


def test_sampled_family_over_dual_numbers():
    R = polynomial_ring(2, [1, 0, 0])
    family = sampled_formulas(R, "right", max_free=1, max_bound=1, max_cols=1)
    values = {evaluate(phi, regular_module(R, "right")).order for phi in family}
    assert values == {1, 2, 4}


def test_solution_sets_are_carried_along_maps(z4, z2):
    R = regular_module(z4, "right")
    family = sampled_formulas(z4, "right", max_free=2, max_bound=1, max_cols=2)
    for M, N in [(z2, R), (R, z2), (R, R), (direct_sum(R, z2), R)]:
        maps = hom_set(M, N)
        for phi in family:
            for t in evaluate(phi, M).tuples():
                assert all(satisfies(phi, N, g.apply_tuple(t)) for g in maps)


def test_solution_sets_split_over_direct_sums(z4, z2):
    R = regular_module(z4, "right")
    for phi in sampled_formulas(z4, "right", max_free=2, max_bound=1, max_cols=2):
        assert evaluate(phi, direct_sum(R, z2)).order == evaluate(phi, R).order * evaluate(phi, z2).order

def test_formulas_need_a_free_variable(z4):
    with pytest.raises(ArityError):
        make_formula(z4, "right", [], [RING_OBJECT], [], [[]])
