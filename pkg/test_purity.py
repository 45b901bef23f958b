"""
test_purity.py
--------------
Pure monomorphisms and epimorphisms, flatness and absolute purity, each
decided by two independent oracles.
"""

import os
import sys

import pytest

# Add src directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from errors import NotEpi, NotMono, ScopeError
from modules import (
    direct_sum,
    enumerate_submodules,
    identity_map,
    quotient,
    regular_module,
    representable,
    submodule_generated,
    whole_submodule,
    zero_module,
)
from pp_dsl import parse_formula
from pp_formula import equivalent, sampled_formulas
from purity import (
    abspure_formula_check,
    flat_formula_check,
    is_absolutely_pure,
    is_flat,
    is_pure_epi,
    is_pure_submodule,
    restricts_exactly,
)
from ring_library import RING_OBJECT, cyclic_ring, polynomial_ring, quiver_category


@pytest.fixture(scope="module")
def z4():
    return cyclic_ring(4)


def killed_by(R, n, side="right"):
    M, _ = parse_formula(f"x*{n} = 0", R, side).free_realization
    return M


def test_two_z4_is_not_pure(z4):
    R = regular_module(z4, "right")
    _, j = submodule_generated(R, [(RING_OBJECT, (2,))]).embedded
    result = is_pure_submodule(j)
    assert not result.pure
    assert result.retraction is None
    assert equivalent(result.witness, parse_formula("E y . x = y*2", z4, "right"))


def test_direct_summand_is_pure(z4):
    N = direct_sum(killed_by(z4, 2), regular_module(z4, "right"))
    _, j = submodule_generated(N, [(RING_OBJECT, (1, 0))]).embedded
    result = is_pure_submodule(j)
    assert result.pure
    back = j.then(result.retraction)
    assert back.key() == identity_map(j.source).key()


def test_whole_module_is_pure(z4):
    R = regular_module(z4, "right")
    _, j = whole_submodule(R).embedded
    assert is_pure_submodule(j).pure


def test_oracles_agree_on_every_submodule():
    R = polynomial_ring(2, [1, 0, 0])
    N = direct_sum(regular_module(R, "right"), killed_by(R, "e"))
    family = sampled_formulas(R, "right", max_free=2, max_bound=1, max_cols=1)
    for S in enumerate_submodules(N):
        _, j = S.embedded
        result = is_pure_submodule(j)
        if result.pure:
            assert all(restricts_exactly(j, phi) for phi in family)
        else:
            assert not restricts_exactly(j, result.witness)


def test_purity_needs_a_mono(z4):
    R = regular_module(z4, "right")
    _, p = quotient(R, submodule_generated(R, [(RING_OBJECT, (2,))]))
    with pytest.raises(NotMono):
        is_pure_submodule(p)


def test_pure_epimorphisms(z4):
    R = regular_module(z4, "right")
    _, p = quotient(R, submodule_generated(R, [(RING_OBJECT, (2,))]))
    assert not is_pure_epi(p).pure

    B = direct_sum(R, killed_by(z4, 2))
    _, q = quotient(B, submodule_generated(B, [(RING_OBJECT, (1, 0))]))
    result = is_pure_epi(q)
    assert result.pure and result.lift is not None

    assert is_pure_epi(identity_map(R)).pure

    _, j = submodule_generated(R, [(RING_OBJECT, (2,))]).embedded
    with pytest.raises(NotEpi):
        is_pure_epi(j)


def test_flatness(z4):
    assert is_flat(regular_module(z4, "right")).flat
    result = is_flat(killed_by(z4, 2))
    assert not result.flat
    assert result.failing_ideal.order == 2
    assert is_flat(killed_by(cyclic_ring(6), 2)).flat
    assert is_flat(killed_by(z4, 2, "left")).flat is False


def test_flat_formula_check(z4):
    z2 = killed_by(z4, 2)
    assert not flat_formula_check(z2, parse_formula("x*2 = 0", z4, "right")).holds
    assert flat_formula_check(z2, parse_formula("x = x", z4, "right")).holds
    R = regular_module(z4, "right")
    for phi in sampled_formulas(z4, "right", max_free=1, max_bound=1, max_cols=2):
        assert flat_formula_check(R, phi).holds


def test_absolute_purity(z4):
    assert is_absolutely_pure(regular_module(z4, "right")).absolutely_pure
    assert is_absolutely_pure(zero_module(z4, "right")).absolutely_pure
    result = is_absolutely_pure(killed_by(z4, 2))
    assert not result.absolutely_pure
    assert result.failing_ideal.order == 2
    assert result.failing_map is not None


def test_abspure_formula_check(z4):
    divisible = parse_formula("E y . x = y*2", z4, "right")
    assert not abspure_formula_check(killed_by(z4, 2), divisible).holds
    assert abspure_formula_check(regular_module(z4, "right"), divisible).holds
    assert abspure_formula_check(killed_by(z4, 2), parse_formula("x = x", z4, "right")).holds


def test_ring_only_checks_refuse_ringoids():
    R = quiver_category(2, ["P", "Q"], [("r", "P", "Q")])
    with pytest.raises(ScopeError):
        is_flat(representable(R, "P", "right"))
