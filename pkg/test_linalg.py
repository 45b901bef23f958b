"""
test_linalg.py
--------------
Integer linear algebra and finite abelian groups, checked against sympy's
Smith normal form.
"""

import os
import sys

import pytest
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

# Add src directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from groups import FinAbGroup, GroupHom, Subgroup
from linalg import (
    cokernel_presentation,
    hermite_basis,
    left_kernel,
    solve_left,
    vec_mat,
    xgcd,
)

RELATION_MATRICES = [
    [[2, 0], [0, 3]],
    [[4, 0], [0, 6]],
    [[2, 4, 4], [-6, 6, 12], [10, -4, -16]],
    [[6, 4], [4, 6], [2, 2]],
    [[12, 0, 0], [0, 18, 0], [0, 0, 8], [6, 6, 4]],
]


def sympy_invariant_factors(rows):
    D = smith_normal_form(Matrix(rows), domain=ZZ)
    diagonal = [abs(int(D[i, i])) for i in range(min(D.shape))]
    return sorted(d for d in diagonal if d != 1)


def test_xgcd_bezout():
    for a, b in [(240, 46), (7, 0), (0, 9), (-12, 18), (35, -21)]:
        g, s, t = xgcd(a, b)
        assert g >= 0
        assert s * a + t * b == g
        if a or b:
            assert a % g == 0 and b % g == 0


@pytest.mark.parametrize("rows", RELATION_MATRICES)
def test_cokernel_moduli_match_sympy(rows):
    moduli, _, _ = cokernel_presentation(rows, len(rows[0]))
    assert sorted(moduli) == sympy_invariant_factors(rows)
    for a, b in zip(moduli, moduli[1:]):
        assert b % a == 0


@pytest.mark.parametrize("rows", RELATION_MATRICES)
def test_cokernel_projection_kills_relations_and_lift_is_a_section(rows):
    n = len(rows[0])
    moduli, projection, lift = cokernel_presentation(rows, n)
    r = len(moduli)
    for row in rows:
        image = vec_mat(row, projection, r)
        assert all(x % d == 0 for x, d in zip(image, moduli))
    for k in range(r):
        back = vec_mat(lift[k], projection, r)
        assert [x % d for x, d in zip(back, moduli)] == [int(i == k) for i in range(r)]


def test_infinite_cokernel_is_rejected():
    with pytest.raises(ValueError):
        cokernel_presentation([[1, 0]], 2)


def test_left_kernel_and_solve():
    rows = [[1, 2], [2, 4], [0, 3]]
    for u in left_kernel(rows, 2):
        assert vec_mat(u, rows, 2) == [0, 0]
    assert len(left_kernel(rows, 2)) == 1

    u = solve_left(rows, 2, [1, 5])
    assert u is not None and vec_mat(u, rows, 2) == [1, 5]
    assert solve_left([[2, 0], [0, 3]], 2, [1, 0]) is None


def test_hermite_basis_is_canonical():
    a = hermite_basis([[2, 4], [0, 6]], 2)
    b = hermite_basis([[2, 10], [0, 6], [4, 2]], 2)
    assert a == b


def test_group_basics():
    G = FinAbGroup((2, 4))
    assert G.order == 8
    assert G.invariant_factors() == (2, 4)
    assert FinAbGroup((2, 3)).invariant_factors() == (6,)
    assert len(list(G.elements())) == 8
    with pytest.raises(ValueError):
        FinAbGroup((0,))


def test_subgroup_order_and_quotient():
    G = FinAbGroup((4, 4))
    H = Subgroup(G, ((2, 0), (0, 2)))
    assert H.order == 4
    assert H.contains((2, 2)) and not H.contains((1, 0))
    assert G.quotient(H).group.order == 4
    assert sorted(G.quotient(Subgroup(G, ((1, 1),))).group.moduli) == [4]


def test_hom_kernel_image_preimage():
    G = FinAbGroup((4,))
    doubling = GroupHom(G, G, ((2,),))
    assert doubling.kernel().order == 2
    assert doubling.image().order == 2
    assert doubling.preimage_of((2,)) in ((1,), (3,))
    assert doubling.preimage_of((1,)) is None
    assert not doubling.is_injective()


def test_subquotient_projects_and_lifts():
    G = FinAbGroup((8,))
    top = Subgroup(G, ((2,),))
    bottom = Subgroup(G, ((4,),))
    sq = top.quotient(bottom)
    assert sq.order == 2
    assert sq.project((4,)) == sq.group.zero
    assert top.contains(sq.lift(sq.group.basis(0)))
