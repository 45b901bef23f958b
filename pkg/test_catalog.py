"""
test_catalog.py
---------------
The built-in ring and module registry.
"""

import os
import sys

import pytest

# Add src directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from catalog import direct_sums, get_ring, indecomposables, module_names, resolve_module, ring_names, small_modules
from errors import DocumentError, UnknownFixture


def test_ring_registry():
    assert {"zero", "z4", "z6", "f2e", "f3e", "z2xz2", "m2f2", "a2f2"} <= set(ring_names())
    R = get_ring("z4")
    assert R.name == "z4" and R.total_order == 4
    assert get_ring("z4") is R
    assert get_ring("a2f2").objects == ("P", "Q")
    with pytest.raises(UnknownFixture):
        get_ring("z5")


def test_module_expressions():
    R = get_ring("f2e")
    M = resolve_module(R, "regular+s1")
    assert M.order == 8
    assert str(M) == "regular+s1"
    assert resolve_module(R, "r-plus-s1").order == 8
    assert resolve_module(get_ring("z4"), "z2").order == 2
    assert resolve_module(get_ring("z4"), "zero").order == 1


def test_alias_sides_on_a_ringoid():
    R = get_ring("a2f2")
    assert resolve_module(R, "rep:P").fibers["Q"].order == 1
    assert resolve_module(R, "regular").order == 8
    assert resolve_module(R, "sQ", "left").fibers["Q"].order == 2
    assert "pQ" in module_names(R, "right") and "pQ" not in module_names(R, "left")
    with pytest.raises(UnknownFixture):
        resolve_module(R, "pQ", "left")


def test_bad_expressions():
    R = get_ring("z4")
    with pytest.raises(UnknownFixture):
        resolve_module(R, "z3")
    with pytest.raises(UnknownFixture):
        resolve_module(R, " + ")
    with pytest.raises(DocumentError):
        resolve_module(R, "z2", "middle")


def test_small_modules_over_z4():
    R = get_ring("z4")
    names = [str(M) for M in small_modules(R, "right", 16)]
    assert names == [
        "0", "z2", "R", "z2+z2", "z2+R", "R+R",
        "z2+z2+z2", "z2+z2+R", "z2+z2+z2+z2",
    ]
    assert all(M.order <= 16 for M in small_modules(R, "right", 16))


def test_direct_sums_skip_zero_blocks():
    R = get_ring("z6")
    blocks = indecomposables(R, "right") + [resolve_module(R, "zero")]
    assert [M.order for M in direct_sums(blocks, 6)] == [2, 3, 4, 6]
    assert small_modules(get_ring("zero"), "right", 8)[0].order == 1
