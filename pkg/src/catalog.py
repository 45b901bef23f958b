"""
catalog.py
----------
Built-in named rings and modules, read from schemas/fixtures.json.

Rings are built once per process, so every module taken from the catalog
shares one Ringoid instance. A module expression joins names with '+':

    regular       R as a module over itself (every representable, on a ringoid)
    zero          the zero module
    rep:P         the representable at object P
    <alias>       a per-ring name from the registry (z2, s1, sQ, ...)

Each per-ring alias is written as a pp formula whose free realization is the
module, so the registry stays readable and is validated by the same code path
as any user formula.
"""

import itertools
import json
from functools import lru_cache
from math import prod

from config import FIXTURE_FILE, SIDES
from errors import DocumentError, UnknownFixture
from modules import Module, direct_sum_all, regular_module, representable, zero_module
from persistence import log_action
from pp_dsl import parse_formula
from ring_library import cyclic_ring, matrix_ring, polynomial_ring, product_ring, quiver_category
from ringoid import Ringoid


@lru_cache(maxsize=1)
def load_fixtures() -> dict:
    """Read the fixture registry once."""
    try:
        with open(FIXTURE_FILE, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise DocumentError(f"fixture registry not found at {FIXTURE_FILE}")


def ring_names() -> list[str]:
    return sorted(load_fixtures()["rings"])


def _build(spec: dict, name: str | None = None) -> Ringoid:
    kind = spec.get("kind")
    if kind == "cyclic":
        return cyclic_ring(spec["n"], name=name)
    if kind == "polynomial":
        return polynomial_ring(spec["p"], spec["coeffs"], var=spec.get("var", "e"), name=name)
    if kind == "product":
        return product_ring(*[_build(f) for f in spec["factors"]], name=name)
    if kind == "matrix":
        return matrix_ring(_build(spec["base"]), spec["n"], name=name)
    if kind == "quiver":
        arrows = [tuple(a) for a in spec["arrows"]]
        return quiver_category(spec["p"], spec["vertices"], arrows, spec.get("zero_relations", ()), name=name)
    raise DocumentError(f"unknown ring constructor {kind!r}")


@lru_cache(maxsize=None)
def get_ring(name: str) -> Ringoid:
    rings = load_fixtures()["rings"]
    if name not in rings:
        raise UnknownFixture(f"no built-in ring named {name!r}; known rings: {', '.join(sorted(rings))}")
    R = _build(rings[name]["constructor"], name=name)
    log_action(f"Fixture ring '{name}' built")
    return R


def _ring_entry(R: Ringoid) -> dict:
    return load_fixtures()["rings"].get(R.name, {})


def module_names(R: Ringoid, side: str) -> list[str]:
    names = ["regular", "zero"] + [f"rep:{P}" for P in R.objects]
    for alias, definition in _ring_entry(R).get("modules", {}).items():
        if isinstance(definition, str) or side in definition:
            names.append(alias)
    return names


def _alias_module(R: Ringoid, alias: str, side: str) -> Module | None:
    definition = _ring_entry(R).get("modules", {}).get(alias)
    if definition is None:
        return None
    text = definition if isinstance(definition, str) else definition.get(side)
    if text is None:
        raise UnknownFixture(f"module {alias!r} over '{R.name}' has no {side} version")
    M, _ = parse_formula(text, R, side).free_realization
    return Module(R, side, M.fibers, M.actions, alias)


def _single(R: Ringoid, name: str, side: str) -> Module:
    if name == "regular":
        if R.is_ring:
            return regular_module(R, side)
        return direct_sum_all([representable(R, P, side) for P in R.objects], "regular")
    if name == "zero":
        return zero_module(R, side)
    if name.startswith("rep:"):
        return representable(R, name[4:], side)
    M = _alias_module(R, name, side)
    if M is None:
        known = ", ".join(module_names(R, side))
        raise UnknownFixture(f"no module named {name!r} over '{R.name}'; known modules: {known}")
    return M


def resolve_module(R: Ringoid, expression: str, side: str = "right") -> Module:
    """Build the module named by a '+'-joined expression."""
    if side not in SIDES:
        raise DocumentError(f"side must be one of {SIDES}, got {side!r}")
    text = expression.strip()
    text = load_fixtures().get("aliases", {}).get(text, text)
    parts = [p.strip() for p in text.split("+") if p.strip()]
    if not parts:
        raise UnknownFixture("empty module expression")
    modules = [_single(R, p, side) for p in parts]
    if len(modules) == 1:
        return modules[0]
    return direct_sum_all(modules, "+".join(parts))


def indecomposables(R: Ringoid, side: str) -> list[Module]:
    names = _ring_entry(R).get("indecomposables", {}).get(side)
    if names is None:
        names = [f"rep:{P}" for P in R.objects]
    return [_single(R, n, side) for n in names]


def direct_sums(blocks: list[Module], max_order: int) -> list[Module]:
    """Every direct sum of the blocks (with repetition) of order at most max_order."""
    blocks = [M for M in blocks if M.order > 1]
    found = []
    for size in itertools.count(1):
        batch = [
            combo for combo in itertools.combinations_with_replacement(range(len(blocks)), size)
            if prod(blocks[i].order for i in combo) <= max_order
        ]
        if not batch:
            return found
        for combo in batch:
            name = "+".join(str(blocks[i]) for i in combo)
            found.append(direct_sum_all([blocks[i] for i in combo], name))


def small_modules(R: Ringoid, side: str, max_order: int) -> list[Module]:
    """
    The zero module and the direct sums of the registered indecomposables with
    order at most max_order. Over the rings whose registry lists every
    indecomposable this is every module up to isomorphism.
    """
    return [zero_module(R, side)] + direct_sums(indecomposables(R, side), max_order)
