"""
ring_library.py
---------------
Built-in constructors for finite rings and small ringoids:
ℤ/n, F_p[X]/(f), finite products, matrix rings, and quiver path categories
with monomial zero relations over F_p.

Every constructor goes through build_ringoid, so its output is validated.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from sympy import Poly, Symbol, isprime

from errors import DocumentError
from groups import FinAbGroup
from ringoid import Ringoid, build_ringoid

RING_OBJECT = "R"


def _ring_from_basis(name: str, moduli: Sequence[int], products, identity, labels) -> Ringoid:
    """One-object ringoid from a multiplication table on coordinate generators."""
    key = (RING_OBJECT, RING_OBJECT)
    return build_ringoid(
        name,
        [RING_OBJECT],
        {key: FinAbGroup(tuple(moduli))},
        {(RING_OBJECT, RING_OBJECT, RING_OBJECT): products},
        {RING_OBJECT: tuple(identity)},
        {key: tuple(labels)},
    )


def cyclic_ring(n: int, name: str | None = None) -> Ringoid:
    """ℤ/n; n = 1 gives the zero ring."""
    if n < 1:
        raise DocumentError(f"ℤ/n needs n ≥ 1, got {n}")
    name = name or f"z{n}"
    if n == 1:
        return _ring_from_basis(name, (), [], (), ())
    return _ring_from_basis(name, (n,), [[(1,)]], (1,), ("1",))


def polynomial_ring(p: int, coeffs: Sequence[int], var: str = "e", name: str | None = None) -> Ringoid:
    """
    F_p[X]/(f) for a monic f given by its coefficients, highest degree first.
    Generators are 1, X, X², … labelled "1", var, var2, ….
    """
    if not isprime(p):
        raise DocumentError(f"polynomial rings need a prime characteristic, got {p}")
    x = Symbol("x")
    f = Poly(list(coeffs), x, modulus=p)
    d = f.degree()
    if d < 1 or int(f.LC()) % p != 1:
        raise DocumentError(f"modulus polynomial must be monic of positive degree, got {list(coeffs)}")

    def coords(k: int) -> tuple[int, ...]:
        r = Poly(x ** k, x, modulus=p).rem(f)
        low_first = [int(c) % p for c in reversed(r.all_coeffs())]
        return tuple(low_first + [0] * (d - len(low_first)))

    products = [[coords(a + b) for b in range(d)] for a in range(d)]
    labels = ["1"] + [var if k == 1 else f"{var}{k}" for k in range(1, d)]
    name = name or f"f{p}[{var}]"
    return _ring_from_basis(name, (p,) * d, products, coords(0), labels)


def product_ring(*rings: Ringoid, name: str | None = None) -> Ringoid:
    """R₁ × … × R_k with componentwise operations."""
    for R in rings:
        R.require_ring("product_ring")
    moduli: list[int] = []
    owner: list[tuple[int, int]] = []
    labels: list[str] = []
    for i, R in enumerate(rings):
        group = R.hom(R.objects[0], R.objects[0])
        for a in range(group.dim):
            moduli.append(group.moduli[a])
            owner.append((i, a))
            base = R.label(R.objects[0], R.objects[0], a)
            labels.append(f"u{i + 1}" if base == "1" else f"{base}_{i + 1}")
    offsets = list(itertools.accumulate([0] + [len(R.hom(R.objects[0], R.objects[0]).moduli) for R in rings]))

    products = []
    for a, (i, ai) in enumerate(owner):
        row = []
        for b, (j, bj) in enumerate(owner):
            value = [0] * len(moduli)
            if i == j:
                R = rings[i]
                P = R.objects[0]
                g, f = R.hom(P, P).basis(ai), R.hom(P, P).basis(bj)
                for k, c in enumerate(R.compose(g, f, P, P, P)):
                    value[offsets[i] + k] = c
            row.append(tuple(value))
        products.append(row)
    identity = [c for R in rings for c in R.identities[R.objects[0]]]
    name = name or "x".join(R.name for R in rings)
    return _ring_from_basis(name, moduli, products, identity, labels)


def matrix_ring(R: Ringoid, n: int, name: str | None = None) -> Ringoid:
    """n × n matrices over the ring R; generators are E_ij times generators of R."""
    P = R.require_ring("matrix_ring")
    base = R.hom(P, P)
    k = base.dim
    positions = [(i, j, c) for i in range(n) for j in range(n) for c in range(k)]
    index = {pos: t for t, pos in enumerate(positions)}

    products = []
    for (i, j, a) in positions:
        row = []
        for (l, m, b) in positions:
            value = [0] * len(positions)
            if j == l:
                entry = R.compose(base.basis(a), base.basis(b), P, P, P)
                for c, v in enumerate(entry):
                    value[index[(i, m, c)]] = v
            row.append(tuple(value))
        products.append(row)

    identity = [0] * len(positions)
    for i in range(n):
        for c, v in enumerate(R.identities[P]):
            identity[index[(i, i, c)]] = v

    labels = []
    for (i, j, c) in positions:
        lab = R.label(P, P, c)
        unit = f"E{i + 1}{j + 1}"
        labels.append(unit if lab == "1" else f"{lab}{unit}")
    moduli = [base.moduli[c] for (_, _, c) in positions]
    return _ring_from_basis(name or f"m{n}({R.name})", moduli, products, identity, labels)


def quiver_category(
    p: int,
    vertices: Sequence[str],
    arrows: Sequence[tuple[str, str, str]],
    zero_relations: Sequence[Sequence[str]] = (),
    name: str | None = None,
) -> Ringoid:
    """
    The F_p-linear path category of a quiver modulo monomial zero relations.

    `arrows` are (name, source, target); a relation lists arrow names in the
    order they are traversed. Morphisms P → Q are spanned by the nonzero paths
    from P to Q; the trivial path is labelled "1", longer ones join their arrow
    names with "_".
    """
    if not isprime(p):
        raise DocumentError(f"quiver categories need a prime field, got {p}")
    arrow_map = {a: (s, t) for a, s, t in arrows}
    if len(arrow_map) != len(arrows):
        raise DocumentError("arrow names must be unique")
    relations = [tuple(r) for r in zero_relations]

    def is_zero(path: tuple[str, ...]) -> bool:
        return any(
            path[i:i + len(r)] == r for r in relations for i in range(len(path) - len(r) + 1)
        )

    # breadth-first over nonzero paths; a cycle without relations never terminates
    paths: dict[tuple[str, str], list[tuple[str, ...]]] = {(P, Q): [] for P in vertices for Q in vertices}
    for P in vertices:
        paths[(P, P)].append(())
    frontier = [(a,) for a in arrow_map if not is_zero((a,))]
    limit = (len(arrows) + 1) * (max((len(r) for r in relations), default=1) + 1)
    length = 1
    while frontier:
        if length > limit:
            raise DocumentError("path category is infinite: add zero relations to cut every cycle")
        nxt = []
        for path in frontier:
            src, tgt = arrow_map[path[0]][0], arrow_map[path[-1]][1]
            paths[(src, tgt)].append(path)
            for a, (s, _) in arrow_map.items():
                if s == tgt and not is_zero(path + (a,)):
                    nxt.append(path + (a,))
        frontier = nxt
        length += 1

    position = {key: {path: i for i, path in enumerate(ps)} for key, ps in paths.items()}
    homs = {key: FinAbGroup((p,) * len(ps)) for key, ps in paths.items()}
    table = {}
    for P, Q, S in itertools.product(vertices, repeat=3):
        rows = []
        for g in paths[(Q, S)]:
            row = []
            for f in paths[(P, Q)]:
                value = [0] * len(paths[(P, S)])
                walk = f + g
                if walk in position[(P, S)]:
                    value[position[(P, S)][walk]] = 1
                row.append(tuple(value))
            rows.append(row)
        table[(P, Q, S)] = rows
    identities = {P: tuple(int(i == 0) for i in range(len(paths[(P, P)]))) for P in vertices}
    labels = {key: tuple("_".join(path) if path else "1" for path in ps) for key, ps in paths.items()}
    return build_ringoid(name or "quiver", vertices, homs, table, identities, labels)

