"""
linalg.py
---------
Exact integer linear algebra underneath every finite abelian group computation.

Row-vector convention throughout: a matrix is a list of rows and a vector x maps
to x·A. Everything runs on Python ints, so there is no overflow to worry about.

Provides:
- Hermite row echelon form with unimodular transform
- left kernels and left solving over the integers
- Smith normal form with the column transform and its inverse
- cokernel presentations ℤⁿ / (row lattice) → ⊕ ℤ/dᵢ
"""

from __future__ import annotations

from typing import Sequence

Matrix = list[list[int]]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) and g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def identity_matrix(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _combine(a: int, u: Sequence[int], b: int, v: Sequence[int]) -> list[int]:
    return [a * x + b * y for x, y in zip(u, v)]


def vec_mat(v: Sequence[int], A: Sequence[Sequence[int]], ncols: int) -> list[int]:
    """x·A for a row vector x."""
    out = [0] * ncols
    for coeff, row in zip(v, A):
        if coeff:
            for j, entry in enumerate(row):
                if entry:
                    out[j] += coeff * entry
    return out


def mat_mul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], ncols: int) -> Matrix:
    return [vec_mat(row, B, ncols) for row in A]


def echelon_form(rows: Sequence[Sequence[int]], ncols: int, with_transform: bool = False):
    """
    Hermite row echelon form of the integer matrix whose rows are `rows`.

    Returns (H, U, pivots) with U·A = H and U unimodular (U is None unless
    `with_transform`). The first len(pivots) rows of H are the echelon basis of
    the row lattice: positive pivots, entries above a pivot reduced into
    [0, pivot). The remaining rows of H are zero, and the matching rows of U
    span the left kernel of A.
    """
    A = [list(r) for r in rows]
    m = len(A)
    U = identity_matrix(m) if with_transform else None
    pivots: list[int] = []
    prow = 0
    for col in range(ncols):
        if prow >= m:
            break
        for i in range(prow + 1, m):
            b = A[i][col]
            if b == 0:
                continue
            a = A[prow][col]
            g, s, t = xgcd(a, b)
            u, v = -b // g, a // g
            A[prow], A[i] = _combine(s, A[prow], t, A[i]), _combine(u, A[prow], v, A[i])
            if U is not None:
                U[prow], U[i] = _combine(s, U[prow], t, U[i]), _combine(u, U[prow], v, U[i])
        p = A[prow][col]
        if p == 0:
            continue
        if p < 0:
            A[prow] = [-x for x in A[prow]]
            if U is not None:
                U[prow] = [-x for x in U[prow]]
            p = -p
        for i in range(prow):
            q = A[i][col] // p
            if q:
                A[i] = _combine(1, A[i], -q, A[prow])
                if U is not None:
                    U[i] = _combine(1, U[i], -q, U[prow])
        pivots.append(col)
        prow += 1
    return A, U, pivots


def hermite_basis(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Canonical echelon basis of the row lattice."""
    H, _, pivots = echelon_form(rows, ncols)
    return H[: len(pivots)]


def left_kernel(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Basis of {u : u·A = 0} over the integers."""
    _, U, pivots = echelon_form(rows, ncols, with_transform=True)
    return U[len(pivots):]


def solve_left(rows: Sequence[Sequence[int]], ncols: int, target: Sequence[int]) -> list[int] | None:
    """Some integer u with u·A = target, or None if target is not in the row lattice."""
    return LatticeSolver(rows, ncols).solve(target)


def smith_form(rows: Sequence[Sequence[int]], ncols: int):
    """
    Smith normal form D = U·A·V, tracking only the column transform.

    Returns (diagonal, V, V_inverse). Row operations are not recorded: the
    row lattice of A maps onto the row lattice of D under x ↦ x·V, which is all
    a cokernel presentation needs.
    """
    D = [list(r) for r in rows]
    m = len(D)
    V = identity_matrix(ncols)
    W = identity_matrix(ncols)

    def swap_cols(i: int, j: int):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        W[i], W[j] = W[j], W[i]

    def add_col(src: int, dst: int, q: int):
        # col_dst += q * col_src ; the inverse transform subtracts rows
        for r in D:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]
        W[src] = [a - q * b for a, b in zip(W[src], W[dst])]

    diagonal: list[int] = []
    t = 0
    while t < min(m, ncols):
        best = None
        for i in range(t, m):
            for j in range(t, ncols):
                if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        D[t], D[i] = D[i], D[t]
        if j != t:
            swap_cols(t, j)

        while True:
            p = D[t][t]
            changed = False
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // p
                    D[i] = [a - q * b for a, b in zip(D[i], D[t])]
                    if D[i][t]:
                        changed = True
            for j in range(t + 1, ncols):
                if D[t][j]:
                    q = D[t][j] // p
                    add_col(t, j, -q)
                    if D[t][j]:
                        changed = True
            if changed:
                # a smaller remainder appeared: move it onto the pivot and repeat
                pos, size = None, abs(D[t][t])
                for i in range(t + 1, m):
                    if D[i][t] and abs(D[i][t]) < size:
                        pos, size = ("row", i), abs(D[i][t])
                for j in range(t + 1, ncols):
                    if D[t][j] and abs(D[t][j]) < size:
                        pos, size = ("col", j), abs(D[t][j])
                if pos is not None:
                    if pos[0] == "row":
                        D[t], D[pos[1]] = D[pos[1]], D[t]
                    else:
                        swap_cols(t, pos[1])
                continue
            bad = None
            for i in range(t + 1, m):
                if any(D[i][j] % p for j in range(t + 1, ncols)):
                    bad = i
                    break
            if bad is None:
                break
            D[t] = [a + b for a, b in zip(D[t], D[bad])]

        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
        diagonal.append(D[t][t])
        t += 1
    return diagonal, V, W


def cokernel_presentation(relations: Sequence[Sequence[int]], ncols: int):
    """
    Present ℤ^ncols / (row lattice of `relations`) as ⊕ ℤ/dᵢ with d₁ | d₂ | ….

    Returns (moduli, projection, lift): `projection` is an ncols × r matrix with
    x ↦ x·projection (mod moduli) the quotient map, `lift` an r × ncols matrix
    sending quotient coordinates back to a representative. Raises ValueError
    when the quotient is infinite.
    """
    if ncols == 0:
        return [], [], []
    diagonal, V, W = smith_form(relations, ncols)
    if len(diagonal) < ncols:
        raise ValueError("quotient is infinite: relation lattice is not of full rank")
    kept = [i for i, d in enumerate(diagonal) if d != 1]
    moduli = [diagonal[i] for i in kept]
    projection = [[V[r][i] for i in kept] for r in range(ncols)]
    lift = [list(W[i]) for i in kept]
    return moduli, projection, lift


class LatticeSolver:
    """Echelon form of a row lattice computed once, reused for many left solves."""

    def __init__(self, rows: Sequence[Sequence[int]], ncols: int):
        self.nrows = len(rows)
        self.ncols = ncols
        H, U, pivots = echelon_form(rows, ncols, with_transform=True)
        self._basis = H[: len(pivots)]
        self._transform = U[: len(pivots)]
        self._pivots = pivots
        self.kernel = U[len(pivots):]

    def solve(self, target: Sequence[int]) -> list[int] | None:
        residual = list(target)
        coeffs = []
        for k, col in enumerate(self._pivots):
            p = self._basis[k][col]
            entry = residual[col]
            if entry % p:
                return None
            q = entry // p
            coeffs.append(q)
            if q:
                residual = _combine(1, residual, -q, self._basis[k])
        if any(residual):
            return None
        return vec_mat(coeffs, self._transform, self.nrows)
