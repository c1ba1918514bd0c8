"""Small exact integer-lattice helpers: Hermite and Smith normal forms.

Matrices are lists of row lists of Python ints; sizes here are tiny
(a handful of rows over the ray set), so clarity beats asymptotics.
"""

from __future__ import annotations

from fractions import Fraction


def hnf_rows(matrix: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite normal form basis of the row lattice.

    Returns rows with strictly increasing pivot columns, positive pivots,
    and entries below each pivot zero.  Zero rows are dropped.
    """
    rows = [list(r) for r in matrix if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    basis: list[list[int]] = []
    col = 0
    while col < ncols and rows:
        live = [r for r in rows if r[col] != 0]
        if not live:
            col += 1
            continue
        while True:
            live.sort(key=lambda r: abs(r[col]))
            pivot = live[0]
            done = True
            for r in live[1:]:
                q = r[col] // pivot[col]
                for j in range(ncols):
                    r[j] -= q * pivot[j]
                if r[col] != 0:
                    done = False
            live = [pivot] + [r for r in live[1:] if r[col] != 0]
            if done or len(live) == 1:
                break
        if pivot[col] < 0:
            for j in range(ncols):
                pivot[j] = -pivot[j]
        basis.append(pivot)
        rest = [r for r in rows if r is not pivot]
        for r in rest:
            if r[col] != 0:
                q = r[col] // pivot[col]
                for j in range(ncols):
                    r[j] -= q * pivot[j]
        rows = [r for r in rest if any(r)]
        col += 1
    # reduce entries above each pivot
    for i in reversed(range(len(basis))):
        p = next(j for j in range(ncols) if basis[i][j] != 0)
        for k in range(i):
            q = basis[k][p] // basis[i][p]
            if q:
                for j in range(ncols):
                    basis[k][j] -= q * basis[i][j]
    return basis


def reduce_mod_lattice(vector: list[int], hnf_basis: list[list[int]]) -> tuple[int, ...]:
    """Canonical representative of `vector` modulo the row lattice."""
    v = list(vector)
    for row in hnf_basis:
        p = next(j for j in range(len(row)) if row[j] != 0)
        q = v[p] // row[p]
        if q:
            for j in range(len(v)):
                v[j] -= q * row[j]
    return tuple(v)


def in_row_lattice(vector: list[int], hnf_basis: list[list[int]]) -> bool:
    return not any(reduce_mod_lattice(vector, hnf_basis))


def smith_normal_form(matrix: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (S, U, V) with U*A*V = S diagonal, U and V unimodular."""
    a = [list(r) for r in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(i, j, q):  # row_i -= q * row_j
        for k in range(n):
            a[i][k] -= q * a[j][k]
        for k in range(m):
            u[i][k] -= q * u[j][k]

    def col_op(i, j, q):  # col_i -= q * col_j
        for k in range(m):
            a[k][i] -= q * a[k][j]
        for k in range(n):
            v[k][i] -= q * v[k][j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for k in range(m):
            a[k][i], a[k][j] = a[k][j], a[k][i]
        for k in range(n):
            v[k][i], v[k][j] = v[k][j], v[k][i]

    t = 0
    while t < min(m, n):
        pivots = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not pivots:
            break
        _, pi, pj = min(pivots)
        swap_rows(t, pi)
        swap_cols(t, pj)
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    row_op(i, t, a[i][t] // a[t][t])
                    if a[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    col_op(j, t, a[t][j] // a[t][t])
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
        if a[t][t] < 0:
            for k in range(n):
                a[t][k] = -a[t][k]
            for k in range(m):
                u[t][k] = -u[t][k]
        t += 1

    # enforce divisibility of the diagonal
    changed = True
    while changed:
        changed = False
        for i in range(min(m, n) - 1):
            d1, d2 = a[i][i], a[i + 1][i + 1]
            if d1 and d2 and d2 % d1 != 0:
                # fold d2 into position (i, i) and rediagonalise the 2x2 block
                for k in range(m):
                    a[k][i] += a[k][i + 1]
                for k in range(n):
                    v[k][i] += v[k][i + 1]
                sub, us, vs = smith_normal_form([[a[r][c] for c in (i, i + 1)] for r in (i, i + 1)])
                _apply_block(a, u, v, i, sub, us, vs, m, n)
                changed = True
    return a, u, v


def _apply_block(a, u, v, i, sub, us, vs, m, n):
    rows = (i, i + 1)
    cols = (i, i + 1)
    new_rows = {}
    for ri, r in enumerate(rows):
        new_a = [0] * n
        new_u = [0] * m
        for rj, r2 in enumerate(rows):
            for k in range(n):
                new_a[k] += us[ri][rj] * a[r2][k]
            for k in range(m):
                new_u[k] += us[ri][rj] * u[r2][k]
        new_rows[r] = (new_a, new_u)
    for r, (na, nu) in new_rows.items():
        a[r] = na
        u[r] = nu
    new_cols = {}
    for ci, c in enumerate(cols):
        new_ac = [0] * m
        new_vc = [0] * n
        for cj, c2 in enumerate(cols):
            for k in range(m):
                new_ac[k] += a[k][c2] * vs[cj][ci]
            for k in range(n):
                new_vc[k] += v[k][c2] * vs[cj][ci]
        new_cols[c] = (new_ac, new_vc)
    for c, (nac, nvc) in new_cols.items():
        for k in range(m):
            a[k][c] = nac[k]
        for k in range(n):
            v[k][c] = nvc[k]


def integer_kernel(matrix: list[list[int]]) -> list[list[int]]:
    """Basis of {x : A x = 0} over the integers (column vectors as rows)."""
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    s, _, v = smith_normal_form(matrix)
    rank = sum(1 for i in range(min(m, n)) if s[i][i] != 0)
    return [[v[r][c] for r in range(n)] for c in range(rank, n)]


def solve_2x2(a: int, b: int, c: int, d: int, e: int, f: int) -> tuple[Fraction, Fraction] | None:
    """Solve (a b; c d) (x, y) = (e, f) over the rationals."""
    det = a * d - b * c
    if det == 0:
        return None
    return Fraction(e * d - b * f, det), Fraction(a * f - e * c, det)
