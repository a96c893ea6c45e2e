"""Integer matrices: Hermite and Smith normal forms, kernels of maps to finite groups.

Matrices are lists of rows of Python ints. Row vectors act on the left, so a
homomorphism Z^m -> Z^k is an m x k matrix whose i-th row is the image of e_i.
"""

from __future__ import annotations

from typing import Sequence

IntMatrix = list[list[int]]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def copy_matrix(m: Sequence[Sequence[int]]) -> IntMatrix:
    return [list(map(int, row)) for row in m]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    if not a:
        return []
    cols = len(b[0]) if b else 0
    return [[sum(row[k] * b[k][j] for k in range(len(b))) for j in range(cols)] for row in a]


def vecmat(v: Sequence[int], m: Sequence[Sequence[int]], ncols: int | None = None) -> list[int]:
    if ncols is None:
        ncols = len(m[0]) if m else 0
    out = [0] * ncols
    for c, row in zip(v, m):
        if c:
            for j in range(ncols):
                out[j] += c * row[j]
    return out


def hnf(m: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    """Row-style Hermite normal form; zero rows are dropped.

    Pivots are positive, entries above a pivot are reduced into [0, pivot).
    The rows span the same lattice as the input rows.
    """
    a = copy_matrix(m)
    if ncols is None:
        ncols = len(a[0]) if a else 0
    rows = [r for r in a if any(r)]
    out: IntMatrix = []
    for col in range(ncols):
        live = [r for r in rows if r[col] != 0]
        if not live:
            continue
        rest = [r for r in rows if r[col] == 0]
        # gcd-reduce the column among the live rows
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                r2 = [x - q * y for x, y in zip(r, piv)]
                if r2[col] != 0:
                    nxt.append(r2)
                elif any(r2):
                    rest.append(r2)
            live = nxt
        piv = live[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        rows = rest
    # reduce above pivots
    for i in range(len(out)):
        col = next(j for j, x in enumerate(out[i]) if x)
        pv = out[i][col]
        for k in range(i):
            q = out[k][col] // pv
            if q:
                out[k] = [x - q * y for x, y in zip(out[k], out[i])]
    return out


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[list[int], IntMatrix, IntMatrix]:
    """Return (diag, U, V) with U*M*V diagonal, diag[i] | diag[i+1], U and V unimodular.

    ``diag`` has min(rows, cols) entries, nonnegative, zeros trailing.
    """
    a = copy_matrix(m)
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u = identity(nr)
    v = identity(nc)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in a:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    t = 0
    while t < min(nr, nc):
        # pick the smallest nonzero entry in the remaining block as pivot
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, q)
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # pivot must divide the remaining block
            bad = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if a[i][j] % a[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    diag = [a[i][i] for i in range(min(nr, nc))]
    return diag, u, v


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    return smith_normal_form(m)[0]


def kernel_lattice(images: Sequence[Sequence[int]], moduli: Sequence[int]) -> IntMatrix:
    """Basis (HNF rows) of {x in Z^m : sum x_i * images[i] == 0 in prod Z/moduli}.

    ``images`` is m x k. The result is an m x m matrix of full rank.
    """
    m = len(images)
    k = len(moduli)
    rows: IntMatrix = []
    for i in range(m):
        rows.append([images[i][j] % moduli[j] for j in range(k)] + [int(i == c) for c in range(m)])
    for j in range(k):
        rows.append([moduli[j] * int(j == c) for c in range(k)] + [0] * m)
    h = hnf(rows, k + m)
    ker = [r[k:] for r in h if not any(r[:k])]
    return hnf(ker, m)


def lattice_intersection(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], n: int) -> IntMatrix:
    """HNF basis of the intersection of two lattices in Z^n."""
    # rows [A | A] and [B | 0]: a zero left block means uA = -wB, read off uA
    rows = [list(r) + list(r) for r in a] + [list(r) + [0] * n for r in b]
    h = hnf(rows, 2 * n)
    return hnf([r[n:] for r in h if not any(r[:n])], n)


def solve_mod_group(images: Sequence[Sequence[int]], moduli: Sequence[int], target: Sequence[int]) -> list[int] | None:
    """Find x in Z^m with x*images == target in prod Z/moduli, or None."""
    m = len(images)
    k = len(moduli)
    rows: IntMatrix = []
    for i in range(m):
        rows.append([images[i][j] % moduli[j] for j in range(k)] + [int(i == c) for c in range(m)])
    for j in range(k):
        rows.append([moduli[j] * int(j == c) for c in range(k)] + [0] * m)
    h = hnf(rows, k + m)
    # echelon solve on the first k columns
    resid = [target[j] % moduli[j] if moduli[j] else target[j] for j in range(k)]
    x = [0] * m
    for r in h:
        piv = next((j for j in range(k) if r[j]), None)
        if piv is None:
            break
        if resid[piv] % r[piv]:
            return None
        q = resid[piv] // r[piv]
        resid = [a - q * b for a, b in zip(resid, r[:k])]
        x = [a + q * b for a, b in zip(x, r[k:])]
    if any(resid[j] % moduli[j] if moduli[j] else resid[j] for j in range(k)):
        return None
    return x


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = copy_matrix(m)
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse_unimodular(m: Sequence[Sequence[int]]) -> IntMatrix:
    """Integer inverse of a square matrix with determinant +-1."""
    from fractions import Fraction

    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                c = a[i][col]
                a[i] = [x - c * y for x, y in zip(a[i], a[col])]
    out = [[x for x in row[n:]] for row in a]
    if any(x.denominator != 1 for row in out for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]
