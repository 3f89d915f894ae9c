"""Small exact linear-algebra helpers (integers, rationals, GF(2))."""

from fractions import Fraction


def determinant(matrix):
    """Integer determinant by fraction-free Bareiss elimination."""
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def leading_minors(matrix):
    n = len(matrix)
    return [determinant([row[:i] for row in matrix[:i]]) for i in range(1, n + 1)]


def solve(matrix, rhs):
    """Solve matrix @ x = rhs exactly over the rationals (square, invertible)."""
    n = len(matrix)
    a = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        row = [v / p for v in a[col]]
        a[col] = row
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], row)]
    return [a[i][n] for i in range(n)]


def ldl(matrix):
    """Return (L, D) with matrix = L diag(D) L^T, L unit lower triangular.

    Only valid for positive definite input (no pivoting).
    """
    n = len(matrix)
    L = [[Fraction(0)] * n for _ in range(n)]
    D = [Fraction(0)] * n
    for j in range(n):
        s = Fraction(matrix[j][j]) - sum(L[j][k] * L[j][k] * D[k] for k in range(j))
        D[j] = s
        L[j][j] = Fraction(1)
        for i in range(j + 1, n):
            t = Fraction(matrix[i][j]) - sum(L[i][k] * L[j][k] * D[k] for k in range(j))
            L[i][j] = t / s
    return L, D


def gf2_solve_all(matrix, rhs):
    """All 0/1 solutions of matrix @ x = rhs over GF(2), as tuples."""
    n = len(matrix[0]) if matrix else 0
    rows = []
    for row, b in zip(matrix, rhs):
        bits = 0
        for j, v in enumerate(row):
            if v % 2:
                bits |= 1 << j
        rows.append([bits, b % 2])
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][0] >> col & 1), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][0] >> col & 1:
                rows[i] = [rows[i][0] ^ rows[r][0], rows[i][1] ^ rows[r][1]]
        pivots.append(col)
        r += 1
    if any(bits == 0 and b for bits, b in rows[r:]):
        return []
    free = [c for c in range(n) if c not in pivots]
    out = []
    for mask in range(1 << len(free)):
        x = [0] * n
        for t, c in enumerate(free):
            x[c] = mask >> t & 1
        for i, pc in enumerate(pivots):
            bits, b = rows[i]
            val = b
            for c in free:
                if bits >> c & 1:
                    val ^= x[c]
            x[pc] = val
        out.append(tuple(x))
    return sorted(out)


def gf2_rank(vectors):
    """Rank of a list of int bitmasks over GF(2)."""
    basis = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top in basis:
                v ^= basis[top]
            else:
                basis[top] = v
                break
    return len(basis)
