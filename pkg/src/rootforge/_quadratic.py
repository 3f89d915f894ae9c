"""Exact enumeration of integer points in sublevel sets of a positive quadratic.

The function is q(x) = (x^T A x - l.x) / 2 with A positive definite.  Writing
c = A^{-1} l / 2, q(x) <= n is the ellipsoid (x-c)^T A (x-c) <= 2n + c^T A c.
Coordinates are fixed one at a time using an exact LDL^T factorisation, so
each coordinate ranges over an explicit integer interval.
"""

from fractions import Fraction
from math import floor

from ._linalg import ldl, solve


class QuadraticSublevel:
    def __init__(self, A, lin, order=None):
        self.n = len(A)
        self.A = [list(map(int, row)) for row in A]
        self.lin = list(map(int, lin))
        # order[i] = original index placed at position i; the last position
        # is enumerated first.
        self.order = list(order) if order is not None else list(range(self.n))
        p = self.order
        Ap = [[self.A[p[i]][p[j]] for j in range(self.n)] for i in range(self.n)]
        self.L, self.D = ldl(Ap) if self.n else ([], [])
        if self.n:
            c = solve(self.A, [Fraction(v, 2) for v in self.lin])
        else:
            c = []
        self.center = [c[p[i]] for i in range(self.n)]
        self.offset = sum(
            self.center[i] * Ap[i][j] * self.center[j]
            for i in range(self.n)
            for j in range(self.n)
        )

    def value(self, x):
        A = self.A
        n = self.n
        quad = sum(A[i][j] * x[i] * x[j] for i in range(n) for j in range(n))
        return (quad - sum(a * b for a, b in zip(self.lin, x))) // 2

    def real_minimum(self):
        return -self.offset / 2

    def points(self, bound, nonneg=False):
        """Yield every integer x (original coordinates) with q(x) <= bound."""
        n = self.n
        radius = 2 * Fraction(bound) + self.offset
        if n == 0:
            if radius >= 0:
                yield ()
            return
        if radius < 0:
            return
        L, D, c, p = self.L, self.D, self.center, self.order
        y = [0] * n  # permuted coordinates

        def rec(i, rem):
            mu = c[i] - sum(L[j][i] * (y[j] - c[j]) for j in range(i + 1, n))
            d = D[i]
            start = floor(mu)
            t = start
            while True:
                if nonneg and t < 0:
                    break
                r = rem - d * (t - mu) * (t - mu)
                if r < 0:
                    break
                y[i] = t
                if i == 0:
                    yield tuple(_unpermute(y, p))
                else:
                    yield from rec(i - 1, r)
                t -= 1
            t = max(start + 1, 0) if nonneg else start + 1
            while True:
                r = rem - d * (t - mu) * (t - mu)
                if r < 0:
                    break
                y[i] = t
                if i == 0:
                    yield tuple(_unpermute(y, p))
                else:
                    yield from rec(i - 1, r)
                t += 1

        yield from rec(n - 1, radius)


def _unpermute(y, p):
    x = [0] * len(y)
    for i, orig in enumerate(p):
        x[orig] = y[i]
    return x
