"""Plumbing trees, intersection forms and self-conjugate spin^c structures.

A plumbing tree is stored as a tuple of integer vertex weights plus a tuple
of edges.  The intersection pairing has the weights on the diagonal and a 1
for every edge.  Star-shaped graphs for Seifert fibered spaces are built
from negative continued fraction expansions.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Tuple

from . import errors
from ._linalg import determinant, gf2_solve_all, leading_minors
from ._quadratic import QuadraticSublevel


@dataclass(frozen=True)
class WeightedTree:
    weights: Tuple[int, ...]
    edges: Tuple[Tuple[int, int], ...]

    @property
    def n(self):
        return len(self.weights)

    def neighbors(self, v):
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return sorted(out)

    def degree(self, v):
        return sum(1 for e in self.edges if v in e)

    def adjacency(self):
        adj = [[] for _ in range(self.n)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return [sorted(x) for x in adj]


def build_tree(weights, edges):
    """Validate and build a plumbing tree.  The empty tree stands for S^3."""
    weights = tuple(int(w) for w in weights)
    n = len(weights)
    seen = set()
    norm = []
    for e in edges:
        a, b = (int(e[0]), int(e[1]))
        if not (0 <= a < n and 0 <= b < n):
            raise errors.NotATree(f"edge {e} has an index out of range")
        if a == b:
            raise errors.SelfLoop(f"self-loop at vertex {a}")
        key = (min(a, b), max(a, b))
        if key in seen:
            raise errors.DuplicateEdge(f"edge {key} listed twice")
        seen.add(key)
        norm.append(key)
    if n and len(norm) != n - 1:
        raise errors.NotATree(f"{n} vertices need {n - 1} edges, got {len(norm)}")
    # connectivity (n - 1 edges + connected => acyclic)
    if n:
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in norm:
            ra, rb = find(a), find(b)
            if ra == rb:
                raise errors.NotATree("graph contains a cycle")
            parent[ra] = rb
        if len({find(v) for v in range(n)}) != 1:
            raise errors.NotATree("graph is disconnected")
    elif norm:
        raise errors.NotATree("edges given for an empty vertex set")
    return WeightedTree(weights, tuple(norm))


@dataclass(frozen=True)
class IntersectionForm:
    matrix: Tuple[Tuple[int, ...], ...]

    @property
    def n(self):
        return len(self.matrix)

    def pair(self, x, y):
        m = self.matrix
        return sum(x[i] * m[i][j] * y[j] for i in range(len(x)) for j in range(len(y)))

    def apply(self, x):
        return tuple(sum(row[j] * x[j] for j in range(len(x))) for row in self.matrix)

    def determinant(self):
        return determinant(self.matrix)

    def negated(self):
        return [[-v for v in row] for row in self.matrix]


def intersection_form(T):
    n = T.n
    m = [[0] * n for _ in range(n)]
    for i, w in enumerate(T.weights):
        m[i][i] = w
    for a, b in T.edges:
        m[a][b] = m[b][a] = 1
    return IntersectionForm(tuple(tuple(r) for r in m))


def _matrix_of(Q):
    return Q.matrix if isinstance(Q, IntersectionForm) else Q


def is_negative_definite(Q):
    """All leading principal minors of -Q positive (exact)."""
    m = _matrix_of(Q)
    if len(m) == 0:
        return True
    neg = [[-v for v in row] for row in m]
    return all(d > 0 for d in leading_minors(neg))


def neg_continued_fraction(a, b):
    """[k1,...,kr] with a/b = k1 - 1/(k2 - 1/(... - 1/kr)), each kj >= 2."""
    if not (isinstance(a, int) and isinstance(b, int)) or not (0 < b < a) or gcd(a, b) != 1:
        raise errors.InvalidFraction(f"need 0 < b < a with gcd 1, got a={a}, b={b}")
    out = []
    while b:
        k = -(-a // b)
        out.append(k)
        a, b = b, k * b - a
    return out


def evaluate_neg_continued_fraction(ks):
    val = Fraction(ks[-1])
    for k in reversed(ks[:-1]):
        val = k - 1 / val
    return val


@dataclass(frozen=True)
class SeifertData:
    e0: int
    fibers: Tuple[Tuple[int, int], ...]  # (a_i, b_i) with 0 < b_i < a_i

    def euler_number(self):
        return self.e0 + sum(Fraction(b, a) for a, b in self.fibers)


def seifert_graph(e0, fibers):
    """Star-shaped tree: center e0, one arm per (a, b) reading -[k1..kr]."""
    weights = [int(e0)]
    edges = []
    for a, b in fibers:
        prev = 0
        for k in neg_continued_fraction(a, b):
            weights.append(-k)
            edges.append((prev, len(weights) - 1))
            prev = len(weights) - 1
    return build_tree(weights, edges), SeifertData(int(e0), tuple((int(a), int(b)) for a, b in fibers))


def brieskorn_graph(*a):
    """Plumbing tree of the Brieskorn sphere Sigma(a1,...,an)."""
    if len(a) == 1 and isinstance(a[0], (tuple, list)):
        a = tuple(a[0])
    a = tuple(int(x) for x in a)
    if len(a) < 3:
        raise errors.InvalidFraction("a Brieskorn sphere needs at least three exponents")
    if any(x < 2 for x in a):
        raise errors.InvalidFraction("Brieskorn exponents must be at least 2")
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if gcd(a[i], a[j]) != 1:
                raise errors.NotCoprime(f"{a[i]} and {a[j]} are not coprime")
    total = 1
    for x in a:
        total *= x
    bs = [(-pow(total // x, -1, x)) % x for x in a]
    num = -1 - sum(b * (total // x) for b, x in zip(bs, a))
    if num % total:
        raise errors.NoSolution(f"no integral central weight for {a}")
    e0 = num // total
    if not all(0 < b < x for b, x in zip(bs, a)):
        raise errors.NoSolution(f"fiber invariants out of range for {a}")
    if e0 + sum(Fraction(b, x) for b, x in zip(bs, a)) != Fraction(-1, total):
        raise errors.NoSolution("Seifert identity check failed")
    return seifert_graph(e0, list(zip(a, bs)))


@dataclass(frozen=True)
class CharVector:
    values: Tuple[int, ...]  # k(v_i)
    coords: Optional[Tuple[int, ...]] = None  # coordinates in L when k lies in L


@dataclass(frozen=True)
class SpinCOrbit:
    representative: CharVector
    wu: Tuple[int, ...]
    label: str


def is_characteristic(T, values):
    return len(values) == T.n and all((k - m) % 2 == 0 for k, m in zip(values, T.weights))


def canonical_class(T):
    """K with K(v) = -m(v) - 2."""
    return CharVector(tuple(-m - 2 for m in T.weights))


def _require_negative_definite(T):
    if not is_negative_definite(intersection_form(T)):
        raise errors.NotNegativeDefinite("intersection form is not negative definite")


def orbit_from_wu(T, wu):
    Q = intersection_form(T)
    wu = tuple(int(x) for x in wu)
    values = Q.apply(wu)
    if not is_characteristic(T, values):
        raise errors.OrbitMismatch("vector is not characteristic for this tree")
    return SpinCOrbit(CharVector(values, wu), wu, "".join(str(b % 2) for b in wu))


def self_conjugate_spinc(T):
    """One orbit per 0/1 solution of Q c = diag(Q) over GF(2)."""
    _require_negative_definite(T)
    Q = intersection_form(T)
    sols = gf2_solve_all([list(r) for r in Q.matrix], list(T.weights))
    return [orbit_from_wu(T, c) for c in sols]


def _check_orbit(T, s):
    if len(s.wu) != T.n or not is_characteristic(T, s.representative.values):
        raise errors.OrbitMismatch("spin^c orbit does not belong to this tree")
    if tuple(intersection_form(T).apply(s.wu)) != tuple(s.representative.values):
        raise errors.OrbitMismatch("representative does not match its Wu vector")


def k_square(T, s):
    Q = intersection_form(T)
    return Q.pair(s.wu, s.wu)


def signature(T):
    _require_negative_definite(T)
    return -T.n


def neumann_siebenmann(T, s):
    """mu-bar = (sign(G) - w^2) / 8."""
    _check_orbit(T, s)
    return Fraction(signature(T) - k_square(T, s), 8)


@dataclass(frozen=True)
class ARVerdict:
    verified: bool
    reasons: Tuple[str, ...]

    @property
    def reason(self):
        return "; ".join(self.reasons)

    def __bool__(self):
        return self.verified


def bad_vertices(T):
    return [v for v in range(T.n) if T.weights[v] > -T.degree(v)]


def is_star_shaped(T):
    return sum(1 for v in range(T.n) if T.degree(v) >= 3) <= 1


def passes_artin_test(T):
    """Rationality test: chi_K(x) >= 1 for every x > 0.

    Enumerates the finite region {x >= 0 : chi_K(x) <= 0} exactly.
    """
    if not is_negative_definite(intersection_form(T)):
        return False
    if T.n == 0:
        return True
    A = intersection_form(T).negated()
    K = canonical_class(T).values
    q = QuadraticSublevel(A, K, order=_leaf_first_order(T))
    for x in q.points(0, nonneg=True):
        if any(x):
            return False
    return True


def check_almost_rational(T, depth=20):
    _require_negative_definite(T)
    reasons = []
    if len(bad_vertices(T)) <= 1:
        reasons.append("at most one bad vertex")
    if is_star_shaped(T):
        reasons.append("star-shaped")
    if reasons:
        return ARVerdict(True, tuple(reasons))
    for v in range(T.n):
        for drop in range(depth + 1):
            w = list(T.weights)
            w[v] -= drop
            if passes_artin_test(WeightedTree(tuple(w), T.edges)):
                return ARVerdict(True, (f"rational after lowering vertex {v} to {w[v]}",))
    return ARVerdict(False, (f"undetermined with depth {depth}",))


def _leaf_first_order(T, root=None):
    """Postorder from a root (children before parents); root comes last."""
    if T.n == 0:
        return []
    adj = T.adjacency()
    if root is None:
        root = max(range(T.n), key=lambda v: (len(adj[v]), -v))
    order = []
    stack = [(root, None, False)]
    while stack:
        v, p, done = stack.pop()
        if done:
            order.append(v)
            continue
        stack.append((v, p, True))
        for u in adj[v]:
            if u != p:
                stack.append((u, v, False))
    return order


def tree_to_json(T):
    doc = {
        "vertices": [{"id": i, "weight": w} for i, w in enumerate(T.weights)],
        "edges": [list(e) for e in T.edges],
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def tree_from_json(text):
    try:
        doc = json.loads(text)
        verts = sorted(doc["vertices"], key=lambda v: v["id"])
        ids = [int(v["id"]) for v in verts]
        if ids != list(range(len(ids))):
            raise errors.NotATree("vertex ids must be dense from 0")
        weights = [int(v["weight"]) for v in verts]
        edges = [tuple(e) for e in doc["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise errors.UnsupportedFormat(f"bad graph JSON: {exc}") from exc
    return build_tree(weights, edges)
