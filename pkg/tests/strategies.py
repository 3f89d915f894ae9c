"""Hypothesis strategies for roots, monotone parameters and small plumbings."""

from hypothesis import strategies as st

from rootforge.graded_root import MonotoneRoot, SymmetricGradedRoot
from rootforge.plumbing import build_tree, is_negative_definite, intersection_form


def _shape(draw, depth, width):
    if depth == 0:
        return ()
    k = draw(st.integers(0, width))
    return tuple(_shape(draw, depth - 1, width) for _ in range(k))


@st.composite
def symmetric_roots(draw, max_stem=4, max_pairs=2, max_height=3, width=2, odd_coset=True):
    """Stem of invariant vertices with mirrored pairs of random trees attached."""
    offset = draw(st.sampled_from((0, 1))) if odd_coset else 0
    bottom = 2 * draw(st.integers(-5, 1)) + offset
    stem_len = draw(st.integers(1, max_stem))
    degrees, parents, inv = [], [], []
    stem = []
    prev = None
    for i in range(stem_len):
        degrees.append(bottom + 2 * i)
        parents.append(prev)
        inv.append(len(degrees) - 1)
        prev = len(degrees) - 1
        stem.append(prev)

    def attach(shape, parent):
        ids = []
        stack = [(shape, parent)]
        while stack:
            sh, par = stack.pop(0)
            v = len(degrees)
            degrees.append(degrees[par] + 2)
            parents.append(par)
            inv.append(None)
            ids.append(v)
            for child in sh:
                stack.append((child, v))
        return ids

    for s in stem:
        for _ in range(draw(st.integers(0, max_pairs))):
            height = draw(st.integers(0, max_height - 1))
            shape = _shape(draw, height, width)
            a = attach(shape, s)
            b = attach(shape, s)
            for x, y in zip(a, b):
                inv[x] = y
                inv[y] = x
    return SymmetricGradedRoot(degrees, parents, inv)


@st.composite
def monotone_params(draw, max_n=3, bound=12):
    """M(h_1, r_1; ...; h_n, r_n) with even entries of absolute value <= bound."""
    n = draw(st.integers(1, max_n))
    half = bound // 2
    rs = sorted(draw(st.sets(st.integers(-half, half), min_size=n, max_size=n)))
    lo = rs[-1]
    if half - lo + 1 < n:
        rs = [r - (n - (half - lo + 1)) for r in rs]
        lo = rs[-1]
    hs = sorted(draw(st.sets(st.integers(lo, half), min_size=n, max_size=n)), reverse=True)
    return MonotoneRoot(tuple((2 * h, 2 * r) for h, r in zip(hs, rs)))


@st.composite
def small_plumbings(draw, max_vertices=5):
    """Negative definite trees with small weights (rejection sampled)."""
    n = draw(st.integers(1, max_vertices))
    edges = [(draw(st.integers(0, v - 1)), v) for v in range(1, n)]
    weights = [draw(st.integers(-4, -1)) for _ in range(n)]
    T = build_tree(weights, edges)
    if not is_negative_definite(intersection_form(T)):
        weights = [min(w, -2) - (1 if T.degree(v) > 2 else 0) for v, w in enumerate(weights)]
        T = build_tree(weights, edges)
    return T


@st.composite
def small_seifert(draw, max_a=7, arms=3):
    """Star-shaped graphs with negative orbifold Euler number."""
    from math import gcd

    from rootforge.plumbing import seifert_graph

    e0 = draw(st.sampled_from((-1, -2)))
    fibers = []
    for _ in range(arms):
        a = draw(st.integers(2, max_a))
        b = draw(st.sampled_from([b for b in range(1, a) if gcd(a, b) == 1]))
        fibers.append((a, b))
    T, data = seifert_graph(e0, fibers)
    while data.euler_number() >= 0:
        e0 -= 1
        T, data = seifert_graph(e0, fibers)
    return T
