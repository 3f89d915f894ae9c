"""Graded roots, symmetric graded roots and monotone roots.

A root is stored by its finite part: a list of vertex degrees and a parent
pointer per vertex (the parent sits two degrees lower).  Exactly one vertex,
the bottom, has no parent; below it the infinite stem continues implicitly,
one vertex per degree.  A symmetric root also carries its reflection as a
vertex permutation.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import errors


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def _same_coset(a, b):
    d = (a - b) / 2
    return d.denominator == 1


class GradedRoot:
    def __init__(self, degrees, parents, validate=True):
        self.degrees = tuple(_frac(d) for d in degrees)
        self.parents = tuple(parents)
        kids = [[] for _ in self.degrees]
        for v, p in enumerate(self.parents):
            if p is not None:
                kids[p].append(v)
        self.children = tuple(tuple(sorted(k, key=lambda u: (self.degrees[u], u))) for k in kids)
        if validate:
            self._validate()

    def _validate(self):
        n = len(self.degrees)
        if n == 0:
            raise errors.InvalidRoot("a root needs at least one vertex")
        bottoms = [v for v, p in enumerate(self.parents) if p is None]
        if len(bottoms) != 1:
            raise errors.InvalidRoot(f"expected one bottom vertex, found {len(bottoms)}")
        b = bottoms[0]
        for v, p in enumerate(self.parents):
            if p is None:
                continue
            if not 0 <= p < n:
                raise errors.InvalidRoot(f"vertex {v} has an invalid parent")
            if self.degrees[v] != self.degrees[p] + 2:
                raise errors.InvalidRoot(f"edge {v}-{p} does not change degree by 2")
        for v in range(n):
            if not _same_coset(self.degrees[v], self.degrees[b]):
                raise errors.ParityMismatch("degrees do not lie in one coset of 2Z")
        # every vertex must reach the bottom (rules out parent cycles)
        for v in range(n):
            seen = 0
            u = v
            while self.parents[u] is not None:
                u = self.parents[u]
                seen += 1
                if seen > n:
                    raise errors.InvalidRoot("parent pointers contain a cycle")

    @property
    def n(self):
        return len(self.degrees)

    @property
    def bottom(self):
        return next(v for v, p in enumerate(self.parents) if p is None)

    @property
    def top_degree(self):
        return max(self.degrees)

    def leaves(self):
        return [v for v in range(self.n) if not self.children[v]]

    def count_at(self, degree):
        """Number of vertices of the infinite root at a degree."""
        degree = _frac(degree)
        b = self.degrees[self.bottom]
        if not _same_coset(degree, b):
            return 0
        if degree < b:
            return 1
        return sum(1 for d in self.degrees if d == degree)

    def degree_counts(self, low):
        """Counts at every degree from the top down to ``low`` (inclusive)."""
        out = {}
        d = self.top_degree
        while d >= low:
            out[d] = self.count_at(d)
            d -= 2
        return out

    def ancestors(self, v):
        out = [v]
        while self.parents[out[-1]] is not None:
            out.append(self.parents[out[-1]])
        return out

    def ancestor_at(self, v, degree):
        """The vertex below v at ``degree`` (None if it lies in the implicit stem)."""
        while self.degrees[v] > degree:
            p = self.parents[v]
            if p is None:
                return None
            v = p
        return v

    def meet_degree(self, u, v):
        """Degree of the highest common vertex below u and v."""
        au = set(self.ancestors(u))
        for w in self.ancestors(v):
            if w in au:
                return self.degrees[w]
        raise errors.InvalidRoot("vertices do not share a bottom")

    def subtree_max(self):
        """Maximal leaf degree in each vertex's upward subtree."""
        best = list(self.degrees)
        for v in sorted(range(self.n), key=lambda u: -self.degrees[u]):
            p = self.parents[v]
            if p is not None and best[v] > best[p]:
                best[p] = best[v]
        return best

    def canonical(self):
        return _canon(self, None)


def _canon(root, invariant):
    memo = {}
    order = sorted(range(root.n), key=lambda u: -root.degrees[u])
    for v in order:
        kids = sorted(memo[c] for c in root.children[v])
        flag = bool(invariant[v]) if invariant is not None else False
        memo[v] = (str(root.degrees[v]), flag, tuple(kids))
    # normalise away stem vertices below the first branching
    v = root.bottom
    while len(root.children[v]) == 1 and (invariant is None or invariant[root.children[v][0]]):
        v = root.children[v][0]
    return memo[v]


class SymmetricGradedRoot(GradedRoot):
    def __init__(self, degrees, parents, involution, meta=None, validate=True):
        self.involution = tuple(involution)
        self.meta = dict(meta or {})
        super().__init__(degrees, parents, validate=validate)
        if validate:
            self._validate_symmetry()

    def _validate_symmetry(self):
        J = self.involution
        n = self.n
        if sorted(J) != list(range(n)):
            raise errors.NotSymmetric("involution is not a permutation")
        for v in range(n):
            if J[J[v]] != v:
                raise errors.NotSymmetric("involution does not square to the identity")
            if self.degrees[J[v]] != self.degrees[v]:
                raise errors.NotSymmetric("involution does not preserve degree")
            p = self.parents[v]
            q = self.parents[J[v]]
            if (p is None) != (q is None) or (p is not None and J[p] != q):
                raise errors.NotSymmetric("involution does not preserve edges")
        fixed = {}
        for v in range(n):
            if J[v] == v:
                d = self.degrees[v]
                if d in fixed:
                    raise errors.NotSymmetric(f"two invariant vertices at degree {d}")
                fixed[d] = v

    def is_invariant(self, v):
        return self.involution[v] == v

    def uppermost_invariant(self):
        inv = [v for v in range(self.n) if self.involution[v] == v]
        return max(inv, key=lambda v: self.degrees[v])

    def stem(self):
        """Invariant vertices from the uppermost one down to the bottom."""
        return self.ancestors(self.uppermost_invariant())

    def orbit_count_at(self, degree):
        degree = _frac(degree)
        b = self.degrees[self.bottom]
        if not _same_coset(degree, b):
            return 0
        if degree < b:
            return 1
        vs = [v for v in range(self.n) if self.degrees[v] == degree]
        return len({min(v, self.involution[v]) for v in vs})

    def canonical(self):
        return _canon(self, [self.involution[v] == v for v in range(self.n)])

    def is_isomorphic(self, other):
        return self.canonical() == other.canonical()

    def trimmed(self):
        """Drop stored stem vertices below the lowest branching point."""
        v = self.bottom
        while len(self.children[v]) == 1 and self.is_invariant(self.children[v][0]):
            v = self.children[v][0]
        keep = [u for u in range(self.n) if self.degrees[u] >= self.degrees[v]]
        # vertices above the new bottom all descend through it
        index = {u: i for i, u in enumerate(keep)}
        parents = []
        for u in keep:
            parents.append(None if u == v else index[self.parents[u]])
        inv = [index[self.involution[u]] for u in keep]
        return SymmetricGradedRoot([self.degrees[u] for u in keep], parents, inv, self.meta)


def pure_stem(top):
    return SymmetricGradedRoot([top], [None], [0])


def root_from_levels(levels, parent_of, mirror, degree_of_level, meta=None):
    """Assemble a symmetric root from sublevel-set components.

    ``levels`` is a list of (level, [component ids]) in increasing level
    order; ``parent_of`` maps a component to the component one level up that
    contains it; ``mirror`` maps each component to its reflection.  The last
    level must consist of a single component, which becomes the bottom.
    """
    ids = {}
    degrees = []
    for lev, comps in levels:
        for c in comps:
            ids[c] = len(degrees)
            degrees.append(degree_of_level(lev))
    last_level, last = levels[-1]
    if len(last) != 1:
        raise errors.InvalidRoot("the last level must be a single component")
    parents = [None] * len(degrees)
    for lev, comps in levels[:-1]:
        for c in comps:
            parents[ids[c]] = ids[parent_of[c]]
    inv = [None] * len(degrees)
    for c, i in ids.items():
        inv[i] = ids[mirror[c]]
    return SymmetricGradedRoot(degrees, parents, inv, meta)


# ---------------------------------------------------------------- layout


def _left_split(R, v, exclude=None):
    """Left representatives of the J-paired children of v (excluding a stem child)."""
    kids = [c for c in R.children[v] if c != exclude]
    smax = R._smax
    left = []
    for c in kids:
        if R.involution[c] == c:
            raise errors.NotSymmetric("invariant vertex off the stem")
        if c < R.involution[c]:
            left.append(c)
    return sorted(left, key=lambda u: (smax[u], u))


def _subtree_leaves(R, u):
    smax = R._smax
    out = []
    stack = [u]
    while stack:
        w = stack.pop()
        kids = sorted(R.children[w], key=lambda x: (smax[x], x))
        if not kids:
            out.append(w)
        else:
            stack.extend(reversed(kids))
    return out


@dataclass
class Cluster:
    base: int
    left_leaves: List[int]  # nicely ordered, the tip is last

    @property
    def trivial(self):
        return not self.left_leaves

    @property
    def tip(self):
        return self.left_leaves[-1] if self.left_leaves else None


def clusters(R):
    """Clusters along the stem, from the uppermost invariant vertex downward."""
    R._smax = R.subtree_max()
    stem = R.stem()
    out = []
    prev = None
    for b in stem:
        leaves = []
        for c in _left_split(R, b, exclude=prev):
            leaves.extend(_subtree_leaves(R, c))
        out.append(Cluster(b, leaves))
        prev = b
    return out


def nice_leaf_order(R):
    """Leaves in a nicely ordered planar presentation.

    Clusters lower on the stem sit further from the center line and every
    cluster's tip is its innermost leaf.  Returns (left, middle) where middle
    is the invariant leaf or None; the full order is left + [middle] +
    mirror(reversed(left)).
    """
    cl = clusters(R)
    left = []
    for c in reversed(cl):
        left.extend(c.left_leaves)
    g = R.uppermost_invariant()
    middle = g if not R.children[g] else None
    return left, middle


# ---------------------------------------------------------------- monotone


@dataclass(frozen=True)
class MonotoneRoot:
    pairs: Tuple[Tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        pairs = tuple((_frac(h), _frac(r)) for h, r in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if not pairs:
            raise errors.NonMonotoneParams("a monotone root needs at least one pair")
        base = pairs[0][0]
        for h, r in pairs:
            if not (_same_coset(h, base) and _same_coset(r, base)):
                raise errors.ParityMismatch("parameters must lie in one coset of 2Z")
        for (h1, r1), (h2, r2) in zip(pairs, pairs[1:]):
            if not h1 > h2:
                raise errors.NonMonotoneParams("h values must strictly decrease")
            if not r1 < r2:
                raise errors.NonMonotoneParams("r values must strictly increase")
        if not pairs[-1][0] >= pairs[-1][1]:
            raise errors.NonMonotoneParams("need h_n >= r_n")

    @property
    def n(self):
        return len(self.pairs)

    @classmethod
    def of(cls, *flat):
        if len(flat) % 2:
            raise errors.NonMonotoneParams("need an even number of parameters")
        return cls(tuple((flat[i], flat[i + 1]) for i in range(0, len(flat), 2)))

    def __str__(self):
        return "M(" + "; ".join(f"{_fmt(h)},{_fmt(r)}" for h, r in self.pairs) + ")"


def _fmt(x):
    x = _frac(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def build_monotone(params):
    if not isinstance(params, MonotoneRoot):
        params = MonotoneRoot(tuple(params))
    pairs = params.pairs
    r_lo = pairs[0][1]
    r_top = pairs[-1][1]
    degrees = []
    parents = []
    inv = []
    stem_at = {}
    d = r_lo
    prev = None
    while d <= r_top:
        i = len(degrees)
        degrees.append(d)
        parents.append(prev)
        inv.append(i)
        stem_at[d] = i
        prev = i
        d += 2
    for h, r in pairs:
        if h == r:
            continue  # the invariant leaf is the stem top itself
        chains = []
        for _side in range(2):
            prev = stem_at[r]
            chain = []
            d = r + 2
            while d <= h:
                i = len(degrees)
                degrees.append(d)
                parents.append(prev)
                inv.append(None)
                chain.append(i)
                prev = i
                d += 2
            chains.append(chain)
        for a, b in zip(*chains):
            inv[a] = b
            inv[b] = a
    return SymmetricGradedRoot(degrees, parents, inv)


def monotone_subroot(R):
    """Greedy walk down the stem collecting cluster tips."""
    if not isinstance(R, SymmetricGradedRoot):
        raise errors.NotSymmetric("monotone_subroot needs a symmetric root")
    cl = clusters(R)
    chosen = []  # (h, r) in order of addition (top of stem first)
    best = None
    for i, c in enumerate(cl):
        deg_b = R.degrees[c.base]
        if i == 0:
            if c.trivial:
                chosen.append((deg_b, deg_b))
                best = deg_b
            else:
                h = R.degrees[c.tip]
                chosen.append((h, deg_b))
                best = h
            continue
        if c.trivial:
            continue
        h = R.degrees[c.tip]
        if h > best:
            chosen.append((h, deg_b))
            best = h
    return MonotoneRoot(tuple(reversed(chosen)))


def selected_tips(R):
    """Left-half leaves chosen by the greedy walk (top of stem first)."""
    cl = clusters(R)
    out = []
    best = None
    for i, c in enumerate(cl):
        if i == 0:
            out.append(c.tip if not c.trivial else c.base)
            best = R.degrees[out[-1]]
            continue
        if not c.trivial and R.degrees[c.tip] > best:
            out.append(c.tip)
            best = R.degrees[c.tip]
    return out


@dataclass(frozen=True)
class MonotoneParams:
    d: Tuple[Fraction, ...]
    mu_bar: Tuple[Fraction, ...]
    delta_tilde: Tuple[Fraction, ...]
    n: int

    @property
    def projective(self):
        return self.n == 1

    @property
    def two_delta_tilde(self):
        return tuple(2 * x for x in self.delta_tilde)


def monotone_params(P):
    d = tuple(h + 2 for h, _ in P.pairs)
    mu = tuple(-(r + 2) / 2 for _, r in P.pairs)
    delta = tuple((h - r) / 2 for h, r in P.pairs)
    return MonotoneParams(d, mu, delta, P.n)


def root_correction_terms(R):
    """(d-bar, d-underline) read off a symmetric root."""
    if not isinstance(R, SymmetricGradedRoot):
        raise errors.NotSymmetric("need a symmetric root")
    return R.top_degree + 2, R.degrees[R.uppermost_invariant()] + 2


# ---------------------------------------------------------------- folding


@dataclass
class HFIRootDiagram:
    """Folded picture of the involutive homology of a symmetric root.

    ``coker`` is the half-root of J-orbits.  ``ker`` has the same orbits with
    degrees raised by one and no edge from an off-stem orbit to the stem;
    ``ker_parents`` is None for the bottom of each piece.  ``q_map`` sends
    each ker stem orbit to the coker orbit it covers.
    """

    orbits: List[Tuple[int, ...]]
    coker: GradedRoot
    ker_degrees: List[Fraction]
    ker_parents: List[Optional[int]]
    ker_stem: List[bool]
    q_map: Dict[int, int] = field(default_factory=dict)

    def per_degree(self, low):
        """dim of ker[-1] + coker at each degree from the top down to ``low``."""
        top = max(max(self.ker_degrees), self.coker.top_degree)
        out = {}
        d = top
        cb = self.coker.degrees[self.coker.bottom]
        kb = cb + 1
        while d >= low:
            c = self.coker.count_at(d)
            k = sum(1 for x in self.ker_degrees if x == d)
            if d < kb and _same_coset(d, kb):
                k = 1
            out[d] = c + k
            d -= 1
        return out


def hfi_root_diagram(R):
    if not isinstance(R, SymmetricGradedRoot):
        raise errors.NotSymmetric("need a symmetric root")
    J = R.involution
    reps = sorted({min(v, J[v]) for v in range(R.n)}, key=lambda v: (R.degrees[v], v))
    idx = {}
    orbits = []
    for i, v in enumerate(reps):
        orb = tuple(sorted({v, J[v]}))
        orbits.append(orb)
        for u in orb:
            idx[u] = i
    coker_par = []
    ker_par = []
    ker_stem = []
    for orb in orbits:
        v = orb[0]
        p = R.parents[v]
        pi = None if p is None else idx[p]
        coker_par.append(pi)
        stem = len(orb) == 1
        ker_stem.append(stem)
        if p is not None and not stem and J[p] == p:
            ker_par.append(None)
        else:
            ker_par.append(pi)
    coker = GradedRoot([R.degrees[o[0]] for o in orbits], coker_par)
    kdeg = [R.degrees[o[0]] + 1 for o in orbits]
    q_map = {i: i for i, s in enumerate(ker_stem) if s}
    return HFIRootDiagram(orbits, coker, kdeg, ker_par, ker_stem, q_map)


# ------------------------------------------------------------ F[U] modules


def forest_module(degrees, parents, infinite_bottoms=()):
    """Decompose the lattice homology of a graded forest.

    U sends a vertex to its parent, or to zero at a finite bottom; bottoms
    listed in ``infinite_bottoms`` continue as infinite towers.  Returns
    (free tops, [(top, length), ...]) by the elder rule: where branches
    meet, the branch with the highest leaf survives.
    """
    n = len(degrees)
    kids = [[] for _ in range(n)]
    for v, p in enumerate(parents):
        if p is not None:
            kids[p].append(v)
    free = []
    torsion = []
    # surviving bar top for each vertex, processed from the top down
    top = {}
    for v in sorted(range(n), key=lambda u: -degrees[u]):
        if not kids[v]:
            top[v] = degrees[v]
            continue
        bars = sorted((top[c] for c in kids[v]), reverse=True)
        for t in bars[1:]:
            torsion.append((t, int((t - degrees[v]) / 2)))
        top[v] = bars[0]
    for r in range(n):
        if parents[r] is not None:
            continue
        if r in infinite_bottoms:
            free.append(top[r])
        else:
            torsion.append((top[r], int((top[r] - degrees[r]) / 2) + 1))
    return sorted(free, reverse=True), sorted(torsion, key=lambda t: (-t[0], -t[1]))
