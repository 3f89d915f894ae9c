"""Free graded complexes over F2[U] with an involution.

Every complex built here is homogeneous: a nonzero matrix entry from
generator j to generator i is the monomial U^e whose exponent is forced by
the gradings.  We therefore store each map column as a frozenset of target
indices; the U-power of an entry is recovered from the gradings when
needed.  For the differential e = (gr(i) - gr(j) + 1) / 2, for a grading
preserving map e = (gr(i) - gr(j)) / 2.  Adding two entries between the same
pair of generators is symmetric difference of sets.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Tuple

from . import errors
from .graded_root import (
    SymmetricGradedRoot,
    build_monotone,
    forest_module,
    hfi_root_diagram,
    nice_leaf_order,
    selected_tips,
)


# ------------------------------------------------------------------ UPoly


class UPoly:
    """Polynomial in U over F2, stored as a frozen set of exponents."""

    __slots__ = ("exps",)

    def __init__(self, exps=()):
        acc = set()
        for e in exps:
            if e < 0:
                raise ValueError("negative exponent")
            acc ^= {int(e)}
        self.exps = frozenset(acc)

    @classmethod
    def monomial(cls, e):
        return cls((e,))

    def __add__(self, other):
        out = UPoly()
        out.exps = self.exps ^ other.exps
        return out

    __sub__ = __add__

    def __mul__(self, other):
        acc = set()
        for a in self.exps:
            for b in other.exps:
                acc ^= {a + b}
        out = UPoly()
        out.exps = frozenset(acc)
        return out

    def __eq__(self, other):
        return isinstance(other, UPoly) and self.exps == other.exps

    def __hash__(self):
        return hash(self.exps)

    def __bool__(self):
        return bool(self.exps)

    def is_monomial(self):
        return len(self.exps) == 1

    def valuation(self):
        return min(self.exps) if self.exps else None

    def degree(self):
        return max(self.exps) if self.exps else None

    def __repr__(self):
        if not self.exps:
            return "0"
        return " + ".join("1" if e == 0 else ("U" if e == 1 else f"U^{e}") for e in sorted(self.exps))


def _exp(num):
    """Check that a U-exponent is a nonnegative integer."""
    if num.denominator != 1 or num < 0:
        return None
    return int(num)


# ------------------------------------------------------------- complexes


def _as_sets(cols, n):
    return tuple(frozenset(cols.get(j, ())) if isinstance(cols, dict) else frozenset(cols[j]) for j in range(n))


class FreeComplex:
    def __init__(self, names, gradings, diff, validate=True):
        self.names = tuple(names)
        self.gradings = tuple(Fraction(g) for g in gradings)
        self.diff = _as_sets(diff, len(self.names))
        if validate:
            self.check_homogeneous()
            self.check_square_zero()

    @property
    def n(self):
        return len(self.names)

    def diff_exponent(self, j, i):
        return _exp((self.gradings[i] - self.gradings[j] + 1) / 2)

    def entry(self, i, j):
        """The matrix entry of the differential from generator j to i."""
        if i in self.diff[j]:
            return UPoly.monomial(self.diff_exponent(j, i))
        return UPoly()

    def check_homogeneous(self):
        for j, col in enumerate(self.diff):
            for i in col:
                if self.diff_exponent(j, i) is None:
                    raise errors.GradingViolation(
                        f"differential entry {self.names[j]} -> {self.names[i]} is not homogeneous"
                    )

    def apply(self, cols, vec):
        out = set()
        for j in vec:
            out ^= cols[j]
        return frozenset(out)

    def boundary(self, vec):
        return self.apply(self.diff, vec)

    def check_square_zero(self):
        for j in range(self.n):
            if self.boundary(self.diff[j]):
                raise errors.NotAComplex(f"d^2 is nonzero on {self.names[j]}")

    def coset(self):
        return self.gradings[0] % 2 if self.n else Fraction(0)


class IotaComplex(FreeComplex):
    def __init__(self, names, gradings, diff, iota, validate=True, strict=True):
        super().__init__(names, gradings, diff, validate=validate)
        self.iota = _as_sets(iota, self.n)
        self.strict = strict
        if validate:
            self.check_iota()

    def iota_exponent(self, j, i):
        return _exp((self.gradings[i] - self.gradings[j]) / 2)

    def check_iota(self):
        for j, col in enumerate(self.iota):
            for i in col:
                if self.iota_exponent(j, i) is None:
                    raise errors.GradingViolation(
                        f"involution entry {self.names[j]} -> {self.names[i]} changes grading"
                    )
        for j in range(self.n):
            if self.apply(self.iota, self.diff[j]) != self.boundary(self.iota[j]):
                raise errors.NotEquivariant(f"iota does not commute with d on {self.names[j]}")
        if self.strict:
            for j in range(self.n):
                if self.apply(self.iota, self.iota[j]) != frozenset([j]):
                    raise errors.NotAnInvolution(f"iota^2 is not the identity on {self.names[j]}")

    def plain(self):
        return FreeComplex(self.names, self.gradings, self.diff, validate=False)


@dataclass
class ConeComplex:
    """Mapping cone of Q(1 + iota); ``q_map`` sends each plain copy to its Q copy."""

    complex: FreeComplex
    hat: Tuple[int, ...]
    qcopy: Tuple[int, ...]
    q_map: Dict[int, int]


@dataclass
class VerificationReport:
    checks: Dict[str, bool]
    failures: List[str]

    @property
    def ok(self):
        return not self.failures


# -------------------------------------------------------- linear algebra


class _Echelon:
    """Row echelon basis of F2 vectors (Python ints), optionally tracking combinations."""

    def __init__(self):
        self.rows = {}  # pivot bit -> (vector, combination)

    def reduce(self, vec, combo=0):
        while vec:
            top = vec.bit_length() - 1
            hit = self.rows.get(top)
            if hit is None:
                return vec, combo
            vec ^= hit[0]
            combo ^= hit[1]
        return 0, combo

    def add(self, vec, combo=0):
        vec, combo = self.reduce(vec, combo)
        if vec:
            self.rows[vec.bit_length() - 1] = (vec, combo)
            return True
        return False

    def contains(self, vec):
        return self.reduce(vec)[0] == 0


def _mask(vec):
    m = 0
    for i in vec:
        m |= 1 << i
    return m


def _unmask(m):
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return frozenset(out)


def _same_parity(a, b):
    return ((a - b) % 2) == 0


def _cycles(C, g):
    """Basis of cycles in degree g (as generator masks, implicit U-powers)."""
    gens = [j for j in range(C.n) if C.gradings[j] >= g and _same_parity(C.gradings[j], g)]
    ech = _Echelon()
    out = []
    for j in gens:
        vec, combo = ech.reduce(_mask(C.diff[j]), 1 << j)
        if vec:
            ech.rows[vec.bit_length() - 1] = (vec, combo)
        else:
            out.append(combo)
    return out


def _boundary_space(C, g):
    """Boundaries landing in degree g (as masks)."""
    ech = _Echelon()
    for j in range(C.n):
        if C.gradings[j] >= g + 1 and _same_parity(C.gradings[j], g + 1):
            ech.add(_mask(C.diff[j]))
    return ech


def _deep_boundaries(C, parity_of):
    ech = _Echelon()
    for j in range(C.n):
        if not _same_parity(C.gradings[j], parity_of):
            ech.add(_mask(C.diff[j]))
    return ech


def is_nontorsion(C, vec):
    """A homogeneous cycle is U-nontorsion iff it survives with U inverted."""
    vec = frozenset(vec)
    if not vec:
        return False
    if C.boundary(vec):
        raise errors.NotAComplex("vector is not a cycle")
    g = C.gradings[next(iter(vec))]
    return not _deep_boundaries(C, g).contains(_mask(vec))


def top_nontorsion(C, parity_of):
    """Highest degree, congruent to ``parity_of`` mod 2, carrying a U-nontorsion class."""
    deep = _deep_boundaries(C, parity_of)
    degrees = sorted({g for g in C.gradings if _same_parity(g, parity_of)}, reverse=True)
    for g in degrees:
        for z in _cycles(C, g):
            if not deep.contains(z):
                return g
    return None


def is_boundary(C, vec, g):
    return _boundary_space(C, g).contains(_mask(vec))


# ------------------------------------------------------------- homology


@dataclass
class FUModule:
    free: List[Fraction]
    torsion: List[Tuple[Fraction, int]]
    free_reps: List[FrozenSet[int]] = field(default_factory=list)
    torsion_reps: List[FrozenSet[int]] = field(default_factory=list)

    @property
    def free_rank(self):
        return len(self.free)

    def summands(self):
        return (sorted(self.free, reverse=True), sorted(self.torsion, key=lambda t: (-t[0], -t[1])))

    def dim(self, g):
        g = Fraction(g)
        d = sum(1 for t in self.free if g <= t and _same_parity(g, t))
        for t, ell in self.torsion:
            if _same_parity(g, t) and t - 2 * (ell - 1) <= g <= t:
                d += 1
        return d

    def per_degree(self, low, high=None):
        tops = list(self.free) + [t for t, _ in self.torsion]
        if high is None:
            high = max(tops) if tops else low
        out = {}
        g = Fraction(high)
        while g >= low:
            out[g] = self.dim(g)
            g -= 1
        return out


def fu_homology(C):
    """Module decomposition of H_*(C) with cycle representatives.

    Unit entries of the differential are cancelled first (a homotopy
    equivalence whose inclusion map is tracked for representatives).  What
    remains has every entry divisible by U, so differentials strictly raise
    grading and the standard column reduction in order of decreasing
    grading pairs each torsion top with the generator that kills it.
    """
    C.check_square_zero()
    gr = C.gradings
    diff = {j: set(C.diff[j]) for j in range(C.n)}
    rows = {i: set() for i in range(C.n)}
    for j, col in diff.items():
        for i in col:
            rows[i].add(j)
    lift = {j: {j} for j in range(C.n)}
    alive = set(range(C.n))

    def unit_pair():
        for x in sorted(alive):
            for y in sorted(diff[x]):
                if gr[y] == gr[x] - 1:
                    return x, y
        return None

    while True:
        pair = unit_pair()
        if pair is None:
            break
        x, y = pair
        dx = set(diff[x])
        for z in sorted(rows[y]):
            if z == x:
                continue
            # d'z = dz + <dz, y> dx ; the lift of z picks up x
            for i in dx:
                if i in diff[z]:
                    diff[z].discard(i)
                    rows[i].discard(z)
                else:
                    diff[z].add(i)
                    rows[i].add(z)
            lift[z] ^= lift[x]
        for v in (x, y):
            for i in diff[v]:
                rows[i].discard(v)
            for z in rows[v]:
                diff[z].discard(v)
            alive.discard(v)
        for v in (x, y):
            del diff[v]
            del rows[v]
    order = sorted(alive, key=lambda j: (-gr[j], j))
    pos = {j: p for p, j in enumerate(order)}
    reduced = {}
    combo = {}
    low_owner = {}
    for j in order:
        col = set(diff[j])
        comb = {j}
        while col:
            low = max(col, key=lambda i: pos[i])
            other = low_owner.get(low)
            if other is None:
                break
            col ^= reduced[other]
            comb ^= combo[other]
        reduced[j] = col
        combo[j] = comb
        if col:
            low_owner[max(col, key=lambda i: pos[i])] = j

    def rep(vec):
        out = set()
        for v in vec:
            out ^= lift[v]
        return frozenset(out)

    free, free_reps, torsion, torsion_reps = [], [], [], []
    for j in order:
        if reduced[j]:
            continue
        killer = low_owner.get(j)
        if killer is None:
            free.append(gr[j])
            free_reps.append(rep(combo[j]))
        else:
            ell = _exp((gr[j] - gr[killer] + 1) / 2)
            torsion.append((gr[j], ell))
            torsion_reps.append(rep(combo[j]))
    return FUModule(free, torsion, free_reps, torsion_reps)


# ------------------------------------------------------- standard complex


def _standard_layout(R):
    """Leaf vertex ids in order (with the middle leaf duplicated when needed)."""
    left, middle = nice_leaf_order(R)
    J = R.involution
    right = [J[v] for v in reversed(left)]
    if middle is None:
        return left + right, False
    if not left:
        return [middle], False
    return left + [middle, middle] + right, True


def standard_complex(R):
    if not isinstance(R, SymmetricGradedRoot):
        raise errors.NotSymmetric("standard_complex needs a symmetric root")
    leaves, _ = _standard_layout(R)
    N = len(leaves)
    names = [f"v{i + 1}" for i in range(N)]
    gradings = [R.degrees[v] for v in leaves]
    diff = {}
    for s in range(N - 1):
        a, b = leaves[s], leaves[s + 1]
        meet = R.degrees[a] if a == b else R.meet_degree(a, b)
        names.append(f"a{s + 1}")
        gradings.append(meet + 1)
        diff[N + s] = {s, s + 1}
    iota = {}
    for s in range(N):
        iota[s] = {N - 1 - s}
    for s in range(N - 1):
        iota[N + s] = {N + (N - 2 - s)}
    return IotaComplex(names, gradings, diff, iota)


def monotone_complex(P):
    return standard_complex(build_monotone(P))


def s3_complex():
    return IotaComplex(["x"], [-2], {}, {0: {0}})


# -------------------------------------------------------- constructions


def connected_sum_complex(A, B, *more):
    C = _tensor(A, B)
    for D in more:
        C = _tensor(C, D)
    return C


def _tensor(A, B):
    names, gradings = [], []
    idx = {}
    for a in range(A.n):
        for b in range(B.n):
            idx[(a, b)] = len(names)
            names.append(f"{A.names[a]}|{B.names[b]}")
            gradings.append(A.gradings[a] + B.gradings[b] + 2)
    diff, iota = {}, {}
    for (a, b), k in idx.items():
        col = set()
        for x in A.diff[a]:
            col ^= {idx[(x, b)]}
        for y in B.diff[b]:
            col ^= {idx[(a, y)]}
        diff[k] = col
        col = set()
        for x in A.iota[a]:
            for y in B.iota[b]:
                col ^= {idx[(x, y)]}
        iota[k] = col
    strict = A.strict and B.strict
    return IotaComplex(names, gradings, diff, iota, strict=strict)


def _transpose(cols, n):
    out = {i: set() for i in range(n)}
    for j in range(n):
        for i in cols[j]:
            out[i].add(j)
    return out


def dual(C):
    names = [f"{x}*" for x in C.names]
    gradings = [-g - 4 for g in C.gradings]
    return IotaComplex(names, gradings, _transpose(C.diff, C.n), _transpose(C.iota, C.n), strict=C.strict)


def mapping_cone(C):
    n = C.n
    names = [f"{x}^" for x in C.names] + [f"Q{x}" for x in C.names]
    gradings = [g + 1 for g in C.gradings] + list(C.gradings)
    diff = {}
    for j in range(n):
        col = set(C.diff[j])
        q = {j} ^ set(C.iota[j])
        diff[j] = col | {n + i for i in q}
        diff[n + j] = {n + i for i in C.diff[j]}
    cone = FreeComplex(names, gradings, diff)
    return ConeComplex(cone, tuple(range(n)), tuple(range(n, 2 * n)), {j: n + j for j in range(n)})


# ------------------------------------------------------------ invariants


@dataclass(frozen=True)
class InvolutiveInvariants:
    d_lower: Fraction
    d: Fraction
    d_upper: Fraction

    def as_tuple(self):
        return (self.d_lower, self.d, self.d_upper)


def involutive_invariants(C):
    H = fu_homology(C)
    if H.free_rank != 1:
        raise errors.LocalizedRankViolation("homology with U inverted must have rank one")
    coset = H.free[0]
    d = top_nontorsion(C, coset) + 2
    cone = mapping_cone(C).complex
    up = top_nontorsion(cone, coset)
    lowr = top_nontorsion(cone, coset + 1)
    return InvolutiveInvariants(lowr + 1, d, up + 2)


def verify_iota_complex(C, raise_on_failure=False):
    checks = {}
    failures = []

    def record(name, exc_type, fn):
        try:
            fn()
            checks[name] = True
        except errors.RootforgeError as exc:
            checks[name] = False
            failures.append(f"{name}: {exc}")
            if raise_on_failure:
                raise

    record("homogeneous", errors.GradingViolation, C.check_homogeneous)
    record("square_zero", errors.NotAComplex, C.check_square_zero)

    def grading():
        for j, col in enumerate(C.iota):
            for i in col:
                if C.iota_exponent(j, i) is None:
                    raise errors.GradingViolation(f"iota moves {C.names[j]} to {C.names[i]} across gradings")

    record("iota_grading", errors.GradingViolation, grading)

    def commutes():
        for j in range(C.n):
            if C.apply(C.iota, C.diff[j]) != C.boundary(C.iota[j]):
                raise errors.NotEquivariant(f"iota d != d iota on {C.names[j]}")

    record("iota_chain_map", errors.NotEquivariant, commutes)

    def involution():
        bad = [j for j in range(C.n) if C.apply(C.iota, C.iota[j]) != frozenset([j])]
        if not bad:
            return
        if C.strict:
            raise errors.NotAnInvolution(f"iota^2 != id on {C.names[bad[0]]}")
        # homotopy involution: iota^2 + id must vanish on homology
        H = fu_homology(C)
        for vec in H.free_reps + H.torsion_reps:
            img = C.apply(C.iota, C.apply(C.iota, vec)) ^ vec
            if img:
                g = C.gradings[next(iter(vec))]
                if not is_boundary(C, img, g):
                    raise errors.NotAnInvolution("iota^2 is not the identity on homology")

    if checks.get("iota_grading"):
        record("iota_involution", errors.NotAnInvolution, involution)
    return VerificationReport(checks, failures)


# -------------------------------------------------------- fast path


@dataclass
class RootHFI:
    module: FUModule
    diagram: object
    d_upper: Fraction
    d_lower: Fraction

    def per_degree(self, low):
        return self.diagram.per_degree(low)


def involutive_homology_via_root(R):
    """ker(1+J)[-1] + coker(1+J) on the homology of a symmetric root."""
    D = hfi_root_diagram(R)
    coker = D.coker
    cf, ct = forest_module(list(coker.degrees), list(coker.parents), {coker.bottom})
    stem_bottom = coker.bottom
    kf, kt = forest_module(D.ker_degrees, D.ker_parents, {stem_bottom})
    module = FUModule(sorted(cf + kf, reverse=True), sorted(ct + kt, key=lambda t: (-t[0], -t[1])))
    top = R.top_degree
    g = R.degrees[R.uppermost_invariant()]
    return RootHFI(module, D, top + 2, g + 2)


# ------------------------------------------------------------ witnesses


@dataclass
class ChainMap:
    source: IotaComplex
    target: IotaComplex
    cols: Tuple[FrozenSet[int], ...]

    def image(self, vec):
        out = set()
        for j in vec:
            out ^= self.cols[j]
        return frozenset(out)


def verify_local_map(F):
    """Grading preserving, d- and iota-equivariant, nontorsion to nontorsion."""
    S, T = F.source, F.target
    for j, col in enumerate(F.cols):
        for i in col:
            if _exp((T.gradings[i] - S.gradings[j]) / 2) is None:
                raise errors.GradingViolation(f"map sends {S.names[j]} to {T.names[i]} across gradings")
    for j in range(S.n):
        if F.image(S.diff[j]) != T.boundary(F.cols[j]):
            raise errors.NotAComplex(f"map is not a chain map at {S.names[j]}")
        if F.image(S.iota[j]) != T.apply(T.iota, F.cols[j]):
            raise errors.NotEquivariant(f"map does not commute with iota at {S.names[j]}")
    rep = fu_homology(S).free_reps[0]
    if not is_nontorsion(T, F.image(rep)):
        raise errors.LocalizedRankViolation("map kills the U-nontorsion class")
    return True


def witness_maps(R):
    """(M, f, g): the monotone subroot's complex with maps to and from C(R)."""
    from .graded_root import monotone_subroot

    P = monotone_subroot(R)
    CR = standard_complex(R)
    CM = monotone_complex(P)
    leaves, _ = _standard_layout(R)
    N = len(leaves)
    if N == 1:
        cols = (frozenset([0]),)
        return P, ChainMap(CM, CR, cols), ChainMap(CR, CM, cols)
    tips = selected_tips(R)
    tipset = set(tips)
    half = N // 2
    left_pos = [s for s in range(half) if leaves[s] in tipset]
    positions = left_pos + [N - 1 - s for s in reversed(left_pos)]
    if CM.n == 1:
        # C(R) doubles its invariant top leaf, and no iota-fixed cycle there is
        # nontorsion; use the doubled (homotopy equivalent) model of the stem
        g0 = CM.gradings[0]
        CM = IotaComplex(["v1", "v2", "a1"], [g0, g0, g0 + 1], {2: {0, 1}}, {0: {1}, 1: {0}, 2: {2}})
    if len(positions) != CM.n - (len(positions) - 1):
        raise errors.InvalidRoot("monotone subroot does not match the selected leaves")
    K = len(positions)
    f_cols = []
    for q in range(K):
        f_cols.append(frozenset([positions[q]]))
    for q in range(K - 1):
        f_cols.append(frozenset(N + s for s in range(positions[q], positions[q + 1])))
    g_cols = [None] * CR.n
    for s in range(N):
        if s < half:
            q = next(q for q in range(K) if positions[q] >= s)
        else:
            q = max(q for q in range(K) if positions[q] <= s)
        g_cols[s] = frozenset([q])
    start = {p: q for q, p in enumerate(positions)}
    for s in range(N - 1):
        col = frozenset()
        if s < half:
            if s in start:
                col = frozenset([K + start[s]])
        else:
            if s + 1 in start:
                col = frozenset([K + start[s + 1] - 1])
        g_cols[N + s] = col
    return P, ChainMap(CM, CR, tuple(f_cols)), ChainMap(CR, CM, tuple(g_cols))
