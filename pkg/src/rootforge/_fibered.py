"""Sublevel-set components of chi_k on a tree lattice, one coordinate at a time.

Root the tree at a vertex r.  For a vertex u with parent value c, let
Psi_u(c; y) be the part of chi_k involving the subtree below u (including
the edge term -c*y_u).  The lattice L then fibres over the coordinate x_r:
the fibre over t is a product of the child subtrees with parent value t.

* M_u(c) = min Psi_u(c; .) is computed by memoised recursion, with exact
  convex quadratic lower bounds (the real relaxation) pruning the search.
* If every child subtree has connected sublevel sets for every parent
  value, each fibre's sublevel sets are connected, so components of S_n are
  runs of consecutive t joined across fibres; this reduces everything to a
  one-dimensional sweep.  That hypothesis is certified recursively; the
  answer only depends on the parent value modulo a lattice period.
* A component's minimum is a point with no strictly lower neighbour, and
  such points satisfy |x_u - center_u| <= W_u, so every component meets a
  finite window of fibres and the sweep over that window is exact.
"""

from fractions import Fraction
from math import ceil, floor, lcm

from . import errors
from ._linalg import solve


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent[x] = x

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return None
        # keep the smaller id as representative for determinism
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return ra, rb


class FiberedChi:
    def __init__(self, T, k, root):
        self.T = T
        self.k = tuple(k)
        self.m = T.weights
        self.root = root
        adj = T.adjacency()
        self.children = [[] for _ in range(T.n)]
        self.order = []  # postorder
        stack = [(root, None, False)]
        while stack:
            v, p, done = stack.pop()
            if done:
                self.order.append(v)
                continue
            stack.append((v, p, True))
            for u in adj[v]:
                if u != p:
                    self.children[v].append(u)
                    stack.append((u, v, False))
        for v in range(T.n):
            self.children[v].sort()
        n = T.n
        self.a = [None] * n
        self.b = [None] * n
        self.e = [None] * n
        alpha = [None] * n
        beta = [None] * n
        gamma = [None] * n
        for u in self.order:
            kids = self.children[u]
            a = Fraction(-self.m[u], 2) + sum((alpha[w] for w in kids), Fraction(0))
            b = Fraction(-self.k[u], 2) + sum((beta[w] for w in kids), Fraction(0))
            e = sum((gamma[w] for w in kids), Fraction(0))
            if a <= 0:
                raise errors.NotNegativeDefinite("intersection form is not negative definite")
            self.a[u], self.b[u], self.e[u] = a, b, e
            alpha[u] = -1 / (4 * a)
            beta[u] = b / (2 * a)
            gamma[u] = e - b * b / (4 * a)
        self._memo = {}
        self._window = {}
        self._arm_ok = {}

    # -------------------------------------------------------------- values

    def f(self, v, t):
        return (-self.k[v] * t - self.m[v] * t * t) // 2

    def lower(self, u, c, t):
        """Exact lower bound for R_u(c, t); convex in t."""
        return self.a[u] * t * t + (self.b[u] - c) * t + self.e[u]

    def center(self, u, c):
        return (c - self.b[u]) / (2 * self.a[u])

    def R(self, u, c, t):
        """min of Psi_u(c; y) over y with y_u = t."""
        val = self.f(u, t) - c * t
        for w in self.children[u]:
            val += self.M(w, t)[0]
        return val

    def M(self, u, c):
        """(min Psi_u(c; .), smallest minimising y_u)."""
        key = (u, c)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        t0 = floor(self.center(u, c))
        best = None
        arg = None
        t = t0
        while best is None or self.lower(u, c, t) <= best:
            v = self.R(u, c, t)
            if best is None or v < best or (v == best and t < arg):
                best, arg = v, t
            t -= 1
        t = t0 + 1
        while self.lower(u, c, t) <= best:
            v = self.R(u, c, t)
            if v < best:
                best, arg = v, t
            t += 1
        self._memo[key] = (best, arg)
        return best, arg

    def minimum(self):
        """min chi_k over the whole lattice."""
        return self.M(self.root, 0)[0]

    def _candidates(self, x, s, cap):
        """All y with R_x(s, y) <= cap, as {y: value}."""
        out = {}
        t0 = floor(self.center(x, s))
        t = t0
        while self.lower(x, s, t) <= cap:
            v = self.R(x, s, t)
            if v <= cap:
                out[t] = v
            t -= 1
        t = t0 + 1
        while self.lower(x, s, t) <= cap:
            v = self.R(x, s, t)
            if v <= cap:
                out[t] = v
            t += 1
        return out

    def edge(self, u, c, s, tau0=None, tau1=None):
        """Lowest level at which fibres s and s+1 of Psi_u(c; .) are joined."""
        if tau0 is None:
            tau0 = self.R(u, c, s)
        if tau1 is None:
            tau1 = self.R(u, c, s + 1)
        kids = self.children[u]
        delta = self.f(u, s + 1) - self.f(u, s) - c
        floor_val = max(tau0, tau1)
        s0 = sum(self.M(w, s)[1] for w in kids)
        s1 = sum(self.M(w, s + 1)[1] for w in kids)
        up0 = max(tau0, tau0 + delta - s0)
        up1 = max(tau1, tau1 - delta + s1)
        best = min(up0, up1)
        if best == floor_val:
            return best
        # exact search: total >= tau0 + sum of per-child excesses
        slack = best - 1 - tau0
        base = self.f(u, s) - c * s
        table = {0: 0}
        for w in kids:
            mw = self.M(w, s)[0]
            cand = self._candidates(w, s, mw + slack)
            nxt = {}
            for S, val in table.items():
                for y, r in cand.items():
                    key = S + y
                    tot = val + r
                    if key not in nxt or tot < nxt[key]:
                        nxt[key] = tot
            table = nxt
        for S, val in table.items():
            tot = base + val + max(0, delta - S)
            if tot < best:
                best = tot
        return best

    # -------------------------------------------------------------- windows

    def window_data(self, u):
        """(W_u, D_u): window half-width and period in the parent value."""
        hit = self._window.get(u)
        if hit is not None:
            return hit
        verts = []
        stack = [u]
        while stack:
            v = stack.pop()
            verts.append(v)
            stack.extend(self.children[v])
        verts.sort()
        idx = {v: i for i, v in enumerate(verts)}
        size = len(verts)
        A = [[0] * size for _ in range(size)]
        for v in verts:
            A[idx[v]][idx[v]] = -self.m[v]
            for w in self.children[v]:
                A[idx[v]][idx[w]] = A[idx[w]][idx[v]] = -1
        rhs = [0] * size
        rhs[idx[u]] = 1
        z = solve(A, rhs)
        W = sum(abs(z[idx[v]]) * abs(self.m[v]) for v in verts) / 2
        D = 1
        for q in z:
            D = lcm(D, q.denominator)
        self._window[u] = (W, D)
        return W, D

    def window(self, u, c):
        W, _ = self.window_data(u)
        ctr = self.center(u, c)
        return ceil(ctr - W), floor(ctr + W)

    # -------------------------------------------------------- certification

    def arm_ok(self, u):
        """Every sublevel set of Psi_u(c; .) is connected, for every integer c."""
        hit = self._arm_ok.get(u)
        if hit is not None:
            return hit
        ok = all(self.arm_ok(w) for w in self.children[u])
        if ok and self.children[u]:
            _, D = self.window_data(u)
            ok = all(self._single_component(u, c) for c in range(D))
        # a lone vertex gives a convex function of one integer: intervals
        self._arm_ok[u] = ok
        return ok

    def _single_component(self, u, c):
        lo, hi = self.window(u, c)
        taus = {s: self.R(u, c, s) for s in range(lo, hi + 1)}
        edges = {s: self.edge(u, c, s, taus[s], taus[s + 1]) for s in range(lo, hi)}
        events = sorted([(v, 0, s) for s, v in taus.items()] + [(v, 1, s) for s, v in edges.items()])
        uf = _UnionFind()
        count = 0
        i = 0
        while i < len(events):
            level = events[i][0]
            while i < len(events) and events[i][0] == level:
                _, kind, s = events[i]
                if kind == 0:
                    uf.add(s)
                    count += 1
                elif uf.union(s, s + 1) is not None:
                    count -= 1
                i += 1
            if count >= 2:
                return False
        return True

    def certify(self):
        return all(self.arm_ok(w) for w in self.children[self.root])

    # ---------------------------------------------------------------- sweep

    def sweep(self, wu_root):
        """Component structure of S_n over the root coordinate.

        Returns (levels, parent_of, mirror, info) for root_from_levels.
        """
        r = self.root
        lo, hi = self.window(r, 0)
        taus = {t: self.R(r, 0, t) for t in range(lo, hi + 1)}
        edges = {t: self.edge(r, 0, t, taus[t], taus[t + 1]) for t in range(lo, hi)}

        def mirror_pos(t):
            return -t - wu_root

        for t, v in taus.items():
            if taus.get(mirror_pos(t)) != v:
                raise errors.NotSymmetric("chi_k is not symmetric under the reflection")
        for t, v in edges.items():
            if edges.get(mirror_pos(t) - 1) != v:
                raise errors.NotSymmetric("edge levels are not symmetric under the reflection")

        events = sorted([(v, 0, t) for t, v in taus.items()] + [(v, 1, t) for t, v in edges.items()])
        n_min = events[0][0]

        # first pass: last birth level and the stopping level
        uf = _UnionFind()
        has_old = {}
        count = 0
        last_birth = n_min
        stop = None
        i = 0
        while i < len(events):
            level = events[i][0]
            fresh = []
            while i < len(events) and events[i][0] == level:
                _, kind, t = events[i]
                if kind == 0:
                    uf.add(t)
                    has_old[t] = False
                    fresh.append(t)
                    count += 1
                else:
                    res = uf.union(t, t + 1)
                    if res is not None:
                        count -= 1
                        has_old[res[0]] = has_old[res[0]] or has_old[res[1]]
                i += 1
            # a birth is a component made only of fibres that just appeared
            born = False
            for t in fresh:
                if not has_old[uf.find(t)]:
                    born = True
            for t in fresh:
                has_old[uf.find(t)] = True
            if born:
                last_birth = level
                stop = None
            if count == 1 and stop is None:
                stop = level
        if stop is None:
            raise errors.CertificationFailed("sweep did not reach a single component")
        stop = max(stop, last_birth)

        # second pass: snapshots at every level from n_min to stop
        uf = _UnionFind()
        roots = set()
        levels = []
        parent_of = {}
        mirror = {}
        prev = None
        i = 0
        for level in range(n_min, stop + 1):
            while i < len(events) and events[i][0] == level:
                _, kind, t = events[i]
                if kind == 0:
                    uf.add(t)
                    roots.add(t)
                else:
                    res = uf.union(t, t + 1)
                    if res is not None:
                        roots.discard(res[1])
                i += 1
            comps = [(level, x) for x in sorted(roots)]
            for cid in comps:
                mirror[cid] = (level, uf.find(mirror_pos(cid[1])))
            if prev is not None:
                for cid in prev[1]:
                    parent_of[cid] = (level, uf.find(cid[1]))
            levels.append((level, comps))
            prev = (level, comps)
        info = {
            "root_vertex": r,
            "window": (lo, hi),
            "min_level": n_min,
            "last_birth_level": last_birth,
            "stop_level": stop,
        }
        return levels, parent_of, mirror, info
