"""Exact minor-model search on bitmask graphs.

The search decides whether every pattern vertex can receive a disjoint,
connected branch set such that pattern edges are realized, required labels are
covered and anchored host vertices land in their owner's branch set.

Two exact decompositions keep large structured hosts tractable:

* disconnected hosts: pattern components are distributed over host components;
* one-sums: when the host has a cut vertex ``c`` and a leaf block ``B``, a model
  either avoids ``B - c``, or puts whole pattern components inside ``B - c``
  (``c`` unused), or uses ``c`` inside the branch set of some pattern vertex
  ``x``. In the last case the branch set of ``x`` restricted to either side stays
  connected, so the problem splits into a rooted problem on ``B`` and one on the
  rest, with the components of ``pattern - x`` shared out between the sides.

What is left (2-connected or small hosts) goes to a backtracking search over
connected vertex sets, grown level by level so small branch sets come first.
"""
from __future__ import annotations

from itertools import combinations

from . import limits

BASE_SIZE = 12


def bits(m):
    while m:
        b = m & -m
        yield b.bit_length() - 1
        m ^= b


def popcount(m):
    return m.bit_count()


def components(adj, mask):
    out = []
    while mask:
        low = mask & -mask
        comp = low
        frontier = low
        while frontier:
            nb = 0
            for i in bits(frontier):
                nb |= adj[i]
            nb &= mask & ~comp
            comp |= nb
            frontier = nb
        out.append(comp)
        mask &= ~comp
    return out


def blocks(adj, mask):
    """Biconnected blocks and cut vertices of the subgraph induced by ``mask``."""
    verts = list(bits(mask))
    index, low = {}, {}
    out, cut = [], 0
    counter = 0
    for root in verts:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack = [(root, -1, iter(list(bits(adj[root] & mask))))]
        estack = []
        children = 0
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    estack.append((v, w))
                    stack.append((w, v, iter(list(bits(adj[w] & mask)))))
                    if v == root:
                        children += 1
                    advanced = True
                    break
                elif index[w] < index[v]:
                    low[v] = min(low[v], index[w])
                    estack.append((v, w))
            if advanced:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[v])
                if low[v] >= index[p]:
                    if p != root:
                        cut |= 1 << p
                    comp = 0
                    while estack:
                        a, b = estack.pop()
                        comp |= (1 << a) | (1 << b)
                        if (a, b) == (p, v):
                            break
                    out.append(comp)
        if children > 1:
            cut |= 1 << root
        if children == 0:
            out.append(1 << root)
    return out, cut


class Search:
    """One pattern against one host; memoizes subproblems."""

    def __init__(self, hadj, hlab, padj, ceiling=None):
        self.hadj = hadj
        self.hlab = hlab
        self.padj = padj
        self.limit = limits.ceiling(ceiling)
        self.memo = {}
        self.pcomp = {}
        self.hcomp = {}
        self.hblk = {}

    # ---------------------------------------------------------- entry point
    def solve(self, P, M, anc, req):
        """Return {pattern index: host mask} or None.

        ``anc`` and ``req`` are dicts restricted to pattern vertices in ``P``.
        """
        if not P:
            return {}
        if popcount(P) > popcount(M):
            return None
        reserved = 0
        for i, a in anc.items():
            if a & ~M or a & reserved:
                return None
            reserved |= a
        need = 0
        for r in req.values():
            need |= r
        if need:
            have = 0
            for v in bits(M):
                have |= self.hlab[v]
            if need & ~have:
                return None
        key = (P, M, tuple(sorted(anc.items())), tuple(sorted(req.items())))
        if key in self.memo:
            return self.memo[key]
        hcomps = self._host_components(M)
        if len(hcomps) > 1:
            res = self._split_components(P, hcomps, anc, req)
        elif popcount(M) <= BASE_SIZE:
            res = self._base(P, M, anc, req)
        else:
            blks, cut = self._host_blocks(M)
            if not cut:
                res = self._base(P, M, anc, req)
            else:
                res = self._split_cut(P, M, blks, cut, anc, req)
        self.memo[key] = res
        return res

    # ---------------------------------------------------------- helpers
    def _host_components(self, M):
        got = self.hcomp.get(M)
        if got is None:
            got = self.hcomp[M] = components(self.hadj, M)
        return got

    def _host_blocks(self, M):
        got = self.hblk.get(M)
        if got is None:
            got = self.hblk[M] = blocks(self.hadj, M)
        return got

    def _pattern_components(self, P):
        got = self.pcomp.get(P)
        if got is None:
            got = self.pcomp[P] = components(self.padj, P)
        return got

    @staticmethod
    def _anchored_in(anc, region):
        # pattern vertices whose anchor meets ``region``, as a mask
        m = 0
        for i, a in anc.items():
            if a & region:
                m |= 1 << i
        return m

    def _labels_of(self, M):
        have = 0
        for v in bits(M):
            have |= self.hlab[v]
        return have

    @staticmethod
    def _restrict(d, P):
        return {i: x for i, x in d.items() if (P >> i) & 1 and x}

    def _split_components(self, P, hcomps, anc, req):
        K = hcomps[0]
        rest = 0
        for c in hcomps[1:]:
            rest |= c
        forced_k, forced_rest, free = 0, 0, []
        for C in self._pattern_components(P):
            in_k = any(a & K for i, a in anc.items() if (C >> i) & 1)
            in_r = any(a & rest for i, a in anc.items() if (C >> i) & 1)
            if in_k and in_r:
                return None
            if in_k:
                forced_k |= C
            elif in_r:
                forced_rest |= C
            else:
                free.append(C)
        nk = popcount(K)
        for r in range(len(free) + 1):
            for chosen in combinations(free, r):
                P1 = forced_k
                for C in chosen:
                    P1 |= C
                P2 = P & ~P1
                if popcount(P1) > nk or popcount(P2) > popcount(rest):
                    continue
                m1 = self.solve(P1, K, self._restrict(anc, P1), self._restrict(req, P1))
                if m1 is None:
                    continue
                m2 = self.solve(P2, rest, self._restrict(anc, P2), self._restrict(req, P2))
                if m2 is not None:
                    return {**m1, **m2}
        return None

    def _split_cut(self, P, M, blks, cut, anc, req):
        leaves = [b for b in blks if popcount(b & cut) == 1]
        B = max(leaves, key=lambda b: (popcount(b), -(b & -b)))
        cbit = B & cut
        inner = B & ~cbit
        other = M & ~inner
        other_inner = other & ~cbit
        owner = None
        for i, a in anc.items():
            if a & cbit:
                owner = i
        inner_anchored = [i for i, a in anc.items() if a & inner]
        inner_labels = self._labels_of(inner)
        block_labels = self._labels_of(B)
        other_labels = self._labels_of(other)
        nB = popcount(B)
        in_inner = self._anchored_in(anc, inner)
        in_other = self._anchored_in(anc, other)
        in_other_inner = self._anchored_in(anc, other_inner)

        # (c) the cut vertex sits in the branch set of some x
        xs = [owner] if owner is not None else list(bits(P))
        for x in xs:
            xb = 1 << x
            rx = req.get(x, 0)
            ax = anc.get(x, 0)
            comps = self._pattern_components(P & ~xb)
            must1, may1, must2 = 0, [], 0
            ok = True
            for C in comps:
                a1 = C & in_inner
                a2 = C & in_other
                if a1 and a2:
                    ok = False
                    break
                if a1:
                    must1 |= C
                elif a2:
                    must2 |= C
                elif popcount(C) + 1 <= nB:
                    may1.append(C)
            if not ok or popcount(must1) + 1 > nB:
                continue
            label_choices = [s for s in _submasks(rx & block_labels) if not (rx & ~s) & ~other_labels]
            for r in range(len(may1) + 1):
                for chosen in combinations(may1, r):
                    C1 = must1
                    for C in chosen:
                        C1 |= C
                    if popcount(C1) + 1 > nB:
                        continue
                    P1 = C1 | xb
                    P2 = P & ~C1
                    if popcount(P2) > popcount(other):
                        continue
                    for L1 in label_choices:
                        if not C1 and not L1 and not (ax & inner):
                            continue  # covered by the branch that ignores the block
                        anc1 = self._restrict(anc, C1)
                        anc1[x] = (ax & B) | cbit
                        req1 = self._restrict(req, C1)
                        if L1:
                            req1[x] = L1
                        m1 = self.solve(P1, B, anc1, req1)
                        if m1 is None:
                            continue
                        anc2 = self._restrict(anc, P2 & ~xb)
                        anc2[x] = (ax & other) | cbit
                        req2 = self._restrict(req, P2 & ~xb)
                        if rx & ~L1:
                            req2[x] = rx & ~L1
                        m2 = self.solve(P2, other, anc2, req2)
                        if m2 is not None:
                            out = {**m2, **{i: s for i, s in m1.items() if i != x}}
                            out[x] = m1[x] | m2[x]
                            return out

        # (b) the cut vertex is unused and whole components live inside the block
        if owner is None:
            comps = self._pattern_components(P)
            must1, may1 = 0, []
            ok = True
            for C in comps:
                a1 = C & in_inner
                a2 = C & in_other_inner
                if a1 and a2:
                    ok = False
                    break
                if a1:
                    must1 |= C
                elif not a2 and popcount(C) <= popcount(inner):
                    may1.append(C)
            if ok:
                for r in range(len(may1) + 1):
                    for chosen in combinations(may1, r):
                        C1 = must1
                        for C in chosen:
                            C1 |= C
                        if not C1:
                            continue
                        P2 = P & ~C1
                        m1 = self.solve(C1, inner, self._restrict(anc, C1), self._restrict(req, C1))
                        if m1 is None:
                            continue
                        m2 = self.solve(P2, other_inner, self._restrict(anc, P2), self._restrict(req, P2))
                        if m2 is not None:
                            return {**m1, **m2}

        # (a) nothing inside the block except possibly the cut vertex
        if not inner_anchored:
            return self.solve(P, other, anc, req)
        return None

    # ---------------------------------------------------------- base search
    def _base(self, P, M, anc, req):
        limits.enforce(popcount(M), "minor search block", self.limit)
        padj, hadj, hlab = self.padj, self.hadj, self.hlab
        pverts = list(bits(P))
        reserved = 0
        for a in anc.values():
            reserved |= a

        # static order: anchored first, then greedily most placed neighbours
        order = []
        placed = 0
        remaining = set(pverts)
        while remaining:
            def score(i):
                return (
                    1 if anc.get(i) else 0,
                    popcount(padj[i] & placed),
                    popcount(padj[i] & P),
                    -i,
                )
            i = max(remaining, key=score)
            order.append(i)
            placed |= 1 << i
            remaining.discard(i)

        # twins: same neighbourhood apart from each other, no side conditions
        twin_prev = {}
        for a_pos, i in enumerate(order):
            if anc.get(i) or req.get(i):
                continue
            for j in reversed(order[:a_pos]):
                if anc.get(j) or req.get(j):
                    continue
                if (padj[i] & P & ~(1 << j)) == (padj[j] & P & ~(1 << i)):
                    twin_prev[i] = j
                    break

        npat = len(order)
        phi = {}
        nbr_of = {}  # pattern index -> neighbourhood mask of its branch set

        def grow(start, allowed, maxsize):
            # connected subsets of ``allowed`` containing a vertex of ``start``,
            # by increasing size
            level = []
            seen = set()
            for v in bits(start):
                b = 1 << v
                if b not in seen:
                    seen.add(b)
                    level.append((b, hadj[v] & allowed, hlab[v]))
            size = 1
            while level and size <= maxsize:
                for item in level:
                    yield item
                if size == maxsize:
                    return
                nxt = []
                for S, nb, lab in level:
                    ext = nb & ~S
                    for v in bits(ext):
                        S2 = S | (1 << v)
                        if S2 in seen:
                            continue
                        seen.add(S2)
                        nxt.append((S2, (nb | hadj[v]) & allowed, lab | hlab[v]))
                level = nxt
                size += 1

        def rec(pos, used):
            if pos == npat:
                return True
            i = order[pos]
            free = M & ~used
            ai = anc.get(i, 0)
            allowed = free & ~(reserved & ~ai)
            left = npat - pos - 1
            maxsize = popcount(allowed) - 0
            # every later pattern vertex needs at least one unused vertex
            maxsize = min(maxsize, popcount(free) - left)
            if maxsize <= 0:
                return False
            earlier = [j for j in order[:pos] if (padj[i] >> j) & 1]
            if ai:
                start = ai & -ai
            elif earlier:
                start = nbr_of[earlier[0]] & allowed
            else:
                start = allowed
            if not start:
                return False
            ri = req.get(i, 0)
            tw = twin_prev.get(i)
            tw_min = (phi[tw] & -phi[tw]) if tw is not None else 0
            later_nb = padj[i] & P
            for S, nb, lab in grow(start, allowed, maxsize):
                if ai and (S & ai) != ai:
                    continue
                if ri and (ri & ~lab):
                    continue
                if tw is not None and (S & -S) <= tw_min:
                    continue
                good = True
                for j in earlier:
                    if not (nbr_of[j] & S):
                        good = False
                        break
                if not good:
                    continue
                used2 = used | S
                nS = 0
                for v in bits(S):
                    nS |= hadj[v]
                nS &= ~S
                # forward check: placed neighbours of unplaced vertices keep room
                phi[i] = S
                nbr_of[i] = nS
                if later_nb:
                    fr = M & ~used2
                    okf = True
                    for j in order[pos + 1:]:
                        if (later_nb >> j) & 1 and not (nS & fr):
                            okf = False
                            break
                    if not okf:
                        continue
                if rec(pos + 1, used2):
                    return True
            phi.pop(i, None)
            nbr_of.pop(i, None)
            return False

        if rec(0, 0):
            return dict(phi)
        return None


def _submasks(m):
    out = [0]
    for v in bits(m):
        b = 1 << v
        out += [s | b for s in out]
    return out
