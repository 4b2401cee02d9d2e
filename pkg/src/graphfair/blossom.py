"""Edmonds' blossom algorithm for maximum-weight matching in general graphs.

Primal-dual method in the formulation of Galil (1986): vertex duals, blossom
duals and slack computed on the edges, O(V^3) overall.  All arithmetic is
done with whatever numeric type the weights carry; with ``Fraction`` or
``int`` weights every dual update is exact because the only division is by 2.

The engine only handles strictly positive weights.  Callers drop edges of
weight <= 0 beforehand; they can never increase a maximum-weight matching.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Number = int | Fraction


def max_weight_matching_edges(
    vertex_count: int, edges: Sequence[tuple[int, int, Number]]
) -> list[int]:
    """Return positions (into ``edges``) of a maximum-weight matching.

    ``edges`` holds ``(u, v, w)`` triples with ``u != v``, no parallel edges
    and ``w > 0``.  The result is sorted and deterministic for a fixed input
    ordering.
    """
    if not edges:
        return []
    mate = _Blossom(vertex_count, edges).solve()
    chosen = []
    for k, (u, v, _) in enumerate(edges):
        if mate[u] == v:
            chosen.append(k)
    return chosen


class _Blossom:
    # Endpoint p refers to vertex endpoint[p]; edge k has endpoints 2k and
    # 2k+1.  Blossoms are numbered vertex_count .. 2*vertex_count-1.

    def __init__(self, nvertex: int, edges: Sequence[tuple[int, int, Number]]):
        self.nvertex = nvertex
        self.edges = list(edges)
        nedge = len(self.edges)
        self.nedge = nedge
        maxweight = max(w for _, _, w in self.edges)
        self.endpoint = [self.edges[p // 2][p % 2] for p in range(2 * nedge)]
        self.neighbend: list[list[int]] = [[] for _ in range(nvertex)]
        for k, (i, j, _) in enumerate(self.edges):
            self.neighbend[i].append(2 * k + 1)
            self.neighbend[j].append(2 * k)
        nb = 2 * nvertex
        # mate[v] is the remote endpoint of v's matched edge, or -1.
        self.mate = [-1] * nvertex
        # label: 0 free, 1 S, 2 T (for top-level blossoms and vertices).
        self.label = [0] * nb
        self.labelend = [-1] * nb
        self.inblossom = list(range(nvertex))
        self.blossomparent = [-1] * nb
        self.blossomchilds: list[list[int] | None] = [None] * nb
        self.blossombase = list(range(nvertex)) + [-1] * nvertex
        self.blossomendps: list[list[int] | None] = [None] * nb
        self.bestedge = [-1] * nb
        self.blossombestedges: list[list[int] | None] = [None] * nb
        self.unusedblossoms = list(range(nvertex, nb))
        self.dualvar: list[Number] = [maxweight] * nvertex + [0] * nvertex
        self.allowedge = [False] * nedge
        self.queue: list[int] = []

    def slack(self, k: int) -> Number:
        i, j, wt = self.edges[k]
        return self.dualvar[i] + self.dualvar[j] - 2 * wt

    def leaves(self, b: int):
        if b < self.nvertex:
            yield b
            return
        for t in self.blossomchilds[b]:
            if t < self.nvertex:
                yield t
            else:
                yield from self.leaves(t)

    def assign_label(self, w: int, t: int, p: int) -> None:
        b = self.inblossom[w]
        self.label[w] = self.label[b] = t
        self.labelend[w] = self.labelend[b] = p
        self.bestedge[w] = self.bestedge[b] = -1
        if t == 1:
            self.queue.extend(self.leaves(b))
        else:
            base = self.blossombase[b]
            self.assign_label(self.endpoint[self.mate[base]], 1, self.mate[base] ^ 1)

    def scan_blossom(self, v: int, w: int) -> int:
        # Trace back from v and w towards the tree roots; return the base of
        # a new blossom, or -1 when an augmenting path was found.
        path = []
        base = -1
        while v != -1 or w != -1:
            b = self.inblossom[v]
            if self.label[b] & 4:
                base = self.blossombase[b]
                break
            path.append(b)
            self.label[b] = 5
            if self.labelend[b] == -1:
                v = -1
            else:
                v = self.endpoint[self.labelend[b]]
                b = self.inblossom[v]
                v = self.endpoint[self.labelend[b]]
            if w != -1:
                v, w = w, v
        for b in path:
            self.label[b] = 1
        return base

    def add_blossom(self, base: int, k: int) -> None:
        v, w, _ = self.edges[k]
        bb = self.inblossom[base]
        bv = self.inblossom[v]
        bw = self.inblossom[w]
        b = self.unusedblossoms.pop()
        self.blossombase[b] = base
        self.blossomparent[b] = -1
        self.blossomparent[bb] = b
        path: list[int] = []
        endps: list[int] = []
        self.blossomchilds[b] = path
        self.blossomendps[b] = endps
        while bv != bb:
            self.blossomparent[bv] = b
            path.append(bv)
            endps.append(self.labelend[bv])
            v = self.endpoint[self.labelend[bv]]
            bv = self.inblossom[v]
        path.append(bb)
        path.reverse()
        endps.reverse()
        endps.append(2 * k)
        while bw != bb:
            self.blossomparent[bw] = b
            path.append(bw)
            endps.append(self.labelend[bw] ^ 1)
            w = self.endpoint[self.labelend[bw]]
            bw = self.inblossom[w]
        self.label[b] = 1
        self.labelend[b] = self.labelend[bb]
        self.dualvar[b] = 0
        for v in self.leaves(b):
            if self.label[self.inblossom[v]] == 2:
                self.queue.append(v)
            self.inblossom[v] = b
        # Least-slack edges from the new blossom to each neighbouring S-blossom.
        bestedgeto = [-1] * (2 * self.nvertex)
        for bv in path:
            if self.blossombestedges[bv] is None:
                nblists = [
                    [p // 2 for p in self.neighbend[v]] for v in self.leaves(bv)
                ]
            else:
                nblists = [self.blossombestedges[bv]]
            for nblist in nblists:
                for k2 in nblist:
                    i, j, _ = self.edges[k2]
                    if self.inblossom[j] == b:
                        i, j = j, i
                    bj = self.inblossom[j]
                    if (
                        bj != b
                        and self.label[bj] == 1
                        and (
                            bestedgeto[bj] == -1
                            or self.slack(k2) < self.slack(bestedgeto[bj])
                        )
                    ):
                        bestedgeto[bj] = k2
            self.blossombestedges[bv] = None
            self.bestedge[bv] = -1
        self.blossombestedges[b] = [k2 for k2 in bestedgeto if k2 != -1]
        self.bestedge[b] = -1
        for k2 in self.blossombestedges[b]:
            if self.bestedge[b] == -1 or self.slack(k2) < self.slack(self.bestedge[b]):
                self.bestedge[b] = k2

    def expand_blossom(self, b: int, endstage: bool) -> None:
        for s in self.blossomchilds[b]:
            self.blossomparent[s] = -1
            if s < self.nvertex:
                self.inblossom[s] = s
            elif endstage and self.dualvar[s] == 0:
                self.expand_blossom(s, endstage)
            else:
                for v in self.leaves(s):
                    self.inblossom[v] = s
        if not endstage and self.label[b] == 2:
            # Relabel the T-blossom's children along the even path from the
            # entry child to the base.
            childs = self.blossomchilds[b]
            endps = self.blossomendps[b]
            entrychild = self.inblossom[self.endpoint[self.labelend[b] ^ 1]]
            j = childs.index(entrychild)
            if j & 1:
                j -= len(childs)
                jstep = 1
                endptrick = 0
            else:
                jstep = -1
                endptrick = 1
            p = self.labelend[b]
            while j != 0:
                self.label[self.endpoint[p ^ 1]] = 0
                self.label[self.endpoint[endps[j - endptrick] ^ endptrick ^ 1]] = 0
                self.assign_label(self.endpoint[p ^ 1], 2, p)
                self.allowedge[endps[j - endptrick] // 2] = True
                j += jstep
                p = endps[j - endptrick] ^ endptrick
                self.allowedge[p // 2] = True
                j += jstep
            bv = childs[j]
            self.label[self.endpoint[p ^ 1]] = self.label[bv] = 2
            self.labelend[self.endpoint[p ^ 1]] = self.labelend[bv] = p
            self.bestedge[bv] = -1
            j += jstep
            while childs[j] != entrychild:
                bv = childs[j]
                if self.label[bv] == 1:
                    j += jstep
                    continue
                for v in self.leaves(bv):
                    if self.label[v] != 0:
                        break
                if self.label[v] != 0:
                    self.label[v] = 0
                    self.label[self.endpoint[self.mate[self.blossombase[bv]]]] = 0
                    self.assign_label(v, 2, self.labelend[v])
                j += jstep
        self.label[b] = self.labelend[b] = -1
        self.blossomchilds[b] = self.blossomendps[b] = None
        self.blossombase[b] = -1
        self.blossombestedges[b] = None
        self.bestedge[b] = -1
        self.unusedblossoms.append(b)

    def augment_blossom(self, b: int, v: int) -> None:
        t = v
        while self.blossomparent[t] != b:
            t = self.blossomparent[t]
        if t >= self.nvertex:
            self.augment_blossom(t, v)
        childs = self.blossomchilds[b]
        endps = self.blossomendps[b]
        i = j = childs.index(t)
        if i & 1:
            j -= len(childs)
            jstep = 1
            endptrick = 0
        else:
            jstep = -1
            endptrick = 1
        while j != 0:
            j += jstep
            t = childs[j]
            p = endps[j - endptrick] ^ endptrick
            if t >= self.nvertex:
                self.augment_blossom(t, self.endpoint[p])
            j += jstep
            t = childs[j]
            if t >= self.nvertex:
                self.augment_blossom(t, self.endpoint[p ^ 1])
            self.mate[self.endpoint[p]] = p ^ 1
            self.mate[self.endpoint[p ^ 1]] = p
        self.blossomchilds[b] = childs[i:] + childs[:i]
        self.blossomendps[b] = endps[i:] + endps[:i]
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]]

    def augment_matching(self, k: int) -> None:
        v, w, _ = self.edges[k]
        for s, p in ((v, 2 * k + 1), (w, 2 * k)):
            while True:
                bs = self.inblossom[s]
                if bs >= self.nvertex:
                    self.augment_blossom(bs, s)
                self.mate[s] = p
                if self.labelend[bs] == -1:
                    break
                t = self.endpoint[self.labelend[bs]]
                bt = self.inblossom[t]
                s = self.endpoint[self.labelend[bt]]
                j = self.endpoint[self.labelend[bt] ^ 1]
                if bt >= self.nvertex:
                    self.augment_blossom(bt, j)
                self.mate[j] = self.labelend[bt]
                p = self.labelend[bt] ^ 1

    def solve(self) -> list[int]:
        nvertex = self.nvertex
        for _ in range(nvertex):
            self.label = [0] * (2 * nvertex)
            self.bestedge = [-1] * (2 * nvertex)
            for b in range(nvertex, 2 * nvertex):
                self.blossombestedges[b] = None
            self.allowedge = [False] * self.nedge
            self.queue = []
            for v in range(nvertex):
                if self.mate[v] == -1 and self.label[self.inblossom[v]] == 0:
                    self.assign_label(v, 1, -1)
            augmented = False
            while True:
                while self.queue and not augmented:
                    v = self.queue.pop()
                    for p in self.neighbend[v]:
                        k = p // 2
                        w = self.endpoint[p]
                        if self.inblossom[v] == self.inblossom[w]:
                            continue
                        if not self.allowedge[k]:
                            kslack = self.slack(k)
                            if kslack <= 0:
                                self.allowedge[k] = True
                        if self.allowedge[k]:
                            if self.label[self.inblossom[w]] == 0:
                                self.assign_label(w, 2, p ^ 1)
                            elif self.label[self.inblossom[w]] == 1:
                                base = self.scan_blossom(v, w)
                                if base >= 0:
                                    self.add_blossom(base, k)
                                else:
                                    self.augment_matching(k)
                                    augmented = True
                                    break
                            elif self.label[w] == 0:
                                self.label[w] = 2
                                self.labelend[w] = p ^ 1
                        elif self.label[self.inblossom[w]] == 1:
                            b = self.inblossom[v]
                            if self.bestedge[b] == -1 or kslack < self.slack(self.bestedge[b]):
                                self.bestedge[b] = k
                        elif self.label[w] == 0:
                            if self.bestedge[w] == -1 or kslack < self.slack(self.bestedge[w]):
                                self.bestedge[w] = k
                if augmented:
                    break
                # No augmenting path under the current duals: pick the
                # smallest admissible dual change.
                deltatype = 1
                delta = min(self.dualvar[:nvertex])
                deltaedge = -1
                deltablossom = -1
                for v in range(nvertex):
                    if self.label[self.inblossom[v]] == 0 and self.bestedge[v] != -1:
                        d = self.slack(self.bestedge[v])
                        if d < delta:
                            delta, deltatype, deltaedge = d, 2, self.bestedge[v]
                for b in range(2 * nvertex):
                    if (
                        self.blossomparent[b] == -1
                        and self.label[b] == 1
                        and self.bestedge[b] != -1
                    ):
                        # Both ends are S, so the slack is halved exactly.
                        d = Fraction(self.slack(self.bestedge[b]), 2)
                        if d < delta:
                            delta, deltatype, deltaedge = d, 3, self.bestedge[b]
                for b in range(nvertex, 2 * nvertex):
                    if (
                        self.blossombase[b] >= 0
                        and self.blossomparent[b] == -1
                        and self.label[b] == 2
                        and self.dualvar[b] < delta
                    ):
                        delta, deltatype, deltablossom = self.dualvar[b], 4, b
                if delta < 0:
                    delta = 0
                for v in range(nvertex):
                    lab = self.label[self.inblossom[v]]
                    if lab == 1:
                        self.dualvar[v] -= delta
                    elif lab == 2:
                        self.dualvar[v] += delta
                for b in range(nvertex, 2 * nvertex):
                    if self.blossombase[b] >= 0 and self.blossomparent[b] == -1:
                        if self.label[b] == 1:
                            self.dualvar[b] += delta
                        elif self.label[b] == 2:
                            self.dualvar[b] -= delta
                if deltatype == 1:
                    # Vertex duals hit zero: the matching is optimal.
                    break
                if deltatype == 2:
                    self.allowedge[deltaedge] = True
                    i, j, _ = self.edges[deltaedge]
                    if self.label[self.inblossom[i]] == 0:
                        i, j = j, i
                    self.queue.append(i)
                elif deltatype == 3:
                    self.allowedge[deltaedge] = True
                    i, _, _ = self.edges[deltaedge]
                    self.queue.append(i)
                else:
                    self.expand_blossom(deltablossom, False)
            if not augmented:
                break
            for b in range(nvertex, 2 * nvertex):
                if (
                    self.blossomparent[b] == -1
                    and self.blossombase[b] >= 0
                    and self.label[b] == 1
                    and self.dualvar[b] == 0
                ):
                    self.expand_blossom(b, True)
        return [-1 if p == -1 else self.endpoint[p] for p in self.mate]
