"""Two-coloring witnesses for anchored Hamiltonian cycles.

Given an anchored context (Pfaffian orientation with the anchor arc flipped
to (t, s)), every Hamiltonian cycle through the anchor has a unique vertex
coloring chi_H.  This module computes it, rebuilds the cycle from a coloring,
and translates between cycles and perfect matchings of the auxiliary graph
F_lambda whose nodes are pairs (vertex, bit).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .graph import Graph, GraphError, HamCycle
from .orientations import AnchoredContext, Orientation

Node = tuple[int, int]


@dataclass(frozen=True)
class VertexColoring:
    color: tuple[int, ...]

    def __init__(self, color):
        object.__setattr__(self, "color", tuple(int(c) for c in color))

    def __getitem__(self, v: int) -> int:
        return self.color[v]

    def restrict_left(self, ctx: AnchoredContext) -> "LeftColoring":
        return LeftColoring({v: self.color[v] for v in ctx.bip.left})


@dataclass(frozen=True)
class LeftColoring:
    lam: dict[int, int]

    def __getitem__(self, v: int) -> int:
        return self.lam[v]


@dataclass(frozen=True)
class BadColoring:
    reason: str

    def __bool__(self) -> bool:
        return False


def _arc_bits(g: Graph, o: Orientation, order: np.ndarray) -> np.ndarray:
    """For consecutive pairs (order[i], order[i+1]), 1 when o has that arc."""
    a, b = order[:-1], order[1:]
    eids = g.edge_ids(a, b)
    if np.any(eids < 0):
        raise GraphError("consecutive cycle vertices are not adjacent")
    return ((a > b).astype(np.uint8) ^ o.bits[eids]) ^ 1


def chi_of_cycle(ctx: AnchoredContext, h: HamCycle) -> VertexColoring:
    """chi(v0) = 0 and chi(v_{i+1}) = chi(v_i) + [(v_i, v_{i+1}) in pf_e]."""
    try:
        order = np.asarray(h.anchored(ctx.s, ctx.t).order, dtype=np.int64)
    except GraphError:
        raise GraphError("cycle is not anchored at the context edge") from None
    bits = _arc_bits(ctx.g, ctx.pf_e, order)
    chi_pos = np.zeros(len(order), dtype=np.uint8)
    chi_pos[1:] = np.cumsum(bits) % 2
    chi = np.empty(ctx.g.n, dtype=np.uint8)
    chi[order] = chi_pos
    return VertexColoring(chi.tolist())


def _check_ends(ctx: AnchoredContext, chi: VertexColoring) -> None:
    if chi[ctx.s] != 0 or chi[ctx.t] != 1:
        raise GraphError("coloring must have chi(s) = 0 and chi(t) = 1")


def induced_orientation(ctx: AnchoredContext, chi: VertexColoring) -> Orientation:
    """Reverse exactly the monochromatic edges of pf_e."""
    _check_ends(ctx, chi)
    c = np.asarray(chi.color, dtype=np.uint8)
    mono = (c[ctx.g.eu] == c[ctx.g.ev]).astype(np.uint8)
    return Orientation(ctx.pf_e.bits ^ mono)


def recover_cycle(ctx: AnchoredContext, chi: VertexColoring) -> HamCycle | BadColoring:
    """Peel the induced orientation minus (t, s) in topological order; a good
    coloring yields a unique order that is a directed Hamiltonian path."""
    g = ctx.g
    o = induced_orientation(ctx, chi)
    tails = np.where(o.bits == 1, g.ev, g.eu)
    heads = np.where(o.bits == 1, g.eu, g.ev)
    keep = np.ones(g.m, dtype=bool)
    keep[ctx.e] = False
    tails, heads = tails[keep], heads[keep]
    indeg = np.bincount(heads, minlength=g.n)
    outdeg = np.bincount(tails, minlength=g.n)
    sources = np.flatnonzero(indeg == 0)
    sinks = np.flatnonzero(outdeg == 0)
    if len(sources) != 1 or int(sources[0]) != ctx.s:
        return BadColoring(f"sources are {sources.tolist()[:5]}, expected only s={ctx.s}")
    if len(sinks) != 1 or int(sinks[0]) != ctx.t:
        return BadColoring(f"sinks are {sinks.tolist()[:5]}, expected only t={ctx.t}")
    order_arcs = np.argsort(tails, kind="stable")
    succ_ptr = np.zeros(g.n + 1, dtype=np.int64)
    np.cumsum(outdeg, out=succ_ptr[1:])
    succ = heads[order_arcs].tolist()
    ptr = succ_ptr.tolist()
    indeg_l = indeg.tolist()
    queue = deque([ctx.s])
    order: list[int] = []
    ambiguous = False
    while queue:
        if len(queue) > 1:
            ambiguous = True
        v = queue.popleft()
        order.append(v)
        for i in range(ptr[v], ptr[v + 1]):
            w = succ[i]
            indeg_l[w] -= 1
            if indeg_l[w] == 0:
                queue.append(w)
    if len(order) != g.n:
        return BadColoring("induced orientation has a directed cycle")
    if ambiguous:
        return BadColoring("topological order is not unique: longest path is not Hamiltonian")
    return HamCycle(order)


class FLambdaGraph:
    """Nodes (u, k); an edge (eid, l, p, r, rho) joins (l, p) and (r, rho)."""

    def __init__(self, ctx: AnchoredContext, lam: LeftColoring):
        self.ctx = ctx
        self.lam = lam
        self.edges: list[tuple[int, int, int, int, int]] = []
        self._adj: dict[Node, list[int]] = {}
        self._index: dict[tuple[Node, Node], int] = {}

    @property
    def nodes(self) -> list[Node]:
        return [(u, k) for u in range(self.ctx.g.n) for k in (0, 1)]

    def is_left_node(self, x: Node) -> bool:
        return self.ctx.bip.is_left(x[0])

    def add(self, eid: int, l: int, p: int, r: int, rho: int) -> None:
        i = len(self.edges)
        self.edges.append((eid, l, p, r, rho))
        a, b = (l, p), (r, rho)
        self._adj.setdefault(a, []).append(i)
        self._adj.setdefault(b, []).append(i)
        self._index[(a, b)] = i
        self._index[(b, a)] = i

    def neighbors(self, x: Node) -> list[Node]:
        out = []
        for i in self._adj.get(x, []):
            _, l, p, r, rho = self.edges[i]
            out.append((r, rho) if (l, p) == x else (l, p))
        return out

    def has_edge(self, a: Node, b: Node) -> bool:
        return (a, b) in self._index

    def edge_between(self, a: Node, b: Node) -> tuple[int, int, int, int, int]:
        return self.edges[self._index[(a, b)]]


def parity(ctx: AnchoredContext, lam_l: int, l: int, r: int) -> int:
    """rho = lambda(l) + [(l, r) in pf_e] mod 2."""
    return (lam_l + int(ctx.pf_e.has_arc(ctx.g, l, r))) % 2


def build_f_lambda(ctx: AnchoredContext, lam: LeftColoring) -> FLambdaGraph:
    if lam[ctx.s] != 0:
        raise GraphError("left coloring must have lambda(s) = 0")
    f = FLambdaGraph(ctx, lam)
    g = ctx.g
    for eid, (u, v) in enumerate(g.edges):
        l, r = (u, v) if ctx.bip.is_left(u) else (v, u)
        rho = parity(ctx, lam[l], l, r)
        for p in (0, 1):
            if l != ctx.s or p != 0 or r == ctx.t:
                f.add(eid, l, p, r, rho)
    return f


PortedMatching = dict  # node -> partner node, both directions stored


def matching_edges(m: PortedMatching) -> set[frozenset]:
    return {frozenset((a, b)) for a, b in m.items()}


def transpose_ports(m: PortedMatching, l: int) -> PortedMatching:
    out = dict(m)
    a, b = m[(l, 0)], m[(l, 1)]
    out[(l, 0)], out[(l, 1)] = b, a
    out[b], out[a] = (l, 0), (l, 1)
    return out


def matching_to_cycle(f: FLambdaGraph, m: PortedMatching) -> HamCycle:
    """Follow matched edges from [s,1]: flip parity at R-nodes and port at
    L-nodes until [s,1] is reached again."""
    ctx = f.ctx
    n = ctx.g.n
    for a, b in m.items():
        if m.get(b) != a or not f.has_edge(a, b):
            raise GraphError(f"not a perfect matching of F_lambda at {a}")
    if len(m) != 2 * n:
        raise GraphError("matching is not perfect")
    order = [ctx.s]
    l, p = ctx.s, 1
    while True:
        r, rho = m[(l, p)]
        order.append(r)
        l2, p2 = m[(r, 1 - rho)]
        l, p = l2, 1 - p2
        if (l, p) == (ctx.s, 1):
            break
        if len(order) >= n:
            raise GraphError("traversal does not close after n vertices")
        order.append(l)
    if len(order) != n:
        raise GraphError(f"traversal closed early after {len(order)} of {n} vertices")
    return HamCycle(order)


def cycle_to_matching(f: FLambdaGraph, h: HamCycle) -> PortedMatching:
    ctx = f.ctx
    order = h.anchored(ctx.s, ctx.t).order
    chi = chi_of_cycle(ctx, h)
    for v in order[0::2]:
        if f.lam[v] != chi[v]:
            raise GraphError(f"lambda disagrees with the cycle coloring at {v}")
    k = len(order) // 2
    m: PortedMatching = {}
    for i in range(k):
        li, ri, lnext = order[2 * i], order[2 * i + 1], order[(2 * i + 2) % len(order)]
        rho = chi[ri]
        for a, b in (((li, 1), (ri, rho)), ((lnext, 0), (ri, 1 - rho))):
            if not f.has_edge(a, b):
                raise GraphError(f"{a}-{b} is not an edge of F_lambda")
            m[a], m[b] = b, a
    return m
