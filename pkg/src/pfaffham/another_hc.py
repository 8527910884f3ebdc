"""Another anchored Hamiltonian cycle in a bipartite Pfaffian graph of
minimum degree 3.

The witness graph D lives on the left vertices: an arc l -> l' steps along a
non-matching F_lambda edge [l,p]-[r,rho] and then along the matching edge
[r,rho]-[l',p'].  The vertex s has no incoming arcs, so walking successors
from s closes a directed cycle avoiding s; switching the matching along the
corresponding alternating cycle yields a different Hamiltonian cycle through
the anchor.

Three entry points:
  another_cycle_reference  literal F_lambda / matching construction (small n)
  another_cycle            array implementation of the same switch, linear time
  another_cycle_logspace   constant number of integer registers over read-only input
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, GraphError, HamCycle
from .orientations import AnchoredContext, context_from_orientation
from .witness import (FLambdaGraph, PortedMatching, build_f_lambda, chi_of_cycle,
                      cycle_to_matching, matching_to_cycle, transpose_ports)


class MinDegreeError(GraphError):
    def __init__(self, v: int, deg: int):
        super().__init__(
            f"minimum degree 3 required: vertex {v} has degree {deg} "
            "(without this bound finding another Hamiltonian cycle is NP-hard)")
        self.vertex = v


def require_min_degree3(g: Graph) -> None:
    deg = g.degrees()
    if g.n and deg.min() < 3:
        v = int(np.argmin(deg))
        raise MinDegreeError(v, int(deg[v]))


@dataclass(frozen=True)
class Witness:
    r: int
    rho: int
    p: int
    p2: int
    eid: int


@dataclass
class DGraph:
    s: int
    arcs: dict[int, dict[int, Witness]] = field(default_factory=dict)

    def successor(self, l: int) -> tuple[int, Witness] | None:
        out = self.arcs.get(l)
        if not out:
            return None
        l2, w = min(out.items(), key=lambda kv: (kv[1].eid, kv[1].p))
        return l2, w

    def out_degree(self, l: int) -> int:
        return len(self.arcs.get(l, {}))

    def in_degree(self, l: int) -> int:
        return sum(l in out for out in self.arcs.values())


def build_d_graph(f: FLambdaGraph, m: PortedMatching) -> DGraph:
    d = DGraph(f.ctx.s, {l: {} for l in f.ctx.bip.left})
    for (eid, l, p, r, rho) in f.edges:
        if m.get((l, p)) == (r, rho):
            continue
        l2, p2 = m[(r, rho)]
        if l2 == l:
            continue
        w = Witness(r, rho, p, p2, eid)
        old = d.arcs[l].get(l2)
        if old is None or (eid, p) < (old.eid, old.p):
            d.arcs[l][l2] = w
    return d


def find_s_avoiding_cycle(d: DGraph, s: int) -> list[tuple[int, int, Witness]]:
    """Walk successor arcs from s; the first repeated vertex closes the cycle."""
    seen: dict[int, int] = {}
    walk: list[tuple[int, int, Witness]] = []
    v = s
    while v not in seen:
        seen[v] = len(walk)
        nxt = d.successor(v)
        if nxt is None:
            raise GraphError(f"vertex {v} has out-degree 0 in D (host minimum degree < 3?)")
        l2, w = nxt
        walk.append((v, l2, w))
        v = l2
    cycle = walk[seen[v]:]
    if any(a == s for a, _, _ in cycle):
        raise GraphError("directed cycle passes through s: orientation is not Pfaffian")
    return cycle


def another_cycle_reference(ctx: AnchoredContext, h: HamCycle) -> HamCycle:
    require_min_degree3(ctx.g)
    chi = chi_of_cycle(ctx, h)
    f = build_f_lambda(ctx, chi.restrict_left(ctx))
    m = cycle_to_matching(f, h)
    d = build_d_graph(f, m)
    cyc = find_s_avoiding_cycle(d, ctx.s)
    k = len(cyc)
    for j in range(k):
        _, l_next, w = cyc[j]
        p_next = cyc[(j + 1) % k][2].p
        if m[(w.r, w.rho)] != (l_next, p_next):
            m = transpose_ports(m, l_next)
    alt: list[tuple] = []
    for j in range(k):
        l, l_next, w = cyc[j]
        p_next = cyc[(j + 1) % k][2].p
        alt.append(((l, w.p), (w.r, w.rho)))
        alt.append(((l_next, p_next), (w.r, w.rho)))
    m2 = dict(m)
    for j in range(0, 2 * k, 2):
        a, b = alt[j + 1]
        del m2[a], m2[b]
    for j in range(0, 2 * k, 2):
        a, b = alt[j]
        m2[a], m2[b] = b, a
    return matching_to_cycle(f, m2)


@dataclass
class OpStats:
    """Element visits of the linear-time pipeline plus the D-cycle length."""

    ops: int = 0
    walk: int = 0
    cycle_len: int = 0


def another_cycle(ctx: AnchoredContext, h: HamCycle, stats: OpStats | None = None,
                  check_degree: bool = True) -> HamCycle:
    g = ctx.g
    n, m = g.n, g.m
    st = stats if stats is not None else OpStats()
    if check_degree:
        require_min_degree3(g)
        st.ops += 2 * m
    s, t = ctx.s, ctx.t
    order = np.asarray(h.order, dtype=np.int64)
    if len(order) != n:
        raise GraphError("cycle length differs from vertex count")
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    ps, pt = int(pos[s]), int(pos[t])
    if (ps + 1) % n == pt:          # walk backwards so that s comes first, t last
        order = np.roll(order[::-1], ps + 1)
    elif (pt + 1) % n == ps:
        order = np.roll(order, -ps)
    else:
        raise GraphError("cycle does not contain the anchor edge")
    pos[order] = np.arange(n)
    nxt = np.roll(order, -1)[pos]
    prv = np.roll(order, 1)[pos]
    eu, ev = g.eu, g.ev
    fwd = nxt[eu] == ev
    is_h = fwd | (nxt[ev] == eu)
    st.ops += 4 * n + 4 * m
    # chi along the cycle from the pf_e arcs of its edges
    h_ids = np.flatnonzero(is_h)
    if len(h_ids) != n:
        raise GraphError("cycle edges are not all graph edges")
    tail_first = np.where(fwd[h_ids], eu[h_ids], ev[h_ids])
    at_pos = np.empty(n, dtype=np.int64)
    at_pos[pos[tail_first]] = h_ids
    bits = ctx.pf_e.bits[at_pos[:-1]]
    along = (np.where(bits == 0, eu[at_pos[:-1]], ev[at_pos[:-1]]) == order[:-1]).astype(np.int64)
    chi_pos = np.zeros(n, dtype=np.int64)
    chi_pos[1:] = np.cumsum(along) & 1
    chi = chi_pos[pos]
    st.ops += 4 * n
    # successor arc of each left vertex: smallest-id non-cycle edge
    side = np.asarray(ctx.bip.side, dtype=np.int8)
    non_h = np.flatnonzero(~is_h)
    a, b = eu[non_h], ev[non_h]
    left_is_a = side[a] == 0
    ell = np.where(left_is_a, a, b)
    best = np.full(n, m, dtype=np.int64)
    np.minimum.at(best, ell, non_h)
    st.ops += 4 * (m - n) + n
    left = order[0::2]
    bl = best[left]
    if np.any(bl == m):
        v = int(left[np.flatnonzero(bl == m)[0]])
        raise GraphError(f"vertex {v} has out-degree 0 in D (host minimum degree < 3?)")
    r_of = np.full(n, -1, dtype=np.int64)
    e_sel = bl
    u_sel, v_sel = eu[e_sel], ev[e_sel]
    r_sel = np.where(u_sel == left, v_sel, u_sel)
    arc_lr = np.where(ctx.pf_e.bits[e_sel] == 0, u_sel, v_sel) == left
    rho = chi[left] ^ arc_lr.astype(np.int64)
    succ_l = np.where(rho == chi[r_sel], prv[r_sel], nxt[r_sel])
    succ = np.full(n, -1, dtype=np.int64)
    succ[left] = succ_l
    r_of[left] = r_sel
    st.ops += 8 * len(left)
    succ_list = succ.tolist()
    r_list = r_of.tolist()
    seen: dict[int, int] = {}
    walk: list[int] = []
    v = s
    while v not in seen:
        seen[v] = len(walk)
        walk.append(v)
        v = succ_list[v]
        if v == s:
            raise GraphError("D has an arc into s: orientation is not Pfaffian")
    cyc = walk[seen[v]:]
    st.walk += len(walk)
    st.cycle_len = len(cyc)
    st.ops += len(walk)
    # switch: drop {r_j, l_{j+1}}, add {l_j, r_j}
    nb0 = prv.tolist()
    nb1 = nxt.tolist()

    def replace(x: int, old: int, new: int) -> None:
        if nb0[x] == old:
            nb0[x] = new
        elif nb1[x] == old:
            nb1[x] = new
        else:
            raise GraphError(f"switch inconsistent at vertex {x}")

    k = len(cyc)
    removed = [(r_list[cyc[j]], cyc[(j + 1) % k]) for j in range(k)]
    for r, l2 in removed:
        replace(r, l2, -1)
        replace(l2, r, -1)
    for j in range(k):
        l, r = cyc[j], r_list[cyc[j]]
        replace(l, -1, r)
        replace(r, -1, l)
    st.ops += 4 * k
    out = [s]
    prev, cur = t, s
    for _ in range(n - 1):
        a0 = nb0[cur]
        nxt_v = nb1[cur] if a0 == prev else a0
        prev, cur = cur, nxt_v
        if cur == s:
            raise GraphError(f"switched edge set closes a cycle after {len(out)} of {n} vertices")
        out.append(cur)
    if cur != t:
        raise GraphError("switched edge set is not a Hamiltonian cycle")
    st.ops += n
    return HamCycle(out)


def four_anchored_cycles(ctx: AnchoredContext, h: HamCycle) -> list[HamCycle]:
    """h, then one switch with L on the fixed side, one with the roles of L/R,
    s/t and the colors exchanged, and that exchanged switch applied to h'.
    The same orientation is used throughout."""
    h1 = another_cycle(ctx, h)
    sw = ctx.swapped()
    h2 = another_cycle(sw, h)
    h3 = another_cycle(sw, h1)
    out = [h, h1, h2, h3]
    keys = {c.edge_keys() for c in out}
    if len(keys) != 4:
        raise GraphError("the four anchored cycles are not pairwise distinct")
    return out


def five_cycles(ctx: AnchoredContext, h: HamCycle) -> list[HamCycle]:
    """h plus four cycles through an edge f of h' that h does not use."""
    h1 = another_cycle(ctx, h)
    g = ctx.g
    new = sorted(h1.edge_set(g) - h.edge_set(g))
    ctx_f = context_from_orientation(g, new[0], ctx.pf, ctx.bip)
    out = [h] + four_anchored_cycles(ctx_f, h1)
    if len({c.edge_keys() for c in out}) != 5:
        raise GraphError("constructed cycles are not pairwise distinct")
    return out


class RegisterBudgetError(RuntimeError):
    pass


class RegisterFile:
    """Named integer registers with a hard budget and a peak counter."""

    def __init__(self, n: int, budget: int = 8):
        self._vals: dict[str, int] = {}
        self.n = n
        self.budget = budget
        self.peak = 0

    def __setitem__(self, name: str, value: int) -> None:
        if type(value) is not int or not -self.n <= value <= 2 * self.n:
            raise RegisterBudgetError(f"register {name} must hold a small integer, got {value!r}")
        self._vals[name] = value
        if len(self._vals) > self.budget:
            raise RegisterBudgetError(f"register budget {self.budget} exceeded: {sorted(self._vals)}")
        self.peak = max(self.peak, len(self._vals))

    def __getitem__(self, name: str) -> int:
        return self._vals[name]

    def free(self, *names: str) -> None:
        for name in names:
            self._vals.pop(name, None)


class ReadOnlyInput:
    """Input tapes: adjacency lists in edge-id order, the cycle as a vertex
    sequence and its inverse position table, and the anchor edge."""

    def __init__(self, g: Graph, h: HamCycle, e: int):
        indptr, nbr, _ = g.csr
        self._indptr = indptr.tolist()
        self._nbr = nbr.tolist()
        self._order = list(h.order)
        pos = [0] * g.n
        for i, v in enumerate(self._order):
            pos[v] = i
        self._pos = pos
        self.n = g.n
        self.anchor = (int(g.eu[e]), int(g.ev[e]))
        self.reads = 0

    def deg(self, v: int) -> int:
        self.reads += 1
        return self._indptr[v + 1] - self._indptr[v]

    def nbr(self, v: int, i: int) -> int:
        self.reads += 1
        return self._nbr[self._indptr[v] + i]

    def at(self, i: int) -> int:
        self.reads += 1
        return self._order[i % self.n]

    def pos(self, v: int) -> int:
        self.reads += 1
        return self._pos[v]


@dataclass
class LogspaceReport:
    peak_registers: int
    input_reads: int
    cycle_len: int


def another_cycle_logspace(g: Graph, h: HamCycle, e: int, report: dict | None = None,
                           budget: int = 8, tape: ReadOnlyInput | None = None):
    """Stream the edges of another anchored Hamiltonian cycle.

    Uses only a fixed set of integer registers (each a vertex id or a counter):
    the id of a vertex is its distance from s along the cycle oriented towards
    t; an edge is a cycle edge iff the ids of its ends differ by 1 or n-1; the
    orientation runs from smaller to larger id.  D' keeps for each left vertex
    v only the arc through the first non-cycle neighbor w, landing at the cycle
    predecessor of w when id(v) < id(w) and at its successor otherwise.
    """
    tape = tape or ReadOnlyInput(g, h, e)
    n = tape.n
    R = RegisterFile(n, budget)
    # degree check on the tape; the array version would allocate n cells
    R["i"] = 0
    while R["i"] < n:
        if tape.deg(R["i"]) < 3:
            raise MinDegreeError(R["i"], tape.deg(R["i"]))
        R["i"] = R["i"] + 1

    def ident(v: int) -> int:
        return ((tape.pos(v) - R["ps"]) * R["dir"]) % n

    def vertex_at(k: int) -> int:
        return tape.at(R["ps"] + R["dir"] * k)

    def on_cycle(v: int, w: int) -> bool:
        d = (ident(v) - ident(w)) % n
        return d == 1 or d == n - 1

    def first_free_nbr(v: int) -> int:
        R["j"] = 0
        while on_cycle(v, tape.nbr(v, R["j"])):
            R["j"] = R["j"] + 1
            if R["j"] >= tape.deg(v):
                raise GraphError(f"vertex {v} has no non-cycle edge")
        w = tape.nbr(v, R["j"])
        R.free("j")
        return w

    def d_step(v: int) -> None:
        """Set w to the witness neighbor of v and y to its D' successor."""
        R["w"] = first_free_nbr(v)
        if ident(v) < ident(R["w"]):
            R["y"] = vertex_at(ident(R["w"]) - 1)
        else:
            R["y"] = vertex_at(ident(R["w"]) + 1)

    # s is the anchor end on the side of vertex 0 (same parity of cycle position)
    a, b = tape.anchor
    R["ps"] = tape.pos(a)
    if (tape.pos(0) - R["ps"]) % 2:
        R["ps"] = tape.pos(b)
    R["dir"] = 1
    if tape.at(R["ps"] + 1) in (a, b):
        R["dir"] = -1
    # n steps of D' from s land on its cycle
    R["x"] = tape.at(R["ps"])
    R["i"] = 0
    while R["i"] < n:
        d_step(R["x"])
        R["x"] = R["y"]
        R["i"] = R["i"] + 1
    R["c"] = R["x"]
    R.free("w", "y")
    # (i) cycle edges other than the dropped {r_j, l_{j+1}}: one revolution each
    R["i"] = 0
    while R["i"] < n:
        R["x"] = R["c"]
        while True:
            d_step(R["x"])
            if {R["w"], R["y"]} == {vertex_at(R["i"]), vertex_at(R["i"] + 1)}:
                break
            R["x"] = R["y"]
            if R["x"] == R["c"]:
                yield (vertex_at(R["i"]), vertex_at(R["i"] + 1))
                break
        R.free("w", "y")
        R["i"] = R["i"] + 1
    # (ii) the added edges {l_j, r_j}
    R["x"] = R["c"]
    R["i"] = 0
    while True:
        d_step(R["x"])
        yield (R["x"], R["w"])
        R["i"] = R["i"] + 1
        R["x"] = R["y"]
        if R["x"] == R["c"]:
            break
    if report is not None:
        report.update(peak_registers=R.peak, input_reads=tape.reads, cycle_len=R["i"])


def logspace_cycle(g: Graph, h: HamCycle, e: int, report: dict | None = None) -> HamCycle:
    """Collect the streamed edge set and order it as a cycle from vertex 0."""
    nb: list[list[int]] = [[] for _ in range(g.n)]
    for u, v in another_cycle_logspace(g, h, e, report):
        nb[u].append(v)
        nb[v].append(u)
    if any(len(x) != 2 for x in nb):
        raise GraphError("emitted edges do not form a 2-regular graph")
    out = [0]
    prev, cur = -1, 0
    for _ in range(g.n - 1):
        a, b = nb[cur]
        prev, cur = cur, (b if a == prev else a)
        out.append(cur)
    return HamCycle(out)
