"""Minimum-weight tours and Hamiltonian-cycle counts by dynamic programming
over path and branch decompositions.

Each vertex carries one of four states: S00 (untouched), S01 / S10 (one
matched edge, with color 0 / 1 on the left side, or parity 0 / 1 used on the
right side) and S11 (done).  An edge {l, r} with l on the left moves the pair
of states according to TRANSITIONS, split on whether the anchored orientation
contains the arc (l, r).  Completed tables count port-free perfect matchings
of F_lambda that contain the anchor edge, which correspond one-to-one to
Hamiltonian cycles through the anchor when the orientation is Pfaffian.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .graph import Bipartition, Graph, GraphError, bipartition
from .orientations import AnchoredContext, Orientation, context_from_orientation

S00, S01, S10, S11 = 0, 1, 2, 3
STATE_NAMES = {S00: "00", S01: "01", S10: "10", S11: "11"}

# (state(l), state(r)) -> successor pairs, keyed by [(l, r) in pf_e]
TRANSITIONS: dict[bool, dict[tuple[int, int], list[tuple[int, int]]]] = {
    False: {
        (S00, S00): [(S01, S01), (S10, S10)],
        (S00, S01): [(S10, S11)],
        (S00, S10): [(S01, S11)],
        (S01, S00): [(S11, S01)],
        (S01, S10): [(S11, S11)],
        (S10, S00): [(S11, S10)],
        (S10, S01): [(S11, S11)],
    },
    True: {
        (S00, S00): [(S01, S10), (S10, S01)],
        (S00, S01): [(S01, S11)],
        (S00, S10): [(S10, S11)],
        (S01, S00): [(S11, S10)],
        (S01, S01): [(S11, S11)],
        (S10, S00): [(S11, S01)],
        (S10, S10): [(S11, S11)],
    },
}

# forget-set partners: a left / right vertex is complete when the two sides match
MATCH_LEFT = {S00: S11, S01: S01, S10: S10, S11: S00}
MATCH_RIGHT = {S00: S11, S01: S10, S10: S01, S11: S00}


def derived_transitions(in_pfe: bool) -> dict[tuple[int, int], list[tuple[int, int]]]:
    """The transition table recomputed from its meaning: l picks color lam,
    the edge uses parity lam + [(l,r) in pf_e] at r, and r may use each
    parity once."""
    out: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for a in (S00, S01, S10):
        for b in (S00, S01, S10):
            colors = (0, 1) if a == S00 else ((0,) if a == S01 else (1,))
            succ = []
            for lam in colors:
                rho = lam ^ int(in_pfe)
                if b == S00:
                    b2 = S01 if rho == 0 else S10
                elif (b == S01 and rho == 1) or (b == S10 and rho == 0):
                    b2 = S11
                else:
                    continue
                a2 = (S01 if lam == 0 else S10) if a == S00 else S11
                succ.append((a2, b2))
            if succ:
                out[(a, b)] = succ
    return out


def combine_state(a: int, b: int, left: bool) -> int | None:
    """State of a vertex whose edges split between two sides, or None."""
    if a == S00:
        return b
    if b == S00:
        return a
    match = MATCH_LEFT if left else MATCH_RIGHT
    return S11 if match[a] == b else None


# ---------------------------------------------------------------- semirings

class MinPlus:
    """Minimum total weight; values are Fractions."""

    one = Fraction(0)

    def __init__(self, n: int):
        self.n = n

    @staticmethod
    def edge(w: Fraction) -> Fraction:
        return Fraction(w)

    @staticmethod
    def mul(a, b):
        return a + b

    @staticmethod
    def add(a, b):
        return b if a is None or b < a else a


class CountXi:
    """Counts as sparse vectors indexed by number of edges used, capped at n."""

    one = {0: 1}

    def __init__(self, n: int):
        self.n = n

    @staticmethod
    def edge(w) -> dict[int, int]:
        return {1: 1}

    def mul(self, a: dict, b: dict) -> dict:
        out: dict[int, int] = {}
        for i, x in a.items():
            for j, y in b.items():
                if i + j <= self.n:
                    out[i + j] = out.get(i + j, 0) + x * y
        return out

    @staticmethod
    def add(a, b):
        if a is None:
            return dict(b)
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, 0) + v
        return out


def _pack(states: Sequence[int]) -> int:
    code = 0
    for i, x in enumerate(states):
        code |= x << (2 * i)
    return code


def _unpack(code: int, k: int) -> list[int]:
    return [(code >> (2 * i)) & 3 for i in range(k)]


# ------------------------------------------------------ path decompositions

@dataclass
class PathDecomposition:
    bags: list[tuple[int, ...]]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def validate(self, g: Graph) -> None:
        first: dict[int, int] = {}
        last: dict[int, int] = {}
        for i, bag in enumerate(self.bags):
            if len(set(bag)) != len(bag):
                raise GraphError(f"bag {i} repeats a vertex")
            for v in bag:
                if not 0 <= v < g.n:
                    raise GraphError(f"bag {i} has out-of-range vertex {v}")
                if v in last and last[v] != i - 1:
                    raise GraphError(f"occurrences of vertex {v} are not contiguous")
                first.setdefault(v, i)
                last[v] = i
        missing = set(range(g.n)) - set(first)
        if missing:
            raise GraphError(f"vertex {min(missing)} is in no bag")
        sets = [set(b) for b in self.bags]
        for e, (u, v) in enumerate(g.edges):
            lo, hi = max(first[u], first[v]), min(last[u], last[v])
            if lo > hi or not any(u in sets[i] and v in sets[i] for i in range(lo, hi + 1)):
                raise GraphError(f"edge {e} = {{{u},{v}}} is in no bag")


@dataclass(frozen=True)
class NiceNode:
    kind: str            # "leaf", "introduce", "edge", "forget"
    vertex: int = -1
    edge: int = -1


@dataclass
class NicePathDecomposition:
    nodes: list[NiceNode]
    width: int

    def validate(self, g: Graph) -> None:
        bag: set[int] = set()
        introduced = [0] * g.m
        for node in self.nodes:
            if node.kind == "introduce":
                if node.vertex in bag:
                    raise GraphError(f"vertex {node.vertex} introduced twice")
                bag.add(node.vertex)
            elif node.kind == "forget":
                bag.discard(node.vertex)
            elif node.kind == "edge":
                u, v = int(g.eu[node.edge]), int(g.ev[node.edge])
                if u not in bag or v not in bag:
                    raise GraphError(f"edge {node.edge} introduced outside its bag")
                introduced[node.edge] += 1
            if len(bag) > self.width + 1:
                raise GraphError("nice decomposition is wider than announced")
        if any(c != 1 for c in introduced):
            raise GraphError("some edge is not introduced exactly once")


def make_nice(pd: PathDecomposition, g: Graph) -> NicePathDecomposition:
    pd.validate(g)
    sets = [set(b) for b in pd.bags]
    home: dict[int, list[int]] = defaultdict(list)
    for e, (u, v) in enumerate(g.edges):
        i = next(i for i, s in enumerate(sets) if u in s and v in s)
        home[i].append(e)
    nodes = [NiceNode("leaf")]
    prev: tuple[int, ...] = ()
    for i, bag in enumerate(pd.bags):
        cur = set(bag)
        for v in prev:
            if v not in cur:
                nodes.append(NiceNode("forget", vertex=v))
        for v in bag:
            if v not in prev:
                nodes.append(NiceNode("introduce", vertex=v))
        for e in home[i]:
            nodes.append(NiceNode("edge", edge=e))
        prev = bag
    for v in prev:
        nodes.append(NiceNode("forget", vertex=v))
    nodes.append(NiceNode("leaf"))
    return NicePathDecomposition(nodes, pd.width)


def linear_path_decomposition(g: Graph, order: Sequence[int] | None = None) -> PathDecomposition:
    """Bag i holds order[i] and every earlier vertex with a neighbor at or after i."""
    order = list(range(g.n)) if order is None else list(order)
    pos = {v: i for i, v in enumerate(order)}
    reach = [max([pos[v]] + [pos[w] for w, _ in g.adjacency[v]]) for v in range(g.n)]
    bags = []
    for i, v in enumerate(order):
        bag = [u for u in order[:i] if reach[u] >= i] + [v]
        bags.append(tuple(bag))
    return PathDecomposition(bags)


def grid_path_decomposition(rows: int, cols: int) -> PathDecomposition:
    """Column sweep over the rows x cols grid (vertex (r, c) = r*cols + c)."""
    if rows < 1 or cols < 1:
        raise GraphError("grid needs rows, cols >= 1")
    order = [r * cols + c for c in range(cols) for r in range(rows)]
    bags = []
    for i, v in enumerate(order):
        bags.append(tuple(order[max(0, i - rows):i]) + (v,))
    return PathDecomposition(bags)


def parse_path_decomposition(text: str) -> PathDecomposition:
    bags: dict[int, tuple[int, ...]] = {}
    links: list[tuple[int, int]] = []
    header = None
    for lineno, line in enumerate(text.splitlines(), 1):
        tok = line.split()
        if not tok or tok[0] == "c":
            continue
        try:
            if tok[0] == "s":
                if tok[1] != "td":
                    raise GraphError("expected 's td'", lineno)
                header = tuple(int(x) for x in tok[2:5])
            elif tok[0] == "b":
                bags[int(tok[1])] = tuple(int(x) for x in tok[2:])
            else:
                links.append((int(tok[0]), int(tok[1])))
        except (ValueError, IndexError):
            raise GraphError("malformed decomposition line", lineno) from None
    if header is None or header[0] != len(bags):
        raise GraphError("header missing or bag count mismatch")
    if len(bags) <= 1:
        return PathDecomposition(list(bags.values()))
    adj: dict[int, list[int]] = defaultdict(list)
    for a, b in links:
        adj[a].append(b)
        adj[b].append(a)
    if len(links) != len(bags) - 1 or any(len(x) > 2 for x in adj.values()):
        raise GraphError("bag tree is not a path")
    start = min(b for b in bags if len(adj[b]) == 1)
    seq, prev = [start], None
    while len(seq) < len(bags):
        nxt = [x for x in adj[seq[-1]] if x != prev]
        if not nxt:
            raise GraphError("bag tree is not connected")
        prev = seq[-1]
        seq.append(nxt[0])
    return PathDecomposition([bags[b] for b in seq])


def serialize_path_decomposition(pd: PathDecomposition, n: int) -> str:
    k = len(pd.bags)
    out = [f"s td {k} {pd.width + 1} {n}"]
    out += [f"b {i + 1} {' '.join(map(str, b))}".rstrip() for i, b in enumerate(pd.bags)]
    out += [f"{i} {i + 1}" for i in range(1, k)]
    return "\n".join(out) + "\n"


# --------------------------------------------------------------- path DP

@dataclass
class DPReport:
    max_table: int = 0
    bound_ok: bool = True


def _arc_in(ctx: AnchoredContext, e: int, l: int) -> bool:
    """[(l, r) in pf_e] for the edge e with left end l."""
    tail = int(ctx.g.ev[e]) if ctx.pf_e.bits[e] else int(ctx.g.eu[e])
    return tail == l


def _path_dp(ctx: AnchoredContext, npd: NicePathDecomposition, sr, weights,
             report: DPReport | None = None):
    g, s = ctx.g, ctx.s
    table: dict[int, object] = {0: sr.one}
    bag: list[int] = []
    for node in npd.nodes:
        if node.kind == "introduce":
            bag.append(node.vertex)
        elif node.kind == "forget":
            i = bag.index(node.vertex)
            low = (1 << (2 * i)) - 1
            new: dict[int, object] = {}
            for code, val in table.items():
                if (code >> (2 * i)) & 3 != S11:
                    continue
                c2 = (code & low) | ((code >> (2 * i + 2)) << (2 * i))
                new[c2] = sr.add(new.get(c2), val)
            table = new
            bag.pop(i)
        elif node.kind == "edge":
            e = node.edge
            u, v = int(g.eu[e]), int(g.ev[e])
            l, r = (u, v) if ctx.bip.is_left(u) else (v, u)
            il, ir = bag.index(l), bag.index(r)
            rules = TRANSITIONS[_arc_in(ctx, e, l)]
            w = sr.edge(weights[e] if weights is not None else 1)
            forced = e == ctx.e
            new = {} if forced else dict(table)
            for code, val in table.items():
                a, b = (code >> (2 * il)) & 3, (code >> (2 * ir)) & 3
                succ = rules.get((a, b))
                if not succ:
                    continue
                base = code & ~(3 << (2 * il)) & ~(3 << (2 * ir))
                wv = sr.mul(val, w)
                for a2, b2 in succ:
                    if l == s and a2 == S10:
                        continue
                    c2 = base | (a2 << (2 * il)) | (b2 << (2 * ir))
                    new[c2] = sr.add(new.get(c2), wv)
            table = new
        if report is not None:
            report.max_table = max(report.max_table, len(table))
            k = len(bag)
            bound = 3 * 4 ** (k - 1) if s in bag else 4 ** k
            if len(table) > bound:
                report.bound_ok = False
    return table.get(0)


def tsp_pathwidth(ctx: AnchoredContext, weights, npd: NicePathDecomposition,
                  report: DPReport | None = None) -> Fraction | None:
    """Minimum weight of a Hamiltonian cycle through the anchor, or None."""
    npd.validate(ctx.g)
    return _path_dp(ctx, npd, MinPlus(ctx.g.n), weights, report)


def anchored_count_pathwidth(ctx: AnchoredContext, npd: NicePathDecomposition,
                             report: DPReport | None = None) -> int:
    n = ctx.g.n
    res = _path_dp(ctx, npd, CountXi(n), None, report)
    return (res or {}).get(n, 0)


def _sum_over_anchors(g: Graph, pf: Orientation, per_anchor: Callable[[AnchoredContext], int],
                      bip: Bipartition | None = None) -> int:
    bip = bip or bipartition(g)
    total = sum(per_anchor(context_from_orientation(g, e, pf, bip)) for e in range(g.m))
    q, rem = divmod(total, g.n)
    if rem:
        raise GraphError(f"anchored counts sum to {total}, not a multiple of n={g.n}")
    return q


def count_hc_pathwidth(g: Graph, npd: NicePathDecomposition, pf: Orientation) -> int:
    npd.validate(g)
    return _sum_over_anchors(g, pf, lambda ctx: anchored_count_pathwidth(ctx, npd))


def tsp_min_over_anchors(g: Graph, pf: Orientation, solve: Callable[[AnchoredContext], Fraction | None],
                         bip: Bipartition | None = None) -> Fraction | None:
    """Unanchored optimum: every tour uses an edge at vertex 0."""
    bip = bip or bipartition(g)
    best = None
    for _, e in g.adjacency[0]:
        val = solve(context_from_orientation(g, e, pf, bip))
        if val is not None and (best is None or val < best):
            best = val
    return best


# ---------------------------------------------------- branch decompositions

@dataclass
class BranchDecomposition:
    """Unrooted binary tree; leaf node -> host edge id."""

    leaves: dict[int, int]
    tree_edges: list[tuple[int, int]]
    middle: list[frozenset[int]] = field(default_factory=list)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.middle), default=0)

    def tree_adj(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = defaultdict(list)
        for i, (a, b) in enumerate(self.tree_edges):
            adj[a].append(i)
            adj[b].append(i)
        return adj

    def validate(self, g: Graph) -> None:
        if sorted(self.leaves.values()) != list(range(g.m)):
            raise GraphError("leaf labels are not a bijection onto the edges")
        adj = self.tree_adj()
        nodes = set(adj) | set(self.leaves)
        if g.m >= 2 and len(self.tree_edges) != len(nodes) - 1:
            raise GraphError("branch decomposition is not a tree")
        for v in nodes:
            deg = len(adj[v])
            if v in self.leaves and deg != 1 and g.m > 1:
                raise GraphError(f"leaf node {v} has degree {deg}")
            if v not in self.leaves and deg != 3:
                raise GraphError(f"internal node {v} has degree {deg}")
        mids = compute_middle_sets(self, g)
        if self.middle and [set(x) for x in self.middle] != [set(x) for x in mids]:
            raise GraphError("stored middle sets disagree with the leaf labels")
        self.middle = mids


def _side_vertices(bd: BranchDecomposition, g: Graph, root_node: int, banned_edge: int) -> set[int]:
    """Host vertices covered by leaves reachable from root_node avoiding banned_edge."""
    adj = bd.tree_adj()
    seen = {root_node}
    stack = [root_node]
    verts: set[int] = set()
    while stack:
        x = stack.pop()
        if x in bd.leaves:
            e = bd.leaves[x]
            verts.update((int(g.eu[e]), int(g.ev[e])))
        for te in adj[x]:
            if te == banned_edge:
                continue
            a, b = bd.tree_edges[te]
            y = b if a == x else a
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return verts


def compute_middle_sets(bd: BranchDecomposition, g: Graph) -> list[frozenset[int]]:
    out = []
    for i, (a, b) in enumerate(bd.tree_edges):
        out.append(frozenset(_side_vertices(bd, g, a, i) & _side_vertices(bd, g, b, i)))
    return out


def caterpillar_branch_decomposition(g: Graph, order: Sequence[int] | None = None) -> BranchDecomposition:
    """Leaves hang off a spine in the order of their edges' later endpoint."""
    order = list(range(g.n)) if order is None else list(order)
    pos = {v: i for i, v in enumerate(order)}
    edges = sorted(range(g.m), key=lambda e: (max(pos[int(g.eu[e])], pos[int(g.ev[e])]),
                                              min(pos[int(g.eu[e])], pos[int(g.ev[e])]), e))
    m = g.m
    if m < 2:
        raise GraphError("branch decomposition needs at least two edges")
    leaves = {i: edges[i] for i in range(m)}
    if m == 2:
        bd = BranchDecomposition(leaves, [(0, 1)])
    else:
        spine = [m + j for j in range(m - 2)]
        tree = [(0, spine[0]), (1, spine[0])]
        for j in range(1, m - 2):
            tree.append((spine[j - 1], spine[j]))
            tree.append((j + 1, spine[j]))
        tree.append((m - 1, spine[-1]))
        bd = BranchDecomposition(leaves, tree)
    bd.validate(g)
    return bd


def parse_branch_decomposition(text: str, g: Graph) -> BranchDecomposition:
    leaves: dict[int, int] = {}
    tree: list[tuple[int, int]] = []
    count = None
    for lineno, line in enumerate(text.splitlines(), 1):
        tok = line.split()
        if not tok or tok[0] == "c":
            continue
        try:
            if tok[0] == "s" and tok[1] == "bd":
                count = int(tok[2])
            elif tok[0] == "l":
                e = g.edge_id(int(tok[2]), int(tok[3]))
                if e is None:
                    raise GraphError("leaf label is not an edge", lineno)
                leaves[int(tok[1])] = e
            elif tok[0] == "t":
                tree.append((int(tok[1]), int(tok[2])))
            else:
                raise GraphError(f"unknown line type {tok[0]!r}", lineno)
        except (ValueError, IndexError):
            raise GraphError("malformed branch decomposition line", lineno) from None
    if count is None or count != len(leaves):
        raise GraphError("header missing or leaf count mismatch")
    bd = BranchDecomposition(leaves, tree)
    bd.validate(g)
    return bd


def serialize_branch_decomposition(bd: BranchDecomposition, g: Graph) -> str:
    out = [f"s bd {len(bd.leaves)}"]
    for node, e in sorted(bd.leaves.items()):
        out.append(f"l {node} {int(g.eu[e])} {int(g.ev[e])}")
    out += [f"t {a} {b}" for a, b in bd.tree_edges]
    return "\n".join(out) + "\n"


# -------------------------------------------------------------- branch DP

@dataclass
class BranchReport:
    width: int = 0
    node_sets: list[tuple[int, int, int, int]] = field(default_factory=list)

    @property
    def middle_bound_ok(self) -> bool:
        return all(sum(x) <= 1.5 * self.width for x in self.node_sets)


def _leaf_table(ctx: AnchoredContext, e: int, sr, weights, mid: Sequence[int]) -> dict:
    g, s = ctx.g, ctx.s
    u, v = int(g.eu[e]), int(g.ev[e])
    l, r = (u, v) if ctx.bip.is_left(u) else (v, u)
    states: dict[tuple[int, int], object] = {}
    if e != ctx.e:
        states[(S00, S00)] = sr.one
    w = sr.edge(weights[e] if weights is not None else 1)
    for a2, b2 in TRANSITIONS[_arc_in(ctx, e, l)][(S00, S00)]:
        if l == s and a2 == S10:
            continue
        states[(a2, b2)] = sr.add(states.get((a2, b2)), w)
    out: dict[int, object] = {}
    for (a, b), val in states.items():
        st = {l: a, r: b}
        if any(st[x] != S11 for x in (l, r) if x not in mid):
            continue
        code = _pack([st[x] for x in mid])
        out[code] = sr.add(out.get(code), val)
    return out


def _combine(ctx: AnchoredContext, sr, tx: dict, bx: Sequence[int], ty: dict, by: Sequence[int],
             bz: Sequence[int], report: BranchReport | None) -> dict:
    """Join two child tables as per-intersection-state matrix products: rows
    are left-only states, the inner index runs over forget states (the
    y side permuted to the matching partner), columns are right-only states."""
    sx, sy, sz = set(bx), set(by), set(bz)
    I = [v for v in bz if v in sx and v in sy]
    L = [v for v in bz if v in sx and v not in sy]
    R = [v for v in bz if v in sy and v not in sx]
    F = [v for v in bx if v in sy and v not in sz]
    if report is not None:
        report.node_sets.append((len(I), len(L), len(R), len(F)))
    px = {v: i for i, v in enumerate(bx)}
    py = {v: i for i, v in enumerate(by)}
    left_side = [ctx.bip.is_left(v) for v in F]
    # A[iota_x][phi] -> list of (lambda, value);  B[iota_y][phi'] -> list of (rho, value)
    A: dict = defaultdict(lambda: defaultdict(list))
    for code, val in tx.items():
        st = _unpack(code, len(bx))
        A[tuple(st[px[v]] for v in I)][tuple(st[px[v]] for v in F)].append(
            (tuple(st[px[v]] for v in L), val))
    B: dict = defaultdict(lambda: defaultdict(list))
    for code, val in ty.items():
        st = _unpack(code, len(by))
        phi = tuple((MATCH_LEFT if left else MATCH_RIGHT)[st[py[v]]]
                    for v, left in zip(F, left_side))
        B[tuple(st[py[v]] for v in I)][phi].append((tuple(st[py[v]] for v in R), val))
    i_left = [ctx.bip.is_left(v) for v in I]
    pz = {v: i for i, v in enumerate(bz)}
    s = ctx.s
    out: dict[int, object] = {}
    for ix, arow in A.items():
        for iy, bcol in B.items():
            iota = []
            for a, b, left in zip(ix, iy, i_left):
                c = combine_state(a, b, left)
                if c is None:
                    break
                iota.append(c)
            else:
                if s in pz and s in I and iota[I.index(s)] == S10:
                    continue
                for phi, rows in arow.items():
                    cols = bcol.get(phi)
                    if not cols:
                        continue
                    for lam, va in rows:
                        for rho, vb in cols:
                            st = [0] * len(bz)
                            for v, x in zip(I, iota):
                                st[pz[v]] = x
                            for v, x in zip(L, lam):
                                st[pz[v]] = x
                            for v, x in zip(R, rho):
                                st[pz[v]] = x
                            code = _pack(st)
                            out[code] = sr.add(out.get(code), sr.mul(va, vb))
    return out


def _branch_dp(ctx: AnchoredContext, bd: BranchDecomposition, sr, weights,
               report: BranchReport | None = None):
    g = ctx.g
    if not bd.middle:
        bd.validate(g)
    adj = bd.tree_adj()
    root_edge = min(range(len(bd.tree_edges)), key=lambda i: (len(bd.middle[i]), i))
    if report is not None:
        report.width = bd.width
    mids = [sorted(m) for m in bd.middle]

    def table_for(te: int, child: int) -> dict:
        """Table of tree edge te computed from the subtree hanging at `child`."""
        if child in bd.leaves:
            return _leaf_table(ctx, bd.leaves[child], sr, weights, mids[te])
        kids = [x for x in adj[child] if x != te]
        tabs = []
        for k in kids:
            a, b = bd.tree_edges[k]
            tabs.append((table_for(k, b if a == child else a), mids[k]))
        (tx, bx), (ty, by) = tabs
        return _combine(ctx, sr, tx, bx, ty, by, mids[te], report)

    a, b = bd.tree_edges[root_edge]
    tx = table_for(root_edge, a)
    ty = table_for(root_edge, b)
    mid = mids[root_edge]
    left = [ctx.bip.is_left(v) for v in mid]
    result = None
    for code, va in tx.items():
        st = _unpack(code, len(mid))
        partner = _pack([(MATCH_LEFT if lf else MATCH_RIGHT)[x] for x, lf in zip(st, left)])
        vb = ty.get(partner)
        if vb is not None:
            result = sr.add(result, sr.mul(va, vb))
    return result


def tsp_branchwidth(ctx: AnchoredContext, weights, bd: BranchDecomposition,
                    report: BranchReport | None = None) -> Fraction | None:
    return _branch_dp(ctx, bd, MinPlus(ctx.g.n), weights, report)


def anchored_count_branchwidth(ctx: AnchoredContext, bd: BranchDecomposition,
                               report: BranchReport | None = None) -> int:
    n = ctx.g.n
    res = _branch_dp(ctx, bd, CountXi(n), None, report)
    return (res or {}).get(n, 0)


def count_hc_branchwidth(g: Graph, bd: BranchDecomposition, pf: Orientation,
                         report: BranchReport | None = None) -> int:
    bd.validate(g)
    return _sum_over_anchors(g, pf, lambda ctx: anchored_count_branchwidth(ctx, bd, report))
