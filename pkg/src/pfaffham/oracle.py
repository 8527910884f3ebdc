"""Exhaustive reference engines: Hamiltonian cycles, perfect matchings of
F_lambda graphs, and exact TSP.  Exponential by design; size-gated."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graph import Graph, GraphError, HamCycle


@dataclass
class CycleCatalog:
    cycles: list[HamCycle]
    edge_counts: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.cycles)

    def through(self, g: Graph, e: int) -> list[HamCycle]:
        u, v = int(g.eu[e]), int(g.ev[e])
        return [c for c in self.cycles if c.contains_edge(u, v)]

    def edge_sets(self) -> set[frozenset]:
        return {c.edge_keys() for c in self.cycles}


def enumerate_cycles(g: Graph, limit: int = 24, anchor: int | None = None) -> CycleCatalog:
    """All Hamiltonian cycles, each in canonical form, sorted.

    Cycles start at vertex 0 and are kept only when the second vertex is
    smaller than the last, so each is produced once.  A branch is cut when the
    unvisited vertices together with the two path ends stop being connected,
    or when an unvisited vertex has fewer than two usable neighbors.
    """
    n = g.n
    if n > limit:
        raise GraphError(f"enumerate_cycles: n={n} exceeds limit {limit}")
    cycles: list[HamCycle] = []
    if n >= 3 and g.is_connected():
        adj = [[w for w, _ in row] for row in g.adjacency]
        nbits = [sum(1 << w for w in row) for row in adj]
        full = (1 << n) - 1
        path = [0]

        def alive(visited: int, end: int) -> bool:
            free = full & ~visited
            if not free:
                return True
            # every free vertex needs two neighbors among free vertices and the two ends
            ends = (1 << 0) | (1 << end)
            ok_mask = free | ends
            f = free
            while f:
                low = f & -f
                v = low.bit_length() - 1
                if bin(nbits[v] & ok_mask).count("1") < 2:
                    return False
                f ^= low
            # connectivity of free vertices via flood fill
            start = free & -free
            reach = start
            frontier = start
            while frontier:
                low = frontier & -frontier
                v = low.bit_length() - 1
                frontier ^= low
                new = nbits[v] & free & ~reach
                reach |= new
                frontier |= new
            return reach == free

        def dfs(v: int, visited: int):
            if len(path) == n:
                if nbits[v] & 1 and path[1] < path[-1]:
                    cycles.append(HamCycle(path))
                return
            for w in adj[v]:
                if visited >> w & 1:
                    continue
                nv = visited | (1 << w)
                if len(path) + 1 < n and not alive(nv, w):
                    continue
                path.append(w)
                dfs(w, nv)
                path.pop()

        dfs(0, 1)
    cycles.sort(key=lambda c: c.order)
    if anchor is not None:
        u, v = int(g.eu[anchor]), int(g.ev[anchor])
        cycles = [c for c in cycles if c.contains_edge(u, v)]
    counts = [0] * g.m
    for c in cycles:
        for (a, b) in c.pairs():
            counts[g.edge_id(a, b)] += 1
    return CycleCatalog(cycles, counts)


def enumerate_cycles_forcing(g: Graph, forced_in=(), max_cycles: int | None = None,
                             max_nodes: int = 5_000_000) -> list[HamCycle]:
    """All Hamiltonian cycles by branching on edges with degree propagation.

    Meant for large graphs with many degree-2 vertices (gadget instances),
    where almost every edge decision is forced.  A vertex with two chosen
    edges drops the rest; a vertex with only two usable edges takes both;
    an edge joining the two ends of one chosen path is dropped unless it
    closes a Hamiltonian cycle.  Cycles are returned canonical and sorted.
    """
    n, m = g.n, g.m
    if n < 3:
        return []
    inc = [[e for _, e in row] for row in g.adjacency]
    eu, ev = g.eu.tolist(), g.ev.tolist()
    status = [-1] * m            # -1 open, 0 out, 1 in
    deg_in = [0] * n
    avail = [len(x) for x in inc]
    other = list(range(n))       # other end of the chosen path through an end vertex
    n_in = [0]
    trail: list[tuple] = []
    found: list[HamCycle] = []
    nodes = [0]

    def set_edge(e: int, val: int) -> bool:
        if status[e] != -1:
            return status[e] == val
        u, v = eu[e], ev[e]
        if val == 1:
            if deg_in[u] >= 2 or deg_in[v] >= 2:
                return False
            if other[u] == v and n_in[0] != n - 1:
                return False
            a, b = other[u], other[v]
            trail.append(("in", e, u, v, a, b))
            status[e] = 1
            deg_in[u] += 1
            deg_in[v] += 1
            n_in[0] += 1
            other[a], other[b] = b, a
        else:
            trail.append(("out", e))
            status[e] = 0
            avail[u] -= 1
            avail[v] -= 1
        return True

    def undo(mark: int) -> None:
        while len(trail) > mark:
            rec = trail.pop()
            e = rec[1]
            u, v = eu[e], ev[e]
            if rec[0] == "in":
                status[e] = -1
                deg_in[u] -= 1
                deg_in[v] -= 1
                n_in[0] -= 1
                _restore_ends(rec)
            else:
                status[e] = -1
                avail[u] += 1
                avail[v] += 1

    def _restore_ends(rec) -> None:
        _, _, u, v, a, b = rec
        # before the join a..u and v..b were separate paths
        other[a], other[u] = u, a
        other[v], other[b] = b, v

    def propagate(queue: list[int]) -> bool:
        while queue:
            x = queue.pop()
            if avail[x] < 2:
                return False
            if deg_in[x] == 2 and avail[x] > 2:
                for e in inc[x]:
                    if status[e] == -1:
                        if not set_edge(e, 0):
                            return False
                        queue.append(eu[e] if eu[e] != x else ev[e])
            elif avail[x] == 2 and deg_in[x] < 2:
                for e in inc[x]:
                    if status[e] == -1:
                        if not set_edge(e, 1):
                            return False
                        y = eu[e] if eu[e] != x else ev[e]
                        queue.extend((x, y, other[y], other[x]))
            if deg_in[x] == 1 and n_in[0] < n - 1:
                y = other[x]
                for e in inc[x]:
                    if status[e] == -1 and (eu[e] == y or ev[e] == y):
                        if not set_edge(e, 0):
                            return False
                        queue.extend((x, y))
        return True

    def collect() -> None:
        nxt: list[list[int]] = [[] for _ in range(n)]
        for e in range(m):
            if status[e] == 1:
                nxt[eu[e]].append(ev[e])
                nxt[ev[e]].append(eu[e])
        order, prev, cur = [0], -1, 0
        while True:
            a, b = nxt[cur]
            step = a if a != prev else b
            if step == 0:
                break
            order.append(step)
            prev, cur = cur, step
        found.append(HamCycle(order).canonical())

    def search() -> bool:
        nodes[0] += 1
        if nodes[0] > max_nodes:
            raise GraphError("enumerate_cycles_forcing: node budget exhausted")
        if n_in[0] == n:
            collect()
            return max_cycles is not None and len(found) >= max_cycles
        best, best_key = -1, None
        for x in range(n):
            if deg_in[x] < 2:
                key = (avail[x] - deg_in[x], -deg_in[x])
                if best_key is None or key < best_key:
                    best, best_key = x, key
        e = next(e for e in inc[best] if status[e] == -1)
        y = eu[e] if eu[e] != best else ev[e]
        for val in (1, 0):
            mark = len(trail)
            if set_edge(e, val) and propagate([best, y, other[best], other[y]]):
                if search():
                    return True
            undo(mark)
        return False

    mark = len(trail)
    ok = True
    for e in forced_in:
        ok = ok and set_edge(e, 1)
    if ok and propagate(list(range(n))):
        search()
    undo(mark)
    found.sort(key=lambda c: c.order)
    return found


def enumerate_matchings(f, max_nodes: int = 32) -> list[dict]:
    """All perfect matchings of an FLambdaGraph as node -> partner maps."""
    nodes = f.nodes
    if len(nodes) > max_nodes:
        raise GraphError(f"enumerate_matchings: {len(nodes)} nodes exceed {max_nodes}")
    right = [x for x in nodes if not f.is_left_node(x)]
    left_count = len(nodes) - len(right)
    if left_count != len(right):
        return []
    out: list[dict] = []
    used: set = set()
    current: dict = {}

    def rec(i: int):
        if i == len(right):
            out.append(dict(current))
            return
        r = right[i]
        for x in f.neighbors(r):
            if x in used:
                continue
            used.add(x)
            current[r] = x
            current[x] = r
            rec(i + 1)
            del current[r]
            del current[x]
            used.discard(x)

    rec(0)
    return out


def brute_tsp(g: Graph, weights=None, anchor: int | None = None,
              limit: int = 20) -> Fraction | None:
    """Minimum tour weight, or None when no (anchored) Hamiltonian cycle exists."""
    cat = enumerate_cycles(g, limit=limit, anchor=anchor)
    if not cat.cycles:
        return None
    w = weights if weights is not None else g.weights
    best = None
    for c in cat.cycles:
        total = sum((Fraction(w[g.edge_id(a, b)]) if w is not None else Fraction(1))
                    for a, b in c.pairs())
        if best is None or total < best:
            best = total
    return best


def serialize_catalog(cat: CycleCatalog) -> str:
    lines = [f"count {len(cat)}"]
    lines += [" ".join(map(str, c.order)) for c in cat.cycles]
    return "\n".join(lines) + "\n"


def parse_catalog(text: str) -> CycleCatalog:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("count "):
        raise GraphError("catalog must start with 'count <k>'")
    k = int(lines[0].split()[1])
    cycles = [HamCycle(int(x) for x in ln.split()) for ln in lines[1:]]
    if len(cycles) != k:
        raise GraphError(f"catalog announces {k} cycles, found {len(cycles)}")
    return CycleCatalog(cycles)
