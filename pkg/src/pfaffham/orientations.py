"""Pfaffian orientations: construction from a Hamiltonian cycle or a planar
embedding, and an exhaustive central-cycle checker for small graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .graph import Bipartition, Graph, GraphError, HamCycle, bipartition, validate_cycle


@dataclass(frozen=True, eq=False)
class Orientation:
    """bits[e] == 0: arc from the smaller endpoint id to the larger one."""

    bits: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bits", np.asarray(self.bits, dtype=np.uint8))

    def __eq__(self, other) -> bool:
        return isinstance(other, Orientation) and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash(self.bits.tobytes())

    def arc(self, g: Graph, e: int) -> tuple[int, int]:
        u, v = int(g.eu[e]), int(g.ev[e])
        return (v, u) if self.bits[e] else (u, v)

    def has_arc(self, g: Graph, u: int, v: int) -> bool:
        e = g.edge_id(u, v)
        if e is None:
            raise GraphError(f"{{{u},{v}}} is not an edge")
        return (u < v) != bool(self.bits[e])

    def flip(self, e: int) -> "Orientation":
        b = self.bits.copy()
        b[e] ^= 1
        return Orientation(b)

    def reversed(self) -> "Orientation":
        return Orientation(self.bits ^ 1)

    def reverse_at(self, g: Graph, u: int) -> "Orientation":
        b = self.bits.copy()
        b[(g.eu == u) | (g.ev == u)] ^= 1
        return Orientation(b)


def parse_orientation(text: str, g: Graph) -> Orientation:
    bits = "".join(text.split())
    if len(bits) != g.m or set(bits) - {"0", "1"}:
        raise GraphError(f"orientation needs exactly {g.m} bits")
    return Orientation(np.frombuffer(bits.encode(), dtype=np.uint8) - ord("0"))


def serialize_orientation(o: Orientation) -> str:
    return "".join(map(str, o.bits.tolist())) + "\n"


@dataclass(frozen=True, eq=False)
class AnchoredContext:
    g: Graph
    e: int
    s: int
    t: int
    pf: Orientation
    pf_e: Orientation
    bip: Bipartition

    def swapped(self) -> "AnchoredContext":
        """Exchange the roles of L and R and of s and t.

        Reversing every arc keeps a bipartite orientation Pfaffian (central
        cycles are even), and the reversed orientation carries the arc (t, s).
        """
        pf = self.pf.reversed()
        return AnchoredContext(self.g, self.e, self.t, self.s, pf, pf.flip(self.e),
                               self.bip.swapped())


def context_from_orientation(g: Graph, e: int, pf: Orientation,
                             bip: Bipartition | None = None) -> AnchoredContext:
    """Anchor a Pfaffian orientation at edge e, reversing it if needed so that
    it contains the arc (s, t) with s on the L side."""
    bip = bip or bipartition(g)
    u, v = int(g.eu[e]), int(g.ev[e])
    s, t = (u, v) if bip.is_left(u) else (v, u)
    if pf.arc(g, e) != (s, t):
        pf = pf.reversed()
    return AnchoredContext(g, e, s, t, pf, pf.flip(e), bip)


def orientation_from_cycle(g: Graph, h: HamCycle, e: int,
                           bip: Bipartition | None = None,
                           check: bool = True) -> AnchoredContext:
    """Orient every edge from the endpoint met earlier on h (walked from s to t)."""
    if check:
        verdict = validate_cycle(g, h)
        if not verdict:
            raise GraphError(f"invalid Hamiltonian cycle: {verdict.message}")
    bip = bip or bipartition(g)
    u, v = int(g.eu[e]), int(g.ev[e])
    s, t = (u, v) if bip.is_left(u) else (v, u)
    order = np.asarray(h.anchored(s, t).order, dtype=np.int64)
    pos = np.empty(g.n, dtype=np.int64)
    pos[order] = np.arange(g.n)
    pf = Orientation((pos[g.eu] > pos[g.ev]).astype(np.uint8))
    return AnchoredContext(g, e, s, t, pf, pf.flip(e), bip)


@dataclass(frozen=True)
class PlanarEmbedding:
    """rotation[v]: incident edge ids of v in counterclockwise order."""

    rotation: tuple[tuple[int, ...], ...]

    def faces(self, g: Graph) -> list[list[tuple[int, int]]]:
        """Face boundaries as lists of darts (tail, edge id)."""
        pos: dict[tuple[int, int], int] = {}
        for v, rot in enumerate(self.rotation):
            for i, e in enumerate(rot):
                pos[(v, e)] = i
        seen: set[tuple[int, int]] = set()
        faces = []
        for v, rot in enumerate(self.rotation):
            for e in rot:
                if (v, e) in seen:
                    continue
                face = []
                dart = (v, e)
                while dart not in seen:
                    seen.add(dart)
                    face.append(dart)
                    tail, edge = dart
                    head = g.other(edge, tail)
                    rot_h = self.rotation[head]
                    # next dart leaves head along the edge preceding `edge` in
                    # head's counterclockwise order, tracing faces clockwise
                    nxt = rot_h[(pos[(head, edge)] - 1) % len(rot_h)]
                    dart = (head, nxt)
                faces.append(face)
        return faces

    def validate(self, g: Graph) -> list[list[tuple[int, int]]]:
        if len(self.rotation) != g.n:
            raise GraphError("embedding must list every vertex")
        adj = g.adjacency
        for v, rot in enumerate(self.rotation):
            if sorted(rot) != sorted(e for _, e in adj[v]):
                raise GraphError(f"rotation at vertex {v} is not its incident edge set")
        faces = self.faces(g)
        if g.is_connected() and g.n - g.m + len(faces) != 2:
            raise GraphError(
                f"embedding is not planar: n - m + f = {g.n - g.m + len(faces)}")
        return faces


def embedding_from_coords(g: Graph, xy: Sequence[tuple[float, float]]) -> PlanarEmbedding:
    """Rotation system of a straight-line drawing (angles sorted counterclockwise)."""
    rot = []
    for v, inc in enumerate(g.adjacency):
        x0, y0 = xy[v]
        inc = sorted(inc, key=lambda we: math.atan2(xy[we[0]][1] - y0, xy[we[0]][0] - x0))
        rot.append(tuple(e for _, e in inc))
    return PlanarEmbedding(tuple(rot))


def parse_embedding(text: str, g: Graph) -> PlanarEmbedding:
    rot: list[tuple[int, ...] | None] = [None] * g.n
    for lineno, line in enumerate(text.splitlines(), 1):
        tok = line.split()
        if not tok or tok[0] == "c":
            continue
        if tok[0] != "r" or len(tok) < 2:
            raise GraphError("expected 'r <v> <e1> ...'", lineno)
        try:
            v = int(tok[1])
            rot[v] = tuple(int(x) for x in tok[2:])
        except (ValueError, IndexError):
            raise GraphError("bad rotation line", lineno) from None
    if any(r is None for r in rot):
        raise GraphError("embedding misses a vertex")
    emb = PlanarEmbedding(tuple(rot))  # type: ignore[arg-type]
    emb.validate(g)
    return emb


def serialize_embedding(emb: PlanarEmbedding) -> str:
    return "".join(f"r {v} {' '.join(map(str, rot))}\n" for v, rot in enumerate(emb.rotation))


def kasteleyn_orientation(g: Graph, emb: PlanarEmbedding) -> Orientation:
    """Every face except one (the outer face) gets an odd number of edges
    oriented along its clockwise boundary walk."""
    faces = emb.validate(g)
    adj = g.adjacency
    in_tree = np.zeros(g.m, dtype=bool)
    seen = [False] * g.n
    if g.n:
        seen[0] = True
        stack = [0]
        while stack:
            v = stack.pop()
            for w, e in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    in_tree[e] = True
                    stack.append(w)
    bits = np.zeros(g.m, dtype=np.uint8)
    edge_faces: list[list[int]] = [[] for _ in range(g.m)]
    for fi, face in enumerate(faces):
        for _, e in face:
            edge_faces[e].append(fi)
    outer = max(range(len(faces)), key=lambda i: (len(faces[i]), -i))
    # non-tree edges form a spanning tree of the dual; peel it from the leaves
    dual: list[list[tuple[int, int]]] = [[] for _ in faces]
    for e in np.flatnonzero(~in_tree).tolist():
        a, b = edge_faces[e]
        dual[a].append((b, e))
        dual[b].append((a, e))
    parent_edge = [-1] * len(faces)
    order = [outer]
    visited = [False] * len(faces)
    visited[outer] = True
    for f in order:
        for f2, e in dual[f]:
            if not visited[f2]:
                visited[f2] = True
                parent_edge[f2] = e
                order.append(f2)
    for f in reversed(order[1:]):
        pe = parent_edge[f]
        along = 0
        for tail, e in faces[f]:
            if e == pe:
                continue
            arc_tail = int(g.ev[e]) if bits[e] else int(g.eu[e])
            along += arc_tail == tail
        tail_pe = next(t for t, e in faces[f] if e == pe)
        want_along = (along + 1) % 2 == 1  # total must be odd
        bits[pe] = 0 if (int(g.eu[pe]) == tail_pe) == want_along else 1
    return Orientation(bits)


def enumerate_all_cycles(g: Graph):
    """Yield every simple cycle once as a vertex list starting at its smallest
    vertex, with second vertex smaller than the last."""
    adj = [[w for w, _ in row] for row in g.adjacency]
    n = g.n
    for root in range(n):
        path = [root]
        on = [False] * n
        on[root] = True

        def dfs(v):
            for w in adj[v]:
                if w == root and len(path) >= 3 and path[1] < path[-1]:
                    yield list(path)
                elif w > root and not on[w]:
                    on[w] = True
                    path.append(w)
                    yield from dfs(w)
                    path.pop()
                    on[w] = False

        yield from dfs(root)


def _has_perfect_matching(g: Graph, removed: set[int], bip: Bipartition | None) -> bool:
    rest = [v for v in range(g.n) if v not in removed]
    if len(rest) % 2:
        return False
    if not rest:
        return True
    adj = g.adjacency
    if bip is not None:
        left = [v for v in rest if bip.is_left(v)]
        if 2 * len(left) != len(rest):
            return False
        match: dict[int, int] = {}

        def augment(u, seen):
            for w, _ in adj[u]:
                if w in removed or w in seen:
                    continue
                seen.add(w)
                if w not in match or augment(match[w], seen):
                    match[w] = u
                    return True
            return False

        return all(augment(u, set()) for u in left)
    index = {v: i for i, v in enumerate(rest)}
    nbrs = [sum(1 << index[w] for w, _ in adj[v] if w in index) for v in rest]

    @lru_cache(maxsize=None)
    def solve(mask):
        if mask == 0:
            return True
        i = (mask & -mask).bit_length() - 1
        cand = nbrs[i] & mask & ~(1 << i)
        while cand:
            j = (cand & -cand).bit_length() - 1
            if solve(mask & ~(1 << i) & ~(1 << j)):
                return True
            cand &= cand - 1
        return False

    return solve((1 << len(rest)) - 1)


@dataclass(frozen=True)
class PfaffianVerdict:
    ok: bool
    failing_cycle: tuple[int, ...] | None = None
    central_cycles: int = 0

    def __bool__(self) -> bool:
        return self.ok


def verify_pfaffian(g: Graph, o: Orientation, max_n: int = 20) -> PfaffianVerdict:
    if g.n > max_n:
        raise GraphError(f"verify_pfaffian is exponential; n={g.n} exceeds {max_n}")
    try:
        bip = bipartition(g)
    except GraphError:
        bip = None
    arcs = {o.arc(g, e) for e in range(g.m)}
    central = 0
    for cyc in enumerate_all_cycles(g):
        if not _has_perfect_matching(g, set(cyc), bip):
            continue
        central += 1
        k = len(cyc)
        fwd = sum((cyc[i], cyc[(i + 1) % k]) in arcs for i in range(k))
        bwd = k - fwd
        if fwd % 2 == 0 or bwd % 2 == 0:
            return PfaffianVerdict(False, tuple(cyc), central)
    return PfaffianVerdict(True, None, central)
