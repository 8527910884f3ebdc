"""Reduction from Exact Set Cover to Another Hamiltonian Cycle in planar
bipartite graphs, with a decoder from a second cycle back to a cover.

Layout.  The route (the planted cycle's backbone) runs left to right along a
top strain of subset ladders, down the right side, right to left along a
bottom strain of avoid-one gadgets, and up the left side.

* Subset ladder: a 2 x m ladder whose rungs are forced 2-edge paths, entered
  from one vertex adjacent to both rails.  It has exactly two traversals; the
  one entering on the p rail is "selected" and uses the q-rail edges at even
  gaps.  Those edges are the subset's slots.
* Avoid-one gadget: a path of choice edges (x_j, y_j) joined by forced paths,
  above a cycle d_1 u_1 d_2 u_2 ... with spokes x_j d_j and y_j u_j.  A
  traversal skips exactly one choice edge by detouring around the cycle.
* Xor ladder: a 2 x 2 ladder with forced rungs between two slot edges; the
  route passes through it from exactly one side.  Choice edge (u, S) is
  xor-linked to the slot of S for u, so a selected subset blocks the choice.
* Crossings: where two links cross, the link starting further left keeps its
  xor band and the other passes through it.  Each band rung receives a
  transit ladder (a 3-column ladder whose two traversals use either both or
  none of its two slots, one on each side of the rung); rungs are traversed
  by every cycle, so the passing link's signal is relayed across the band by
  xor ladders without touching the host's signal.
* Parity: every forced connection is given 2 or 3 edges, whichever keeps the
  two-coloring consistent.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .graph import Graph, GraphError, HamCycle, bipartition
from .oracle import enumerate_cycles_forcing
from .orientations import PlanarEmbedding, embedding_from_coords


@dataclass(frozen=True)
class ESCInstance:
    universe: int
    family: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.universe < 1:
            raise GraphError("universe must be nonempty")
        for i, s in enumerate(self.family):
            if not s:
                raise GraphError(f"subset {i} is empty")
            if any(not 0 <= x < self.universe for x in s):
                raise GraphError(f"subset {i} leaves the universe")
            if len(set(s)) != len(s):
                raise GraphError(f"subset {i} repeats an element")

    @classmethod
    def make(cls, universe: int, family) -> "ESCInstance":
        return cls(universe, tuple(tuple(sorted(s)) for s in family))

    def extended(self) -> tuple[tuple[int, ...], ...]:
        """The family with the whole universe appended as its last member."""
        return self.family + (tuple(range(self.universe)),)


def exact_covers(universe: int, family: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Index sets of pairwise disjoint members whose union is the universe."""
    out = []
    full = (1 << universe) - 1
    masks = [sum(1 << x for x in s) for s in family]
    for r in range(1, len(family) + 1):
        for combo in itertools.combinations(range(len(family)), r):
            acc = 0
            ok = True
            for i in combo:
                if acc & masks[i]:
                    ok = False
                    break
                acc |= masks[i]
            if ok and acc == full:
                out.append(combo)
    return out


def parse_esc(text: str) -> ESCInstance:
    universe = None
    family = []
    for lineno, line in enumerate(text.splitlines(), 1):
        tok = line.split()
        if not tok or tok[0] == "c":
            continue
        try:
            if tok[0] == "u":
                universe = int(tok[1])
            elif tok[0] == "S":
                family.append([int(x) for x in tok[1:]])
            else:
                raise GraphError(f"unknown line type {tok[0]!r}", lineno)
        except (ValueError, IndexError):
            raise GraphError("malformed exact cover line", lineno) from None
    if universe is None:
        raise GraphError("missing 'u <size>' line")
    return ESCInstance.make(universe, family)


def serialize_esc(esc: ESCInstance) -> str:
    return f"u {esc.universe}\n" + "".join(f"S {' '.join(map(str, s))}\n" for s in esc.family)


@dataclass(frozen=True)
class Annotation:
    kind: str           # selector, slot, choice, xor, transit, forced
    ident: str
    edges: tuple[int, ...]


@dataclass
class ReducedInstance:
    esc: ESCInstance
    graph: Graph
    planted: HamCycle
    embedding: PlanarEmbedding
    coords: list[tuple[float, float]]
    selectors: list[int]                 # edge (J_i, p_0) per member of the extended family
    annotations: list[Annotation] = field(default_factory=list)

    def forced_edges(self) -> list[int]:
        return [e for a in self.annotations if a.kind == "forced" for e in a.edges]


def serialize_annotations(ri: ReducedInstance) -> str:
    return "".join(f"{a.kind} {a.ident} {' '.join(map(str, a.edges))}\n" for a in ri.annotations)


def parse_annotations(text: str) -> list[Annotation]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        tok = line.split()
        if not tok:
            continue
        try:
            out.append(Annotation(tok[0], tok[1], tuple(int(x) for x in tok[2:])))
        except (ValueError, IndexError):
            raise GraphError("malformed annotation line", lineno) from None
    return out


# ------------------------------------------------------------------ geometry

def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _add(a, b, k=1.0):
    return (a[0] + k * b[0], a[1] + k * b[1])


def _unit(v):
    r = math.hypot(*v)
    return (v[0] / r, v[1] / r)


def _left(d):
    return (-d[1], d[0])


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _mid(a, b):
    return ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)


def _intersect(p, r, q, s):
    """Parameters (t, u) with p + t r = q + u s, or None when parallel."""
    den = _cross(r, s)
    if abs(den) < 1e-15:
        return None
    qp = _sub(q, p)
    return _cross(qp, s) / den, _cross(qp, r) / den


# ------------------------------------------------------------------- builder

class _Builder:
    def __init__(self):
        self.xy: list[tuple[float, float]] = []
        self.color: list[int] = []
        self.edges: list[tuple[int, int]] = []
        self.forced: list[list[tuple[int, int]]] = []

    def vertex(self, pt, color: int) -> int:
        self.xy.append((float(pt[0]), float(pt[1])))
        self.color.append(color)
        return len(self.xy) - 1

    def edge(self, u: int, v: int) -> None:
        if self.color[u] == self.color[v]:
            raise AssertionError(f"parity clash on edge {u}-{v}")
        self.edges.append((u, v))

    def join(self, u: int, v: int) -> None:
        """Edge u-v, or a 2-path through a new vertex when colors agree."""
        if self.color[u] != self.color[v]:
            self.edge(u, v)
        else:
            w = self.vertex(_mid(self.xy[u], self.xy[v]), 1 - self.color[u])
            self.edge(u, w)
            self.edge(w, v)

    def forced_path(self, u: int, v: int, via: Sequence = ()) -> None:
        """A path of degree-2 vertices from u to v through the given points,
        lengthened by one vertex if needed to keep the coloring proper."""
        pts = list(via)
        path = [u]
        for pt in pts:
            path.append(self.vertex(pt, 1 - self.color[path[-1]]))
        last = path[-1]
        a, b = self.xy[last], self.xy[v]
        if len(path) == 1 or self.color[last] == self.color[v]:
            if self.color[last] == self.color[v]:
                path.append(self.vertex(_mid(a, b), 1 - self.color[last]))
            else:
                path.append(self.vertex(_add(a, _sub(b, a), 1 / 3), 1 - self.color[last]))
                path.append(self.vertex(_add(a, _sub(b, a), 2 / 3), 1 - self.color[path[-1]]))
        path.append(v)
        pairs = list(zip(path, path[1:]))
        for a_, b_ in pairs:
            self.edge(a_, b_)
        self.forced.append(pairs)


@dataclass
class _Ladder:
    p: list[int]
    q: list[int]
    entry: int
    exit: int

    def slot(self, rail: str, gap: int) -> tuple[int, int]:
        r = self.p if rail == "p" else self.q
        return r[gap], r[gap + 1]


def _route_ladder(b: _Builder, entry: int, origin, d, m: int, spacing: float,
                  off: float, slots: set[tuple[str, int]], exit_color_free: bool = False) -> _Ladder:
    """Ladder with forced 2-edge rungs; rail edges listed in `slots` are left out."""
    n = _left(d)
    c0 = 1 - b.color[entry]
    p, q = [], []
    for k in range(m):
        base = _add(origin, d, spacing * (k + 1))
        col = c0 if k % 2 == 0 else 1 - c0
        pk = b.vertex(_add(base, n, off), col)
        qk = b.vertex(_add(base, n, -off), col)
        mk = b.vertex(base, 1 - col)
        b.edge(pk, mk)
        b.edge(mk, qk)
        p.append(pk)
        q.append(qk)
    b.edge(entry, p[0])
    b.edge(entry, q[0])
    for k in range(m - 1):
        if ("p", k) not in slots:
            b.edge(p[k], p[k + 1])
        if ("q", k) not in slots:
            b.edge(q[k], q[k + 1])
    ex = b.vertex(_add(origin, d, spacing * (m + 1)), 1 - b.color[p[-1]])
    b.edge(p[-1], ex)
    b.edge(q[-1], ex)
    return _Ladder(p, q, entry, ex)


@dataclass
class _Transit:
    center: tuple[float, float]
    d: tuple[float, float]
    side: int                 # side (relative to d) the guest arrives from
    ladder: _Ladder | None = None

    def slot(self, incoming: bool) -> tuple[int, int]:
        # p rail lies on the +left side of d
        on_p = (self.side > 0) == incoming
        return self.ladder.slot("p", 1) if on_p else self.ladder.slot("q", 0)


def _make_transit(b: _Builder, t: _Transit, size: float) -> None:
    start = b.vertex(_add(t.center, t.d, -2 * size), 0)
    origin = _add(t.center, t.d, -2 * size)
    t.ladder = _route_ladder(b, start, origin, t.d, 3, size, size / 2, {("q", 0), ("p", 1)})


_RUNG_OFFSET = (1.0, 1 / 3, -1 / 3, -1.0)


def _xor_band(b: _Builder, slot_a: tuple[int, int], slot_b: tuple[int, int],
              hosted: dict[int, list[_Transit]], width: float, bend: float,
              ann: list, ident: str) -> None:
    """Four-column xor ladder between two slot edges.  Rung j runs at offset
    width * _RUNG_OFFSET[j] from the center line, through its hosted transits.
    Terminals sit on the outer columns; with only two columns the route could
    enter on one side and leave on the other."""
    xy = b.xy
    ma, mb = _mid(xy[slot_a[0]], xy[slot_a[1]]), _mid(xy[slot_b[0]], xy[slot_b[1]])
    d = _unit(_sub(mb, ma))
    n = _left(d)
    length = math.hypot(*_sub(mb, ma))

    def by_side(slot, m):
        s0 = _cross(d, _sub(xy[slot[0]], m))
        return (slot[0], slot[1]) if s0 > 0 else (slot[1], slot[0])

    sa, sb = by_side(slot_a, ma), by_side(slot_b, mb)
    eps = (min(bend, length / 8) if bend > 0 else length / 8) / 4
    pa = [_add(_add(xy[sa[0]], _sub(xy[sa[1]], xy[sa[0]]), j / 3), d, eps) for j in range(4)]
    pb = [_add(_add(xy[sb[0]], _sub(xy[sb[1]], xy[sb[0]]), j / 3), d, -eps) for j in range(4)]
    c0, c1 = 1 - b.color[sa[0]], 1 - b.color[sb[0]]
    pv = [b.vertex(pa[j], c0 ^ (j & 1)) for j in range(4)]
    qv = [b.vertex(pb[j], c1 ^ (j & 1)) for j in range(4)]
    b.edge(sa[0], pv[0])
    b.edge(sa[1], pv[3])
    b.edge(sb[0], qv[0])
    b.edge(sb[1], qv[3])
    for j in range(3):
        b.edge(pv[j], pv[j + 1])
        b.edge(qv[j], qv[j + 1])
    for j in range(4):
        ts = sorted(hosted.get(j, []),
                    key=lambda t: (t.center[0] - ma[0]) * d[0] + (t.center[1] - ma[1]) * d[1])
        bends = []
        if width > 0:
            bl = min(bend, length / 4)
            off = width * _RUNG_OFFSET[j]
            bends = [_add(_add(ma, d, bl), n, off), _add(_add(mb, d, -bl), n, off)]
        if not ts:
            b.forced_path(pv[j], qv[j], bends)
            continue
        cur = pv[j]
        if bends:
            w = b.vertex(bends[0], 1 - b.color[cur])
            b.edge(cur, w)
            cur = w
        for t in ts:
            b.join(cur, t.ladder.entry)
            cur = t.ladder.exit
        if bends:
            w = b.vertex(bends[1], 1 - b.color[cur])
            b.edge(cur, w)
            cur = w
        b.join(cur, qv[j])
    ann.append(("xor", ident, tuple(pv + qv)))


# ----------------------------------------------------------------- reduction

def _avoid_one(b: _Builder, entry: int, via: Sequence, cxs: Sequence[float],
              y: float) -> tuple[list[int], list[int]]:
    """Avoid-one gadget traversed right to left, entered from `entry` through a
    forced path.  Choice edge j is (x_j, y_j); it is left out of the graph for
    the caller to replace.  Returns the x and y vertices; y[-1] is the exit."""
    xv, yv = [], []
    for cx in cxs:
        xj = b.vertex((cx + 0.5, y), b.color[xv[0]] if xv else 0)
        yj = b.vertex((cx - 0.5, y), 1 - b.color[xj])
        if xv:
            b.forced_path(yv[-1], xj)
        else:
            b.forced_path(entry, xj, via)
        xv.append(xj)
        yv.append(yj)
    dv = [b.vertex((b.xy[v][0], y - 2.0), 1 - b.color[v]) for v in xv]
    uv = [b.vertex((b.xy[v][0], y - 2.0), 1 - b.color[v]) for v in yv]
    for j in range(len(xv)):
        b.edge(xv[j], dv[j])
        b.edge(yv[j], uv[j])
        b.edge(dv[j], uv[j])
        if j + 1 < len(xv):
            b.edge(uv[j], dv[j + 1])
    b.forced_path(uv[-1], dv[0], [(b.xy[uv[-1]][0], y - 4.0), (b.xy[dv[0]][0], y - 4.0)])
    return xv, yv


_H = 400.0
_COL = 2.0


def reduce(esc: ESCInstance) -> ReducedInstance:
    fam = esc.extended()
    k, nu = len(fam), esc.universe
    b = _Builder()
    ann: list = []
    jitter = random.Random(0)

    # top strain
    j0 = b.vertex((0.0, 0.0), 0)
    cur = j0
    x = 0.0
    ladders, slot_of = [], {}
    for i, s in enumerate(fam):
        m = 2 * len(s)
        lad = _route_ladder(b, cur, (x, 0.0), (1.0, 0.0), m, _COL, 0.5,
                            {("q", 2 * j) for j in range(len(s))})
        ladders.append(lad)
        for j, u in enumerate(s):
            slot_of[(i, u)] = lad.slot("q", 2 * j)
        cur = lad.exit
        x += _COL * (m + 1)
    x_right = x + 6.0

    # bottom strain, right to left; element u occupies a block, choices by subset
    members = {u: [i for i in range(k) if u in fam[i]] for u in range(nu)}
    widths = {u: 4.0 * len(members[u]) + 2.0 for u in range(nu)}
    total = sum(widths.values()) + 4.0 * nu
    scale = max(1.0, x / total)
    pos = x_right - 4.0
    entry_prev = cur
    route_pts = [(x_right, 0.0), (x_right, -_H)]
    choice_of = {}
    for u in reversed(range(nu)):
        w = widths[u] * scale
        right = pos
        left = pos - w
        ms = sorted(members[u], reverse=True)
        step = w / (len(ms) + 0.5)
        # jitter keeps three link lines from meeting in a point
        cxs = [right - step * (j + 0.5) + jitter.uniform(-0.3, 0.3) for j in range(len(ms))]
        xv, yv = _avoid_one(b, entry_prev, route_pts, cxs, -_H)
        route_pts = []
        for j, i in enumerate(ms):
            choice_of[(i, u)] = (xv[j], yv[j])
        entry_prev = yv[-1]
        pos = left - 4.0 * scale
    x_left = min(pos, -6.0)
    b.forced_path(entry_prev, j0, [(x_left, -_H), (x_left, 0.0)])

    # links as straight center lines between slot midpoints
    links = sorted(slot_of)
    top = {L: _mid(b.xy[slot_of[L][0]], b.xy[slot_of[L][1]]) for L in links}
    bot = {L: _mid(b.xy[choice_of[L][0]], b.xy[choice_of[L][1]]) for L in links}
    vec = {L: _sub(bot[L], top[L]) for L in links}
    events = {L: [] for L in links}          # (t, kind, other, t_other)
    crossings = []
    for A, B in itertools.combinations(links, 2):
        hit = _intersect(top[A], vec[A], top[B], vec[B])
        if hit is None:
            continue
        ta, tb = hit
        if 0 < ta < 1 and 0 < tb < 1:
            host, guest, th, tg = (A, B, ta, tb) if top[A][0] < top[B][0] else (B, A, tb, ta)
            events[host].append((th, "host", guest, tg))
            events[guest].append((tg, "guest", host, th))
            crossings.append(_add(top[A], vec[A], ta))

    # scale of the crossing machinery from the tightest configuration
    pts = [top[L] for L in links] + [bot[L] for L in links] + crossings
    sep = min((math.dist(p, q) for p, q in itertools.combinations(pts, 2)), default=10.0)
    sines = [abs(_cross(_unit(vec[A]), _unit(vec[B]))) for A, B in itertools.combinations(links, 2)]
    sin_min = max(min([s for s in sines if s > 0], default=1.0), 1e-6)
    if sep < 1e-9:
        raise AssertionError("degenerate layout: crossings coincide")
    width = min(0.2, sep * sin_min / 40)
    tsize = width / 12
    bend = min(1.0, 4 * width / sin_min)

    # chains: each guest crossing puts one transit on every rung of the host's band
    seg_bounds = {}
    for L in links:
        events[L].sort()
        seg_bounds[L] = [0.0] + [t for t, kind, _, _ in events[L] if kind == "guest"] + [1.0]
    transits = {}                      # (guest, host) -> transits in crossing order
    hosted = {}                        # (host, segment index) -> {side: [transit]}
    for L in links:
        for t, kind, H, th in events[L]:
            if kind != "guest":
                continue
            dH = _unit(vec[H])
            nH = _left(dH)
            cpt = _add(top[L], vec[L], t)
            before = _add(top[L], vec[L], t - 1e-3)
            side = 1 if _cross(dH, _sub(before, cpt)) > 0 else -1
            seg = sum(1 for x_ in seg_bounds[H][1:-1] if x_ < th)
            pair = []
            for j in (range(4) if side > 0 else range(3, -1, -1)):
                q0 = _add(top[H], nH, width * _RUNG_OFFSET[j])
                hit = _intersect(top[L], vec[L], q0, vec[H])
                center = _add(top[L], vec[L], hit[0])
                tr = _Transit(center, dH, side)
                _make_transit(b, tr, tsize)
                hosted.setdefault((H, seg), {}).setdefault(j, []).append(tr)
                pair.append(tr)
            transits[(L, H)] = pair

    for L in links:
        tag = f"{L[0]}:{L[1]}"
        ends = [slot_of[L]]
        inner = []
        for _, kind, H, _ in events[L]:
            if kind == "guest":
                ts = transits[(L, H)]
                ends.append(ts[0].slot(True))
                inner.extend((t1.slot(False), t2.slot(True)) for t1, t2 in zip(ts, ts[1:]))
                ends.append(ts[-1].slot(False))
        ends.append(choice_of[L])
        # ends pairs up as (src, T1) (T2, T1') ... (T2, dst): one long band each
        for seg in range(len(ends) // 2):
            _xor_band(b, ends[2 * seg], ends[2 * seg + 1], hosted.get((L, seg), {}),
                      width, bend, ann, f"{tag}/{seg}")
        for s_in, s_out in inner:
            _xor_band(b, s_in, s_out, {}, 0.0, 0.0, ann, f"{tag}/inner")

    g = Graph.from_edges(len(b.xy), b.edges)
    bip = bipartition(g)
    if any(bip.side[v] != b.color[v] ^ bip.side[0] ^ b.color[0] for v in range(g.n)):
        raise AssertionError("construction coloring disagrees with the bipartition")
    emb = embedding_from_coords(g, b.xy)
    selectors = [g.edge_id(lad.entry, lad.p[0]) for lad in ladders]
    skips = [g.edge_id(lad.entry, lad.q[0]) for lad in ladders]
    annotations = [Annotation("selector", str(i), (selectors[i], skips[i])) for i in range(k)]
    for kind, ident, verts in ann:
        es = []
        for v in verts:
            es.extend(e for _, e in g.adjacency[v])
        annotations.append(Annotation(kind, ident, tuple(sorted(set(es)))))
    for fp in b.forced:
        annotations.append(Annotation("forced", str(len(annotations)),
                                      tuple(g.edge_id(u, v) for u, v in fp)))
    forced_in = [selectors[-1]] + skips[:-1]
    found = enumerate_cycles_forcing(g, forced_in=forced_in, max_cycles=1)
    if not found:
        raise AssertionError("no planted cycle: gadget assembly is broken")
    return ReducedInstance(esc, g, found[0], emb, b.xy, selectors, annotations)



class BrokenGadgetError(AssertionError):
    pass


def selected_members(ri: ReducedInstance, h2: HamCycle) -> list[int]:
    es = h2.edge_set(ri.graph)
    return [i for i, e in enumerate(ri.selectors) if e in es]


def decode(ri: ReducedInstance, h2: HamCycle):
    """The exact cover encoded by h2 (members of the original family), or
    "planted" when h2 is the planted cycle."""
    if h2.same_cycle(ri.planted):
        return "planted"
    fam = ri.esc.extended()
    chosen = selected_members(ri, h2)
    if not chosen or chosen == [len(fam) - 1]:
        raise BrokenGadgetError("a second cycle selects the planted solution")
    covered = sorted(x for i in chosen for x in fam[i])
    if covered != list(range(ri.esc.universe)):
        raise BrokenGadgetError(f"members {chosen} do not form an exact cover")
    return [list(fam[i]) for i in chosen]
