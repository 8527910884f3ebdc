"""Thomason's lollipop walk on cubic graphs with step tracing.

A state is a Hamiltonian path t, s, ..., u starting with the anchor edge.
A step adds an edge {u, x} (x != t, not on the path), which closes a
lollipop with degree-3 vertex x, and removes the edge from x to its path
successor v; reversing the segment after x gives a path ending at v.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, GraphError, HamCycle


class NotCubicError(GraphError):
    pass


class AlreadyClosedError(GraphError):
    """The end is adjacent to t and no other step is admissible."""


class CeilingExceeded(RuntimeError):
    pass


@dataclass
class AnchoredPath:
    order: np.ndarray
    pos: np.ndarray = field(repr=False)

    @classmethod
    def from_order(cls, order, n: int | None = None) -> "AnchoredPath":
        arr = np.asarray(order, dtype=np.int64)
        pos = np.empty(len(arr) if n is None else n, dtype=np.int64)
        pos[arr] = np.arange(len(arr))
        return cls(arr, pos)

    @property
    def end(self) -> int:
        return int(self.order[-1])

    def copy(self) -> "AnchoredPath":
        return AnchoredPath(self.order.copy(), self.pos.copy())

    def as_list(self) -> list[int]:
        return self.order.tolist()


@dataclass
class Step:
    removed: tuple[int, int]
    added: tuple[int, int]
    end: int


@dataclass
class LollipopTrace:
    steps: list[Step] = field(default_factory=list)

    @property
    def step_count(self) -> int:
        return len(self.steps)

    def export(self) -> str:
        return "".join(
            f"step {i} remove {s.removed[0]} {s.removed[1]} add {s.added[0]} {s.added[1]} end {s.end}\n"
            for i, s in enumerate(self.steps, 1))


def _require_cubic(g: Graph) -> list[list[int]]:
    deg = g.degrees()
    if g.n == 0 or deg.min() != 3 or deg.max() != 3:
        raise NotCubicError("lollipop steps need a cubic graph")
    return [[w for w, _ in row] for row in g.adjacency]


def validate_path(g: Graph, q: AnchoredPath, s: int, t: int) -> bool:
    o = q.order
    if len(o) != g.n or len(set(o.tolist())) != g.n:
        return False
    if int(o[0]) != t or int(o[1]) != s:
        return False
    return bool(np.all(g.edge_ids(o[:-1], o[1:]) >= 0))


def admissible(adj: list[list[int]], q: AnchoredPath) -> list[int]:
    u = q.end
    t = int(q.order[0])
    before = int(q.order[-2])
    return [x for x in adj[u] if x != t and x != before]


def lollipop_step(g: Graph, q: AnchoredPath, x: int | None = None,
                  adj: list[list[int]] | None = None) -> tuple[AnchoredPath, Step]:
    """One step from q.  With two admissible x and none given, the smaller is used."""
    adj = adj or _require_cubic(g)
    cand = admissible(adj, q)
    if x is None:
        if not cand:
            raise AlreadyClosedError("end has no admissible neighbor: both extra neighbors are t")
        x = min(cand)
    elif x not in cand:
        raise GraphError(f"{x} is not an admissible lollipop neighbor of {q.end}")
    u = q.end
    i = int(q.pos[x])
    n = len(q.order)
    v = int(q.order[i + 1])
    out = q.copy()
    seg = out.order[i + 1:][::-1].copy()
    out.order[i + 1:] = seg
    out.pos[seg] = np.arange(i + 1, n)
    return out, Step((x, v), (u, x), v)


def lollipop_run(g: Graph, h: HamCycle, s: int, t: int, ceiling: int = 1 << 20,
                 check_states: bool = False) -> tuple[HamCycle, LollipopTrace]:
    """Delete the non-anchor cycle edge at t and walk the lollipop state path
    until the end is again adjacent to t; close it to a new cycle.

    States whose end is adjacent to t have a single neighbor in the state
    graph, so the walk from the start state ends at a different such state."""
    adj = _require_cubic(g)
    order = list(h.anchored(s, t).order)
    q = AnchoredPath.from_order([t] + order[:-1], g.n)
    trace = LollipopTrace()
    back: int | None = None  # x that would undo the previous step
    while True:
        if trace.steps and t in adj[q.end]:
            break
        cand = [x for x in admissible(adj, q) if x != back]
        if not cand:
            raise GraphError(f"lollipop walk stuck at end {q.end}")
        if len(trace.steps) >= ceiling:
            raise CeilingExceeded(f"ceiling of {ceiling} steps exceeded")
        q, step = lollipop_step(g, q, cand[0], adj)
        back = step.removed[0]
        trace.steps.append(step)
        if check_states and not validate_path(g, q, s, t):
            raise GraphError(f"invalid intermediate path after step {len(trace.steps)}")
    path = q.order.tolist()
    return HamCycle(path[1:] + [t]), trace
