"""Graph representation, file formats, bipartition and cycle validation.

Edges are stored with their endpoints in ascending vertex order and keep the
id they were given at construction (file order when parsed).  Endpoint arrays
are numpy-backed so the linear-time algorithms can work on graphs with a
million vertices; the per-vertex adjacency lists are built lazily for the
small-graph code paths.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Malformed input or violated structural precondition."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotBipartiteError(GraphError):
    pass


@dataclass(eq=False)
class Graph:
    n: int
    eu: np.ndarray
    ev: np.ndarray
    weights: tuple[Fraction, ...] | None = None
    _adj: list | None = field(default=None, repr=False)
    _csr: tuple | None = field(default=None, repr=False)
    _index: dict | None = field(default=None, repr=False)

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[Sequence[int]],
                   weights: Sequence[Fraction] | None = None,
                   check: bool = True) -> "Graph":
        arr = np.asarray(list(pairs) if not isinstance(pairs, np.ndarray) else pairs,
                         dtype=np.int64).reshape(-1, 2)
        return cls.from_arrays(n, arr[:, 0], arr[:, 1], weights, check)

    @classmethod
    def from_arrays(cls, n: int, a: np.ndarray, b: np.ndarray,
                    weights: Sequence[Fraction] | None = None,
                    check: bool = True) -> "Graph":
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        eu = np.minimum(a, b)
        ev = np.maximum(a, b)
        if check:
            if len(eu) and (eu.min() < 0 or ev.max() >= n):
                raise GraphError("vertex id out of range")
            if np.any(eu == ev):
                raise GraphError(f"loop at vertex {int(eu[eu == ev][0])}")
            keys = eu * n + ev
            if len(np.unique(keys)) != len(keys):
                raise GraphError("duplicate edge")
        if weights is not None:
            weights = tuple(Fraction(w) for w in weights)
            if len(weights) != len(eu):
                raise GraphError("weight count differs from edge count")
            if any(w <= 0 for w in weights):
                raise GraphError("edge weights must be positive")
        return cls(int(n), eu, ev, weights)

    @property
    def m(self) -> int:
        return len(self.eu)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.eu.tolist(), self.ev.tolist()))

    @property
    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Per vertex, (neighbor, edge id) in increasing edge-id order."""
        if self._adj is None:
            adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
            for e, (u, v) in enumerate(self.edges):
                adj[u].append((v, e))
                adj[v].append((u, e))
            self._adj = adj
        return self._adj

    @property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(indptr, neighbor, edge id) with each row in edge-id order."""
        if self._csr is None:
            m = self.m
            src = np.concatenate([self.eu, self.ev])
            dst = np.concatenate([self.ev, self.eu])
            eid = np.concatenate([np.arange(m), np.arange(m)])
            order = np.lexsort((eid, src))
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(np.bincount(src, minlength=self.n), out=indptr[1:])
            self._csr = (indptr, dst[order], eid[order])
        return self._csr

    def degrees(self) -> np.ndarray:
        return np.bincount(np.concatenate([self.eu, self.ev]), minlength=self.n)

    def min_degree(self) -> int:
        return int(self.degrees().min()) if self.n else 0

    def edge_id(self, u: int, v: int) -> int | None:
        if self._index is None:
            self._index = {(a, b): e for e, (a, b) in enumerate(self.edges)}
        return self._index.get((u, v) if u < v else (v, u))

    def edge_ids(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Vectorized edge lookup; -1 where {a[i], b[i]} is not an edge."""
        keys = self.eu * self.n + self.ev
        order = np.argsort(keys, kind="stable")
        sk = keys[order]
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        q = lo * self.n + hi
        idx = np.searchsorted(sk, q)
        idx_c = np.minimum(idx, len(sk) - 1)
        found = (idx < len(sk)) & (sk[idx_c] == q)
        return np.where(found, order[idx_c], -1)

    def other(self, e: int, u: int) -> int:
        a, b = int(self.eu[e]), int(self.ev[e])
        return b if u == a else a

    def weight(self, e: int) -> Fraction:
        return self.weights[e] if self.weights is not None else Fraction(1)

    def with_weights(self, weights: Sequence[Fraction]) -> "Graph":
        return Graph.from_arrays(self.n, self.eu, self.ev, weights, check=False)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = [False] * self.n
        seen[0] = True
        stack = [0]
        adj = self.adjacency
        count = 1
        while stack:
            v = stack.pop()
            for w, _ in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    stack.append(w)
        return count == self.n


def _parse_weight(tok: str, lineno: int) -> Fraction:
    try:
        w = Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise GraphError(f"bad weight {tok!r}", lineno) from None
    if w <= 0:
        raise GraphError(f"weight {tok} is not positive", lineno)
    return w


def parse_graph(text: str) -> Graph:
    n = m = None
    pairs: list[tuple[int, int]] = []
    weights: list[Fraction] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line == "c" or line.startswith("c "):
            continue
        tok = line.split()
        if tok[0] == "p":
            if n is not None or len(tok) != 3:
                raise GraphError("bad or repeated header", lineno)
            try:
                n, m = int(tok[1]), int(tok[2])
            except ValueError:
                raise GraphError("non-integer header field", lineno) from None
            if n < 0 or m < 0:
                raise GraphError("negative header field", lineno)
        elif tok[0] == "e":
            if n is None:
                raise GraphError("edge before header", lineno)
            if len(tok) not in (3, 4):
                raise GraphError("edge line needs 2 or 3 fields", lineno)
            try:
                u, v = int(tok[1]), int(tok[2])
            except ValueError:
                raise GraphError("non-integer vertex id", lineno) from None
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"vertex out of range 0..{n - 1}", lineno)
            if u == v:
                raise GraphError(f"loop at vertex {u}", lineno)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"duplicate edge {key[0]} {key[1]}", lineno)
            seen.add(key)
            pairs.append(key)
            if len(tok) == 4:
                weights.append(_parse_weight(tok[3], lineno))
            elif weights:
                raise GraphError("weights must be given for all edges or none", lineno)
        else:
            raise GraphError(f"unknown line type {tok[0]!r}", lineno)
    if n is None:
        raise GraphError("missing header line")
    if len(pairs) != m:
        raise GraphError(f"header announces {m} edges, found {len(pairs)}")
    if weights and len(weights) != len(pairs):
        raise GraphError("weights must be given for all edges or none")
    return Graph.from_edges(n, pairs, weights or None, check=False)


def _format_weight(w: Fraction) -> str:
    return str(w.numerator) if w.denominator == 1 else f"{w.numerator}/{w.denominator}"


def serialize_graph(g: Graph, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"c {c}" for c in comment.splitlines())
    out.append(f"p {g.n} {g.m}")
    for e, (u, v) in enumerate(g.edges):
        if g.weights is None:
            out.append(f"e {u} {v}")
        else:
            out.append(f"e {u} {v} {_format_weight(g.weights[e])}")
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class Bipartition:
    """side[v] == 0 puts v in L, 1 in R."""

    side: tuple[int, ...]

    def is_left(self, v: int) -> bool:
        return self.side[v] == 0

    def swapped(self) -> "Bipartition":
        return Bipartition(tuple(1 - x for x in self.side))

    @property
    def left(self) -> list[int]:
        return [v for v, x in enumerate(self.side) if x == 0]

    @property
    def right(self) -> list[int]:
        return [v for v, x in enumerate(self.side) if x == 1]


def bipartition(g: Graph, root: int = 0) -> Bipartition:
    """Two-color g by BFS layers; the side containing ``root`` is L."""
    if g.n == 0:
        return Bipartition(())
    indptr, nbr, _ = g.csr
    ptr = indptr.tolist()
    nb = nbr.tolist()
    side = [-1] * g.n
    side[root] = 0
    queue = deque([root])
    while queue:
        v = queue.popleft()
        sv = 1 - side[v]
        for w in nb[ptr[v]:ptr[v + 1]]:
            if side[w] < 0:
                side[w] = sv
                queue.append(w)
    if min(side) < 0:
        raise GraphError("graph is not connected")
    side = np.asarray(side, dtype=np.int64)
    bad = side[g.eu] == side[g.ev]
    if np.any(bad):
        e = int(np.flatnonzero(bad)[0])
        raise NotBipartiteError(
            f"odd cycle: edge {e} = {{{int(g.eu[e])},{int(g.ev[e])}}} is monochromatic")
    return Bipartition(tuple(side.tolist()))


@dataclass(frozen=True)
class HamCycle:
    order: tuple[int, ...]

    def __init__(self, order: Iterable[int]):
        object.__setattr__(self, "order", tuple(int(v) for v in order))

    def __len__(self) -> int:
        return len(self.order)

    def pairs(self) -> list[tuple[int, int]]:
        o = self.order
        return [(o[i], o[(i + 1) % len(o)]) for i in range(len(o))]

    def edge_keys(self) -> frozenset[tuple[int, int]]:
        return frozenset((min(a, b), max(a, b)) for a, b in self.pairs())

    def edge_set(self, g: Graph) -> frozenset[int]:
        o = np.asarray(self.order, dtype=np.int64)
        return frozenset(g.edge_ids(o, np.roll(o, -1)).tolist())

    def contains_edge(self, u: int, v: int) -> bool:
        o = self.order
        i = o.index(u)
        return o[(i + 1) % len(o)] == v or o[i - 1] == v

    def anchored(self, s: int, t: int) -> "HamCycle":
        """Rotate/reflect so that the order starts at s and ends at t."""
        o = self.order
        i = o.index(s)
        n = len(o)
        if o[(i - 1) % n] == t:
            return HamCycle(o[i:] + o[:i])
        if o[(i + 1) % n] == t:
            r = o[i::-1] + o[:i:-1]
            return HamCycle(r)
        raise GraphError(f"edge {{{s},{t}}} is not on the cycle")

    def canonical(self) -> "HamCycle":
        o = self.order
        n = len(o)
        if n == 0:
            return self
        i = o.index(min(o))
        fwd = o[i:] + o[:i]
        bwd = (fwd[0],) + tuple(reversed(fwd[1:]))
        return HamCycle(min(fwd, bwd))

    def same_cycle(self, other: "HamCycle") -> bool:
        return self.edge_keys() == other.edge_keys()


@dataclass(frozen=True)
class CycleVerdict:
    ok: bool
    message: str = "ok"
    position: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_cycle(g: Graph, h: HamCycle | Sequence[int]) -> CycleVerdict:
    order = np.asarray(h.order if isinstance(h, HamCycle) else list(h), dtype=np.int64)
    n = g.n
    if len(order) != n:
        return CycleVerdict(False, f"cycle has {len(order)} vertices, graph has {n}")
    if n < 3:
        return CycleVerdict(False, "a Hamiltonian cycle needs at least 3 vertices")
    if order.min() < 0 or order.max() >= n:
        pos = int(np.flatnonzero((order < 0) | (order >= n))[0])
        return CycleVerdict(False, f"vertex {int(order[pos])} out of range", pos)
    first = np.full(n, -1, dtype=np.int64)
    first[order[::-1]] = np.arange(n - 1, -1, -1)
    repeated = first[order] != np.arange(n)
    if np.any(repeated):
        pos = int(np.flatnonzero(repeated)[0])
        return CycleVerdict(False, f"vertex {int(order[pos])} repeated at position {pos}", pos)
    ids = g.edge_ids(order, np.roll(order, -1))
    if np.any(ids < 0):
        pos = int(np.flatnonzero(ids < 0)[0])
        a, b = int(order[pos]), int(order[(pos + 1) % n])
        return CycleVerdict(False, f"{a}-{b} at position {pos} is not an edge", pos)
    return CycleVerdict(True)


def parse_cycle(text: str) -> HamCycle:
    toks = [t for line in text.splitlines() if not line.startswith("c ")
            for t in line.split()]
    try:
        return HamCycle(int(t) for t in toks)
    except ValueError:
        raise GraphError("non-integer vertex id in cycle file") from None


def serialize_cycle(h: HamCycle) -> str:
    return " ".join(map(str, h.order)) + "\n"
