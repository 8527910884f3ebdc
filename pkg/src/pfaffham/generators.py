"""Instance generators.  Each returns the graph together with a planar
embedding (when one is known) and a planted Hamiltonian cycle."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .graph import Graph, GraphError, HamCycle
from .orientations import PlanarEmbedding, embedding_from_coords


@dataclass
class Instance:
    name: str
    g: Graph
    emb: PlanarEmbedding | None = None
    cycle: HamCycle | None = None


def cube() -> Instance:
    """Q3 on 3-bit ids, drawn as two nested squares."""
    pairs = [(u, u ^ (1 << b)) for u in range(8) for b in range(3) if u < u ^ (1 << b)]
    g = Graph.from_edges(8, pairs)
    xy = []
    for v in range(8):
        r = 1.0 if v & 4 else 2.0
        xy.append((r if v & 1 else -r, r if v & 2 else -r))
    return Instance("cube", g, embedding_from_coords(g, xy),
                    HamCycle([0, 1, 3, 2, 6, 7, 5, 4]))


def cycle_graph(n: int) -> Instance:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    g = Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
    xy = [(math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n)) for i in range(n)]
    return Instance(f"cycle-{n}", g, embedding_from_coords(g, xy), HamCycle(range(n)))


def complete4() -> Instance:
    g = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    xy = [(0.0, 0.0), (0.0, 2.0), (-2.0, -1.0), (2.0, -1.0)]
    return Instance("K4", g, embedding_from_coords(g, xy), HamCycle([0, 1, 2, 3]))


def star3() -> Instance:
    g = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    return Instance("K1,3", g, embedding_from_coords(g, [(0, 0), (1, 0), (-1, 1), (-1, -1)]))


def grid(rows: int, cols: int) -> Instance:
    """rows x cols grid; vertex (r, c) has id r*cols + c."""
    if rows < 1 or cols < 1:
        raise GraphError("grid needs rows, cols >= 1")
    pairs = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                pairs.append((v, v + 1))
            if r + 1 < rows:
                pairs.append((v, v + cols))
    g = Graph.from_edges(rows * cols, pairs)
    xy = [(float(c), float(-r)) for r in range(rows) for c in range(cols)]
    cycle = None
    if rows >= 2 and cols >= 2 and (rows * cols) % 2 == 0:
        cycle = HamCycle(_grid_cycle(rows, cols))
    return Instance(f"grid-{rows}x{cols}", g, embedding_from_coords(g, xy), cycle)


def _grid_cycle(rows: int, cols: int) -> list[int]:
    if rows % 2:
        t = _grid_cycle(cols, rows)
        return [(v % rows) * cols + v // rows for v in t]
    order = [c for c in range(cols)]
    for r in range(1, rows):
        cs = range(cols - 1, 0, -1) if r % 2 else range(1, cols)
        order.extend(r * cols + c for c in cs)
    order.extend(r * cols for r in range(rows - 1, 0, -1))
    return order


def prism(rungs: int) -> Instance:
    """Circular ladder with the given number of rungs (2*rungs vertices).
    Bipartite exactly when rungs is even."""
    k = rungs
    if k < 3:
        raise GraphError("circular ladder needs at least 3 rungs")
    pairs = [(i, (i + 1) % k) for i in range(k)]
    pairs += [(k + i, k + (i + 1) % k) for i in range(k)]
    pairs += [(i, k + i) for i in range(k)]
    g = Graph.from_edges(2 * k, pairs)
    xy = []
    for radius in (2.0, 1.0):
        xy += [(radius * math.cos(2 * math.pi * i / k), radius * math.sin(2 * math.pi * i / k))
               for i in range(k)]
    cycle = HamCycle(list(range(k)) + list(range(2 * k - 1, k - 1, -1)))
    return Instance(f"CL{k}", g, embedding_from_coords(g, xy), cycle)


def chorded_cycle(n: int, d: int = 3, seed: int = 0,
                  with_embedding: bool | None = None) -> Instance:
    """Even cycle 0..n-1 plus non-crossing chords joining opposite-parity
    vertices, nested inside and outside the cycle.

    The cycle is cut into segments of 4q vertices (q >= 2) starting at a
    random offset.  A segment starting at a receives chords
    {a+4i, a+4i+3} on one side and {a+2+4i, a+5+4i}, {a+1, a+4q-2} on the
    other, which gives every segment vertex exactly one chord.  With d = 3
    every segment is chorded (the result is cubic); with d = 2 each segment
    is chorded with probability 1/2.
    """
    if d not in (2, 3):
        raise GraphError("chorded-cycle supports minimum degree 2 or 3")
    if n < 8 or n % 4:
        raise GraphError("chorded-cycle needs n >= 8 and n divisible by 4")
    rng = random.Random(seed)
    offset = rng.randrange(n)
    cyc_a = np.arange(n, dtype=np.int64)
    chords: list[tuple[int, int]] = []
    inside: list[bool] = []
    a = 0
    rem = n // 4
    while rem:
        q = rem if rem <= 3 else rng.randint(2, min(6, rem - 2))
        if d == 3 or rng.random() < 0.5:
            flip = rng.random() < 0.5
            for i in range(q):
                chords.append((a + 4 * i, a + 4 * i + 3))
                inside.append(not flip)
            for i in range(q - 1):
                chords.append((a + 2 + 4 * i, a + 5 + 4 * i))
                inside.append(flip)
            chords.append((a + 1, a + 4 * q - 2))
            inside.append(flip)
        a += 4 * q
        rem -= q
    ch = (np.asarray(chords, dtype=np.int64).reshape(-1, 2) + offset) % n
    a_arr = np.concatenate([cyc_a, ch[:, 0]])
    b_arr = np.concatenate([(cyc_a + 1) % n, ch[:, 1]])
    g = Graph.from_arrays(n, a_arr, b_arr, check=n <= 100_000)
    emb = None
    if with_embedding or (with_embedding is None and n <= 5000):
        rot: list[list[int]] = [[i, (i - 1) % n] for i in range(n)]
        inner = [-1] * n
        outer = [-1] * n
        for j, ((u, v), ins) in enumerate(zip(ch.tolist(), inside)):
            side = inner if ins else outer
            side[u] = side[v] = n + j
        for i in range(n):
            r = [i]
            if inner[i] >= 0:
                r.append(inner[i])
            r.append((i - 1) % n)
            if outer[i] >= 0:
                r.append(outer[i])
            rot[i] = r
        emb = PlanarEmbedding(tuple(tuple(r) for r in rot))
    return Instance(f"chorded-{n}-{d}-s{seed}", g, emb, HamCycle(range(n)))
