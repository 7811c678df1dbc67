"""Core combinatorial objects: graphs, tournaments, edge-colored multigraphs.

Vertices are dense integer ids 0..n-1.  All objects are immutable after
construction (numpy buffers are frozen) and safe to share between workers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import NotAcyclic, ParseError


class UndirectedGraph:
    """Finite simple graph: symmetric, irreflexive adjacency."""

    __slots__ = ("n", "m", "_adj", "_matrix")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-adjacency at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self._adj = tuple(frozenset(s) for s in adj)
        self.m = sum(len(s) for s in self._adj) // 2
        self._matrix = None

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def neighbors(self, u: int) -> frozenset[int]:
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self._adj[u]) if u < v]

    def matrix(self) -> np.ndarray:
        """Boolean adjacency matrix, built lazily and cached."""
        if self._matrix is None:
            m = np.zeros((self.n, self.n), dtype=bool)
            for u, v in self.edges():
                m[u, v] = m[v, u] = True
            m.setflags(write=False)
            self._matrix = m
        return self._matrix

    def induced(self, keep: Iterable[int]) -> "UndirectedGraph":
        """Induced subgraph on `keep`, relabeled to 0..|keep|-1 in sorted id order."""
        ids = sorted(set(keep))
        pos = {v: i for i, v in enumerate(ids)}
        edges = [(pos[u], pos[v]) for u, v in self.edges() if u in pos and v in pos]
        return UndirectedGraph(len(ids), edges)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, UndirectedGraph)
            and self.n == other.n
            and self._adj == other._adj
        )

    def __hash__(self):
        return hash((self.n, self._adj))

    def __repr__(self):
        return f"UndirectedGraph(n={self.n}, m={self.m})"


class Tournament:
    """Complete digraph: exactly one arc per unordered vertex pair, no loops."""

    __slots__ = ("n", "_m")

    def __init__(self, matrix):
        m = np.array(matrix, dtype=bool)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("orientation matrix must be square")
        n = m.shape[0]
        if n and m.diagonal().any():
            raise ValueError("loops are not allowed")
        if n:
            both = m & m.T
            neither = ~(m | m.T)
            np.fill_diagonal(neither, False)
            if both.any() or neither.any():
                raise ValueError("every pair must carry exactly one arc")
        m.setflags(write=False)
        self.n = n
        self._m = m

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "Tournament":
        m = np.zeros((n, n), dtype=bool)
        for u, v in arcs:
            m[u, v] = True
        return cls(m)

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self._m[u, v])

    def arcs(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in range(self.n):
                if self._m[u, v]:
                    yield (u, v)

    def induced(self, keep: Iterable[int]) -> "Tournament":
        ids = sorted(set(keep))
        return Tournament(self._m[np.ix_(ids, ids)])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Tournament)
            and self.n == other.n
            and np.array_equal(self._m, other._m)
        )

    def __hash__(self):
        return hash((self.n, self._m.tobytes()))

    def __repr__(self):
        return f"Tournament(n={self.n})"


def enumerate_triangles(t: Tournament, scope: Iterable[int] | None = None) -> list[tuple[int, int, int]]:
    """All 3-sets inside `scope` that induce a directed 3-cycle, as sorted triples."""
    ids = sorted(set(scope)) if scope is not None else list(range(t.n))
    m = t.matrix
    out = []
    for ia, a in enumerate(ids):
        for ib in range(ia + 1, len(ids)):
            b = ids[ib]
            ab = m[a, b]
            for ic in range(ib + 1, len(ids)):
                c = ids[ic]
                # cyclic iff the three arcs do not all leave a common source
                if ab:
                    if m[b, c] and m[c, a]:
                        out.append((a, b, c))
                else:
                    if m[c, b] and m[a, c]:
                        out.append((a, b, c))
    return out


def is_triangle(t: Tournament, tri: Iterable[int]) -> bool:
    a, b, c = sorted(tri)
    m = t.matrix
    if m[a, b]:
        return bool(m[b, c] and m[c, a])
    return bool(m[c, b] and m[a, c])


def topological_order(t: Tournament, scope: Iterable[int]) -> tuple[int, ...]:
    """Unique topological order of an acyclic sub-tournament.

    Raises NotAcyclic (with a witnessing triangle) if the scoped part contains
    a directed 3-cycle.  An acyclic tournament is transitive, so sorting by
    out-degree inside the scope yields the order; the arcs are then verified.
    """
    ids = sorted(set(scope))
    if len(ids) <= 1:
        return tuple(ids)
    sub = t.matrix[np.ix_(ids, ids)]
    scores = sub.sum(axis=1)
    perm = sorted(range(len(ids)), key=lambda i: (-int(scores[i]), ids[i]))
    reordered = sub[np.ix_(perm, perm)]
    expect = ~np.tri(len(ids), dtype=bool)
    if not np.array_equal(reordered, expect):
        tris = enumerate_triangles(t, ids)
        raise NotAcyclic(tris[0])
    return tuple(ids[i] for i in perm)


def enumerate_induced_p3(g: UndirectedGraph, scope: Iterable[int] | None = None) -> list[tuple[int, int, int]]:
    """All induced 2-paths inside `scope`, as (endpoint, center, endpoint) with
    endpoints sorted; the list is sorted.  A triple {u,v,w} qualifies iff
    exactly two of the three pairs are edges and they share the center."""
    ids = sorted(set(scope)) if scope is not None else list(range(g.n))
    idset = set(ids)
    out = []
    for v in ids:
        nb = sorted(g.neighbors(v) & idset)
        for i, u in enumerate(nb):
            for w in nb[i + 1:]:
                if not g.has_edge(u, w):
                    out.append((u, v, w))
    out.sort()
    return out


def is_induced_p3(g: UndirectedGraph, triple: Iterable[int]) -> bool:
    a, b, c = sorted(triple)
    e = int(g.has_edge(a, b)) + int(g.has_edge(a, c)) + int(g.has_edge(b, c))
    return e == 2


def p3_center(g: UndirectedGraph, triple: Iterable[int]) -> int:
    """The middle vertex of an induced 2-path given as a 3-set."""
    a, b, c = sorted(triple)
    if not g.has_edge(a, b):
        return c
    if not g.has_edge(a, c):
        return b
    return a


# ---------------------------------------------------------------------------
# Edge-colored multigraphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class ColoredEdge:
    """A loop (u == v) or ordinary edge (u < v) carrying one color."""

    u: int
    v: int
    color: int

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    def endpoints(self) -> frozenset[int]:
        return frozenset((self.u, self.v))

    def touches(self, other: "ColoredEdge") -> bool:
        return bool(self.endpoints() & other.endpoints())


def colored_edge(u: int, v: int, color: int) -> ColoredEdge:
    return ColoredEdge(min(u, v), max(u, v), color)


@dataclass(frozen=True)
class ColoredMultigraph:
    """Multigraph with loops whose edges carry colors 0..p-1.

    Every color is used by at least one edge, and parallel edges (same
    endpoint set) never share a color.
    """

    vertices: tuple[int, ...]
    edges: tuple[ColoredEdge, ...]
    p: int

    def __post_init__(self):
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ValueError("duplicate vertices")
        used = set()
        seen = set()
        for e in self.edges:
            if e.u not in vset or e.v not in vset:
                raise ValueError(f"edge {e} has endpoint outside the vertex set")
            if not (0 <= e.color < self.p):
                raise ValueError(f"color {e.color} out of range [0, {self.p})")
            key = (e.u, e.v, e.color)
            if key in seen:
                raise ValueError(f"parallel edges on {{{e.u}, {e.v}}} share color {e.color}")
            seen.add(key)
            used.add(e.color)
        if used != set(range(self.p)):
            missing = sorted(set(range(self.p)) - used)
            raise ValueError(f"color map not surjective; unused colors {missing}")

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def edges_of_color(self, color: int) -> list[ColoredEdge]:
        return [e for e in self.edges if e.color == color]


def make_colored_multigraph(vertices: Iterable[int], edges: Iterable[ColoredEdge], p: int) -> ColoredMultigraph:
    return ColoredMultigraph(tuple(sorted(set(vertices))), tuple(sorted(edges)), p)


def dump_colored_multigraph(cm: ColoredMultigraph) -> str:
    """Debug dump: one line per edge, `loop v c` or `edge u v c`."""
    lines = []
    for e in sorted(cm.edges):
        if e.is_loop:
            lines.append(f"loop {e.u} {e.color}")
        else:
            lines.append(f"edge {e.u} {e.v} {e.color}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_colored_multigraph(text: str) -> ColoredMultigraph:
    """Parse the debug dump format.  Vertices and the color count are inferred
    from the edges; colors must form a contiguous range starting at 0."""
    edges = []
    vertices: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "loop" and len(parts) == 3:
                v, c = int(parts[1]), int(parts[2])
                edges.append(colored_edge(v, v, c))
                vertices.add(v)
            elif parts[0] == "edge" and len(parts) == 4:
                u, v, c = int(parts[1]), int(parts[2]), int(parts[3])
                if u == v:
                    raise ParseError(lineno, "ordinary edge with equal endpoints")
                edges.append(colored_edge(u, v, c))
                vertices.update((u, v))
            else:
                raise ParseError(lineno, f"unrecognized edge line {line!r}")
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(lineno, f"bad integer in {line!r}") from exc
    p = 1 + max((e.color for e in edges), default=-1)
    try:
        return make_colored_multigraph(vertices, edges, p)
    except ValueError as exc:
        raise ParseError(len(text.splitlines()), str(exc)) from exc
