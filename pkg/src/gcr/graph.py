"""Finite simple undirected graphs with 1-indexed vertices.

Graphs are immutable once built. All-pairs BFS distances are computed
eagerly because every solver in the package queries them many times and
the graphs are small.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations
from typing import Iterable

import numpy as np


class GraphError(ValueError):
    """Raised for malformed or invalid graph input."""


class Graph:
    """A connected, simple, undirected graph on vertices ``1..n``."""

    __slots__ = ("_n", "_edges", "_adj", "_dist")

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int]]):
        if not isinstance(vertex_count, int) or vertex_count < 1:
            raise GraphError(f"vertex_count must be a positive integer, got {vertex_count!r}")
        n = vertex_count
        adj: list[set[int]] = [set() for _ in range(n + 1)]
        edge_set: set[frozenset[int]] = set()
        for u, v in edges:
            for x in (u, v):
                if not (1 <= x <= n):
                    raise GraphError(f"vertex {x} out of range 1..{n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            e = frozenset((u, v))
            if e in edge_set:
                raise GraphError(f"duplicate edge {{{u}, {v}}}")
            edge_set.add(e)
            adj[u].add(v)
            adj[v].add(u)
        self._n = n
        self._edges = frozenset(edge_set)
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        self._dist = self._all_pairs_bfs()
        if any(d < 0 for d in self._dist[1][1:]):
            raise GraphError("graph is disconnected")

    def _all_pairs_bfs(self) -> tuple[tuple[int, ...], ...]:
        n = self._n
        rows: list[tuple[int, ...]] = [()]
        for src in range(1, n + 1):
            d = [-1] * (n + 1)
            d[src] = 0
            queue = deque([src])
            while queue:
                x = queue.popleft()
                for y in self._adj[x]:
                    if d[y] < 0:
                        d[y] = d[x] + 1
                        queue.append(y)
            rows.append(tuple(d))
        return tuple(rows)

    # -- basic accessors -------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return self._n

    @property
    def vertices(self) -> range:
        return range(1, self._n + 1)

    @property
    def edges(self) -> frozenset[frozenset[int]]:
        return self._edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(tuple(sorted(e)) for e in self._edges)

    def _check(self, v: int) -> None:
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or not (1 <= v <= self._n):
            raise GraphError(f"invalid vertex {v!r} (graph has vertices 1..{self._n})")

    def has_edge(self, u: int, v: int) -> bool:
        self._check(u)
        self._check(v)
        return v in self._adj[u]

    def neighbors(self, v: int) -> tuple[int, ...]:
        self._check(v)
        return self._adj[v]

    def closed_neighborhood(self, v: int) -> tuple[int, ...]:
        """N[v] as a sorted tuple."""
        self._check(v)
        return tuple(sorted(self._adj[v] + (v,)))

    def degree(self, v: int) -> int:
        self._check(v)
        return len(self._adj[v])

    def distance(self, u: int, v: int) -> int:
        self._check(u)
        self._check(v)
        return self._dist[u][v]

    # -- paths, trees, medians --------------------------------------------

    def shortest_path(self, u: int, v: int) -> list[int]:
        """One shortest path from ``u`` to ``v``; lowest-index next hop on ties."""
        self._check(u)
        self._check(v)
        path = [u]
        while path[-1] != v:
            x = path[-1]
            path.append(next(y for y in self._adj[x] if self._dist[y][v] == self._dist[x][v] - 1))
        return path

    def step_toward(self, u: int, v: int) -> int:
        """Next vertex on a shortest path from u to v (u itself when u == v)."""
        if u == v:
            self._check(u)
            return u
        return self.shortest_path(u, v)[1]

    def interval(self, u: int, v: int) -> frozenset[int]:
        """All vertices lying on some shortest u-v path."""
        d = self.distance(u, v)
        return frozenset(w for w in self.vertices if self._dist[u][w] + self._dist[w][v] == d)

    @property
    def is_tree(self) -> bool:
        return len(self._edges) == self._n - 1

    @property
    def is_path(self) -> bool:
        return self.is_tree and all(len(a) <= 2 for a in self._adj[1:])

    def classify(self) -> dict[str, bool]:
        return {"is_tree": self.is_tree, "is_path": self.is_path}

    def median(self, x: int, y: int, z: int) -> int:
        """The vertex shared by the three pairwise shortest paths (trees only)."""
        if not self.is_tree:
            raise GraphError("median is only defined here for trees")
        common = self.interval(x, y) & self.interval(y, z) & self.interval(x, z)
        (m,) = common
        return m

    # -- dunder -------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(vertex_count={self._n}, edges={self.sorted_edges()})"

    # -- I/O ----------------------------------------------------------------

    def to_edge_list(self) -> str:
        lines = [str(self._n)] + [f"{u} {v}" for u, v in self.sorted_edges()]
        return "\n".join(lines) + "\n"

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        lines += [f"  {v};" for v in self.vertices]
        lines += [f"  {u} -- {v};" for u, v in self.sorted_edges()]
        lines.append("}")
        return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format.

    The first non-comment line holds the vertex count; every following
    line is a whitespace-separated pair ``u v``. Lines starting with
    ``#`` and blank lines are ignored.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append((lineno, line))
    if not lines:
        raise GraphError("empty graph description")
    lineno, head = lines[0]
    try:
        n = int(head)
    except ValueError:
        raise GraphError(f"line {lineno}: expected vertex count, got {head!r}") from None
    edges = []
    for lineno, line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer vertex in {line!r}") from None
        edges.append((u, v))
    return Graph(n, edges)


def read_graph(path: str) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


# -- common families ----------------------------------------------------------


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(1, n)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycles need at least 3 vertices")
    return Graph(n, [(i, i + 1) for i in range(1, n)] + [(n, 1)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with center 1."""
    return Graph(leaves + 1, [(1, i) for i in range(2, leaves + 2)])


def complete_graph(n: int) -> Graph:
    return Graph(n, list(combinations(range(1, n + 1), 2)))
