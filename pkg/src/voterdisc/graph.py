"""Random d-regular graphs and local tree-likeness predicates.

Graphs are produced by the configuration model: the ``n*d`` half-edges are
paired by a uniform random matching and the whole matching is redrawn until
it has no self-loop and no repeated edge.  Conditioned on simplicity the
matching is uniform over simple d-regular graphs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .rng import make_rng

MAX_ATTEMPTS = 10_000


class GraphError(ValueError):
    """Invalid graph parameters or a malformed graph description."""


class GenerationFailed(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class RegularGraph:
    """Immutable simple d-regular graph on vertices ``0..n-1``.

    ``adjacency[v]`` holds the sorted neighbours of ``v`` and
    ``incidence[v, k]`` is the index in ``edges`` of ``{v, adjacency[v, k]}``.
    """

    n: int
    d: int
    adjacency: np.ndarray
    edges: np.ndarray
    incidence: np.ndarray

    @property
    def m(self) -> int:
        return len(self.edges)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], d: int | None = None) -> "RegularGraph":
        """Build and validate a graph from an undirected edge list.

        ``d`` defaults to the degree of vertex 0.  Raises ``GraphError`` on
        self-loops, repeated edges, out-of-range vertices or a degree other
        than ``d``.
        """
        n = int(n)
        pairs = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if n < 1:
            raise GraphError("graph needs at least one vertex")
        if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
            raise GraphError("vertex index out of range")
        if np.any(pairs[:, 0] == pairs[:, 1]):
            raise GraphError("self-loop")
        pairs = np.sort(pairs, axis=1)
        keys = pairs[:, 0] * n + pairs[:, 1]
        order = np.argsort(keys, kind="stable")
        pairs, keys = pairs[order], keys[order]
        if np.any(keys[1:] == keys[:-1]):
            raise GraphError("duplicate edge")
        deg = np.bincount(pairs.ravel(), minlength=n)
        if d is None:
            d = int(deg[0])
        bad = np.flatnonzero(deg != d)
        if bad.size:
            v = int(bad[0])
            raise GraphError(f"degree violation: vertex {v} has degree {deg[v]}, expected {d}")

        m = len(pairs)
        # each edge contributes (u -> v) and (v -> u); sorting by (tail, head)
        # yields sorted adjacency rows with the matching edge ids alongside
        tails = np.concatenate([pairs[:, 0], pairs[:, 1]])
        heads = np.concatenate([pairs[:, 1], pairs[:, 0]])
        eids = np.concatenate([np.arange(m), np.arange(m)])
        o = np.lexsort((heads, tails))
        adjacency = heads[o].reshape(n, d)
        incidence = eids[o].reshape(n, d)
        for a in (adjacency, incidence, pairs):
            a.setflags(write=False)
        return cls(n, int(d), adjacency, pairs, incidence)

    def neighbors(self, v: int) -> np.ndarray:
        return self.adjacency[v]

    def degree_histogram(self) -> dict[int, int]:
        deg = np.bincount(self.edges.ravel(), minlength=self.n)
        vals, counts = np.unique(deg, return_counts=True)
        return {int(a): int(b) for a, b in zip(vals, counts)}

    def edge_index(self, x: int, y: int) -> int:
        k = int(np.searchsorted(self.adjacency[x], y))
        if k >= self.d or self.adjacency[x, k] != y:
            raise GraphError(f"({x}, {y}) is not an edge")
        return int(self.incidence[x, k])

    def __eq__(self, other):
        if not isinstance(other, RegularGraph):
            return NotImplemented
        return self.n == other.n and self.d == other.d and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        return hash((self.n, self.d, self.edges.tobytes()))

    def __repr__(self):
        return f"RegularGraph(n={self.n}, d={self.d}, m={self.m})"


@dataclass(frozen=True)
class Subgraph:
    vertices: frozenset
    edges: frozenset  # of (u, v) with u < v

    def __post_init__(self):
        for u, v in self.edges:
            if u not in self.vertices or v not in self.vertices:
                raise GraphError(f"edge ({u}, {v}) leaves the vertex set")


def _check_params(n, d):
    if d < 3:
        raise GraphError(f"degree must be at least 3, got {d}")
    if n <= d:
        raise GraphError(f"need n > d, got n={n}, d={d}")
    if (n * d) % 2:
        raise GraphError(f"n*d must be even, got n={n}, d={d}")


def generate_regular(n: int, d: int, seed, max_attempts: int = MAX_ATTEMPTS) -> RegularGraph:
    """Uniform simple d-regular graph on ``n`` vertices.

    Deterministic in ``(n, d, seed)``.  Raises ``GenerationFailed`` when
    ``max_attempts`` matchings in a row are not simple.
    """
    n, d = int(n), int(d)
    _check_params(n, d)
    rng = make_rng(seed)
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)
    for _ in range(max_attempts):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        u = np.minimum(pairs[:, 0], pairs[:, 1])
        v = np.maximum(pairs[:, 0], pairs[:, 1])
        if np.any(u == v):
            continue
        keys = np.sort(u * n + v)
        if np.any(keys[1:] == keys[:-1]):
            continue
        return RegularGraph.from_edges(n, np.column_stack([u, v]), d)
    raise GenerationFailed(f"no simple matching after {max_attempts} attempts (n={n}, d={d})")


def bfs_distances(g: RegularGraph, source: int, radius: int | None = None) -> dict[int, int]:
    """Map vertex -> distance from ``source``, optionally cut at ``radius``."""
    dist = {source: 0}
    queue = deque([source])
    adj = g.adjacency
    while queue:
        v = queue.popleft()
        dv = dist[v]
        if radius is not None and dv >= radius:
            continue
        for w in adj[v]:
            w = int(w)
            if w not in dist:
                dist[w] = dv + 1
                queue.append(w)
    return dist


def is_connected(g: RegularGraph) -> bool:
    return len(bfs_distances(g, 0)) == g.n


def distance(g: RegularGraph, x: int, y: int) -> int | None:
    """Shortest-path length, or ``None`` when ``y`` is unreachable from ``x``."""
    if x == y:
        return 0
    return bfs_distances(g, x).get(y)


def induced_subgraph(g: RegularGraph, vertices) -> Subgraph:
    vs = frozenset(int(v) for v in vertices)
    es = set()
    for v in vs:
        for w in g.adjacency[v]:
            w = int(w)
            if v < w and w in vs:
                es.add((v, w))
    return Subgraph(vs, frozenset(es))


def ball(g: RegularGraph, x: int, radius: int) -> Subgraph:
    """Subgraph induced by the vertices within ``radius`` of ``x``."""
    return induced_subgraph(g, bfs_distances(g, x, radius))


def _components(vertices, edges) -> int:
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    count = len(parent)
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            count -= 1
    return count


def tree_excess(s: Subgraph) -> int:
    """Edges to delete to leave a spanning forest: ``|E| - |V| + components``.

    For a connected subgraph this is the number of edges that must go to
    obtain a tree, and it is 0 exactly for trees.
    """
    return len(s.edges) - len(s.vertices) + _components(s.vertices, s.edges)


def is_ltl_vertex(g: RegularGraph, x: int, radius: int) -> bool:
    """True iff the ball of the given radius around ``x`` is a tree."""
    if radius < 1:
        raise GraphError("radius must be >= 1")
    return tree_excess(ball(g, x, radius)) == 0


def _edge_endpoints(g, e):
    if isinstance(e, (int, np.integer)):
        x, y = g.edges[int(e)]
        return int(x), int(y)
    x, y = (int(v) for v in e)
    g.edge_index(x, y)
    return x, y


def is_ltle_edge(g: RegularGraph, e, radius: int) -> bool:
    """True iff the union of the two radius-balls at the ends of ``e``, with
    ``e`` removed, is two disjoint trees, one through each endpoint.

    ``e`` is an edge index or an endpoint pair.
    """
    if radius < 1:
        raise GraphError("radius must be >= 1")
    x, y = _edge_endpoints(g, e)
    verts = set(bfs_distances(g, x, radius)) | set(bfs_distances(g, y, radius))
    sub = induced_subgraph(g, verts)
    rest = sub.edges - {(min(x, y), max(x, y))}
    # every vertex hangs off x or y, so 2 components + acyclic <=> |E| = |V| - 2
    if len(rest) != len(verts) - 2:
        return False
    return _components(verts, rest) == 2 and not _joined(rest, x, y)


def _joined(edges, x, y) -> bool:
    nbrs: dict[int, list[int]] = {}
    for u, v in edges:
        nbrs.setdefault(u, []).append(v)
        nbrs.setdefault(v, []).append(u)
    seen = {x}
    stack = [x]
    while stack:
        v = stack.pop()
        if v == y:
            return True
        for w in nbrs.get(v, ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return False


def ltle_edges(g: RegularGraph, radius: int) -> np.ndarray:
    """Indices of all LTLE edges for ``radius``."""
    return np.array([i for i in range(g.m) if is_ltle_edge(g, i, radius)], dtype=np.int64)


def default_radius(n: int, d: int) -> int:
    """``floor(log_d(n) / 5)``, floored at 1."""
    # small epsilon guards exact powers against rounding down
    return max(1, int(np.floor(np.log(n) / np.log(d) / 5 + 1e-12)))


def save_graph(g: RegularGraph, sink) -> None:
    """Write the edge-list format: ``"n d"`` then one ``"u v"`` line per edge."""
    lines = [f"{g.n} {g.d}\n"]
    lines.extend(f"{u} {v}\n" for u, v in g.edges)
    text = "".join(lines)
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        with open(sink, "w", encoding="ascii") as fh:
            fh.write(text)


def load_graph(source) -> RegularGraph:
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, encoding="ascii") as fh:
            text = fh.read()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise GraphError("empty graph file")
    header = lines[0].split()
    if len(header) != 2 or not all(h.isdigit() for h in header):
        raise GraphError(f"malformed header: {lines[0]!r}")
    n, d = int(header[0]), int(header[1])
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise GraphError(f"malformed edge line: {ln!r}")
        u, v = int(parts[0]), int(parts[1])
        if u >= v:
            raise GraphError(f"edge line must have u < v: {ln!r}")
        edges.append((u, v))
    return RegularGraph.from_edges(n, edges, d)
