"""Immutable simple undirected graphs plus the connectivity helpers every layer shares.

Vertices are opaque labels (strings or small integers).  All derived
collections are canonically ordered by label so that every algorithm in the
package produces deterministic output.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .errors import InputError


def label_key(v):
    """Total order over mixed int/str labels (class name first, value second)."""
    return (v.__class__.__name__, v)


def canon_vertices(vs) -> tuple:
    return tuple(sorted(vs, key=label_key))


def canon_edge(u, v) -> tuple:
    return tuple(sorted((u, v), key=label_key))


def _edge_key(e):
    return (label_key(e[0]), label_key(e[1]))


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph: no loops, no multi-edges, labeled vertices.

    Instances are immutable values; derived graphs are fresh instances.
    """

    vertices: tuple
    edges: tuple

    def __post_init__(self):
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise InputError(f"duplicate vertex {v!r}")
            seen.add(v)
        canon = []
        eseen = set()
        for e in self.edges:
            try:
                u, v = e
            except (TypeError, ValueError):
                raise InputError(f"edge {e!r} is not a pair") from None
            if u == v:
                raise InputError(f"loop edge at vertex {u!r}")
            if u not in seen:
                raise InputError(f"edge endpoint {u!r} is not a declared vertex")
            if v not in seen:
                raise InputError(f"edge endpoint {v!r} is not a declared vertex")
            ce = canon_edge(u, v)
            if ce in eseen:
                raise InputError(f"duplicate edge {ce!r}")
            eseen.add(ce)
            canon.append(ce)
        object.__setattr__(self, "vertices", canon_vertices(self.vertices))
        object.__setattr__(self, "edges", tuple(sorted(canon, key=_edge_key)))

    @cached_property
    def adjacency(self) -> dict:
        adj = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {v: tuple(sorted(ns, key=label_key)) for v, ns in adj.items()}

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def neighbors(self, v) -> tuple:
        if v not in self.adjacency:
            raise InputError(f"unknown vertex {v!r}")
        return self.adjacency[v]

    def degree(self, v) -> int:
        return len(self.neighbors(v))

    def has_vertex(self, v) -> bool:
        return v in self.adjacency

    def has_edge(self, u, v) -> bool:
        return canon_edge(u, v) in self.edge_set


def induced_subgraph(g: Graph, s) -> Graph:
    """Graph on s with exactly the edges of g internal to s."""
    s = frozenset(s)
    for v in s:
        if not g.has_vertex(v):
            raise InputError(f"unknown vertex {v!r} in induced set")
    edges = [e for e in g.edges if e[0] in s and e[1] in s]
    return Graph(tuple(s), tuple(edges))


def connected_components(g: Graph) -> list[frozenset]:
    """Maximal connected vertex sets, ordered by smallest vertex label."""
    unseen = set(g.vertices)
    comps = []
    for start in g.vertices:
        if start not in unseen:
            continue
        comp = {start}
        unseen.discard(start)
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if w in unseen:
                    unseen.discard(w)
                    comp.add(w)
                    queue.append(w)
        comps.append(frozenset(comp))
    comps.sort(key=lambda c: label_key(min(c, key=label_key)))
    return comps


def is_connected(g: Graph) -> bool:
    return g.n == 0 or len(connected_components(g)) == 1


def is_connected_or_empty(g: Graph, s) -> bool:
    """True iff s is empty or induces exactly one component of g."""
    s = frozenset(s)
    if not s:
        return True
    return len(connected_components(induced_subgraph(g, s))) == 1


def is_path_graph(g: Graph) -> bool:
    """Nonempty path: connected, two endpoints of degree <= 1, rest degree 2."""
    if g.n == 0 or not is_connected(g):
        return False
    if g.n == 1:
        return True
    degs = sorted(g.degree(v) for v in g.vertices)
    return degs[0] == 1 and degs[1] == 1 and all(d == 2 for d in degs[2:])


def is_cycle_graph(g: Graph) -> bool:
    return g.n >= 3 and is_connected(g) and all(g.degree(v) == 2 for v in g.vertices)


def is_bipartite(g: Graph) -> bool:
    color = {}
    for start in g.vertices:
        if start in color:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if w not in color:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return False
    return True


def complement(g: Graph) -> Graph:
    edges = [canon_edge(u, v) for u, v in combinations(g.vertices, 2) if not g.has_edge(u, v)]
    return Graph(g.vertices, tuple(edges))


def cycle_order(g: Graph) -> tuple:
    """Vertices of a cycle graph in a canonical cyclic walk.

    Starts at the smallest label and moves toward its smaller neighbor, so the
    same graph always yields the same orientation.
    """
    if not is_cycle_graph(g):
        raise InputError("cycle_order requires a cycle graph")
    start = min(g.vertices, key=label_key)
    walk = [start]
    prev = None
    cur = start
    while True:
        nxt = [w for w in g.adjacency[cur] if w != prev]
        step = min(nxt, key=label_key)
        if step == start:
            break
        walk.append(step)
        prev, cur = cur, step
    return tuple(walk)


def bfs_shortest_path(g: Graph, source, goals, banned=()) -> list | None:
    """Deterministic shortest path from source to any goal avoiding banned vertices."""
    goals = set(goals)
    banned = set(banned)
    if source in banned:
        return None
    if source in goals:
        return [source]
    parent = {source: None}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if w in parent or w in banned:
                continue
            parent[w] = u
            if w in goals:
                path = [w]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                path.reverse()
                return path
            queue.append(w)
    return None


def hamiltonian_path_order(g: Graph) -> tuple | None:
    """A canonical Hamiltonian path of g, or None.

    Deterministic: start vertices and extensions are tried in label order and
    the result is flipped so its first endpoint carries the smaller label.
    """
    n = g.n
    if n == 0:
        return None
    if n == 1:
        return (g.vertices[0],)

    def extend(path, used):
        if len(path) == n:
            return tuple(path)
        for w in g.adjacency[path[-1]]:
            if w not in used:
                path.append(w)
                used.add(w)
                got = extend(path, used)
                if got is not None:
                    return got
                used.discard(w)
                path.pop()
        return None

    for start in g.vertices:
        found = extend([start], {start})
        if found is not None:
            if label_key(found[0]) > label_key(found[-1]):
                found = tuple(reversed(found))
            return found
    return None


def find_isomorphism(g1: Graph, g2: Graph) -> dict | None:
    """Backtracking isomorphism g1 -> g2 with degree pruning; None if none exists."""
    if g1.n != g2.n or len(g1.edges) != len(g2.edges):
        return None
    deg1 = {v: g1.degree(v) for v in g1.vertices}
    deg2 = {v: g2.degree(v) for v in g2.vertices}
    if sorted(deg1.values()) != sorted(deg2.values()):
        return None
    order = sorted(g1.vertices, key=lambda v: (-deg1[v], label_key(v)))

    def assign(i, mapping, used):
        if i == len(order):
            return dict(mapping)
        v = order[i]
        for w in g2.vertices:
            if w in used or deg2[w] != deg1[v]:
                continue
            ok = True
            for u in g1.adjacency[v]:
                if u in mapping and not g2.has_edge(mapping[u], w):
                    ok = False
                    break
            if ok:
                for u in mapping:
                    if g1.has_edge(v, u) != g2.has_edge(w, mapping[u]):
                        ok = False
                        break
            if ok:
                mapping[v] = w
                used.add(w)
                got = assign(i + 1, mapping, used)
                if got is not None:
                    return got
                del mapping[v]
                used.discard(w)
        return None

    return assign(0, {}, set())


def graph_to_json_obj(g: Graph) -> dict:
    return {"vertices": list(g.vertices), "edges": [list(e) for e in g.edges]}


def graph_from_json_obj(obj) -> Graph:
    if not isinstance(obj, dict):
        raise InputError("graph JSON must be an object")
    for field in ("vertices", "edges"):
        if field not in obj:
            raise InputError(f"graph JSON missing field {field!r}")
    vertices = obj["vertices"]
    edges = obj["edges"]
    if not isinstance(vertices, list) or not isinstance(edges, list):
        raise InputError("graph JSON fields 'vertices' and 'edges' must be lists")
    return Graph(tuple(vertices), tuple(tuple(e) for e in edges))
