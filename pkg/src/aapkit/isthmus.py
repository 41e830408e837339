"""k-isthmuses, k-blocks, and the k-isthmus tree of a connected graph.

A k-isthmus is a k-vertex path whose removal splits the remaining vertices
into two nonempty sides with no edge across.  Its vertex set may induce
chords, so candidate sets are tested with a Hamiltonian-path check rather
than by enumerating chordless paths.  Blocks are computed by recursive
separator splitting: every block lies entirely on one side of any isthmus
(plus the isthmus itself), so splitting on one isthmus and recursing is
exact.  A definitional 2^n oracle lives in the oracle module for
cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .errors import CapacityError, InputError, LogicError
from .graphs import (
    Graph,
    canon_vertices,
    connected_components,
    hamiltonian_path_order,
    induced_subgraph,
    is_connected,
    label_key,
)

DEFAULT_VERTEX_LIMIT = 20


@dataclass(frozen=True)
class Isthmus:
    """A separating k-vertex path with its canonical two-sided grouping.

    `path` is direction-canonical (smaller-labeled endpoint first).  `x` is
    the lexicographically least component of the remainder, `y` the union of
    the rest; `components` keeps the full component list.
    """

    path: tuple
    x: frozenset
    y: frozenset
    components: tuple

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(self.path)

    @property
    def k(self) -> int:
        return len(self.path)


@dataclass(frozen=True)
class IsthmusTree:
    """Bipartite containment tree on k-blocks and k-isthmuses."""

    blocks: tuple
    isthmuses: tuple
    edges: tuple  # (block index, isthmus index) pairs

    @property
    def node_count(self) -> int:
        return len(self.blocks) + len(self.isthmuses)


def _canon_path(path) -> tuple:
    path = tuple(path)
    if len(path) > 1 and label_key(path[0]) > label_key(path[-1]):
        return tuple(reversed(path))
    return path


def _sides(g: Graph, vs: frozenset):
    comps = connected_components(induced_subgraph(g, frozenset(g.vertices) - vs))
    if len(comps) < 2:
        return None
    x = comps[0]
    y = frozenset().union(*comps[1:])
    return x, y, tuple(comps)


def is_k_isthmus(g: Graph, path) -> Isthmus | None:
    """Validate a path of g and test whether it separates the rest of g."""
    path = tuple(path)
    if len(path) == 0:
        raise InputError("empty candidate path")
    if len(set(path)) != len(path):
        raise InputError("candidate path repeats a vertex")
    for v in path:
        if not g.has_vertex(v):
            raise InputError(f"unknown vertex {v!r} in candidate path")
    for a, b in zip(path, path[1:]):
        if not g.has_edge(a, b):
            raise InputError(f"candidate path skips non-edge {a!r}-{b!r}")
    grouped = _sides(g, frozenset(path))
    if grouped is None:
        return None
    x, y, comps = grouped
    return Isthmus(_canon_path(path), x, y, comps)


@lru_cache(maxsize=None)
def _bit_ctx(g: Graph):
    """Vertex order, index map, and adjacency bitmasks for subset scans."""
    order = g.vertices
    index = {v: i for i, v in enumerate(order)}
    masks = []
    for v in order:
        m = 0
        for w in g.adjacency[v]:
            m |= 1 << index[w]
        masks.append(m)
    return order, index, tuple(masks)


def _mask_components(masks, live: int) -> int:
    """Number of connected components of the subgraph induced by mask `live`."""
    count = 0
    rem = live
    while rem:
        count += 1
        seed = rem & -rem
        comp = seed
        frontier = seed
        while frontier:
            nxt = 0
            f = frontier
            while f:
                b = f & -f
                f ^= b
                nxt |= masks[b.bit_length() - 1]
            nxt &= rem & ~comp
            comp |= nxt
            frontier = nxt
        rem &= ~comp
    return count


def _iter_isthmus_sets(g: Graph, k: int, first_only: bool):
    """Yield k-subsets that separate g and induce a traceable path.

    Subsets are scanned in canonical order so `first_only` is deterministic.
    """
    order, _, masks = _bit_ctx(g)
    n = len(order)
    if n < k + 2:
        return
    full = (1 << n) - 1
    for combo in combinations(range(n), k):
        sub = 0
        for i in combo:
            sub |= 1 << i
        if _mask_components(masks, full & ~sub) < 2:
            continue
        vs = frozenset(order[i] for i in combo)
        if hamiltonian_path_order(induced_subgraph(g, vs)) is None:
            continue
        yield vs
        if first_only:
            return


def has_k_isthmus(g: Graph, k: int) -> bool:
    return any(True for _ in _iter_isthmus_sets(g, k, first_only=True))


def all_k_isthmuses(g: Graph, k: int) -> list[Isthmus]:
    """All k-isthmuses of a connected g, deduplicated up to path reversal."""
    if not is_connected(g):
        raise InputError("isthmus enumeration requires a connected graph")
    if not 1 <= k <= g.n - 2:
        raise InputError(f"k={k} out of range 1..{g.n - 2}")
    found = []
    for vs in _iter_isthmus_sets(g, k, first_only=False):
        path = hamiltonian_path_order(induced_subgraph(g, vs))
        x, y, comps = _sides(g, vs)
        found.append(Isthmus(_canon_path(path), x, y, comps))
    found.sort(key=lambda i: tuple(label_key(v) for v in i.path))
    return found


@lru_cache(maxsize=None)
def _blocks(g: Graph, k: int) -> tuple:
    """k-blocks of connected g, preconditions relaxed (any k >= 1).

    Splits on the first isthmus found: each block lies within one side plus
    the isthmus vertices, so the two restricted subproblems cover everything
    and cannot share a block.
    """
    if g.n <= k + 1:
        return (frozenset(g.vertices),)
    first = next(iter(_iter_isthmus_sets(g, k, first_only=True)), None)
    if first is None:
        return (frozenset(g.vertices),)
    x, y, _ = _sides(g, first)
    left = _blocks(induced_subgraph(g, x | first), k)
    right = _blocks(induced_subgraph(g, y | first), k)
    blocks = sorted(set(left) | set(right), key=lambda b: canon_vertices(b))
    _assert_unique_cover(g, k, blocks)
    return tuple(blocks)


def _assert_unique_cover(g: Graph, k: int, blocks) -> None:
    """Every connected (k+1)-subset must lie in exactly one block."""
    order, index, masks = _bit_ctx(g)
    n = len(order)
    if n < k + 1:
        return
    block_masks = []
    for b in blocks:
        m = 0
        for v in b:
            m |= 1 << index[v]
        block_masks.append(m)
    for combo in combinations(range(n), k + 1):
        sub = 0
        for i in combo:
            sub |= 1 << i
        if _mask_components(masks, sub) != 1:
            continue
        owners = sum(1 for bm in block_masks if bm & sub == sub)
        if owners != 1:
            raise LogicError(
                f"connected {k + 1}-subset lies in {owners} blocks; expected exactly one"
            )


def all_k_blocks(g: Graph, k: int, vertex_limit: int = DEFAULT_VERTEX_LIMIT) -> list[frozenset]:
    """All maximal connected sets whose induced subgraph has no k-isthmus of itself."""
    if not is_connected(g):
        raise InputError("block enumeration requires a connected graph")
    if not 1 <= k <= g.n - 2:
        raise InputError(f"k={k} out of range 1..{g.n - 2}")
    if g.n > vertex_limit:
        raise CapacityError(
            f"graph has {g.n} vertices, above the enumeration limit {vertex_limit}"
        )
    return list(_blocks(g, k))


def isthmus_tree(g: Graph, k: int, vertex_limit: int = DEFAULT_VERTEX_LIMIT) -> IsthmusTree:
    """Containment tree over all k-blocks and k-isthmuses; asserts treeness."""
    blocks = all_k_blocks(g, k, vertex_limit)
    isthmuses = all_k_isthmuses(g, k)
    edges = []
    for bi, b in enumerate(blocks):
        for ii, isth in enumerate(isthmuses):
            if isth.vertex_set <= b:
                edges.append((bi, ii))
    tree = IsthmusTree(tuple(blocks), tuple(isthmuses), tuple(sorted(edges)))
    _assert_tree(tree)
    return tree


def _assert_tree(t: IsthmusTree) -> None:
    nodes = t.node_count
    if nodes == 0:
        raise LogicError("isthmus tree has no nodes")
    if len(t.edges) != nodes - 1:
        raise LogicError(f"isthmus graph has {len(t.edges)} edges over {nodes} nodes; not a tree")
    adj = {("b", i): [] for i in range(len(t.blocks))}
    adj.update({("i", i): [] for i in range(len(t.isthmuses))})
    for bi, ii in t.edges:
        adj[("b", bi)].append(("i", ii))
        adj[("i", ii)].append(("b", bi))
    seen = set()
    stack = [next(iter(adj))]
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        stack.extend(adj[u])
    if len(seen) != nodes:
        raise LogicError("isthmus graph is disconnected; not a tree")
