"""Labeled pebble motion on graphs: ranges, contact, equivalence, move plans.

The decision operations are theorem-backed (block ranges, contact conditions,
cycle orders, permutation parity, the theta-board generated group) and never
search the puzzle state space; the oracle module provides the independent
BFS ground truth they are tested against.  Boards may be disconnected and may
have zero vacancy on a component, which arises when configurations come from
agent arrangements; fully occupied components simply admit no moves.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .errors import CapacityError, InputError, LogicError
from .graphs import (
    Graph,
    bfs_shortest_path,
    canon_vertices,
    connected_components,
    cycle_order,
    find_isomorphism,
    hamiltonian_path_order,
    induced_subgraph,
    is_bipartite,
    is_cycle_graph,
    label_key,
)
from .isthmus import _blocks, is_k_isthmus

DEFAULT_STATE_CAP = 10**7


@dataclass(frozen=True)
class Configuration:
    """Injective placement of labeled pebbles on a board graph."""

    board: Graph
    placement: tuple  # ((pebble, vertex), ...) canonically sorted

    def __post_init__(self):
        items = tuple(self.placement.items()) if isinstance(self.placement, dict) else tuple(
            tuple(pair) for pair in self.placement
        )
        seen_p = set()
        seen_v = set()
        for p, v in items:
            if p in seen_p:
                raise InputError(f"pebble {p!r} placed twice")
            if not self.board.has_vertex(v):
                raise InputError(f"pebble {p!r} placed on unknown vertex {v!r}")
            if v in seen_v:
                raise InputError(f"two pebbles share vertex {v!r}")
            seen_p.add(p)
            seen_v.add(v)
        object.__setattr__(
            self, "placement", tuple(sorted(items, key=lambda it: label_key(it[0])))
        )

    @cached_property
    def positions(self) -> dict:
        return dict(self.placement)

    @cached_property
    def pebbles(self) -> tuple:
        return tuple(p for p, _ in self.placement)

    @cached_property
    def occupied(self) -> frozenset:
        return frozenset(v for _, v in self.placement)

    @cached_property
    def holes(self) -> frozenset:
        return frozenset(self.board.vertices) - self.occupied

    @cached_property
    def at_vertex(self) -> dict:
        return {v: p for p, v in self.placement}

    @property
    def vacancy(self) -> int:
        return self.board.n - len(self.placement)


@dataclass(frozen=True)
class MovePlan:
    """Replayable move sequence; each step slides one pebble to a target vertex."""

    start: Configuration
    steps: tuple  # ((pebble, target vertex), ...)


def legal_moves(c: Configuration) -> list[tuple]:
    """All (pebble, vertex) slides to an adjacent unoccupied vertex."""
    moves = []
    for p, v in c.placement:
        for w in c.board.adjacency[v]:
            if w not in c.occupied:
                moves.append((p, w))
    moves.sort(key=lambda m: (label_key(m[0]), label_key(m[1])))
    return moves


def apply_move(c: Configuration, pebble, target) -> Configuration:
    pos = c.positions.get(pebble)
    if pos is None:
        raise InputError(f"unknown pebble {pebble!r}")
    if not c.board.has_edge(pos, target):
        raise InputError(f"move target {target!r} not adjacent to {pos!r}")
    if target in c.occupied:
        raise InputError(f"move target {target!r} is occupied")
    placement = dict(c.positions)
    placement[pebble] = target
    return Configuration(c.board, placement)


def replay(plan: MovePlan) -> Configuration:
    """Apply every step, raising on the first illegal move."""
    c = plan.start
    for pebble, target in plan.steps:
        c = apply_move(c, pebble, target)
    return c


def restrict_to_component(c: Configuration, comp) -> Configuration:
    comp = frozenset(comp)
    sub = induced_subgraph(c.board, comp)
    placement = {p: v for p, v in c.placement if v in comp}
    return Configuration(sub, placement)


def _component_of(c: Configuration, vertex) -> frozenset:
    for comp in connected_components(c.board):
        if vertex in comp:
            return comp
    raise InputError(f"unknown vertex {vertex!r}")


def _component_vacancy(c: Configuration, comp) -> int:
    occupied = sum(1 for _, v in c.placement if v in comp)
    return len(comp) - occupied


def _gather_set(c: Configuration, pebble) -> frozenset:
    """Connected (k+1)-set around the pebble after pulling every component hole in.

    Simulates hole pulls without moving the protected pebble: repeatedly find
    the nearest hole outside the gathered set A via multi-source BFS through
    occupied vertices, shift the pebbles along that path, and grow A by the
    vacated boundary vertex.
    """
    pos = c.positions[pebble]
    comp = _component_of(c, pos)
    k = _component_vacancy(c, comp)
    gathered = {pos}
    occ = set(v for _, v in c.placement if v in comp)
    adj = c.board.adjacency
    for _ in range(k):
        sources = sorted(
            (w for v in gathered for w in adj[v] if w not in gathered), key=label_key
        )
        parent = {}
        queue = deque()
        goal = None
        for s in sources:
            if s in parent:
                continue
            parent[s] = None
            if s not in occ:
                goal = s
                break
            queue.append(s)
        while goal is None and queue:
            u = queue.popleft()
            for w in adj[u]:
                if w in parent or w in gathered:
                    continue
                parent[w] = u
                if w not in occ:
                    goal = w
                    break
                queue.append(w)
            else:
                continue
            break
        if goal is None:
            raise LogicError("hole gathering failed to reach a hole")
        # walk back to the boundary source; shift pebbles one step toward the hole
        path = [goal]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        path.reverse()  # boundary source ... hole
        for a, b in zip(path, path[1:]):
            # pebble on a slides toward the hole end; after the loop path[0] is free
            occ.discard(a)
            occ.add(b)
        gathered.add(path[0])
    return frozenset(gathered)


def reachable_range(c: Configuration, pebble) -> frozenset:
    """All vertices the pebble can occupy across equivalent configurations."""
    if pebble not in c.positions:
        raise InputError(f"unknown pebble {pebble!r}")
    pos = c.positions[pebble]
    comp = _component_of(c, pos)
    k = _component_vacancy(c, comp)
    if k == 0:
        return frozenset({pos})
    gathered = _gather_set(c, pebble)
    sub = induced_subgraph(c.board, comp)
    owners = [b for b in _blocks(sub, k) if gathered <= b]
    if len(owners) != 1:
        raise LogicError(f"gathered set lies in {len(owners)} blocks; expected one")
    return owners[0]


def _cyclic_pebble_sequence(c: Configuration, cycle_vertices) -> tuple:
    """Pebbles on a cycle's vertices, listed along the canonical cyclic walk."""
    sub = induced_subgraph(c.board, cycle_vertices)
    walk = cycle_order(sub)
    return tuple(c.at_vertex[v] for v in walk if v in c.at_vertex)


def _cyclically_adjacent(c: Configuration, cycle_vertices, p, q) -> bool:
    seq = _cyclic_pebble_sequence(c, cycle_vertices)
    if p not in seq or q not in seq:
        return False
    if len(seq) <= 2:
        return True
    i = seq.index(p)
    return seq[(i + 1) % len(seq)] == q or seq[(i - 1) % len(seq)] == q


def can_contact(c: Configuration, p, q) -> bool:
    """Whether some equivalent configuration puts p and q on adjacent vertices."""
    if p == q:
        raise InputError("contact requires two distinct pebbles")
    for peb in (p, q):
        if peb not in c.positions:
            raise InputError(f"unknown pebble {peb!r}")
    pos_p, pos_q = c.positions[p], c.positions[q]
    if c.board.has_edge(pos_p, pos_q):
        return True
    comp = _component_of(c, pos_p)
    if pos_q not in comp:
        return False
    k = _component_vacancy(c, comp)
    if k == 0:
        return False
    rp = reachable_range(c, p)
    rq = reachable_range(c, q)
    sub = induced_subgraph(c.board, comp)
    if rp == rq:
        if not is_cycle_graph(induced_subgraph(c.board, rp)):
            return True
        return _cyclically_adjacent(c, rp, p, q)
    inter = rp & rq
    if len(inter) != k:
        return False
    shared = induced_subgraph(sub, inter)
    path = hamiltonian_path_order(shared)
    if path is None:
        return False
    return is_k_isthmus(sub, path) is not None


def _pull_hole_along(c: Configuration, path) -> tuple[Configuration, list]:
    """Walk the unique hole at path[0] to path[-1]; pebbles shift backward."""
    moves = []
    cur = c
    for prev, nxt in zip(path, path[1:]):
        peb = cur.at_vertex[nxt]
        cur = apply_move(cur, peb, prev)
        moves.append((peb, nxt, prev))
    return cur, moves


def route_hole_to(c: Configuration, x, rng=None) -> tuple[Configuration, list]:
    """On a single-hole connected board, bring the hole to vertex x."""
    if len(c.holes) != 1:
        raise InputError("hole routing requires exactly one unoccupied vertex")
    (hole,) = c.holes
    if hole == x:
        return c, []
    if rng is None:
        path = bfs_shortest_path(c.board, hole, {x})
    else:
        path = _random_path(c.board, hole, x, rng)
    if path is None:
        raise InputError(f"vertex {x!r} unreachable from the hole")
    return _pull_hole_along(c, path)


def _random_path(g: Graph, source, goal, rng) -> list | None:
    parent = {source: None}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        ns = list(g.adjacency[u])
        rng.shuffle(ns)
        for w in ns:
            if w in parent:
                continue
            parent[w] = u
            if w == goal:
                path = [w]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                path.reverse()
                return path
            queue.append(w)
    return None


# -- theta(1,2,2) generated group ------------------------------------------

_THETA_HUBS = ("h1", "h2")


@lru_cache(maxsize=1)
def theta122_board() -> Graph:
    """Two degree-3 hubs joined by internally disjoint paths of 1, 2, 2 inner vertices."""
    vertices = ("h1", "h2", "a1", "b1", "b2", "c1", "c2")
    edges = (
        ("h1", "a1"), ("a1", "h2"),
        ("h1", "b1"), ("b1", "b2"), ("b2", "h2"),
        ("h1", "c1"), ("c1", "c2"), ("c2", "h2"),
    )
    return Graph(vertices, edges)


@dataclass(frozen=True)
class GeneratedGroup:
    """Permutations of the non-hole vertices achievable with the hole parked."""

    board: Graph
    hole: object
    ground: tuple
    perms: frozenset

    @property
    def order(self) -> int:
        return len(self.perms)

    def contains(self, mapping: dict) -> bool:
        if set(mapping) != set(self.ground):
            return False
        return tuple(mapping[v] for v in self.ground) in self.perms


@lru_cache(maxsize=None)
def _generated_group(board: Graph, hole) -> GeneratedGroup:
    ground = tuple(v for v in board.vertices if v != hole)
    start = ground  # pebble i starts on ground[i]
    seen = {start}
    queue = deque([start])
    collected = set()
    vset = set(board.vertices)
    while queue:
        state = queue.popleft()
        empty = (vset - set(state)).pop()
        if empty == hole:
            collected.add(state)
        for i, v in enumerate(state):
            if board.has_edge(v, empty):
                nxt = state[:i] + (empty,) + state[i + 1 :]
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return GeneratedGroup(board, hole, ground, frozenset(collected))


def build_group_theta122() -> GeneratedGroup:
    """Achievable permutation group of the theta(1,2,2) board with a parked hole."""
    board = theta122_board()
    group = _generated_group(board, min(board.vertices, key=label_key))
    if group.order != 120:
        raise LogicError(f"theta(1,2,2) group has order {group.order}, expected 120")
    return group


@lru_cache(maxsize=None)
def _theta_iso(g: Graph):
    board = theta122_board()
    if g.n != 7 or len(g.edges) != 8:
        return None
    if sorted(g.degree(v) for v in g.vertices) != [2, 2, 2, 2, 2, 3, 3]:
        return None
    return find_isomorphism(g, board)


def _permutation_is_even(sigma: dict) -> bool:
    seen = set()
    cycles = 0
    for start in sigma:
        if start in seen:
            continue
        cycles += 1
        cur = start
        while cur not in seen:
            seen.add(cur)
            cur = sigma[cur]
    return (len(sigma) - cycles) % 2 == 0


def _theta_block_ok(sub: Graph, x, sigma: dict) -> bool:
    iso = _theta_iso(sub)
    group = _generated_group(theta122_board(), iso[x])
    mapped = {iso[v]: iso[w] for v, w in sigma.items()}
    return group.contains(mapped)


# -- equivalence decisions ---------------------------------------------------


def _check_same_instance(c1: Configuration, c2: Configuration) -> None:
    if c1.board != c2.board:
        raise InputError("configurations live on different boards")
    if c1.pebbles != c2.pebbles:
        raise InputError("configurations have different pebble sets")


def _hole_one_equivalent_on_component(c1, c2, comp) -> bool:
    """Vacancy-one conditions: per-block cycle/theta/bipartite dispatch."""
    r1 = restrict_to_component(c1, comp)
    r2 = restrict_to_component(c2, comp)
    ranges = {}
    for p in r1.pebbles:
        ranges.setdefault(reachable_range(r1, p), None)
    for block in sorted(ranges, key=canon_vertices):
        sub = induced_subgraph(r1.board, block)
        x = min(block, key=label_key)
        f_x, _ = route_hole_to(r1, x)
        g_x, _ = route_hole_to(r2, x)
        sigma = {}
        for y in block:
            if y == x:
                continue
            peb = f_x.at_vertex[y]
            img = g_x.positions[peb]
            if img not in block or img == x:
                raise LogicError("vacancy-one block permutation not closed")
            sigma[y] = img
        if is_cycle_graph(sub):
            if any(y != img for y, img in sigma.items()):
                return False
        elif _theta_iso(sub) is not None:
            if not _theta_block_ok(sub, x, sigma):
                return False
        elif is_bipartite(sub):
            if not _permutation_is_even(sigma):
                return False
    return True


def configurations_equivalent(c1: Configuration, c2: Configuration) -> bool:
    """Whether finitely many single-pebble moves transform c1 into c2."""
    _check_same_instance(c1, c2)
    for comp in connected_components(c1.board):
        pl1 = {p: v for p, v in c1.placement if v in comp}
        pl2 = {p: v for p, v in c2.placement if v in comp}
        if set(pl1) != set(pl2):
            return False
        if not pl1:
            continue
        k = len(comp) - len(pl1)
        if k == 0:
            if pl1 != pl2:
                return False
            continue
        for p in pl1:
            if reachable_range(c1, p) != reachable_range(c2, p):
                return False
        sub = induced_subgraph(c1.board, comp)
        if k == 1:
            if not _hole_one_equivalent_on_component(c1, c2, comp):
                return False
        elif is_cycle_graph(sub):
            seq1 = _cyclic_pebble_sequence(c1, comp)
            seq2 = _cyclic_pebble_sequence(c2, comp)
            if not _rotation_equal(seq1, seq2):
                return False
    return True


def _rotation_equal(seq1: tuple, seq2: tuple) -> bool:
    if len(seq1) != len(seq2):
        return False
    if not seq1:
        return True
    return any(seq1 == seq2[i:] + seq2[:i] for i in range(len(seq2)))


# -- move planning ------------------------------------------------------------


def _state_key(placement: dict) -> tuple:
    return tuple(sorted(placement.items(), key=lambda it: label_key(it[0])))


def _bfs_plan(board: Graph, start: dict, goal, cap: int) -> tuple[list, dict]:
    """Plan by BFS over placements until `goal` (exact dict or predicate) holds.

    Returns (moves, final placement); moves are (pebble, src, dst).
    """
    if callable(goal):
        done = goal
    else:
        target = _state_key(goal)

        def done(state):
            return state == target

    start_key = _state_key(start)
    if done(start_key):
        return [], dict(start_key)
    parent = {start_key: None}
    queue = deque([start_key])
    while queue:
        state = queue.popleft()
        occupied = frozenset(v for _, v in state)
        for idx, (p, v) in enumerate(state):
            for w in board.adjacency[v]:
                if w in occupied:
                    continue
                nxt = tuple(
                    (pp, w if i == idx else vv) for i, (pp, vv) in enumerate(state)
                )
                nxt = tuple(sorted(nxt, key=lambda it: label_key(it[0])))
                if nxt in parent:
                    continue
                parent[nxt] = (state, (p, v, w))
                if len(parent) > cap:
                    raise CapacityError(f"puzzle search exceeded {cap} states")
                if done(nxt):
                    moves = []
                    cur = nxt
                    while parent[cur] is not None:
                        prev, mv = parent[cur]
                        moves.append(mv)
                        cur = prev
                    moves.reverse()
                    final = dict(nxt)
                    return moves, final
                queue.append(nxt)
    raise LogicError("puzzle search exhausted without reaching the goal")


def _pull_holes_into_block(board: Graph, placement: dict, block: frozenset):
    """Moves bringing every hole of the (connected) board into the block."""
    occ = {v: p for p, v in placement.items()}
    moves = []
    adj = board.adjacency
    fuel = 4 * board.n * board.n + 8
    while True:
        holes_out = sorted(
            (v for v in board.vertices if v not in occ and v not in block), key=label_key
        )
        if not holes_out:
            break
        fuel -= 1
        if fuel < 0:
            raise LogicError("hole consolidation failed to converge")
        parent = {h: None for h in holes_out}
        queue = deque(holes_out)
        goal = None
        while queue and goal is None:
            u = queue.popleft()
            for w in adj[u]:
                if w in parent:
                    continue
                if w not in occ:
                    continue  # in-block holes cannot be traversed
                parent[w] = u
                if w in block:
                    goal = w
                    break
                queue.append(w)
        if goal is not None:
            path = [goal]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            path.reverse()  # hole ... goal
            for a, b in zip(path, path[1:]):
                peb = occ.pop(b)
                occ[a] = peb
                moves.append((peb, b, a))
            continue
        # every entry into the block found by the scan is itself a hole:
        # nudge an in-block pebble toward the nearest such doorway
        touched = sorted(
            (
                v
                for v in block
                if v not in occ and any(w in parent or w in block for w in adj[v])
            ),
            key=label_key,
        )
        doorway = None
        for e in touched:
            path = bfs_shortest_path(
                induced_subgraph(board, block), e, {v for v in block if v in occ}
            )
            if path is not None and len(path) >= 2:
                doorway = path
                break
        if doorway is None:
            raise LogicError("hole consolidation found no doorway into the block")
        t, prev = doorway[-1], doorway[-2]
        peb = occ.pop(t)
        occ[prev] = peb
        moves.append((peb, t, prev))
    final = {p: v for v, p in occ.items()}
    return moves, final


def _apply_raw_moves(placement: dict, moves) -> dict:
    out = dict(placement)
    for p, _src, dst in moves:
        out[p] = dst
    return out


def _reverse_moves(moves) -> list:
    return [(p, dst, src) for p, src, dst in reversed(moves)]


def _leaf_block(board: Graph, k: int):
    """A block incident to exactly one isthmus, with that isthmus."""
    from .isthmus import all_k_isthmuses

    blocks = _blocks(board, k)
    isthmuses = all_k_isthmuses(board, k)
    for b in sorted(blocks, key=canon_vertices):
        inside = [i for i in isthmuses if i.vertex_set <= b]
        if len(inside) == 1:
            return b, inside[0]
    raise LogicError("isthmus tree has no leaf block")


def _plan_component(board: Graph, pl1: dict, pl2: dict, cap: int) -> list:
    if pl1 == pl2:
        return []
    k = board.n - len(pl1)
    if k == 0:
        raise LogicError("distinct placements on a fully occupied component")
    if len(_blocks(board, k)) == 1:
        moves, _ = _bfs_plan(board, pl1, pl2, cap)
        return moves
    block, isth = _leaf_block(board, k)
    m1, s1 = _pull_holes_into_block(board, pl1, block)
    m2, s2 = _pull_holes_into_block(board, pl2, block)
    inside1 = {p: v for p, v in s1.items() if v in block}
    inside2 = {p: v for p, v in s2.items() if v in block}
    if set(inside1) != set(inside2):
        raise LogicError("leaf block holds different pebble sets on the two sides")
    sub = induced_subgraph(board, block)
    want_holes = isth.vertex_set

    def parked(state):
        return frozenset(block) - frozenset(v for _, v in state) == want_holes

    mv2, t2 = _bfs_plan(sub, inside2, parked, cap)
    mv1, t1 = _bfs_plan(sub, inside1, t2, cap)
    s1b = _apply_raw_moves(s1, mv1)
    s2b = _apply_raw_moves(s2, mv2)
    keep = frozenset(board.vertices) - (block - want_holes)
    rest = induced_subgraph(board, keep)
    rec = _plan_component(
        rest,
        {p: v for p, v in s1b.items() if v in keep},
        {p: v for p, v in s2b.items() if v in keep},
        cap,
    )
    return m1 + mv1 + rec + _reverse_moves(mv2) + _reverse_moves(m2)


def move_plan(c1: Configuration, c2: Configuration, cap_states: int = DEFAULT_STATE_CAP) -> MovePlan:
    """A replay-valid move sequence from c1 to c2; no optimality guarantee."""
    _check_same_instance(c1, c2)
    if not configurations_equivalent(c1, c2):
        raise LogicError("move plan requested between non-equivalent configurations")
    all_moves = []
    for comp in connected_components(c1.board):
        pl1 = {p: v for p, v in c1.placement if v in comp}
        pl2 = {p: v for p, v in c2.placement if v in comp}
        if pl1 == pl2 or not pl1:
            continue
        sub = induced_subgraph(c1.board, comp)
        all_moves.extend(_plan_component(sub, pl1, pl2, cap_states))
    plan = MovePlan(c1, tuple((p, dst) for p, _src, dst in all_moves))
    if replay(plan) != c2:
        raise LogicError("generated move plan does not replay to the target")
    return plan


def plan_to_json_obj(plan: MovePlan) -> dict:
    return {"steps": [[p, v] for p, v in plan.steps]}


def configuration_to_json_obj(c: Configuration) -> dict:
    from .graphs import graph_to_json_obj

    return {"board": graph_to_json_obj(c.board), "pebbles": {str(p): v for p, v in c.placement}}


def configuration_from_json_obj(obj) -> Configuration:
    from .graphs import graph_from_json_obj

    if not isinstance(obj, dict) or "board" not in obj or "pebbles" not in obj:
        raise InputError("configuration JSON needs 'board' and 'pebbles'")
    board = graph_from_json_obj(obj["board"])
    pebbles = obj["pebbles"]
    if not isinstance(pebbles, dict):
        raise InputError("'pebbles' must map pebble names to vertices")
    return Configuration(board, dict(pebbles))
