"""Breadth-first search for curve configurations realizing a concave cap.

The search works on the dual graph of the blown-up arrangement.  Vertex 0 is
the complex line (never blown up, so it stays +1), vertices ``1..L`` are the
symplectic lines and everything after is an exceptional strand.  After every
intersection point of two or more symplectic lines has been blown up the
configuration is normal crossing, and the remaining moves are:

* blow up a free point of a strand, or
* blow up the intersection point of two strands.

A state is final when the strands of self-intersection <= -2, the lines and
the complex line form the cap (a star whose arms start at the lines) and all
other strands are disjoint (-1) spheres.

Every move lowers the quantity ``S`` (line degrees plus degrees of committed
strands minus the number of arm slots not yet filled) by one or two, and a
final state has ``S = -(sum of all cap weights)``, so the search is finite.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from plumbfill.canon import certificate
from plumbfill.errors import SearchLimitExceeded

CENTRAL, LINE, EXC, MULTI, OUTSIDE = range(5)

DEFAULT_MAX_NODES = 2_000_000


def max_nodes_from_env() -> int:
    raw = os.environ.get("RBD_MAX_NODES")
    if raw is None:
        return DEFAULT_MAX_NODES
    return max(1, int(raw))


@dataclass(frozen=True)
class State:
    kinds: tuple[int, ...]
    degs: tuple[int, ...]
    edges: frozenset
    history: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.degs)

    def neighbours(self) -> list[set[int]]:
        nb = [set() for _ in self.degs]
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return nb

    def blow_up(self, point: tuple[int, ...], kind: int = EXC) -> State:
        """Blow up a free point of one strand or the crossing of two strands."""
        new = len(self.degs)
        degs = list(self.degs)
        for v in point:
            degs[v] -= 1
        edges = set(self.edges)
        if len(point) == 2:
            edges.discard((min(point), max(point)))
        for v in point:
            edges.add((v, new))
        return State(self.kinds + (kind,), tuple(degs) + (-1,), frozenset(edges), self.history + (point,))

    def key(self):
        return certificate(list(zip(self.kinds, self.degs)), self.edges)


def initial_state(n_lines: int, m: int) -> State:
    """The arrangement S_(L,m) with every point of two or more symplectic lines blown up.

    Lines ``1..m`` form the pencil (``m = L`` is the concurrent arrangement,
    ``m <= 2`` the generic one).  The exceptional sphere over the pencil point gets
    kind MULTI and lines off the pencil kind OUTSIDE, which keeps the pencil
    distinguishable during deduplication.
    """
    L = n_lines
    if m <= 2 and m != L:
        m = 0
    kinds = [CENTRAL] + [LINE] * L
    for i in range(m + 1, L + 1):
        kinds[i] = OUTSIDE if m else LINE
    state = State(tuple(kinds), (1,) * (L + 1), frozenset((0, i) for i in range(1, L + 1)), ())
    if m >= 2:
        state = _blow_up_point(state, tuple(range(1, m + 1)), MULTI)
    for i in range(1, L + 1):
        for j in range(max(i + 1, m + 1), L + 1):
            state = _blow_up_point(state, (i, j), EXC)
    return state


def _blow_up_point(state: State, lines: tuple[int, ...], kind: int) -> State:
    new = len(state.degs)
    degs = list(state.degs)
    for v in lines:
        degs[v] -= 1
    edges = set(state.edges) | {(v, new) for v in lines}
    return State(state.kinds + (kind,), tuple(degs) + (-1,), frozenset(edges), state.history + (lines,))


@dataclass
class CapTarget:
    """Arm weights (positive) of the cap to be realized."""

    arms: list[tuple[int, ...]]
    heads: list[int] = field(init=False)
    tails: list[int] = field(init=False)
    s_final: int = field(init=False)

    def __post_init__(self):
        self.arms = [tuple(a) for a in self.arms]
        self.heads = sorted((a[0] for a in self.arms), reverse=True)
        self.tails = sorted((w for a in self.arms for w in a[1:]), reverse=True)
        self.s_final = -sum(w for a in self.arms for w in a)
        self.arm_multiset = sorted(self.arms)


def _is_line(kind: int) -> bool:
    return kind in (LINE, OUTSIDE)


def budget(state: State, target: CapTarget):
    """Return ``S`` or None when the state can no longer reach the cap."""
    line_degs = []
    committed = []
    for kind, d in zip(state.kinds, state.degs):
        if kind == LINE or kind == OUTSIDE:
            line_degs.append(d)
        elif d <= -2 and kind != CENTRAL:
            committed.append(d)
    line_degs.sort()
    for d, a in zip(line_degs, target.heads):
        if d < -a:
            return None
    tails = target.tails
    if len(committed) > len(tails):
        return None
    committed.sort()
    for d, a in zip(committed, tails):
        if d < -a:
            return None
    s = sum(line_degs) + sum(committed) - (len(tails) - len(committed))
    if s < target.s_final:
        return None
    return s


def final_arms(state: State, target: CapTarget):
    """Arms of the cap as lists of vertices when ``state`` realizes it, else None."""
    kinds, degs = state.kinds, state.degs
    in_k = [kind == CENTRAL or _is_line(kind) or d <= -2 for kind, d in zip(kinds, degs)]
    nb = state.neighbours()
    for v in range(state.size):
        if in_k[v]:
            continue
        if not any(in_k[u] for u in nb[v]) or any(not in_k[u] for u in nb[v]):
            return None
    arms = []
    seen = set()
    for line in range(1, state.size):
        if not _is_line(kinds[line]):
            continue
        path = [line]
        prev, cur = 0, line
        while True:
            nxt = [u for u in nb[cur] if in_k[u] and u != prev]
            if not nxt:
                break
            if len(nxt) > 1:
                return None
            u = nxt[0]
            if u == 0 or _is_line(kinds[u]) or u in seen:
                return None
            seen.add(u)
            path.append(u)
            prev, cur = cur, u
        arms.append(path)
    if len(seen) != sum(in_k) - 1 - len(arms):
        return None
    weights = sorted(tuple(-degs[v] for v in path) for path in arms)
    if weights != target.arm_multiset:
        return None
    return arms


def moves(state: State):
    for v in range(1, state.size):
        yield (v,)
    for u, v in sorted(state.edges):
        if u != 0:
            yield (u, v)


def search(n_lines: int, m: int, target: CapTarget, total_blowups: int | None = None,
           max_multi_blowups: int | None = None, max_nodes: int | None = None):
    """All final states (one per isomorphism class) over one starting arrangement.

    ``total_blowups`` fixes the number of exceptional spheres of the answer;
    ``max_multi_blowups`` bounds how often the sphere over the multi-point may be
    blown up.  Returns ``(finals, explored)``.
    """
    if max_nodes is None:
        max_nodes = max_nodes_from_env()
    start = initial_state(n_lines, m)
    n0 = start.size - 1 - n_lines
    multi = next((v for v, k in enumerate(start.kinds) if k == MULTI), None)

    finals = []
    explored = 0
    frontier = {}
    s0 = budget(start, target)
    if s0 is not None:
        frontier[start.key()] = start
    depth = 0
    while frontier:
        nxt = {}
        for state in frontier.values():
            explored += 1
            if explored > max_nodes:
                raise SearchLimitExceeded(explored, finals)
            s = budget(state, target)
            if s == target.s_final:
                if total_blowups is None or n0 + depth == total_blowups:
                    if final_arms(state, target) is not None:
                        finals.append(state)
                continue
            if total_blowups is not None:
                remaining = total_blowups - (n0 + depth)
                if remaining <= 0 or s - target.s_final < remaining or s - target.s_final > 2 * remaining:
                    continue
            for point in moves(state):
                child = state.blow_up(point)
                if max_multi_blowups is not None and multi is not None and child.degs[multi] < -1 - max_multi_blowups:
                    continue
                if budget(child, target) is None:
                    continue
                key = child.key()
                if key not in nxt:
                    nxt[key] = child
        frontier = nxt
        depth += 1
    return finals, explored


def reduce_to_start(kinds, degs, edges, start: State, max_nodes: int | None = None):
    """Blow down (-1) exceptional vertices until the graph is isomorphic to ``start``.

    ``kinds``/``degs`` are indexed by vertex, ``edges`` are pairs.  A (-1) vertex
    with one neighbour undoes a free blow-up, one with two non-adjacent
    neighbours undoes the blow-up of their crossing; the complex line is never
    touched.  Returns ``(removals, survivors, degrees, edges)``, removals listed in
    the order they were blown down and the last three describing the reduced
    graph, or None when no order reaches ``start``.
    """
    if max_nodes is None:
        max_nodes = max_nodes_from_env()
    plain = tuple(EXC if k == MULTI else k for k in start.kinds)
    goal_exc = sum(1 for k in plain if k == EXC)
    goal_key = certificate(list(zip(plain, start.degs)), start.edges)
    kinds = dict(enumerate(kinds))
    degs = dict(enumerate(degs))
    adj = {v: set() for v in kinds}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    max_line = max(d for k, d in zip(plain, start.degs) if k in (LINE, OUTSIDE))
    failed = set()
    removals = []
    budget_left = [max_nodes]

    def key():
        order = sorted(kinds)
        pos = {v: i for i, v in enumerate(order)}
        es = [(pos[u], pos[v]) for u in order for v in adj[u] if u < v]
        return certificate([(kinds[v], degs[v]) for v in order], es)

    def rec():
        n_exc = sum(1 for k in kinds.values() if k == EXC)
        if n_exc == goal_exc:
            return key() == goal_key
        if any(kinds[v] in (LINE, OUTSIDE) and degs[v] > max_line for v in kinds):
            return False
        k = key()
        if k in failed:
            return False
        budget_left[0] -= 1
        if budget_left[0] < 0:
            raise SearchLimitExceeded(max_nodes)
        for v in sorted(kinds):
            if kinds[v] != EXC or degs[v] != -1:
                continue
            nb = adj[v]
            if not 1 <= len(nb) <= 2 or any(kinds[u] == CENTRAL for u in nb):
                continue
            if len(nb) == 2:
                u, w = sorted(nb)
                if w in adj[u]:
                    continue
            saved = (kinds.pop(v), degs.pop(v), set(nb))
            for u in saved[2]:
                adj[u].discard(v)
                degs[u] += 1
            del adj[v]
            if len(saved[2]) == 2:
                u, w = sorted(saved[2])
                adj[u].add(w)
                adj[w].add(u)
            removals.append((v, tuple(sorted(saved[2]))))
            if rec():
                return True
            removals.pop()
            if len(saved[2]) == 2:
                adj[u].discard(w)
                adj[w].discard(u)
            kinds[v], degs[v] = saved[0], saved[1]
            adj[v] = saved[2]
            for u in saved[2]:
                adj[u].add(v)
                degs[u] -= 1
        failed.add(k)
        return False

    if not rec():
        return None
    survivors = sorted(kinds)
    reduced_edges = [(u, v) for u in survivors for v in adj[u] if u < v]
    return list(removals), survivors, {v: degs[v] for v in survivors}, reduced_edges
