"""Exact optimal routes on small instances.

All-pairs shortest walks (with first-arc reconstruction) reduce the
problem to a closed tour over the depot and terminals, solved exactly by
dynamic programming over terminal subsets. A bounded-length exhaustive
walk search is provided as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .instance import Instance, build_adjacency


class InfeasibleError(ValueError):
    pass


@dataclass(frozen=True)
class Route:
    arc_ids: tuple[int, ...]
    cost: float
    visited_terminals: frozenset[int]


@dataclass
class DistanceClosure:
    dist: dict[tuple[int, int], float]
    next_arc: dict[tuple[int, int], int]  # first arc of a shortest path


def metric_closure(inst: Instance) -> DistanceClosure:
    nodes = list(inst.nodes)
    dist: dict[tuple[int, int], float] = {}
    next_arc: dict[tuple[int, int], int] = {}
    for a in nodes:
        for b in nodes:
            dist[(a, b)] = 0.0 if a == b else math.inf
    for arc in inst.arcs:
        if arc.cost < dist[(arc.tail, arc.head)]:
            dist[(arc.tail, arc.head)] = arc.cost
            next_arc[(arc.tail, arc.head)] = arc.id
    for k in nodes:
        for i in nodes:
            dik = dist[(i, k)]
            if dik == math.inf:
                continue
            for j in nodes:
                through = dik + dist[(k, j)]
                if through < dist[(i, j)]:
                    dist[(i, j)] = through
                    next_arc[(i, j)] = next_arc[(i, k)]
    return DistanceClosure(dist, next_arc)


def expand_path(closure: DistanceClosure, inst: Instance, a: int, b: int) -> list[int]:
    """Arc ids of a shortest path a -> b recorded in the closure."""
    if a == b:
        return []
    if closure.dist[(a, b)] == math.inf:
        raise InfeasibleError(f"no path from {a} to {b}")
    arcs_by_id = {arc.id: arc for arc in inst.arcs}
    path = []
    node = a
    while node != b:
        k = closure.next_arc[(node, b)]
        path.append(k)
        node = arcs_by_id[k].head
    return path


def _make_route(inst: Instance, arc_ids: list[int]) -> Route:
    arcs_by_id = {a.id: a for a in inst.arcs}
    cost = sum(arcs_by_id[k].cost for k in arc_ids)
    visited = {0} | {arcs_by_id[k].head for k in arc_ids}
    return Route(tuple(arc_ids), cost, frozenset(visited & inst.terminals))


def optimal_cost(inst: Instance) -> tuple[float, Route]:
    """Minimum cost of a closed depot walk covering all terminals, with a
    route realizing it. Exponential in the number of terminals."""
    closure = metric_closure(inst)
    terminals = sorted(inst.terminals)
    for t in terminals:
        if closure.dist[(0, t)] == math.inf:
            raise InfeasibleError(f"terminal {t} unreachable from depot")
        if closure.dist[(t, 0)] == math.inf:
            raise InfeasibleError(f"terminal {t} cannot reach depot")
    if not terminals:
        return 0.0, Route((), 0.0, frozenset())

    m = len(terminals)
    full = (1 << m) - 1
    # dp[(mask, j)]: cheapest walk depot -> terminals in mask, ending at j
    dp: dict[tuple[int, int], float] = {}
    parent: dict[tuple[int, int], int] = {}
    for j in range(m):
        dp[(1 << j, j)] = closure.dist[(0, terminals[j])]
        parent[(1 << j, j)] = -1
    for mask in range(1, full + 1):
        for j in range(m):
            if not mask & (1 << j) or (mask, j) not in dp:
                continue
            base = dp[(mask, j)]
            for j2 in range(m):
                if mask & (1 << j2):
                    continue
                cand = base + closure.dist[(terminals[j], terminals[j2])]
                key = (mask | (1 << j2), j2)
                if cand < dp.get(key, math.inf):
                    dp[key] = cand
                    parent[key] = j
    best_cost = math.inf
    best_j = -1
    for j in range(m):
        cand = dp[(full, j)] + closure.dist[(terminals[j], 0)]
        if cand < best_cost:
            best_cost = cand
            best_j = j

    visit_order = []
    mask, j = full, best_j
    while j != -1:
        visit_order.append(terminals[j])
        prev = parent[(mask, j)]
        mask ^= 1 << j
        j = prev
    visit_order.reverse()

    stops = [0] + visit_order + [0]
    arc_ids: list[int] = []
    for a, b in zip(stops, stops[1:]):
        arc_ids.extend(expand_path(closure, inst, a, b))
    route = _make_route(inst, arc_ids)
    return best_cost, route


def enumerate_walk_optimum(inst: Instance, max_len: int):
    """Exhaustive minimum over closed depot walks of at most max_len arcs
    covering all terminals; None when no such walk exists within the bound."""
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")
    terminals = sorted(inst.terminals)
    if not terminals:
        return 0.0
    tbit = {t: 1 << i for i, t in enumerate(terminals)}
    full = (1 << len(terminals)) - 1
    adj = build_adjacency(inst)
    arcs_by_id = {a.id: a for a in inst.arcs}

    best = math.inf
    frontier: dict[tuple[int, int], float] = {(0, 0): 0.0}
    for _ in range(max_len):
        nxt: dict[tuple[int, int], float] = {}
        for (node, mask), cost in frontier.items():
            for k in adj.out_arcs[node]:
                arc = arcs_by_id[k]
                nmask = mask | tbit.get(arc.head, 0)
                ncost = cost + arc.cost
                if ncost >= best:
                    continue
                if arc.head == 0 and nmask == full and ncost < best:
                    best = ncost
                key = (arc.head, nmask)
                if ncost < nxt.get(key, math.inf):
                    nxt[key] = ncost
        frontier = nxt
    return best if best < math.inf else None
