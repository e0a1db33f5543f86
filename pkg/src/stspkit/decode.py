"""Project sampler assignments back onto the routing model.

QUBO energies are not comparable to route costs, so every sample is
decoded to a time-ordered arc walk, validated against the instance, and
priced at its true traversal cost. Infeasible samples are reported with
named violations, never repaired.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .instance import Instance
from .model import ConstrainedModel, var_label
from .oracle import Route
from . import qubo as qubo_mod


@dataclass
class DecodeReport:
    feasible: bool
    route: Route | None
    violations: list[str]
    true_cost: float | None
    energy: float | None
    penalty_part: float | None


def decode(asg: dict[str, int], model: ConstrainedModel, inst: Instance,
           q: qubo_mod.Qubo | None = None) -> DecodeReport:
    """Recover a Route from a y-assignment; slack bits are ignored for
    route extraction but enter the energy bookkeeping when q is given."""
    arcs_by_id = {a.id: a for a in inst.arcs}
    arc_ids = sorted(arcs_by_id)
    violations: list[str] = []

    active: list[list[int]] = []
    for t in range(1, model.horizon + 1):
        row = [k for k in arc_ids if asg[var_label(k, t)] == 1]
        if len(row) > 1:
            violations.append(f"multiple arcs in one period (t={t})")
        active.append(row)
    if not active[0]:
        violations.append("no arc at period 1")

    walk: list[int] = []
    if not violations:
        # Chain the active arcs in time order. Idle periods are legal only
        # while parked at the depot (the model lets a walk end early or
        # restart from the depot, but nowhere else).
        node = 0
        for t, row in enumerate(active, start=1):
            if not row:
                if node != 0:
                    violations.append(f"idle away from depot (t={t})")
                    break
                continue
            arc = arcs_by_id[row[0]]
            if arc.tail != node:
                violations.append(f"discontinuity at period {t}")
                break
            walk.append(arc.id)
            node = arc.head
        else:
            if node != 0:
                violations.append("route does not return to depot")
        if not violations:
            visited = {0} | {arcs_by_id[k].head for k in walk}
            for t in sorted(inst.terminals):
                if t not in visited:
                    violations.append(f"terminal {t} unvisited")

    objective = sum(c * asg[v] for v, c in model.objective.items())
    if q is not None:
        energy = qubo_mod.energy(q, asg)
        penalty_part = energy - objective
    else:
        energy = objective
        penalty_part = 0.0

    if violations:
        return DecodeReport(False, None, violations, None, energy, penalty_part)
    true_cost = sum(arcs_by_id[k].cost for k in walk)
    visited_terms = frozenset({arcs_by_id[k].head for k in walk} & inst.terminals)
    route = Route(tuple(walk), true_cost, visited_terms)
    return DecodeReport(True, route, [], true_cost, energy, penalty_part)


def encode_route(route: Route, model: ConstrainedModel) -> dict[str, int]:
    """y-assignment placing the route's t-th arc in period t."""
    if len(route.arc_ids) > model.horizon:
        raise ValueError(f"route length {len(route.arc_ids)} exceeds horizon {model.horizon}")
    asg = {v: 0 for v in model.variables}
    for t, k in enumerate(route.arc_ids, start=1):
        asg[var_label(k, t)] = 1
    return asg


def validate_route(route: Route, inst: Instance) -> list[str]:
    """Structural checks; an empty list means the route is valid."""
    violations: list[str] = []
    arcs_by_id = {a.id: a for a in inst.arcs}
    node = 0
    cost = 0.0
    for step, k in enumerate(route.arc_ids, start=1):
        arc = arcs_by_id.get(k)
        if arc is None:
            violations.append(f"unknown arc {k} at step {step}")
            return violations
        if arc.tail != node:
            violations.append(f"discontinuity at step {step}")
            return violations
        node = arc.head
        cost += arc.cost
    if route.arc_ids and node != 0:
        violations.append("route does not return to depot")
    visited = {0} | {arcs_by_id[k].head for k in route.arc_ids}
    for t in sorted(inst.terminals):
        if t not in visited:
            violations.append(f"terminal {t} unvisited")
    if cost != route.cost:
        violations.append(f"cost mismatch: stored {route.cost}, recomputed {cost}")
    return violations
