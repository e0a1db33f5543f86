"""Arc-reduction preprocessing.

Four steps: drop arcs touching no required node, compute a cost threshold
at 10% above the surviving mean, strip expensive arcs that are safe to
remove, then recursively delete steiner nodes left without incoming or
outgoing arcs. A final reachability check falls back to the step-1 result
if the aggressive steps disconnected a terminal from the depot.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .instance import Arc, Instance


class PmraError(ValueError):
    pass


@dataclass
class PmraReport:
    mean_cost: float
    threshold: float
    removed_step1: list[int]
    removed_step3: list[int]
    removed_nodes_step4: dict[int, list[int]]  # node -> incident arc ids removed
    arcs_before: int
    arcs_after: int
    feasibility_fallback: bool = False


def compute_threshold(costs) -> tuple[float, float]:
    """Mean cost m and removal threshold 1.1*m."""
    costs = list(costs)
    if not costs:
        raise PmraError("cannot compute threshold of empty cost list")
    m = sum(costs) / len(costs)
    return m, 1.1 * m


def _reachable(arcs: list[Arc], sources: set[int], forward: bool) -> set[int]:
    adj: dict[int, list[int]] = {}
    for a in arcs:
        u, v = (a.tail, a.head) if forward else (a.head, a.tail)
        adj.setdefault(u, []).append(v)
    seen = set(sources)
    stack = list(sources)
    while stack:
        u = stack.pop()
        for v in adj.get(u, ()):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def _terminals_connected(arcs: list[Arc], terminals) -> bool:
    from_depot = _reachable(arcs, {0}, forward=True)
    to_depot = _reachable(arcs, {0}, forward=False)
    return all(t in from_depot and t in to_depot for t in terminals)


def reduce(inst: Instance) -> tuple[Instance, PmraReport]:
    """Apply the four reduction steps and report what was removed."""
    required = set(inst.terminals) | {0}
    arcs_before = len(inst.arcs)

    # Step 1: arcs with neither endpoint required are irrelevant.
    removed_step1 = [a.id for a in inst.arcs if a.tail not in required and a.head not in required]
    surviving = [a for a in inst.arcs if a.tail in required or a.head in required]

    if not _terminals_connected(surviving, inst.terminals):
        raise PmraError("instance infeasible under PMRA step 1")

    # Step 2: threshold over the surviving arcs.
    mean_cost, threshold = compute_threshold(a.cost for a in surviving)

    # Step 3: strip high-cost arcs, most expensive first. Arcs between
    # required nodes are exempt, and no endpoint may lose its last arc.
    degree: dict[int, int] = {}
    for a in surviving:
        degree[a.tail] = degree.get(a.tail, 0) + 1
        degree[a.head] = degree.get(a.head, 0) + 1
    removed_step3 = []
    alive = {a.id: a for a in surviving}
    for a in sorted(surviving, key=lambda a: (-a.cost, a.id)):
        if a.cost < threshold:
            break
        if a.tail in required and a.head in required:
            continue
        if degree[a.tail] <= 1 or degree[a.head] <= 1:
            continue
        del alive[a.id]
        removed_step3.append(a.id)
        degree[a.tail] -= 1
        degree[a.head] -= 1

    # Step 4: recursively delete steiner nodes missing in- or out-arcs.
    removed_nodes: dict[int, list[int]] = {}
    steiner = inst.steiner_nodes
    changed = True
    while changed:
        changed = False
        indeg = {v: 0 for v in inst.nodes}
        outdeg = {v: 0 for v in inst.nodes}
        for a in alive.values():
            outdeg[a.tail] += 1
            indeg[a.head] += 1
        for v in sorted(steiner - removed_nodes.keys()):
            if indeg[v] == 0 or outdeg[v] == 0:
                incident = [k for k, a in alive.items() if a.tail == v or a.head == v]
                for k in incident:
                    del alive[k]
                removed_nodes[v] = incident
                changed = True

    reduced_arcs = [a for a in surviving if a.id in alive]
    fallback = not _terminals_connected(reduced_arcs, inst.terminals)
    if fallback:
        # Steps 3-4 broke terminal reachability: keep only the step-1 result.
        reduced_arcs = surviving
        removed_step3 = []
        removed_nodes = {}

    kept_nodes = tuple(v for v in inst.nodes if v not in removed_nodes)
    reduced = Instance(
        nodes=kept_nodes,
        coords={v: inst.coords[v] for v in kept_nodes if v in inst.coords},
        terminals=inst.terminals,
        arcs=tuple(reduced_arcs),
    )
    reduced.validate()
    report = PmraReport(
        mean_cost=mean_cost,
        threshold=threshold,
        removed_step1=removed_step1,
        removed_step3=removed_step3,
        removed_nodes_step4=removed_nodes,
        arcs_before=arcs_before,
        arcs_after=len(reduced_arcs),
        feasibility_fallback=fallback,
    )
    return reduced, report


def format_report(report: PmraReport) -> str:
    """Key-value text block for the CLI."""
    step4_arcs = sorted(k for ids in report.removed_nodes_step4.values() for k in ids)
    lines = [
        f"mean_cost {report.mean_cost}",
        f"threshold {report.threshold}",
        f"arcs_before {report.arcs_before}",
        f"arcs_after {report.arcs_after}",
        f"removed_step1 {' '.join(map(str, sorted(report.removed_step1))) or '-'}",
        f"removed_step3 {' '.join(map(str, sorted(report.removed_step3))) or '-'}",
        f"removed_nodes_step4 {' '.join(map(str, sorted(report.removed_nodes_step4))) or '-'}",
        f"removed_arcs_step4 {' '.join(map(str, step4_arcs)) or '-'}",
        f"feasibility_fallback {'yes' if report.feasibility_fallback else 'no'}",
    ]
    return "\n".join(lines) + "\n"
