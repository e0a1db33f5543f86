"""Directed STSP instances: data model, random generation and text I/O.

An instance is a directed graph with a depot (node 0), a set of terminal
nodes that must be visited, optional steiner nodes, and positively priced
arcs. Instances are immutable after construction and safe to share.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field


class InstanceError(ValueError):
    """Invalid instance data (violated structural invariant)."""


class ParseError(ValueError):
    """Malformed instance document."""


@dataclass(frozen=True)
class Arc:
    id: int
    tail: int
    head: int
    cost: float


@dataclass(frozen=True)
class Instance:
    nodes: tuple[int, ...]
    coords: dict[int, tuple[float, float]]
    terminals: frozenset[int]
    arcs: tuple[Arc, ...]

    def validate(self) -> None:
        node_set = set(self.nodes)
        if 0 not in node_set:
            raise InstanceError("depot missing")
        if 0 in self.terminals:
            raise InstanceError("depot cannot be a terminal")
        if not self.terminals <= node_set:
            raise InstanceError("terminal not in node set")
        seen_pairs = set()
        seen_ids = set()
        for a in self.arcs:
            if a.tail not in node_set or a.head not in node_set:
                raise InstanceError(f"arc {a.id} endpoint not a node")
            if a.tail == a.head:
                raise InstanceError(f"arc {a.id} is a self-loop")
            if a.cost <= 0:
                raise InstanceError("nonpositive cost")
            if (a.tail, a.head) in seen_pairs:
                raise InstanceError(f"duplicate arc ({a.tail}, {a.head})")
            if a.id in seen_ids:
                raise InstanceError(f"duplicate arc id {a.id}")
            seen_pairs.add((a.tail, a.head))
            seen_ids.add(a.id)

    @property
    def steiner_nodes(self) -> set[int]:
        return set(self.nodes) - self.terminals - {0}

    def arc_by_id(self, arc_id: int) -> Arc:
        for a in self.arcs:
            if a.id == arc_id:
                return a
        raise KeyError(arc_id)


@dataclass(frozen=True)
class AdjacencyIndex:
    out_arcs: dict[int, tuple[int, ...]]
    in_arcs: dict[int, tuple[int, ...]]


@dataclass(frozen=True)
class GeneratorConfig:
    density: float = 0.3
    cost_mode: str = "random"  # "random" or "euclidean"

    def validate(self) -> None:
        if not 0.0 <= self.density <= 1.0:
            raise ValueError(f"density must be in [0, 1], got {self.density}")
        if self.cost_mode not in ("random", "euclidean"):
            raise ValueError(f"unknown cost mode {self.cost_mode!r}")


def generate_instance(n: int, seed: int, config: GeneratorConfig | None = None) -> Instance:
    """Generate a random instance with depot 0 and n additional nodes.

    Coordinates are uniform in the 100x100 square. Terminals are the first
    floor(0.7*n) non-depot nodes. The arc set is a random Hamiltonian cycle
    over all nodes (guaranteeing strong connectivity) plus each remaining
    ordered pair independently with probability config.density. Costs are
    random integers in [20, 50], or rounded Euclidean distances in the
    euclidean cost mode. Fully deterministic in (n, seed, config).
    """
    if n < 2:
        raise InstanceError(f"need at least 2 non-depot nodes, got {n}")
    config = config or GeneratorConfig()
    config.validate()
    rng = random.Random(seed)

    nodes = tuple(range(n + 1))
    coords = {v: (rng.uniform(0.0, 100.0), rng.uniform(0.0, 100.0)) for v in nodes}
    terminals = frozenset(range(1, math.floor(0.7 * n) + 1))

    order = list(range(1, n + 1))
    rng.shuffle(order)
    cycle = [0] + order
    pairs = [(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))]
    cycle_pairs = set(pairs)
    for i in nodes:
        for j in nodes:
            if i == j or (i, j) in cycle_pairs:
                continue
            if rng.random() < config.density:
                pairs.append((i, j))

    arcs = []
    for arc_id, (i, j) in enumerate(pairs):
        if config.cost_mode == "euclidean":
            (xi, yi), (xj, yj) = coords[i], coords[j]
            cost = max(1, round(math.hypot(xi - xj, yi - yj)))
        else:
            cost = rng.randint(20, 50)
        arcs.append(Arc(arc_id, i, j, cost))

    inst = Instance(nodes, coords, terminals, tuple(arcs))
    inst.validate()
    return inst


def build_adjacency(inst: Instance) -> AdjacencyIndex:
    out_arcs: dict[int, list[int]] = {v: [] for v in inst.nodes}
    in_arcs: dict[int, list[int]] = {v: [] for v in inst.nodes}
    for a in inst.arcs:
        out_arcs[a.tail].append(a.id)
        in_arcs[a.head].append(a.id)
    return AdjacencyIndex(
        out_arcs={v: tuple(ids) for v, ids in out_arcs.items()},
        in_arcs={v: tuple(ids) for v, ids in in_arcs.items()},
    )


def _fmt_num(x) -> str:
    if isinstance(x, int) or (isinstance(x, float) and x.is_integer()):
        return str(int(x))
    return repr(x)


def _parse_num(s: str):
    try:
        return int(s)
    except ValueError:
        return float(s)


def save_instance(inst: Instance) -> str:
    """Serialize to the self-describing text document format."""
    lines = ["stsp 1", f"nodes {len(inst.nodes)}"]
    for v in inst.nodes:
        x, y = inst.coords.get(v, (0.0, 0.0))
        if v == 0:
            role = "depot"
        elif v in inst.terminals:
            role = "terminal"
        else:
            role = "steiner"
        lines.append(f"node {v} {_fmt_num(x)} {_fmt_num(y)} {role}")
    for a in inst.arcs:
        lines.append(f"arc {a.id} {a.tail} {a.head} {_fmt_num(a.cost)}")
    return "\n".join(lines) + "\n"


def load_instance(text: str) -> Instance:
    """Parse an instance document; inverse of save_instance."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "stsp 1":
        raise ParseError("missing or unsupported header, expected 'stsp 1'")
    nodes: list[int] = []
    coords: dict[int, tuple[float, float]] = {}
    terminals: set[int] = set()
    arcs: list[Arc] = []
    declared_nodes = None
    for ln in lines[1:]:
        parts = ln.split()
        kind = parts[0]
        if kind == "nodes":
            if len(parts) != 2:
                raise ParseError(f"bad nodes line: {ln!r}")
            declared_nodes = int(parts[1])
        elif kind == "node":
            if len(parts) != 5:
                raise ParseError(f"bad node line: {ln!r}")
            v = int(parts[1])
            if v in coords:
                raise ParseError(f"duplicate node {v}")
            coords[v] = (float(_parse_num(parts[2])), float(_parse_num(parts[3])))
            nodes.append(v)
            role = parts[4]
            if role == "terminal":
                terminals.add(v)
            elif role == "depot":
                if v != 0:
                    raise ParseError(f"depot must be node 0, got {v}")
            elif role != "steiner":
                raise ParseError(f"unknown node role {role!r}")
        elif kind == "arc":
            if len(parts) != 5:
                raise ParseError(f"bad arc line: {ln!r}")
            arcs.append(Arc(int(parts[1]), int(parts[2]), int(parts[3]), _parse_num(parts[4])))
        else:
            raise ParseError(f"unknown line kind {kind!r}")
    if declared_nodes is not None and declared_nodes != len(nodes):
        raise ParseError(f"declared {declared_nodes} nodes, found {len(nodes)}")
    if 0 not in coords:
        raise ParseError("depot missing")
    inst = Instance(tuple(nodes), coords, frozenset(terminals), tuple(arcs))
    try:
        inst.validate()
    except InstanceError as e:
        raise ParseError(str(e)) from e
    return inst
