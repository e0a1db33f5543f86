"""Time-indexed binary routing model and LP text export.

One binary variable y[k][t] per arc k and period t, horizon T = |A|.
The route starts at the depot in period 1, conserves flow between
consecutive periods at every non-depot node, balances depot in/out flow,
and covers every terminal at least once.
"""

from __future__ import annotations

from dataclasses import dataclass

from .instance import Instance, build_adjacency


class ModelError(ValueError):
    pass


def var_label(arc_id: int, period: int) -> str:
    return f"y[{arc_id}][{period}]"


@dataclass
class Constraint:
    coeffs: dict[str, float]  # label -> coefficient
    relation: str             # "=" or ">="
    bound: float
    tag: str


@dataclass
class ConstrainedModel:
    variables: list[str]
    objective: dict[str, float]
    constraints: list[Constraint]
    horizon: int
    arc_costs: dict[int, float]


def build_model(inst: Instance, horizon: int | None = None) -> ConstrainedModel:
    """Build the time-indexed model for an instance.

    horizon overrides the default T = |A| (experimentation only; the
    default matches the variable counts the benchmark tables measure).
    """
    if not inst.arcs:
        raise ModelError("instance has no arcs")
    T = horizon if horizon is not None else len(inst.arcs)
    if T < 1:
        raise ModelError(f"horizon must be >= 1, got {T}")
    adj = build_adjacency(inst)
    arc_ids = [a.id for a in inst.arcs]
    arc_costs = {a.id: a.cost for a in inst.arcs}

    variables = [var_label(k, t) for k in arc_ids for t in range(1, T + 1)]
    objective = {var_label(k, t): arc_costs[k] for k in arc_ids for t in range(1, T + 1)}

    cons: list[Constraint] = []
    depot_out = set(adj.out_arcs[0])
    # Route starts at the depot in period 1.
    cons.append(Constraint({var_label(k, 1): 1 for k in adj.out_arcs[0]}, "=", 1, "eq2"))
    # No other arc is active in period 1.
    for k in arc_ids:
        if k not in depot_out:
            cons.append(Constraint({var_label(k, 1): 1}, "=", 0, f"eq3_k{k}"))
    # Depot inflow equals outflow over the whole horizon.
    eq4: dict[str, float] = {}
    for t in range(1, T + 1):
        for k in adj.out_arcs[0]:
            eq4[var_label(k, t)] = eq4.get(var_label(k, t), 0) + 1
        for k in adj.in_arcs[0]:
            eq4[var_label(k, t)] = eq4.get(var_label(k, t), 0) - 1
    cons.append(Constraint(eq4, "=", 0, "eq4"))
    # Every terminal is departed from at least once.
    for i in sorted(inst.terminals):
        expr = {var_label(k, t): 1 for t in range(1, T + 1) for k in adj.out_arcs[i]}
        cons.append(Constraint(expr, ">=", 1, f"eq5_i{i}"))
    # Flow conservation between consecutive periods at non-depot nodes.
    for i in inst.nodes:
        if i == 0:
            continue
        for t in range(1, T):
            expr: dict[str, float] = {}
            for k in adj.in_arcs[i]:
                expr[var_label(k, t)] = expr.get(var_label(k, t), 0) + 1
            for k in adj.out_arcs[i]:
                expr[var_label(k, t + 1)] = expr.get(var_label(k, t + 1), 0) - 1
            cons.append(Constraint(expr, "=", 0, f"eq6_i{i}_t{t}"))

    return ConstrainedModel(variables, objective, cons, T, arc_costs)


def evaluate_assignment(model: ConstrainedModel, asg: dict[str, int]):
    """Objective value and the list of (tag, signed residual) violations."""
    for v in model.variables:
        if v not in asg:
            raise ModelError(f"assignment missing variable {v}")
    objective = sum(c * asg[v] for v, c in model.objective.items())
    violations = []
    for con in model.constraints:
        lhs = sum(c * asg[v] for v, c in con.coeffs.items())
        residual = lhs - con.bound
        if con.relation == "=":
            if residual != 0:
                violations.append((con.tag, residual))
        elif con.relation == ">=":
            if residual < 0:
                violations.append((con.tag, residual))
        else:
            raise ModelError(f"unknown relation {con.relation!r}")
    return objective, violations


def _lp_name(label: str) -> str:
    return label.replace("[", "_").replace("]", "")


def _lp_num(x: float) -> str:
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


def _lp_expr(coeffs: dict[str, float], order: dict[str, int]) -> str:
    parts = []
    for v, c in sorted(coeffs.items(), key=lambda kv: order[kv[0]]):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        term = _lp_name(v) if mag == 1 else f"{_lp_num(mag)} {_lp_name(v)}"
        parts.append(f"{sign} {term}")
    if not parts:
        return "0 " + _lp_name(next(iter(order)))
    expr = " ".join(parts)
    return expr[2:] if expr.startswith("+ ") else expr


def export_lp(model: ConstrainedModel) -> str:
    """Emit the model in LP text format (minimize, constraints, binaries)."""
    order = {v: i for i, v in enumerate(model.variables)}
    lines = ["Minimize", f" obj: {_lp_expr(model.objective, order)}", "Subject To"]
    for con in model.constraints:
        rel = "=" if con.relation == "=" else ">="
        lines.append(f" {con.tag}: {_lp_expr(con.coeffs, order)} {rel} {_lp_num(con.bound)}")
    lines.append("Binaries")
    for v in model.variables:
        lines.append(f" {_lp_name(v)}")
    lines.append("End")
    return "\n".join(lines) + "\n"
