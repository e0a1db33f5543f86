"""Penalty conversion of a linear constrained binary model to a QUBO.

Each equality constraint (expr = b) contributes P*(expr - b)^2. Each
inequality (expr >= b) gets binary slack bits encoding the surplus in
[0, U - b] (U = sum of positive coefficients) and contributes
P*(expr - b - slack)^2. The objective is added unsquared. Products x*x
collapse to x by binary idempotence.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import ConstrainedModel


class QuboError(ValueError):
    pass


@dataclass
class Qubo:
    variables: list[str]
    linear: dict[str, float]
    quadratic: dict[tuple[str, str], float]
    offset: float
    penalty: float
    var_origin: dict[str, str]  # label -> "decision" | "slack"

    @property
    def num_variables(self) -> int:
        return len(self.variables)


def slack_weights(surplus_max: int) -> list[int]:
    """Binary weights covering exactly the range [0, surplus_max]."""
    if surplus_max <= 0:
        return []
    nbits = surplus_max.bit_length()
    weights = [1 << b for b in range(nbits - 1)]
    weights.append(surplus_max - ((1 << (nbits - 1)) - 1))
    return weights


def auto_penalty(model: ConstrainedModel) -> float:
    """Twice the sum of arc costs; positive-coefficient fallback for
    hand-built models without arc cost metadata."""
    if model.arc_costs:
        base = sum(model.arc_costs.values())
    else:
        base = sum(c for c in model.objective.values() if c > 0)
    return max(2 * base, 1)


def to_qubo(model: ConstrainedModel, penalty="auto") -> Qubo:
    if penalty == "auto":
        P = auto_penalty(model)
    else:
        P = penalty
        if not isinstance(P, (int, float)) or P <= 0:
            raise QuboError(f"penalty must be positive, got {penalty!r}")

    variables = list(model.variables)
    var_origin = {v: "decision" for v in variables}
    linear: dict[str, float] = {}
    quadratic: dict[tuple[str, str], float] = {}
    offset = 0.0

    for v, c in model.objective.items():
        linear[v] = linear.get(v, 0) + c

    var_index = {v: i for i, v in enumerate(variables)}

    def add_squared_penalty(terms: list[tuple[str, float]], constant: float):
        nonlocal offset
        offset += P * constant * constant
        for i, (vi, ai) in enumerate(terms):
            linear[vi] = linear.get(vi, 0) + P * (ai * ai + 2 * ai * constant)
            for vj, aj in terms[i + 1:]:
                key = (vi, vj) if var_index[vi] < var_index[vj] else (vj, vi)
                quadratic[key] = quadratic.get(key, 0) + 2 * P * ai * aj

    for ci, con in enumerate(model.constraints):
        terms = [(v, c) for v, c in con.coeffs.items() if c != 0]
        if con.relation == "=":
            add_squared_penalty(terms, -con.bound)
        elif con.relation == ">=":
            upper = sum(c for _, c in terms if c > 0)
            surplus_max = upper - con.bound
            if surplus_max != int(surplus_max):
                raise QuboError(f"non-integer slack range for constraint {con.tag}")
            for b, w in enumerate(slack_weights(int(surplus_max))):
                label = f"s[{ci}][{b}]"
                variables.append(label)
                var_index[label] = len(var_index)
                var_origin[label] = "slack"
                terms.append((label, -w))
            add_squared_penalty(terms, -con.bound)
        else:
            raise QuboError(f"cannot convert relation {con.relation!r}")

    linear = {v: c for v, c in linear.items() if c != 0}
    quadratic = {k: c for k, c in quadratic.items() if c != 0}
    return Qubo(variables, linear, quadratic, offset, P, var_origin)


def energy(q: Qubo, asg: dict[str, int]) -> float:
    for v in q.variables:
        if v not in asg:
            raise QuboError(f"assignment missing variable {v}")
    e = q.offset
    for v, c in q.linear.items():
        e += c * asg[v]
    for (u, v), c in q.quadratic.items():
        e += c * asg[u] * asg[v]
    return e


def _fmt(x) -> str:
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


def export_qubo(q: Qubo) -> str:
    """Term-list text: header then one `<i> <j> <coeff>` line per term."""
    idx = {v: i for i, v in enumerate(q.variables)}
    nterms = len(q.linear) + len(q.quadratic)
    lines = [f"qubo {q.num_variables} {nterms} {_fmt(q.offset)} {_fmt(q.penalty)}"]
    for v in q.variables:
        if v in q.linear:
            lines.append(f"{idx[v]} {idx[v]} {_fmt(q.linear[v])}")
    for (u, v) in sorted(q.quadratic, key=lambda p: (idx[p[0]], idx[p[1]])):
        lines.append(f"{idx[u]} {idx[v]} {_fmt(q.quadratic[(u, v)])}")
    return "\n".join(lines) + "\n"


def export_labels(q: Qubo) -> str:
    """Variable index map: one `<index> <label>` line per variable."""
    return "\n".join(f"{i} {v}" for i, v in enumerate(q.variables)) + "\n"


def _parse_num(s: str):
    try:
        return int(s)
    except ValueError:
        return float(s)


def parse_qubo(text: str, labels_text: str | None = None) -> Qubo:
    """Inverse of export_qubo (labels restored from the index map when given)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise QuboError("empty qubo document")
    header = lines[0].split()
    if len(header) != 5 or header[0] != "qubo":
        raise QuboError(f"bad header {lines[0]!r}")
    nvars, nterms = int(header[1]), int(header[2])
    offset, penalty = _parse_num(header[3]), _parse_num(header[4])
    if labels_text is not None:
        labels = [""] * nvars
        for ln in labels_text.splitlines():
            if not ln.strip():
                continue
            i, label = ln.split(maxsplit=1)
            labels[int(i)] = label
    else:
        labels = [f"x{i}" for i in range(nvars)]
    if len(lines) - 1 != nterms:
        raise QuboError(f"declared {nterms} terms, found {len(lines) - 1}")
    linear: dict[str, float] = {}
    quadratic: dict[tuple[str, str], float] = {}
    for ln in lines[1:]:
        i_s, j_s, c_s = ln.split()
        i, j, c = int(i_s), int(j_s), _parse_num(c_s)
        if i == j:
            linear[labels[i]] = c
        else:
            a, b = (i, j) if i < j else (j, i)
            quadratic[(labels[a], labels[b])] = c
    var_origin = {v: "slack" if v.startswith("s[") else "decision" for v in labels}
    return Qubo(labels, linear, quadratic, offset, penalty, var_origin)
