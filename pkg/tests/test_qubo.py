import itertools
import random

import pytest

from stspkit import build_model, energy, export_labels, export_qubo, parse_qubo, to_qubo
from stspkit.model import Constraint, ConstrainedModel
from stspkit.qubo import QuboError, auto_penalty, slack_weights


def make_model(variables, objective, constraints):
    return ConstrainedModel(list(variables), dict(objective),
                            constraints, horizon=1, arc_costs={})


def all_assignments(variables):
    for bits in itertools.product((0, 1), repeat=len(variables)):
        yield dict(zip(variables, bits))


def test_single_equality_expansion():
    model = make_model(["x1", "x2"], {}, [Constraint({"x1": 1, "x2": 1}, "=", 1, "c")])
    q = to_qubo(model, 10)
    assert q.linear == {"x1": -10, "x2": -10}
    assert q.quadratic == {("x1", "x2"): 20}
    assert q.offset == 10
    expected = {(0, 0): 10, (1, 0): 0, (0, 1): 0, (1, 1): 10}
    for (a, b), e in expected.items():
        assert energy(q, {"x1": a, "x2": b}) == e


def test_inequality_slack_bit():
    model = make_model(["x1", "x2"], {}, [Constraint({"x1": 1, "x2": 1}, ">=", 1, "c")])
    q = to_qubo(model, 10)
    assert sum(1 for v in q.variables if q.var_origin[v] == "slack") == 1
    zero_energy = {tuple(a[v] for v in q.variables)
                   for a in all_assignments(q.variables) if energy(q, a) == 0}
    assert zero_energy == {(1, 0, 0), (0, 1, 0), (1, 1, 1)}


def test_slack_weights_cover_range_exactly():
    for m in range(0, 40):
        w = slack_weights(m)
        sums = {0}
        for wi in w:
            sums |= {s + wi for s in sums}
        assert sums == set(range(m + 1))


def test_energy_trivial_cases():
    model = make_model(["x"], {"x": -1}, [])
    q = to_qubo(model, 5)
    assert energy(q, {"x": 0}) == 0
    assert energy(q, {"x": 1}) == -1


def test_energy_missing_variable():
    model = make_model(["x"], {"x": -1}, [])
    q = to_qubo(model, 5)
    with pytest.raises(QuboError, match="missing"):
        energy(q, {})


def test_invalid_penalty():
    model = make_model(["x"], {"x": 1}, [])
    with pytest.raises(QuboError):
        to_qubo(model, -3)
    with pytest.raises(QuboError):
        to_qubo(model, 0)


def test_unsupported_relation():
    model = make_model(["x"], {}, [Constraint({"x": 1}, "<=", 1, "c")])
    with pytest.raises(QuboError):
        to_qubo(model, 10)


def test_decision_variable_count_matches_model(t1):
    model = build_model(t1)
    q = to_qubo(model, "auto")
    decisions = [v for v in q.variables if q.var_origin[v] == "decision"]
    assert len(decisions) == len(model.variables) == 36


def test_export_single_variable():
    model = make_model(["x"], {"x": -1}, [])
    q = to_qubo(model, 5)
    lines = export_qubo(q).splitlines()
    assert lines[0] == "qubo 1 1 0 5"
    assert lines[1] == "0 0 -1"


def test_export_term_count(t1):
    q = to_qubo(build_model(t1), "auto")
    lines = export_qubo(q).splitlines()
    assert len(lines) - 1 == len(q.linear) + len(q.quadratic)


def test_export_parse_round_trip(t1):
    q = to_qubo(build_model(t1), "auto")
    parsed = parse_qubo(export_qubo(q), export_labels(q))
    assert parsed == q
    assert export_qubo(parsed) == export_qubo(q)


def _random_model(rng, max_vars=4):
    nvars = rng.randint(2, max_vars)
    variables = [f"x{i}" for i in range(nvars)]
    objective = {v: rng.randint(0, 5) for v in variables}
    constraints = []
    for ci in range(rng.randint(1, 2)):
        coeffs = {v: rng.randint(0, 2) for v in variables}
        coeffs = {v: c for v, c in coeffs.items() if c}
        if not coeffs:
            coeffs = {variables[0]: 1}
        relation = rng.choice(["=", ">="])
        upper = sum(coeffs.values())
        bound = rng.randint(0, max(1, upper))
        constraints.append(Constraint(coeffs, relation, bound, f"c{ci}"))
    return make_model(variables, objective, constraints)


def _model_penalty_terms(model, asg):
    """Squared residuals with the best representable slack per constraint."""
    total = 0
    for con in model.constraints:
        lhs = sum(c * asg[v] for v, c in con.coeffs.items())
        if con.relation == "=":
            total += (lhs - con.bound) ** 2
        else:
            upper = sum(c for c in con.coeffs.values() if c > 0)
            best = min((lhs - con.bound - s) ** 2
                       for s in range(max(upper - con.bound, 0) + 1))
            total += best
    return total


@pytest.mark.parametrize("seed", range(10))
def test_exactness_by_enumeration(seed):
    rng = random.Random(seed)
    model = _random_model(rng)
    q = to_qubo(model, "auto")
    assert len(q.variables) <= 14
    decisions = model.variables
    slacks = [v for v in q.variables if q.var_origin[v] == "slack"]
    for asg in all_assignments(decisions):
        objective = sum(c * asg[v] for v, c in model.objective.items())
        best_energy = min(
            energy(q, {**asg, **dict(zip(slacks, bits))})
            for bits in itertools.product((0, 1), repeat=len(slacks))
        )
        assert best_energy == objective + q.penalty * _model_penalty_terms(model, asg)


def test_auto_penalty_from_arc_costs(t1):
    model = build_model(t1)
    assert auto_penalty(model) == 2 * (25 + 30 + 20 + 20 + 22 + 21)
    q = to_qubo(model, "auto")
    assert q.penalty == 276
