import pytest

from stspkit import ExperimentConfig, GeneratorConfig, emit_csv, gap_table, run_experiment
from stspkit.bench import BenchError, aggregate, emit_gap_csv


def test_aggregate_identical_costs():
    outcomes = [(True, 122.03, 0.01)] * 10
    row = aggregate(4, "SILP", outcomes)
    assert row.avg_objective == pytest.approx(122.03)
    assert row.std_objective == pytest.approx(0.0)
    assert row.pct_solved == 100.0


def test_aggregate_partial_solved():
    outcomes = [(True, 100.0, 0.1)] * 3 + [(False, None, 0.1)] * 7
    row = aggregate(5, "SQUBO", outcomes)
    assert row.pct_solved == pytest.approx(30.0)
    assert row.avg_objective == pytest.approx(100.0)


def test_aggregate_none_solved_renders_dash():
    outcomes = [(False, None, 0.2)] * 10
    row = aggregate(6, "SQUBO", outcomes)
    assert row.avg_objective is None
    csv = emit_csv([row])
    assert ",-,-," in csv
    assert "0%" in csv


def test_emit_csv_shape():
    row = aggregate(4, "SEXACT", [(True, 55.0, 0.0)])
    csv = emit_csv([row])
    assert len(csv.splitlines()) == 2
    assert emit_csv([row]) == csv


def test_emit_csv_empty_raises():
    with pytest.raises(BenchError):
        emit_csv([])


def test_gap_rounding_formula():
    assert round(100 * (1 - 91 / 156)) == 42


def test_gap_table_monotone():
    rows = gap_table([4, 5, 6], seed_base=1, config=GeneratorConfig(density=0.3))
    for size, nvar_s, nvar_r, gap in rows:
        assert nvar_r <= nvar_s
        assert gap >= 0
        assert gap == round(100 * (1 - nvar_r / nvar_s))


def test_gap_zero_when_nothing_removed():
    # density 0 with all costs below threshold is rare; force identity by
    # checking the formula against equal counts instead
    assert round(100 * (1 - 91 / 91)) == 0


def test_invalid_config():
    with pytest.raises(BenchError):
        run_experiment(ExperimentConfig(sizes=[]))
    with pytest.raises(BenchError):
        run_experiment(ExperimentConfig(sizes=[4], repetitions=0))
    with pytest.raises(BenchError):
        run_experiment(ExperimentConfig(sizes=[4], solver="gurobi"))


def test_exact_experiment_deterministic():
    cfg = ExperimentConfig(sizes=[4, 5], repetitions=3, seed_base=7, solver="exact")
    rows1 = run_experiment(cfg)
    rows2 = run_experiment(cfg)
    assert emit_csv(rows1, include_timing=False) == emit_csv(rows2, include_timing=False)
    # both variants present, ordered by size then variant
    assert [(r.size, r.variant) for r in rows1] == [
        (4, "REXACT"), (4, "SEXACT"), (5, "REXACT"), (5, "SEXACT")]
    # arc removal never lowers the optimum, so reduced averages are >= plain
    by_key = {(r.size, r.variant): r for r in rows1}
    for size in (4, 5):
        assert by_key[(size, "REXACT")].avg_objective >= by_key[(size, "SEXACT")].avg_objective


def test_emit_gap_csv():
    text = emit_gap_csv([(4, 156, 91, 42)])
    assert text.splitlines() == ["size,nvar_squbo,nvar_rqubo,gap", "4,156,91,42%"]
