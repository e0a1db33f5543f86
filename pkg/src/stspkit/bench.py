"""Batch experiment harness: seeded runs, aggregation, CSV emission.

Sizes are total node counts including the depot. Each repetition gets its
own generation seed (base + rep), so aggregation is independent of run
order and the whole experiment is reproducible.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field

from . import pmra
from .anneal import AnnealParams, anneal, frozen_beta_range
from .decode import decode
from .instance import GeneratorConfig, Instance, generate_instance
from .model import build_model, export_lp
from .oracle import InfeasibleError, optimal_cost
from .qubo import export_qubo, to_qubo


class BenchError(ValueError):
    pass


SOLVERS = ("sa", "exact", "export-lp", "export-qubo")


@dataclass
class ExperimentConfig:
    sizes: list[int]
    repetitions: int = 10
    seed_base: int = 0
    with_pmra: bool = True
    without_pmra: bool = True
    solver: str = "sa"
    time_limit: float = 10.0
    num_reads: int = 1000
    sweeps: int = 1000
    beta_mode: str = "frozen"  # "frozen" or "auto"
    generator: GeneratorConfig = field(default_factory=GeneratorConfig)

    def validate(self) -> None:
        if not self.sizes:
            raise BenchError("sizes must be nonempty")
        if any(s < 3 for s in self.sizes):
            raise BenchError("sizes must be >= 3 (depot plus two nodes)")
        if self.repetitions < 1:
            raise BenchError(f"repetitions must be >= 1, got {self.repetitions}")
        if self.solver not in SOLVERS:
            raise BenchError(f"unknown solver {self.solver!r}")
        if not (self.with_pmra or self.without_pmra):
            raise BenchError("at least one of with_pmra/without_pmra required")


@dataclass
class ResultsRow:
    size: int
    variant: str
    avg_objective: float | None
    std_objective: float | None
    pct_solved: float
    avg_time: float
    std_time: float


def _variant_name(solver: str, reduced: bool) -> str:
    prefix = "R" if reduced else "S"
    if solver == "sa":
        return prefix + "QUBO"
    if solver == "exact":
        return prefix + "EXACT"
    return prefix + solver.upper()


def _solve_one(inst: Instance, cfg: ExperimentConfig, run_seed: int):
    """Returns (solved, objective-or-None, wall seconds). Timing covers
    model build, conversion, solve and decode, not instance generation."""
    start = time.perf_counter()
    if cfg.solver == "exact":
        try:
            cost, _ = optimal_cost(inst)
            return True, cost, time.perf_counter() - start
        except InfeasibleError:
            return False, None, time.perf_counter() - start
    model = build_model(inst)
    if cfg.solver == "export-lp":
        export_lp(model)
        return True, None, time.perf_counter() - start
    q = to_qubo(model, "auto")
    if cfg.solver == "export-qubo":
        export_qubo(q)
        return True, None, time.perf_counter() - start
    beta_range = frozen_beta_range(q) if cfg.beta_mode == "frozen" else None
    params = AnnealParams(num_reads=cfg.num_reads, sweeps=cfg.sweeps, seed=run_seed,
                          beta_range=beta_range, time_limit=cfg.time_limit)
    best_asg, _, _ = anneal(q, params).best
    report = decode(best_asg, model, inst, q)
    elapsed = time.perf_counter() - start
    return report.feasible, report.true_cost, elapsed


def aggregate(size: int, variant: str, outcomes: list[tuple[bool, float | None, float]]) -> ResultsRow:
    """Objective stats over solved runs; time stats over all runs."""
    solved = [obj for ok, obj, _ in outcomes if ok and obj is not None]
    times = [t for _, _, t in outcomes]
    pct = 100.0 * sum(1 for ok, _, _ in outcomes if ok) / len(outcomes)
    avg_obj = statistics.mean(solved) if solved else None
    std_obj = statistics.pstdev(solved) if solved else None
    return ResultsRow(size, variant, avg_obj, std_obj, pct,
                      statistics.mean(times), statistics.pstdev(times))


def run_experiment(cfg: ExperimentConfig) -> list[ResultsRow]:
    cfg.validate()
    cfg.generator.validate()
    variants = []
    if cfg.without_pmra:
        variants.append(False)
    if cfg.with_pmra:
        variants.append(True)
    rows = []
    for size in cfg.sizes:
        for reduced in variants:
            outcomes = []
            for rep in range(cfg.repetitions):
                run_seed = cfg.seed_base + rep
                inst = generate_instance(size - 1, run_seed, cfg.generator)
                if reduced:
                    inst, _ = pmra.reduce(inst)
                outcomes.append(_solve_one(inst, cfg, run_seed))
            rows.append(aggregate(size, _variant_name(cfg.solver, reduced), outcomes))
    rows.sort(key=lambda r: (r.size, r.variant))
    return rows


def gap_table(sizes: list[int], seed_base: int,
              config: GeneratorConfig | None = None) -> list[tuple[int, int, int, int]]:
    """Per size: total QUBO variable counts without and with reduction,
    and the percentage reduction."""
    config = config or GeneratorConfig()
    rows = []
    for size in sizes:
        inst = generate_instance(size - 1, seed_base, config)
        reduced, _ = pmra.reduce(inst)
        nvar_s = to_qubo(build_model(inst), "auto").num_variables
        nvar_r = to_qubo(build_model(reduced), "auto").num_variables
        gap = round(100 * (1 - nvar_r / nvar_s))
        rows.append((size, nvar_s, nvar_r, gap))
    return rows


def _cell(x, decimals=2) -> str:
    if x is None:
        return "-"
    return f"{x:.{decimals}f}"


def emit_csv(rows: list[ResultsRow], include_timing: bool = True) -> str:
    if not rows:
        raise BenchError("no rows to emit")
    header = "size,variant,avg_objective,std_objective,pct_solved"
    if include_timing:
        header += ",avg_time,std_time"
    lines = [header]
    for r in sorted(rows, key=lambda r: (r.size, r.variant)):
        cells = [str(r.size), r.variant, _cell(r.avg_objective),
                 _cell(r.std_objective), f"{r.pct_solved:.0f}%"]
        if include_timing:
            cells += [_cell(r.avg_time, 4), _cell(r.std_time, 4)]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def emit_gap_csv(rows: list[tuple[int, int, int, int]]) -> str:
    lines = ["size,nvar_squbo,nvar_rqubo,gap"]
    for size, s, r, gap in rows:
        lines.append(f"{size},{s},{r},{gap}%")
    return "\n".join(lines) + "\n"
