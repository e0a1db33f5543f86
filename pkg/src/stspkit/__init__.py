"""Steiner TSP solver toolkit: instance generation, arc reduction,
time-indexed modeling, QUBO penalty conversion, simulated annealing,
exact oracle and a benchmark harness."""

from .anneal import AnnealParams, SampleSet, anneal, auto_beta_range
from .bench import ExperimentConfig, ResultsRow, emit_csv, gap_table, run_experiment
from .decode import DecodeReport, decode, encode_route, validate_route
from .instance import (
    AdjacencyIndex,
    Arc,
    GeneratorConfig,
    Instance,
    build_adjacency,
    generate_instance,
    load_instance,
    save_instance,
)
from .model import ConstrainedModel, Constraint, build_model, evaluate_assignment, export_lp
from .oracle import (
    DistanceClosure,
    Route,
    enumerate_walk_optimum,
    metric_closure,
    optimal_cost,
)
from .pmra import PmraReport, compute_threshold
from .pmra import reduce as reduce_instance
from .qubo import Qubo, energy, export_labels, export_qubo, parse_qubo, to_qubo

__all__ = [
    "AdjacencyIndex", "AnnealParams", "Arc", "ConstrainedModel", "Constraint",
    "DecodeReport", "DistanceClosure", "ExperimentConfig", "GeneratorConfig",
    "Instance", "PmraReport", "Qubo", "ResultsRow", "Route", "SampleSet",
    "anneal", "auto_beta_range", "build_adjacency", "build_model",
    "compute_threshold", "decode", "emit_csv", "encode_route", "energy",
    "enumerate_walk_optimum", "evaluate_assignment", "export_labels",
    "export_lp", "export_qubo", "gap_table", "generate_instance",
    "load_instance", "metric_closure", "optimal_cost", "parse_qubo",
    "reduce_instance", "run_experiment", "save_instance", "to_qubo",
    "validate_route",
]
