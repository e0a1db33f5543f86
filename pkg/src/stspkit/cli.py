"""Command-line front end for the STSP toolkit."""

from __future__ import annotations

import argparse
import sys

from . import pmra
from .anneal import AnnealParams, anneal, auto_beta_range
from .bench import ExperimentConfig, emit_csv, emit_gap_csv, gap_table, run_experiment
from .decode import decode
from .instance import GeneratorConfig, generate_instance, load_instance, save_instance
from .model import build_model, export_lp
from .oracle import optimal_cost
from .qubo import export_labels, export_qubo, to_qubo


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _read_instance(path: str):
    with open(path) as fh:
        return load_instance(fh.read())


def _maybe_reduce(inst, args):
    if getattr(args, "pmra", False):
        inst, _ = pmra.reduce(inst)
    return inst


def _add_pmra_flag(p):
    p.add_argument("--pmra", action=argparse.BooleanOptionalAction, default=False,
                   help="apply arc reduction before building the model")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="stsp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a random instance")
    p.add_argument("n", type=int, help="number of non-depot nodes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--cost-mode", choices=["random", "euclidean"], default="random")
    p.add_argument("--out", default=None)

    p = sub.add_parser("reduce", help="apply arc reduction to an instance")
    p.add_argument("instance")
    p.add_argument("--out", default=None)

    p = sub.add_parser("build", help="build the time-indexed model and print stats")
    p.add_argument("instance")
    _add_pmra_flag(p)

    p = sub.add_parser("export-lp", help="export the model in LP text format")
    p.add_argument("instance")
    _add_pmra_flag(p)
    p.add_argument("--out", default=None)

    p = sub.add_parser("export-qubo", help="export the penalty QUBO")
    p.add_argument("instance")
    _add_pmra_flag(p)
    p.add_argument("--penalty", default="auto")
    p.add_argument("--out", default=None, help="terms file; label map goes to <out>.labels")

    p = sub.add_parser("solve-sa", help="solve via simulated annealing")
    p.add_argument("instance")
    _add_pmra_flag(p)
    p.add_argument("--reads", type=int, default=1000)
    p.add_argument("--sweeps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--beta-hot", type=float, default=None)
    p.add_argument("--beta-cold", type=float, default=None)
    p.add_argument("--time-limit", type=float, default=10.0)

    p = sub.add_parser("exact", help="certified optimal route")
    p.add_argument("instance")
    _add_pmra_flag(p)

    p = sub.add_parser("bench", help="run the batch experiment harness")
    p.add_argument("--sizes", required=True, help="comma-separated node counts, e.g. 4,5,6")
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--solver", choices=["sa", "exact", "export-lp", "export-qubo"], default="sa")
    p.add_argument("--pmra", action=argparse.BooleanOptionalAction, default=None,
                   help="only the reduced (or, with --no-pmra, only the plain) variant")
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--reads", type=int, default=1000)
    p.add_argument("--sweeps", type=int, default=1000)
    p.add_argument("--time-limit", type=float, default=10.0)
    p.add_argument("--no-timing", action="store_true", help="omit timing columns from the CSV")
    p.add_argument("--out", default=None)

    p = sub.add_parser("gap", help="variable-count reduction table")
    p.add_argument("--sizes", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--out", default=None)

    args = parser.parse_args(argv)

    if args.command == "generate":
        cfg = GeneratorConfig(density=args.density, cost_mode=args.cost_mode)
        _write(args.out, save_instance(generate_instance(args.n, args.seed, cfg)))

    elif args.command == "reduce":
        reduced, report = pmra.reduce(_read_instance(args.instance))
        _write(args.out, save_instance(reduced))
        sys.stdout.write(pmra.format_report(report))

    elif args.command == "build":
        model = build_model(_maybe_reduce(_read_instance(args.instance), args))
        print(f"variables {len(model.variables)}")
        print(f"constraints {len(model.constraints)}")
        print(f"horizon {model.horizon}")

    elif args.command == "export-lp":
        model = build_model(_maybe_reduce(_read_instance(args.instance), args))
        _write(args.out, export_lp(model))

    elif args.command == "export-qubo":
        model = build_model(_maybe_reduce(_read_instance(args.instance), args))
        penalty = args.penalty if args.penalty == "auto" else float(args.penalty)
        q = to_qubo(model, penalty)
        _write(args.out, export_qubo(q))
        if args.out and args.out != "-":
            _write(args.out + ".labels", export_labels(q))
        else:
            sys.stdout.write(export_labels(q))

    elif args.command == "solve-sa":
        inst = _maybe_reduce(_read_instance(args.instance), args)
        model = build_model(inst)
        q = to_qubo(model, "auto")
        beta_range = None
        if args.beta_hot is not None and args.beta_cold is not None:
            beta_range = (args.beta_hot, args.beta_cold)
        params = AnnealParams(num_reads=args.reads, sweeps=args.sweeps, seed=args.seed,
                              beta_range=beta_range, time_limit=args.time_limit)
        result = anneal(q, params)
        best_asg, best_energy, _ = result.best
        report = decode(best_asg, model, inst, q)
        hot, cold = beta_range or auto_beta_range(q)
        print(f"beta_range {hot:.6g} {cold:.6g}")
        print(f"best_energy {best_energy}")
        print(f"truncated {'yes' if result.truncated else 'no'}")
        if report.feasible:
            print(f"feasible yes")
            print(f"true_cost {report.true_cost}")
            print("route " + " ".join(map(str, report.route.arc_ids)))
        else:
            print("feasible no")
            for v in report.violations:
                print(f"violation {v}")
            return 1

    elif args.command == "exact":
        cost, route = optimal_cost(_maybe_reduce(_read_instance(args.instance), args))
        print(f"cost {cost}")
        print("route " + " ".join(map(str, route.arc_ids)))

    elif args.command == "bench":
        sizes = [int(s) for s in args.sizes.split(",")]
        cfg = ExperimentConfig(
            sizes=sizes, repetitions=args.reps, seed_base=args.seed,
            with_pmra=args.pmra is not False, without_pmra=args.pmra is not True,
            solver=args.solver, time_limit=args.time_limit,
            num_reads=args.reads, sweeps=args.sweeps,
            generator=GeneratorConfig(density=args.density),
        )
        rows = run_experiment(cfg)
        _write(args.out, emit_csv(rows, include_timing=not args.no_timing))

    elif args.command == "gap":
        sizes = [int(s) for s in args.sizes.split(",")]
        rows = gap_table(sizes, args.seed, GeneratorConfig(density=args.density))
        _write(args.out, emit_gap_csv(rows))

    return 0


if __name__ == "__main__":
    sys.exit(main())
