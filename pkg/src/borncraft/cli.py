"""Command-line interface: circuit simulation, closure learning, experiments.

Exit codes: 0 success, 2 bad arguments or inputs, 3 infeasible experiment grid.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from .dist import AffineUniform, SampleOracle, dist_to_json, tv
from .harness import EXPERIMENTS, ExperimentSpec, InfeasibleGridError, run
from .learn import LearnReport, closure_learn
from .stabilizer import simulate_clifford
from .statevector import sv_distribution
from .circuit import parse_circuit


def _load_circuit(path: str):
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ValueError(f"cannot read circuit file: {e}") from None
    return parse_circuit(text)


def _cmd_simulate(args) -> int:
    circuit = _load_circuit(args.circuit_file)
    rng = random.Random(args.seed)
    if args.backend == "stab":
        tableau = simulate_clifford(circuit)
        if args.samples:
            for _ in range(args.samples):
                print(tableau.sample(rng).to_str())
            return 0
        payload = {
            "backend": "stab",
            "n": circuit.n,
            "distribution": dist_to_json(AffineUniform(tableau.support())),
        }
    else:
        dd = sv_distribution(circuit)
        if args.samples:
            for _ in range(args.samples):
                print(dd.sample(rng).to_str())
            return 0
        payload = {
            "backend": "sv",
            "n": circuit.n,
            "probabilities": [float(p) for p in dd.probs],
        }
    print(json.dumps(payload, sort_keys=True, indent=2))
    return 0


def _cmd_learn_closure(args) -> int:
    circuit = _load_circuit(args.circuit)
    rng = random.Random(args.seed)
    tableau = simulate_clifford(circuit)
    truth = AffineUniform(tableau.support())
    oracle = SampleOracle(truth, rng)
    start = time.perf_counter()
    learned = closure_learn(oracle, circuit.n, args.delta)
    elapsed = time.perf_counter() - start
    learned_dist = learned.dist()
    report = LearnReport(
        success=learned.subspace.same_set(truth.subspace),
        tv_to_truth=float(tv(learned_dist, truth)),
        queries=oracle.queries,
        wall_time=elapsed,
    )
    payload = {
        "learned": dist_to_json(learned_dist),
        "samples_used": learned.samples_used,
        "success": report.success,
        "tv_to_truth": report.tv_to_truth,
        "queries": report.queries,
        "wall_time_s": report.wall_time,
    }
    print(json.dumps(payload, sort_keys=True, indent=2))
    return 0


def _cmd_experiment(args) -> int:
    raw = args.grid
    if raw.startswith("@"):
        with open(raw[1:], encoding="utf-8") as f:
            raw = f.read()
    try:
        grid = json.loads(raw)
    except json.JSONDecodeError as e:
        raise ValueError(f"bad grid JSON: {e}") from None
    if not isinstance(grid, dict):
        raise ValueError("grid must be a JSON object")
    spec = ExperimentSpec(args.name, grid, args.trials, args.seed)
    result = run(spec)
    text = result.to_csv() if args.format == "csv" else result.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="borncraft",
        description="Simulate small circuits, learn their output distributions, "
        "and run the seeded experiment battery.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="simulate a circuit file")
    p_sim.add_argument("circuit_file")
    p_sim.add_argument("--backend", choices=["stab", "sv"], default="stab")
    p_sim.add_argument("--samples", type=int, default=0,
                       help="emit this many samples instead of the distribution")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.set_defaults(func=_cmd_simulate)

    p_learn = sub.add_parser("learn", help="run a learner")
    learn_sub = p_learn.add_subparsers(dest="learner", required=True)
    p_closure = learn_sub.add_parser("closure", help="affine-subspace recovery")
    p_closure.add_argument("--circuit", required=True)
    p_closure.add_argument("--delta", type=float, required=True)
    p_closure.add_argument("--seed", type=int, default=0)
    p_closure.set_defaults(func=_cmd_learn_closure)

    p_exp = sub.add_parser("experiment", help="run a registered experiment")
    p_exp.add_argument("name", choices=sorted(EXPERIMENTS))
    p_exp.add_argument("--grid", required=True,
                       help="JSON object, or @path to a JSON file")
    p_exp.add_argument("--trials", type=int, default=1000)
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.add_argument("--out", default=None)
    p_exp.add_argument("--format", choices=["json", "csv"], default="json")
    p_exp.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleGridError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
