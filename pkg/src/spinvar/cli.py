"""Experiment command line: ground-state runs, gap scans, Max-cut, and
named benchmark scenarios.

Artifacts per run: trace.csv (one row per optimizer iteration),
summary.json (fixed key set, null where not applicable), and SVG plots.
Identical flags and seed reproduce identical bytes, except the
wall-time field. Config files are flat `key = value` lines; explicit
flags win over the file.

Exit codes: 0 done, 2 bad flags or inputs, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

from . import __version__
from ._svg import LineChart
from .circuits import build_efficient_su2, run_circuit
from .exact import lowest_eigenvalues
from .optimizers import GradConfig, OptimizerTrace, QnspsaConfig, SpsaConfig
from .problems import (
    Graph,
    MgmParams,
    brute_force_maxcut,
    build_maxcut,
    build_mgm,
    cut_value,
    parse_graph,
    random_graph,
)
from .statevector import NoiseConfig, init_zero
from .vqa import OptimizerChoice, SimConfig, VqaResult, energy_gap_scan, qaoa_run, vqe_run
from ._bits import bitstring as index_to_bitstring


class CliError(Exception):
    """Bad flags, config, or input files; exits with status 2."""


OPTIMIZER_DEFAULTS = {"spsa": SpsaConfig, "qnspsa": QnspsaConfig, "grad": GradConfig}


def _positive_int(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _bool_from(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise CliError(f"not a boolean: {raw!r}")


def _choice(options: tuple[str, ...]):
    def convert(raw: str) -> str:
        if raw not in options:
            raise CliError(f"expected one of {', '.join(options)}, got {raw!r}")
        return raw

    return convert


def _read_config(path: str) -> dict[str, str]:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise CliError(f"cannot read config file: {exc}")
    values: dict[str, str] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise CliError(f"{path}:{lineno}: expected `key = value`")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _merge(defaults: dict, converters: dict, namespace: argparse.Namespace) -> argparse.Namespace:
    """Layer builtin defaults, then config-file values, then explicit flags."""
    explicit = vars(namespace)
    merged = dict(defaults)
    config_path = explicit.pop("config", None)
    if config_path is not None:
        for key, raw in _read_config(config_path).items():
            if key not in converters:
                raise CliError(f"unknown config key {key!r}")
            try:
                merged[key] = converters[key](raw)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise CliError(f"config key {key!r}: {exc}")
    merged.update(explicit)
    return argparse.Namespace(**merged)


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _write_trace(path: Path, trace: OptimizerTrace) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("iteration,cumulative_evaluations,objective_value,best_objective\n")
        for record in trace.records:
            fh.write(
                f"{record.iteration},{record.evaluations},"
                f"{float(record.value)!r},{float(record.best)!r}\n"
            )


def _convergence_plot(path: Path, trace: OptimizerTrace, exact_energy: float | None) -> None:
    chart = LineChart("Optimization trace", "cost-function evaluations", "energy")
    evals = [r.evaluations for r in trace.records]
    chart.add_series("objective", evals, [r.value for r in trace.records])
    chart.add_series("best so far", evals, [r.best for r in trace.records], dashed=True)
    if exact_energy is not None:
        chart.add_hline(exact_energy, f"exact {exact_energy:.6g}")
    chart.write(path)


def _converged(best: float | None, exact: float | None) -> bool | None:
    if best is None or exact is None:
        return None
    if exact == 0:
        return abs(best) < 0.01
    return abs(best - exact) / abs(exact) < 0.01


def _summary_skeleton(problem: dict, n_qubits: int) -> dict:
    return {
        "problem": problem,
        "n_qubits": n_qubits,
        "ansatz": None,
        "optimizer": None,
        "iters": None,
        "seed": None,
        "shots": None,
        "noise": None,
        "final_energy": None,
        "best_energy": None,
        "exact_energy": None,
        "cut_value": None,
        "bitstring": None,
        "energy_convention": "actual",
        "converged": None,
        "wall_time_s": None,
        "tool_version": __version__,
    }


def _summary_from_result(
    problem: dict,
    n_qubits: int,
    result: VqaResult,
    opt: OptimizerChoice,
    sim: SimConfig,
) -> dict:
    ansatz = dict(result.ansatz)
    reps = ansatz.pop("reps", None)
    if reps is None:
        reps = ansatz.pop("p", None)
    ansatz.pop("reps", None)
    ansatz.pop("p", None)
    cfg = opt.config if opt.config is not None else OPTIMIZER_DEFAULTS[opt.name]()
    summary = _summary_skeleton(problem, n_qubits)
    summary.update(
        {
            "ansatz": {
                "family": ansatz.get("family"),
                "reps": reps,
                "n_params": ansatz.get("n_params"),
                "depth": ansatz.get("depth"),
            },
            "optimizer": {"name": opt.name, "config": dataclasses.asdict(cfg)},
            "iters": opt.iterations,
            "seed": result.seed,
            "shots": sim.shots,
            "noise": dataclasses.asdict(sim.noise) if sim.noisy else None,
            "final_energy": float(result.trace.final_value),
            "best_energy": float(result.best_energy),
            "exact_energy": None if result.exact_energy is None else float(result.exact_energy),
            "cut_value": None if result.cut is None else float(result.cut),
            "bitstring": result.bitstring,
            "energy_convention": result.energy_convention,
            "converged": _converged(result.best_energy, result.exact_energy),
            "wall_time_s": float(result.trace.wall_time),
        }
    )
    return summary


def _write_run_artifacts(out: Path, summary: dict, trace: OptimizerTrace | None) -> None:
    out.mkdir(parents=True, exist_ok=True)
    _write_json(out / "summary.json", summary)
    if trace is not None:
        _write_trace(out / "trace.csv", trace)
        _convergence_plot(out / "convergence.svg", trace, summary.get("exact_energy"))


def _noise_config(ns) -> NoiseConfig | None:
    if ns.noise == "on":
        if ns.shots is None:
            raise CliError("--noise on requires --shots")
        return NoiseConfig()
    return None


def _optimizer_choice(ns) -> OptimizerChoice:
    if ns.iters < 1:
        raise CliError("iters must be >= 1")
    return OptimizerChoice(ns.optimizer, ns.iters)


# ---------------------------------------------------------------- mgm-ground

MGM_GROUND_DEFAULTS = {
    "n": None,
    "alpha": -0.1,
    "J": 1.0,
    "method": "vqe",
    "reps": 5,
    "optimizer": "grad",
    "iters": 800,
    "noise": "off",
    "shots": None,
    "seed": 0,
    "out": "runs/mgm-ground",
    "doubled_energies": False,
}

MGM_GROUND_CONVERTERS = {
    "n": int,
    "alpha": float,
    "J": float,
    "method": _choice(("vqe", "qaoa", "exact")),
    "reps": int,
    "optimizer": _choice(("spsa", "qnspsa", "grad")),
    "iters": int,
    "noise": _choice(("off", "on")),
    "shots": int,
    "seed": int,
    "out": str,
    "doubled_energies": _bool_from,
}


def cmd_mgm_ground(ns) -> int:
    if ns.n is None:
        raise CliError("--n is required")
    if ns.n < 4:
        raise CliError("n must be >= 4")
    params = MgmParams(ns.n, ns.J, ns.alpha)
    h = build_mgm(params)
    problem = {"name": "mgm", "n_spins": ns.n, "J": ns.J, "alpha": ns.alpha}
    out = Path(ns.out)
    doubled = ns.doubled_energies
    convention = "doubled" if doubled else "actual"

    if ns.method == "exact":
        if ns.n > 15:
            raise CliError("exact method covers n <= 15")
        e0 = float(lowest_eigenvalues(h, 1)[0])
        summary = _summary_skeleton(problem, ns.n)
        summary["exact_energy"] = 2 * e0 if doubled else e0
        summary["energy_convention"] = convention
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "summary.json", summary)
        return 0

    if ns.reps < 1:
        raise CliError("reps must be >= 1")
    opt = _optimizer_choice(ns)
    sim = SimConfig(ns.shots, _noise_config(ns))
    if ns.method == "vqe":
        ansatz = build_efficient_su2(ns.n, ns.reps)
        result = vqe_run(h, ansatz, opt, sim, ns.seed, doubled=doubled, problem="mgm")
        result.ansatz["family"] = "efficient_su2"
        result.ansatz["reps"] = ns.reps
    else:
        result = qaoa_run(h, ns.reps, opt, sim, ns.seed, doubled=doubled, problem="mgm")
    summary = _summary_from_result(problem, ns.n, result, opt, sim)
    _write_run_artifacts(out, summary, result.trace)
    return 0


# ------------------------------------------------------------------- mgm-gap

MGM_GAP_DEFAULTS = {
    "n_min": 4,
    "n_max": None,
    "method": "exact",
    "alpha": -0.1,
    "J": 1.0,
    "reps": None,
    "optimizer": "grad",
    "iters": 300,
    "seed": 11,
    "out": "runs/mgm-gap",
}

MGM_GAP_CONVERTERS = {
    "n_min": int,
    "n_max": int,
    "method": _choice(("exact", "vqd")),
    "alpha": float,
    "J": float,
    "reps": int,
    "optimizer": _choice(("spsa", "qnspsa", "grad")),
    "iters": int,
    "seed": int,
    "out": str,
}


def cmd_mgm_gap(ns) -> int:
    n_max = ns.n_max if ns.n_max is not None else (14 if ns.method == "exact" else 9)
    if ns.n_min < 4:
        raise CliError("n must be >= 4")
    if n_max < ns.n_min:
        raise CliError("n-max must be >= n-min")
    if ns.method == "exact" and n_max > 15:
        raise CliError("exact method covers n <= 15")
    vqd_reps = None if ns.reps is None else (lambda n: ns.reps)
    rows = energy_gap_scan(
        range(ns.n_min, n_max + 1),
        J=ns.J,
        alpha=ns.alpha,
        method=ns.method,
        vqd_reps=vqd_reps,
        vqd_opt=_optimizer_choice(ns) if ns.method == "vqd" else None,
        seed=ns.seed,
    )
    out = Path(ns.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "gaps.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write("n,E0,E1,gap,parity\n")
        for row in rows:
            fh.write(
                f"{row.n_spins},{float(row.e0)!r},{float(row.e1)!r},"
                f"{float(row.gap)!r},{row.parity}\n"
            )
    chart = LineChart(f"Spectral gap ({ns.method})", "spins", "E1 - E0")
    for parity in ("even", "odd"):
        points = [(row.n_spins, row.gap) for row in rows if row.parity == parity]
        if points:
            chart.add_series(parity, [p[0] for p in points], [p[1] for p in points],
                             dashed=parity == "odd")
    chart.write(out / "gaps.svg")
    return 0


# -------------------------------------------------------------------- maxcut

MAXCUT_DEFAULTS = {
    "graph": None,
    "random": None,
    "method": "bruteforce",
    "reps": 3,
    "optimizer": "grad",
    "iters": 500,
    "noise": "off",
    "shots": None,
    "seed": 0,
    "out": "runs/maxcut",
}

MAXCUT_CONVERTERS = {
    "graph": str,
    "random": lambda raw: raw.split(),
    "method": _choice(("bruteforce", "vqe", "qaoa")),
    "reps": int,
    "optimizer": _choice(("spsa", "qnspsa", "grad")),
    "iters": int,
    "noise": _choice(("off", "on")),
    "shots": int,
    "seed": int,
    "out": str,
}

BRUTE_FORCE_MAX_NODES = 22


def _load_graph(ns) -> Graph:
    if (ns.graph is None) == (ns.random is None):
        raise CliError("exactly one of --graph or --random is required")
    if ns.graph is not None:
        try:
            text = Path(ns.graph).read_text(encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot read graph file: {exc}")
        try:
            return parse_graph(text)
        except ValueError as exc:
            raise CliError(f"{ns.graph}: {exc}")
    try:
        n_nodes, prob, seed = ns.random
        return random_graph(int(n_nodes), float(prob), seed=int(seed))
    except ValueError as exc:
        raise CliError(f"--random: {exc}")


def cmd_maxcut(ns) -> int:
    graph = _load_graph(ns)
    h = build_maxcut(graph)
    problem = {"name": "maxcut", "n_nodes": graph.n_nodes, "n_edges": len(graph.edges)}
    out = Path(ns.out)

    best_cut = None
    if graph.n_nodes <= BRUTE_FORCE_MAX_NODES:
        value, assignment = brute_force_maxcut(graph)
        best_cut = (float(value), assignment)

    if ns.method == "bruteforce":
        if best_cut is None:
            raise CliError(f"bruteforce covers n <= {BRUTE_FORCE_MAX_NODES} nodes")
        summary = _summary_skeleton(problem, graph.n_nodes)
        summary["cut_value"] = best_cut[0]
        summary["bitstring"] = best_cut[1]
        summary["best_energy"] = -best_cut[0]
        summary["exact_energy"] = -best_cut[0]
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "summary.json", summary)
        return 0

    if ns.reps < 1:
        raise CliError("reps must be >= 1")
    opt = _optimizer_choice(ns)
    sim = SimConfig(ns.shots, _noise_config(ns))
    exact_energy = None if best_cut is None else -best_cut[0]
    if ns.method == "qaoa":
        result = qaoa_run(
            h, ns.reps, opt, sim, ns.seed,
            exact_energy=exact_energy, problem="maxcut", graph=graph,
        )
    else:
        ansatz = build_efficient_su2(graph.n_nodes, ns.reps)
        result = vqe_run(
            h, ansatz, opt, sim, ns.seed, exact_energy=exact_energy, problem="maxcut"
        )
        result.ansatz["family"] = "efficient_su2"
        result.ansatz["reps"] = ns.reps
        state = run_circuit(ansatz, result.best_theta, init_zero(graph.n_nodes))
        top = int(state.probabilities().argmax())
        result.bitstring = index_to_bitstring(top, graph.n_nodes)
        result.cut = cut_value(graph, result.bitstring)
    summary = _summary_from_result(problem, graph.n_nodes, result, opt, sim)
    _write_run_artifacts(out, summary, result.trace)
    return 0


# ----------------------------------------------------------------- benchmark

@dataclasses.dataclass(frozen=True)
class Scenario:
    """A named, fully pinned experiment configuration."""

    description: str
    n_spins: int
    algorithms: tuple[str, ...]
    optimizer: str
    iterations: int
    shots: int | None
    noisy: bool
    su2_reps: int = 5
    qaoa_p: int = 5


SCENARIOS = {
    "noisy-4spin-spsa": Scenario(
        description="4-spin chain, VQE and QAOA under sampling plus depolarizing "
        "noise, SPSA outer loop",
        n_spins=4,
        algorithms=("vqe", "qaoa"),
        optimizer="spsa",
        iterations=800,
        shots=1024,
        noisy=True,
    ),
    "noisy-4spin-qnspsa": Scenario(
        description="4-spin chain, VQE and QAOA under sampling plus depolarizing "
        "noise, QNSPSA outer loop",
        n_spins=4,
        algorithms=("vqe", "qaoa"),
        optimizer="qnspsa",
        iterations=800,
        shots=1024,
        noisy=True,
    ),
    "8spin-qaoa-p16": Scenario(
        description="8-spin chain, noiseless QAOA at depth p=16, deterministic "
        "gradient outer loop",
        n_spins=8,
        algorithms=("qaoa",),
        optimizer="grad",
        iterations=1300,
        shots=None,
        noisy=False,
        qaoa_p=16,
    ),
}

BENCHMARK_DEFAULTS = {"seeds": 5, "out": None}
BENCHMARK_CONVERTERS = {"seeds": int, "out": str}


def _worker_cap() -> int:
    raw = os.environ.get("SPINVAR_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        cap = int(raw)
    except ValueError:
        raise CliError(f"SPINVAR_THREADS must be an integer, got {raw!r}")
    if cap < 1:
        raise CliError("SPINVAR_THREADS must be >= 1")
    return cap


def _benchmark_seed(name: str, out_root: str, seed: int) -> tuple[int, dict]:
    """Run every algorithm of one scenario for one seed; returns summaries."""
    scenario = SCENARIOS[name]
    h = build_mgm(MgmParams(scenario.n_spins))
    problem = {"name": "mgm", "n_spins": scenario.n_spins, "J": 1.0, "alpha": -0.1}
    opt = OptimizerChoice(scenario.optimizer, scenario.iterations)
    sim = SimConfig(scenario.shots, NoiseConfig() if scenario.noisy else None)
    outcomes = {}
    for algo in scenario.algorithms:
        if algo == "vqe":
            ansatz = build_efficient_su2(scenario.n_spins, scenario.su2_reps)
            result = vqe_run(h, ansatz, opt, sim, seed, problem="mgm")
            result.ansatz["family"] = "efficient_su2"
            result.ansatz["reps"] = scenario.su2_reps
        else:
            result = qaoa_run(h, scenario.qaoa_p, opt, sim, seed, problem="mgm")
        summary = _summary_from_result(problem, scenario.n_spins, result, opt, sim)
        _write_run_artifacts(Path(out_root) / f"seed-{seed}" / algo, summary, result.trace)
        outcomes[algo] = {
            "best_energy": summary["best_energy"],
            "exact_energy": summary["exact_energy"],
        }
    return seed, outcomes


def cmd_benchmark(ns) -> int:
    scenario = SCENARIOS.get(ns.scenario)
    if scenario is None:
        raise CliError(
            f"unknown scenario {ns.scenario!r}; available: {', '.join(sorted(SCENARIOS))}"
        )
    if ns.seeds < 1:
        raise CliError("seeds must be >= 1")
    out_root = ns.out if ns.out is not None else f"runs/{ns.scenario}"
    Path(out_root).mkdir(parents=True, exist_ok=True)
    seeds = list(range(ns.seeds))
    runner = partial(_benchmark_seed, ns.scenario, out_root)
    workers = min(_worker_cap(), len(seeds))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            collected = dict(pool.map(runner, seeds))
    else:
        collected = dict(map(runner, seeds))

    algorithms = {}
    for algo in scenario.algorithms:
        best = {str(seed): collected[seed][algo]["best_energy"] for seed in seeds}
        exact = collected[seeds[0]][algo]["exact_energy"]
        entry = {
            "best_energies": best,
            "median_best_energy": statistics.median(best.values()),
            "exact_energy": exact,
        }
        if exact is not None:
            errors = {s: abs(e - exact) for s, e in best.items()}
            entry["abs_errors"] = errors
            entry["median_abs_error"] = statistics.median(errors.values())
        algorithms[algo] = entry
    aggregate = {
        "scenario": ns.scenario,
        "description": scenario.description,
        "seeds": seeds,
        "iterations": scenario.iterations,
        "shots": scenario.shots,
        "noisy": scenario.noisy,
        "algorithms": algorithms,
        "tool_version": __version__,
    }
    _write_json(Path(out_root) / "aggregate.json", aggregate)
    return 0


# -------------------------------------------------------------------- parser

def _add_common(sub: argparse.ArgumentParser, with_noise: bool = True) -> None:
    sub.add_argument("--reps", "-p", type=int, default=argparse.SUPPRESS,
                     help="ansatz repetitions (VQE) or QAOA levels")
    sub.add_argument("--optimizer", choices=("spsa", "qnspsa", "grad"),
                     default=argparse.SUPPRESS)
    sub.add_argument("--iters", type=int, default=argparse.SUPPRESS)
    if with_noise:
        sub.add_argument("--noise", choices=("off", "on"), default=argparse.SUPPRESS)
        sub.add_argument("--shots", type=_positive_int, default=argparse.SUPPRESS)
    sub.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    sub.add_argument("--out", default=argparse.SUPPRESS, help="output directory")
    sub.add_argument("--config", default=argparse.SUPPRESS,
                     help="flat key = value config file; flags override it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinvar",
        description="Variational and exact studies of spin chains and Max-cut.",
    )
    parser.add_argument("--version", action="version", version=f"spinvar {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    ground = commands.add_parser("mgm-ground", help="chain ground-state energy")
    ground.add_argument("--n", type=int, default=argparse.SUPPRESS, help="number of spins")
    ground.add_argument("--alpha", type=float, default=argparse.SUPPRESS)
    ground.add_argument("--J", type=float, default=argparse.SUPPRESS)
    ground.add_argument("--method", choices=("vqe", "qaoa", "exact"),
                        default=argparse.SUPPRESS)
    ground.add_argument("--doubled-energies", action="store_true",
                        default=argparse.SUPPRESS,
                        help="report energies in the doubled convention")
    _add_common(ground)
    ground.set_defaults(func=cmd_mgm_ground, _defaults=MGM_GROUND_DEFAULTS,
                        _converters=MGM_GROUND_CONVERTERS)

    gap = commands.add_parser("mgm-gap", help="scan E1 - E0 over chain sizes")
    gap.add_argument("--n-min", type=int, default=argparse.SUPPRESS)
    gap.add_argument("--n-max", type=int, default=argparse.SUPPRESS)
    gap.add_argument("--method", choices=("exact", "vqd"), default=argparse.SUPPRESS)
    gap.add_argument("--alpha", type=float, default=argparse.SUPPRESS)
    gap.add_argument("--J", type=float, default=argparse.SUPPRESS)
    _add_common(gap, with_noise=False)
    gap.set_defaults(func=cmd_mgm_gap, _defaults=MGM_GAP_DEFAULTS,
                     _converters=MGM_GAP_CONVERTERS)

    maxcut = commands.add_parser("maxcut", help="Max-cut by brute force, VQE, or QAOA")
    maxcut.add_argument("--graph", default=argparse.SUPPRESS,
                        help="edge-list graph file")
    maxcut.add_argument("--random", nargs=3, metavar=("N", "P", "SEED"),
                        default=argparse.SUPPRESS,
                        help="random connected graph: node count, edge probability, seed")
    maxcut.add_argument("--method", choices=("bruteforce", "vqe", "qaoa"),
                        default=argparse.SUPPRESS)
    _add_common(maxcut)
    maxcut.set_defaults(func=cmd_maxcut, _defaults=MAXCUT_DEFAULTS,
                        _converters=MAXCUT_CONVERTERS)

    bench = commands.add_parser("benchmark", help="run a named scenario over seeds")
    bench.add_argument("scenario", help=f"one of: {', '.join(sorted(SCENARIOS))}")
    bench.add_argument("--seeds", type=_positive_int, default=argparse.SUPPRESS,
                       help="number of seeds (0..K-1)")
    bench.add_argument("--out", default=argparse.SUPPRESS)
    bench.add_argument("--config", default=argparse.SUPPRESS)
    bench.set_defaults(func=cmd_benchmark, _defaults=BENCHMARK_DEFAULTS,
                       _converters=BENCHMARK_CONVERTERS)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    namespace = parser.parse_args(argv)
    func = namespace.func
    defaults = namespace._defaults
    converters = namespace._converters
    for key in ("func", "_defaults", "_converters", "command"):
        delattr(namespace, key)
    try:
        merged = _merge(defaults, converters, namespace)
        return func(merged)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
