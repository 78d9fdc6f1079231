"""Command-line front end.

Exit codes: 0 success, 2 usage or input error, 3 numeric error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .baselines import default_pooling_budget, equilibrium_check, exhaustive_optimum, spectrum_pooling
from .coordination import delta_mcsc, delta_ocsc, outcome_from_assignment, random_coordination
from .errors import (
    ChannelFileError,
    ConvergenceError,
    DimensionError,
    DomainError,
    NoUsableCarrierError,
    UnsupportedOrderError,
)
from .game import EfficiencyModel, GameConfig, compute_utilities, first_order_residual, noise_variance_from_snr_db
from .io import read_channel_file, write_table
from .montecarlo import ALGORITHMS, FADING_MODELS, ScenarioSpec, aggregate, run_scenario, sweep

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def _algorithm_list(text: str) -> tuple[str, ...]:
    names = tuple(a.strip() for a in text.split(",") if a.strip())
    bad = [a for a in names if a not in ALGORITHMS]
    if bad or not names:
        raise argparse.ArgumentTypeError(f"algorithms must be a comma list drawn from {', '.join(ALGORITHMS)}")
    return names


def _value_list(text: str) -> list[str]:
    """``"2,4,8"`` or an inclusive range ``"start:stop[:step]"``."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise argparse.ArgumentTypeError(f"bad range {text!r}")
        start, stop = float(parts[0]), float(parts[1])
        step = float(parts[2]) if len(parts) == 3 else 1.0
        if step <= 0:
            raise argparse.ArgumentTypeError("range step must be positive")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [repr(start + i * step) for i in range(max(count, 0))]
    return [v.strip() for v in text.split(",") if v.strip()]


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--order", type=int, default=100, help="block length M of the efficiency function (default 100)")
    parser.add_argument("--delta", type=float, default=1e-3, help="quality-level bisection tolerance (default 1e-3)")
    parser.add_argument("--rate", type=float, default=1e6, help="rate of every user in bits/s (default 1e6)")
    parser.add_argument("--snr-db", type=float, default=10.0, help="SNR = 1/sigma^2 in dB (default 10)")
    parser.add_argument("--early-stop", action="store_true", help="stop the ordering search once alpha exceeds 1/(1+gamma*)")
    parser.add_argument("--seed", type=int, default=0)


def _add_scenario_flags(parser: argparse.ArgumentParser) -> None:
    _add_model_flags(parser)
    parser.add_argument("--carriers", type=int, default=None, help="number of carriers K (default K = N)")
    parser.add_argument("--trials", type=int, default=10000)
    parser.add_argument("--algorithms", type=_algorithm_list, default=("ocsc", "mcsc", "random", "pooling"))
    parser.add_argument("--fading", choices=FADING_MODELS, default="rayleigh")
    parser.add_argument("--pooling-budget", type=float, default=None, help="per-user power budget of spectrum pooling (default gamma* sigma^2)")
    parser.add_argument("--workers", type=int, default=1, help="worker processes for the trials")
    parser.add_argument("--output", "-o", required=True, help="output file (.csv or .json)")
    parser.add_argument("--format", choices=("csv", "json"), default=None, help="override the format implied by the extension")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hiercoord", description="Hierarchical multi-carrier energy-efficient power control.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gamma-star", help="print the operating SINR gamma* for an efficiency order")
    p.add_argument("--order", "-M", type=int, default=100)

    p = sub.add_parser("solve", help="run the algorithms on one channel matrix file")
    p.add_argument("channel_file")
    _add_model_flags(p)
    p.add_argument("--algorithms", type=_algorithm_list, default=("ocsc", "mcsc", "random", "exhaustive"))
    p.add_argument("--pooling-budget", type=float, default=None)
    p.add_argument("--json", action="store_true", help="print the report as JSON")

    p = sub.add_parser("run", help="Monte Carlo run of one scenario")
    p.add_argument("--players", "-N", type=int, required=True)
    _add_scenario_flags(p)

    p = sub.add_parser("sweep", help="Monte Carlo sweep over users or SNR")
    p.add_argument("--axis", choices=("users", "snr"), required=True)
    p.add_argument("--values", type=_value_list, required=True, help="comma list or inclusive start:stop[:step]; write --values=-10,0,10 when the first value is negative")
    p.add_argument("--players", "-N", type=int, default=5, help="number of users on the snr axis (default 5)")
    _add_scenario_flags(p)
    return parser


def cmd_gamma_star(args, out) -> int:
    model = EfficiencyModel(args.order)
    g = model.gamma_star
    print(f"order            {args.order}", file=out)
    print(f"gamma_star       {g:.12g}", file=out)
    print(f"gamma_star_db    {10 * math.log10(g):.12g}", file=out)
    print(f"threshold        {model.equilibrium_threshold:.12g}", file=out)
    print(f"residual         {first_order_residual(args.order, g):.3e}", file=out)
    return EXIT_OK


def _outcome_record(config, channels, outcome, model, alpha_trace=None) -> dict:
    utilities = compute_utilities(config, channels, outcome.allocation, model)
    report = equilibrium_check(config, channels, outcome, model)
    record = {
        "algorithm": outcome.algorithm,
        "alpha_star": None if math.isnan(outcome.alpha_star) else outcome.alpha_star,
        "ordering": list(outcome.ordering),
        "assignment": list(outcome.assignment),
        "powers": [float(outcome.allocation.powers[n, k]) for n, k in enumerate(outcome.assignment)],
        "per_player_utility": utilities.utilities.tolist(),
        "equilibrium": {
            "is_exact": report.is_exact,
            "epsilon": report.epsilon,
            "per_player_slack": report.per_player_slack.tolist(),
            "worst_player": report.worst_player,
        },
    }
    if alpha_trace is not None:
        record["alpha_trace"] = list(alpha_trace)
    return record


def cmd_solve(args, out) -> int:
    channels = read_channel_file(args.channel_file)
    n, k = channels.shape
    config = GameConfig(
        n_players=n,
        n_carriers=k,
        noise_variance=noise_variance_from_snr_db(args.snr_db),
        rates=(args.rate,) * n,
        efficiency_order=args.order,
        delta=args.delta,
    )
    model = EfficiencyModel(args.order)
    records = []
    for name in args.algorithms:
        if name == "ocsc":
            records.append(_outcome_record(config, channels, delta_ocsc(config, channels, model, early_stop=args.early_stop), model))
        elif name == "mcsc":
            outcome, trace = delta_mcsc(config, channels, model, early_stop=args.early_stop)
            records.append(_outcome_record(config, channels, outcome, model, trace))
        elif name == "random":
            records.append(_outcome_record(config, channels, random_coordination(config, channels, model, args.seed), model))
        elif name == "exhaustive":
            optimum = exhaustive_optimum(config, channels, model)
            outcome = outcome_from_assignment(config, channels, optimum.best_assignment, model, "exhaustive")
            records.append(_outcome_record(config, channels, outcome, model))
        elif name == "pooling":
            budget = args.pooling_budget or default_pooling_budget(config, model)
            allocation, rates = spectrum_pooling(config, channels, budget)
            utilities = compute_utilities(config, channels, allocation, model)
            records.append({
                "algorithm": "pooling",
                "powers": allocation.powers.tolist(),
                "spectral_efficiency": rates.tolist(),
                "per_player_utility": utilities.utilities.tolist(),
            })
    report = {
        "n_players": n,
        "n_carriers": k,
        "noise_variance": config.noise_variance,
        "gamma_star": model.gamma_star,
        "results": records,
    }
    if args.json:
        json.dump(report, out, indent=2)
        out.write("\n")
        return EXIT_OK
    print(f"N={n} K={k} sigma^2={config.noise_variance:.6g} gamma*={model.gamma_star:.6g}", file=out)
    for rec in records:
        print(f"\n[{rec['algorithm']}]", file=out)
        for key, value in rec.items():
            if key == "algorithm":
                continue
            if key == "equilibrium":
                print(f"  exact_equilibrium  {value['is_exact']}", file=out)
                print(f"  epsilon            {value['epsilon']:.6g}", file=out)
                continue
            print(f"  {key:<18} {_short(value)}", file=out)
    return EXIT_OK


def _short(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, list):
        return "[" + ", ".join(_short(v) for v in value) + "]"
    return str(value)


def _spec_from_args(args, n_players: int) -> ScenarioSpec:
    return ScenarioSpec(
        n_players=n_players,
        n_carriers=args.carriers,
        snr_db=args.snr_db,
        trials=args.trials,
        seed=args.seed,
        algorithms=args.algorithms,
        efficiency_order=args.order,
        delta=args.delta,
        rate=args.rate,
        fading=args.fading,
        pooling_budget=args.pooling_budget,
        early_stop=args.early_stop,
    )


def _output_format(args) -> str:
    if args.format:
        return args.format
    return "json" if Path(args.output).suffix.lower() == ".json" else "csv"


def _manifest(args, spec: ScenarioSpec, fmt: str, **extra) -> dict:
    manifest = {
        "command": args.command,
        "version": __version__,
        "output": str(args.output),
        "format": fmt,
        "spec": spec.as_dict(),
    }
    manifest.update(extra)
    return manifest


def cmd_run(args, out) -> int:
    spec = _spec_from_args(args, args.players)
    fmt = _output_format(args)
    threshold = EfficiencyModel(spec.efficiency_order).equilibrium_threshold
    trials = run_scenario(spec, workers=args.workers)
    rows = aggregate(trials, spec.algorithms, threshold, axis_value=spec.n_players)
    write_table(args.output, rows, _manifest(args, spec, fmt, axis="users"), fmt)
    print(f"wrote {len(rows)} rows to {args.output}", file=out)
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    if args.axis == "users":
        values = [int(float(v)) for v in args.values]
    else:
        values = [float(v) for v in args.values]
    if not values:
        raise DomainError("--values is empty")
    first = values[0] if args.axis == "users" else args.players
    spec = _spec_from_args(args, first)
    fmt = _output_format(args)
    rows = sweep(spec, args.axis, values, workers=args.workers)
    write_table(args.output, rows, _manifest(args, spec, fmt, axis=args.axis, values=values), fmt)
    print(f"wrote {len(rows)} rows to {args.output}", file=out)
    return EXIT_OK


COMMANDS = {"gamma-star": cmd_gamma_star, "solve": cmd_solve, "run": cmd_run, "sweep": cmd_sweep}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except (ChannelFileError, DimensionError, DomainError, UnsupportedOrderError) as exc:
        print(f"hiercoord: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, NoUsableCarrierError, ArithmeticError) as exc:
        print(f"hiercoord: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"hiercoord: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
