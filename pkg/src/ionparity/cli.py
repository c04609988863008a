"""Command-line interface.

Subcommands:
    dynamics    table of (gt, t, ground probability, entropy) on a time grid
    tau-sweep   parity visibility versus fluctuation strength
    eta-sweep   parity visibility versus preparation efficiency, one curve per tau
    validate    run the consistency-check battery and report every result

Exit codes: 0 success, 1 parameter error, 2 validation failure, 3 I/O error.
Flags override an optional JSON config file (--config), which overrides the
built-in defaults; every output embeds the resolved configuration, so a run
is reproducible from its own metadata.  The coupling g is interpreted as an
angular rate in rad/s throughout.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import checks, dynamics, fluctuations, preparation
from .states import PhysicalParams
from .sweep import SweepResult, pool_map, write_result

MODE_FLAGS = {"gamma": "gamma_exact", "gaussian": "gaussian_approx", "mc": "monte_carlo"}

# used when neither --g nor a drive pair (--omega, --eta-ld) is supplied
DEFAULT_G = 1e5

_PHYSICAL = {"g": None, "nu": None, "omega": None, "eta_ld": None}

DEFAULTS: dict[str, dict] = {
    "dynamics": {
        **_PHYSICAL,
        "n": 9,
        "t_max": 10.0,
        "t_steps": 501,
        "format": "csv",
    },
    "tau-sweep": {
        **_PHYSICAL,
        "n": 9,
        "tau_min": 1e-9,
        "tau_max": 1e-7,
        "tau_steps": 41,
        "mode": "gaussian",
        "eta_prep": None,
        "delta": None,
        "mc_samples": 100_000,
        "seed": 0,
        "workers": 4,
        "format": "csv",
    },
    "eta-sweep": {
        **_PHYSICAL,
        "n": 9,
        "tau": [1e-9, 1e-8, 1e-7],
        "eta_min": 0.05,
        "eta_max": 1.0,
        "eta_steps": 20,
        "mode": "gaussian",
        "mc_samples": 100_000,
        "seed": 0,
        "workers": 4,
        "format": "csv",
    },
    "validate": {
        "seed": 0,
        "full": False,
        "omega": 1.0,
        "eta_ld": 0.05,
        "format": "csv",
    },
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ionparity",
        description="Parity-dependent vibronic dynamics: tables, sweeps and checks.",
    )
    sub = parser.add_subparsers(dest="command")

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON file with defaults for this subcommand")
        p.add_argument("--out", help="output path (stdout when omitted)")
        p.add_argument("--format", choices=["csv", "json"], help="output format")

    def add_physical(p: argparse.ArgumentParser) -> None:
        p.add_argument("--g", type=float, help="coupling rate in rad/s; derived from "
                       "--omega and --eta-ld when omitted")
        p.add_argument("--nu", type=float, help="trap frequency in rad/s (metadata only here)")
        p.add_argument("--omega", type=float, help="drive Rabi frequency in rad/s")
        p.add_argument("--eta-ld", type=float, dest="eta_ld", help="Lamb-Dicke parameter")

    p_dyn = sub.add_parser("dynamics", help="ground probability and entropy on a time grid")
    p_dyn.add_argument("--n", type=int, help="total initial vibrational quanta")
    add_physical(p_dyn)
    p_dyn.add_argument("--t-max", type=float, dest="t_max", help="grid end in units of g*t")
    p_dyn.add_argument("--t-steps", type=int, dest="t_steps", help="number of grid points")
    add_common(p_dyn)

    p_tau = sub.add_parser("tau-sweep", help="parity visibility vs fluctuation strength")
    p_tau.add_argument("--n", type=int, help="odd total quanta, compared against n+1")
    add_physical(p_tau)
    p_tau.add_argument("--tau-min", type=float, dest="tau_min", help="grid start, seconds")
    p_tau.add_argument("--tau-max", type=float, dest="tau_max", help="grid end, seconds")
    p_tau.add_argument("--tau-steps", type=int, dest="tau_steps", help="log-grid points")
    p_tau.add_argument("--mode", choices=sorted(MODE_FLAGS), help="averaging kernel")
    p_tau.add_argument("--eta-prep", type=float, dest="eta_prep",
                       help="preparation efficiency in (0,1]; default exact")
    p_tau.add_argument("--delta", type=float, help="preparation width (alternative to --eta-prep)")
    p_tau.add_argument("--mc-samples", type=int, dest="mc_samples", help="draws per Monte-Carlo point")
    p_tau.add_argument("--seed", type=int, help="base seed for Monte-Carlo mode")
    p_tau.add_argument("--workers", type=int, help="sweep worker threads")
    add_common(p_tau)

    p_eta = sub.add_parser("eta-sweep", help="parity visibility vs preparation efficiency")
    p_eta.add_argument("--n", type=int, help="odd total quanta, compared against n+1")
    add_physical(p_eta)
    p_eta.add_argument("--tau", type=float, nargs="+", help="fluctuation strengths, one curve each")
    p_eta.add_argument("--eta-min", type=float, dest="eta_min", help="grid start in (0,1]")
    p_eta.add_argument("--eta-max", type=float, dest="eta_max", help="grid end in (0,1]")
    p_eta.add_argument("--eta-steps", type=int, dest="eta_steps", help="grid points")
    p_eta.add_argument("--mode", choices=sorted(MODE_FLAGS), help="averaging kernel")
    p_eta.add_argument("--mc-samples", type=int, dest="mc_samples", help="draws per Monte-Carlo point")
    p_eta.add_argument("--seed", type=int, help="base seed for Monte-Carlo mode")
    p_eta.add_argument("--workers", type=int, help="sweep worker threads")
    add_common(p_eta)

    p_val = sub.add_parser("validate", help="run the consistency-check battery")
    p_val.add_argument("--seed", type=int, help="seed for randomized checks")
    p_val.add_argument("--full", action="store_const", const=True,
                       help="include the slow high-ratio drive comparison")
    p_val.add_argument("--omega", type=float, help="drive Rabi frequency for the RWA suite")
    p_val.add_argument("--eta-ld", type=float, dest="eta_ld",
                       help="Lamb-Dicke parameter for the RWA suite")
    add_common(p_val)

    return parser


def _resolve_config(args: argparse.Namespace, command: str) -> dict:
    resolved = dict(DEFAULTS[command])
    config_path = getattr(args, "config", None)
    if config_path is not None:
        with open(config_path, "r", encoding="utf-8") as fh:
            try:
                file_config = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValueError(f"config file {config_path}: {exc}") from exc
        if not isinstance(file_config, dict):
            raise ValueError(f"config file {config_path} must hold a JSON object")
        unknown = set(file_config) - set(resolved) - {"out"}
        if unknown:
            raise ValueError(
                f"config file {config_path} has unknown keys for {command}: {sorted(unknown)}"
            )
        resolved.update(file_config)
    for key in list(resolved) + ["out"]:
        value = getattr(args, key, None)
        if value is not None:
            resolved[key] = value
    resolved.setdefault("out", None)
    return resolved


def _validate_positive(config: dict, *keys: str) -> None:
    for key in keys:
        if not config[key] > 0:
            raise ValueError(f"{key} must be positive, got {config[key]}")


def _echo_config(config: dict, command: str) -> dict:
    # the output location does not affect the computed content
    echo = {k: v for k, v in config.items() if k not in ("out",)}
    echo["command"] = command
    return echo


def _point_seeds(base_seed: int, count: int) -> list[int]:
    state = np.random.SeedSequence(base_seed).generate_state(count, dtype=np.uint64)
    return [int(word) for word in state]


def _resolve_coupling(config: dict) -> None:
    """Fill config['g'], deriving it from the drive when possible.

    Constructing PhysicalParams enforces positivity and, when g, omega and
    eta_ld are all present, the consistency rule relating them.
    """
    params = PhysicalParams(
        g=config["g"], nu=config["nu"], omega=config["omega"], eta_ld=config["eta_ld"]
    )
    if config["g"] is None:
        if config["omega"] is not None and config["eta_ld"] is not None:
            derived = params.effective_coupling()
            if derived <= 0.0:
                raise ValueError(
                    "derived coupling is zero; give --g or a positive --omega/--eta-ld pair"
                )
            config["g"] = derived
        else:
            config["g"] = DEFAULT_G


def cmd_dynamics(config: dict) -> SweepResult:
    _resolve_coupling(config)
    n, g = config["n"], config["g"]
    if n < 0 or n != int(n):
        raise ValueError(f"n must be a non-negative integer, got {n}")
    _validate_positive(config, "g", "t_steps")
    if config["t_max"] < 0:
        raise ValueError("t-max must be non-negative")
    gts = np.linspace(0.0, config["t_max"], config["t_steps"])
    times = gts / g
    probabilities = np.atleast_1d(dynamics.ground_probability(int(n), g, times))
    entropies = np.atleast_1d(dynamics.binary_entropy(probabilities))
    rows = [
        (float(gt), float(t), float(p), float(s))
        for gt, t, p, s in zip(gts, times, probabilities, entropies)
    ]
    return SweepResult(
        columns=("gt", "t_seconds", "p_ground", "entropy"),
        rows=rows,
        config=_echo_config(config, "dynamics"),
    )


def _sweep_model(config: dict, tau: float, seed: int) -> fluctuations.FluctuationModel:
    return fluctuations.FluctuationModel(
        g_mean=config["g"],
        tau=tau,
        mode=MODE_FLAGS[config["mode"]],
        mc_samples=config["mc_samples"],
        seed=seed,
    )


def _preparation_delta(config: dict) -> float | None:
    if config["eta_prep"] is not None and config["delta"] is not None:
        raise ValueError("give either --eta-prep or --delta, not both")
    if config["delta"] is not None:
        if config["delta"] <= 0:
            raise ValueError("delta must be positive")
        return config["delta"]
    if config["eta_prep"] is not None:
        eta = config["eta_prep"]
        if eta == 1.0:
            return None
        return preparation.delta_from_efficiency(eta)
    return None


def cmd_tau_sweep(config: dict) -> SweepResult:
    _resolve_coupling(config)
    n = config["n"]
    if n % 2 == 0 or n < 3:
        raise ValueError(f"n must be odd and >= 3 for a parity sweep, got {n}")
    _validate_positive(config, "g", "tau_min", "tau_max", "tau_steps", "mc_samples")
    if config["tau_max"] < config["tau_min"]:
        raise ValueError("tau-max must be at least tau-min")
    if config["mode"] not in MODE_FLAGS:
        raise ValueError(f"mode must be one of {sorted(MODE_FLAGS)}")
    delta = _preparation_delta(config)
    t_compare = dynamics.parity_times(n, config["g"]).comparison_time
    taus = np.logspace(
        np.log10(config["tau_min"]), np.log10(config["tau_max"]), config["tau_steps"]
    )
    seeds = _point_seeds(config["seed"], len(taus))

    def evaluate(index: int) -> tuple:
        tau = float(taus[index])
        model = _sweep_model(config, tau, seeds[index])
        if delta is None:
            upper = fluctuations.averaged_ground_probability(n, model, t_compare)
            lower = fluctuations.averaged_ground_probability(n + 1, model, t_compare)
        else:
            upper = preparation.averaged_ground_probability_mixed(
                preparation.PreparationModel(n, delta), model, t_compare
            )
            lower = preparation.averaged_ground_probability_mixed(
                preparation.PreparationModel(n + 1, delta), model, t_compare
            )
        return (tau, upper - lower, upper, lower)

    rows = pool_map(evaluate, range(len(taus)), config["workers"])
    return SweepResult(
        columns=("tau_seconds", "delta_p", "p_odd", "p_even"),
        rows=rows,
        config=_echo_config(config, "tau-sweep"),
    )


def cmd_eta_sweep(config: dict) -> SweepResult:
    _resolve_coupling(config)
    n = config["n"]
    if n % 2 == 0 or n < 3:
        raise ValueError(f"n must be odd and >= 3 for a parity sweep, got {n}")
    _validate_positive(config, "g", "eta_steps", "mc_samples")
    taus = [float(tau) for tau in config["tau"]]
    if not taus or any(tau <= 0 for tau in taus):
        raise ValueError("every tau must be positive")
    if not (0.0 < config["eta_min"] <= config["eta_max"] <= 1.0):
        raise ValueError("eta grid must satisfy 0 < eta-min <= eta-max <= 1")
    if config["mode"] not in MODE_FLAGS:
        raise ValueError(f"mode must be one of {sorted(MODE_FLAGS)}")
    t_compare = dynamics.parity_times(n, config["g"]).comparison_time
    etas = np.linspace(config["eta_min"], config["eta_max"], config["eta_steps"])
    points = [(tau, float(eta)) for tau in taus for eta in etas]
    seeds = _point_seeds(config["seed"], len(points))

    def evaluate(index: int) -> tuple:
        tau, eta = points[index]
        model = _sweep_model(config, tau, seeds[index])
        delta = None if eta >= 1.0 else preparation.delta_from_efficiency(eta)
        value = preparation.parity_delta_mixed(n, delta, model, t_compare)
        return (tau, eta, value)

    rows = pool_map(evaluate, range(len(points)), config["workers"])
    return SweepResult(
        columns=("tau_seconds", "eta_prep", "delta_p"),
        rows=rows,
        config=_echo_config(config, "eta-sweep"),
    )


def cmd_validate(config: dict) -> tuple[SweepResult, bool]:
    results = checks.run_all(
        seed=config["seed"],
        full=bool(config["full"]),
        drive_omega=config["omega"],
        drive_eta_ld=config["eta_ld"],
    )
    rows = [(r.name, r.measured, r.bound, r.passed) for r in results]
    table = SweepResult(
        columns=("check", "measured", "bound", "passed"),
        rows=rows,
        config=_echo_config(config, "validate"),
    )
    return table, all(r.passed for r in results)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    if args.command is None:
        parser.print_help()
        return 1
    try:
        config = _resolve_config(args, args.command)
        if args.command == "dynamics":
            result = cmd_dynamics(config)
            ok = True
        elif args.command == "tau-sweep":
            result = cmd_tau_sweep(config)
            ok = True
        elif args.command == "eta-sweep":
            result = cmd_eta_sweep(config)
            ok = True
        else:
            result, ok = cmd_validate(config)
        write_result(result, config["out"], config["format"])
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    if not ok:
        print("validation failed; see report", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
