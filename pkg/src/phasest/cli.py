"""Command-line front end.

Three subcommands: ``simulate`` runs estimation campaigns and writes the CSV
contract, ``fit`` extracts a decay law from such a CSV, ``threshold`` prints
the rescale-safety deviation for a given failure probability.  Errors leave
on stderr as one JSON object and a nonzero exit code.

Configuration may come from flags or a JSON file (flags win where both are
given).  Config schema::

    {
      "strategy": {"selector": "rate-fib", "method": "hybrid",
                   "time_model": "metrology", "k_subset": "all",
                   "zoom_exponent": 13, "zoom_factor": 2, "zoom_enabled": true, "focus_ratio": 1.0,
                   "wide_ctrl": false, "searchup_variant": "printed"},
      "scenario": {"scenario": "dephasing", "eta": 0.995, "p": 0.1,
                   "phi": "random"},
      "noise_model": {"kind": "dephasing", "eta": 0.995},
      "budgets": [64, 256, 1024],
      "trials": 1000,
      "seed": 1,
      "out": "results.csv"
    }

Omitting noise_model derives it from the scenario (noiseless -> constant,
dephasing -> dephasing, bitflip-spont -> flat_error)."""

from __future__ import annotations

import argparse
import json
import sys

from . import harness
from .model import NoiseModel
from .policy import StrategyConfig, contraction_sigma_threshold
from .simqubit import Scenario

_SELECTORS = {
    "rate-fib": ("gain-rate", "fibonacci"),
    "rate-brute": ("gain-rate", "brute-force"),
    "multistep": ("multi-step", "fibonacci"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # machine-readable usage errors
        print(json.dumps({"error": "usage", "message": message}), file=sys.stderr)
        sys.exit(2)


def _build_parser() -> _Parser:
    parser = _Parser(prog="phasest", description="Adaptive phase-estimation simulations")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run an estimation campaign")
    sim.add_argument("--config", help="JSON config file; flags override its entries")
    sim.add_argument("--scenario", choices=["noiseless", "dephasing", "bitflip-spont"])
    sim.add_argument("--method", choices=["sharpness", "entropy", "hybrid"])
    sim.add_argument("--selector", choices=sorted(_SELECTORS))
    sim.add_argument("--time-model", dest="time_model", help="metrology | shots | affine:a,b")
    sim.add_argument("--k-subset", dest="k_subset", choices=["all", "pow2"])
    sim.add_argument("--budget", type=float)
    sim.add_argument("--trials", type=int)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--out", help="CSV output path (stdout when omitted)")
    sim.add_argument("--eta", type=float, help="dephasing parameter of the scenario")
    sim.add_argument("--p", type=float, help="error rate of the bitflip-spont scenario")
    sim.add_argument("--phi", help="true phase in radians, or 'random'")

    fit = sub.add_parser("fit", help="fit a decay law to campaign results")
    fit.add_argument("--model", choices=["power", "exponential"], required=True)
    fit.add_argument("--in", dest="infile", required=True, help="CSV from simulate")
    fit.add_argument("--min-x", dest="min_x", type=float)
    fit.add_argument("--max-x", dest="max_x", type=float)

    thr = sub.add_parser("threshold", help="print the rescale-safety deviation")
    thr.add_argument("--epsilon", type=float, required=True)
    return parser


# -- simulate ---------------------------------------------------------------

_DEFAULTS = {
    "scenario": "noiseless",
    "method": "sharpness",
    "selector": "rate-fib",
    "time_model": "metrology",
    "k_subset": "all",
    "trials": 100,
    "seed": 0,
    "eta": 0.995,
    "p": 0.1,
    "phi": "random",
}


def _load_config(path: str) -> dict:
    with open(path) as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict):
        raise ValueError("config must be a JSON object")
    return obj


def _merged_settings(args) -> dict:
    """Defaults, then config file, then explicit flags."""
    cfg = _load_config(args.config) if args.config else {}
    strategy = dict(cfg.get("strategy", {}))
    scen = dict(cfg.get("scenario", {}))
    out = dict(_DEFAULTS)
    out.update(
        {
            "selector": strategy.get("selector", out["selector"]),
            "method": strategy.get("method", out["method"]),
            "time_model": strategy.get("time_model", out["time_model"]),
            "k_subset": strategy.get("k_subset", out["k_subset"]),
            "zoom_exponent": strategy.get("zoom_exponent", 13),
            "zoom_factor": strategy.get("zoom_factor", 2),
            "zoom_enabled": strategy.get("zoom_enabled", True),
            "focus_ratio": strategy.get("focus_ratio", 1.0),
            "wide_ctrl": strategy.get("wide_ctrl", False),
            "searchup_variant": strategy.get("searchup_variant", "printed"),
            "scenario": scen.get("scenario", out["scenario"]),
            "eta": scen.get("eta", out["eta"]),
            "p": scen.get("p", out["p"]),
            "phi": scen.get("phi", out["phi"]),
            "noise_model": cfg.get("noise_model"),
            "trials": cfg.get("trials", out["trials"]),
            "seed": cfg.get("seed", out["seed"]),
            "out": cfg.get("out"),
        }
    )
    budgets = cfg.get("budgets")
    for name in (
        "scenario",
        "method",
        "selector",
        "time_model",
        "k_subset",
        "trials",
        "seed",
        "eta",
        "p",
        "phi",
        "out",
    ):
        val = getattr(args, name, None)
        if val is not None:
            out[name] = val
    if args.budget is not None:
        budgets = [args.budget]
    if not budgets:
        raise ValueError("no budget given: pass --budget or a budgets list in the config")
    out["budgets"] = [float(b) for b in budgets]
    return out


def _build_scenario(s: dict) -> Scenario:
    phi = s["phi"]
    if phi == "random":
        phi = None
    elif phi is not None:
        phi = float(phi)
    label = s["scenario"]
    if label == "noiseless":
        return Scenario.noiseless(phi)
    if label == "dephasing":
        return Scenario.dephasing(float(s["eta"]), phi)
    return Scenario.bitflip_spont(float(s["p"]), phi)


def _build_model(s: dict) -> NoiseModel:
    spec = s.get("noise_model")
    if spec is None:
        label = s["scenario"]
        if label == "noiseless":
            return NoiseModel.constant(1.0, 1.0)
        if label == "dephasing":
            return NoiseModel.dephasing(float(s["eta"]))
        return NoiseModel.flat_error(float(s["p"]))
    kind = spec.get("kind")
    if kind == "constant":
        return NoiseModel.constant(float(spec.get("sym", 1.0)), float(spec.get("vis", 1.0)))
    if kind == "dephasing":
        return NoiseModel.dephasing(float(spec["eta"]))
    if kind == "flat-error":
        return NoiseModel.flat_error(float(spec["p"]))
    raise ValueError(f"unknown noise model kind {kind!r}")


def _strategy_for(s: dict, budget: float) -> StrategyConfig:
    selector, search = _SELECTORS[s["selector"]]
    return StrategyConfig(
        budget=budget,
        selector=selector,
        method=s["method"],
        search=search,
        duration_model=s["time_model"],
        zoom_exponent=int(s["zoom_exponent"]),
        zoom_factor=int(s["zoom_factor"]),
        zoom_enabled=bool(s["zoom_enabled"]),
        focus_ratio=float(s["focus_ratio"]),
        k_subset=s["k_subset"],
        wide_ctrl=bool(s["wide_ctrl"]),
        searchup_variant=s["searchup_variant"],
    )


def _cmd_simulate(args) -> int:
    s = _merged_settings(args)
    sc = _build_scenario(s)
    model = _build_model(s)
    budgets = sorted(s["budgets"])
    trials = int(s["trials"])
    seed = int(s["seed"])
    if s["time_model"] == "shots" and len(budgets) > 1:
        cfg = _strategy_for(s, budgets[-1])
        rows = harness.run_shot_sweep(cfg, sc, model, trials, seed, budgets)
    else:
        rows = [
            harness.run_batch(_strategy_for(s, b), sc, model, trials, seed) for b in budgets
        ]
    if s["out"]:
        harness.write_csv(s["out"], rows)
    else:
        print(harness.CSV_HEADER)
        for r in rows:
            print(
                f"{r.budget},{r.n_trials},{r.S},{r.S_stderr},{r.delta_phi},"
                f"{r.delta_phi_err},{r.mean_shots},{r.mean_time},{r.failed}"
            )
    return 0


# -- fit and threshold ------------------------------------------------------


def _cmd_fit(args) -> int:
    rows = harness.read_csv(args.infile)
    points = []
    for row in rows:
        x = row["budget"]
        if args.min_x is not None and x < args.min_x:
            continue
        if args.max_x is not None and x > args.max_x:
            continue
        points.append((x, row["delta_phi"]))
    fit = harness.fit_power(points) if args.model == "power" else harness.fit_exponential(points)
    print(
        json.dumps(
            {
                "model": fit.model,
                "amplitude": fit.amplitude,
                "amplitude_err": fit.amplitude_err,
                "decay": fit.decay,
                "decay_err": fit.decay_err,
                "n_points": len(points),
            }
        )
    )
    return 0


def _cmd_threshold(args) -> int:
    print(contraction_sigma_threshold(args.epsilon))
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "fit":
            return _cmd_fit(args)
        return _cmd_threshold(args)
    except Exception as exc:  # contract: JSON error on stderr, nonzero exit
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
