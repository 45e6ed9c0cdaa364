"""Command-line interface: simulate | fit | stabsel | benchmark.

All structured reports are JSON, all tabular/plottable data is CSV, and
every output embeds the configuration and seed needed to re-run it. Output
bytes are reproducible: given the same flags (and thread count aside), the
same files come out. Wall-clock timings are therefore kept out of the
result files and written to a separate ``timings.json``.

Exit codes: 0 success, 2 usage or validation failure, 3 runtime or data
degeneracy (all-censored data, failed censoring calibration, subsample
redraw cap).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .metrics import aggregate_runs
from .simgen import (
    CalibrationError,
    DEFAULT_PILOT_SIZE,
    SimConfig,
    calibrate_censoring,
    generate_aft,
)
from .solvers import (
    DegenerateDesignError,
    PenaltySpec,
    RankDeficiencyError,
    SolverOptions,
    cross_validate,
    enet_fit,
    kkt_residual,
    lambda_grid,
    lasso_fit,
    ridge_fit,
)
from .stability import (
    DegenerateCensoringError,
    SelectionRule,
    default_selection_rule,
    selection_probabilities,
    with_stable_set,
)
from .survival_data import (
    CsvSchema,
    RowValidationError,
    SchemaError,
    csv_covariate_names,
    load_csv,
    order_by_time,
    km_weights,
)
from .swls import DegenerateDataError, recover_intercept, transform

FAMILY_CHOICES = ("lasso", "ridge", "enet")

# The reference tables never state the regularization grids, so the depths
# below were calibrated once against them and are overridable per scenario.
# The stability arm searches deeper than the cross-validated baseline.
# Ridge and elastic-net grids are scaled up: the quadratic penalty spreads
# shrinkage over every coordinate, so their useful ranges sit above the
# all-zero l1 threshold, and under the quadratic term the l1 range that
# still thresholds anything starts higher again for the stability arm.
BENCHMARK_DEFAULTS = {
    "B": 100,
    "threshold": 0.6,
    "grid_count": 25,
    "stability_grid_ratio": 0.04,
    "cv_grid_ratio": 0.09,
    "ridge_grid_scale": 2.5,
    "enet_grid_scale": 3.0,
    "enet_stability_grid_scale": 6.0,
    "tau": 1.0,
    "enet_lambda2_scale": 0.5,
    "cv_folds": 5,
    "beta": 5.0,
    "beta0": 0.0,
    "sigma": 1.0,
    "censoring_scale": "time",
    "pilot_size": DEFAULT_PILOT_SIZE,
}

SCENARIO_OVERRIDES = (
    "grid_count",
    "stability_grid_ratio",
    "cv_grid_ratio",
    "ridge_grid_scale",
    "enet_grid_scale",
    "enet_stability_grid_scale",
    "enet_lambda2_scale",
    "enet_lambda2",
    "beta",
    "beta0",
    "sigma",
    "censoring_scale",
)

# Family defaults for the standalone fit/stabsel commands, matching the
# benchmark arms.
STABILITY_GRID_SCALES = {"lasso": 1.0, "ridge": 2.5, "enet": 6.0}
CV_GRID_SCALES = {"lasso": 1.0, "ridge": 2.5, "enet": 3.0}


def derive_seed(*parts: int) -> int:
    """Deterministically mix seed components into one integer seed."""
    return int(np.random.SeedSequence(list(parts)).generate_state(1, np.uint64)[0])


def _to_jsonable(obj):
    if isinstance(obj, dict):
        return {k: _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    return obj


def write_json(path, payload) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(_to_jsonable(payload), handle, indent=2, sort_keys=True)
        handle.write("\n")


def write_csv(path, header, rows) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(v) for v in row])


def _format_cell(value):
    if isinstance(value, (np.floating, float)):
        return repr(float(value))
    if isinstance(value, (np.integer, np.bool_)):
        return int(value)
    return value


def write_dataset_csv(path, records) -> None:
    """Dataset CSV in the shape ``load_csv`` reads: time,status,x1..xp."""
    p = records[0].p if records else 0
    header = ["time", "status"] + [f"x{j + 1}" for j in range(p)]
    rows = (
        [rec.time, rec.status] + [float(v) for v in rec.covariates] for rec in records
    )
    write_csv(path, header, rows)


def _schema_from_args(args) -> CsvSchema:
    categorical = {}
    for directive in args.categorical or []:
        name, _, levels = directive.partition("=")
        if not levels:
            raise ValueError(
                f"bad --categorical directive {directive!r}; expected col=level1,level2,..."
            )
        categorical[name] = tuple(levels.split(","))
    covariates = tuple(args.covariates.split(",")) if args.covariates else None
    return CsvSchema(
        time_col=args.time_col,
        status_col=args.status_col,
        covariate_cols=covariates,
        categorical=categorical,
    )


def _add_schema_flags(parser) -> None:
    parser.add_argument("--time-col", default="time", help="name of the time column")
    parser.add_argument("--status-col", default="status", help="name of the 0/1 status column")
    parser.add_argument(
        "--covariates",
        default=None,
        help="comma-separated covariate columns (default: every other column)",
    )
    parser.add_argument(
        "--categorical",
        action="append",
        metavar="COL=LEV1,LEV2,...",
        help="encode a column's ordered levels as integer codes; repeatable",
    )


def _add_solver_flags(parser) -> None:
    parser.add_argument("--max-iter", type=int, default=10000, help="coordinate-descent sweep cap")
    parser.add_argument("--tol", type=float, default=1e-7, help="per-sweep convergence tolerance")
    parser.add_argument(
        "--scale-columns",
        action="store_true",
        help="rescale design columns to unit norm inside the solver",
    )


def _add_grid_flags(parser, count: int, ratio: float) -> None:
    parser.add_argument("--grid-count", type=int, default=count, help="regularization grid size")
    parser.add_argument(
        "--grid-ratio",
        type=float,
        default=ratio,
        help="smallest grid value as a fraction of lambda_max",
    )
    parser.add_argument(
        "--grid-scale",
        type=float,
        default=None,
        help="multiply the whole grid (default: per-family calibration)",
    )


def _load_design(args):
    schema = _schema_from_args(args)
    names = csv_covariate_names(args.data, schema)
    records = load_csv(args.data, schema)
    data = order_by_time(records)
    design = transform(data, km_weights(data))
    return names, records, data, design


def _rule_from_args(args, family: str) -> SelectionRule:
    if args.rule is None:
        rule = default_selection_rule(family)
        if rule.kind == "magnitude" and args.tau is not None:
            rule = SelectionRule(kind="magnitude", tau=args.tau)
        return rule
    if args.rule == "magnitude":
        return SelectionRule(kind="magnitude", tau=args.tau if args.tau is not None else 1.0)
    return SelectionRule(kind="nonzero")


# ----------------------------------------------------------------------
# simulate


def cmd_simulate(args) -> int:
    config = SimConfig(
        n=args.n,
        p=args.p,
        q=args.q,
        beta_value=args.beta,
        beta0=args.beta0,
        sigma=args.sigma,
        r=args.r,
        target_censoring=args.censoring,
        seed=args.seed,
        censoring_scale=args.censoring_scale,
    )
    if args.cmax is not None:
        c_max = args.cmax
    elif config.target_censoring == 0:
        c_max = math.inf
    else:
        c_max = calibrate_censoring(config, pilot_size=args.pilot_size)
    dataset = generate_aft(config, seed=args.seed, c_max=c_max)
    write_dataset_csv(args.out, dataset.records)
    manifest_path = args.manifest or str(Path(args.out).with_suffix(".manifest.json"))
    write_json(
        manifest_path,
        {
            "command": "simulate",
            "version": __version__,
            "config": {
                "n": config.n,
                "p": config.p,
                "q": config.q,
                "beta_value": config.beta_value,
                "beta0": config.beta0,
                "sigma": config.sigma,
                "r": config.r,
                "target_censoring": config.target_censoring,
                "seed": config.seed,
                "censoring_scale": config.censoring_scale,
            },
            "pilot_size": args.pilot_size,
            "c_max": c_max,
            "realized_censoring": dataset.realized_censoring,
            "true_support": [int(j) + 1 for j in dataset.true_support],
            "dataset": str(args.out),
        },
    )
    print(f"wrote {args.out} ({config.n} rows, realized censoring "
          f"{dataset.realized_censoring:.3f}) and {manifest_path}")
    return 0


# ----------------------------------------------------------------------
# fit


def _single_fit(design, family, lambda1, lambda2, opts):
    if family == "lasso":
        return lasso_fit(design, lambda1, opts=opts)
    if family == "ridge":
        return ridge_fit(design, lambda2)
    return enet_fit(design, lambda1, lambda2, opts=opts)


def _path_penalty(family: str, lambda2: float) -> PenaltySpec:
    # Along a grid, lambda1 (lambda2 for ridge) is supplied per point.
    if family == "enet":
        return PenaltySpec(family="enet", lambda1=0.0, lambda2=lambda2)
    return PenaltySpec(family=family)


def _resolve_enet_lambda2(explicit, design, scale=0.5) -> float:
    """Fixed l2 strength for elastic net; defaults to a data-relative value.

    The quadratic term competes with the column sums of squares in the
    coordinate update, so the default is a fraction of their mean rather
    than an absolute constant.
    """
    if explicit is not None:
        return float(explicit)
    return scale * float(np.mean(np.einsum("ij,ij->j", design.X, design.X)))


def cmd_fit(args) -> int:
    names, _, _, design = _load_design(args)
    opts = SolverOptions(
        max_iterations=args.max_iter, tolerance=args.tol, unit_scaling=args.scale_columns
    )
    family = args.method
    lambda2 = _resolve_enet_lambda2(args.lambda2, design) if family == "enet" else (args.lambda2 or 0.0)
    cv_info = None
    if args.cv:
        scale = args.grid_scale if args.grid_scale is not None else CV_GRID_SCALES[family]
        grid = scale * lambda_grid(design, count=args.grid_count, ratio=args.grid_ratio)
        selected = cross_validate(
            design, grid, _path_penalty(family, lambda2),
            folds=args.folds, seed=args.cv_seed, opts=opts,
        )
        lambda1 = 0.0 if family == "ridge" else selected
        if family == "ridge":
            lambda2 = selected
        cv_info = {
            "folds": args.folds,
            "seed": args.cv_seed,
            "grid_count": args.grid_count,
            "grid_ratio": args.grid_ratio,
            "grid_scale": scale,
            "selected_lambda": selected,
        }
    else:
        if family in ("lasso", "enet") and args.lambda1 is None:
            raise ValueError(f"--method {family} needs --lambda1 or --cv")
        if family == "ridge" and args.lambda2 is None:
            raise ValueError("--method ridge needs --lambda2 or --cv")
        lambda1 = args.lambda1 or 0.0
    result = _single_fit(design, family, lambda1, lambda2, opts)
    beta = result.coefficients
    penalty = PenaltySpec(
        family=family,
        lambda1=0.0 if family == "ridge" else lambda1,
        lambda2=0.0 if family == "lasso" else lambda2,
    )
    rule = _rule_from_args(args, family)
    selected_mask = np.abs(beta) > 1e-10 if rule.kind == "nonzero" else np.abs(beta) >= rule.tau
    report = {
        "command": "fit",
        "version": __version__,
        "method": family,
        "data": str(args.data),
        "n_effective_rows": design.n_rows,
        "p": design.p,
        "lambda1": penalty.lambda1,
        "lambda2": penalty.lambda2,
        "cv": cv_info,
        "variables": names,
        "coefficients": beta,
        "intercept": recover_intercept(beta, design),
        "converged": result.converged,
        "n_iter": result.n_iter,
        "kkt_residual": kkt_residual(design, beta, penalty),
        "selection_rule": {"kind": rule.kind, "tau": rule.tau},
        "selected_variables": [names[j] for j in np.flatnonzero(selected_mask)],
    }
    if args.out:
        write_json(args.out, report)
        print(f"wrote {args.out}")
    else:
        json.dump(_to_jsonable(report), sys.stdout, indent=2, sort_keys=True)
        print()
    return 0


# ----------------------------------------------------------------------
# stabsel


def cmd_stabsel(args) -> int:
    names, _, data, design = _load_design(args)
    opts = SolverOptions(
        max_iterations=args.max_iter, tolerance=args.tol, unit_scaling=args.scale_columns
    )
    family = args.method
    lambda2 = _resolve_enet_lambda2(args.lambda2, design) if family == "enet" else 0.0
    scale = args.grid_scale if args.grid_scale is not None else STABILITY_GRID_SCALES[family]
    grid = scale * lambda_grid(design, count=args.grid_count, ratio=args.grid_ratio)
    rule = _rule_from_args(args, family)
    result = selection_probabilities(
        data,
        _path_penalty(family, lambda2),
        grid,
        B=args.B,
        seed=args.seed,
        rule=rule,
        opts=opts,
        threads=args.threads or os.cpu_count() or 1,
    )
    result = with_stable_set(result, args.threshold)
    report = {
        "command": "stabsel",
        "version": __version__,
        "method": family,
        "data": str(args.data),
        "B": args.B,
        "seed": args.seed,
        "threshold": args.threshold,
        "grid": result.lambdas,
        "grid_scale": scale,
        "lambda2": lambda2 if family == "enet" else 0.0,
        "selection_rule": {"kind": rule.kind, "tau": rule.tau},
        "variables": names,
        "max_selection_probability": result.max_per_variable,
        "stable_indices": [int(j) + 1 for j in result.stable_variables],
        "stable_variables": [names[j] for j in result.stable_variables],
    }
    json_path = f"{args.out}.report.json"
    csv_path = f"{args.out}.probabilities.csv"
    write_json(json_path, report)
    rows = (
        (names[j], k + 1, result.probabilities[j, k])
        for j in range(result.p)
        for k in range(result.lambdas.size)
    )
    write_csv(csv_path, ["variable", "lambdaIndex", "probability"], rows)
    print(f"wrote {json_path} and {csv_path}; stable set: "
          f"{', '.join(report['stable_variables']) or '(empty)'}")
    return 0


# ----------------------------------------------------------------------
# benchmark


def _benchmark_config(path) -> dict:
    with open(path, encoding="utf-8") as handle:
        raw = json.load(handle)
    config = dict(BENCHMARK_DEFAULTS)
    config.update(raw)
    if "scenarios" not in raw or not raw["scenarios"]:
        raise ValueError("benchmark config needs a nonempty 'scenarios' list")
    if "methods" not in raw or not raw["methods"]:
        raise ValueError("benchmark config needs a nonempty 'methods' list")
    if "seed" not in raw:
        raise ValueError("benchmark config needs a 'seed'")
    if "output_dir" not in raw:
        raise ValueError("benchmark config needs an 'output_dir'")
    for method in config["methods"]:
        if method.get("family") not in FAMILY_CHOICES:
            raise ValueError(f"unknown method family in {method!r}")
        if not isinstance(method.get("stability"), bool):
            raise ValueError(f"method {method!r} needs a boolean 'stability'")
    for scenario in config["scenarios"]:
        for key in ("id", "n", "p", "q", "r", "censoring", "replicates"):
            if key not in scenario:
                raise ValueError(f"scenario {scenario!r} is missing {key!r}")
        if scenario["replicates"] < 1:
            raise ValueError(f"scenario {scenario['id']!r}: replicates must be >= 1")
    return config


def _method_id(method: dict) -> str:
    return f"{method['family']}+stability" if method["stability"] else method["family"]


def _scenario_sim_config(config: dict, scenario: dict, index: int) -> SimConfig:
    return SimConfig(
        n=int(scenario["n"]),
        p=int(scenario["p"]),
        q=int(scenario["q"]),
        beta_value=float(scenario.get("beta", config["beta"])),
        beta0=float(scenario.get("beta0", config["beta0"])),
        sigma=float(scenario.get("sigma", config["sigma"])),
        r=float(scenario["r"]),
        target_censoring=float(scenario["censoring"]),
        seed=derive_seed(config["seed"], index, 0),
        censoring_scale=str(scenario.get("censoring_scale", config["censoring_scale"])),
    )


def _run_method_once(data, design, stab_grid, cv_grid, method, cell, stab_seed, cv_seed, opts):
    """Selected variable indices for one method on one replicate dataset."""
    family = method["family"]
    if family == "ridge":
        scale = float(cell["ridge_grid_scale"])
    elif family == "enet":
        key = "enet_stability_grid_scale" if method["stability"] else "enet_grid_scale"
        scale = float(cell[key])
    else:
        scale = 1.0
    lambda2 = 0.0
    if family == "enet":
        lambda2 = _resolve_enet_lambda2(
            cell.get("enet_lambda2"), design, float(cell["enet_lambda2_scale"])
        )
    rule = default_selection_rule(family)
    if rule.kind == "magnitude":
        rule = SelectionRule(kind="magnitude", tau=float(cell["tau"]))
    penalty = _path_penalty(family, lambda2)
    if method["stability"]:
        result = selection_probabilities(
            data, penalty, scale * stab_grid, B=int(cell["B"]),
            seed=stab_seed, rule=rule, opts=opts,
        )
        return [int(j) for j in np.flatnonzero(result.max_per_variable >= cell["threshold"])]
    selected = cross_validate(
        design, scale * cv_grid, penalty, folds=int(cell["cv_folds"]), seed=cv_seed, opts=opts
    )
    fit = _single_fit(
        design,
        family,
        lambda1=0.0 if family == "ridge" else selected,
        lambda2=selected if family == "ridge" else lambda2,
        opts=opts,
    )
    magnitude = np.abs(fit.coefficients)
    mask = magnitude > 1e-10 if rule.kind == "nonzero" else magnitude >= rule.tau
    return [int(j) for j in np.flatnonzero(mask)]


def cmd_benchmark(args) -> int:
    config = _benchmark_config(args.config)
    out_dir = Path(args.out_dir or config["output_dir"])
    threads = args.threads or os.cpu_count() or 1
    opts = SolverOptions()
    seed = int(config["seed"])
    records = []
    frequency_rows = []
    timings = []

    for s_idx, scenario in enumerate(config["scenarios"]):
        sim_config = _scenario_sim_config(config, scenario, s_idx)
        replicates = int(scenario["replicates"])
        p = sim_config.p
        cell = dict(config)
        cell.update({k: scenario[k] for k in SCENARIO_OVERRIDES if k in scenario})
        scenario_error = None
        try:
            c_max = (
                math.inf
                if sim_config.target_censoring == 0
                else calibrate_censoring(sim_config, pilot_size=int(config["pilot_size"]))
            )
        except CalibrationError as exc:
            scenario_error = f"calibration failed: {exc}"
            c_max = math.nan

        def run_replicate(rep: int):
            outcome = {}
            dataset = generate_aft(sim_config, seed=derive_seed(seed, s_idx, rep, 1), c_max=c_max)
            data = order_by_time(dataset.records)
            design = transform(data, km_weights(data))
            stab_grid = lambda_grid(
                design, count=int(cell["grid_count"]), ratio=float(cell["stability_grid_ratio"])
            )
            cv_grid = lambda_grid(
                design, count=int(cell["grid_count"]), ratio=float(cell["cv_grid_ratio"])
            )
            for m_idx, method in enumerate(config["methods"]):
                start = time.perf_counter()
                try:
                    selected = _run_method_once(
                        data,
                        design,
                        stab_grid,
                        cv_grid,
                        method,
                        cell,
                        stab_seed=derive_seed(seed, s_idx, rep, 2, m_idx),
                        cv_seed=derive_seed(seed, s_idx, rep, 3, m_idx),
                        opts=opts,
                    )
                    outcome[m_idx] = ("ok", selected, time.perf_counter() - start)
                except Exception as exc:  # per-cell failures must not kill the run
                    outcome[m_idx] = ("error", f"{type(exc).__name__}: {exc}",
                                      time.perf_counter() - start)
            return outcome

        if scenario_error is None:
            if threads > 1:
                with ThreadPoolExecutor(max_workers=threads) as pool:
                    outcomes = list(pool.map(run_replicate, range(replicates)))
            else:
                outcomes = [run_replicate(rep) for rep in range(replicates)]
        else:
            outcomes = []

        true_support = list(range(int(scenario["q"])))
        for m_idx, method in enumerate(config["methods"]):
            method_id = _method_id(method)
            base = {
                "scenario": scenario["id"],
                "method": method_id,
                "replicates": replicates,
                "seed": seed,
                "version": __version__,
            }
            cell_time = sum(outcome[m_idx][2] for outcome in outcomes) if outcomes else 0.0
            errors = [o[m_idx][1] for o in outcomes if o[m_idx][0] == "error"]
            if scenario_error is not None or errors:
                message = scenario_error or f"{len(errors)}/{replicates} replicates failed; first: {errors[0]}"
                records.append({**base, "status": "failed", "error": message})
            else:
                try:
                    aggregate = aggregate_runs(
                        [o[m_idx][1] for o in outcomes], true_support, p
                    )
                except ValueError as exc:
                    records.append({**base, "status": "failed", "error": str(exc)})
                    timings.append(
                        {"scenario": scenario["id"], "method": method_id,
                         "wall_time_s": cell_time}
                    )
                    continue
                records.append(
                    {
                        **base,
                        "status": "ok",
                        "mean_false_positive": aggregate.mean_rates.false_positive,
                        "mean_false_negative": aggregate.mean_rates.false_negative,
                        "selection_frequency": aggregate.selection_frequency,
                    }
                )
                for j in range(p):
                    frequency_rows.append(
                        (scenario["id"], method_id, f"x{j + 1}",
                         aggregate.selection_frequency[j])
                    )
            timings.append(
                {"scenario": scenario["id"], "method": method_id, "wall_time_s": cell_time}
            )

    write_json(out_dir / "results.json", {"config": config, "version": __version__, "records": records})
    write_csv(
        out_dir / "results.csv",
        ["scenario", "method", "replicates", "status", "mean_false_positive",
         "mean_false_negative"],
        (
            (
                rec["scenario"],
                rec["method"],
                rec["replicates"],
                rec["status"],
                rec.get("mean_false_positive", ""),
                rec.get("mean_false_negative", ""),
            )
            for rec in records
        ),
    )
    write_csv(
        out_dir / "selection_frequencies.csv",
        ["scenario", "method", "variable", "frequency"],
        frequency_rows,
    )
    write_json(out_dir / "timings.json", {"threads": threads, "cells": timings})
    failed = sum(1 for rec in records if rec["status"] != "ok")
    print(f"wrote {out_dir}/results.json|results.csv|selection_frequencies.csv "
          f"({len(records)} cells, {failed} failed)")
    return 0


# ----------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aftstab",
        description="Penalized AFT survival regression with stability selection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="generate a synthetic censored dataset")
    sim.add_argument("--n", type=int, required=True, help="sample size")
    sim.add_argument("--p", type=int, required=True, help="number of covariates")
    sim.add_argument("--q", type=int, required=True, help="number of true signals")
    sim.add_argument("--beta", type=float, default=5.0, help="signal coefficient value")
    sim.add_argument("--beta0", type=float, default=0.0, help="intercept")
    sim.add_argument("--sigma", type=float, default=1.0, help="noise scale")
    sim.add_argument("--r", type=float, default=0.0, help="pairwise covariate correlation")
    sim.add_argument("--censoring", type=float, default=0.3, help="target censoring rate")
    sim.add_argument(
        "--censoring-scale", choices=("time", "log"), default="time",
        help="scale on which uniform censoring competes",
    )
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--pilot-size", type=int, default=DEFAULT_PILOT_SIZE)
    sim.add_argument("--cmax", type=float, default=None, help="skip calibration, use this bound")
    sim.add_argument("--out", required=True, help="dataset CSV path")
    sim.add_argument("--manifest", default=None, help="manifest JSON path")
    sim.set_defaults(func=cmd_simulate)

    fit = sub.add_parser("fit", help="fit one penalized model to a dataset")
    fit.add_argument("--data", required=True, help="dataset CSV path")
    _add_schema_flags(fit)
    fit.add_argument("--method", choices=FAMILY_CHOICES, required=True)
    fit.add_argument("--lambda1", type=float, default=None, help="l1 strength")
    fit.add_argument("--lambda2", type=float, default=None, help="l2 strength")
    fit.add_argument("--cv", action="store_true", help="pick the penalty by cross-validation")
    fit.add_argument("--folds", type=int, default=5)
    fit.add_argument("--cv-seed", type=int, default=0)
    _add_grid_flags(fit, count=50, ratio=0.01)
    _add_solver_flags(fit)
    fit.add_argument("--rule", choices=("nonzero", "magnitude"), default=None)
    fit.add_argument("--tau", type=float, default=None, help="magnitude-rule cutoff")
    fit.add_argument("--out", default=None, help="report JSON path (default: stdout)")
    fit.set_defaults(func=cmd_fit)

    stab = sub.add_parser("stabsel", help="stability selection over subsamples")
    stab.add_argument("--data", required=True, help="dataset CSV path")
    _add_schema_flags(stab)
    stab.add_argument("--method", choices=FAMILY_CHOICES, required=True)
    stab.add_argument("--B", type=int, default=100, help="number of half-samples")
    stab.add_argument("--threshold", type=float, default=0.6)
    stab.add_argument("--seed", type=int, default=0)
    stab.add_argument("--lambda2", type=float, default=None, help="fixed l2 strength (enet)")
    _add_grid_flags(stab, count=25, ratio=0.04)
    _add_solver_flags(stab)
    stab.add_argument("--rule", choices=("nonzero", "magnitude"), default=None)
    stab.add_argument("--tau", type=float, default=None)
    stab.add_argument("--threads", type=int, default=None,
                      help="worker threads across subsamples (default: CPU count)")
    stab.add_argument("--out", required=True, help="output path prefix")
    stab.set_defaults(func=cmd_stabsel)

    bench = sub.add_parser("benchmark", help="run a scenario grid from a JSON config")
    bench.add_argument("config", help="benchmark config JSON")
    bench.add_argument("--threads", type=int, default=None,
                       help="worker threads across replicates (default: CPU count)")
    bench.add_argument("--out-dir", default=None, help="override the config output_dir")
    bench.set_defaults(func=cmd_benchmark)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        DegenerateDataError,
        DegenerateDesignError,
        RankDeficiencyError,
        DegenerateCensoringError,
        CalibrationError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (SchemaError, RowValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
