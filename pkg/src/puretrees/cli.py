"""Command line interface: ``puretrees {simulate,fit,predict,tune,bench}``.

Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

Grower parameters come from ``--config FILE`` (``key = value`` lines) and
``--param KEY=VALUE`` flags, flags taking precedence.  Without either,
``simulate`` uses the tuned setting for the chosen model when one exists.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .baselines import BASELINES
from .config import CONFIG_TYPES, build_config, normalise_key, parse_value, read_config_file
from .core import ConfigError
from .dataio import DataError, TabularSchema, load_table, write_predictions
from .ensemble import ForestFormatError, fit_forest, load_forest, save_forest
from .simbench import suites
from .simbench.evaluate import run_monte_carlo
from .simbench.models import MODELS, get_model
from .simbench.tuning import TuningSpace, cv_tune, opt_tune

log = logging.getLogger("puretrees")

FOREST_CHOICES = ("rf", "et", "intf", "rsrf", "rsrf_af")


class UsageError(Exception):
    pass


def _param_flags(items) -> dict:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise UsageError(f"--param expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        out[normalise_key(key)] = parse_value(value)
    return out


def _user_params(args) -> tuple:
    """``(algorithm named in the file or None, merged file+flag parameters)``."""
    params = read_config_file(args.config) if args.config else {}
    algo = params.pop("algo", None) or params.pop("algorithm", None)
    params.update(_param_flags(args.param))
    return algo, params


def _algo_list(text: str) -> list:
    algos = [a.strip().lower() for a in text.split(",") if a.strip()]
    valid = set(FOREST_CHOICES) | set(BASELINES) | {"all"}
    for a in algos:
        if a not in valid:
            raise ConfigError("algo", f"unknown algorithm {a!r}")
    return algos


def _simulation_specs(args, model, d) -> tuple:
    file_algo, params = _user_params(args)
    algos = _algo_list(args.algo or file_algo or "all")
    if params:
        if len(algos) != 1 or algos[0] not in FOREST_CHOICES:
            raise UsageError("--config/--param need exactly one forest algorithm")
        return algos, [build_config(algos[0], params)]
    labels, specs = [], []
    for a in algos:
        names = list(suites.ALL_ALGOS) if a == "all" else [a]
        for name in names:
            if name in BASELINES:
                specs.append(name)
            elif (model.name, d) in suites._OPT:
                specs.append(suites.opt_config(model.name, name, d))
            else:
                specs.append(build_config(name, {}))
            labels.append(name)
    return labels, specs


def _out_prefix(args, default: str) -> Path:
    return Path(args.out) if args.out else Path(default)


def _print_rows(report) -> None:
    for row in report.rows:
        print(f"{row.label:>12s}  mse {row.mean_mse:.4f} ({row.sd_mse:.4f})  mse_y {row.mean_mse_y:.4f}")


# ---------------------------------------------------------------------------
# subcommands


def _model_and_d(args):
    try:
        model = get_model(args.model)
    except KeyError as exc:
        raise ConfigError("model", str(exc.args[0])) from None
    try:
        return model, model.check_d(args.d)
    except ValueError as exc:
        raise ConfigError("d", str(exc)) from None


def cmd_simulate(args) -> int:
    model, d = _model_and_d(args)
    labels, specs = _simulation_specs(args, model, d)
    report = run_monte_carlo(model, specs, args.n_train, args.n_test, args.reps, args.seed, d=d,
                             threads=args.threads, labels=labels, log=log.info)
    report.metadata["command"] = "simulate"
    paths = report.write(_out_prefix(args, f"simulate_{model.name}"))
    _print_rows(report)
    print("wrote " + ", ".join(map(str, paths)))
    return 0


def _schema(args) -> TabularSchema:
    if args.schema:
        return TabularSchema.from_file(args.schema)
    if args.target:
        return TabularSchema(args.target)
    raise UsageError("give --schema or --target")


def cmd_fit(args) -> int:
    file_algo, params = _user_params(args)
    algo = (args.algo or file_algo or "").lower()
    if algo not in FOREST_CHOICES:
        raise ConfigError("algo", f"fit needs one of {', '.join(FOREST_CHOICES)}")
    if args.num_trees is not None:
        params["num_trees"] = args.num_trees
    cfg = build_config(algo, params)
    schema = _schema(args)
    table = load_table(args.data, schema)
    forest = fit_forest(table.dataset, cfg, args.seed, threads=args.threads)
    forest.metadata.update(schema={"target": schema.target, "categorical": list(schema.categorical),
                                   "columns": list(schema.columns) if schema.columns else None,
                                   "response_scale": schema.response_scale,
                                   "response_shift": schema.response_shift},
                           feature_names=table.feature_names, levels=table.levels)
    out = _out_prefix(args, "forest.json")
    save_forest(forest, out)
    print(f"wrote {out} ({len(forest.trees)} trees, d={forest.n_features})")
    return 0


def cmd_predict(args) -> int:
    forest = load_forest(args.forest)
    meta = forest.metadata.get("schema")
    if args.schema or args.target:
        schema = _schema(args)
    elif meta:
        schema = TabularSchema(meta["target"], tuple(meta["categorical"]),
                               tuple(meta["columns"]) if meta["columns"] else None)
    else:
        raise UsageError("forest carries no schema; give --schema or --target")
    table = load_table(args.data, schema, require_target=False, levels=forest.metadata.get("levels"))
    names = forest.metadata.get("feature_names")
    if names and table.feature_names != names:
        raise DataError(f"columns {table.feature_names} do not match the fitted features {names}")
    pred = forest.predict(table.dataset.features)
    out = _out_prefix(args, "predictions.csv")
    write_predictions(out, pred)
    print(f"wrote {out} ({len(pred)} rows)")
    return 0


def _space_from_file(algo: str, path) -> TuningSpace:
    """Search space file: ``key = v1, v2, ...`` (single values are fixed)."""
    choices, fixed = {}, {}
    text = Path(path).read_text(encoding="utf-8")
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("space", f"cannot parse line {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = normalise_key(key)
        values = [parse_value(v) for v in value.split(",")]
        if len(values) == 1:
            fixed[key] = values[0]
        else:
            choices[key] = tuple(values)
    build_config(algo, {**fixed, **{k: v[0] for k, v in choices.items()}})  # key check
    return TuningSpace(algo, choices, fixed)


def cmd_tune(args) -> int:
    algo = args.algo.lower()
    if algo not in CONFIG_TYPES:
        raise ConfigError("algo", f"tune needs one of {', '.join(CONFIG_TYPES)}")
    if args.mode == "cv":
        if not args.data:
            raise UsageError("cv tuning needs --data")
        data = load_table(args.data, _schema(args)).dataset
        d = data.d
    else:
        model, d = _model_and_d(args)
    if args.space:
        space = _space_from_file(algo, args.space)
    elif args.config or args.param:
        _, params = _user_params(args)
        space = TuningSpace.single(build_config(algo, params).validate(d))
    else:
        space = TuningSpace.simulation(algo, d)
    if args.mode == "cv":
        result = cv_tune(data, space, args.combos, args.folds, args.seed, args.threads)
    else:
        result = opt_tune(model, space, args.combos, args.sims, args.seed, d=d, threads=args.threads)
    best = result.best.validate(d)
    lines = [f"algo = {best.algorithm}"] + [f"{k} = {str(v).lower() if isinstance(v, bool) else v}"
                                             for k, v in best.to_dict().items() if k != "algorithm" and v is not None]
    text = "\n".join(lines) + "\n"
    print(text, end="")
    prefix = _out_prefix(args, f"tune_{algo}")
    prefix.parent.mkdir(parents=True, exist_ok=True)
    prefix.with_suffix(".cfg").write_text(text, encoding="utf-8")
    prefix.with_suffix(".json").write_text(json.dumps(
        {"mode": args.mode, "seed": args.seed, "best": best.to_dict(),
         "scores": [{"config": c.to_dict(), "score": s} for c, s in zip(result.configs, result.scores)]},
        indent=2, sort_keys=True), encoding="utf-8")
    return 0


def cmd_bench(args) -> int:
    prefix = _out_prefix(args, f"bench_{args.suite}")
    if args.suite == "blindness":
        report = suites.suite_blindness(args.reps, args.seed, log=log.info)
        paths = report.write(prefix)
        bad = sum(1 for r in report.rows if r["root_coordinate"] in (0, 1))
        print(f"root split on an interacting coordinate in {bad} of {len(report.rows)} trials")
    elif args.suite == "table3":
        models = args.models.split(",") if args.models else None
        dims = [int(v) for v in args.dims.split(",")] if args.dims else None
        paths = []
        for report in suites.suite_table3(args.reps, args.seed, models, dims, args.threads, log=log.info):
            report.metadata["command"] = "bench table3"
            paths += report.write(prefix.parent / f"{prefix.name}_{report.model}_d{report.d}")
            print(f"[{report.model} d={report.d}]")
            _print_rows(report)
    else:
        fn = suites.SUITES[args.suite]
        report = fn(reps=args.reps, seed=args.seed, threads=args.threads, log=log.info)
        report.metadata["command"] = f"bench {args.suite}"
        paths = report.write(prefix)
        _print_rows(report)
    print("wrote " + ", ".join(map(str, paths)))
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_common(p, seed_required: bool):
    p.add_argument("--seed", type=int, required=seed_required, default=None if seed_required else 0,
                   help="master seed" + (" (required)" if seed_required else " (default 0)"))
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: available cores)")
    p.add_argument("--out", help="output path or prefix")


def _add_params(p):
    p.add_argument("--config", help="key = value parameter file")
    p.add_argument("--param", action="append", metavar="KEY=VALUE", help="parameter override (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="puretrees", description=__doc__.splitlines()[0])
    parser.add_argument("-q", "--quiet", action="store_true", help="no progress lines")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="Monte Carlo error estimate on a simulation model")
    p.add_argument("--model", required=True, help=", ".join(MODELS))
    p.add_argument("--algo", help="comma list of rf, et, intf, rsrf, rsrf_af, mean_y, one_nn or all")
    p.add_argument("--d", type=int, help="number of covariates")
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--n-train", type=int, default=500)
    p.add_argument("--n-test", type=int, default=500)
    _add_common(p, True)
    _add_params(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="fit a forest on a CSV file")
    p.add_argument("--data", required=True)
    p.add_argument("--schema")
    p.add_argument("--target")
    p.add_argument("--algo")
    p.add_argument("--num-trees", type=int)
    _add_common(p, False)
    _add_params(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("predict", help="predict with a saved forest")
    p.add_argument("--forest", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--schema")
    p.add_argument("--target")
    p.add_argument("--out")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("tune", help="random-search tuning (cv on a CSV, or opt on a model)")
    p.add_argument("--algo", required=True)
    p.add_argument("--mode", choices=("cv", "opt"), default="cv")
    p.add_argument("--data")
    p.add_argument("--schema")
    p.add_argument("--target")
    p.add_argument("--model", default="pure_3")
    p.add_argument("--d", type=int)
    p.add_argument("--space", help="search space file (key = v1, v2, ...)")
    p.add_argument("--combos", type=int, default=200)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--sims", type=int, default=30)
    _add_common(p, True)
    _add_params(p)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("bench", help="run a benchmark suite")
    p.add_argument("--suite", required=True, choices=sorted(suites.SUITES))
    p.add_argument("--reps", type=int, default=20, help="replications (trials for blindness)")
    p.add_argument("--models", help="table3: comma list of models")
    p.add_argument("--dims", help="table3: comma list of d values")
    _add_common(p, True)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, format="%(message)s",
                        stream=sys.stderr)
    try:
        return args.func(args)
    except (ConfigError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DataError, ForestFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
