"""Command-line entry point: generate / prepare / train / evaluate / grid / stats.

Every stage validates its inputs up front, writes outputs atomically
(temp file + rename), sends diagnostics to stderr and data to files or
stdout, and exits non-zero on failure (2 for bad inputs or configuration,
1 for runtime errors).
"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import os
import sys
from collections import Counter
from pathlib import Path
from typing import Sequence

import numpy as np

from . import analysis, datagen, model, pipeline
from .core import build_vocab


class ConfigError(ValueError):
    """A config file or CLI input failed validation."""


# --- run-config parsing ---

_TOP_KEYS = {"seed", "out_dir", "datagen", "data_csv", "pipeline", "hyper", "grid", "metrics"}
_DATAGEN_KEYS = {"n_customers", "n_cities", "trips_per_customer", "archetype_mix", "date_range", "seed"}
_PIPELINE_KEYS = {"top_cities"}
_HYPER_KEYS = {
    "hidden1",
    "hidden2",
    "d_emb",
    "batch_size",
    "epochs",
    "learning_rate",
    "patience",
    "val_fraction",
}
_GRID_KEYS = {"customer_sizes", "window_sizes", "replicates"}
_METRICS_KEYS = {"n_list"}


def _reject_unknown(section: dict, allowed: set[str], where: str) -> None:
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {where}; allowed: {sorted(allowed)}")


def load_run_config(path: str | Path) -> dict:
    if not os.path.exists(path):
        raise ConfigError(f"config not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(config, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    _reject_unknown(config, _TOP_KEYS, "config")
    for key, allowed in (
        ("datagen", _DATAGEN_KEYS),
        ("pipeline", _PIPELINE_KEYS),
        ("hyper", _HYPER_KEYS),
        ("grid", _GRID_KEYS),
        ("metrics", _METRICS_KEYS),
    ):
        if key in config:
            if not isinstance(config[key], dict):
                raise ConfigError(f"config section {key!r} must be an object")
            _reject_unknown(config[key], allowed, f"config.{key}")
    return config


def _gen_config(config: dict) -> datagen.GenConfig:
    section = config.get("datagen")
    if not section:
        raise ConfigError("config has no 'datagen' section")
    seed = section.get("seed", config.get("seed"))
    if seed is None:
        raise ConfigError("no seed: set 'seed' at the top level or inside 'datagen'")
    try:
        lo, hi = section["trips_per_customer"]
        start, end = section["date_range"]
        return datagen.GenConfig(
            n_customers=int(section["n_customers"]),
            n_cities=int(section["n_cities"]),
            trips_per_customer=(int(lo), int(hi)),
            archetype_mix=dict(section["archetype_mix"]),
            date_range=(dt.date.fromisoformat(start), dt.date.fromisoformat(end)),
            seed=int(seed),
        )
    except KeyError as exc:
        raise ConfigError(f"config.datagen is missing {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config.datagen is invalid: {exc}") from None


def _hyper_from_dict(section: dict, window_size: int, seed: int) -> model.Hyperparams:
    _reject_unknown(section, _HYPER_KEYS, "hyper")
    try:
        return model.Hyperparams(window_size=window_size, seed=seed, **section)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid hyperparameters: {exc}") from None


# --- subcommands ---


def _cmd_generate(args: argparse.Namespace) -> int:
    config = load_run_config(args.config)
    gen = _gen_config(config)
    histories = datagen.generate(gen)
    datagen.write_csv(histories, args.out)

    archetypes = Counter(datagen.archetype_of(gen, i) for i in range(gen.n_customers))
    cities: Counter = Counter()
    n_rows = 0
    for h in histories:
        for t in h.trips:
            cities[datagen.city_name(t.origin)] += 1
            cities[datagen.city_name(t.destination)] += 1
            n_rows += 1
    sidecar = {
        "customers": gen.n_customers,
        "trips": n_rows,
        "archetype_counts": dict(sorted(archetypes.items())),
        "city_histogram": dict(sorted(cities.items())),
    }
    stats_path = f"{args.out}.stats.json"
    tmp = f"{stats_path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
    os.replace(tmp, stats_path)
    print(f"wrote {n_rows} rows for {gen.n_customers} customers to {args.out}")
    return 0


def _resolve_manifest(data: str, name: str) -> Path:
    path = Path(data)
    if path.is_dir():
        path = path / name
    if not path.exists():
        raise ConfigError(f"dataset not found: {path}")
    return path


def _cmd_prepare(args: argparse.Namespace) -> int:
    if not os.path.exists(args.csv):
        raise ConfigError(f"input CSV not found: {args.csv}")
    rows = datagen.read_csv(args.csv)
    vocab = build_vocab(rows, args.top_cities)
    cleaned = pipeline.clean(rows, vocab)
    train_entries, test_entries = pipeline.build_dataset(cleaned.histories, args.window_size)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    pipeline.save_entries(out_dir / "train.json", train_entries, vocab, args.window_size)
    pipeline.save_entries(out_dir / "test.json", test_entries, vocab, args.window_size)
    meta = {
        "window_size": args.window_size,
        "top_cities": args.top_cities,
        "cities": list(vocab.cities),
        "customers": len({e.customer_id for e in test_entries}),
        "train_entries": len(train_entries),
        "test_entries": len(test_entries),
        "dropped": dict(sorted(cleaned.dropped.items())),
    }
    tmp = out_dir / "meta.json.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
    os.replace(tmp, out_dir / "meta.json")
    print(
        f"prepared {len(train_entries)} train / {len(test_entries)} test entries "
        f"(w={args.window_size}, p={len(vocab)}) in {out_dir}"
    )
    return 0


def _cmd_train(args: argparse.Namespace) -> int:
    manifest = _resolve_manifest(args.data, "train.json")
    entries, vocab, w = pipeline.load_entries(manifest)
    section = {}
    if args.hyper:
        if not os.path.exists(args.hyper):
            raise ConfigError(f"hyperparameter file not found: {args.hyper}")
        with open(args.hyper, "r", encoding="utf-8") as fh:
            try:
                section = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"hyperparameter file is not valid JSON: {exc}") from None
        if not isinstance(section, dict):
            raise ConfigError("hyperparameter file must hold a JSON object")
    hyper = _hyper_from_dict(section, window_size=w, seed=args.seed)

    def progress(record: dict) -> None:
        print(json.dumps(record), file=sys.stderr)

    trained = model.train(entries, vocab, hyper, progress=progress)
    model.save(trained, args.checkpoint)
    last = trained.history[-1]
    val_txt = "n/a" if last.val_loss is None else f"{last.val_loss:.4f}"
    print(
        f"trained {len(entries)} entries for {len(trained.history)} epochs "
        f"(train loss {last.train_loss:.4f}, val loss {val_txt}); checkpoint: {args.checkpoint}"
    )
    return 0


def _parse_n_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise ConfigError(f"bad N list {text!r}; expected comma-separated integers") from None
    if not values or any(v < 1 for v in values):
        raise ConfigError(f"bad N list {text!r}; entries must be positive")
    return values


def _cmd_evaluate(args: argparse.Namespace) -> int:
    if not os.path.exists(args.checkpoint):
        raise ConfigError(f"checkpoint not found: {args.checkpoint}")
    trained = model.load(args.checkpoint)
    manifest = _resolve_manifest(args.data, "test.json")
    entries, _, w = pipeline.load_entries(manifest)
    if w != trained.hyper.window_size:
        raise ConfigError(
            f"dataset window size {w} does not match checkpoint window size {trained.hyper.window_size}"
        )
    n_list = _parse_n_list(args.n_list)
    scores = analysis.evaluate_model(trained, entries, n_list)
    print(f"{'N':>3}{'top-N F1':>12}{'recall@N':>12}")
    for n in n_list:
        print(f"{n:>3}{scores['f1'][n]:>12.4f}{scores['recall'][n]:>12.4f}")
    return 0


def _cmd_grid(args: argparse.Namespace) -> int:
    config = load_run_config(args.config)
    seed = config.get("seed")
    if seed is None:
        raise ConfigError("config needs a top-level 'seed' for the grid")
    grid_section = config.get("grid")
    if not grid_section:
        raise ConfigError("config has no 'grid' section")
    for key in _GRID_KEYS:
        if key not in grid_section:
            raise ConfigError(f"config.grid is missing {key!r}")
    window_sizes = tuple(int(w) for w in grid_section["window_sizes"])
    top_cities = int(config.get("pipeline", {}).get("top_cities", 16))
    n_list = tuple(config.get("metrics", {}).get("n_list", analysis.DEFAULT_N_LIST))
    hyper = _hyper_from_dict(dict(config.get("hyper", {})), window_size=window_sizes[0], seed=0)

    if config.get("data_csv"):
        csv_path = config["data_csv"]
        if not os.path.exists(csv_path):
            raise ConfigError(f"data_csv not found: {csv_path}")
        rows = datagen.read_csv(csv_path)
    else:
        rows = datagen.histories_to_rows(datagen.generate(_gen_config(config)))

    grid_config = analysis.GridConfig(
        customer_sizes=tuple(int(c) for c in grid_section["customer_sizes"]),
        window_sizes=window_sizes,
        replicates=int(grid_section["replicates"]),
        base_seed=int(seed),
        top_cities=top_cities,
        hyper=hyper,
        n_list=n_list,
        jobs=args.jobs,
    )
    results = analysis.run_grid(rows, grid_config)
    results.to_csv(args.out)
    print(f"wrote {len(results.rows)} grid rows to {args.out}")
    cs_levels, ws_levels = results.levels()
    print(f"{'cs':>8}{'ws':>6}" + "".join(f"{'top' + str(n):>10}" for n in n_list))
    for cs in cs_levels:
        for ws in ws_levels:
            cells = [r for r in results.sorted_rows() if r.customer_size == cs and r.window_size == ws]
            means = [float(np.mean([r.f1[n] for r in cells])) for n in n_list]
            print(f"{cs:>8}{ws:>6}" + "".join(f"{m:>10.4f}" for m in means))
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    if not os.path.exists(args.grid):
        raise ConfigError(f"results grid not found: {args.grid}")
    grid = analysis.ResultsGrid.from_csv(args.grid)
    report: dict = {"metrics": {}}
    for n in grid.n_list:
        metric = f"top{n}"
        cs_levels, ws_levels, means = grid.cell_means("f1", n)
        if means.shape != (3, 3):
            raise ConfigError(
                f"ANOVA needs a 3x3 grid; this file has {len(cs_levels)} CS x {len(ws_levels)} WS levels"
            )
        if args.replicates:
            _, _, values = grid.replicate_values("f1", n)
            table = analysis.anova_replicates(values)
        else:
            table = analysis.anova(means, cs_levels, ws_levels)
        comparisons = analysis.tukey(means, cs_levels, factor="cs")
        print(f"== {metric} ==")
        print(table.to_text())
        print("Tukey HSD (customer size):")
        print(analysis.tukey_to_text(comparisons))
        print()
        report["metrics"][metric] = {
            "anova": table.to_dict(),
            "tukey_cs": [
                {
                    "level_a": c.level_a,
                    "level_b": c.level_b,
                    "estimate": c.estimate,
                    "se": c.se,
                    "df": c.df,
                    "t": c.t,
                    "p": c.p,
                }
                for c in comparisons
            ],
        }
    if args.json:
        tmp = f"{args.json}.tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
        os.replace(tmp, args.json)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nextdest", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic trip CSV")
    p.add_argument("--config", required=True, help="run-config JSON with a 'datagen' section")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(fn=_cmd_generate)

    p = sub.add_parser("prepare", help="window a trip CSV into train/test manifests")
    p.add_argument("--csv", required=True, help="input trip CSV")
    p.add_argument("--window-size", type=int, required=True)
    p.add_argument("--top-cities", type=int, default=16)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(fn=_cmd_prepare)

    p = sub.add_parser("train", help="fit one model on a prepared dataset")
    p.add_argument("--data", required=True, help="prepare output dir or train.json path")
    p.add_argument("--hyper", help="JSON file of hyperparameter overrides")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--checkpoint", required=True, help="output checkpoint path")
    p.set_defaults(fn=_cmd_train)

    p = sub.add_parser("evaluate", help="score a checkpoint on a test manifest")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--data", required=True, help="prepare output dir or test.json path")
    p.add_argument("--n-list", default="1,3,5,7")
    p.set_defaults(fn=_cmd_evaluate)

    p = sub.add_parser("grid", help="run the CS x WS x replicate experiment")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="output results CSV")
    p.add_argument("--jobs", type=int, default=1, help="max concurrent cell runs")
    p.set_defaults(fn=_cmd_grid)

    p = sub.add_parser("stats", help="ANOVA + Tukey tables from a results CSV")
    p.add_argument("--grid", required=True, help="results CSV from the grid command")
    p.add_argument("--replicates", action="store_true", help="ANOVA on raw replicates instead of cell means")
    p.add_argument("--json", help="also write the tables as JSON")
    p.set_defaults(fn=_cmd_stats)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
