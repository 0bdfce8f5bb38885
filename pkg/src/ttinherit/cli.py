"""Command-line entry point.

    ttinherit run      --config cfg.json [--seed N] [--trials N] [--scale desk|paper] [--output-dir DIR]
    ttinherit verify   --config cfg.json [--seed N] [--trials N] [--scale desk|paper]
    ttinherit generate --config cfg.json --out tensor.ttc [--generator KIND] [--seed N]
    ttinherit report   --in DIR

Exit codes: 0 success, 1 bound violations (or failed trials), 2 usage or
configuration errors.  ``--scale`` overlays the preset geometry/trial count
on top of the config file; ``--seed``/``--trials`` override single fields.
Worker parallelism is controlled by the TT_INHERIT_THREADS environment
variable (0 or unset = auto).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from .container import save_tt
from .errors import TTInheritError
from .experiment import (
    ExperimentConfig,
    desk_preset,
    paper_preset,
    run_experiment,
    summarize_boxplot,
    version_stamp,
)
from .generators import KINDS, GeneratorSpec, generate
from .svgplot import write_boxplot_svg

__all__ = ["main", "build_parser", "load_config"]

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ttinherit",
        description="Sampling-inheritance experiments for tensor-train tensors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_config=True):
        p.add_argument("--config", required=needs_config, help="JSON config file")
        p.add_argument("--seed", type=int, default=None, help="override master_seed")
        p.add_argument("--trials", type=int, default=None, help="override trial count")
        p.add_argument(
            "--scale",
            choices=("desk", "paper"),
            default=None,
            help="overlay the desk/paper preset geometry on the config",
        )

    p_run = sub.add_parser("run", help="full experiment: trials, checks, all artifacts")
    add_common(p_run)
    p_run.add_argument("--output-dir", default=None, help="override output directory")
    p_run.add_argument("--no-svg", action="store_true", help="skip SVG rendering")

    p_verify = sub.add_parser("verify", help="bound-check suite only, no files written")
    add_common(p_verify)

    p_gen = sub.add_parser("generate", help="draw one TT tensor and serialize it")
    add_common(p_gen)
    p_gen.add_argument("--out", required=True, help="output container file")
    p_gen.add_argument(
        "--generator",
        choices=KINDS,
        default=None,
        help="entry scheme (default: first kind in the config)",
    )

    p_rep = sub.add_parser("report", help="recompute summaries/SVGs from trials.csv")
    p_rep.add_argument("--in", dest="in_dir", required=True, help="directory with trials.csv")
    return parser


def load_config(args) -> ExperimentConfig:
    """Config file -> ExperimentConfig, with --scale/--seed/--trials overlays."""
    with open(args.config, "r", encoding="utf-8") as f:
        raw = json.load(f)
    cfg = ExperimentConfig.from_dict(raw)
    if getattr(args, "scale", None):
        preset = desk_preset() if args.scale == "desk" else paper_preset()
        sizes_I, sizes_J = ExperimentConfig.default_sample_sizes(preset.shape, preset.ranks)
        cfg = cfg.replace(
            shape=list(preset.shape),
            ranks=list(preset.ranks),
            sample_sizes_I=list(sizes_I),
            sample_sizes_J=list(sizes_J),
        )
    if getattr(args, "seed", None) is not None:
        if args.seed < 0:
            raise TTInheritError(f"--seed must be >= 0, got {args.seed}")
        cfg = cfg.replace(master_seed=args.seed)
    if getattr(args, "trials", None) is not None:
        cfg = cfg.replace(trials=args.trials)
    if getattr(args, "output_dir", None):
        cfg = cfg.replace(output_dir=args.output_dir)
    if getattr(args, "no_svg", False):
        cfg = cfg.replace(emit_svg=False)
    return cfg


def _print_run_report(result, wrote: bool) -> None:
    cfg = result.config
    print(
        f"shape {tuple(cfg.shape)}, ranks {cfg.ranks}, {cfg.trials} trials x "
        f"{len(cfg.generators)} generators, master_seed {cfg.master_seed}"
    )
    for kind in cfg.generators:
        per_gen = [r for r in result.results if r.generator == kind]
        if not per_gen:
            print(f"  {kind:9s} no completed trials")
            continue
        n_checks = sum(
            len(rec.checks) for r in per_gen for rec in r.records_rows + r.records_cols
        )
        n_bad = sum(
            0 if ok else 1 for r in per_gen for ok in r.bound_pass.values()
        )
        resamples = sum(sum(r.resamples.values()) for r in per_gen)
        print(
            f"  {kind:9s} {len(per_gen)} trials, {n_checks} inequality checks, "
            f"{n_bad} failing parameters, {resamples} resamples"
        )
    print(f"bound violations: {result.bound_violations}")
    if result.failures:
        print(f"failed trials: {len(result.failures)}")
    if wrote:
        for name, path in result.paths.items():
            print(f"  wrote {name}: {path}")


def _cmd_run(args) -> int:
    cfg = load_config(args)
    result = run_experiment(cfg, write=True)
    _print_run_report(result, wrote=True)
    if result.bound_violations or result.failures:
        return EXIT_VIOLATIONS
    return EXIT_OK


def _cmd_verify(args) -> int:
    cfg = load_config(args)
    result = run_experiment(cfg, write=False)
    _print_run_report(result, wrote=False)
    if result.bound_violations or result.failures:
        print("VERIFY: FAIL")
        return EXIT_VIOLATIONS
    print("VERIFY: OK")
    return EXIT_OK


def _cmd_generate(args) -> int:
    cfg = load_config(args)
    kind = args.generator or cfg.generators[0]
    seed = cfg.master_seed if args.seed is None else args.seed
    spec = GeneratorSpec(kind, cfg.shape, cfg.ranks, seed=seed)
    t = generate(spec, cfg.rank_tol)
    save_tt(
        args.out,
        t,
        metadata={
            "generator": kind,
            "seed": seed,
            "rank_tol": cfg.rank_tol,
            "version": version_stamp(),
        },
    )
    print(f"wrote {args.out}: shape {t.shape}, ranks {t.ranks}, {kind} cores, seed {seed}")
    return EXIT_OK


def _cmd_report(args) -> int:
    csv_path = os.path.join(args.in_dir, "trials.csv")
    with open(csv_path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        rows = list(reader)
    if not rows:
        raise TTInheritError(f"{csv_path}: no data rows")
    needed = {"generator", "trial", "parameter_label", "value", "bound_pass"}
    if not needed <= set(rows[0]):
        raise TTInheritError(f"{csv_path}: missing columns {sorted(needed - set(rows[0]))}")

    generators = []
    labels = []
    values: dict[str, dict[str, list[float]]] = {}
    any_fail = False
    for row in rows:
        kind, label = row["generator"], row["parameter_label"]
        if kind not in values:
            values[kind] = {}
            generators.append(kind)
        if label not in values[kind]:
            values[kind][label] = []
            if label not in labels:
                labels.append(label)
        values[kind][label].append(float(row["value"]))
        if row["bound_pass"].strip().lower() == "false":
            any_fail = True

    summaries = {
        kind: {label: summarize_boxplot(vals, label=label) for label, vals in per_gen.items()}
        for kind, per_gen in values.items()
    }
    doc = {
        "source": csv_path,
        "version": version_stamp(),
        "quartile_method": "linear interpolation between order statistics (type 7)",
        "summaries": {
            kind: {
                label: {
                    "median": s.median,
                    "q1": s.q1,
                    "q3": s.q3,
                    "whisker_low": s.whisker_low,
                    "whisker_high": s.whisker_high,
                    "outliers": list(s.outliers),
                    "mean": s.mean,
                }
                for label, s in per_gen.items()
            }
            for kind, per_gen in summaries.items()
        },
    }
    summary_path = os.path.join(args.in_dir, "summary.json")
    with open(summary_path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")
    print(f"wrote {summary_path}")
    for kind in generators:
        svg_path = os.path.join(args.in_dir, f"boxplot_{kind}.svg")
        ordered = [summaries[kind][label] for label in labels if label in summaries[kind]]
        write_boxplot_svg(svg_path, f"Sampling factors — {kind} cores", ordered)
        print(f"wrote {svg_path}")
    if any_fail:
        print("bound failures present in trials.csv")
        return EXIT_VIOLATIONS
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code) if exc.code is not None else EXIT_OK
    handlers = {
        "run": _cmd_run,
        "verify": _cmd_verify,
        "generate": _cmd_generate,
        "report": _cmd_report,
    }
    try:
        return handlers[args.command](args)
    except TTInheritError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON config: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
