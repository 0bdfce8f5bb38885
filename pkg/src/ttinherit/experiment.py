"""Repeated-trial sampling experiments over random TT tensors.

One trial: draw a TT tensor under one entry scheme, sample a nested chain of
row sets (level i sampled from level i-1 extended by mode i) and independent
column sets per level, all uniformly without replacement; evaluate every
row/column sampling factor; verify every inheritance inequality.  A level
whose sampled set breaks its rank hypothesis is resampled with a fresh
derived stream up to ``max_resample`` times (counted and reported).

The experiment grid is generators x trials; everything is keyed by derived
seeds so a (config, master_seed) pair fixes the entire run.  Results land in
``trials.csv`` (raw values, one row per trial/parameter), ``summary.json``
(config echo plus per-parameter boxplot summaries), and one standalone SVG
boxplot per generator.
"""

from __future__ import annotations

import json
import os
import subprocess
import sys
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import __version__
from .errors import ConfigError, DomainError, NumericError, TrialError
from .linalg import numerical_rank
from .multiindex import IndexSet, Shape, derived_rng, derived_seed, kron_extend, sample_without_replacement
from .generators import KINDS, GeneratorSpec, generate
from .properties import (
    InheritanceRecord,
    check_column_sampling_bounds,
    check_row_sampling_bounds,
    unfolding_svd,
)
from .svgplot import write_boxplot_svg

__all__ = [
    "ExperimentConfig",
    "TrialResult",
    "BoxplotSummary",
    "ExperimentResult",
    "param_grid",
    "desk_preset",
    "paper_preset",
    "run_trial",
    "run_experiment",
    "summarize_boxplot",
    "write_outputs",
    "resolve_workers",
    "version_stamp",
]

_CONFIG_KEYS = {
    "d",
    "shape",
    "ranks",
    "generators",
    "trials",
    "sample_sizes_I",
    "sample_sizes_J",
    "master_seed",
    "rank_tol",
    "max_resample",
    "output_dir",
    "emit_svg",
}

QUARTILE_METHOD = "linear interpolation between order statistics (type 7)"

CSV_COLUMNS = (
    "generator",
    "trial",
    "parameter_label",
    "i",
    "t",
    "value",
    "bound_pass",
    "resamples",
    "wall_time_s",  # excluded from determinism comparisons
)


def param_grid(d: int) -> list[tuple[str, str, int, int | None]]:
    """Complete parameter grid for a d-mode tensor, in output order.

    Rows are (label, family, i, t): all row factors alpha_{i,t} with
    i in [1, d-1], t in [1, d-i]; then alpha_i for i in [2, d-1]; then
    beta_i for i in [1, d-1].
    """
    if d < 2:
        raise DomainError(f"need d >= 2, got {d}")
    grid: list[tuple[str, str, int, int | None]] = []
    for i in range(1, d):
        for t_off in range(1, d - i + 1):
            grid.append((f"alpha_{i}_{t_off}", "alpha_it", i, t_off))
    for i in range(2, d):
        grid.append((f"alpha_{i}", "alpha_i", i, None))
    for i in range(1, d):
        grid.append((f"beta_{i}", "beta_i", i, None))
    return grid


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved experiment description (sizes filled in, all checked)."""

    shape: Shape
    ranks: tuple[int, ...]
    generators: tuple[str, ...]
    trials: int
    master_seed: int
    sample_sizes_I: tuple[int, ...]
    sample_sizes_J: tuple[int, ...]
    rank_tol: float = 1e-9
    max_resample: int = 25
    output_dir: str = "out"
    emit_svg: bool = True

    def __post_init__(self):
        shape = self.shape if isinstance(self.shape, Shape) else Shape(tuple(self.shape))
        object.__setattr__(self, "shape", shape)
        d = len(shape)
        ranks = tuple(int(r) for r in self.ranks)
        if len(ranks) != d - 1:
            raise ConfigError(f"need {d - 1} ranks for {d} modes, got {len(ranks)}")
        # geometry feasibility is the generator's concern; fail early here
        GeneratorSpec("gaussian", shape, ranks, seed=0)
        object.__setattr__(self, "ranks", ranks)

        gens = tuple(self.generators)
        if len(gens) == 0:
            raise ConfigError("at least one generator kind is required")
        seen = set()
        for g in gens:
            if g not in KINDS:
                raise ConfigError(f"unknown generator kind {g!r}; choose from {KINDS}")
            if g in seen:
                raise ConfigError(f"duplicate generator kind {g!r}")
            seen.add(g)
        object.__setattr__(self, "generators", gens)

        if int(self.trials) < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        object.__setattr__(self, "trials", int(self.trials))
        if int(self.master_seed) < 0:
            raise ConfigError(f"master_seed must be >= 0, got {self.master_seed}")
        object.__setattr__(self, "master_seed", int(self.master_seed))

        sizes_I = tuple(int(m) for m in self.sample_sizes_I)
        sizes_J = tuple(int(m) for m in self.sample_sizes_J)
        if len(sizes_I) != d - 1 or len(sizes_J) != d - 1:
            raise ConfigError(f"sample size lists must have {d - 1} entries")
        prev = 1
        for i in range(1, d):
            pool = prev * shape[i - 1]
            if not ranks[i - 1] <= sizes_I[i - 1] <= pool:
                raise ConfigError(
                    f"|I_{i}|={sizes_I[i - 1]} must lie in [r_{i}={ranks[i - 1]}, "
                    f"pool={pool}] (pool = |I_{i - 1}| * n_{i})"
                )
            prev = sizes_I[i - 1]
            Q = shape.suffix_size(i)
            if not ranks[i - 1] <= sizes_J[i - 1] <= Q:
                raise ConfigError(
                    f"|J_{i}|={sizes_J[i - 1]} must lie in [r_{i}={ranks[i - 1]}, {Q}]"
                )
        object.__setattr__(self, "sample_sizes_I", sizes_I)
        object.__setattr__(self, "sample_sizes_J", sizes_J)

        if not (0.0 <= float(self.rank_tol) < 1.0):
            raise ConfigError(f"rank_tol must be in [0, 1), got {self.rank_tol}")
        object.__setattr__(self, "rank_tol", float(self.rank_tol))
        if int(self.max_resample) < 0:
            raise ConfigError(f"max_resample must be >= 0, got {self.max_resample}")
        object.__setattr__(self, "max_resample", int(self.max_resample))
        if not isinstance(self.output_dir, (str, os.PathLike)):
            raise ConfigError("output_dir must be a path")
        object.__setattr__(self, "output_dir", os.fspath(self.output_dir))
        object.__setattr__(self, "emit_svg", bool(self.emit_svg))

    @property
    def d(self) -> int:
        return len(self.shape)

    @staticmethod
    def default_sample_sizes(shape, ranks) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """|I_i| = |J_i| = min(4 * r_i, pool size), the usual small multiple of rank."""
        shape = shape if isinstance(shape, Shape) else Shape(tuple(shape))
        ranks = tuple(int(r) for r in ranks)
        sizes_I = []
        prev = 1
        for i in range(1, len(shape)):
            pool = prev * shape[i - 1]
            sizes_I.append(min(4 * ranks[i - 1], pool))
            prev = sizes_I[-1]
        sizes_J = [
            min(4 * ranks[i - 1], shape.suffix_size(i)) for i in range(1, len(shape))
        ]
        return tuple(sizes_I), tuple(sizes_J)

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        """Build from a parsed JSON object; unknown fields are rejected."""
        if not isinstance(raw, dict):
            raise ConfigError(f"config must be a JSON object, got {type(raw).__name__}")
        unknown = sorted(set(raw) - _CONFIG_KEYS)
        if unknown:
            raise ConfigError(f"unknown config fields: {', '.join(unknown)}")
        missing = sorted(k for k in ("shape", "ranks", "trials", "master_seed") if k not in raw)
        if missing:
            raise ConfigError(f"missing config fields: {', '.join(missing)}")
        try:
            shape = Shape(tuple(int(n) for n in raw["shape"]))
            ranks = tuple(int(r) for r in raw["ranks"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad shape/ranks: {exc}") from exc
        if "d" in raw and int(raw["d"]) != len(shape):
            raise ConfigError(f"d={raw['d']} inconsistent with shape of {len(shape)} modes")
        for key in ("sample_sizes_I", "sample_sizes_J"):
            if raw.get(key) is not None and not isinstance(raw[key], (list, tuple)):
                raise ConfigError(f"{key} must be a list or null")
        default_I, default_J = cls.default_sample_sizes(shape, ranks)
        sizes_I = raw.get("sample_sizes_I")
        sizes_J = raw.get("sample_sizes_J")
        gens = raw.get("generators", list(KINDS))
        if isinstance(gens, str):
            raise ConfigError("generators must be a list of kinds")
        kwargs = {}
        for key in ("rank_tol", "max_resample", "output_dir", "emit_svg"):
            if key in raw:
                kwargs[key] = raw[key]
        return cls(
            shape=shape,
            ranks=ranks,
            generators=tuple(gens),
            trials=raw["trials"],
            master_seed=raw["master_seed"],
            sample_sizes_I=tuple(sizes_I) if sizes_I is not None else default_I,
            sample_sizes_J=tuple(sizes_J) if sizes_J is not None else default_J,
            **kwargs,
        )

    def to_dict(self) -> dict:
        """Round-trippable echo (JSON-safe types only)."""
        return {
            "d": self.d,
            "shape": list(self.shape),
            "ranks": list(self.ranks),
            "generators": list(self.generators),
            "trials": self.trials,
            "sample_sizes_I": list(self.sample_sizes_I),
            "sample_sizes_J": list(self.sample_sizes_J),
            "master_seed": self.master_seed,
            "rank_tol": self.rank_tol,
            "max_resample": self.max_resample,
            "output_dir": self.output_dir,
            "emit_svg": self.emit_svg,
        }

    def replace(self, **changes) -> "ExperimentConfig":
        raw = self.to_dict()
        raw.pop("d")
        raw.update(changes)
        return ExperimentConfig(
            shape=Shape(tuple(raw["shape"])),
            ranks=tuple(raw["ranks"]),
            generators=tuple(raw["generators"]),
            trials=raw["trials"],
            master_seed=raw["master_seed"],
            sample_sizes_I=tuple(raw["sample_sizes_I"]),
            sample_sizes_J=tuple(raw["sample_sizes_J"]),
            rank_tol=raw["rank_tol"],
            max_resample=raw["max_resample"],
            output_dir=raw["output_dir"],
            emit_svg=raw["emit_svg"],
        )


def desk_preset(**overrides) -> ExperimentConfig:
    """Laptop-minutes preset: shape 20^4, ranks (2,3,2), 20 trials."""
    shape = Shape((20, 20, 20, 20))
    ranks = (2, 3, 2)
    sizes_I, sizes_J = ExperimentConfig.default_sample_sizes(shape, ranks)
    cfg = ExperimentConfig(
        shape=shape,
        ranks=ranks,
        generators=KINDS,
        trials=20,
        master_seed=42,
        sample_sizes_I=sizes_I,
        sample_sizes_J=sizes_J,
        output_dir="out-desk",
    )
    return cfg.replace(**overrides) if overrides else cfg


def paper_preset(**overrides) -> ExperimentConfig:
    """Full-scale preset: shape 100^4, ranks (2,3,2), 20 trials."""
    shape = Shape((100, 100, 100, 100))
    ranks = (2, 3, 2)
    sizes_I, sizes_J = ExperimentConfig.default_sample_sizes(shape, ranks)
    cfg = ExperimentConfig(
        shape=shape,
        ranks=ranks,
        generators=KINDS,
        trials=20,
        master_seed=42,
        sample_sizes_I=sizes_I,
        sample_sizes_J=sizes_J,
        output_dir="out-paper",
    )
    return cfg.replace(**overrides) if overrides else cfg


@dataclass(frozen=True)
class TrialResult:
    """Everything one trial produced, keyed by parameter label."""

    generator: str
    trial: int
    seed: int
    values: dict[str, float]
    bound_pass: dict[str, bool]
    resamples: dict[str, int]
    records_rows: tuple[InheritanceRecord, ...]
    records_cols: tuple[InheritanceRecord, ...]
    wall_time_s: float


@dataclass(frozen=True)
class BoxplotSummary:
    """Five-number summary plus mean and outliers for one parameter."""

    label: str
    median: float
    q1: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: tuple[float, ...]
    mean: float

    def __post_init__(self):
        iqr = self.q3 - self.q1
        if not self.q1 <= self.median <= self.q3:
            raise DomainError("median must lie between the quartiles")
        if self.whisker_low < self.q1 - 1.5 * iqr or self.whisker_high > self.q3 + 1.5 * iqr:
            raise DomainError("whiskers must stay within 1.5 IQR of the box")
        for v in self.outliers:
            if self.whisker_low <= v <= self.whisker_high:
                raise DomainError("outliers must lie strictly outside the whiskers")


def summarize_boxplot(values, label: str = "") -> BoxplotSummary:
    """Five-number summary with 1.5-IQR whiskers snapped to attained points.

    Quartiles use linear interpolation between order statistics (the common
    "type 7" rule).  Whiskers are the most extreme data points within
    1.5 IQR of the box; everything outside is listed as an outlier.  The
    mean is arithmetic.
    """
    vals = np.asarray(list(values), dtype=np.float64)
    if vals.size == 0:
        raise DomainError("cannot summarize an empty value list")
    if not np.all(np.isfinite(vals)):
        raise NumericError("values contain non-finite entries")
    q1, med, q3 = np.percentile(vals, [25.0, 50.0, 75.0])
    iqr = q3 - q1
    lo_fence = q1 - 1.5 * iqr
    hi_fence = q3 + 1.5 * iqr
    wlo = vals[vals >= lo_fence].min()
    whi = vals[vals <= hi_fence].max()
    outliers = np.sort(vals[(vals < wlo) | (vals > whi)])
    return BoxplotSummary(
        label=label,
        median=float(med),
        q1=float(q1),
        q3=float(q3),
        whisker_low=float(wlo),
        whisker_high=float(whi),
        outliers=tuple(float(v) for v in outliers),
        mean=float(vals.mean()),
    )


def _sample_level(pool, size, factor_rows, rank, rank_tol, trial_seed, stream, level, max_resample):
    """Sample one index set, resampling until its factor rows keep full rank.

    ``factor_rows(candidate)`` returns the (|set| x r) block of the relevant
    orthonormal factor; the hypothesis is full column rank at rank_tol.
    Returns (index set, resample count).
    """
    tries = 0
    while True:
        rng = derived_rng(trial_seed, stream, level, tries)
        cand = sample_without_replacement(pool, size, rng)
        sub = factor_rows(cand)
        s = scipy.linalg.svdvals(sub)
        if numerical_rank(s, rank_tol) == rank:
            return cand, tries
        tries += 1
        if tries > max_resample:
            raise TrialError(
                f"level {level} ({stream}): rank hypothesis still failing after "
                f"{max_resample} resamples"
            )


def run_trial(config: ExperimentConfig, kind: str, trial: int) -> TrialResult:
    """Generate, sample, evaluate, and check one (generator, trial) cell."""
    if kind not in config.generators:
        raise ConfigError(f"generator {kind!r} not in config")
    if not 0 <= int(trial) < config.trials:
        raise ConfigError(f"trial index {trial} out of range [0, {config.trials})")
    start = time.perf_counter()
    trial_seed = derived_seed(config.master_seed, "trial", kind, int(trial))
    tol = config.rank_tol
    t = generate(GeneratorSpec(kind, config.shape, config.ranks, seed=trial_seed), tol)
    d = t.d
    svds = [unfolding_svd(t, k, tol) for k in range(1, d)]
    ranks = tuple(s.rank for s in svds)

    # nested row sets: level i samples from level i-1 refined by mode i
    I_sets: list[IndexSet] = []
    res_I: list[int] = []
    prev: IndexSet = IndexSet.full(1)
    for i in range(1, d):
        pool = kron_extend(prev, t.shape[i - 1])
        svd_i = svds[i - 1]
        cand, tries = _sample_level(
            pool,
            config.sample_sizes_I[i - 1],
            lambda c, s=svd_i: s.W[c.zero_based(), :],
            ranks[i - 1],
            tol,
            trial_seed,
            "rows",
            i,
            config.max_resample,
        )
        I_sets.append(cand)
        res_I.append(tries)
        prev = cand

    # column sets: independent per level, sampled from the full pool
    J_sets: list[IndexSet] = []
    res_J: list[int] = []
    shp = Shape(t.shape)
    for i in range(1, d):
        pool = IndexSet.full(shp.suffix_size(i))
        svd_i = svds[i - 1]
        cand, tries = _sample_level(
            pool,
            config.sample_sizes_J[i - 1],
            lambda c, s=svd_i: s.V[c.zero_based(), :],
            ranks[i - 1],
            tol,
            trial_seed,
            "cols",
            i,
            config.max_resample,
        )
        J_sets.append(cand)
        res_J.append(tries)

    records_rows = check_row_sampling_bounds(t, I_sets, tol, svds=svds)
    records_cols = check_column_sampling_bounds(t, I_sets, J_sets, tol, svds=svds)

    by_it = {(rec.i, rec.t): rec for rec in records_rows}
    by_alpha = {rec.i: rec for rec in records_cols if rec.kind == "alpha_i"}
    by_beta = {rec.i: rec for rec in records_cols if rec.kind == "beta_i"}

    values: dict[str, float] = {}
    passes: dict[str, bool] = {}
    resamples: dict[str, int] = {}
    for label, family, i, t_off in param_grid(d):
        if family == "alpha_it":
            rec = by_it[(i, t_off)]
            values[label] = rec.value
            passes[label] = rec.satisfied
            resamples[label] = res_I[i - 1]
        elif family == "alpha_i":
            rec = by_alpha[i]
            # the level-i inequalities live on the beta record
            values[label] = rec.value
            passes[label] = rec.rank_hypothesis_ok and by_beta[i].satisfied
            resamples[label] = res_I[i - 2]
        else:
            rec = by_beta[i]
            values[label] = rec.value
            passes[label] = rec.satisfied and (i == 1 or by_alpha[i].rank_hypothesis_ok)
            resamples[label] = res_J[i - 1]

    return TrialResult(
        generator=kind,
        trial=int(trial),
        seed=trial_seed,
        values=values,
        bound_pass=passes,
        resamples=resamples,
        records_rows=tuple(records_rows),
        records_cols=tuple(records_cols),
        wall_time_s=time.perf_counter() - start,
    )


def resolve_workers() -> int:
    """Worker count from TT_INHERIT_THREADS (0 or unset = auto, capped at 4)."""
    raw = os.environ.get("TT_INHERIT_THREADS", "0").strip()
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"TT_INHERIT_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise ConfigError(f"TT_INHERIT_THREADS must be >= 0, got {n}")
    if n == 0:
        return max(1, min(4, os.cpu_count() or 1))
    return n


@dataclass
class ExperimentResult:
    """Full run: per-trial results, summaries, failures, and counters."""

    config: ExperimentConfig
    results: list[TrialResult]
    failures: list[dict]
    summaries: dict[str, dict[str, BoxplotSummary]] = field(default_factory=dict)
    paths: dict[str, str] = field(default_factory=dict)

    @property
    def bound_violations(self) -> int:
        n = 0
        for res in self.results:
            for rec in res.records_rows + res.records_cols:
                if rec.rank_hypothesis_ok and not rec.satisfied:
                    n += 1
        return n

    @property
    def hypothesis_failures(self) -> int:
        n = 0
        for res in self.results:
            for rec in res.records_rows + res.records_cols:
                if not rec.rank_hypothesis_ok:
                    n += 1
        return n


def run_experiment(config: ExperimentConfig, write: bool = True) -> ExperimentResult:
    """Run the full generators x trials grid; optionally write all artifacts.

    Trials are independent and may run on a small thread pool (numpy releases
    the GIL inside LAPACK); results are collected in deterministic
    (generator, trial) order regardless of scheduling.  A trial that exhausts
    its resample budget is excluded from the results with a warning and
    listed in ``failures``.
    """
    tasks = [(kind, trial) for kind in config.generators for trial in range(config.trials)]
    workers = resolve_workers()
    outcomes: list = [None] * len(tasks)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_trial, config, kind, trial) for kind, trial in tasks]
            for idx, fut in enumerate(futures):
                try:
                    outcomes[idx] = fut.result()
                except TrialError as exc:
                    outcomes[idx] = exc
    else:
        for idx, (kind, trial) in enumerate(tasks):
            try:
                outcomes[idx] = run_trial(config, kind, trial)
            except TrialError as exc:
                outcomes[idx] = exc

    results: list[TrialResult] = []
    failures: list[dict] = []
    for (kind, trial), outcome in zip(tasks, outcomes):
        if isinstance(outcome, TrialResult):
            results.append(outcome)
        else:
            failures.append({"generator": kind, "trial": trial, "error": str(outcome)})
            warnings.warn(
                f"trial {trial} ({kind}) excluded: {outcome}", RuntimeWarning, stacklevel=2
            )

    summaries: dict[str, dict[str, BoxplotSummary]] = {}
    grid = param_grid(config.d)
    for kind in config.generators:
        per_gen = [r for r in results if r.generator == kind]
        if not per_gen:
            continue
        summaries[kind] = {
            label: summarize_boxplot([r.values[label] for r in per_gen], label=label)
            for label, _, _, _ in grid
        }

    out = ExperimentResult(config=config, results=results, failures=failures, summaries=summaries)
    if write:
        out.paths = write_outputs(results, summaries, config, failures=failures)
    return out


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def version_stamp() -> str:
    """Package version, plus the git commit when running from a checkout."""
    stamp = __version__
    try:
        proc = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=os.path.dirname(os.path.abspath(__file__)),
            capture_output=True,
            text=True,
            timeout=5,
        )
        if proc.returncode == 0 and proc.stdout.strip():
            stamp = f"{stamp}+g{proc.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return stamp


def summary_payload(results, summaries, config, failures=None) -> dict:
    """The summary.json document (dict form)."""
    n_viol = 0
    n_hyp = 0
    for res in results:
        for rec in res.records_rows + res.records_cols:
            if not rec.rank_hypothesis_ok:
                n_hyp += 1
            elif not rec.satisfied:
                n_viol += 1
    return {
        "config": config.to_dict(),
        "version": version_stamp(),
        "python": sys.version.split()[0],
        "numpy": np.__version__,
        "rank_tol": config.rank_tol,
        "quartile_method": QUARTILE_METHOD,
        "trials_completed": len(results),
        "trials_failed": list(failures or []),
        "bound_violations": n_viol,
        "rank_hypothesis_failures": n_hyp,
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


def write_outputs(results, summaries, config: ExperimentConfig, output_dir=None, failures=None) -> dict:
    """Write trials.csv, summary.json, and (optionally) per-generator SVGs.

    Rows are ordered by (generator order in config, trial, grid order), so
    identical runs produce byte-identical files apart from the trailing
    wall-time column.
    """
    out_dir = os.fspath(output_dir) if output_dir is not None else config.output_dir
    os.makedirs(out_dir, exist_ok=True)
    grid = param_grid(config.d)
    by_key = {(r.generator, r.trial): r for r in results}

    csv_path = os.path.join(out_dir, "trials.csv")
    with open(csv_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(",".join(CSV_COLUMNS) + "\n")
        for kind in config.generators:
            for trial in range(config.trials):
                res = by_key.get((kind, trial))
                if res is None:
                    continue  # failed trial, listed in summary.json instead
                for label, _family, i, t_off in grid:
                    f.write(
                        ",".join(
                            (
                                kind,
                                str(trial),
                                label,
                                str(i),
                                "" if t_off is None else str(t_off),
                                _fmt(res.values[label]),
                                "true" if res.bound_pass[label] else "false",
                                str(res.resamples[label]),
                                _fmt(res.wall_time_s),
                            )
                        )
                        + "\n"
                    )

    summary_path = os.path.join(out_dir, "summary.json")
    payload = summary_payload(results, summaries, config, failures=failures)
    with open(summary_path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")

    paths = {"trials_csv": csv_path, "summary_json": summary_path}
    if config.emit_svg:
        for kind in config.generators:
            if kind not in summaries:
                continue
            svg_path = os.path.join(out_dir, f"boxplot_{kind}.svg")
            ordered = [summaries[kind][label] for label, _, _, _ in grid]
            write_boxplot_svg(
                svg_path,
                f"Sampling factors — {kind} cores",
                ordered,
            )
            paths[f"svg_{kind}"] = svg_path
    return paths
