"""Experiment runner: lattice-reduction rates, approximation ratios, timings.

A config names an experiment kind, the function families, the sizes, and the
trial count; every instance and every algorithm seed is derived from the
master seed with SeedSequence spawn keys, so a rerun of the same config is
bit-identical except for the wall-clock columns.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from statistics import mean, median
from typing import Optional

import numpy as np

from .baselines import (
    double_greedy,
    random_permutation_greedy,
    randomized_bidirectional_greedy,
    randomized_local_search,
)
from .errors import ConfigError, QsoptError
from .exact import exact_opt
from .functions import FAMILIES, FunctionSpec, instantiate
from .maximize import u_prefix, uqsfmax
from .minimize import min_lattice
from .sets import (
    DEFAULT_ENUMERATION_CAP,
    IntervalLattice,
    SubsetBits,
    lattice_free_count,
)

RUN_CSV_HEADER = (
    "family,n,seed,algorithm,direction,value,exact_value,ratio,"
    "reduction_rate,iterations,eval_calls,wall_ms"
)

EXPERIMENTS = ("reduction", "ratio", "timing")
RATIO_ALGORITHMS = ("rp", "urp", "rls", "urls", "rg", "urg", "dg", "udg")

#: Full-table exact optimization is the ground truth up to this size.
_EXACT_FULL_MAX_N = 20


def reduction_rate(lattice: IntervalLattice, n: int) -> float:
    """Fraction of ground-set elements whose membership the lattice fixes."""
    return (n - lattice_free_count(lattice)) / n


@dataclass
class ExperimentConfig:
    experiment: str
    families: list[str]
    sizes: list[dict]
    trials: int = 3
    master_seed: int = 0
    algorithms: list[str] = field(default_factory=lambda: ["rp", "urp", "rls", "urls", "rg", "urg"])
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    baseline_trials: int = 10
    ls_restarts: int = 10
    format: str = "csv"

    def __post_init__(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; pick from {EXPERIMENTS}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.format!r}")
        if not self.families:
            raise ConfigError("families must be non-empty")
        for fam in self.families:
            if fam not in FAMILIES:
                raise ConfigError(f"unknown family {fam!r}")
        if not self.sizes:
            raise ConfigError("sizes must be non-empty")
        norm = []
        for entry in self.sizes:
            if isinstance(entry, int):
                entry = {"n": entry}
            if not isinstance(entry, dict) or "n" not in entry:
                raise ConfigError(f"size entries need an 'n' field, got {entry!r}")
            if int(entry["n"]) < 1:
                raise ConfigError("sizes must have n >= 1")
            norm.append({k: int(v) for k, v in entry.items()})
        self.sizes = norm
        for alg in self.algorithms:
            if alg not in RATIO_ALGORITHMS:
                raise ConfigError(f"unknown algorithm {alg!r}; pick from {RATIO_ALGORITHMS}")

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentConfig":
        try:
            payload = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(payload, dict):
            raise ConfigError(f"config {path} is not a JSON object")
        known = {
            "experiment",
            "families",
            "sizes",
            "trials",
            "master_seed",
            "algorithms",
            "enumeration_cap",
            "baseline_trials",
            "ls_restarts",
            "format",
        }
        unknown = set(payload) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        try:
            return cls(**payload)
        except TypeError as exc:
            raise ConfigError(f"bad config {path}: {exc}") from exc


@dataclass
class RunRow:
    family: str
    n: int
    seed: int
    algorithm: str
    direction: str
    value: Optional[float] = None
    exact_value: Optional[float] = None
    ratio: Optional[float] = None
    reduction_rate: Optional[float] = None
    iterations: Optional[int] = None
    eval_calls: Optional[int] = None
    wall_ms: Optional[float] = None

    def to_csv(self) -> str:
        def fmt(v):
            return "" if v is None else (repr(v) if isinstance(v, float) else str(v))

        return ",".join(
            [
                self.family,
                str(self.n),
                str(self.seed),
                self.algorithm,
                self.direction,
                fmt(self.value),
                fmt(self.exact_value),
                fmt(self.ratio),
                fmt(self.reduction_rate),
                fmt(self.iterations),
                fmt(self.eval_calls),
                fmt(self.wall_ms),
            ]
        )

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "seed": self.seed,
            "algorithm": self.algorithm,
            "direction": self.direction,
            "value": self.value,
            "exact_value": self.exact_value,
            "ratio": self.ratio,
            "reduction_rate": self.reduction_rate,
            "iterations": self.iterations,
            "eval_calls": self.eval_calls,
            "wall_ms": self.wall_ms,
        }


@dataclass
class CellAggregate:
    family: str
    n: int
    algorithm: str
    direction: str
    runs: int
    mean_rate: Optional[float] = None
    min_rate: Optional[float] = None
    max_rate: Optional[float] = None
    mean_ratio: Optional[float] = None
    mean_value: Optional[float] = None
    mean_eval_calls: Optional[float] = None
    mean_wall_ms: Optional[float] = None
    median_wall_ms: Optional[float] = None

    def to_dict(self) -> dict:
        return self.__dict__.copy()


@dataclass
class RunReport:
    experiment: str
    rows: list[RunRow] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)

    def aggregates(self) -> list[CellAggregate]:
        cells: dict[tuple, list[RunRow]] = {}
        for row in self.rows:
            cells.setdefault((row.family, row.n, row.algorithm, row.direction), []).append(row)
        out = []
        for (family, n, alg, direction), rows in cells.items():
            rates = [r.reduction_rate for r in rows if r.reduction_rate is not None]
            ratios = [r.ratio for r in rows if r.ratio is not None]
            values = [r.value for r in rows if r.value is not None]
            calls = [r.eval_calls for r in rows if r.eval_calls is not None]
            walls = [r.wall_ms for r in rows if r.wall_ms is not None]
            out.append(
                CellAggregate(
                    family,
                    n,
                    alg,
                    direction,
                    runs=len(rows),
                    mean_rate=mean(rates) if rates else None,
                    min_rate=min(rates) if rates else None,
                    max_rate=max(rates) if rates else None,
                    mean_ratio=mean(ratios) if ratios else None,
                    mean_value=mean(values) if values else None,
                    mean_eval_calls=mean(calls) if calls else None,
                    mean_wall_ms=mean(walls) if walls else None,
                    median_wall_ms=median(walls) if walls else None,
                )
            )
        return out

    def runs_csv(self) -> str:
        lines = [RUN_CSV_HEADER]
        lines += [row.to_csv() for row in self.rows]
        return "\n".join(lines) + "\n"

    def summary_csv(self) -> str:
        head = (
            "family,n,algorithm,direction,runs,mean_rate,min_rate,max_rate,"
            "mean_ratio,mean_value,mean_eval_calls,mean_wall_ms,median_wall_ms"
        )
        lines = [head]
        for agg in self.aggregates():
            d = agg.to_dict()
            cols = [
                d["family"],
                str(d["n"]),
                d["algorithm"],
                d["direction"],
                str(d["runs"]),
            ]
            for key in (
                "mean_rate",
                "min_rate",
                "max_rate",
                "mean_ratio",
                "mean_value",
                "mean_eval_calls",
                "mean_wall_ms",
                "median_wall_ms",
            ):
                v = d[key]
                cols.append("" if v is None else repr(float(v)))
            lines.append(",".join(cols))
        return "\n".join(lines) + "\n"

    def write(self, out_dir: str | Path, fmt: str = "csv") -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        if fmt == "csv":
            runs = out / "runs.csv"
            runs.write_text(self.runs_csv())
            summary = out / "summary.csv"
            summary.write_text(self.summary_csv())
            written += [runs, summary]
        else:
            runs = out / "runs.json"
            runs.write_text(
                json.dumps(
                    {
                        "experiment": self.experiment,
                        "rows": [r.to_dict() for r in self.rows],
                        "failures": self.failures,
                    },
                    indent=2,
                )
                + "\n"
            )
            summary = out / "summary.json"
            summary.write_text(
                json.dumps([a.to_dict() for a in self.aggregates()], indent=2) + "\n"
            )
            written += [runs, summary]
        if self.failures:
            failures = out / "failures.json"
            failures.write_text(json.dumps(self.failures, indent=2) + "\n")
            written.append(failures)
        return written


def _derived_seed(master: int, *key: int) -> int:
    seq = np.random.SeedSequence(master, spawn_key=tuple(key))
    return int(seq.generate_state(1, np.uint64)[0] & np.uint64(2**63 - 1))


def _instance_spec(family: str, size: dict, seed: int) -> FunctionSpec:
    params = {}
    if family == "perturbed_facility":
        params["d"] = size.get("d", 4 * size["n"])
    return FunctionSpec(family, size["n"], seed, params)


def _baseline_runner(name: str, cfg: ExperimentConfig, algo_seed: int):
    base = {
        "rp": lambda F: random_permutation_greedy(F, cfg.baseline_trials, algo_seed),
        "rls": lambda F: randomized_local_search(F, cfg.ls_restarts, algo_seed),
        "rg": lambda F: randomized_bidirectional_greedy(F, cfg.baseline_trials, algo_seed),
        "dg": lambda F: double_greedy(F, list(range(1, F.n + 1))),
    }
    if name in base:
        return base[name], False
    inner = base[name[1:]]
    return (lambda F: u_prefix(F, inner)), True


def _exact_max(oracle, n: int, cap: int) -> float:
    """Ground-truth maximum: full table when affordable, else over the reduced interval."""
    if n <= _EXACT_FULL_MAX_N:
        lattice = IntervalLattice(SubsetBits.empty(n), SubsetBits.full(n))
    else:
        lattice, _ = uqsfmax(oracle)
    value, _ = exact_opt(oracle, "max", lattice, cap=cap)
    return value


def run_reduction_experiment(cfg: ExperimentConfig) -> RunReport:
    """Per cell and trial: run both reductions, record rates, calls, wall time."""
    report = RunReport("reduction")
    for fi, family in enumerate(cfg.families):
        for si, size in enumerate(cfg.sizes):
            for trial in range(cfg.trials):
                seed = _derived_seed(cfg.master_seed, fi, si, trial, 0)
                try:
                    oracle = instantiate(_instance_spec(family, size, seed))
                    n = oracle.n

                    t0 = time.perf_counter()
                    lat_min, (up, down) = min_lattice(oracle)
                    ms_min = (time.perf_counter() - t0) * 1000.0
                    report.rows.append(
                        RunRow(
                            family,
                            n,
                            seed,
                            "uqsfmin",
                            "min",
                            value=min(oracle.value(lat_min.lower), oracle.value(lat_min.upper)),
                            reduction_rate=reduction_rate(lat_min, n),
                            iterations=up.iterations + down.iterations,
                            eval_calls=up.total_calls + down.total_calls,
                            wall_ms=ms_min,
                        )
                    )

                    t0 = time.perf_counter()
                    lat_max, trace = uqsfmax(oracle)
                    ms_max = (time.perf_counter() - t0) * 1000.0
                    report.rows.append(
                        RunRow(
                            family,
                            n,
                            seed,
                            "uqsfmax",
                            "max",
                            value=max(oracle.value(lat_max.lower), oracle.value(lat_max.upper)),
                            reduction_rate=reduction_rate(lat_max, n),
                            iterations=trace.iterations,
                            eval_calls=trace.total_calls,
                            wall_ms=ms_max,
                        )
                    )
                except QsoptError as exc:
                    report.failures.append(
                        {"family": family, "size": size, "trial": trial, "error": str(exc)}
                    )
    return report


def run_ratio_experiment(cfg: ExperimentConfig) -> RunReport:
    """Ratios against the exact maximum; plain and reduced variants share seeds.

    Rows where the exact maximum is not strictly positive keep their value but
    leave the ratio blank: a ratio of signed quantities would be meaningless.
    """
    report = RunReport("ratio")
    for fi, family in enumerate(cfg.families):
        for si, size in enumerate(cfg.sizes):
            for trial in range(cfg.trials):
                seed = _derived_seed(cfg.master_seed, fi, si, trial, 0)
                algo_seed = _derived_seed(cfg.master_seed, fi, si, trial, 1)
                try:
                    oracle = instantiate(_instance_spec(family, size, seed))
                    n = oracle.n
                    exact_value = _exact_max(oracle, n, cfg.enumeration_cap)
                    for name in cfg.algorithms:
                        runner, is_u = _baseline_runner(name, cfg, algo_seed)
                        t0 = time.perf_counter()
                        result = runner(oracle)
                        ms = (time.perf_counter() - t0) * 1000.0
                        if is_u:
                            rate = reduction_rate(result.lattice, n)
                            iters = result.trace.iterations
                            calls = result.trace.total_calls + (
                                result.inner.oracle_calls if result.inner else 0
                            )
                        else:
                            rate = None
                            iters = None
                            calls = result.oracle_calls
                        ratio = result.value / exact_value if exact_value > 0.0 else None
                        report.rows.append(
                            RunRow(
                                family,
                                n,
                                seed,
                                name,
                                "max",
                                value=result.value,
                                exact_value=exact_value,
                                ratio=ratio,
                                reduction_rate=rate,
                                iterations=iters,
                                eval_calls=calls,
                                wall_ms=ms,
                            )
                        )
                except QsoptError as exc:
                    report.failures.append(
                        {"family": family, "size": size, "trial": trial, "error": str(exc)}
                    )
    return report


def run_timing_experiment(cfg: ExperimentConfig) -> RunReport:
    """Wall-clock per algorithm; one unmeasured warmup run per cell."""
    report = RunReport("timing")
    for fi, family in enumerate(cfg.families):
        for si, size in enumerate(cfg.sizes):
            warm_seed = _derived_seed(cfg.master_seed, fi, si, 0, 0)
            warm_algo = _derived_seed(cfg.master_seed, fi, si, 0, 1)
            try:
                warm_oracle = instantiate(_instance_spec(family, size, warm_seed))
                for name in cfg.algorithms:
                    runner, _ = _baseline_runner(name, cfg, warm_algo)
                    runner(warm_oracle)
            except QsoptError as exc:
                report.failures.append(
                    {"family": family, "size": size, "trial": "warmup", "error": str(exc)}
                )
                continue
            for trial in range(cfg.trials):
                seed = _derived_seed(cfg.master_seed, fi, si, trial, 0)
                algo_seed = _derived_seed(cfg.master_seed, fi, si, trial, 1)
                try:
                    oracle = instantiate(_instance_spec(family, size, seed))
                    n = oracle.n
                    for name in cfg.algorithms:
                        runner, is_u = _baseline_runner(name, cfg, algo_seed)
                        t0 = time.perf_counter()
                        result = runner(oracle)
                        ms = (time.perf_counter() - t0) * 1000.0
                        rate = reduction_rate(result.lattice, n) if is_u else None
                        calls = (
                            result.trace.total_calls
                            + (result.inner.oracle_calls if result.inner else 0)
                            if is_u
                            else result.oracle_calls
                        )
                        report.rows.append(
                            RunRow(
                                family,
                                n,
                                seed,
                                name,
                                "max",
                                value=result.value,
                                reduction_rate=rate,
                                eval_calls=calls,
                                wall_ms=ms,
                            )
                        )
                except QsoptError as exc:
                    report.failures.append(
                        {"family": family, "size": size, "trial": trial, "error": str(exc)}
                    )
    return report


def run_experiment(cfg: ExperimentConfig) -> RunReport:
    runner = {
        "reduction": run_reduction_experiment,
        "ratio": run_ratio_experiment,
        "timing": run_timing_experiment,
    }[cfg.experiment]
    return runner(cfg)
