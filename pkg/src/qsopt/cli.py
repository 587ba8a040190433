"""Command-line interface.

Exit codes: 0 success, 2 config or usage error, 3 internal invariant
violation (an algorithm guarantee failed at runtime, always worth a report).
"""

from __future__ import annotations

import csv
import sys
from dataclasses import dataclass
from typing import Optional

import click

from .baselines import (
    double_greedy,
    random_permutation_greedy,
    randomized_bidirectional_greedy,
    randomized_local_search,
)
from .checkers import (
    is_local_max,
    is_local_min,
    is_quasi_submodular,
    is_submodular,
    satisfies_ssbc,
    satisfies_weak_marginal,
)
from .errors import CapExceeded, ConfigError, InternalInvariantError
from .exact import exact_opt
from .functions import instantiate, load_spec
from .harness import ExperimentConfig, reduction_rate, run_experiment
from .maximize import u_prefix, uqsfmax
from .minimize import min_lattice, uqsfmin
from .sets import IntervalLattice, SubsetBits, format_set, lattice_free_count, parse_set


@dataclass
class CliState:
    seed: Optional[int] = None
    fmt: str = "csv"
    quiet: bool = False

    def say(self, message: str) -> None:
        if not self.quiet:
            click.echo(message)


@click.group(name="qsopt")
@click.option("--seed", type=int, default=None, help="Override the seed of loaded instances.")
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["csv", "json"]),
    default="csv",
    help="Report format for bench outputs.",
)
@click.option("--quiet", is_flag=True, help="Suppress informational output.")
@click.pass_context
def cli(ctx: click.Context, seed: Optional[int], fmt: str, quiet: bool) -> None:
    """Quasi-submodular set-function optimization toolkit."""
    ctx.obj = CliState(seed, fmt, quiet)


def _load_oracle(state: CliState, spec_path: str):
    spec = load_spec(spec_path)
    if state.seed is not None:
        spec.seed = state.seed
    return instantiate(spec), spec


@cli.command()
@click.option("--spec", "spec_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--property",
    "prop",
    type=click.Choice(["all", "submodular", "qsb", "ssbc", "weak"]),
    default="all",
)
@click.pass_obj
def check(state: CliState, spec_path: str, prop: str) -> None:
    """Exhaustively verify structural properties of a small instance."""
    oracle, spec = _load_oracle(state, spec_path)
    checks = {
        "submodular": is_submodular,
        "qsb": is_quasi_submodular,
        "ssbc": satisfies_ssbc,
        "weak": satisfies_weak_marginal,
    }
    selected = checks if prop == "all" else {prop: checks[prop]}
    for name, fn in selected.items():
        verdict = fn(oracle, spec.n)
        if verdict.holds:
            click.echo(f"{name}: holds=true")
        else:
            click.echo(f"{name}: holds=false witness: {verdict.witness.describe()}")


def _write_min_trace(path: str, trace) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "added", "removed", "value", "eval_calls"])
        for step in trace.steps:
            writer.writerow(
                [step.t, format_set(step.added), format_set(step.removed), repr(step.value), step.eval_calls]
            )


@cli.command(name="min")
@click.option("--spec", "spec_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--start", default="empty", help="empty, full, or a set literal like {1,3}.")
@click.option("--trace", "trace_path", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def min_cmd(state: CliState, spec_path: str, start: str, trace_path: Optional[str]) -> None:
    """Reduce toward a local minimum from a chosen start."""
    oracle, spec = _load_oracle(state, spec_path)
    n = spec.n
    if start == "empty":
        x0 = SubsetBits.empty(n)
    elif start == "full":
        x0 = SubsetBits.full(n)
    else:
        try:
            x0 = parse_set(start, n)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    result, trace = uqsfmin(oracle, x0)
    if trace_path:
        _write_min_trace(trace_path, trace)
    state.say(f"start={format_set(x0)} result={format_set(result)}")
    state.say(
        f"value={oracle.value(result)!r} iterations={trace.iterations} "
        f"eval_calls={trace.total_calls} local_min={is_local_min(oracle, result)}"
    )


@cli.command(name="max")
@click.option("--spec", "spec_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--trace", "trace_path", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def max_cmd(state: CliState, spec_path: str, trace_path: Optional[str]) -> None:
    """Shrink [empty, full] to the interval bracketing every maximum."""
    oracle, spec = _load_oracle(state, spec_path)
    # endpoint local-maximality is informational; skip the 2n extra evals at large n
    lattice, trace = uqsfmax(oracle, report_local_max=spec.n <= 2048)
    if trace_path:
        with open(trace_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "added", "removed", "fx", "fy", "eval_calls"])
            for step in trace.steps:
                writer.writerow(
                    [
                        step.t,
                        format_set(step.added),
                        format_set(step.removed),
                        repr(step.fx),
                        repr(step.fy),
                        step.eval_calls,
                    ]
                )
    free = lattice_free_count(lattice)
    state.say(
        f"lower_local_max={trace.lower_is_local_max} upper_local_max={trace.upper_is_local_max} "
        f"iterations={trace.iterations} eval_calls={trace.total_calls}"
    )
    click.echo(
        f"X+={format_set(lattice.lower)} Y+={format_set(lattice.upper)} "
        f"free={free} reduction_rate={reduction_rate(lattice, spec.n)!r}"
    )


@cli.command()
@click.option("--alg", type=click.Choice(["rp", "rls", "rg", "dg"]), required=True)
@click.option("--spec", "spec_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--trials", type=int, default=10, show_default=True)
@click.option("--seed", "algo_seed", type=int, default=0, show_default=True)
@click.option("--prefilter", is_flag=True, help="Reduce the lattice first, then run on the rest.")
@click.pass_obj
def baseline(
    state: CliState,
    alg: str,
    spec_path: str,
    trials: int,
    algo_seed: int,
    prefilter: bool,
) -> None:
    """Run a maximization baseline; rls interprets --trials as restarts."""
    oracle, _spec = _load_oracle(state, spec_path)
    runners = {
        "rp": lambda F: random_permutation_greedy(F, trials, algo_seed),
        "rls": lambda F: randomized_local_search(F, trials, algo_seed),
        "rg": lambda F: randomized_bidirectional_greedy(F, trials, algo_seed),
        "dg": lambda F: double_greedy(F, list(range(1, F.n + 1))),
    }
    runner = runners[alg]
    if prefilter:
        result = u_prefix(oracle, runner)
        state.say(
            f"reduction_rate={reduction_rate(result.lattice, oracle.n)!r} "
            f"free={lattice_free_count(result.lattice)}"
        )
        click.echo(f"set={format_set(result.set)} value={result.value!r}")
    else:
        result = runner(oracle)
        click.echo(
            f"set={format_set(result.set)} value={result.value!r} "
            f"oracle_calls={result.oracle_calls}"
        )


@cli.command()
@click.option("--spec", "spec_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--direction", type=click.Choice(["min", "max"]), required=True)
@click.option(
    "--within-from",
    "within_from",
    type=click.Choice(["full", "min-lattice", "max-lattice"]),
    default="full",
    show_default=True,
)
@click.option("--cap", type=int, default=25, show_default=True)
@click.pass_obj
def exact(state: CliState, spec_path: str, direction: str, within_from: str, cap: int) -> None:
    """Exhaustive optimum over the full cube or a reduced interval."""
    oracle, spec = _load_oracle(state, spec_path)
    n = spec.n
    if within_from == "min-lattice":
        lattice, _ = min_lattice(oracle)
    elif within_from == "max-lattice":
        lattice, _ = uqsfmax(oracle)
    else:
        lattice = IntervalLattice(SubsetBits.empty(n), SubsetBits.full(n))
    value, optimizers = exact_opt(oracle, direction, lattice, cap=cap)
    state.say(f"within={within_from} free={lattice_free_count(lattice)}")
    shown = " ".join(format_set(s) for s in optimizers[:16])
    suffix = "" if len(optimizers) <= 16 else f" (+{len(optimizers) - 16} more)"
    click.echo(f"value={value!r} optimizers={shown}{suffix}")


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.pass_obj
def bench(state: CliState, config_path: str, out_dir: str) -> None:
    """Run a configured experiment and write runs plus summary reports."""
    cfg = ExperimentConfig.from_file(config_path)
    if state.fmt != "csv":
        cfg.format = state.fmt
    report = run_experiment(cfg)
    written = report.write(out_dir, cfg.format)
    for path in written:
        state.say(f"wrote {path}")
    state.say(f"rows={len(report.rows)} failures={len(report.failures)}")


def main(argv: Optional[list[str]] = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        return 2
    except (ConfigError, CapExceeded, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except InternalInvariantError as exc:
        click.echo(f"internal invariant violated: {exc}", err=True)
        return 3


if __name__ == "__main__":
    sys.exit(main())
