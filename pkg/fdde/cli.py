#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""fdde - exact solutions and solvers for fractional delay differential equations

Usage:
    fdde -h | --help
    fdde --version
    fdde exact [-v | -vv] [options] --config <PATH>
    fdde solve [-v | -vv] [options] --config <PATH>
    fdde compare [-v | -vv] [options] --config <PATH>
    fdde converge [-v | -vv] [options] --config <PATH>
    fdde figure [-v | -vv] [options] <NUMBER>

Commands:
    exact       Evaluate the closed-form solution of a linear problem with a
                constant or ramp history on the grid 0, h, ..., T.
    solve       Run the first-order solver for the configured operator:
                product integration (caputo) or Grünwald-Letnikov (phitau).
    compare     Tabulate the exact Caputo and φτ solutions of a ramp-history
                problem, their difference, and the generalized integral of the
                corrective term; print the largest discrepancy on stderr.
    converge    Measure max errors and observed orders over several step sizes,
                against the exact solution when one exists and otherwise each
                step against a run at a quarter of it. The table is also shown
                on stderr.
    figure      Reproduce the data behind figure NUMBER (1-5) from the presets
                shipped with the package, one CSV file per curve.

Global Options:
    -h, --help
        Show this help text and exit.

    --version
        Show program version and exit.

    -v, -vv
        Increase verbosity of logs sent to stderr. Default log level is WARN;
        -v corresponds to INFO and -vv to DEBUG.

    -c <PATH>, --config <PATH>
        Experiment configuration: a JSON object (json) or one experiment per
        line (jsonl). Relative CSV paths inside it are read from the config
        file's directory.

    -o <PATH>, --out <PATH>
        Set output filename; for "figure", the output directory. By default,
        tables are written to the terminal as CSV. The output format is
        determined by the file extension: CSV (csv) or JSON lines (jsonl).

Problem Options:
    --h <NUM>
        Step size, replacing the value in the config.

    --T <NUM>
        Final time, replacing the value in the config.

    --alpha <NUM>
        Fractional order in (0, 1), replacing the value in the config.

    --operator <NAME>
        Fractional operator, "caputo" or "phitau", replacing the config value.

    --steps <LIST>
        Comma-separated step sizes for "converge", replacing the config value.

Exit Codes:
    0   success
    2   invalid configuration or unsupported problem
    3   numerical failure in a solver or special function

Examples:
    fdde exact --config linear.json --out linear.csv
    fdde solve -c logistic.json --operator phitau --h 0.00390625
    fdde converge -c ramp.json --steps 0.03125,0.015625,0.0078125
    fdde figure 3 --out figures/

Help:
    For more information on the equations and the output columns, see the
    README.
"""

import logging
import sys
from dataclasses import replace
from functools import partial
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from docopt import docopt
from rich import traceback
from rich.logging import RichHandler
from rich.progress import BarColumn, Progress, SpinnerColumn

from . import __version__
from .config import ExperimentConfig, FigurePreset, load_configs, load_presets
from .console import ReportHighlighter, console, err_console
from .errors import CapabilityError, ConfigError, DomainError, SolverError, UsageError
from .exact import evaluate_grid, exact_solution
from .history import ConstantHistory, RampHistory
from .output import Row_T, write_rows, write_table
from .problem import OperatorKind
from .solvers import create_solver, solver_gap
from .study import (
    ComparisonRow,
    ConvergenceTable,
    PairRow,
    compare_ramp_solutions,
    convergence_study,
    grid,
    pair_rows,
)
from .trajectory import Trajectory

# Available log levels: default is WARN, -v is INFO, -vv is DEBUG
LOG_LEVELS = {
    0: "WARN",
    1: "INFO",
    2: "DEBUG",
}

# Exit codes by failure kind
EXIT_CONFIG = 2
EXIT_SOLVER = 3

TRAJECTORY_FIELDS = ("t", "y")
COMPARISON_FIELDS = ComparisonRow._fields
PAIR_FIELDS = PairRow._fields
CONVERGENCE_FIELDS = ("h", "max_error", "observed_order")


def run() -> None:
    """CLI entrypoint."""
    args = docopt(__doc__, version=__version__)

    # install global logging and exception handlers
    logging.basicConfig(
        level=LOG_LEVELS[args["-v"]],
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console)],
    )
    logging.captureWarnings(True)
    traceback.install()

    # color numbers and paths in summary lines
    console.highlighter = ReportHighlighter()
    err_console.highlighter = ReportHighlighter()

    try:
        dispatch(args)
    except (SolverError, CapabilityError) as err:
        logging.error(str(err))
        sys.exit(EXIT_SOLVER)
    except (ConfigError, UsageError, DomainError) as err:
        logging.error(str(err))
        sys.exit(EXIT_CONFIG)


def dispatch(args: Dict) -> None:
    """Run the command selected on the command line."""
    if args["figure"]:
        try:
            figure = int(args["<NUMBER>"])
        except ValueError as err:
            raise ConfigError(f"figure must be a number, got {args['<NUMBER>']}") from err
        cmd_figure(figure, Path(args["--out"] or "."))
        return

    commands: Dict[str, Callable[[ExperimentConfig], object]] = {
        "exact": cmd_exact,
        "solve": cmd_solve,
        "compare": cmd_compare,
        "converge": cmd_converge,
    }
    command = next(name for name in commands if args[name])
    for config in load_configs(args["--config"]):
        config = config.override(
            h=args["--h"],
            T=args["--T"],
            alpha=args["--alpha"],
            operator=args["--operator"],
            output=args["--out"],
            steps=parse_steps(args["--steps"]),
        )
        logging.info(f"running {command} for {config.id}")
        commands[command](config)


def parse_steps(text: Optional[str]) -> Optional[tuple]:
    """Comma-separated step sizes, or None when the flag is absent."""
    if text is None:
        return None
    try:
        return tuple(float(h) for h in text.split(",") if h.strip())
    except ValueError as err:
        raise ConfigError(f"--steps must be comma-separated numbers, got {text}") from err


def emit(config: ExperimentConfig, fieldnames: Sequence[str], rows: List[Row_T]) -> None:
    """Write rows to the configured output, or as CSV to the terminal."""
    if config.output:
        path = write_rows(config.output, fieldnames, rows)
        console.print(f"wrote {len(rows)} rows to {path}")
    else:
        write_table(sys.stdout, "csv", fieldnames, rows)


def cmd_exact(config: ExperimentConfig) -> Trajectory:
    """Evaluate the closed-form solution on the configured grid."""
    problem = config.linear_problem()
    traj = evaluate_grid(problem, config.operator, config.h, config.T)
    emit(config, TRAJECTORY_FIELDS, list(traj.rows()))
    return traj


def cmd_solve(config: ExperimentConfig) -> Trajectory:
    """Solve the configured problem numerically."""
    problem = config.nonlinear_problem()
    traj = create_solver(config.solver_config())(problem)
    emit(config, TRAJECTORY_FIELDS, list(traj.rows()))
    return traj


def cmd_compare(config: ExperimentConfig) -> float:
    """Compare exact Caputo and φτ solutions; return the largest discrepancy."""
    problem = config.linear_problem()
    rows = compare_ramp_solutions(problem, grid(config.h, config.T))
    emit(config, COMPARISON_FIELDS, [row.as_dict() for row in rows])
    discrepancy = max(row.discrepancy for row in rows)
    err_console.print(f"{config.id}: max |(ŷ - y) - J(corrective)| = {discrepancy:.3e}")
    return discrepancy


def cmd_converge(config: ExperimentConfig) -> ConvergenceTable:
    """Convergence study over the configured step sizes."""
    problem = config.nonlinear_problem()
    solver_config = config.solver_config()

    def solve(h: float) -> Trajectory:
        return create_solver(replace(solver_config, h=h))(problem)

    reference = None
    if config.is_linear and isinstance(
        problem.history, (ConstantHistory, RampHistory)
    ):
        linear = config.linear_problem()
        reference = partial(exact_solution, linear, config.operator)
    else:
        logging.info(f"no closed-form solution for {config.id}, using self-convergence")

    label = f"{config.id} ({config.operator.value}, {solver_config.scheme.value})"
    table = convergence_study(solve, config.steps, reference, label)
    err_console.print(table)
    emit(config, CONVERGENCE_FIELDS, [row.as_dict() for row in table])
    return table


def run_pair(config: ExperimentConfig) -> List[PairRow]:
    """Solve a problem under both operators on the same grid."""
    problem = config.nonlinear_problem()
    caputo = create_solver(config.solver_config(OperatorKind.CAPUTO))(problem)
    phitau = create_solver(config.solver_config(OperatorKind.PHITAU))(problem)
    logging.info(f"{config.id}: largest gap between operators {solver_gap(caputo, phitau):.3e}")
    return pair_rows(caputo, phitau)


def run_preset(preset: FigurePreset, out_dir: Path) -> Path:
    """Run one figure preset and write its CSV file into out_dir."""
    config = replace(preset.config, output=str(out_dir / preset.filename))
    if preset.command == "exact":
        cmd_exact(config)
    elif preset.command == "compare":
        cmd_compare(config)
    else:
        rows = run_pair(config)
        emit(config, PAIR_FIELDS, [row.as_dict() for row in rows])
    return Path(config.output)


def cmd_figure(figure: int, out_dir: Path) -> List[Path]:
    """Write the data of every curve of a figure into out_dir."""
    presets = load_presets(figure)
    progress = Progress(
        "[progress.description]{task.description}",
        SpinnerColumn(),
        "[progress.description]{task.fields[curve]}",
        BarColumn(bar_width=None),
        "{task.completed}/{task.total}",
        console=err_console,
        transient=True,
    )
    task = progress.add_task(f"figure {figure}", curve="", total=len(presets))
    paths = []
    with progress:
        for preset in presets:
            progress.update(task, curve=preset.id)
            paths.append(run_preset(preset, out_dir))
            progress.advance(task)
    logging.info(f"wrote {len(paths)} files for figure {figure} to {out_dir}")
    return paths
