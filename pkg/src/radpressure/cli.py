#!/usr/bin/env python
# encoding: utf-8
"""
radpressure command line: coefficients, audit, spectrum and sweep.

Exit codes: 0 success, 1 audit identity failed, 2 configuration or I/O error, 3 numerical failure.
"""

import argparse
import dataclasses
import logging
import os
import sys

from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import scipy
from botocore.exceptions import BotoCoreError, ClientError

from radpressure import __version__
from radpressure.audit import run_audit
from radpressure.config import RunConfig, load_config
from radpressure.exceptions import (
    AccuracyError,
    AmbiguousBranchError,
    AuditFailure,
    ConfigError,
    ContractViolationError,
    ConvergenceError,
    DimensionGuardError,
    DomainError,
)
from radpressure.io_utils import write_rows
from radpressure.misc_utils import initialise_logger
from radpressure.mode_mixing import (
    extrapolated_completeness,
    overlap_coefficient,
    overlap_coefficient_exact,
    overlap_coefficient_quadrature,
)
from radpressure.print_utils import print_table_from_list_of_dicts, status_text
from radpressure.spectra import (
    COUPLING_AXIS,
    expand_grid,
    fit_power_law,
    solve_spectrum,
    sweep,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_AUDIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

OUTPUT_ENVIRONMENT_VARIABLE = "RADPRESSURE_OUTPUT"
COMPLETENESS_MAX_INDEX = 3


def _metadata(command: str, config: RunConfig, **extra: Any) -> Dict[str, Any]:
    system = config.system
    metadata = {
        "command": command,
        "config_sha": config.sha,
        "radpressure_version": __version__,
        "numpy_version": np.__version__,
        "scipy_version": scipy.__version__,
        "mode_cutoff": system.mode_cutoff,
        "fock_cap": system.fock_cap,
        "total_cap": system.total_cap,
        "mirror_cap": system.mirror_cap,
        "cavity_length": system.cavity_length,
        "cutoff_frequency": system.cutoff_frequency,
        "precision": config.output.precision,
    }
    metadata.update(extra)
    return metadata


def _emit(
    config: RunConfig, rows: List[Dict[str, Any]], metadata: Dict[str, Any], quiet: bool
) -> None:
    if not quiet:
        print_table_from_list_of_dicts(rows)
    if config.output.path is not None:
        write_rows(
            config.output.path,
            rows,
            metadata,
            output_format=config.output.output_format,
            precision=config.output.precision,
        )


def cmd_coefficients(config: RunConfig, quiet: bool = False) -> int:
    grid = config.system.grid
    panels = config.audit.quadrature_panels
    rows = []
    for j in range(1, grid.mode_cutoff + 1):
        for k in range(1, grid.mode_cutoff + 1):
            completeness = None
            if j <= COMPLETENESS_MAX_INDEX and k <= COMPLETENESS_MAX_INDEX:
                completeness = extrapolated_completeness(
                    j, k, grid, cutoffs=config.audit.completeness_cutoffs, panels=panels
                ).extrapolated_residual
            rows.append(
                {
                    "j": j,
                    "k": k,
                    "g_jk": overlap_coefficient(j, k),
                    "g_jk_exact": str(overlap_coefficient_exact(j, k)),
                    "g_jk_quadrature": overlap_coefficient_quadrature(j, k, grid, panels=panels),
                    "completeness_residual": completeness,
                }
            )
    _emit(config, rows, _metadata("coefficients", config), quiet)
    return EXIT_OK


def cmd_audit(config: RunConfig, quiet: bool = False) -> int:
    report = run_audit(
        config.system,
        faults=config.audit.faults,
        tolerance=config.audit.tolerance,
        padding=config.audit.padding,
        completeness_cutoffs=config.audit.completeness_cutoffs,
        quadrature_panels=config.audit.quadrature_panels,
    )
    rows = report.to_rows()
    if not quiet:
        for row in rows:
            print(f"{status_text(row['status'])} {row['name']}", flush=True)
    metadata = _metadata(
        "audit",
        config,
        identities=len(report.identities),
        identities_passed=sum(entry.passed for entry in report.identities),
        findings=len(report.findings),
        faults=",".join(config.audit.faults),
        tolerance=config.audit.tolerance,
        padding=config.audit.padding,
    )
    _emit(config, rows, metadata, quiet=True)
    return EXIT_OK if report.passed else EXIT_AUDIT_FAILED


def cmd_spectrum(config: RunConfig, quiet: bool = False) -> int:
    solver = config.solver
    settings = dict(
        n_eigen=solver.n_eigen,
        solver=solver.method,
        dimension_cap=solver.dimension_cap,
        tolerance=solver.tolerance,
        dense_limit=solver.dense_limit,
    )
    result = solve_spectrum(config.system, config.flags, **settings)
    toggled = dataclasses.replace(config.flags, quadratic_f1=not config.flags.quadratic_f1)
    comparison = solve_spectrum(config.system, toggled, **settings)
    with_f1, without_f1 = result, comparison
    if not config.flags.quadratic_f1:
        with_f1, without_f1 = comparison, result

    rows = [
        {
            "index": index,
            "energy": float(energy),
            "excitation": float(energy - result.ground_energy),
        }
        for index, energy in enumerate(result.eigenvalues)
    ]
    populations = {
        f"population_{k}": value for k, value in enumerate(result.mode_populations, start=1)
    }
    metadata = _metadata(
        "spectrum",
        config,
        model=config.flags.label,
        solver=result.solver,
        eigen_residual=result.residual,
        dimension=len(result.ground_state),
        ground_energy=result.ground_energy,
        mechanical_gap=result.mechanical_gap,
        mirror_population=result.mirror_population,
        **populations,
        coupling_lambda=result.coupling_strength,
        ratio_quad_F0=result.ratio_quad_F0,
        ratio_quad_F1=result.ratio_quad_F1,
        gap_difference_F1=with_f1.mechanical_gap - without_f1.mechanical_gap,
        ground_energy_difference_F1=with_f1.ground_energy - without_f1.ground_energy,
    )
    _emit(config, rows, metadata, quiet)
    return EXIT_OK


def cmd_sweep(config: RunConfig, quiet: bool = False) -> int:
    if not config.sweep_axes:
        raise ConfigError("sweep: at least one axis is required in sweep.axes")
    solver = config.solver
    points = expand_grid(config.system, config.sweep_axes)
    rows = sweep(
        points,
        config.flags,
        n_eigen=solver.n_eigen,
        solver=solver.method,
        dimension_cap=solver.dimension_cap,
        tolerance=solver.tolerance,
        workers=solver.workers,
        dense_limit=solver.dense_limit,
    )
    succeeded = [row for row in rows if row.status == "ok"]

    extra: Dict[str, Any] = {
        "model": config.flags.label,
        "points": len(rows),
        "failed_points": len(rows) - len(succeeded),
        "solver_tolerance": solver.tolerance,
    }
    varying = [axis.name for axis in config.sweep_axes if axis.count > 1]
    if varying == [COUPLING_AXIS]:
        shifts = [
            (row.coupling_strength, abs(row.mechanical_gap - row.params.mechanical_frequency))
            for row in succeeded
        ]
        shifts = [(coupling, shift) for coupling, shift in shifts if shift > 0.0]
        if len(shifts) >= 2:
            fit = fit_power_law(*zip(*shifts))
            extra["lambda_exponent"] = fit.exponent
            logger.info(f"Gap shift scales as lambda^{fit.exponent:.4f}")

    table = [row.to_dict() for row in rows]
    _emit(config, table, _metadata("sweep", config, **extra), quiet)
    return EXIT_OK if succeeded else EXIT_NUMERICAL


COMMANDS = {
    "coefficients": cmd_coefficients,
    "audit": cmd_audit,
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radpressure",
        description="Mirror-field Hamiltonian with quadratic radiation-pressure corrections",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        subparser = subparsers.add_parser(name)
        subparser.add_argument("--config", help="JSON configuration file")
        subparser.add_argument("--out", help="output file, local path or s3:// URI")
        subparser.add_argument("--format", choices=("csv", "json"), dest="output_format")
        subparser.add_argument("--modes", type=int, help="number of field modes K")
        subparser.add_argument("--fock", type=int, help="per-mode Fock cap N")
        subparser.add_argument("--total-cap", type=int, help="total excitation cap C")
        subparser.add_argument(
            "--seed-faults",
            action="append",
            default=[],
            metavar="NAME",
            help="negative control for testing the audit",
        )
        subparser.add_argument("--log-file", help="also log to this file")
        subparser.add_argument("--verbose", action="store_true")
        subparser.add_argument("--quiet", action="store_true", help="no console table")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.log_file is not None:
        initialise_logger(args.log_file, mode="both", verbose=args.verbose)
    else:
        initialise_logger(mode="console only", verbose=args.verbose)
    logging.captureWarnings(True)

    try:
        out = args.out if args.out is not None else os.getenv(OUTPUT_ENVIRONMENT_VARIABLE)
        config = load_config(args.config).with_overrides(
            mode_cutoff=args.modes,
            fock_cap=args.fock,
            total_cap=args.total_cap,
            path=out or None,
            output_format=args.output_format,
            faults=args.seed_faults,
        )
        logger.info(f"Running {args.command} with configuration {config.sha}")
        return COMMANDS[args.command](config, quiet=args.quiet)
    except AuditFailure as error:
        logger.error(f"Audit failed: {error}")
        return EXIT_AUDIT_FAILED
    except (
        ConfigError,
        ContractViolationError,
        DimensionGuardError,
        DomainError,
        OSError,
        BotoCoreError,
        ClientError,
    ) as error:
        logger.error(f"{type(error).__name__}: {error}")
        return EXIT_CONFIG
    except (
        AccuracyError,
        AmbiguousBranchError,
        ConvergenceError,
        MemoryError,
        np.linalg.LinAlgError,
    ) as error:
        logger.error(f"{type(error).__name__}: {error}")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
