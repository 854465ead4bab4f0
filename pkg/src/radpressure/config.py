#!/usr/bin/env python
# encoding: utf-8
"""
Run configuration: a single JSON document with optional sections system, model, solver, output,
sweep and audit. Every key is read through get_with_alts, so a few short spellings still work
with a DeprecationWarning and a logged warning; anything left unread is rejected.
"""

import dataclasses
import json
import logging
import math

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from radpressure.exceptions import ConfigError, DomainError
from radpressure.gauge_series import AUDIT_PADDING, FAULTS, HARD_TOLERANCE
from radpressure.io_utils import DEFAULT_PRECISION, OUTPUT_FORMATS, config_sha
from radpressure.misc_utils import get_with_alts, key_variants
from radpressure.operators import SystemParams
from radpressure.spectra import (
    COUPLING_AXIS,
    DEFAULT_DIMENSION_CAP,
    DENSE_LIMIT,
    ModelFlags,
    SweepAxis,
)

logger = logging.getLogger(__name__)

SECTIONS = ("system", "model", "solver", "output", "sweep", "audit")
DEFAULT_COUPLING = 0.05


@dataclass(frozen=True)
class SolverSettings:
    method: str = "auto"
    tolerance: float = 0.0
    dense_limit: int = DENSE_LIMIT
    dimension_cap: int = DEFAULT_DIMENSION_CAP
    n_eigen: int = 8
    workers: int = 1


@dataclass(frozen=True)
class OutputSettings:
    output_format: str = "csv"
    path: Optional[str] = None
    precision: int = DEFAULT_PRECISION


@dataclass(frozen=True)
class AuditSettings:
    tolerance: float = HARD_TOLERANCE
    padding: int = AUDIT_PADDING
    completeness_cutoffs: Tuple[int, ...] = (64, 128, 256)
    quadrature_panels: int = 4096
    faults: Tuple[str, ...] = ()


@dataclass(frozen=True)
class RunConfig:
    system: SystemParams
    flags: ModelFlags = ModelFlags()
    solver: SolverSettings = SolverSettings()
    output: OutputSettings = OutputSettings()
    sweep_axes: Tuple[SweepAxis, ...] = ()
    audit: AuditSettings = AuditSettings()
    requested_coupling: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        """Resolved configuration; the output path is left out so it does not enter the hash."""
        output = dataclasses.asdict(self.output)
        output.pop("path")
        return {
            "system": dataclasses.asdict(self.system),
            "model": dataclasses.asdict(self.flags),
            "solver": dataclasses.asdict(self.solver),
            "output": output,
            "sweep": [dataclasses.asdict(axis) for axis in self.sweep_axes],
            "audit": dataclasses.asdict(self.audit),
        }

    @property
    def sha(self) -> str:
        return config_sha(self.to_dict())

    def with_overrides(
        self,
        mode_cutoff: Optional[int] = None,
        fock_cap: Optional[int] = None,
        total_cap: Optional[int] = None,
        path: Optional[str] = None,
        output_format: Optional[str] = None,
        faults: Sequence[str] = (),
    ) -> "RunConfig":
        replacements = {
            name: value
            for name, value in (
                ("mode_cutoff", mode_cutoff),
                ("fock_cap", fock_cap),
                ("total_cap", total_cap),
            )
            if value is not None
        }
        try:
            system = dataclasses.replace(self.system, **replacements)
            if self.requested_coupling is not None and "mode_cutoff" in replacements:
                # the default cutoff frequency follows K, keep lambda fixed
                system = system.with_coupling(self.requested_coupling)
        except DomainError as error:
            raise ConfigError(f"command line: {error}") from error

        output = self.output
        if path is not None:
            output = dataclasses.replace(output, path=path)
        if output_format is not None:
            if output_format not in OUTPUT_FORMATS:
                raise ConfigError(f"--format must be one of {OUTPUT_FORMATS}")
            output = dataclasses.replace(output, output_format=output_format)

        audit = self.audit
        if faults:
            _check_faults(faults, "--seed-faults")
            audit = dataclasses.replace(audit, faults=tuple(self.audit.faults) + tuple(faults))

        return dataclasses.replace(self, system=system, output=output, audit=audit)


class _SectionReader:
    def __init__(self, document: Dict[str, Any], name: str):
        data = document.get(name, {})
        if not isinstance(data, dict):
            raise ConfigError(f"{name}: expected an object, got {type(data).__name__}")
        self.name = name
        self.data = data
        self.known: List[str] = []

    def read(
        self,
        key: str,
        default: Any,
        kind: type = float,
        alternatives: Optional[List[str]] = None,
        optional: bool = False,
    ) -> Any:
        variants = key_variants(key, alternatives)
        self.known.extend(variants)
        if key not in self.data:
            # DeprecationWarning is filtered out by default outside __main__
            for variant in variants:
                if variant != key and variant in self.data:
                    logger.warning(f"{self.name}: '{variant}' is deprecated, use '{key}'")
                    break
        value = get_with_alts(
            self.data, key, default_value=default, allow_default=True, alternatives=alternatives
        )
        if value is None and (optional or default is None):
            return None
        return _coerce(value, kind, f"{self.name}.{key}")

    def finish(self) -> None:
        unknown = sorted(key for key in self.data if key not in self.known)
        if unknown:
            raise ConfigError(f"{self.name}: unknown keys {unknown}")


def _coerce(value: Any, kind: type, path: str) -> Any:
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{path}: expected true or false, got {value!r}")
        return value
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, (int, float)) or value != int(value):
            raise ConfigError(f"{path}: expected an integer, got {value!r}")
        return int(value)
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)) or math.isnan(value):
            raise ConfigError(f"{path}: expected a number, got {value!r}")
        return float(value)
    if kind is str:
        if not isinstance(value, str):
            raise ConfigError(f"{path}: expected a string, got {value!r}")
        return value
    if kind is list:
        if not isinstance(value, list):
            raise ConfigError(f"{path}: expected a list, got {value!r}")
        return value
    raise ConfigError(f"{path}: unsupported type {kind}")


def _check_faults(faults: Sequence[str], path: str) -> None:
    unknown = [fault for fault in faults if fault not in FAULTS]
    if unknown:
        raise ConfigError(f"{path}: unknown faults {unknown}, expected some of {list(FAULTS)}")


def _read_system(document: Dict[str, Any]) -> Tuple[SystemParams, Optional[float]]:
    section = _SectionReader(document, "system")
    values = {
        "mechanical_frequency": section.read("mechanical_frequency", 1.0, alternatives=["Omega"]),
        "cavity_length": section.read("cavity_length", math.pi, alternatives=["d"]),
        "mode_cutoff": section.read("mode_cutoff", 3, int, alternatives=["modes", "K"]),
        "fock_cap": section.read("fock_cap", 3, int, alternatives=["fock", "N"]),
        "total_cap": section.read("total_cap", 6, int, alternatives=["total", "C"], optional=True),
        "mirror_cap": section.read("mirror_cap", 6, int),
        "plasma_frequency": section.read("plasma_frequency", None, alternatives=["omega_pl"]),
    }
    mass = section.read("mass", None, alternatives=["m"])
    coupling = section.read("coupling", None, alternatives=["lambda"])
    section.finish()

    if mass is not None and coupling is not None:
        raise ConfigError("system: give either mass or coupling, not both")
    try:
        if mass is not None:
            return SystemParams(mass=mass, **values), None
        coupling = DEFAULT_COUPLING if coupling is None else coupling
        # placeholder mass, replaced by solving for the requested coupling
        return SystemParams(mass=1.0, **values).with_coupling(coupling), coupling
    except DomainError as error:
        raise ConfigError(f"system: {error}") from error


def _read_axes(document: Dict[str, Any]) -> Tuple[SweepAxis, ...]:
    section = _SectionReader(document, "sweep")
    entries = section.read("axes", [], list)
    section.finish()

    axes = []
    for position, entry in enumerate(entries):
        path = f"sweep.axes[{position}]"
        if not isinstance(entry, dict):
            raise ConfigError(f"{path}: expected an object")
        reader = _SectionReader({path: entry}, path)
        name = reader.read("name", None, str)
        minimum = reader.read("min", None, alternatives=["minimum"])
        maximum = reader.read("max", None, alternatives=["maximum"])
        count = reader.read("count", None, int)
        spacing = reader.read("spacing", "linear", str)
        reader.finish()
        if None in (name, minimum, maximum, count):
            raise ConfigError(f"{path}: name, min, max and count are required")
        if name == "lambda":
            name = COUPLING_AXIS
        try:
            axes.append(SweepAxis(name, minimum, maximum, count, spacing))
        except DomainError as error:
            raise ConfigError(f"{path}: {error}") from error
    return tuple(axes)


def parse_config(document: Dict[str, Any]) -> RunConfig:
    if not isinstance(document, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = sorted(key for key in document if key not in SECTIONS)
    if unknown:
        raise ConfigError(f"unknown sections {unknown}, expected some of {list(SECTIONS)}")

    system, coupling = _read_system(document)

    model = _SectionReader(document, "model")
    flags = ModelFlags(
        linear=model.read("linear", True, bool),
        quadratic_f0=model.read("quadratic_f0", False, bool),
        quadratic_f1=model.read("quadratic_f1", False, bool),
    )
    model.finish()

    solver_section = _SectionReader(document, "solver")
    solver = SolverSettings(
        method=solver_section.read("method", "auto", str),
        tolerance=solver_section.read("tolerance", 0.0),
        dense_limit=solver_section.read("dense_limit", DENSE_LIMIT, int),
        dimension_cap=solver_section.read("dimension_cap", DEFAULT_DIMENSION_CAP, int),
        n_eigen=solver_section.read("n_eigen", 8, int),
        workers=solver_section.read("workers", 1, int),
    )
    solver_section.finish()
    if solver.method not in ("auto", "dense", "iterative"):
        raise ConfigError(
            f"solver.method: expected auto, dense or iterative, got {solver.method!r}"
        )
    if solver.n_eigen < 2 or solver.workers < 1 or solver.dimension_cap < 1:
        raise ConfigError("solver: n_eigen must be at least 2, workers and dimension_cap positive")
    if solver.dense_limit < 0:
        raise ConfigError(
            f"solver.dense_limit: expected a non-negative integer, got {solver.dense_limit}"
        )

    output_section = _SectionReader(document, "output")
    output = OutputSettings(
        output_format=output_section.read("format", "csv", str),
        path=output_section.read("path", None, str),
        precision=output_section.read("precision", DEFAULT_PRECISION, int),
    )
    output_section.finish()
    if output.output_format not in OUTPUT_FORMATS:
        raise ConfigError(f"output.format: expected one of {OUTPUT_FORMATS}")
    if not 1 <= output.precision <= 17:
        raise ConfigError(f"output.precision: expected 1..17, got {output.precision}")

    audit_section = _SectionReader(document, "audit")
    audit = AuditSettings(
        tolerance=audit_section.read("tolerance", HARD_TOLERANCE),
        padding=audit_section.read("padding", AUDIT_PADDING, int),
        completeness_cutoffs=tuple(
            _coerce(value, int, "audit.completeness_cutoffs")
            for value in audit_section.read("completeness_cutoffs", [64, 128, 256], list)
        ),
        quadrature_panels=audit_section.read("quadrature_panels", 4096, int),
        faults=tuple(
            _coerce(value, str, "audit.faults") for value in audit_section.read("faults", [], list)
        ),
    )
    audit_section.finish()
    _check_faults(audit.faults, "audit.faults")

    return RunConfig(
        system=system,
        flags=flags,
        solver=solver,
        output=output,
        sweep_axes=_read_axes(document),
        audit=audit,
        requested_coupling=coupling,
    )


def load_config(config_path: Optional[str] = None) -> RunConfig:
    """Reads and validates a JSON configuration file; no path gives the default operating point."""
    if config_path is None:
        return parse_config({})
    try:
        with open(config_path, encoding="utf-8") as config_file:
            text = config_file.read()
    except OSError as error:
        raise ConfigError(f"{config_path}: cannot read configuration ({error})") from error
    try:
        document = json.loads(text)
    except json.JSONDecodeError as error:
        raise ConfigError(
            f"{config_path}: line {error.lineno} column {error.colno}: {error.msg}"
        ) from error
    logger.info(f"Read configuration from {config_path}")
    return parse_config(document)
