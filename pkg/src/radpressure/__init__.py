#!/usr/bin/env python
# encoding: utf-8
"""
Numerical operator algebra for a cavity field coupled to a moving mirror: mode mixing,
radiation-pressure operators, the gauge transformation audit and low-lying spectra
"""
from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("radpressure")
except PackageNotFoundError:  # pragma: no cover
    __version__ = "unknown"

from .exceptions import (
    AccuracyError,
    AmbiguousBranchError,
    AuditFailure,
    ConfigError,
    ContractViolationError,
    ConvergenceError,
    DimensionGuardError,
    DomainError,
)
from .mode_mixing import ModeGrid, MixingMatrix, mixing_matrix, overlap_coefficient
from .fock_space import FieldOperator, FockBasis
from .operators import SystemParams, build_F, build_hamiltonian_terms
from .gauge_series import (
    GradedOperator,
    assemble_H_prime,
    audit_gauge_transformation,
    conjugate_by_T,
)
from .spectra import ModelFlags, SpectrumResult, diagonalize, solve_spectrum
