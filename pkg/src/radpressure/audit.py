#!/usr/bin/env python
# encoding: utf-8
"""
The full algebra audit: closed-form mixing coefficients against quadrature, the completeness
and frequency identities, the equivalence of every construction path for F_n and Gamma_0, the
vacuum sums, and finally the gauge-transformation audit on the graded algebra.
"""

import logging

from typing import Sequence

import numpy as np

from radpressure.fock_space import FockBasis, max_deviation
from radpressure.gauge_series import (
    AUDIT_PADDING,
    FINDING,
    HARD_TOLERANCE,
    AuditEntry,
    AuditReport,
    audit_gauge_transformation,
    scalar_entry,
)
from radpressure.mode_mixing import (
    ModeGrid,
    extrapolated_completeness,
    ladder_mixing_matrix,
    mixing_matrix,
    overlap_coefficient,
    overlap_coefficient_exact,
    overlap_coefficient_quadrature,
    symmetrized_frequency_residual,
)
from radpressure.operators import (
    SystemParams,
    build_delta_omega2,
    build_F,
    build_F_alternative,
    build_F_ladder,
    build_force_f,
    build_Gamma0,
    build_Gamma0_ladder,
    normal_order_split,
    vacuum_sum_F0,
    vacuum_sum_F1,
)

logger = logging.getLogger(__name__)

QUADRATURE_TOLERANCE = 1e-8
COMPLETENESS_TOLERANCE = 1e-4
OPERATOR_TOLERANCE = 1e-12
COMPLETENESS_MAX_INDEX = 3


def _relative(deviation: float, scale: float) -> float:
    return deviation / max(1.0, scale)


def audit_mode_mixing(
    grid: ModeGrid,
    cutoffs: Sequence[int] = (64, 128, 256),
    panels: int = 4096,
) -> AuditReport:
    report = AuditReport()
    size = grid.mode_cutoff
    first = mixing_matrix(grid, 1).entries

    report.entries.append(
        scalar_entry(
            "overlap_antisymmetry", float(np.max(np.abs(first + first.T))), OPERATOR_TOLERANCE
        )
    )

    exact = max(
        abs(float(overlap_coefficient_exact(j, k)) - overlap_coefficient(j, k))
        for j in range(1, size + 1)
        for k in range(1, size + 1)
    )
    report.entries.append(scalar_entry("overlap_rational_form", exact, OPERATOR_TOLERANCE))

    quadrature = max(
        abs(overlap_coefficient_quadrature(j, k, grid, panels=panels) - overlap_coefficient(j, k))
        for j in range(1, size + 1)
        for k in range(1, size + 1)
    )
    report.entries.append(scalar_entry("overlap_quadrature", quadrature, QUADRATURE_TOLERANCE))

    explicit = np.zeros((size, size))
    for k in range(1, size + 1):
        for j in range(1, size + 1):
            explicit[k - 1, j - 1] = sum(
                overlap_coefficient(s, k) * overlap_coefficient(j, s) for s in range(1, size + 1)
            )
    report.entries.append(
        scalar_entry(
            "second_order_mixing",
            float(np.max(np.abs(explicit - mixing_matrix(grid, 2).entries))),
            OPERATOR_TOLERANCE,
        )
    )

    report.entries.append(
        scalar_entry(
            "symmetrized_frequency",
            symmetrized_frequency_residual(grid),
            OPERATOR_TOLERANCE * max(1.0, float(grid.frequencies[-1]) ** 2),
        )
    )

    worst, monotone = 0.0, True
    indices = range(1, min(size, COMPLETENESS_MAX_INDEX) + 1)
    for j in indices:
        for k in indices:
            result = extrapolated_completeness(j, k, grid, cutoffs=cutoffs, panels=panels)
            worst = max(worst, result.extrapolated_residual)
            monotone &= all(
                later <= earlier for earlier, later in zip(result.residuals, result.residuals[1:])
            )
    entry = scalar_entry("completeness_extrapolated", worst, COMPLETENESS_TOLERANCE)
    if not monotone:
        entry.passed = False
        entry.note = "residual did not decrease on every doubling"
    report.entries.append(entry)
    return report


def audit_operators(params: SystemParams) -> AuditReport:
    """Construction-path equivalences on the field basis of the requested truncation."""
    report = AuditReport()
    grid = params.grid
    basis = params.field_basis()
    safe = basis.safe_indices()
    mixings = {order: mixing_matrix(grid, order) for order in (0, 1, 2)}

    F0 = build_F(0, basis, grid, mixings[0])
    F1 = build_F(1, basis, grid, mixings[1])
    scale0, scale1 = F0.max_abs(), F1.max_abs()

    _, deviation = build_F_alternative(0, basis, grid, mixings)
    ladder0 = build_F_ladder(0, basis, grid, ladder_mixing_matrix(grid, 0))
    report.entries.append(
        scalar_entry(
            "pressure_F0_three_forms",
            _relative(max(deviation, max_deviation(F0, ladder0)), scale0),
            OPERATOR_TOLERANCE,
        )
    )

    _, deviation = build_F_alternative(1, basis, grid, mixings)
    ladder1 = build_F_ladder(1, basis, grid, ladder_mixing_matrix(grid, 1))
    report.entries.append(
        scalar_entry(
            "pressure_F1_three_forms",
            _relative(max(deviation, max_deviation(F1, ladder1)), scale1),
            OPERATOR_TOLERANCE,
        )
    )

    # a_k a_j^dagger is cropped on the top shell of a total cap, its normal-ordered form is not
    below_total = None
    if basis.total_excitation_cap is not None:
        below_total = basis.subspace_indices(
            basis.per_mode_max, max_total=basis.total_excitation_cap - 1
        )
    gamma = build_Gamma0(basis, grid, mixings[1])
    ladder_gamma = build_Gamma0_ladder(basis, grid)
    report.entries.append(
        scalar_entry(
            "gamma0_two_forms",
            _relative(max_deviation(gamma, ladder_gamma, below_total), gamma.max_abs()),
            OPERATOR_TOLERANCE,
            note="" if below_total is None else "states below the total cap",
        )
    )

    normal0, vacuum0 = normal_order_split(F0)
    normal1, vacuum1 = normal_order_split(F1)
    report.entries.append(
        scalar_entry(
            "vacuum_sum_F0",
            abs(vacuum0 - vacuum_sum_F0(grid)),
            OPERATOR_TOLERANCE * max(1.0, vacuum_sum_F0(grid)),
        )
    )
    report.entries.append(
        scalar_entry(
            "vacuum_sum_F1",
            abs(vacuum1 - vacuum_sum_F1(grid)),
            OPERATOR_TOLERANCE * max(1.0, abs(vacuum_sum_F1(grid))),
        )
    )

    d = params.cavity_length
    force = build_force_f(basis, grid)
    report.entries.append(
        scalar_entry(
            "force_normal_order",
            _relative(max_deviation(force, (1.0 / d) * normal0, safe), scale0 / d),
            OPERATOR_TOLERANCE,
            note="states below every cap",
        )
    )

    delta = build_delta_omega2(basis, grid, ladder_mixing_matrix(grid, 1), params)
    expected = (2.0 / (params.mass * d * d)) * normal1
    report.entries.append(
        scalar_entry(
            "frequency_shift_normal_order",
            _relative(max_deviation(delta, expected, safe), expected.max_abs()),
            OPERATOR_TOLERANCE,
            note="states below every cap",
        )
    )

    single = ModeGrid(d, 1)
    single_basis = FockBasis(1, params.fock_cap)
    nullity = max(
        build_F(1, single_basis, single, mixing_matrix(single, 1)).max_abs(),
        build_Gamma0(single_basis, single, mixing_matrix(single, 1)).max_abs(),
        build_delta_omega2(single_basis, single, ladder_mixing_matrix(single, 1), params).max_abs(),
    )
    report.entries.append(scalar_entry("single_mode_nullity", nullity, 0.0))
    return report


def run_audit(
    params: SystemParams,
    faults: Sequence[str] = (),
    tolerance: float = HARD_TOLERANCE,
    padding: int = AUDIT_PADDING,
    completeness_cutoffs: Sequence[int] = (64, 128, 256),
    quadrature_panels: int = 4096,
) -> AuditReport:
    """
    Every audit in a fixed order: mode mixing, operator constructions, then the gauge
    transformation. Findings never fail the report; identities do.
    """
    report = AuditReport(
        parameters={
            "mode_cutoff": params.mode_cutoff,
            "fock_cap": params.fock_cap,
            "total_cap": params.total_cap,
            "padding": padding,
            "tolerance": tolerance,
            "faults": ",".join(faults),
        }
    )
    report.extend(audit_mode_mixing(params.grid, completeness_cutoffs, quadrature_panels))
    report.extend(audit_operators(params))
    report.extend(
        audit_gauge_transformation(params, faults=faults, tolerance=tolerance, padding=padding)
    )

    if params.mode_cutoff == 1:
        report.entries.append(
            AuditEntry(
                "single_mode_sections",
                FINDING,
                True,
                note="K=1: F_1, Delta Omega^2 and Gamma_0 sections are vacuously empty",
            )
        )

    logger.info(
        f"Audit: {sum(entry.passed for entry in report.identities)}/{len(report.identities)} "
        f"identities passed, {len(report.findings)} findings"
    )
    return report
