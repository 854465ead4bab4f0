#!/usr/bin/env python
# encoding: utf-8

import math

from unittest import TestCase

import pytest

from radpressure.exceptions import AuditFailure, ContractViolationError, DomainError
from radpressure.fock_space import (
    HBAR,
    FockBasis,
    annihilation,
    creation,
    identity,
    max_deviation,
    number_operator,
)
from radpressure.gauge_series import (
    FINDING,
    IDENTITY,
    GradedOperator,
    assemble_H_prime,
    audit_gauge_transformation,
    build_G,
    conjugate_by_T,
    graded_commutator,
    graded_multiply,
)
from radpressure.mode_mixing import ModeGrid, mixing_matrix
from radpressure.operators import SystemParams

IDENTITY_NAMES = [
    "kinetic_momentum",
    "amplitude_transform",
    "momentum_transform",
    "field_kinetic_invariance",
    "field_potential_transform",
    "linear_pressure_transform",
    "quadratic_pressure_invariance",
    "hamiltonian_assembly",
]


def _params(modes=3, fock_cap=3, total_cap=6):
    return SystemParams(
        mass=2.0,
        mechanical_frequency=1.0,
        cavity_length=math.pi,
        mode_cutoff=modes,
        fock_cap=fock_cap,
        total_cap=total_cap,
    )


def _entry(report, name):
    return next(entry for entry in report.entries if entry.name == name)


def test_momentum_moves_past_position():
    basis = FockBasis(1, 1)
    p = GradedOperator.monomial(basis, 0, 1)
    x = GradedOperator.monomial(basis, 1, 0)
    product = graded_multiply(p, x)

    TestCase().assertEqual(set(product.terms), {(1, 1), (0, 0)})
    TestCase().assertEqual(max_deviation(product.coefficient(1, 1), identity(basis)), 0.0)
    TestCase().assertEqual(
        max_deviation(product.coefficient(0, 0), -1j * HBAR * identity(basis)), 0.0
    )


def test_commutator_of_x_and_p():
    basis = FockBasis(1, 1)
    bracket = graded_commutator(
        GradedOperator.monomial(basis, 1, 0), GradedOperator.monomial(basis, 0, 1)
    )

    expected = 1j * HBAR * identity(basis)
    TestCase().assertLess(max_deviation(bracket.coefficient(0, 0), expected), 1e-15)
    TestCase().assertEqual(bracket.coefficient(1, 1).max_abs(), 0.0)


def test_reordering_p_squared_past_x_squared():
    basis = FockBasis(1, 1)
    product = graded_multiply(
        GradedOperator.monomial(basis, 0, 2), GradedOperator.monomial(basis, 2, 0)
    )
    unit = identity(basis)

    TestCase().assertEqual(max_deviation(product.coefficient(2, 2), unit), 0.0)
    TestCase().assertLess(max_deviation(product.coefficient(1, 1), -4j * HBAR * unit), 1e-15)
    TestCase().assertLess(max_deviation(product.coefficient(0, 0), -2 * HBAR**2 * unit), 1e-15)


def test_x_degree_above_two_is_dropped():
    basis = FockBasis(1, 1)
    product = graded_multiply(
        GradedOperator.monomial(basis, 2, 0), GradedOperator.monomial(basis, 1, 1)
    )

    TestCase().assertTrue(product.is_zero())
    TestCase().assertEqual(product.terms, {})


def test_p_degree_overflow_raises():
    basis = FockBasis(1, 1)
    with pytest.raises(ContractViolationError):
        graded_multiply(GradedOperator.monomial(basis, 0, 2), GradedOperator.monomial(basis, 0, 1))
    with pytest.raises(ContractViolationError):
        GradedOperator.monomial(basis, 0, 3)


def test_operators_on_different_bases_are_rejected():
    with pytest.raises(ContractViolationError):
        GradedOperator.monomial(FockBasis(1, 1), 1, 0) + GradedOperator.monomial(
            FockBasis(1, 1), 1, 0
        )
    with pytest.raises(ContractViolationError):
        GradedOperator.field(FockBasis(1, 1), identity(FockBasis(1, 2)))


def test_dagger_reorders_momentum():
    basis = FockBasis(1, 2)
    n = number_operator(basis, 1)
    adjoint = GradedOperator.monomial(basis, 1, 1, n).dagger()

    TestCase().assertEqual(max_deviation(adjoint.coefficient(1, 1), n), 0.0)
    TestCase().assertLess(max_deviation(adjoint.coefficient(0, 0), -1j * HBAR * n), 1e-15)


def test_conjugation_by_zero_generator_is_the_identity_map():
    basis = FockBasis(1, 2)
    operator = GradedOperator.monomial(basis, 0, 2) + GradedOperator.field(
        basis, number_operator(basis, 1)
    )
    result = conjugate_by_T(operator, GradedOperator.zero(basis))

    TestCase().assertEqual(max(result.residuals(operator).values()), 0.0)


def test_conjugation_rejects_invalid_generators():
    basis = FockBasis(1, 2)
    operator = GradedOperator.monomial(basis, 0, 1)
    with pytest.raises(ContractViolationError):
        conjugate_by_T(operator, GradedOperator.field(basis, number_operator(basis, 1)))
    with pytest.raises(ContractViolationError):
        conjugate_by_T(operator, GradedOperator.monomial(basis, 1, 1))


def test_conjugation_shifts_momentum_by_the_generator_gradient():
    grid = ModeGrid(math.pi, 2)
    basis = FockBasis(2, 3)
    generator = build_G(basis, grid, mixing_matrix(grid, 1))
    result = conjugate_by_T(GradedOperator.monomial(basis, 0, 1), generator)

    # T^dagger p T = p + hbar dG/dx
    gradient = generator.coefficient(1, 0)
    TestCase().assertEqual(max_deviation(result.coefficient(0, 1), identity(basis)), 0.0)
    TestCase().assertLess(max_deviation(result.coefficient(0, 0), HBAR * gradient), 1e-14)
    TestCase().assertLess(
        max_deviation(result.coefficient(1, 0), 2 * HBAR * generator.coefficient(2, 0)), 1e-14
    )


def test_graded_multiply_is_associative():
    basis = FockBasis(2, 2)
    lower, raising, count = annihilation(basis, 1), creation(basis, 2), number_operator(basis, 2)
    left = GradedOperator.monomial(basis, 1, 0, lower) + GradedOperator.field(basis, count)
    middle = GradedOperator.monomial(basis, 0, 1, raising) + GradedOperator.monomial(
        basis, 1, 0, count
    )
    right = GradedOperator.monomial(basis, 0, 1, count) + GradedOperator.field(basis, lower)

    grouped_left = graded_multiply(graded_multiply(left, middle), right)
    grouped_right = graded_multiply(left, graded_multiply(middle, right))

    TestCase().assertLess(max(grouped_left.residuals(grouped_right).values()), 1e-12)
    TestCase().assertFalse(grouped_left.is_zero())


def _conjugation_inputs():
    grid = ModeGrid(math.pi, 2)
    basis = FockBasis(2, 2)
    generator = build_G(basis, grid, mixing_matrix(grid, 1))
    kinetic = 0.25 * GradedOperator.monomial(basis, 0, 2)
    coupling = GradedOperator.monomial(basis, 1, 0, number_operator(basis, 1))
    return generator, kinetic, coupling


def test_conjugation_keeps_hermiticity():
    generator, kinetic, coupling = _conjugation_inputs()
    result = conjugate_by_T(kinetic + coupling, generator)

    TestCase().assertLess(max(result.residuals(result.dagger()).values()), 1e-12)
    TestCase().assertGreater(result.coefficient(1, 1).max_abs(), 0.0)


def test_conjugation_is_additive():
    generator, kinetic, coupling = _conjugation_inputs()
    combined = conjugate_by_T(kinetic + coupling, generator)
    separate = conjugate_by_T(kinetic, generator) + conjugate_by_T(coupling, generator)

    TestCase().assertLess(max(combined.residuals(separate).values()), 1e-12)


def test_build_G_needs_first_order_mixing():
    grid = ModeGrid(math.pi, 2)
    with pytest.raises(DomainError):
        build_G(FockBasis(2, 2), grid, mixing_matrix(grid, 2))


def test_gauge_audit_identities_hold():
    report = audit_gauge_transformation(_params())

    TestCase().assertEqual([entry.name for entry in report.identities], IDENTITY_NAMES)
    for entry in report.identities:
        TestCase().assertTrue(entry.passed, f"{entry.name}: {entry.residuals}")
        TestCase().assertLessEqual(entry.max_residual, 1e-11)
    TestCase().assertTrue(report.passed)


def test_gauge_audit_reports_the_vacuum_coefficient():
    report = audit_gauge_transformation(_params())
    finding = _entry(report, "vacuum_energy_x2_coefficient")

    TestCase().assertEqual(finding.kind, FINDING)
    TestCase().assertAlmostEqual(finding.values["computed"], 1.5, delta=1e-9)
    TestCase().assertEqual(finding.values["quoted"], 1.0)
    TestCase().assertAlmostEqual(finding.values["bare_vacuum_expansion"], 1.0, delta=1e-4)


def test_gauge_audit_amplitude_scale_finding():
    report = audit_gauge_transformation(_params())
    finding = _entry(report, "amplitude_transform_x2_scale")

    TestCase().assertAlmostEqual(finding.values["computed_times_d2"], 0.5, delta=1e-9)


def test_gauge_sign_is_fixed_by_the_residuals():
    report = audit_gauge_transformation(_params())

    TestCase().assertGreater(_entry(report, "gauge_sign_convention").max_residual, 1e-3)


@pytest.mark.parametrize("fault", ["flip_gauge_sign", "transpose_mixing"])
def test_seeded_faults_fail_the_audit(fault):
    params = _params(modes=2, fock_cap=2, total_cap=None)
    report = audit_gauge_transformation(params, faults=[fault])

    TestCase().assertFalse(report.passed)
    TestCase().assertFalse(_entry(report, "amplitude_transform").passed)


def test_strict_audit_raises_on_failure():
    with pytest.raises(AuditFailure):
        audit_gauge_transformation(
            _params(modes=2, fock_cap=2), faults=["flip_gauge_sign"], strict=True
        )


def test_unknown_fault_is_rejected():
    with pytest.raises(DomainError):
        audit_gauge_transformation(_params(modes=2, fock_cap=2), faults=["drop_hbar"])


def test_single_mode_audit_is_vacuous():
    report = audit_gauge_transformation(_params(modes=1, fock_cap=3, total_cap=None))

    TestCase().assertTrue(report.passed)
    TestCase().assertIn("single mode", _entry(report, "amplitude_transform").note)
    TestCase().assertEqual(_entry(report, "amplitude_transform_x2_scale").values, {})


def test_assembled_hamiltonian_matches_at_low_grades():
    assembly = assemble_H_prime(_params(modes=2, fock_cap=2, total_cap=None))

    TestCase().assertLessEqual(assembly.residuals[0], 1e-11)
    TestCase().assertLessEqual(assembly.residuals[1], 1e-11)
    TestCase().assertEqual(set(assembly.residuals), {0, 1, 2})


def test_report_rows_have_fixed_columns():
    rows = audit_gauge_transformation(_params(modes=2, fock_cap=2)).to_rows()

    TestCase().assertEqual(
        list(rows[0]),
        [
            "name",
            "kind",
            "status",
            "max_residual",
            "tolerance",
            "residual_grade_0",
            "residual_grade_1",
            "residual_grade_2",
            "values",
            "note",
        ],
    )
    statuses = {row["kind"]: set() for row in rows}
    for row in rows:
        statuses[row["kind"]].add(row["status"])
    TestCase().assertEqual(statuses[IDENTITY], {"pass"})
    TestCase().assertEqual(statuses[FINDING], {"info"})
