#!/usr/bin/env python
# encoding: utf-8

import math

from unittest import TestCase

from radpressure.audit import audit_mode_mixing, audit_operators, run_audit
from radpressure.gauge_series import FINDING
from radpressure.mode_mixing import ModeGrid
from radpressure.operators import SystemParams


def _params(modes, total_cap=None):
    return SystemParams(
        mass=1.0,
        mechanical_frequency=1.0,
        cavity_length=math.pi,
        mode_cutoff=modes,
        fock_cap=2,
        total_cap=total_cap,
    )


def test_mode_mixing_audit_passes():
    report = audit_mode_mixing(ModeGrid(math.pi, 4))

    TestCase().assertEqual(
        [entry.name for entry in report.entries],
        [
            "overlap_antisymmetry",
            "overlap_rational_form",
            "overlap_quadrature",
            "second_order_mixing",
            "symmetrized_frequency",
            "completeness_extrapolated",
        ],
    )
    TestCase().assertTrue(report.passed)


def test_operator_audit_passes_with_a_total_cap():
    report = audit_operators(_params(3, total_cap=4))

    failed = [entry.name for entry in report.entries if not entry.passed]
    TestCase().assertEqual(failed, [])
    TestCase().assertIn("single_mode_nullity", [entry.name for entry in report.entries])


def test_full_audit_passes_and_records_parameters():
    report = run_audit(_params(2))

    TestCase().assertTrue(report.passed)
    TestCase().assertEqual(report.parameters["mode_cutoff"], 2)
    TestCase().assertEqual(report.parameters["faults"], "")
    TestCase().assertGreater(len(report.findings), 0)


def test_full_audit_with_fault_fails():
    report = run_audit(_params(2), faults=["transpose_mixing"])

    TestCase().assertFalse(report.passed)
    TestCase().assertEqual(report.parameters["faults"], "transpose_mixing")


def test_single_mode_audit_adds_a_finding():
    report = run_audit(_params(1))
    names = [entry.name for entry in report.findings]

    TestCase().assertTrue(report.passed)
    TestCase().assertIn("single_mode_sections", names)
    TestCase().assertTrue(all(entry.kind == FINDING for entry in report.findings))
