#!/usr/bin/env python
# encoding: utf-8
"""
Operators graded by powers of the mirror displacement x. A GradedOperator is a sum of mirror
monomials x^a p^b (canonical order, x to the left) with field-operator coefficients, truncated at
x-degree 2. The gauge transformation T = exp(iG) is applied through its nested commutator series
and the derivation of the transformed Hamiltonian is audited term by term.

The audit builds its field operators on a basis padded beyond the requested Fock cap and compares
coefficients only on the requested states, so truncation edges never enter the residuals.
"""

import logging
import math

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from radpressure.exceptions import AuditFailure, ContractViolationError, DomainError
from radpressure.fock_space import (
    HBAR,
    FieldOperator,
    FockBasis,
    identity,
    max_deviation,
    mixed_momentum,
    mixed_quadrature,
    momentum_P,
    quadrature_Q,
    symmetrized_product,
    zero_operator,
)
from radpressure.mode_mixing import MixingMatrix, ModeGrid, mixing_matrix
from radpressure.operators import (
    SystemParams,
    build_F,
    build_Gamma0,
    ladder_expansion_check,
    printed_renormalized_frequency_sq,
    static_frequency_shift,
    vacuum_energy_expansion,
    vacuum_sum_F0,
    vacuum_sum_F1,
)

logger = logging.getLogger(__name__)

MAX_X_DEGREE = 2
MAX_P_DEGREE = 2
AUDIT_PADDING = 6
HARD_TOLERANCE = 1e-11

IDENTITY = "identity"
FINDING = "finding"

FAULTS = ("flip_gauge_sign", "transpose_mixing")

Monomial = Tuple[int, int]


def _reorder_coefficients(b: int, c: int) -> List[Tuple[int, complex]]:
    # p^b x^c = sum_r r! C(b,r) C(c,r) (-i hbar)^r x^(c-r) p^(b-r)
    return [
        (r, math.factorial(r) * math.comb(b, r) * math.comb(c, r) * (-1j * HBAR) ** r)
        for r in range(min(b, c) + 1)
    ]


class GradedOperator:
    """Sum of x^a p^b (x) C_ab with a <= 2 and b <= 2."""

    __array_ufunc__ = None

    def __init__(self, basis: FockBasis, terms: Optional[Mapping[Monomial, FieldOperator]] = None):
        self.basis = basis
        self.terms: Dict[Monomial, FieldOperator] = {}
        for (a, b), coefficient in (terms or {}).items():
            if a > MAX_X_DEGREE:
                continue
            if b > MAX_P_DEGREE:
                raise ContractViolationError(f"p-degree {b} exceeds the cap of {MAX_P_DEGREE}")
            if coefficient.dimension != basis.dimension:
                raise ContractViolationError(
                    "Coefficient dimension does not match the graded basis"
                )
            self.terms[(a, b)] = coefficient

    @classmethod
    def zero(cls, basis: FockBasis) -> "GradedOperator":
        return cls(basis)

    @classmethod
    def monomial(
        cls, basis: FockBasis, a: int, b: int, coefficient: Optional[FieldOperator] = None
    ) -> "GradedOperator":
        if coefficient is None:
            coefficient = identity(basis)
        return cls(basis, {(a, b): coefficient})

    @classmethod
    def field(cls, basis: FockBasis, coefficient: FieldOperator) -> "GradedOperator":
        return cls.monomial(basis, 0, 0, coefficient)

    def _check_basis(self, other: "GradedOperator") -> None:
        if other.basis is not self.basis:
            raise ContractViolationError("Graded operators live on different bases")

    def coefficient(self, a: int, b: int) -> FieldOperator:
        if (a, b) in self.terms:
            return self.terms[(a, b)]
        return zero_operator(self.basis)

    @property
    def max_p_degree(self) -> int:
        return max((b for _, b in self.terms), default=0)

    def is_zero(self) -> bool:
        return all(coefficient.max_abs() == 0.0 for coefficient in self.terms.values())

    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        self._check_basis(other)
        terms = dict(self.terms)
        for monomial, coefficient in other.terms.items():
            terms[monomial] = terms[monomial] + coefficient if monomial in terms else coefficient
        return GradedOperator(self.basis, terms)

    def __neg__(self) -> "GradedOperator":
        return GradedOperator(self.basis, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "GradedOperator") -> "GradedOperator":
        return self + (-other)

    def __mul__(self, scalar) -> "GradedOperator":
        return GradedOperator(self.basis, {m: scalar * c for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: "GradedOperator") -> "GradedOperator":
        return graded_multiply(self, other)

    def dagger(self) -> "GradedOperator":
        # (x^a p^b C)^dagger = p^b x^a C^dagger, reordered
        result = GradedOperator.zero(self.basis)
        for (a, b), coefficient in self.terms.items():
            result = result + graded_multiply(
                GradedOperator.monomial(self.basis, 0, b),
                GradedOperator.monomial(self.basis, a, 0, coefficient.dagger()),
            )
        return result

    def residuals(
        self, other: "GradedOperator", indices: Optional[np.ndarray] = None
    ) -> Dict[int, float]:
        """Per x-degree, the largest coefficient deviation from other."""
        self._check_basis(other)
        residuals = {grade: 0.0 for grade in range(MAX_X_DEGREE + 1)}
        for monomial in set(self.terms) | set(other.terms):
            difference = self.coefficient(*monomial) - other.coefficient(*monomial)
            if indices is None:
                value = difference.max_abs()
            elif len(indices) == 0:
                value = 0.0
            else:
                value = float(np.max(np.abs(difference.restricted(indices))))
            residuals[monomial[0]] = max(residuals[monomial[0]], value)
        return residuals


def graded_multiply(left: GradedOperator, right: GradedOperator) -> GradedOperator:
    left._check_basis(right)
    accumulated: Dict[Monomial, FieldOperator] = {}
    for (a1, b1), c1 in left.terms.items():
        for (a2, b2), c2 in right.terms.items():
            if a1 + a2 - min(b1, a2) > MAX_X_DEGREE:
                continue
            product = c1 @ c2
            for r, factor in _reorder_coefficients(b1, a2):
                a, b = a1 + a2 - r, b1 + b2 - r
                if a > MAX_X_DEGREE:
                    continue
                if b > MAX_P_DEGREE:
                    raise ContractViolationError(
                        f"Product x^{a1} p^{b1} * x^{a2} p^{b2} overflows the p-degree cap"
                    )
                term = factor * product
                accumulated[(a, b)] = accumulated[(a, b)] + term if (a, b) in accumulated else term
    return GradedOperator(left.basis, accumulated)


def graded_commutator(left: GradedOperator, right: GradedOperator) -> GradedOperator:
    return graded_multiply(left, right) - graded_multiply(right, left)


def build_G(
    basis: FockBasis, grid: ModeGrid, mixing: MixingMatrix, d: Optional[float] = None
) -> GradedOperator:
    """G = (x / (hbar d)) (1 - x / 2d) sum_k P_k Q_k^(1)"""
    if mixing.order != 1:
        raise DomainError(f"G needs the first-order mixing matrix, got order {mixing.order}")
    d = grid.cavity_length if d is None else d
    summed = zero_operator(basis)
    for k in range(1, grid.mode_cutoff + 1):
        summed = summed + symmetrized_product(
            momentum_P(basis, k, grid), mixed_quadrature(basis, k, 1, mixing, grid)
        )
    summed = summed.hermitian_part()
    return GradedOperator(
        basis,
        {(1, 0): (1.0 / (HBAR * d)) * summed, (2, 0): (-1.0 / (2.0 * HBAR * d * d)) * summed},
    )


def conjugate_by_T(
    operator: GradedOperator, generator: GradedOperator, order: Optional[int] = None
) -> GradedOperator:
    """
    T^dagger O T for T = exp(iG), as sum_n (-i)^n / n! ad_G^n(O) truncated at x-degree 2.

    Every commutator with G raises the x-degree by at least one, less one for each p it
    contracts, so the default number of terms is 2 plus the p-degree of O.
    """
    operator._check_basis(generator)
    for (a, b), coefficient in generator.terms.items():
        if a == 0 and coefficient.max_abs() > 0.0:
            raise ContractViolationError("Generator has an x-independent part")
        if b > 0 and coefficient.max_abs() > 0.0:
            raise ContractViolationError("Generator must not depend on p")
    if order is None:
        order = MAX_X_DEGREE + operator.max_p_degree

    result = operator
    nested = operator
    for n in range(1, order + 1):
        nested = (-1j / n) * graded_commutator(generator, nested)
        if not nested.terms:
            break
        result = result + nested
    return result


@dataclass
class AuditEntry:
    name: str
    kind: str
    passed: bool
    residuals: Dict[int, float] = field(default_factory=dict)
    values: Dict[str, float] = field(default_factory=dict)
    note: str = ""
    residual: Optional[float] = None
    tolerance: Optional[float] = None

    @property
    def max_residual(self) -> float:
        if self.residual is not None:
            return self.residual
        return max(self.residuals.values(), default=0.0)


@dataclass
class AuditReport:
    entries: List[AuditEntry] = field(default_factory=list)
    parameters: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(entry.passed for entry in self.entries if entry.kind == IDENTITY)

    @property
    def identities(self) -> List[AuditEntry]:
        return [entry for entry in self.entries if entry.kind == IDENTITY]

    @property
    def findings(self) -> List[AuditEntry]:
        return [entry for entry in self.entries if entry.kind == FINDING]

    def extend(self, other: "AuditReport") -> None:
        self.entries.extend(other.entries)

    def raise_on_failure(self) -> None:
        failed = [entry.name for entry in self.identities if not entry.passed]
        if failed:
            raise AuditFailure(f"Audit identities failed: {', '.join(failed)}")

    def to_rows(self) -> List[Dict[str, object]]:
        rows = []
        for entry in self.entries:
            measured = entry.residuals or entry.residual is not None
            status = ("pass" if entry.passed else "fail") if entry.kind == IDENTITY else "info"
            row = {
                "name": entry.name,
                "kind": entry.kind,
                "status": status,
                "max_residual": entry.max_residual if measured else None,
                "tolerance": entry.tolerance,
            }
            for grade in range(MAX_X_DEGREE + 1):
                row[f"residual_grade_{grade}"] = entry.residuals.get(grade)
            row["values"] = ";".join(f"{key}={value:.15g}" for key, value in entry.values.items())
            row["note"] = entry.note
            rows.append(row)
        return rows


def scalar_entry(name: str, residual: float, tolerance: float, note: str = "") -> AuditEntry:
    passed = bool(residual <= tolerance)
    logger.info(f"{name}: {'pass' if passed else 'FAIL'} residual {residual:.3e}")
    return AuditEntry(
        name, IDENTITY, passed, note=note, residual=float(residual), tolerance=tolerance
    )


def identity_entry(
    name: str,
    residuals: Mapping[int, float],
    tolerance: float,
    grades: Iterable[int] = (0, 1, 2),
    note: str = "",
) -> AuditEntry:
    checked = {grade: residuals.get(grade, 0.0) for grade in grades}
    passed = all(value <= tolerance for value in checked.values())
    entry = AuditEntry(name, IDENTITY, passed, residuals=checked, note=note, tolerance=tolerance)
    logger.info(f"{name}: {'pass' if passed else 'FAIL'} residuals {checked}")
    return entry


class HPrimeAssembly(NamedTuple):
    conjugated: GradedOperator
    direct: GradedOperator
    difference: GradedOperator
    residuals: Dict[int, float]


class _AuditContext:
    """Field operators on the padded basis shared by every audited identity."""

    def __init__(
        self, params: SystemParams, faults: Sequence[str] = (), padding: int = AUDIT_PADDING
    ):
        unknown = [fault for fault in faults if fault not in FAULTS]
        if unknown:
            raise DomainError(f"Unknown fault names {unknown}; known faults are {list(FAULTS)}")

        self.params = params
        self.grid = params.grid
        self.d = params.cavity_length
        self.basis = params.field_basis(padding=padding)
        self.target = self.basis.subspace_indices(params.fock_cap, max_total=params.total_cap)

        grid, basis = self.grid, self.basis
        modes = range(1, grid.mode_cutoff + 1)
        self.first = mixing_matrix(grid, 1)
        self.second = mixing_matrix(grid, 2)
        expected_first = self.first
        if "transpose_mixing" in faults:
            expected_first = MixingMatrix(order=1, entries=self.first.entries.T)

        self.omegas = grid.frequencies
        self.Q = [quadrature_Q(basis, k, grid) for k in modes]
        self.P = [momentum_P(basis, k, grid) for k in modes]
        self.Q1 = [mixed_quadrature(basis, k, 1, expected_first, grid) for k in modes]
        self.Q2 = [mixed_quadrature(basis, k, 2, self.second, grid) for k in modes]
        self.P1 = [mixed_momentum(basis, k, 1, expected_first, grid) for k in modes]
        self.P2 = [mixed_momentum(basis, k, 2, self.second, grid) for k in modes]

        self.G = build_G(basis, grid, self.first)
        if "flip_gauge_sign" in faults:
            self.G = -self.G
        self.gamma = build_Gamma0(basis, grid, self.first)

    def monomial(self, a: int, b: int, coefficient: Optional[FieldOperator] = None):
        return GradedOperator.monomial(self.basis, a, b, coefficient)

    def residuals(self, left: GradedOperator, right: GradedOperator) -> Dict[int, float]:
        return left.residuals(right, self.target)

    def weighted_sum(self, pieces: Iterable[FieldOperator]) -> FieldOperator:
        total = zero_operator(self.basis)
        for piece in pieces:
            total = total + piece
        return total

    def potential(self) -> FieldOperator:
        return self.weighted_sum(w**2 * (q @ q) for w, q in zip(self.omegas, self.Q))

    def kinetic_momentum(self) -> GradedOperator:
        return (
            self.monomial(0, 1)
            + GradedOperator.field(self.basis, self.gamma)
            + self.monomial(1, 0, (-1.0 / self.d) * self.gamma)
        )

    def expanded_field_terms(self) -> Tuple[GradedOperator, GradedOperator, GradedOperator]:
        """Field energy, linear and quadratic pressure terms of the expanded Hamiltonian."""
        kinetic = self.weighted_sum(0.5 * (p @ p) for p in self.P)
        field_energy = GradedOperator.field(self.basis, kinetic + 0.5 * self.potential())
        linear = self.monomial(1, 0, (-1.0 / self.d) * self.potential())
        quadratic = self.monomial(2, 0, (3.0 / (2.0 * self.d**2)) * self.potential())
        return field_energy, linear, quadratic


def _mirror_terms(context: _AuditContext) -> GradedOperator:
    # p^2 / 2m + m Omega^2 x^2 / 2
    params = context.params
    return (1.0 / (2.0 * params.mass)) * context.monomial(0, 2) + (
        0.5 * params.mass * params.mechanical_frequency**2
    ) * context.monomial(2, 0)


def _assemble(context: _AuditContext) -> HPrimeAssembly:
    params, basis, d = context.params, context.basis, context.d

    momentum = conjugate_by_T(context.kinetic_momentum(), context.G)
    kinetic = (1.0 / (2.0 * params.mass)) * graded_multiply(momentum, momentum)
    potential = (0.5 * params.mass * params.mechanical_frequency**2) * context.monomial(2, 0)
    conjugated = kinetic + potential
    for piece in context.expanded_field_terms():
        conjugated = conjugated + conjugate_by_T(piece, context.G)

    F0 = build_F(0, basis, context.grid, mixing_matrix(context.grid, 0))
    F1 = build_F(1, basis, context.grid, context.first)
    kinetic_field = context.weighted_sum(0.5 * (p @ p) for p in context.P)
    direct = (
        _mirror_terms(context)
        + GradedOperator.field(basis, kinetic_field + 0.5 * context.potential())
        + context.monomial(1, 0, (-1.0 / d) * F0)
        + context.monomial(2, 0, (1.0 / d**2) * (1.5 * F0 + F1))
    )
    difference = conjugated - direct
    return HPrimeAssembly(conjugated, direct, difference, context.residuals(conjugated, direct))


def assemble_H_prime(params: SystemParams, padding: int = AUDIT_PADDING) -> HPrimeAssembly:
    """
    The transformed Hamiltonian two ways: by conjugating the expanded Hamiltonian with T, and
    directly from the mirror, field and interaction terms with F_0 and F_1. The residuals are
    restricted to the requested Fock states.
    """
    return _assemble(_AuditContext(params, padding=padding))


def _amplitude_expectation(context: _AuditContext, k: int, momenta: bool) -> GradedOperator:
    base, first, second = (context.P, context.P1, context.P2) if momenta else (
        context.Q,
        context.Q1,
        context.Q2,
    )
    d = context.d
    return (
        GradedOperator.field(context.basis, base[k])
        + context.monomial(1, 0, (-1.0 / d) * first[k])
        + context.monomial(2, 0, (1.0 / (2.0 * d * d)) * (first[k] + second[k]))
    )


def _max_residuals(collected: Sequence[Mapping[int, float]]) -> Dict[int, float]:
    merged = {grade: 0.0 for grade in range(MAX_X_DEGREE + 1)}
    for residuals in collected:
        for grade, value in residuals.items():
            merged[grade] = max(merged[grade], value)
    return merged


def _sym_sum(context: _AuditContext, left: Sequence[FieldOperator], right) -> FieldOperator:
    return context.weighted_sum(
        w**2 * symmetrized_product(a, b) for w, a, b in zip(context.omegas, left, right)
    )


def _projection(block: np.ndarray, direction: np.ndarray) -> float:
    norm = float(np.real(np.vdot(direction, direction)))
    if norm == 0.0:
        return float("nan")
    return float(np.real(np.vdot(direction, block)) / norm)


def audit_gauge_transformation(
    params: SystemParams,
    faults: Sequence[str] = (),
    tolerance: float = HARD_TOLERANCE,
    padding: int = AUDIT_PADDING,
    strict: bool = False,
) -> AuditReport:
    """
    Runs every step of the gauge transformation through conjugate_by_T.

    Identities (kinetic momentum, amplitude and momentum transforms, the four transformed terms of
    the expanded Hamiltonian and the grade 0/1 part of the assembled Hamiltonian) are pass/fail.
    Quantities whose quoted values disagree with the algebra are reported as findings.

    Args:
        params (SystemParams): cavity, mirror and truncation parameters

    Keyword arguments:
        faults (list): negative controls, see FAULTS
        tolerance (float): largest accepted per-grade residual
        padding (int): extra quanta per mode carried beyond the requested Fock cap
        strict (bool): raise AuditFailure instead of returning a failing report

    Returns:
        report (AuditReport): identity and finding entries in a fixed order
    """
    context = _AuditContext(params, faults=faults, padding=padding)
    grid, basis, d = context.grid, context.basis, context.d
    single_mode = grid.mode_cutoff == 1
    vacuous = "single mode: mixing terms vanish identically" if single_mode else ""
    report = AuditReport(
        parameters={
            "mode_cutoff": grid.mode_cutoff,
            "fock_cap": params.fock_cap,
            "total_cap": params.total_cap,
            "padding": padding,
            "faults": ",".join(faults),
        }
    )
    logger.info(
        f"Gauge audit on padded basis of dimension {basis.dimension}, "
        f"{len(context.target)} reported states"
    )

    transformed = conjugate_by_T(context.kinetic_momentum(), context.G)
    report.entries.append(
        identity_entry(
            "kinetic_momentum", context.residuals(transformed, context.monomial(0, 1)), tolerance
        )
    )

    for name, momenta in (("amplitude_transform", False), ("momentum_transform", True)):
        collected = []
        for k in range(grid.mode_cutoff):
            source = (context.P if momenta else context.Q)[k]
            result = conjugate_by_T(GradedOperator.field(basis, source), context.G)
            collected.append(context.residuals(result, _amplitude_expectation(context, k, momenta)))
        report.entries.append(
            identity_entry(name, _max_residuals(collected), tolerance, note=vacuous)
        )

    field_energy_kinetic = GradedOperator.field(
        basis, context.weighted_sum(0.5 * (p @ p) for p in context.P)
    )
    report.entries.append(
        identity_entry(
            "field_kinetic_invariance",
            context.residuals(
                conjugate_by_T(field_energy_kinetic, context.G), field_energy_kinetic
            ),
            tolerance,
        )
    )

    potential = GradedOperator.field(basis, 0.5 * context.potential())
    cross = _sym_sum(context, context.Q, context.Q1)
    second_order = _sym_sum(context, context.Q, context.Q2) + context.weighted_sum(
        w**2 * (q1 @ q1) for w, q1 in zip(context.omegas, context.Q1)
    )
    expected_potential = (
        potential
        + context.monomial(1, 0, (-1.0 / d) * cross)
        + context.monomial(2, 0, (1.0 / (2.0 * d * d)) * (cross + second_order))
    )
    transformed_potential = conjugate_by_T(potential, context.G)
    report.entries.append(
        identity_entry(
            "field_potential_transform",
            context.residuals(transformed_potential, expected_potential),
            tolerance,
            note=vacuous,
        )
    )

    linear = context.monomial(1, 0, (-1.0 / d) * context.potential())
    expected_linear = linear + context.monomial(2, 0, (2.0 / (d * d)) * cross)
    report.entries.append(
        identity_entry(
            "linear_pressure_transform",
            context.residuals(conjugate_by_T(linear, context.G), expected_linear),
            tolerance,
            note=vacuous,
        )
    )

    quadratic = context.monomial(2, 0, (3.0 / (2.0 * d * d)) * context.potential())
    report.entries.append(
        identity_entry(
            "quadratic_pressure_invariance",
            context.residuals(conjugate_by_T(quadratic, context.G), quadratic),
            tolerance,
        )
    )

    assembly = _assemble(context)
    report.entries.append(
        identity_entry(
            "hamiltonian_assembly",
            assembly.residuals,
            tolerance,
            grades=(0, 1),
            note="grade 2 reported separately",
        )
    )

    report.entries.extend(_findings(context, assembly, transformed_potential))

    if strict:
        report.raise_on_failure()
    return report


def _findings(
    context: _AuditContext, assembly: HPrimeAssembly, transformed_potential: GradedOperator
) -> List[AuditEntry]:
    params, grid, basis, d = context.params, context.grid, context.basis, context.d
    findings = []

    findings.append(
        AuditEntry(
            "quadratic_interaction_assembly",
            FINDING,
            True,
            residuals={2: assembly.residuals[2]},
            note="conjugated minus directly assembled Hamiltonian at x^2",
        )
    )

    # vacuum part of the x^2 field terms after the transformation
    field_terms = GradedOperator.zero(basis)
    for piece in context.expanded_field_terms():
        field_terms = field_terms + conjugate_by_T(piece, context.G)
    vacuum_x2 = float(field_terms.coefficient(2, 0).matrix[0, 0].real) * d * d
    computed = (vacuum_x2 - vacuum_sum_F1(grid)) / vacuum_sum_F0(grid)
    bare = vacuum_energy_expansion(grid, np.linspace(-0.01 * d, 0.01 * d, 9))
    findings.append(
        AuditEntry(
            "vacuum_energy_x2_coefficient",
            FINDING,
            True,
            values={
                "computed": computed,
                "quoted": 1.0,
                "bare_vacuum_expansion": bare.quadratic_scaled,
                "unaccounted_energy_scale": (computed - 1.0) * vacuum_sum_F0(grid),
            },
            note="coefficient of sum hbar w_k0 / 2 multiplying x^2 / d^2",
        )
    )

    primed = static_frequency_shift(params)
    quoted = printed_renormalized_frequency_sq(params) - params.mechanical_frequency**2
    findings.append(
        AuditEntry(
            "static_frequency_shift",
            FINDING,
            True,
            values={
                "primed_with_hbar": primed,
                "quoted_unprimed": quoted,
                "difference": quoted - primed,
            },
            note=f"cutoff K={grid.mode_cutoff}",
        )
    )

    values = {}
    note = "single mode: no second-order mixing" if grid.mode_cutoff == 1 else ""
    if grid.mode_cutoff > 1:
        projections = []
        for k in range(grid.mode_cutoff):
            result = conjugate_by_T(GradedOperator.field(basis, context.Q[k]), context.G)
            block = result.coefficient(2, 0).restricted(context.target) - context.Q1[
                k
            ].restricted(context.target) / (2.0 * d * d)
            projections.append(_projection(block, context.Q2[k].restricted(context.target)))
        values = {
            "computed_times_d2": float(np.nanmean(projections)) * d * d,
            "quoted_times_d2": d / 2.0,
        }
    findings.append(
        AuditEntry("amplitude_transform_x2_scale", FINDING, True, values=values, note=note)
    )

    quoted_linear = context.weighted_sum(
        w * symmetrized_product(q, q1) for w, q, q1 in zip(context.omegas, context.Q, context.Q1)
    )
    residual = max_deviation(
        (-1.0 / d) * quoted_linear, transformed_potential.coefficient(1, 0), context.target
    )
    findings.append(
        AuditEntry(
            "potential_transform_quoted_prefactor",
            FINDING,
            True,
            residuals={1: residual},
            note="linear term with w_k0 in place of w_k0^2",
        )
    )

    ladder_basis = FockBasis(grid.mode_cutoff, max(params.fock_cap, 1))
    ladder = ladder_expansion_check(ladder_basis, grid, np.linspace(-0.01 * d, 0.01 * d, 9))
    findings.append(
        AuditEntry(
            "ladder_expansion_scale",
            FINDING,
            True,
            values={
                "linear_dagger_times_d": ladder.linear_dagger * d,
                "quadratic_dagger_times_d2": ladder.quadratic_dagger * d * d,
                "quadratic_plain_times_d2": ladder.quadratic_plain * d * d,
                "quoted_linear_dagger": ladder.printed_linear_dagger,
                "quoted_quadratic_dagger": ladder.printed_quadratic_dagger,
            },
            note="quoted coefficients carry no powers of 1/d",
        )
    )

    flipped = conjugate_by_T(GradedOperator.field(basis, context.Q[0]), -context.G)
    findings.append(
        AuditEntry(
            "gauge_sign_convention",
            FINDING,
            True,
            residuals={1: context.residuals(flipped, _amplitude_expectation(context, 0, False))[1]},
            note="amplitude transform residual with the generator sign reversed",
        )
    )
    return findings
