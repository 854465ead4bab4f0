#!/usr/bin/env python
# encoding: utf-8
"""
Field operators of the mirror-cavity Hamiltonian: the non-adiabatic coupling Gamma_0, the
radiation-pressure operators F_0 and F_1 (quadrature, ladder and alternative constructions), their
normal-ordered and vacuum parts, the Law force f, the dynamical shift of the squared mechanical
frequency, and the cutoff-tagged scalar sums that go with them.
"""

import dataclasses
import logging
import math

from dataclasses import dataclass
from typing import List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from radpressure.exceptions import AccuracyError, DomainError
from radpressure.fock_space import (
    HBAR,
    FieldOperator,
    FockBasis,
    annihilation,
    creation,
    max_deviation,
    mirror_momentum,
    mirror_position,
    mixed_quadrature,
    momentum_P,
    quadrature_Q,
    symmetrized_product,
    zero_operator,
    zero_point_position,
)
from radpressure.mode_mixing import (
    MixingMatrix,
    ModeGrid,
    ladder_mixing_matrix,
    mixing_matrix,
    overlap_coefficient,
)

logger = logging.getLogger(__name__)

MAX_EXPANSION_RATIO = 0.1


@dataclass(frozen=True)
class SystemParams:
    mass: float
    mechanical_frequency: float
    cavity_length: float
    mode_cutoff: int
    fock_cap: int
    total_cap: Optional[int] = None
    mirror_cap: int = 6
    plasma_frequency: Optional[float] = None

    def __post_init__(self):
        for name in ("mass", "mechanical_frequency", "cavity_length"):
            value = getattr(self, name)
            if not value > 0:
                raise DomainError(f"{name} must be strictly positive, got {value}")
        for name in ("mode_cutoff", "fock_cap", "mirror_cap"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise DomainError(f"{name} must be a positive integer, got {value}")
        if self.total_cap is not None:
            if int(self.total_cap) != self.total_cap or self.total_cap < 1:
                raise DomainError(f"total_cap must be a positive integer, got {self.total_cap}")
        if self.plasma_frequency is not None and not self.plasma_frequency > 0:
            raise DomainError(
                f"plasma_frequency must be strictly positive, got {self.plasma_frequency}"
            )

    @property
    def grid(self) -> ModeGrid:
        return ModeGrid(self.cavity_length, self.mode_cutoff)

    @property
    def cutoff_frequency(self) -> float:
        if self.plasma_frequency is not None:
            return self.plasma_frequency
        return self.mode_cutoff * math.pi / self.cavity_length

    @property
    def zero_point_position(self) -> float:
        return zero_point_position(self.mass, self.mechanical_frequency)

    @property
    def coupling_strength(self) -> float:
        """lambda = (x_zpf / d) (omega_pl / Omega)"""
        return (
            self.zero_point_position
            / self.cavity_length
            * self.cutoff_frequency
            / self.mechanical_frequency
        )

    def check_scaling_cutoff(self) -> None:
        highest = self.mode_cutoff * math.pi / self.cavity_length
        if highest > self.cutoff_frequency * (1 + 1e-12):
            raise DomainError(
                f"Highest mode frequency {highest} exceeds the cutoff {self.cutoff_frequency}"
            )

    def with_coupling(self, coupling: float) -> "SystemParams":
        """Copy whose mirror mass gives the requested lambda at fixed d, Omega and cutoff."""
        if not coupling > 0:
            raise DomainError(f"coupling must be strictly positive, got {coupling}")
        x_zpf = coupling * self.cavity_length * self.mechanical_frequency / self.cutoff_frequency
        mass = HBAR / (2.0 * self.mechanical_frequency * x_zpf**2)
        return dataclasses.replace(self, mass=mass)

    def field_basis(self, padding: int = 0) -> FockBasis:
        total = None if self.total_cap is None else self.total_cap + padding
        return FockBasis(self.mode_cutoff, self.fock_cap + padding, False, total)

    def joint_basis(self) -> FockBasis:
        return FockBasis(
            self.mode_cutoff, self.fock_cap, True, self.total_cap, mirror_max=self.mirror_cap
        )


@dataclass(frozen=True, eq=False)
class HamiltonianTerms:
    H_m: FieldOperator
    H_f: FieldOperator
    F0: FieldOperator
    F1: FieldOperator
    Hint_normal: FieldOperator
    force_f: FieldOperator
    delta_omega2: FieldOperator
    vac_F0: float
    vac_F1: float
    omega_ren_sq: float
    casimir_energy: float


class LadderExpansionReport(NamedTuple):
    mode: int
    x_values: Tuple[float, ...]
    base_point_deviation: float
    fit_residual: float
    linear_dagger: float
    quadratic_dagger: float
    linear_plain: float
    quadratic_plain: float
    printed_linear_dagger: float
    printed_quadratic_dagger: float
    printed_quadratic_plain: float


class VacuumExpansion(NamedTuple):
    constant: float
    linear_scaled: float
    quadratic_scaled: float


def _alternating(grid: ModeGrid) -> np.ndarray:
    return np.array([(-1.0) ** k for k in range(1, grid.mode_cutoff + 1)])


def _check_order(mixing: MixingMatrix, n: int) -> None:
    if mixing.order != n:
        raise DomainError(f"Mixing matrix has order {mixing.order}, expected {n}")


def build_Gamma0(basis: FockBasis, grid: ModeGrid, mixing: MixingMatrix) -> FieldOperator:
    """Gamma_0 = -(1/d) sum_k P_k Q_k^(1), each product symmetrized."""
    _check_order(mixing, 1)
    total = zero_operator(basis)
    for k in range(1, grid.mode_cutoff + 1):
        total = total + symmetrized_product(
            momentum_P(basis, k, grid), mixed_quadrature(basis, k, 1, mixing, grid)
        )
    gamma = (-1.0 / grid.cavity_length) * total
    return gamma.hermitian_part()


def build_Gamma0_ladder(basis: FockBasis, grid: ModeGrid) -> FieldOperator:
    """Gamma_0 from the ladder-operator form (i hbar / 2d) sum g_kj sqrt(k/j) [...]."""
    total = zero_operator(basis)
    for k in range(1, grid.mode_cutoff + 1):
        a_k, ad_k = annihilation(basis, k), creation(basis, k)
        for j in range(1, grid.mode_cutoff + 1):
            if j == k:
                continue
            a_j, ad_j = annihilation(basis, j), creation(basis, j)
            bracket = ad_k @ ad_j - a_k @ a_j + ad_k @ a_j - ad_j @ a_k
            total = total + (overlap_coefficient(k, j) * math.sqrt(k / j)) * bracket
    gamma = (1j * HBAR / (2.0 * grid.cavity_length)) * total
    return gamma.hermitian_part()


def _pressure_coefficients(grid: ModeGrid, mixing: MixingMatrix) -> np.ndarray:
    # c_kl = sum_j (-1)^(k+j) w_k w_j M_jl
    weighted = _alternating(grid) * grid.frequencies
    return np.outer(weighted, weighted) @ mixing.entries


def build_F(n: int, basis: FockBasis, grid: ModeGrid, mixing: MixingMatrix) -> FieldOperator:
    """F_n = sum_kj (-1)^(k+j) w_k w_j Q_k Q_j^(n), returned as its Hermitian part."""
    if n not in (0, 1):
        raise DomainError(f"F_n is only defined here for n in (0, 1), got {n}")
    _check_order(mixing, n)

    coefficients = _pressure_coefficients(grid, mixing)
    quadratures = [quadrature_Q(basis, k, grid) for k in range(1, grid.mode_cutoff + 1)]
    raw = zero_operator(basis)
    for k, q_k in enumerate(quadratures):
        for l, q_l in enumerate(quadratures):
            if coefficients[k, l] != 0.0:
                raw = raw + coefficients[k, l] * (q_k @ q_l)

    result = raw.hermitian_part()
    logger.info(f"F_{n} at K={grid.mode_cutoff}: raw asymmetry {result.raw_asymmetry:.3e}")
    return result


def build_F_alternative(
    n: int,
    basis: FockBasis,
    grid: ModeGrid,
    mixings: Optional[Mapping[int, MixingMatrix]] = None,
) -> Tuple[FieldOperator, float]:
    """
    The single-sum forms of F_0 and F_1 written with mixed amplitudes.

    Returns:
        (operator, deviation): the Hermitian operator and max|operator - build_F(n)|
    """
    if n not in (0, 1):
        raise DomainError(f"F_n is only defined here for n in (0, 1), got {n}")
    if mixings is None:
        mixings = {order: mixing_matrix(grid, order) for order in (0, 1, 2)}

    omegas = grid.frequencies
    raw = zero_operator(basis)
    for k in range(1, grid.mode_cutoff + 1):
        q_k = quadrature_Q(basis, k, grid)
        q1_k = mixed_quadrature(basis, k, 1, mixings[1], grid)
        weight = omegas[k - 1] ** 2
        if n == 0:
            raw = raw + weight * (q_k @ (q_k + q1_k))
        else:
            q2_k = mixed_quadrature(basis, k, 2, mixings[2], grid)
            raw = raw + (weight / 2.0) * (q_k @ (q1_k + q2_k) + q1_k @ (q_k + q1_k))

    result = raw.hermitian_part()
    reference_mixing = mixings[n] if n in mixings else mixing_matrix(grid, n)
    deviation = max_deviation(result, build_F(n, basis, grid, reference_mixing))
    return result, deviation


def _field_displacements(basis: FockBasis, grid: ModeGrid) -> List[FieldOperator]:
    # a_k + a_k^dagger for each mode
    return [annihilation(basis, k) + creation(basis, k) for k in range(1, grid.mode_cutoff + 1)]


def build_F_ladder(
    n: int, basis: FockBasis, grid: ModeGrid, ladder_mixing: MixingMatrix
) -> FieldOperator:
    if n not in (0, 1):
        raise DomainError(f"F_n is only defined here for n in (0, 1), got {n}")
    _check_order(ladder_mixing, n)

    root_weights = _alternating(grid) * np.sqrt(grid.frequencies)
    coefficients = (HBAR / 2.0) * np.outer(root_weights, root_weights) @ ladder_mixing.entries
    displacements = _field_displacements(basis, grid)

    raw = zero_operator(basis)
    for k, x_k in enumerate(displacements):
        for s, x_s in enumerate(displacements):
            if coefficients[k, s] != 0.0:
                raw = raw + coefficients[k, s] * (x_k @ x_s)
    return raw.hermitian_part()


def normal_order_split(operator: FieldOperator) -> Tuple[FieldOperator, float]:
    """Splits off the vacuum expectation value; the vacuum is basis index 0."""
    vacuum = float(operator.matrix[0, 0].real)
    shift = FieldOperator(
        vacuum * sparse.identity(operator.dimension, format="csr"), hermitian_hint=True
    )
    normal = operator - shift
    return FieldOperator(normal.matrix, hermitian_hint=operator.hermitian_hint), vacuum


def vacuum_sum_F0(grid: ModeGrid) -> float:
    return float(np.sum(HBAR * grid.frequencies / 2.0))


def _primed_pair_sum(grid: ModeGrid) -> float:
    omegas = grid.frequencies
    total = 0.0
    for k in range(grid.mode_cutoff):
        for j in range(grid.mode_cutoff):
            if k != j:
                total += omegas[k] * omegas[j] / (omegas[k] + omegas[j])
    return total


def vacuum_sum_F1(grid: ModeGrid) -> float:
    """(hbar/2) sum over k != j of w_k w_j / (w_k + w_j)"""
    return HBAR / 2.0 * _primed_pair_sum(grid)


def renormalized_frequency_sq(params: SystemParams) -> float:
    grid = params.grid
    return params.mechanical_frequency**2 + HBAR / (
        params.mass * params.cavity_length**2
    ) * _primed_pair_sum(grid)


def static_frequency_shift(params: SystemParams) -> float:
    return renormalized_frequency_sq(params) - params.mechanical_frequency**2


def printed_renormalized_frequency_sq(params: SystemParams) -> float:
    # unprimed double sum without hbar, as the frequency shift is usually quoted
    omegas = params.grid.frequencies
    pair_sum = float(np.sum(np.outer(omegas, omegas) / np.add.outer(omegas, omegas)))
    return params.mechanical_frequency**2 + pair_sum / (params.mass * params.cavity_length**2)


def casimir_energy(q: float) -> float:
    if not q > 0:
        raise DomainError(f"Cavity length must be positive, got {q}")
    return -HBAR * math.pi / (24.0 * q)


def _normal_ordered_pairs(basis: FockBasis, coefficients: np.ndarray) -> FieldOperator:
    # sum_ks c_ks (a_k a_s + a_k^dag a_s + a_s^dag a_k + a_k^dag a_s^dag)
    size = coefficients.shape[0]
    lowering = [annihilation(basis, k) for k in range(1, size + 1)]
    raising = [creation(basis, k) for k in range(1, size + 1)]
    total = zero_operator(basis)
    for k in range(size):
        for s in range(size):
            if coefficients[k, s] == 0.0:
                continue
            pairs = (
                lowering[k] @ lowering[s]
                + raising[k] @ lowering[s]
                + raising[s] @ lowering[k]
                + raising[k] @ raising[s]
            )
            total = total + coefficients[k, s] * pairs
    return total


def build_force_f(basis: FockBasis, grid: ModeGrid) -> FieldOperator:
    """Radiation-pressure force f = :F_0:/d, built directly in normal order."""
    root_weights = _alternating(grid) * np.sqrt(grid.frequencies)
    coefficients = HBAR / (2.0 * grid.cavity_length) * np.outer(root_weights, root_weights)
    return _normal_ordered_pairs(basis, coefficients).hermitian_part()


def build_delta_omega2(
    basis: FockBasis, grid: ModeGrid, ladder_mixing: MixingMatrix, params: SystemParams
) -> FieldOperator:
    """Dynamical shift of the squared mechanical frequency, 2 :F_1: / (m d^2)."""
    _check_order(ladder_mixing, 1)
    root_weights = _alternating(grid) * np.sqrt(grid.frequencies)
    coefficients = (
        HBAR
        / (params.mass * grid.cavity_length**2)
        * np.outer(root_weights, root_weights)
        @ ladder_mixing.entries
    )
    result = _normal_ordered_pairs(basis, coefficients).hermitian_part()
    logger.info(f"Delta Omega^2 at K={grid.mode_cutoff}: raw asymmetry {result.raw_asymmetry:.3e}")
    return result


def ladder_expansion_check(
    basis: FockBasis,
    grid: ModeGrid,
    x_values: Sequence[float],
    mode: int = 1,
    degree: int = 4,
    fit_tolerance: float = 1e-9,
) -> LadderExpansionReport:
    """
    Expands the instantaneous annihilation operator a_k(d + x) = (2 hbar w_k(q))^(-1/2) (w_k(q) Q
    + i P), with Q and P held at their equilibrium values, as a_k(q) = alpha(x) a_k0 + beta(x)
    a_k0^dagger and fits alpha and beta as polynomials in x.
    """
    x_values = tuple(float(x) for x in x_values)
    if len(x_values) < degree + 1:
        raise DomainError(f"Need at least {degree + 1} samples for a degree {degree} fit")
    for x in x_values:
        if abs(x) > MAX_EXPANSION_RATIO * grid.cavity_length:
            raise DomainError(f"Sample x={x} is not small against d={grid.cavity_length}")

    q_k = quadrature_Q(basis, mode, grid)
    p_k = momentum_P(basis, mode, grid)
    lowering = annihilation(basis, mode)
    vacuum = [0] * len(basis.caps)
    excited = list(vacuum)
    excited[basis.slot_position(mode)] = 1

    alphas, betas = [], []
    base_point_deviation = 0.0
    for x in x_values:
        omega = grid.at_length(grid.cavity_length + x).frequency(mode)
        instantaneous = (1.0 / math.sqrt(2.0 * HBAR * omega)) * (omega * q_k + 1j * p_k)
        alphas.append(instantaneous.matrix[basis.index_of(vacuum), basis.index_of(excited)].real)
        betas.append(instantaneous.matrix[basis.index_of(excited), basis.index_of(vacuum)].real)
        if x == 0.0:
            base_point_deviation = max_deviation(instantaneous, lowering)

    alpha_fit = np.polyfit(x_values, alphas, degree)
    beta_fit = np.polyfit(x_values, betas, degree)
    fit_residual = max(
        float(np.max(np.abs(np.polyval(alpha_fit, x_values) - alphas))),
        float(np.max(np.abs(np.polyval(beta_fit, x_values) - betas))),
    )
    if fit_residual > fit_tolerance:
        raise AccuracyError(f"Ladder expansion fit residual {fit_residual:.3e} above tolerance")

    # polyfit returns the highest power first
    report = LadderExpansionReport(
        mode=mode,
        x_values=x_values,
        base_point_deviation=base_point_deviation,
        fit_residual=fit_residual,
        linear_dagger=float(beta_fit[-2]),
        quadratic_dagger=float(beta_fit[-3]),
        linear_plain=float(alpha_fit[-2]),
        quadratic_plain=float(alpha_fit[-3]),
        printed_linear_dagger=-0.5,
        printed_quadratic_dagger=0.25,
        printed_quadratic_plain=0.125,
    )
    logger.info(
        f"Ladder expansion mode {mode}: a^dagger coefficients "
        f"{report.linear_dagger:.6e} x + {report.quadratic_dagger:.6e} x^2"
    )
    return report


def vacuum_energy_expansion(
    grid: ModeGrid, x_values: Sequence[float], degree: int = 4
) -> VacuumExpansion:
    """
    Fits the bare vacuum energy sum_k hbar w_k(d + x)/2 in powers of x. The linear and quadratic
    coefficients are returned in units of sum_k hbar w_k0 / (2 d) and sum_k hbar w_k0 / (2 d^2).
    """
    x_values = np.asarray(x_values, dtype=float)
    energies = [vacuum_sum_F0(grid.at_length(grid.cavity_length + x)) for x in x_values]
    fit = np.polyfit(x_values, energies, degree)
    scale = vacuum_sum_F0(grid)
    d = grid.cavity_length
    return VacuumExpansion(
        constant=float(fit[-1]),
        linear_scaled=float(fit[-2]) * d / scale,
        quadratic_scaled=float(fit[-3]) * d * d / scale,
    )


def build_hamiltonian_terms(params: SystemParams) -> HamiltonianTerms:
    grid = params.grid
    basis = params.joint_basis()
    d, m = params.cavity_length, params.mass

    x = mirror_position(basis, params)
    p = mirror_momentum(basis, params)
    x_squared = x @ x
    H_m = (1.0 / (2.0 * m)) * (p @ p) + (0.5 * m * params.mechanical_frequency**2) * x_squared

    H_f = zero_operator(basis)
    for k in range(1, grid.mode_cutoff + 1):
        q_k, p_k = quadrature_Q(basis, k, grid), momentum_P(basis, k, grid)
        H_f = H_f + 0.5 * (p_k @ p_k) + (0.5 * grid.frequency(k) ** 2) * (q_k @ q_k)

    F0 = build_F(0, basis, grid, mixing_matrix(grid, 0))
    F1 = build_F(1, basis, grid, mixing_matrix(grid, 1))
    _, vac_F0 = normal_order_split(F0)
    _, vac_F1 = normal_order_split(F1)
    force = build_force_f(basis, grid)
    delta = build_delta_omega2(basis, grid, ladder_mixing_matrix(grid, 1), params)

    Hint_normal = (
        -symmetrized_product(x, force)
        + (3.0 / (2.0 * d)) * symmetrized_product(x_squared, force)
        + (0.5 * m) * symmetrized_product(x_squared, delta)
    )

    return HamiltonianTerms(
        H_m=H_m.hermitian_part(),
        H_f=H_f.hermitian_part(),
        F0=F0,
        F1=F1,
        Hint_normal=Hint_normal.hermitian_part(),
        force_f=force,
        delta_omega2=delta,
        vac_F0=vac_F0,
        vac_F1=vac_F1,
        omega_ren_sq=renormalized_frequency_sq(params),
        casimir_energy=casimir_energy(d),
    )
