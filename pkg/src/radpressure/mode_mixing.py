#!/usr/bin/env python
# encoding: utf-8
"""
Mode-overlap coefficients g_jk between the instantaneous modes of a one dimensional cavity, and
the mixing matrices built from them.

A MixingMatrix acts on column vectors of mode amplitudes: X_k^(n) = sum_j entries[k-1, j-1] X_j.
For the amplitude mixing this means entries^(1)[k-1, j-1] = g_jk, i.e. the printed symbol is
transposed.
"""

import logging
import math

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, NamedTuple, Sequence, Tuple

import numpy as np
from scipy.integrate import simpson
from scipy.special import polygamma

from radpressure.exceptions import AccuracyError, DomainError

logger = logging.getLogger(__name__)

MAX_MIXING_ORDER = 2
QUADRATURE_TOLERANCE = 1e-8
MIN_PANELS = 64

AMPLITUDE_MIXING = "amplitude"
LADDER_MIXING = "ladder"


@dataclass(frozen=True)
class ModeGrid:
    cavity_length: float
    mode_cutoff: int

    def __post_init__(self):
        if not self.cavity_length > 0:
            raise DomainError(f"cavity_length must be positive, got {self.cavity_length}")
        if isinstance(self.mode_cutoff, bool) or int(self.mode_cutoff) != self.mode_cutoff:
            raise DomainError(f"mode_cutoff must be an integer, got {self.mode_cutoff}")
        if self.mode_cutoff < 1:
            raise DomainError(f"mode_cutoff must be at least 1, got {self.mode_cutoff}")
        object.__setattr__(self, "mode_cutoff", int(self.mode_cutoff))

    @property
    def fundamental_frequency(self) -> float:
        return math.pi / self.cavity_length

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(1, self.mode_cutoff + 1) * self.fundamental_frequency

    def frequency(self, k: int) -> float:
        _check_mode_index(k, self.mode_cutoff)
        return k * self.fundamental_frequency

    def at_length(self, q: float) -> "ModeGrid":
        return ModeGrid(q, self.mode_cutoff)


@dataclass(frozen=True, eq=False)
class MixingMatrix:
    order: int
    entries: np.ndarray
    kind: str = AMPLITUDE_MIXING
    convention: str = field(
        default="row k, column j: X_k^(n) = sum_j entries[k-1, j-1] X_j", repr=False
    )

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def mode_cutoff(self) -> int:
        return self.entries.shape[0]

    def coefficient(self, k: int, j: int) -> float:
        return float(self.entries[k - 1, j - 1])


class CompletenessExtrapolation(NamedTuple):
    cutoffs: Tuple[int, ...]
    residuals: Tuple[float, ...]
    extrapolated_lhs: float
    rhs: float
    extrapolated_residual: float


def _check_mode_index(index: int, upper: int = None) -> None:
    if isinstance(index, bool) or int(index) != index or index < 1:
        raise DomainError(f"mode index must be a positive integer, got {index}")
    if upper is not None and index > upper:
        raise DomainError(f"mode index {index} exceeds the mode cutoff {upper}")


def overlap_coefficient(j: int, k: int) -> float:
    """
    Closed-form overlap g_jk = (-1)^(k+j) 2kj / (k^2 - j^2), zero on the diagonal. j is the index
    of the differentiated mode.
    """
    _check_mode_index(j)
    _check_mode_index(k)
    if j == k:
        return 0.0
    sign = 1.0 if (k + j) % 2 == 0 else -1.0
    return sign * (2 * k * j) / (k * k - j * j)


def overlap_coefficient_exact(j: int, k: int) -> Fraction:
    _check_mode_index(j)
    _check_mode_index(k)
    if j == k:
        return Fraction(0)
    return (-1) ** (k + j) * Fraction(2 * k * j, k * k - j * j)


def _overlap_row(j: int, s_values: np.ndarray) -> np.ndarray:
    # g_js for fixed j over an array of s; the s == j entry is zero
    s_values = np.asarray(s_values, dtype=float)
    signs = np.where((s_values + j) % 2 == 0, 1.0, -1.0)
    denominators = s_values**2 - j * j
    safe = np.where(denominators == 0, 1.0, denominators)
    return np.where(denominators == 0, 0.0, signs * 2 * j * s_values / safe)


def mode_function(k: int, x, q: float):
    return np.sqrt(2.0 / q) * np.sin(k * np.pi * np.asarray(x) / q)


def mode_function_q_derivative(k: int, x, q: float):
    x = np.asarray(x)
    phase = k * np.pi * x / q
    return -0.5 / q * mode_function(k, x, q) - np.sqrt(2.0 / q) * np.cos(phase) * phase / q


def _converged_quadrature(
    integrand: Callable[[np.ndarray], np.ndarray], length: float, panels: int
) -> float:
    if panels < MIN_PANELS or panels % 2 != 0:
        raise DomainError(f"panels must be an even number >= {MIN_PANELS}, got {panels}")

    estimates = []
    for n_panels in (panels, 2 * panels):
        x = np.linspace(0.0, length, n_panels + 1)
        estimates.append(float(simpson(integrand(x), x=x)))

    change = abs(estimates[1] - estimates[0])
    if change > QUADRATURE_TOLERANCE:
        raise AccuracyError(
            f"Quadrature changed by {change:.3e} on panel doubling from {panels} panels"
        )
    return estimates[1]


def overlap_coefficient_quadrature(j: int, k: int, grid: ModeGrid, panels: int = 4096) -> float:
    """
    Integrates q * int_0^q phi_k(x) d(phi_j)/dq dx at q = d with composite Simpson.

    Args:
        j (int): index of the differentiated mode
        k (int): index of the projected mode
        grid (ModeGrid): supplies q = d and the upper bound on the indices

    Keyword arguments:
        panels (int): Simpson panels for the coarse estimate, the check uses twice as many

    Returns:
        value (float): the quadrature estimate of g_jk
    """
    _check_mode_index(j, grid.mode_cutoff)
    _check_mode_index(k, grid.mode_cutoff)
    q = grid.cavity_length

    def integrand(x):
        return q * mode_function(k, x, q) * mode_function_q_derivative(j, x, q)

    return _converged_quadrature(integrand, q, panels)


def mixing_matrix(grid: ModeGrid, n: int) -> MixingMatrix:
    if n < 0 or n > MAX_MIXING_ORDER:
        raise DomainError(f"mixing order must be between 0 and {MAX_MIXING_ORDER}, got {n}")

    size = grid.mode_cutoff
    first = np.zeros((size, size))
    for k in range(1, size + 1):
        for j in range(1, size + 1):
            first[k - 1, j - 1] = overlap_coefficient(j, k)

    return MixingMatrix(order=n, entries=np.linalg.matrix_power(first, n))


def ladder_mixing_matrix(grid: ModeGrid, n: int) -> MixingMatrix:
    if n < 0 or n > MAX_MIXING_ORDER:
        raise DomainError(f"mixing order must be between 0 and {MAX_MIXING_ORDER}, got {n}")

    size = grid.mode_cutoff
    first = np.zeros((size, size))
    for k in range(1, size + 1):
        for j in range(1, size + 1):
            first[k - 1, j - 1] = math.sqrt(k / j) * overlap_coefficient(j, k)

    return MixingMatrix(order=n, entries=np.linalg.matrix_power(first, n), kind=LADDER_MIXING)


def _completeness_rhs(j: int, k: int, grid: ModeGrid, panels: int) -> float:
    q = grid.cavity_length

    def integrand(x):
        return q * q * mode_function_q_derivative(k, x, q) * mode_function_q_derivative(j, x, q)

    return _converged_quadrature(integrand, q, panels)


def _completeness_lhs(j: int, k: int, sum_cutoff: int) -> float:
    s_values = np.arange(1, sum_cutoff + 1)
    return float(np.sum(_overlap_row(k, s_values) * _overlap_row(j, s_values)))


def completeness_residual(
    j: int, k: int, grid: ModeGrid, sum_cutoff: int, panels: int = 4096
) -> Tuple[float, float, float]:
    _check_mode_index(j, grid.mode_cutoff)
    _check_mode_index(k, grid.mode_cutoff)
    if sum_cutoff < grid.mode_cutoff:
        raise DomainError(
            f"sum_cutoff {sum_cutoff} must be at least the mode cutoff {grid.mode_cutoff}"
        )

    lhs = _completeness_lhs(j, k, sum_cutoff)
    rhs = _completeness_rhs(j, k, grid, panels)
    return lhs, rhs, abs(lhs - rhs)


def extrapolated_completeness(
    j: int,
    k: int,
    grid: ModeGrid,
    cutoffs: Sequence[int] = (64, 128, 256),
    panels: int = 4096,
) -> CompletenessExtrapolation:
    """
    Richardson extrapolation of the completeness sum to an infinite number of intermediate
    modes. The 1/s^2 asymptote of the summand is summed exactly (trigamma), which leaves a tail
    starting at 1/S^3; the extrapolation eliminates the 1/S^3 and 1/S^4 terms.
    """
    if len(cutoffs) != 3:
        raise DomainError(f"extrapolation needs exactly three cutoffs, got {len(cutoffs)}")

    rhs = _completeness_rhs(j, k, grid, panels)
    sign = 1.0 if (k + j) % 2 == 0 else -1.0

    residuals: List[float] = []
    corrected = []
    for sum_cutoff in cutoffs:
        lhs, _, residual = completeness_residual(j, k, grid, sum_cutoff, panels=panels)
        residuals.append(residual)
        tail = sign * 4 * k * j * float(polygamma(1, sum_cutoff + 1))
        corrected.append(lhs + tail)

    inverse = np.array([1.0 / s for s in cutoffs])
    design = np.column_stack([np.ones(3), inverse**3, inverse**4])
    extrapolated_lhs = float(np.linalg.solve(design, np.array(corrected))[0])

    logger.info(
        f"Completeness ({j},{k}): residuals {residuals} extrapolate to "
        f"{abs(extrapolated_lhs - rhs):.3e}"
    )
    return CompletenessExtrapolation(
        cutoffs=tuple(cutoffs),
        residuals=tuple(residuals),
        extrapolated_lhs=extrapolated_lhs,
        rhs=rhs,
        extrapolated_residual=abs(extrapolated_lhs - rhs),
    )


def symmetrized_frequency_residual(grid: ModeGrid) -> float:
    """Largest deviation of (w_k^2 M_kj + w_j^2 M_jk)/2 from (-1)^(k+j) w_k w_j over k != j."""
    omegas = grid.frequencies
    first = mixing_matrix(grid, 1).entries
    worst = 0.0
    for k in range(1, grid.mode_cutoff + 1):
        for j in range(1, grid.mode_cutoff + 1):
            if k == j:
                continue
            left = 0.5 * (
                omegas[k - 1] ** 2 * first[k - 1, j - 1] + omegas[j - 1] ** 2 * first[j - 1, k - 1]
            )
            right = (-1) ** (k + j) * omegas[k - 1] * omegas[j - 1]
            worst = max(worst, abs(left - right))
    return worst
