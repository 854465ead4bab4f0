#!/usr/bin/env python
# encoding: utf-8
"""
Truncated multimode Fock basis (field modes 1..K, optionally a mirror oscillator in the last
slot) and the elementary operators acting on it. Units are hbar = c = 1; HBAR is kept as a name
so formulas read with their physical factors.

Ladder operators are the exact bosonic matrices cropped to the retained states. Canonical
commutators therefore only hold on the "safe" subspace strictly below every cap.
"""

import logging
import math

from dataclasses import dataclass
from numbers import Number
from typing import TYPE_CHECKING, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse

from radpressure.exceptions import DomainError
from radpressure.mode_mixing import ModeGrid, MixingMatrix

if TYPE_CHECKING:  # pragma: no cover
    from radpressure.operators import SystemParams

logger = logging.getLogger(__name__)

HBAR = 1.0
MIRROR = "mirror"

Slot = Union[int, str]


def count_states(
    field_modes: int,
    per_mode_max: int,
    include_mirror: bool = False,
    mirror_max: Optional[int] = None,
    total_excitation_cap: Optional[int] = None,
) -> int:
    """Basis dimension without enumerating the states, used by dimension guards."""
    caps = [per_mode_max] * field_modes
    if include_mirror:
        caps.append(per_mode_max if mirror_max is None else mirror_max)
    if total_excitation_cap is None:
        return math.prod(cap + 1 for cap in caps)

    # occupation-count polynomial, truncated at the total cap
    counts = np.zeros(total_excitation_cap + 1, dtype=object)
    counts[0] = 1
    for cap in caps:
        updated = np.zeros_like(counts)
        for occupation in range(min(cap, total_excitation_cap) + 1):
            updated[occupation:] += counts[: total_excitation_cap + 1 - occupation]
        counts = updated
    return int(sum(counts))


def _enumerate_states(caps: Sequence[int], total_cap: Optional[int]) -> np.ndarray:
    """Occupation tuples in lexicographic order, grown one slot at a time under the total cap."""
    states = np.zeros((1, 0), dtype=np.int64)
    totals = np.zeros(1, dtype=np.int64)
    for cap in caps:
        if total_cap is None:
            widths = np.full(len(states), cap + 1, dtype=np.int64)
        else:
            widths = np.minimum(cap, total_cap - totals) + 1
        parents = np.repeat(np.arange(len(states)), widths)
        starts = np.repeat(np.cumsum(widths) - widths, widths)
        occupations = np.arange(len(parents), dtype=np.int64) - starts
        states = np.column_stack([states[parents], occupations])
        totals = totals[parents] + occupations
    return states


@dataclass(frozen=True, eq=False)
class FockBasis:
    field_modes: int
    per_mode_max: int
    include_mirror: bool = False
    total_excitation_cap: Optional[int] = None
    mirror_max: Optional[int] = None

    def __post_init__(self):
        if self.field_modes < 0 or (self.field_modes == 0 and not self.include_mirror):
            raise DomainError(f"A basis needs at least one slot, got {self.field_modes} modes")
        if self.per_mode_max < 0:
            raise DomainError(f"per_mode_max must be non-negative, got {self.per_mode_max}")
        if self.total_excitation_cap is not None and self.total_excitation_cap < 0:
            raise DomainError(
                f"total_excitation_cap must be non-negative, got {self.total_excitation_cap}"
            )
        if self.mirror_max is None:
            object.__setattr__(self, "mirror_max", self.per_mode_max)

        caps = [self.per_mode_max] * self.field_modes
        if self.include_mirror:
            caps.append(self.mirror_max)

        if math.prod(cap + 1 for cap in caps) > np.iinfo(np.int64).max:
            raise DomainError(f"Per-slot caps {tuple(caps)} overflow the 64-bit state codes")
        states = _enumerate_states(caps, self.total_excitation_cap)

        weights = np.ones(len(caps), dtype=np.int64)
        for position in range(len(caps) - 2, -1, -1):
            weights[position] = weights[position + 1] * (caps[position + 1] + 1)

        states.setflags(write=False)
        object.__setattr__(self, "caps", tuple(caps))
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "codes", states @ weights)
        object.__setattr__(self, "_ladder_cache", {})

        logger.info(
            f"Fock basis: {self.field_modes} field modes (cap {self.per_mode_max}), "
            f"mirror={self.include_mirror}, total cap {self.total_excitation_cap}, "
            f"dimension {self.dimension}"
        )

    @property
    def dimension(self) -> int:
        return self.states.shape[0]

    @property
    def slots(self) -> List[Slot]:
        slots: List[Slot] = list(range(1, self.field_modes + 1))
        if self.include_mirror:
            slots.append(MIRROR)
        return slots

    def slot_position(self, slot: Slot) -> int:
        if slot == MIRROR:
            if not self.include_mirror:
                raise DomainError("Basis has no mirror slot")
            return self.field_modes
        if isinstance(slot, bool) or not isinstance(slot, (int, np.integer)):
            raise DomainError(f"Invalid slot {slot!r}")
        if slot < 1 or slot > self.field_modes:
            raise DomainError(f"Field mode {slot} outside 1..{self.field_modes}")
        return int(slot) - 1

    def index_of(self, occupations: Sequence[int]) -> int:
        occupations = tuple(int(n) for n in occupations)
        if len(occupations) != len(self.caps):
            raise DomainError(
                f"Occupation tuple {occupations} has {len(occupations)} slots, "
                f"basis has {len(self.caps)}"
            )
        for occupation, cap in zip(occupations, self.caps):
            if occupation < 0 or occupation > cap:
                raise DomainError(f"Occupation tuple {occupations} exceeds caps {self.caps}")
        if self.total_excitation_cap is not None and sum(occupations) > self.total_excitation_cap:
            raise DomainError(
                f"Occupation tuple {occupations} exceeds total cap {self.total_excitation_cap}"
            )
        code = int(np.dot(occupations, self.weights))
        return int(np.searchsorted(self.codes, code))

    def state(self, index: int) -> Tuple[int, ...]:
        if index < 0 or index >= self.dimension:
            raise DomainError(f"Basis index {index} outside 0..{self.dimension - 1}")
        return tuple(int(n) for n in self.states[index])

    def subspace_indices(
        self,
        max_occupation: int,
        max_mirror: Optional[int] = None,
        max_total: Optional[int] = None,
    ) -> np.ndarray:
        keep = np.all(self.states[:, : self.field_modes] <= max_occupation, axis=1)
        if self.include_mirror:
            mirror_limit = self.mirror_max if max_mirror is None else max_mirror
            keep &= self.states[:, self.field_modes] <= mirror_limit
        if max_total is not None:
            keep &= self.states.sum(axis=1) <= max_total
        return np.nonzero(keep)[0]

    def safe_indices(self, margin: int = 1) -> np.ndarray:
        max_total = None
        if self.total_excitation_cap is not None:
            max_total = self.total_excitation_cap - margin
        return self.subspace_indices(
            self.per_mode_max - margin, max_mirror=self.mirror_max - margin, max_total=max_total
        )


@dataclass(frozen=True, eq=False)
class FieldOperator:
    matrix: sparse.csr_matrix
    hermitian_hint: bool = False
    raw_asymmetry: float = 0.0

    # numpy scalars defer to __rmul__
    __array_ufunc__ = None

    def __post_init__(self):
        matrix = sparse.csr_matrix(self.matrix, dtype=complex)
        matrix.sum_duplicates()
        matrix.sort_indices()
        object.__setattr__(self, "matrix", matrix)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def _check_dimension(self, other: "FieldOperator") -> None:
        if other.dimension != self.dimension:
            raise DomainError(
                f"Operator dimensions differ: {self.dimension} and {other.dimension}"
            )

    def __add__(self, other: "FieldOperator") -> "FieldOperator":
        self._check_dimension(other)
        return FieldOperator(
            self.matrix + other.matrix, hermitian_hint=self.hermitian_hint and other.hermitian_hint
        )

    def __sub__(self, other: "FieldOperator") -> "FieldOperator":
        self._check_dimension(other)
        return FieldOperator(
            self.matrix - other.matrix, hermitian_hint=self.hermitian_hint and other.hermitian_hint
        )

    def __neg__(self) -> "FieldOperator":
        return FieldOperator(-self.matrix, hermitian_hint=self.hermitian_hint)

    def __mul__(self, scalar: Number) -> "FieldOperator":
        if not isinstance(scalar, Number):
            return NotImplemented
        real = complex(scalar).imag == 0
        return FieldOperator(scalar * self.matrix, hermitian_hint=self.hermitian_hint and real)

    __rmul__ = __mul__

    def __truediv__(self, scalar: Number) -> "FieldOperator":
        return self * (1.0 / scalar)

    def __matmul__(self, other: "FieldOperator") -> "FieldOperator":
        self._check_dimension(other)
        return FieldOperator(self.matrix @ other.matrix)

    def dagger(self) -> "FieldOperator":
        return FieldOperator(self.matrix.conj().T, hermitian_hint=self.hermitian_hint)

    def asymmetry(self) -> float:
        difference = self.matrix - self.matrix.conj().T
        return float(abs(difference).max()) if difference.nnz else 0.0

    def hermitian_part(self) -> "FieldOperator":
        return FieldOperator(
            0.5 * (self.matrix + self.matrix.conj().T),
            hermitian_hint=True,
            raw_asymmetry=self.asymmetry(),
        )

    def max_abs(self) -> float:
        return float(abs(self.matrix).max()) if self.matrix.nnz else 0.0

    def restricted(self, indices: np.ndarray) -> np.ndarray:
        return self.matrix[indices][:, indices].toarray()

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def expectation(self, vector: np.ndarray) -> complex:
        return complex(np.vdot(vector, self.matrix @ vector))


def identity(basis: FockBasis) -> FieldOperator:
    return FieldOperator(sparse.identity(basis.dimension, format="csr"), hermitian_hint=True)


def zero_operator(basis: FockBasis) -> FieldOperator:
    return FieldOperator(sparse.csr_matrix((basis.dimension, basis.dimension)), hermitian_hint=True)


def annihilation(basis: FockBasis, slot: Slot) -> FieldOperator:
    position = basis.slot_position(slot)
    cache: Dict = basis._ladder_cache
    if position in cache:
        return cache[position]

    occupations = basis.states[:, position]
    sources = np.nonzero(occupations > 0)[0]
    lowered = basis.codes[sources] - basis.weights[position]
    targets = np.searchsorted(basis.codes, lowered)
    values = np.sqrt(occupations[sources].astype(float))

    matrix = sparse.coo_matrix(
        (values, (targets, sources)), shape=(basis.dimension, basis.dimension)
    )
    operator = FieldOperator(matrix)
    cache[position] = operator
    return operator


def creation(basis: FockBasis, slot: Slot) -> FieldOperator:
    return annihilation(basis, slot).dagger()


def number_operator(basis: FockBasis, slot: Slot) -> FieldOperator:
    position = basis.slot_position(slot)
    return FieldOperator(
        sparse.diags(basis.states[:, position].astype(float), format="csr"), hermitian_hint=True
    )


def _check_field_mode(basis: FockBasis, k: int, grid: ModeGrid) -> None:
    basis.slot_position(k)
    if k > grid.mode_cutoff:
        raise DomainError(f"Mode {k} exceeds the grid cutoff {grid.mode_cutoff}")


def quadrature_Q(basis: FockBasis, k: int, grid: ModeGrid) -> FieldOperator:
    _check_field_mode(basis, k, grid)
    lowering = annihilation(basis, k)
    scale = math.sqrt(HBAR / (2.0 * grid.frequency(k)))
    return FieldOperator(scale * (lowering.matrix + lowering.matrix.T), hermitian_hint=True)


def momentum_P(basis: FockBasis, k: int, grid: ModeGrid) -> FieldOperator:
    _check_field_mode(basis, k, grid)
    lowering = annihilation(basis, k)
    scale = 1j * math.sqrt(HBAR * grid.frequency(k) / 2.0)
    return FieldOperator(scale * (lowering.matrix.T - lowering.matrix), hermitian_hint=True)


def _mixed(basis, k, n, mixing, grid, builder) -> FieldOperator:
    _check_field_mode(basis, k, grid)
    if mixing.order != n:
        raise DomainError(f"Mixing matrix has order {mixing.order}, requested order {n}")
    if mixing.mode_cutoff != grid.mode_cutoff:
        raise DomainError(
            f"Mixing matrix cutoff {mixing.mode_cutoff} differs from grid {grid.mode_cutoff}"
        )
    result = zero_operator(basis)
    for j in range(1, grid.mode_cutoff + 1):
        coefficient = mixing.coefficient(k, j)
        if coefficient != 0.0:
            result = result + coefficient * builder(basis, j, grid)
    return result


def mixed_quadrature(
    basis: FockBasis, k: int, n: int, mixing: MixingMatrix, grid: ModeGrid
) -> FieldOperator:
    """Q_k^(n) = sum_j M^(n)_kj Q_j."""
    return _mixed(basis, k, n, mixing, grid, quadrature_Q)


def mixed_momentum(
    basis: FockBasis, k: int, n: int, mixing: MixingMatrix, grid: ModeGrid
) -> FieldOperator:
    return _mixed(basis, k, n, mixing, grid, momentum_P)


def zero_point_position(mass: float, frequency: float) -> float:
    return math.sqrt(HBAR / (2.0 * mass * frequency))


def mirror_position(basis: FockBasis, params: "SystemParams") -> FieldOperator:
    lowering = annihilation(basis, MIRROR)
    x_zpf = zero_point_position(params.mass, params.mechanical_frequency)
    return FieldOperator(x_zpf * (lowering.matrix + lowering.matrix.T), hermitian_hint=True)


def mirror_momentum(basis: FockBasis, params: "SystemParams") -> FieldOperator:
    lowering = annihilation(basis, MIRROR)
    scale = 1j * math.sqrt(HBAR * params.mass * params.mechanical_frequency / 2.0)
    return FieldOperator(scale * (lowering.matrix.T - lowering.matrix), hermitian_hint=True)


def matrix_element(
    op: FieldOperator, basis: FockBasis, bra: Sequence[int], ket: Sequence[int]
) -> complex:
    if op.dimension != basis.dimension:
        raise DomainError(f"Operator dimension {op.dimension} does not match basis")
    return complex(op.matrix[basis.index_of(bra), basis.index_of(ket)])


def basis_vector(basis: FockBasis, occupations: Sequence[int]) -> np.ndarray:
    vector = np.zeros(basis.dimension, dtype=complex)
    vector[basis.index_of(occupations)] = 1.0
    return vector


def commutator(a: FieldOperator, b: FieldOperator) -> FieldOperator:
    return a @ b - b @ a


def symmetrized_product(a: FieldOperator, b: FieldOperator) -> FieldOperator:
    product = FieldOperator(0.5 * (a.matrix @ b.matrix + b.matrix @ a.matrix))
    if a.hermitian_hint and b.hermitian_hint:
        return FieldOperator(product.matrix, hermitian_hint=True)
    return product


def max_deviation(
    a: FieldOperator, b: FieldOperator, indices: Optional[np.ndarray] = None
) -> float:
    """Largest entry of |a - b|, optionally restricted to a subspace of basis indices."""
    difference = a - b
    if indices is None:
        return difference.max_abs()
    if len(indices) == 0:
        return 0.0
    return float(np.max(np.abs(difference.restricted(indices))))
