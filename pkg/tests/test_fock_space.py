#!/usr/bin/env python
# encoding: utf-8

import itertools
import math

from unittest import TestCase

import numpy as np
import pytest

from radpressure.exceptions import DomainError
from radpressure.fock_space import (
    HBAR,
    MIRROR,
    FockBasis,
    annihilation,
    basis_vector,
    commutator,
    count_states,
    creation,
    identity,
    matrix_element,
    max_deviation,
    mirror_momentum,
    mirror_position,
    mixed_quadrature,
    momentum_P,
    number_operator,
    quadrature_Q,
    symmetrized_product,
)
from radpressure.mode_mixing import ModeGrid, mixing_matrix


def test_count_states_matches_enumeration():
    for modes, cap, mirror, total in [(2, 3, False, None), (3, 3, True, 4), (2, 5, True, 3)]:
        basis = FockBasis(modes, cap, include_mirror=mirror, total_excitation_cap=total)
        TestCase().assertEqual(
            count_states(modes, cap, include_mirror=mirror, total_excitation_cap=total),
            basis.dimension,
        )


def test_count_states_without_total_cap():
    TestCase().assertEqual(count_states(3, 2), 27)
    TestCase().assertEqual(count_states(2, 2, include_mirror=True, mirror_max=4), 45)


def test_basis_ordering_is_lexicographic_with_mirror_last():
    basis = FockBasis(2, 1, include_mirror=True, mirror_max=2)

    TestCase().assertEqual(basis.state(0), (0, 0, 0))
    TestCase().assertEqual(basis.state(1), (0, 0, 1))
    TestCase().assertEqual(basis.state(3), (0, 1, 0))
    TestCase().assertEqual(basis.index_of((1, 0, 2)), 8)
    TestCase().assertEqual(basis.slots, [1, 2, MIRROR])


def test_index_of_respects_total_cap():
    basis = FockBasis(3, 2, total_excitation_cap=2)

    TestCase().assertEqual(basis.state(basis.index_of((1, 0, 1))), (1, 0, 1))
    with pytest.raises(DomainError):
        basis.index_of((1, 1, 1))
    with pytest.raises(DomainError):
        basis.index_of((3, 0, 0))
    with pytest.raises(DomainError):
        basis.index_of((0, 0))


def test_basis_rejects_invalid_slots():
    basis = FockBasis(2, 2)

    with pytest.raises(DomainError):
        annihilation(basis, MIRROR)
    with pytest.raises(DomainError):
        annihilation(basis, 3)
    with pytest.raises(DomainError):
        FockBasis(0, 2)


def test_annihilation_matrix_elements():
    basis = FockBasis(2, 3)
    lowering = annihilation(basis, 2)

    TestCase().assertAlmostEqual(matrix_element(lowering, basis, (0, 0), (0, 1)), 1.0)
    TestCase().assertAlmostEqual(matrix_element(lowering, basis, (1, 1), (1, 2)), math.sqrt(2.0))
    TestCase().assertAlmostEqual(matrix_element(lowering, basis, (1, 2), (1, 3)), math.sqrt(3.0))
    TestCase().assertEqual(matrix_element(lowering, basis, (1, 0), (0, 1)), 0.0)


def test_creation_is_adjoint_of_annihilation():
    basis = FockBasis(2, 2, include_mirror=True, total_excitation_cap=3)
    lowering = annihilation(basis, MIRROR)

    TestCase().assertEqual(max_deviation(creation(basis, MIRROR), lowering.dagger()), 0.0)


def test_number_operator_is_a_dagger_a():
    basis = FockBasis(2, 3, total_excitation_cap=4)
    product = creation(basis, 1) @ annihilation(basis, 1)

    TestCase().assertLess(max_deviation(product, number_operator(basis, 1)), 1e-15)


def test_ladder_commutator_holds_below_the_caps():
    basis = FockBasis(2, 4, total_excitation_cap=5)
    safe = basis.safe_indices()
    bracket = commutator(annihilation(basis, 1), creation(basis, 1))

    TestCase().assertLess(max_deviation(bracket, identity(basis), safe), 1e-14)
    TestCase().assertGreater(max_deviation(bracket, identity(basis)), 1.0)


def test_canonical_commutator_of_quadratures():
    grid = ModeGrid(math.pi, 2)
    basis = FockBasis(2, 4)
    safe = basis.safe_indices()
    bracket = commutator(quadrature_Q(basis, 2, grid), momentum_P(basis, 2, grid))

    TestCase().assertLess(max_deviation(bracket, 1j * HBAR * identity(basis), safe), 1e-13)

    other = commutator(quadrature_Q(basis, 1, grid), momentum_P(basis, 2, grid))
    TestCase().assertEqual(other.max_abs(), 0.0)


def test_vacuum_quadrature_variance():
    grid = ModeGrid(math.pi, 2)
    basis = FockBasis(2, 3)
    q_2 = quadrature_Q(basis, 2, grid)
    vacuum = basis_vector(basis, (0, 0))

    TestCase().assertAlmostEqual((q_2 @ q_2).expectation(vacuum).real, HBAR / (2 * 2.0))


def test_mixed_quadrature_for_two_modes():
    grid = ModeGrid(math.pi, 2)
    basis = FockBasis(2, 2)
    mixed = mixed_quadrature(basis, 1, 1, mixing_matrix(grid, 1), grid)
    expected = (4.0 / 3.0) * quadrature_Q(basis, 2, grid)

    TestCase().assertLess(max_deviation(mixed, expected), 1e-15)


def test_mixed_quadrature_checks_the_order():
    grid = ModeGrid(math.pi, 2)
    with pytest.raises(DomainError):
        mixed_quadrature(FockBasis(2, 2), 1, 2, mixing_matrix(grid, 1), grid)


def test_hermitian_part_records_asymmetry():
    basis = FockBasis(1, 3)
    raw = annihilation(basis, 1)
    hermitian = raw.hermitian_part()

    TestCase().assertAlmostEqual(hermitian.raw_asymmetry, math.sqrt(3.0))
    TestCase().assertEqual(hermitian.asymmetry(), 0.0)
    TestCase().assertTrue(hermitian.hermitian_hint)


def test_numpy_scalars_multiply_operators():
    basis = FockBasis(1, 2)
    scaled = np.float64(2.0) * number_operator(basis, 1)

    TestCase().assertAlmostEqual(scaled.max_abs(), 4.0)
    TestCase().assertTrue(scaled.hermitian_hint)


def test_symmetrized_product_keeps_hermiticity():
    grid = ModeGrid(math.pi, 2)
    basis = FockBasis(2, 3)
    product = symmetrized_product(quadrature_Q(basis, 1, grid), momentum_P(basis, 1, grid))

    TestCase().assertLess(product.asymmetry(), 1e-15)


def test_total_cap_enumeration_matches_filtered_product():
    caps = (3, 3, 2)
    expected = [
        state for state in itertools.product(*(range(cap + 1) for cap in caps)) if sum(state) <= 4
    ]
    basis = FockBasis(2, 3, include_mirror=True, total_excitation_cap=4, mirror_max=2)

    TestCase().assertEqual([basis.state(index) for index in range(basis.dimension)], expected)


def test_many_mode_basis_scales_with_its_dimension():
    basis = FockBasis(8, 6, include_mirror=True, total_excitation_cap=6, mirror_max=6)

    TestCase().assertEqual(basis.dimension, 5005)
    TestCase().assertEqual(
        basis.dimension,
        count_states(8, 6, include_mirror=True, mirror_max=6, total_excitation_cap=6),
    )
    TestCase().assertTrue(np.all(np.diff(basis.codes) > 0))
    TestCase().assertEqual(basis.state(basis.dimension - 1), (6, 0, 0, 0, 0, 0, 0, 0, 0))
    TestCase().assertEqual(basis.index_of((0, 0, 0, 0, 0, 0, 0, 1, 5)), 12)


def test_mirror_position_and_momentum(small_params):
    basis = FockBasis(1, 2, include_mirror=True, mirror_max=5)
    x = mirror_position(basis, small_params)
    p = mirror_momentum(basis, small_params)
    vacuum = basis_vector(basis, (0, 0))
    bracket = commutator(x, p)

    TestCase().assertAlmostEqual(x.expectation(vacuum).real, 0.0)
    TestCase().assertAlmostEqual(
        (x @ x).expectation(vacuum).real / small_params.zero_point_position**2, 1.0, places=12
    )
    TestCase().assertLess(
        max_deviation(bracket, 1j * HBAR * identity(basis), basis.safe_indices()), 1e-12
    )
    TestCase().assertGreater(max_deviation(bracket, 1j * HBAR * identity(basis)), 1.0)
