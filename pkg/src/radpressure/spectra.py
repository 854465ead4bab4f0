#!/usr/bin/env python
# encoding: utf-8
"""
The final mirror-field Hamiltonian on the joint Fock basis, its low-lying spectrum, the
second-order perturbative oracle for the dressed vacuum and parameter sweeps.

The mirror part is ħΩ(b†b + 1/2) plus m(Ω_eff² - Ω²)x²/2, so the uncoupled spectrum is
exact even on the cropped mirror ladder.
"""

import dataclasses
import itertools
import logging
import math
import time

from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from dask.distributed import Client, as_completed
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from radpressure.exceptions import (
    AccuracyError,
    AmbiguousBranchError,
    ConvergenceError,
    DimensionGuardError,
    DomainError,
)
from radpressure.fock_space import (
    HBAR,
    MIRROR,
    FieldOperator,
    FockBasis,
    count_states,
    creation,
    identity,
    mirror_position,
    number_operator,
    symmetrized_product,
)
from radpressure.mode_mixing import ladder_mixing_matrix
from radpressure.operators import (
    SystemParams,
    build_delta_omega2,
    build_force_f,
    renormalized_frequency_sq,
)

logger = logging.getLogger(__name__)

DEFAULT_DIMENSION_CAP = 200_000
DENSE_LIMIT = 4000
AMBIGUITY_MARGIN = 0.01
MAX_PERTURBATIVE_COUPLING = 0.1

SWEEP_FLOAT_AXES = ("mass", "mechanical_frequency", "cavity_length", "plasma_frequency")
SWEEP_INTEGER_AXES = ("mode_cutoff", "fock_cap", "total_cap", "mirror_cap")
COUPLING_AXIS = "coupling"


@dataclass(frozen=True)
class ModelFlags:
    linear: bool = True
    quadratic_f0: bool = False
    quadratic_f1: bool = False

    @property
    def label(self) -> str:
        parts = [name for name in ("linear", "quadratic_f0", "quadratic_f1") if getattr(self, name)]
        return "+".join(parts) if parts else "uncoupled"


@dataclass(eq=False)
class SpectrumResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    ground_state: np.ndarray
    solver: str
    basis: Optional[FockBasis] = None
    mode_populations: Tuple[float, ...] = ()
    mirror_population: Optional[float] = None
    mechanical_gap: Optional[float] = None
    coupling_strength: Optional[float] = None
    ratio_quad_F0: Optional[float] = None
    ratio_quad_F1: Optional[float] = None
    residual: Optional[float] = None

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])


class ScalingRatios(NamedTuple):
    coupling_strength: float
    ratio_quad_F0: float
    ratio_quad_F1: float


class ConvergenceCheck(NamedTuple):
    base_ground_energy: float
    refined_ground_energy: float
    deviation: float
    passed: bool


class PowerLawFit(NamedTuple):
    exponent: float
    prefactor: float


def check_dimension(params: SystemParams, dimension_cap: int = DEFAULT_DIMENSION_CAP) -> int:
    dimension = count_states(
        params.mode_cutoff,
        params.fock_cap,
        include_mirror=True,
        mirror_max=params.mirror_cap,
        total_excitation_cap=params.total_cap,
    )
    if dimension > dimension_cap:
        raise DimensionGuardError(
            f"Joint basis of dimension {dimension} exceeds the cap of {dimension_cap} states "
            f"(K={params.mode_cutoff}, N={params.fock_cap}, C={params.total_cap}, "
            f"mirror cap {params.mirror_cap})"
        )
    return dimension


def _free_hamiltonian(basis: FockBasis, params: SystemParams) -> FieldOperator:
    grid = params.grid
    hamiltonian = (HBAR * params.mechanical_frequency) * number_operator(basis, MIRROR)
    for k in range(1, grid.mode_cutoff + 1):
        hamiltonian = hamiltonian + (HBAR * grid.frequency(k)) * number_operator(basis, k)
    return hamiltonian + (0.5 * HBAR * params.mechanical_frequency) * identity(basis)


def build_full_hamiltonian(
    params: SystemParams,
    flags: ModelFlags = ModelFlags(),
    dimension_cap: int = DEFAULT_DIMENSION_CAP,
) -> Tuple[FieldOperator, FockBasis]:
    """
    H = ħΩ(b†b + 1/2) + Σ ħω_k a_k†a_k + m(Ω_eff² - Ω²)x²/2 - x f
        [+ (3/2d) x² f] [+ (m/2) x² ΔΩ²]

    Ω_eff is the renormalized frequency when the F_1 terms are switched on, the bare one
    otherwise. Returns the Hamiltonian and the joint basis it acts on.
    """
    check_dimension(params, dimension_cap)
    basis = params.joint_basis()
    grid, d, m = params.grid, params.cavity_length, params.mass

    hamiltonian = _free_hamiltonian(basis, params)
    x = mirror_position(basis, params)
    x_squared = x @ x

    if flags.linear or flags.quadratic_f0:
        force = build_force_f(basis, grid)
        if flags.linear:
            hamiltonian = hamiltonian - symmetrized_product(x, force)
        if flags.quadratic_f0:
            hamiltonian = hamiltonian + (3.0 / (2.0 * d)) * symmetrized_product(x_squared, force)

    if flags.quadratic_f1:
        static = renormalized_frequency_sq(params) - params.mechanical_frequency**2
        delta = build_delta_omega2(basis, grid, ladder_mixing_matrix(grid, 1), params)
        hamiltonian = (
            hamiltonian
            + (0.5 * m * static) * x_squared
            + (0.5 * m) * symmetrized_product(x_squared, delta)
        )

    hamiltonian = hamiltonian.hermitian_part()
    logger.info(
        f"Hamiltonian {flags.label} on dimension {basis.dimension}, "
        f"raw asymmetry {hamiltonian.raw_asymmetry:.3e}"
    )
    return hamiltonian, basis


def _fix_phase(vector: np.ndarray) -> np.ndarray:
    # largest component real and positive, so eigenvectors are reproducible
    pivot = vector[int(np.argmax(np.abs(vector)))]
    return vector * (abs(pivot) / pivot)


def diagonalize(
    hamiltonian: FieldOperator,
    n_eigen: int,
    basis: Optional[FockBasis] = None,
    solver: str = "auto",
    dense_limit: int = DENSE_LIMIT,
    tolerance: float = 0.0,
) -> SpectrumResult:
    """
    Lowest n_eigen eigenpairs of a Hermitian operator.

    Args:
        hamiltonian (FieldOperator): Hermitian matrix
        n_eigen (int): number of eigenpairs

    Keyword arguments:
        basis (FockBasis): when given, ground-state populations of every slot are filled in
        solver (str): "auto", "dense" or "iterative"
        dense_limit (int): "auto" uses the dense solver below this dimension
        tolerance (float): ARPACK tolerance, 0 means machine precision

    Returns:
        result (SpectrumResult): ascending eigenvalues and eigenvectors as columns
    """
    dimension = hamiltonian.dimension
    if n_eigen < 1 or n_eigen > dimension:
        raise DomainError(f"n_eigen must be between 1 and {dimension}, got {n_eigen}")
    if solver not in ("auto", "dense", "iterative"):
        raise DomainError(f"Unknown solver {solver!r}")
    if solver == "auto":
        solver = "dense" if dimension < dense_limit else "iterative"
    if solver == "iterative" and n_eigen >= dimension - 1:
        raise DomainError(
            f"Iterative solver needs n_eigen < dimension - 1, got {n_eigen} for {dimension}"
        )

    t0 = time.time()
    if solver == "dense":
        eigenvalues, eigenvectors = np.linalg.eigh(hamiltonian.to_dense())
        eigenvalues, eigenvectors = eigenvalues[:n_eigen], eigenvectors[:, :n_eigen]
    else:
        start = np.ones(dimension, dtype=complex) / math.sqrt(dimension)
        try:
            eigenvalues, eigenvectors = eigsh(
                hamiltonian.matrix, k=n_eigen, which="SA", tol=tolerance, v0=start
            )
        except ArpackNoConvergence as error:
            raise ConvergenceError(
                f"Iterative eigensolver did not converge for dimension {dimension}",
                diagnostics={
                    "converged": len(error.eigenvalues),
                    "requested": n_eigen,
                    "tolerance": tolerance,
                },
            ) from error
        order = np.argsort(eigenvalues)
        eigenvalues, eigenvectors = eigenvalues[order], eigenvectors[:, order]

    eigenvalues = np.real(np.asarray(eigenvalues))
    eigenvectors = np.column_stack(
        [_fix_phase(column / np.linalg.norm(column)) for column in eigenvectors.T]
    )
    residual = max(
        float(np.linalg.norm(hamiltonian.matrix @ column - value * column))
        for value, column in zip(eigenvalues, eigenvectors.T)
    )
    logger.info(
        f"{solver} solver: {n_eigen} eigenpairs of dimension {dimension} "
        f"in {time.time() - t0:.2f} seconds, residual {residual:.2e}"
    )

    result = SpectrumResult(
        eigenvalues=eigenvalues,
        eigenvectors=eigenvectors,
        ground_state=eigenvectors[:, 0],
        solver=solver,
        basis=basis,
        residual=residual,
    )
    if basis is not None:
        fill_populations(result, basis)
    return result


def fill_populations(result: SpectrumResult, basis: FockBasis) -> SpectrumResult:
    ground = result.ground_state
    result.mode_populations = tuple(
        max(float(np.real(number_operator(basis, k).expectation(ground))), 0.0)
        for k in range(1, basis.field_modes + 1)
    )
    if basis.include_mirror:
        result.mirror_population = max(
            float(np.real(number_operator(basis, MIRROR).expectation(ground))), 0.0
        )
    return result


def mechanical_gap(result: SpectrumResult, params: Optional[SystemParams] = None) -> float:
    """
    Excitation energy of the eigenstate with the largest overlap with b†|ground⟩. Raises
    AmbiguousBranchError when the runner-up overlap is within 1% of the best.
    """
    if result.basis is None and params is None:
        raise DomainError("mechanical_gap needs the result's basis or the system parameters")
    basis = result.basis if result.basis is not None else params.joint_basis()
    if len(result.eigenvalues) < 2:
        raise DomainError("At least two eigenpairs are needed to find the mechanical gap")

    excited = creation(basis, MIRROR).matrix @ result.ground_state
    overlaps = np.abs(result.eigenvectors[:, 1:].conj().T @ excited)
    ranking = np.argsort(-overlaps, kind="stable")
    best = int(ranking[0])
    gaps = result.eigenvalues[1:] - result.eigenvalues[0]

    if len(ranking) > 1 and overlaps[ranking[1]] >= (1.0 - AMBIGUITY_MARGIN) * overlaps[best]:
        candidates = [
            (int(index) + 1, float(gaps[index]), float(overlaps[index])) for index in ranking[:3]
        ]
        logger.warning(f"Ambiguous mechanical branch, candidates {candidates}")
        raise AmbiguousBranchError(
            f"Mechanical branch ambiguous between states {candidates}", candidates=candidates
        )

    result.mechanical_gap = float(gaps[best])
    return result.mechanical_gap


def scaling_ratios(params: SystemParams) -> ScalingRatios:
    params.check_scaling_cutoff()
    coupling = params.coupling_strength
    fundamental = params.grid.fundamental_frequency
    return ScalingRatios(
        coupling_strength=coupling,
        ratio_quad_F0=params.zero_point_position / params.cavity_length * coupling,
        ratio_quad_F1=params.mechanical_frequency / fundamental * coupling**2,
    )


def _virtual_state_allowed(params: SystemParams, photons: Sequence[int]) -> bool:
    if any(n > params.fock_cap for n in photons) or params.mirror_cap < 1:
        return False
    return params.total_cap is None or sum(photons) + 1 <= params.total_cap


def perturbative_ground_shift(params: SystemParams) -> float:
    """
    Second-order shift of the free ground energy under -x f, summed over the
    one-phonon-plus-photon-pair virtual states the joint basis retains.
    """
    coupling = params.coupling_strength
    if coupling >= MAX_PERTURBATIVE_COUPLING:
        raise DomainError(
            f"Perturbative oracle needs lambda < {MAX_PERTURBATIVE_COUPLING}, got {coupling}"
        )
    grid = params.grid
    omegas = grid.frequencies
    d = params.cavity_length
    x_zpf = params.zero_point_position

    shift = 0.0
    for k in range(grid.mode_cutoff):
        for j in range(k, grid.mode_cutoff):
            photons = [0] * grid.mode_cutoff
            photons[k] += 1
            photons[j] += 1
            if not _virtual_state_allowed(params, photons):
                continue
            if k == j:
                element = HBAR * omegas[k] / (math.sqrt(2.0) * d)
            else:
                element = HBAR / d * (-1) ** (k + j) * math.sqrt(omegas[k] * omegas[j])
            denominator = HBAR * (params.mechanical_frequency + omegas[k] + omegas[j])
            shift -= x_zpf**2 * element**2 / denominator
    return shift


def perturbative_ground_energy(params: SystemParams) -> float:
    return 0.5 * HBAR * params.mechanical_frequency + perturbative_ground_shift(params)


def solve_spectrum(
    params: SystemParams,
    flags: ModelFlags = ModelFlags(),
    n_eigen: int = 8,
    solver: str = "auto",
    dimension_cap: int = DEFAULT_DIMENSION_CAP,
    tolerance: float = 0.0,
    find_gap: bool = True,
    dense_limit: int = DENSE_LIMIT,
) -> SpectrumResult:
    hamiltonian, basis = build_full_hamiltonian(params, flags, dimension_cap)
    result = diagonalize(
        hamiltonian,
        min(n_eigen, basis.dimension),
        basis=basis,
        solver=solver,
        dense_limit=dense_limit,
        tolerance=tolerance,
    )
    ratios = scaling_ratios(params)
    result.coupling_strength = ratios.coupling_strength
    result.ratio_quad_F0 = ratios.ratio_quad_F0
    result.ratio_quad_F1 = ratios.ratio_quad_F1
    if find_gap:
        mechanical_gap(result, params)
    return result


def fit_power_law(xs: Sequence[float], ys: Sequence[float]) -> PowerLawFit:
    """Least-squares line through (log x, log y)."""
    xs, ys = np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)
    if len(xs) != len(ys) or len(xs) < 2:
        raise DomainError(f"Power-law fit needs at least two paired points, got {len(xs)}")
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise DomainError("Power-law fit needs strictly positive values")
    slope, intercept = np.polyfit(np.log(xs), np.log(ys), 1)
    return PowerLawFit(exponent=float(slope), prefactor=float(math.exp(intercept)))


def truncation_convergence(
    params: SystemParams,
    flags: ModelFlags = ModelFlags(),
    tolerance: float = 1e-10,
    dimension_cap: int = DEFAULT_DIMENSION_CAP,
) -> ConvergenceCheck:
    """Ground energy at (N, C) against (N + 1, C + 2)."""
    refined = dataclasses.replace(
        params,
        fock_cap=params.fock_cap + 1,
        total_cap=None if params.total_cap is None else params.total_cap + 2,
    )
    energies = [
        solve_spectrum(point, flags, n_eigen=1, dimension_cap=dimension_cap, find_gap=False)
        .ground_energy
        for point in (params, refined)
    ]
    deviation = abs(energies[1] - energies[0])
    logger.info(f"Truncation convergence: ground energy moved by {deviation:.3e}")
    return ConvergenceCheck(energies[0], energies[1], deviation, deviation <= tolerance)


@dataclass(frozen=True)
class SweepAxis:
    name: str
    minimum: float
    maximum: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        known = SWEEP_FLOAT_AXES + SWEEP_INTEGER_AXES + (COUPLING_AXIS,)
        if self.name not in known:
            raise DomainError(f"Unknown sweep axis {self.name!r}, expected one of {list(known)}")
        if self.count < 1:
            raise DomainError(f"Sweep axis {self.name!r} is empty")
        if self.spacing not in ("linear", "log"):
            raise DomainError(f"Sweep spacing must be linear or log, got {self.spacing!r}")
        if self.spacing == "log" and not (self.minimum > 0 and self.maximum > 0):
            raise DomainError(f"Log-spaced axis {self.name!r} needs positive bounds")

    @property
    def values(self) -> List[float]:
        if self.count == 1:
            return [float(self.minimum)]
        if self.spacing == "log":
            points = np.geomspace(self.minimum, self.maximum, self.count)
        else:
            points = np.linspace(self.minimum, self.maximum, self.count)
        if self.name in SWEEP_INTEGER_AXES:
            if not np.allclose(points, np.round(points)):
                raise DomainError(f"Integer axis {self.name!r} produced non-integral values")
            return [int(round(point)) for point in points]
        return [float(point) for point in points]


class SweepPoint(NamedTuple):
    index: int
    coordinates: Dict[str, float]
    params: SystemParams


@dataclass
class SweepRow:
    index: int
    coordinates: Dict[str, float]
    params: SystemParams
    status: str = "ok"
    error: str = ""
    dimension: Optional[int] = None
    solver: str = ""
    ground_energy: Optional[float] = None
    mechanical_gap: Optional[float] = None
    coupling_strength: Optional[float] = None
    ratio_quad_F0: Optional[float] = None
    ratio_quad_F1: Optional[float] = None
    mode_populations: Tuple[float, ...] = field(default_factory=tuple)
    mirror_population: Optional[float] = None
    residual: Optional[float] = None

    def to_dict(self) -> Dict[str, object]:
        row: Dict[str, object] = {"index": self.index}
        row.update(self.coordinates)
        for name in ("mass", "mechanical_frequency", "cavity_length", "mode_cutoff", "fock_cap"):
            row[name] = getattr(self.params, name)
        row["total_cap"] = self.params.total_cap
        row["mirror_cap"] = self.params.mirror_cap
        row["cutoff_frequency"] = self.params.cutoff_frequency
        row.update(
            {
                "status": self.status,
                "error": self.error,
                "dimension": self.dimension,
                "solver": self.solver,
                "eigen_residual": self.residual,
                "ground_energy": self.ground_energy,
                "mechanical_gap": self.mechanical_gap,
                "lambda": self.coupling_strength,
                "ratio_quad_F0": self.ratio_quad_F0,
                "ratio_quad_F1": self.ratio_quad_F1,
                "mirror_population": self.mirror_population,
            }
        )
        for k, population in enumerate(self.mode_populations, start=1):
            row[f"population_{k}"] = population
        return row


def expand_grid(base: SystemParams, axes: Sequence[SweepAxis]) -> List[SweepPoint]:
    """
    Cartesian product of the axes in the given order, last axis fastest. A coupling axis is
    applied after the others by solving for the mirror mass.
    """
    points = []
    for index, values in enumerate(itertools.product(*(axis.values for axis in axes))):
        coordinates = {axis.name: value for axis, value in zip(axes, values)}
        replacements = {name: value for name, value in coordinates.items() if name != COUPLING_AXIS}
        params = dataclasses.replace(base, **replacements)
        if COUPLING_AXIS in coordinates:
            params = params.with_coupling(coordinates[COUPLING_AXIS])
        points.append(SweepPoint(index, coordinates, params))
    return points


def evaluate_point(
    point: SweepPoint,
    flags: ModelFlags,
    n_eigen: int,
    solver: str,
    dimension_cap: int,
    tolerance: float,
    dense_limit: int = DENSE_LIMIT,
) -> SweepRow:
    row = SweepRow(point.index, point.coordinates, point.params)
    try:
        row.dimension = check_dimension(point.params, dimension_cap)
        result = solve_spectrum(
            point.params,
            flags,
            n_eigen,
            solver,
            dimension_cap,
            tolerance,
            find_gap=True,
            dense_limit=dense_limit,
        )
    except (
        AccuracyError,
        AmbiguousBranchError,
        ConvergenceError,
        DimensionGuardError,
        DomainError,
    ) as error:
        row.status = "failed"
        row.error = f"{type(error).__name__}: {error}"
        logger.warning(f"Sweep point {point.index} failed: {row.error}")
        return row

    row.solver = result.solver
    row.residual = result.residual
    row.ground_energy = result.ground_energy
    row.mechanical_gap = result.mechanical_gap
    row.coupling_strength = result.coupling_strength
    row.ratio_quad_F0 = result.ratio_quad_F0
    row.ratio_quad_F1 = result.ratio_quad_F1
    row.mode_populations = result.mode_populations
    row.mirror_population = result.mirror_population
    return row


def sweep(
    points: Sequence[SweepPoint],
    flags: ModelFlags = ModelFlags(),
    n_eigen: int = 8,
    solver: str = "auto",
    dimension_cap: int = DEFAULT_DIMENSION_CAP,
    tolerance: float = 0.0,
    workers: int = 1,
    dense_limit: int = DENSE_LIMIT,
) -> List[SweepRow]:
    """
    Evaluates every grid point; failures are recorded in their row and the sweep carries on.
    With workers > 1 the points are farmed out to an in-process dask cluster. Rows always come
    back in grid order.
    """
    if not points:
        return []

    arguments = (flags, n_eigen, solver, dimension_cap, tolerance, dense_limit)
    t0 = time.time()
    if workers <= 1:
        rows = []
        for point in points:
            rows.append(evaluate_point(point, *arguments))
            logger.info(f"Sweep point {point.index} done at {time.time() - t0:.1f} seconds")
        return rows

    rows_by_index = {}
    client = Client(processes=False, n_workers=1, threads_per_worker=workers)
    try:
        futures = [client.submit(evaluate_point, point, *arguments, pure=False) for point in points]
        for future in as_completed(futures):
            row = future.result()
            rows_by_index[row.index] = row
            logger.info(
                f"Received sweep point {row.index} ({len(rows_by_index)}/{len(points)}) "
                f"at {time.time() - t0:.1f} seconds"
            )
    finally:
        client.close()
    return [rows_by_index[point.index] for point in points]
