"""
Sector block matrices, the full-space oracle and the symmetric eigensolver.

The flip-flop operator connects two product states of one sector exactly when
their up-position sets differ by one exchanged position, so a sector block is
w*B times the adjacency matrix of the Johnson graph J(n, p). The integer
adjacency is kept apart from the physical scale.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

import numpy as np
import scipy.linalg

from ..utils.config import config
from ..utils.errors import EigenSolverError, SectorTooLargeError
from ..utils.logger import get_logger
from .basis import (
    BasisState,
    EssiParams,
    PairConvention,
    Sector,
    sector_basis,
    sector_index,
)

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class SectorMatrix:
    """Flip-flop block of one sector: ``adjacency * scale``"""

    sector: Sector
    adjacency: np.ndarray   # int8, entries in {0, w}
    weight: int
    scale: float

    def dense(self) -> np.ndarray:
        return self.adjacency.astype(float) * self.scale

    @property
    def dimension(self) -> int:
        return self.adjacency.shape[0]


@dataclass(frozen=True, eq=False)
class SectorEigenResult:
    """Ascending eigenvalues, optional orthonormal eigenvector columns"""

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray]
    residual_bound: float
    orthogonality_error: float = 0.0

    @property
    def dimension(self) -> int:
        return self.eigenvalues.shape[0]


def _check_dense(sector: Sector) -> None:
    max_dim = int(config.get('engine.max_dense_dimension', 3432))
    if sector.dimension > max_dim:
        raise SectorTooLargeError("Sector exceeds the dense storage cap",
                                  {"n": sector.n, "p": sector.p,
                                   "dimension": sector.dimension, "cap": max_dim})


def build_sector_adjacency(sector: Sector, weight: int = 1) -> SectorMatrix:
    """
    Johnson-graph adjacency of a sector in rank order.

    Neighbours are generated by exchanging each up position with each down
    position; an edge is written once, from the lower rank.
    """
    _check_dense(sector)
    basis = sector_basis(sector)
    index = sector_index(sector)
    n = sector.n
    dim = len(basis)
    adjacency = np.zeros((dim, dim), dtype=np.int8)

    for row, mask in enumerate(basis):
        ups = [b for b in range(n) if mask >> b & 1]
        downs = [b for b in range(n) if not mask >> b & 1]
        for u in ups:
            cleared = mask ^ (1 << u)
            for d in downs:
                col = index[cleared | (1 << d)]
                if col > row:
                    adjacency[row, col] = weight
                    adjacency[col, row] = weight

    adjacency.setflags(write=False)
    logger.debug(f"Built adjacency of sector {sector}: dimension {dim}, degree {sector.degree}")
    return SectorMatrix(sector=sector, adjacency=adjacency, weight=weight, scale=1.0)


def flipflop_block(sector: Sector, params: EssiParams) -> SectorMatrix:
    """Flip-flop block with entries w and scale B"""
    unit = build_sector_adjacency(sector, weight=params.pair_weight)
    return SectorMatrix(sector=sector, adjacency=unit.adjacency,
                        weight=params.pair_weight, scale=params.coupling_B)


def first_principles_pair_coefficient(n: int, p: int,
                                      convention: Union[PairConvention, str] =
                                      PairConvention.UNORDERED) -> Fraction:
    """w * sum_{f<j} m_f m_j = w (M^2 - n/4) / 2 with M = p - n/2"""
    m = Fraction(2 * p - n, 2)
    return PairConvention.parse(convention).weight * (m * m - Fraction(n, 4)) / 2


def diagonal_energy_first_principles(state: Union[BasisState, Sector],
                                     params: EssiParams) -> float:
    """Zeeman plus longitudinal energy of a product state; constant over a sector"""
    n, p = state.n, state.p
    magnetization = p - n / 2
    coefficient = first_principles_pair_coefficient(n, p, params.pair_convention)
    return params.omega0 * magnetization + params.coupling_A * float(coefficient)


def _full_space_order(n: int) -> Tuple[int, ...]:
    """All 2^n masks sorted by (p, ascending up-position tuple)"""
    def key(mask: int):
        positions = tuple(j for j in range(n) if mask >> j & 1)
        return (len(positions), positions)
    return tuple(sorted(range(1 << n), key=key))


def _check_oracle(n: int) -> None:
    max_n = int(config.get('engine.max_oracle_n', 12))
    if n > max_n:
        raise SectorTooLargeError("Full-space matrices are limited in size",
                                  {"n": n, "cap": max_n})


def build_full_hamiltonian(params: EssiParams) -> np.ndarray:
    """
    Dense 2^n Hamiltonian built spin pair by spin pair in the product basis.

    Rows are ordered by (p ascending, then rank), so the result is block
    diagonal with the sector blocks in order.
    """
    n = params.n
    _check_oracle(n)
    order = _full_space_order(n)
    position = {mask: i for i, mask in enumerate(order)}
    dim = len(order)
    w = params.pair_weight
    hamiltonian = np.zeros((dim, dim))

    for row, mask in enumerate(order):
        spins = [0.5 if mask >> j & 1 else -0.5 for j in range(n)]
        diagonal = params.omega0 * sum(spins)
        for f in range(n):
            for j in range(f + 1, n):
                diagonal += params.coupling_A * w * spins[f] * spins[j]
                if spins[f] != spins[j]:
                    flipped = mask ^ (1 << f) ^ (1 << j)
                    hamiltonian[row, position[flipped]] += params.coupling_B * w
        hamiltonian[row, row] = diagonal

    logger.info(f"Built full Hamiltonian for n={n}: dimension {dim}")
    return hamiltonian


def build_full_raising_operator(n: int) -> np.ndarray:
    """Total S+ in the same (p, rank) ordered product basis"""
    _check_oracle(n)
    order = _full_space_order(n)
    position = {mask: i for i, mask in enumerate(order)}
    dim = len(order)
    raising = np.zeros((dim, dim))
    for col, mask in enumerate(order):
        for j in range(n):
            if not mask >> j & 1:
                raising[position[mask | (1 << j)], col] = 1.0
    return raising


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude entry of every column positive (lowest index on ties)"""
    if vectors.size == 0:
        return vectors
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def symmetric_eigen(matrix: np.ndarray, want_vectors: bool = False,
                    tol_eig: Optional[float] = None,
                    tol_orth: Optional[float] = None) -> SectorEigenResult:
    """
    Full spectrum of a dense real symmetric matrix.

    Args:
        matrix: square, finite, symmetric to 1e-12 * ||H||_F
        want_vectors: also return orthonormal eigenvectors (phase-fixed)
        tol_eig: residual tolerance relative to ||H||_F
        tol_orth: orthonormality tolerance

    Returns:
        SectorEigenResult with ascending eigenvalues
    """
    tol_eig = float(config.get('engine.tol_eig', 1e-10)) if tol_eig is None else tol_eig
    tol_orth = float(config.get('engine.tol_orth', 1e-10)) if tol_orth is None else tol_orth
    symmetry_tol = float(config.get('engine.symmetry_tol', 1e-12))

    h = np.asarray(matrix, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise EigenSolverError("Matrix must be square", {"shape": h.shape})
    if not np.all(np.isfinite(h)):
        raise EigenSolverError("Matrix has non-finite entries")
    norm = float(np.linalg.norm(h, "fro"))
    asymmetry = float(np.max(np.abs(h - h.T))) if h.size else 0.0
    if asymmetry > symmetry_tol * norm:
        raise EigenSolverError("Matrix is not symmetric",
                               {"max_asymmetry": asymmetry, "norm": norm})
    if h.shape[0] == 0:
        return SectorEigenResult(np.zeros(0), np.zeros((0, 0)) if want_vectors else None, 0.0)

    try:
        if want_vectors:
            values, vectors = scipy.linalg.eigh(h, check_finite=False)
        else:
            values = scipy.linalg.eigh(h, eigvals_only=True, check_finite=False)
            vectors = None
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as e:
        raise EigenSolverError(f"Eigensolver did not converge: {e}",
                               {"dimension": h.shape[0]}) from e

    if vectors is None:
        bound = float(np.finfo(float).eps * norm * h.shape[0])
        return SectorEigenResult(values, None, bound)

    vectors = _fix_phases(vectors)
    residuals = np.linalg.norm(h @ vectors - vectors * values, axis=0)
    residual = float(residuals.max())
    orth = float(np.max(np.abs(vectors.T @ vectors - np.eye(h.shape[0]))))
    if residual > tol_eig * max(norm, np.finfo(float).tiny):
        raise EigenSolverError("Eigenpair residual above tolerance",
                               {"residual": residual, "limit": tol_eig * norm})
    if orth > tol_orth:
        raise EigenSolverError("Eigenvectors are not orthonormal", {"error": orth})
    return SectorEigenResult(values, vectors, residual, orth)


def sector_spectrum(params: EssiParams, sector: Sector,
                    want_vectors: bool = False) -> SectorEigenResult:
    """Eigenpairs of the full sector block: first-principles diagonal plus flip-flop"""
    block = flipflop_block(sector, params)
    result = symmetric_eigen(block.dense(), want_vectors=want_vectors)
    shift = diagonal_energy_first_principles(sector, params)
    return SectorEigenResult(result.eigenvalues + shift, result.eigenvectors,
                             result.residual_bound, result.orthogonality_error)
