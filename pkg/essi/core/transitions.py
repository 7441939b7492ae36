"""
Single-quantum stick spectrum of the equal-coupling Hamiltonian.

Lines connect sector p to sector p + 1 through the total raising operator
S+ = sum_j S+_j. Each sector block is a constant diagonal plus w*B times the
sector adjacency, so the adjacency eigenvectors diagonalize it for any B; they
are grouped into the closed-form levels k, and a line is reported per level
pair with its intensity summed over the degenerate eigenvectors (a
basis-independent quantity).
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.constants

from ..utils.config import config
from ..utils.errors import ParameterError, SectorTooLargeError
from ..utils.logger import get_logger
from .basis import EssiParams, Sector, sector_basis, sector_index
from .closed_form import (
    diagonal_energy_printed,
    distinct_eigenvalue_count,
    flipflop_level,
    total_spin,
)
from .engine import build_sector_adjacency, diagonal_energy_first_principles, symmetric_eigen

logger = get_logger(__name__)

HBAR_OVER_KB = scipy.constants.hbar / scipy.constants.k  # kelvin * s / rad


class DiagonalTrack(str, Enum):
    FIRST_PRINCIPLES = "first-principles"
    PRINTED = "printed"


@dataclass(frozen=True)
class Population:
    """Initial-state weights: uniform (1 per state) or Boltzmann at a temperature"""

    kind: str = "uniform"
    temperature: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("uniform", "boltzmann"):
            raise ParameterError("Population must be uniform or boltzmann", {"kind": self.kind})
        if self.kind == "boltzmann":
            if self.temperature is None or not self.temperature > 0 \
                    or not math.isfinite(self.temperature):
                raise ParameterError("Boltzmann population needs a positive finite temperature",
                                     {"temperature": self.temperature})

    @classmethod
    def uniform(cls) -> "Population":
        return cls("uniform")

    @classmethod
    def boltzmann(cls, temperature: float) -> "Population":
        return cls("boltzmann", float(temperature))


@dataclass(frozen=True)
class SpectralLine:
    frequency: float          # rad/s
    intensity: float
    from_sector: Sector
    to_sector: Sector
    from_level_index: int
    to_level_index: int
    from_energy: float
    to_energy: float
    merged_count: int = 1


@dataclass(frozen=True, eq=False)
class _SectorLevels:
    sector: Sector
    vectors: np.ndarray               # adjacency eigenvectors, columns
    level_of_column: np.ndarray       # closed-form k of each column
    energies: Dict[int, float]        # k -> block energy
    degeneracies: Dict[int, int]


def _sector_levels(params: EssiParams, sector: Sector, track: DiagonalTrack) -> _SectorLevels:
    n, p = sector.n, sector.p
    w = params.pair_weight
    adjacency = build_sector_adjacency(sector, weight=w).dense()
    eig = symmetric_eigen(adjacency, want_vectors=True)

    ladder = np.array([w * flipflop_level(n, p, k)
                       for k in range(distinct_eigenvalue_count(n, p))], dtype=float)
    levels = np.argmin(np.abs(eig.eigenvalues[:, None] - ladder[None, :]), axis=1)

    if track is DiagonalTrack.PRINTED:
        diagonal = diagonal_energy_printed(n, p, params.omega0, params.coupling_A)
    else:
        diagonal = diagonal_energy_first_principles(sector, params)

    energies = {}
    degeneracies = {}
    for k in range(ladder.size):
        members = eig.eigenvalues[levels == k]
        degeneracies[k] = int(members.size)
        if members.size:
            energies[k] = diagonal + params.coupling_B * float(members.mean())
    return _SectorLevels(sector, eig.eigenvectors, levels, energies, degeneracies)


def _raising_block(lower: Sector, upper: Sector) -> np.ndarray:
    """Matrix of S+ from sector p to sector p + 1 in rank order"""
    target = sector_index(upper)
    block = np.zeros((upper.dimension, lower.dimension))
    for col, mask in enumerate(sector_basis(lower)):
        for j in range(lower.n):
            if not mask >> j & 1:
                block[target[mask | (1 << j)], col] = 1.0
    return block


def _level_weights(all_levels: Sequence[_SectorLevels], population: Population,
                   n: int) -> Dict[Tuple[int, int], float]:
    """Per-state weight of every (p, k) level"""
    keys = [(lv.sector.p, k) for lv in all_levels for k in lv.energies]
    if population.kind == "uniform":
        return {key: 1.0 for key in keys}

    energies = {(lv.sector.p, k): e for lv in all_levels for k, e in lv.energies.items()}
    counts = {(lv.sector.p, k): lv.degeneracies[k] for lv in all_levels for k in lv.energies}
    e_min = min(energies.values())
    beta = HBAR_OVER_KB / population.temperature
    boltzmann = {key: math.exp(-beta * (energies[key] - e_min)) for key in keys}
    partition = sum(counts[key] * boltzmann[key] for key in keys)
    # rescaled so the weights of all 2^n states sum to 2^n
    return {key: (2 ** n) * boltzmann[key] / partition for key in keys}


def stick_spectrum(params: EssiParams, population: Optional[Population] = None,
                   diagonal_track: Union[DiagonalTrack, str] = DiagonalTrack.FIRST_PRINCIPLES,
                   intensity_floor: Optional[float] = None,
                   max_workers: Optional[int] = None) -> List[SpectralLine]:
    """
    Transition lines p -> p + 1 of the full Hamiltonian.

    Args:
        params: model parameters, n <= engine.max_oracle_n
        population: initial-state weights (default uniform)
        diagonal_track: which diagonal energies to use
        intensity_floor: lines weaker than this are dropped
        max_workers: sector-parallel worker count

    Returns:
        Lines ordered by (p, k_from, k_to)
    """
    population = population or Population.uniform()
    track = DiagonalTrack(diagonal_track)
    floor = float(config.get('transitions.intensity_floor', 1e-12)) \
        if intensity_floor is None else intensity_floor
    max_n = int(config.get('engine.max_oracle_n', 12))
    if params.n > max_n:
        raise SectorTooLargeError("Stick spectra need eigenvectors of every sector",
                                  {"n": params.n, "cap": max_n})
    if track is DiagonalTrack.PRINTED:
        logger.warning("Stick spectrum uses the verbatim diagonal energies")

    workers = max_workers or config.max_workers()
    sectors = params.sectors()
    with ThreadPoolExecutor(max_workers=workers) as executor:
        all_levels = list(executor.map(lambda s: _sector_levels(params, s, track), sectors))
    weights = _level_weights(all_levels, population, params.n)

    lines: List[SpectralLine] = []
    for lower, upper in zip(all_levels[:-1], all_levels[1:]):
        elements = upper.vectors.T @ _raising_block(lower.sector, upper.sector) @ lower.vectors
        strengths = elements ** 2
        for k_from, e_from in lower.energies.items():
            from_cols = lower.level_of_column == k_from
            for k_to, e_to in upper.energies.items():
                to_rows = upper.level_of_column == k_to
                total = float(strengths[np.ix_(to_rows, from_cols)].sum())
                intensity = total * weights[(lower.sector.p, k_from)]
                if intensity < floor:
                    continue
                if total_spin(params.n, lower.sector.p, k_from) != \
                        total_spin(params.n, upper.sector.p, k_to):
                    logger.warning(f"Line {lower.sector}:k{k_from} -> {upper.sector}:k{k_to} "
                                   f"changes total spin (intensity {intensity:.3e})")
                lines.append(SpectralLine(
                    frequency=e_to - e_from,
                    intensity=intensity,
                    from_sector=lower.sector,
                    to_sector=upper.sector,
                    from_level_index=k_from,
                    to_level_index=k_to,
                    from_energy=e_from,
                    to_energy=e_to,
                ))

    logger.info(f"Stick spectrum for n={params.n}: {len(lines)} lines")
    return lines


def default_tau_line(lines: Sequence[SpectralLine]) -> float:
    relative = float(config.get('transitions.tau_line_relative', 1e-9))
    if not lines:
        return 0.0
    return relative * max(abs(line.frequency) for line in lines)


def merge_lines(lines: Sequence[SpectralLine],
                tau_line: Optional[float] = None) -> List[SpectralLine]:
    """
    Merge lines closer than tau_line in frequency.

    The merged frequency is the intensity-weighted mean, intensities add, and
    provenance is taken from the strongest component. Output is ascending in
    frequency.
    """
    if tau_line is None:
        tau_line = default_tau_line(lines)
    if tau_line < 0:
        raise ParameterError("tau_line must be non-negative", {"tau_line": tau_line})

    ordered = sorted(lines, key=lambda l: (l.frequency, l.from_sector.p,
                                           l.from_level_index, l.to_level_index))
    groups: List[List[SpectralLine]] = []
    for line in ordered:
        if groups and line.frequency - groups[-1][-1].frequency <= tau_line:
            groups[-1].append(line)
        else:
            groups.append([line])

    merged = []
    for group in groups:
        if len(group) == 1:
            merged.append(group[0])
            continue
        total = sum(l.intensity for l in group)
        if total > 0:
            frequency = sum(l.frequency * l.intensity for l in group) / total
        else:
            frequency = sum(l.frequency for l in group) / len(group)
        strongest = max(group, key=lambda l: l.intensity)
        merged.append(replace(strongest, frequency=frequency, intensity=total,
                              merged_count=sum(l.merged_count for l in group)))
    return merged
