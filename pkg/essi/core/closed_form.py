"""
Closed-form spectrum of the equal spin-spin interactions Hamiltonian.

Within a sector (n, p) the flip-flop operator has q + 1 distinct eigenvalues,
q = min(p, n - p):

    eps_k = -q + k (n - 2q + 1) + k^2            (units of B)
    g_k   = C(n, q - k) - C(n, q - k - 1)        k = 0..q

and the Zeeman plus longitudinal part is the constant

    E(n, p) = omega0 (2p - n) / 2 + A (3p^2 - 3np + n^2 - n) / 4

taken verbatim ("printed track"). Level energies are E(n, p) + w B eps_k.
eps_k and g_k are exact integers; floats appear only when scaled by physical
couplings.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from ..utils.errors import ParameterError
from ..utils.logger import get_logger
from .basis import EssiParams, Sector, binomial

logger = get_logger(__name__)


@dataclass(frozen=True)
class ClosedFormLevel:
    k: int
    epsilon: int          # flip-flop eigenvalue in units of B
    degeneracy: int
    total_energy: float   # rad/s
    total_spin: Fraction


@dataclass(frozen=True)
class ClosedFormSpectrum:
    sector: Sector
    diagonal_energy: float
    levels: Tuple[ClosedFormLevel, ...]

    @property
    def total_degeneracy(self) -> int:
        return sum(level.degeneracy for level in self.levels)

    @property
    def epsilons(self) -> Tuple[int, ...]:
        return tuple(level.epsilon for level in self.levels)

    @property
    def degeneracies(self) -> Tuple[int, ...]:
        return tuple(level.degeneracy for level in self.levels)


def _check_sector(n: int, p: int) -> int:
    if not isinstance(n, int) or not isinstance(p, int) or n < 1 or not 0 <= p <= n:
        raise ParameterError("Sector indices must satisfy 0 <= p <= n, n >= 1", {"n": n, "p": p})
    return min(p, n - p)


def _check_level(n: int, p: int, k: int) -> int:
    q = _check_sector(n, p)
    if not isinstance(k, int) or not 0 <= k <= q:
        raise ParameterError("Level index out of range", {"n": n, "p": p, "k": k, "max_k": q})
    return q


def printed_pair_coefficient(n: int, p: int) -> Fraction:
    """A-coefficient of the verbatim diagonal: (3p^2 - 3np + n^2 - n) / 4"""
    _check_sector(n, p)
    return Fraction(3 * p * p - 3 * n * p + n * n - n, 4)


def diagonal_energy_printed(n: int, p: int, omega0: float, coupling_A: float) -> float:
    """Verbatim Zeeman + longitudinal energy of sector (n, p)"""
    coefficient = printed_pair_coefficient(n, p)
    return omega0 * (2 * p - n) / 2 + coupling_A * float(coefficient)


def distinct_eigenvalue_count(n: int, p: int) -> int:
    return _check_sector(n, p) + 1


def flipflop_level(n: int, p: int, k: int) -> int:
    """eps_k(n, p) in units of B, exact"""
    q = _check_level(n, p, k)
    return -q + k * (n - 2 * q + 1) + k * k


def flipflop_eigenvalue(n: int, p: int, k: int, coupling_B: float) -> float:
    return coupling_B * flipflop_level(n, p, k)


def flipflop_degeneracy(n: int, p: int, k: int) -> int:
    q = _check_level(n, p, k)
    return binomial(n, q - k) - binomial(n, q - k - 1)


def total_spin(n: int, p: int, k: int) -> Fraction:
    """Total spin S = n/2 - q + k carried by level k"""
    q = _check_level(n, p, k)
    return Fraction(n, 2) - q + k


def sector_closed_spectrum(params: EssiParams, sector: Sector) -> ClosedFormSpectrum:
    """
    Levels of one sector from the closed forms.

    The flip-flop part is scaled by the convention weight, so the default
    unordered convention gives exactly E(n, p) + B eps_k.
    """
    n, p = sector.n, sector.p
    diagonal = diagonal_energy_printed(n, p, params.omega0, params.coupling_A)
    levels = []
    for k in range(distinct_eigenvalue_count(n, p)):
        epsilon = flipflop_level(n, p, k)
        levels.append(ClosedFormLevel(
            k=k,
            epsilon=epsilon,
            degeneracy=flipflop_degeneracy(n, p, k),
            total_energy=diagonal + params.flipflop_scale * epsilon,
            total_spin=total_spin(n, p, k),
        ))
    return ClosedFormSpectrum(sector=sector, diagonal_energy=diagonal, levels=tuple(levels))


def full_closed_spectrum(params: EssiParams) -> List[ClosedFormSpectrum]:
    """Closed-form levels of every sector, p ascending"""
    spectra = [sector_closed_spectrum(params, sector) for sector in params.sectors()]
    logger.debug(f"Closed-form spectrum for n={params.n}: "
                 f"{sum(len(s.levels) for s in spectra)} levels")
    return spectra
