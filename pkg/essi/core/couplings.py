"""
Pairwise coupling constants and their reduction to the equal-coupling model.

The dipolar helper follows the secular dipole-dipole form with hbar = 1:
    A_fj = gamma^2 / (2 R^3) * angular_factor(theta)
    A_total = A_fj + J,  B_total = -A_fj / 4 + J / 2
The printed angular factor (1 - 3 cos theta) differs from the textbook secular
factor (1 - 3 cos^2 theta); both are selectable and the printed one is the default.
"""

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import NamedTuple, Optional, Tuple, Union

import numpy as np
import pandas as pd

from ..utils.errors import CouplingError
from ..utils.logger import get_logger
from .basis import EssiParams, PairConvention

logger = get_logger(__name__)

CSV_COLUMNS = ("f", "j", "A_fj", "B_fj")


class AngularFactor(str, Enum):
    VERBATIM = "verbatim"   # 1 - 3 cos(theta)
    STANDARD = "standard"   # 1 - 3 cos^2(theta)

    def evaluate(self, theta: float) -> float:
        c = math.cos(theta)
        if self is AngularFactor.VERBATIM:
            return 1.0 - 3.0 * c
        return 1.0 - 3.0 * c * c


class AveragingNormalization(str, Enum):
    SPIN_COUNT = "spin-count"   # divide by n, as printed
    PAIR_COUNT = "pair-count"   # divide by the number of summed pairs


class CouplingPair(NamedTuple):
    a_total: float
    b_total: float


@dataclass(frozen=True)
class CouplingAverage:
    """Mean and spread of one coupling matrix"""

    mean: float
    spread: float
    uniform_input: bool
    mean_shifted: bool  # uniform input whose mean differs from the common value


@dataclass(frozen=True)
class CouplingAverages:
    a: CouplingAverage
    b: CouplingAverage
    convention: PairConvention
    normalization: AveragingNormalization
    pair_terms: int


def _finite_inputs(**values: float) -> Tuple[float, ...]:
    checked = []
    for name, value in values.items():
        try:
            value = float(value)
        except (TypeError, ValueError):
            raise CouplingError(f"{name} must be a real number", {name: value}) from None
        if not math.isfinite(value):
            raise CouplingError(f"{name} must be finite", {name: value})
        checked.append(value)
    return tuple(checked)


def dipolar_coupling_constants(distance: float, theta: float, gamma: float,
                               exchange: float = 0.0, phi: Optional[float] = None,
                               angular: Union[AngularFactor, str] = AngularFactor.VERBATIM
                               ) -> CouplingPair:
    """
    Longitudinal and transverse couplings of one spin pair.

    Args:
        distance: R_fj, must be positive
        theta: polar angle of the pair vector against the field axis (rad)
        gamma: gyromagnetic ratio
        exchange: exchange integral J_fj (rad/s)
        phi: azimuth; accepted for completeness, it enters no coupling
        angular: which angular factor to apply

    Returns:
        CouplingPair(a_total, b_total)
    """
    try:
        distance = float(distance)
    except (TypeError, ValueError):
        raise CouplingError("Pair distance must be a real number", {"R": distance}) from None
    if not (distance > 0 and math.isfinite(distance)):
        raise CouplingError("Pair distance must be a positive finite number", {"R": distance})
    theta, gamma, exchange = _finite_inputs(theta=theta, gamma=gamma, exchange=exchange)
    factor = AngularFactor(angular).evaluate(theta)
    dipolar = gamma * gamma / (2.0 * distance ** 3) * factor
    return CouplingPair(dipolar + exchange, -dipolar / 4.0 + exchange / 2.0)


@dataclass(frozen=True, eq=False)
class PairCouplings:
    """Symmetric zero-diagonal matrices of pair couplings (rad/s)"""

    a_matrix: np.ndarray
    b_matrix: np.ndarray

    def __post_init__(self):
        a = _checked_matrix(self.a_matrix, "a_matrix")
        b = _checked_matrix(self.b_matrix, "b_matrix")
        if a.shape != b.shape:
            raise CouplingError("Coupling matrices differ in shape",
                                {"a_shape": a.shape, "b_shape": b.shape})
        object.__setattr__(self, "a_matrix", a)
        object.__setattr__(self, "b_matrix", b)

    @property
    def n(self) -> int:
        return self.a_matrix.shape[0]

    @classmethod
    def from_csv(cls, path: Union[str, Path], n: Optional[int] = None) -> "PairCouplings":
        """
        Read rows (f, j, A_fj, B_fj) with 1-based f < j.

        Pairs absent from the file couple with zero strength.
        """
        try:
            frame = pd.read_csv(path)
        except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise CouplingError(f"Cannot read coupling file: {e}", {"path": str(path)}) from e

        missing = [c for c in CSV_COLUMNS if c not in frame.columns]
        if missing:
            raise CouplingError("Coupling CSV is missing columns",
                                {"missing": missing, "expected": list(CSV_COLUMNS)})
        if frame.empty:
            raise CouplingError("Coupling CSV has no rows", {"path": str(path)})
        if frame[list(CSV_COLUMNS)].isna().any().any():
            raise CouplingError("Coupling CSV has empty cells", {"path": str(path)})

        f_idx = frame["f"].to_numpy()
        j_idx = frame["j"].to_numpy()
        if not (np.all(np.mod(f_idx, 1) == 0) and np.all(np.mod(j_idx, 1) == 0)):
            raise CouplingError("Pair indices must be integers", {"path": str(path)})
        f_idx = f_idx.astype(int)
        j_idx = j_idx.astype(int)

        size = int(n) if n is not None else int(max(f_idx.max(), j_idx.max()))
        if np.any(f_idx < 1) or np.any(j_idx > size):
            raise CouplingError("Pair indices must lie in 1..n", {"n": size})
        if np.any(f_idx >= j_idx):
            bad = int(np.argmax(f_idx >= j_idx))
            raise CouplingError("Rows must lie in the strict upper triangle (f < j)",
                                {"row": bad + 1, "f": int(f_idx[bad]), "j": int(j_idx[bad])})
        pairs = list(zip(f_idx.tolist(), j_idx.tolist()))
        if len(set(pairs)) != len(pairs):
            raise CouplingError("Duplicate pair rows", {"path": str(path)})

        a = np.zeros((size, size))
        b = np.zeros((size, size))
        a[f_idx - 1, j_idx - 1] = frame["A_fj"].to_numpy(dtype=float)
        b[f_idx - 1, j_idx - 1] = frame["B_fj"].to_numpy(dtype=float)
        logger.info(f"Loaded {len(pairs)} pair couplings for n={size} from {path}")
        return cls(a + a.T, b + b.T)


def _checked_matrix(matrix, name: str) -> np.ndarray:
    m = np.array(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise CouplingError(f"{name} must be square", {"shape": m.shape})
    if not np.all(np.isfinite(m)):
        raise CouplingError(f"{name} has non-finite entries")
    if np.any(np.diag(m) != 0.0):
        raise CouplingError(f"{name} must have a zero diagonal")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    asymmetry = float(np.max(np.abs(m - m.T))) if m.size else 0.0
    if asymmetry > 1e-12 * scale:
        raise CouplingError(f"{name} is not symmetric", {"max_asymmetry": asymmetry})
    m.setflags(write=False)
    return m


def _pair_values(matrix: np.ndarray, convention: PairConvention) -> np.ndarray:
    n = matrix.shape[0]
    upper = matrix[np.triu_indices(n, k=1)]
    if convention is PairConvention.UNORDERED:
        return upper
    return np.concatenate([upper, upper])


def _average(values: np.ndarray, n: int, normalization: AveragingNormalization) -> CouplingAverage:
    divisor = n if normalization is AveragingNormalization.SPIN_COUNT else values.size
    mean = float(values.sum() / divisor)
    spread = math.sqrt(float(((values - mean) ** 2).sum() / divisor))
    uniform = bool(np.all(values == values[0]))
    shifted = uniform and not math.isclose(mean, float(values[0]), rel_tol=1e-12, abs_tol=0.0)
    return CouplingAverage(mean, spread, uniform, shifted)


def average_couplings(pairs: PairCouplings,
                      convention: Union[PairConvention, str] = PairConvention.UNORDERED,
                      normalization: Union[AveragingNormalization, str] =
                      AveragingNormalization.SPIN_COUNT) -> CouplingAverages:
    """
    Mean <A> and rms spread dA of each coupling matrix.

    With the default spin-count normalization the sum over the convention's pair
    range is divided by n, not by the number of pairs; a uniform input therefore
    averages to a*C(n,2)/n and is flagged through ``mean_shifted``.
    """
    convention = PairConvention.parse(convention)
    normalization = AveragingNormalization(normalization)
    if pairs.n < 2:
        raise CouplingError("Averaging needs at least two spins", {"n": pairs.n})

    a_values = _pair_values(pairs.a_matrix, convention)
    b_values = _pair_values(pairs.b_matrix, convention)
    result = CouplingAverages(
        a=_average(a_values, pairs.n, normalization),
        b=_average(b_values, pairs.n, normalization),
        convention=convention,
        normalization=normalization,
        pair_terms=int(a_values.size),
    )
    for label, avg in (("A", result.a), ("B", result.b)):
        if avg.mean_shifted:
            logger.warning(f"Uniform {label} couplings average to {avg.mean:g} under "
                           f"{normalization.value} normalization")
    return result


def essi_parameters_from_pairs(pairs: PairCouplings, omega0: float = 0.0,
                               spread_sign: int = 0,
                               convention: Union[PairConvention, str] = PairConvention.UNORDERED,
                               normalization: Union[AveragingNormalization, str] =
                               AveragingNormalization.SPIN_COUNT) -> EssiParams:
    """Equal-coupling parameters A = <A> + s*dA, B = <B> + s*dB with s in {-1, 0, +1}"""
    if spread_sign not in (-1, 0, 1):
        raise CouplingError("spread_sign must be -1, 0 or +1", {"spread_sign": spread_sign})
    averages = average_couplings(pairs, convention, normalization)
    return EssiParams(
        n=pairs.n,
        omega0=omega0,
        coupling_A=averages.a.mean + spread_sign * averages.a.spread,
        coupling_B=averages.b.mean + spread_sign * averages.b.spread,
        pair_convention=PairConvention.parse(convention),
    )
