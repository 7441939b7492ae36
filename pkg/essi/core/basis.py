"""
Physical parameters, product basis states and magnetization sectors.

Basis states are stored as bit masks: spin position j (1-based) is bit j-1,
set when m_j = +1/2. Inside a sector the basis is ordered lexicographically by
the ascending tuple of up positions, the order used by the five-spin reference
table.
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, Iterator, Tuple, Union

from ..utils.config import config
from ..utils.errors import CombinatoricsError, ParameterError
from ..utils.logger import get_logger

logger = get_logger(__name__)

MAX_BASIS_N = 24
MAX_BINOMIAL_N = 64
UINT64_MAX = (1 << 64) - 1


def max_spin_count() -> int:
    """Largest n accepted for parameters, sectors and states (basis.max_n)"""
    return int(config.get('basis.max_n', MAX_BASIS_N))


def _check_spin_count(n: int) -> None:
    limit = max_spin_count()
    if not 1 <= n <= limit:
        raise ParameterError(f"Spin count must satisfy 1 <= n <= {limit}", {"n": n})


class PairConvention(str, Enum):
    """How the pair sums of the Hamiltonian run"""

    UNORDERED = "unordered-distinct"  # f < j, each pair once
    ORDERED = "ordered-distinct"      # all f != j, each pair twice

    @property
    def weight(self) -> int:
        return 1 if self is PairConvention.UNORDERED else 2

    @classmethod
    def parse(cls, value: Union[str, "PairConvention"]) -> "PairConvention":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ParameterError(
                f"Unknown pair convention {value!r}",
                {"allowed": [c.value for c in cls]},
            ) from None


@dataclass(frozen=True)
class EssiParams:
    """Parameters of the equal spin-spin interactions Hamiltonian (hbar = 1, rad/s)"""

    n: int
    omega0: float = 0.0
    coupling_A: float = 0.0
    coupling_B: float = 1.0
    pair_convention: PairConvention = PairConvention.UNORDERED

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int):
            raise ParameterError("Spin count must be an integer", {"n": self.n})
        _check_spin_count(self.n)
        for name in ("omega0", "coupling_A", "coupling_B"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise ParameterError(f"{name} must be a real number", {name: value}) from None
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite", {name: value})
            object.__setattr__(self, name, value)
        object.__setattr__(self, "pair_convention", PairConvention.parse(self.pair_convention))

    @property
    def pair_weight(self) -> int:
        return self.pair_convention.weight

    @property
    def flipflop_scale(self) -> float:
        """Off-diagonal matrix element between flip-flop neighbours"""
        return self.coupling_B * self.pair_weight

    def sectors(self) -> Tuple["Sector", ...]:
        return tuple(Sector(self.n, p) for p in range(self.n + 1))


@dataclass(frozen=True, order=True)
class Sector:
    """The (n, p) block: all product states with p up spins"""

    n: int
    p: int

    def __post_init__(self):
        if not isinstance(self.n, int) or not isinstance(self.p, int):
            raise ParameterError("Sector indices must be integers", {"n": self.n, "p": self.p})
        _check_spin_count(self.n)
        if not 0 <= self.p <= self.n:
            raise ParameterError("Up-spin count must satisfy 0 <= p <= n",
                                 {"n": self.n, "p": self.p})

    @property
    def dimension(self) -> int:
        return binomial(self.n, self.p)

    @property
    def reduced_p(self) -> int:
        """min(p, n - p); closed forms are evaluated here"""
        return min(self.p, self.n - self.p)

    @property
    def magnetization(self) -> float:
        return self.p - self.n / 2

    @property
    def degree(self) -> int:
        """Flip-flop neighbours of every state in the sector"""
        return self.p * (self.n - self.p)

    def __str__(self) -> str:
        return f"(n={self.n}, p={self.p})"


@dataclass(frozen=True)
class BasisState:
    """Product state |m_1, ..., m_n> as a bit mask of up positions"""

    n: int
    mask: int

    def __post_init__(self):
        _check_spin_count(self.n)
        if not 0 <= self.mask < (1 << self.n):
            raise ParameterError("Mask has bits outside positions 1..n",
                                 {"n": self.n, "mask": self.mask})

    @classmethod
    def from_positions(cls, n: int, up_positions: Iterable[int]) -> "BasisState":
        positions = _validated_positions(n, up_positions)
        mask = 0
        for pos in positions:
            mask |= 1 << (pos - 1)
        return cls(n, mask)

    @classmethod
    def from_label(cls, label: str) -> "BasisState":
        """Parse '+,-,-,+' (or '|+,-,-,+>') into a state"""
        signs = [s.strip() for s in label.strip().strip("|>⟩").split(",") if s.strip()]
        if not signs or any(s not in ("+", "-") for s in signs):
            raise ParameterError("Basis label must be a comma list of + and -", {"label": label})
        return cls.from_positions(len(signs), [i + 1 for i, s in enumerate(signs) if s == "+"])

    @property
    def up_positions(self) -> Tuple[int, ...]:
        return tuple(j + 1 for j in range(self.n) if self.mask >> j & 1)

    @property
    def p(self) -> int:
        return bin(self.mask).count("1")

    @property
    def sector(self) -> Sector:
        return Sector(self.n, self.p)

    def spin(self, position: int) -> float:
        """m_j = +1/2 or -1/2 at a 1-based position"""
        return 0.5 if self.mask >> (position - 1) & 1 else -0.5

    @property
    def label(self) -> str:
        return ",".join("+" if self.mask >> j & 1 else "-" for j in range(self.n))


def _validated_positions(n: int, positions: Iterable[int]) -> Tuple[int, ...]:
    try:
        ordered = tuple(sorted(int(x) for x in positions))
    except (TypeError, ValueError):
        raise CombinatoricsError("Positions must be integers", {"positions": positions}) from None
    if len(set(ordered)) != len(ordered):
        raise CombinatoricsError("Positions must be distinct", {"positions": ordered})
    if ordered and (ordered[0] < 1 or ordered[-1] > n):
        raise CombinatoricsError("Positions must lie in 1..n", {"n": n, "positions": ordered})
    return ordered


def binomial(n: int, k: int) -> int:
    """
    Exact binomial coefficient C(n, k), zero outside 0 <= k <= n.

    Args:
        n: 0 <= n <= 64
        k: any integer

    Returns:
        C(n, k) as a Python int that fits in an unsigned 64-bit word
    """
    if not 0 <= n <= MAX_BINOMIAL_N:
        raise CombinatoricsError(f"binomial supports 0 <= n <= {MAX_BINOMIAL_N}", {"n": n, "k": k})
    if k < 0 or k > n:
        return 0
    value = math.comb(n, k)
    if value > UINT64_MAX:
        raise CombinatoricsError("binomial exceeds the 64-bit exact range", {"n": n, "k": k})
    return value


def unrank_subset(n: int, p: int, r: int) -> Tuple[int, ...]:
    """Return the r-th p-subset of {1..n} in lexicographic order"""
    total = binomial(n, p)
    if not 0 <= r < total:
        raise CombinatoricsError("Rank out of range", {"n": n, "p": p, "rank": r, "count": total})

    positions = []
    remaining = p
    candidate = 1
    while remaining:
        # subsets whose next element is `candidate`
        block = binomial(n - candidate, remaining - 1)
        if r < block:
            positions.append(candidate)
            remaining -= 1
        else:
            r -= block
        candidate += 1
    return tuple(positions)


def rank_subset(n: int, positions: Iterable[int]) -> int:
    """Inverse of unrank_subset"""
    if not 0 <= n <= MAX_BINOMIAL_N:
        raise CombinatoricsError(f"rank_subset supports 0 <= n <= {MAX_BINOMIAL_N}", {"n": n})
    ordered = _validated_positions(n, positions)
    p = len(ordered)

    rank = 0
    previous = 0
    for slot, pos in enumerate(ordered):
        for skipped in range(previous + 1, pos):
            rank += binomial(n - skipped, p - slot - 1)
        previous = pos
    return rank


def magnetization(state: BasisState) -> float:
    """Total S^z eigenvalue M = p - n/2"""
    return state.p - state.n / 2


def iter_sector_masks(sector: Sector) -> Iterator[int]:
    """Masks of a sector in rank order"""
    for positions in combinations(range(sector.n), sector.p):
        mask = 0
        for bit in positions:
            mask |= 1 << bit
        yield mask


@lru_cache(maxsize=64)
def sector_basis(sector: Sector) -> Tuple[int, ...]:
    """All masks of a sector, indexed by rank"""
    logger.debug(f"Enumerating basis of sector {sector}: {sector.dimension} states")
    return tuple(iter_sector_masks(sector))


@lru_cache(maxsize=64)
def sector_index(sector: Sector) -> Dict[int, int]:
    """mask -> rank lookup for a sector"""
    return {mask: rank for rank, mask in enumerate(sector_basis(sector))}


def sector_labels(sector: Sector) -> Tuple[str, ...]:
    return tuple(BasisState(sector.n, mask).label for mask in sector_basis(sector))
