"""
Printed eigen-data for five spins, transcribed row by row.

Each coefficient vector is stored as integer numerators over a printed
normalisation c * sqrt(m), so unit norm can be checked exactly:
sum(numerators^2) == c^2 * m. Level indices follow the printed eigenvalue
order inside each sector. Basis labels are in the printed column order.
"""

from dataclasses import dataclass
from typing import Dict, Tuple

FIVE_SPIN_N = 5


@dataclass(frozen=True)
class FixtureRow:
    row_id: str
    p: int
    level: int
    epsilon: int                 # printed, units of B
    degeneracy: int              # printed
    numerators: Tuple[int, ...]
    norm_factor: int             # c in c*sqrt(m)
    norm_radicand: int           # m in c*sqrt(m)

    @property
    def norm_squared_matches(self) -> bool:
        return sum(x * x for x in self.numerators) == self.norm_factor ** 2 * self.norm_radicand


_PRINTED_BASIS: Dict[int, Tuple[str, ...]] = {
    0: ("-,-,-,-,-",),
    1: ("+,-,-,-,-", "-,+,-,-,-", "-,-,+,-,-", "-,-,-,+,-", "-,-,-,-,+"),
    2: ("+,+,-,-,-", "+,-,+,-,-", "+,-,-,+,-", "+,-,-,-,+", "-,+,+,-,-",
        "-,+,-,+,-", "-,+,-,-,+", "-,-,+,+,-", "-,-,+,-,+", "-,-,-,+,+"),
    3: ("+,+,+,-,-", "+,+,-,+,-", "+,+,-,-,+", "+,-,+,+,-", "+,-,+,-,+",
        "+,-,-,+,+", "-,+,+,+,-", "-,+,+,-,+", "-,+,-,+,+", "-,-,+,+,+"),
    4: ("+,+,+,+,-", "+,+,+,-,+", "+,+,-,+,+", "+,-,+,+,+", "-,+,+,+,+"),
    5: ("+,+,+,+,+",),
}

_ONE_UP_LEVELS = (
    (-1, 4, (
        ((-1, 0, 0, 0, 1), 1, 2),
        ((-1, 0, 0, 2, -1), 1, 6),
        ((-1, 0, 3, -1, -1), 2, 3),
        ((-1, 4, -1, -1, -1), 2, 5),
    )),
    (1, 1, (
        ((1, 1, 1, 1, 1), 1, 5),
    )),
)

_PRINTED_LEVELS = {
    0: ((0, 1, (((1,), 1, 1),)),),
    1: _ONE_UP_LEVELS,
    2: (
        (-2, 5, (
            ((1, 1, -1, -1, -1, 0, 0, 0, 0, 1), 1, 6),
            ((1, -1, 1, -1, -1, 0, 0, 0, 2, -1), 1, 10),
            ((2, -2, -3, 3, -2, 0, 0, 5, -1, -2), 2, 15),
            ((-2, 2, 1, -1, -2, 0, 4, 1, -1, -2), 6, 1),
            ((-1, 1, -1, 1, -1, 3, -1, -1, 1, -1), 3, 2),
        )),
        (1, 4, (
            ((-1, -1, 1, 1, -2, 0, 0, 0, 0, 2), 2, 3),
            ((-1, 1, -1, 1, 0, -2, 0, 0, 2, 0), 2, 3),
            ((-2, -1, -1, -2, 1, 1, 0, 2, 1, 1), 3, 2),
            ((1, -4, -4, 1, 1, 1, 6, -4, 1, 1), 3, 10),
        )),
        (6, 1, (
            ((1, 1, 1, 1, 1, 1, 1, 1, 1, 1), 1, 10),
        )),
    ),
    3: (
        (-2, 5, (
            ((1, 1, -1, -1, 0, 0, -1, 0, 0, 1), 1, 6),
            ((1, -1, -1, 1, 0, 0, -1, 0, 2, -1), 1, 10),
            ((-3, 3, -2, 2, 0, 0, -2, 5, -1, -2), 2, 15),
            ((1, -1, -2, -2, 0, 4, 2, 1, -1, -2), 6, 1),
            ((-1, 1, -1, -1, 3, -1, 1, -1, 1, -1), 3, 2),
        )),
        (1, 4, (
            ((-2, -2, -2, 1, 1, 1, 0, 0, 0, 3), 2, 6),
            ((-6, 2, 2, -5, -5, 3, 0, 0, 8, 1), 2, 42),
            ((1, -5, 2, -5, 2, -4, 0, 7, 1, 1), 3, 14),
            ((1, 1, -4, 1, -4, -4, 6, 1, 1, 1), 3, 10),
        )),
        (6, 1, (
            ((1, 1, 1, 1, 1, 1, 1, 1, 1, 1), 1, 10),
        )),
    ),
    4: _ONE_UP_LEVELS,
    5: ((0, 1, (((1,), 1, 1),)),),
}


def _build_rows() -> Tuple[FixtureRow, ...]:
    rows = []
    for p in sorted(_PRINTED_LEVELS):
        for level, (epsilon, degeneracy, vectors) in enumerate(_PRINTED_LEVELS[p]):
            for r, (numerators, c, m) in enumerate(vectors, start=1):
                rows.append(FixtureRow(
                    row_id=f"p{p}-k{level}-r{r}",
                    p=p,
                    level=level,
                    epsilon=epsilon,
                    degeneracy=degeneracy,
                    numerators=numerators,
                    norm_factor=c,
                    norm_radicand=m,
                ))
    return tuple(rows)


FIVE_SPIN_ROWS: Tuple[FixtureRow, ...] = _build_rows()


def printed_basis(p: int) -> Tuple[str, ...]:
    return _PRINTED_BASIS[p]
