"""
Tests for the closed-form sector spectrum
"""

from fractions import Fraction

import pytest

from essi.core.basis import EssiParams, PairConvention, Sector, binomial
from essi.core.closed_form import (
    diagonal_energy_printed,
    distinct_eigenvalue_count,
    flipflop_degeneracy,
    flipflop_eigenvalue,
    flipflop_level,
    full_closed_spectrum,
    printed_pair_coefficient,
    sector_closed_spectrum,
    total_spin,
)
from essi.utils.errors import ParameterError

ALL_SECTORS = [(n, p) for n in range(1, 25) for p in range(n + 1)]


def levels(n, p):
    return [(flipflop_level(n, p, k), flipflop_degeneracy(n, p, k))
            for k in range(distinct_eigenvalue_count(n, p))]


class TestReferenceValues:

    def test_five_spins_two_up(self):
        assert levels(5, 2) == [(-2, 5), (1, 4), (6, 1)]

    def test_five_spins_one_up(self):
        assert levels(5, 1) == [(-1, 4), (4, 1)]

    def test_five_spins_three_up_mirrors_two_up(self):
        assert levels(5, 3) == levels(5, 2)

    def test_fully_polarized(self):
        assert levels(5, 0) == [(0, 1)]
        assert levels(5, 5) == [(0, 1)]

    def test_eleven_spins_four_up(self):
        result = levels(11, 4)
        assert [g for _, g in result] == [165, 110, 44, 10, 1]
        assert sum(g for _, g in result) == 330
        assert result[-1][0] == 4 * 7

    def test_distinct_count(self):
        assert distinct_eigenvalue_count(8, 3) == 4
        assert distinct_eigenvalue_count(8, 6) == 3

    def test_scaled_eigenvalue(self):
        assert flipflop_eigenvalue(5, 2, 0, 0.5) == pytest.approx(-1.0)


class TestExactIdentities:

    @pytest.mark.parametrize("n,p", ALL_SECTORS)
    def test_degeneracies_sum_to_dimension(self, n, p):
        assert sum(g for _, g in levels(n, p)) == binomial(n, p)

    @pytest.mark.parametrize("n,p", ALL_SECTORS)
    def test_traceless(self, n, p):
        assert sum(g * eps for eps, g in levels(n, p)) == 0

    @pytest.mark.parametrize("n,p", ALL_SECTORS)
    def test_second_moment(self, n, p):
        assert sum(g * eps * eps for eps, g in levels(n, p)) == binomial(n, p) * p * (n - p)

    @pytest.mark.parametrize("n,p", ALL_SECTORS)
    def test_top_level_is_the_degree(self, n, p):
        eps, g = levels(n, p)[-1]
        assert eps == p * (n - p)
        assert g == 1

    @pytest.mark.parametrize("n,p", ALL_SECTORS)
    def test_levels_are_ascending_and_positive(self, n, p):
        result = levels(n, p)
        assert all(g > 0 for _, g in result)
        assert all(a[0] < b[0] for a, b in zip(result, result[1:]))

    @pytest.mark.parametrize("n", range(1, 25))
    def test_multiplets_cover_the_full_space(self, n):
        spectra = full_closed_spectrum(EssiParams(n=n))
        assert sum(s.total_degeneracy for s in spectra) == 2 ** n


class TestTotalSpin:

    def test_values(self):
        assert total_spin(5, 2, 0) == Fraction(1, 2)
        assert total_spin(5, 2, 2) == Fraction(5, 2)
        assert total_spin(4, 2, 0) == 0

    @pytest.mark.parametrize("n", range(1, 13))
    def test_multiplet_counts(self, n):
        # each S multiplet contributes one state to every sector with |M| <= S
        for p in range(n + 1):
            m = abs(Fraction(2 * p - n, 2))
            for k in range(distinct_eigenvalue_count(n, p)):
                assert total_spin(n, p, k) >= m


class TestDiagonal:

    def test_printed_coefficient(self):
        assert printed_pair_coefficient(5, 2) == Fraction(12 - 30 + 25 - 5, 4)

    def test_printed_diagonal(self):
        value = diagonal_energy_printed(5, 2, omega0=2.0, coupling_A=4.0)
        assert value == pytest.approx(2.0 * (-1) / 2 + 4.0 * 0.5)


class TestSectorSpectrum:

    def test_energies(self, five_spin_params):
        spectrum = sector_closed_spectrum(five_spin_params, Sector(5, 2))
        assert spectrum.epsilons == (-2, 1, 6)
        assert spectrum.degeneracies == (5, 4, 1)
        diagonal = diagonal_energy_printed(5, 2, 1.0, 0.3)
        assert spectrum.diagonal_energy == pytest.approx(diagonal)
        assert spectrum.levels[0].total_energy == pytest.approx(diagonal - 2 * 0.7)

    def test_ordered_convention_doubles_flipflop(self):
        params = EssiParams(n=5, coupling_B=0.7, pair_convention=PairConvention.ORDERED)
        spectrum = sector_closed_spectrum(params, Sector(5, 2))
        assert spectrum.epsilons == (-2, 1, 6)
        assert spectrum.levels[2].total_energy == pytest.approx(
            spectrum.diagonal_energy + 2 * 0.7 * 6)


class TestRangeChecks:

    @pytest.mark.parametrize("n,p,k", [(5, 2, 3), (5, 2, -1), (5, 6, 0), (0, 0, 0)])
    def test_invalid(self, n, p, k):
        with pytest.raises(ParameterError):
            flipflop_level(n, p, k)
        with pytest.raises(ParameterError):
            flipflop_degeneracy(n, p, k)
