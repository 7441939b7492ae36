"""
Tests for stick spectra, populations and line merging
"""

import math
from collections import defaultdict

import numpy as np
import pytest

from essi.core.basis import EssiParams, Sector
from essi.core.closed_form import total_spin
from essi.core.engine import build_full_hamiltonian, build_full_raising_operator, symmetric_eigen
from essi.core.transitions import (
    HBAR_OVER_KB,
    DiagonalTrack,
    Population,
    SpectralLine,
    merge_lines,
    stick_spectrum,
)
from essi.utils.errors import ParameterError, SectorTooLargeError


def line(frequency, intensity, p=0, k_from=0, k_to=0):
    return SpectralLine(frequency, intensity, Sector(3, p), Sector(3, p + 1), k_from, k_to,
                        0.0, frequency)


class TestSmallSystems:

    def test_single_spin(self):
        lines = stick_spectrum(EssiParams(n=1, omega0=2.5, coupling_A=0.4, coupling_B=0.3))
        assert len(lines) == 1
        assert lines[0].frequency == pytest.approx(2.5)
        assert lines[0].intensity == pytest.approx(1.0)

    def test_two_spins(self):
        params = EssiParams(n=2, omega0=10.0, coupling_A=0.8, coupling_B=0.3)
        lines = stick_spectrum(params)
        assert [(l.from_sector.p, l.to_sector.p) for l in lines] == [(0, 1), (1, 2)]
        assert lines[0].frequency == pytest.approx(10.0 - 0.4 + 0.3, abs=1e-10)
        assert lines[1].frequency == pytest.approx(10.0 + 0.4 - 0.3, abs=1e-10)
        assert lines[0].intensity == pytest.approx(2.0)
        assert lines[1].intensity == pytest.approx(2.0)
        assert abs(lines[1].frequency - lines[0].frequency) == pytest.approx(abs(0.8 - 0.6))

    def test_two_spin_lines_are_full_space_transitions(self):
        params = EssiParams(n=2, omega0=10.0, coupling_A=0.8, coupling_B=0.3)
        full = symmetric_eigen(build_full_hamiltonian(params), want_vectors=True)
        elements = full.eigenvectors.T @ build_full_raising_operator(2) @ full.eigenvectors
        expected = sorted(
            full.eigenvalues[i] - full.eigenvalues[j]
            for i in range(4) for j in range(4) if elements[i, j] ** 2 > 1e-9
        )
        found = sorted(l.frequency for l in stick_spectrum(params))
        np.testing.assert_allclose(found, expected, atol=1e-10)

    def test_printed_track(self):
        params = EssiParams(n=2, omega0=10.0, coupling_A=0.8, coupling_B=0.3)
        lines = stick_spectrum(params, diagonal_track=DiagonalTrack.PRINTED)
        assert lines[0].frequency == pytest.approx(10.0 - 0.75 * 0.8 + 0.3, abs=1e-10)

    def test_too_many_spins(self):
        with pytest.raises(SectorTooLargeError):
            stick_spectrum(EssiParams(n=13))


class TestInvariants:

    @pytest.mark.parametrize("n", range(1, 9))
    def test_uniform_sum_rule(self, n):
        params = EssiParams(n=n, omega0=3.0, coupling_A=0.37, coupling_B=-0.21)
        total = sum(l.intensity for l in stick_spectrum(params))
        assert total == pytest.approx(n * 2 ** (n - 1), rel=1e-9)

    @pytest.mark.parametrize("n", range(2, 8))
    def test_total_spin_is_conserved(self, n):
        params = EssiParams(n=n, omega0=1.0, coupling_A=0.2, coupling_B=0.5)
        for l in stick_spectrum(params):
            assert total_spin(n, l.from_sector.p, l.from_level_index) == \
                total_spin(n, l.to_sector.p, l.to_level_index)

    def test_frequencies_are_linear_in_b(self):
        by_key = defaultdict(list)
        for b in (0.0, 1.0, 2.0):
            params = EssiParams(n=5, omega0=4.0, coupling_A=0.3, coupling_B=b)
            for l in stick_spectrum(params):
                by_key[(l.from_sector.p, l.from_level_index, l.to_level_index)].append(
                    l.frequency)
        assert by_key
        for frequencies in by_key.values():
            assert len(frequencies) == 3
            assert frequencies[0] - 2 * frequencies[1] + frequencies[2] == \
                pytest.approx(0.0, abs=1e-9)

    def test_line_order(self):
        lines = stick_spectrum(EssiParams(n=4, omega0=1.0, coupling_A=0.1, coupling_B=0.2))
        keys = [(l.from_sector.p, l.from_level_index, l.to_level_index) for l in lines]
        assert keys == sorted(keys)

    def test_worker_count_does_not_change_lines(self):
        params = EssiParams(n=5, omega0=1.0, coupling_A=0.1, coupling_B=0.2)
        assert stick_spectrum(params, max_workers=1) == stick_spectrum(params, max_workers=3)


class TestPopulations:

    def test_boltzmann_validation(self):
        with pytest.raises(ParameterError):
            Population.boltzmann(0.0)
        with pytest.raises(ParameterError):
            Population("thermal")

    def test_high_temperature_matches_uniform(self):
        params = EssiParams(n=4, omega0=1.0, coupling_A=0.2, coupling_B=0.1)
        uniform = stick_spectrum(params)
        hot = stick_spectrum(params, Population.boltzmann(1e6))
        np.testing.assert_allclose([l.intensity for l in hot],
                                   [l.intensity for l in uniform], rtol=1e-9)

    def test_cold_single_spin(self):
        omega0 = 1e12
        params = EssiParams(n=1, omega0=omega0)
        lines = stick_spectrum(params, Population.boltzmann(1.0))
        ratio = math.exp(-HBAR_OVER_KB * omega0 / 1.0)
        assert lines[0].intensity == pytest.approx(2.0 / (1.0 + ratio))


class TestMerging:

    def test_coincident_lines_merge(self):
        lines = stick_spectrum(EssiParams(n=2, omega0=5.0, coupling_A=0.0, coupling_B=0.0))
        merged = merge_lines(lines)
        assert len(merged) == 1
        assert merged[0].frequency == pytest.approx(5.0)
        assert merged[0].intensity == pytest.approx(4.0)
        assert merged[0].merged_count == 2

    def test_weighted_frequency_and_provenance(self):
        merged = merge_lines([line(1.0, 1.0, p=0), line(1.0 + 1e-12, 3.0, p=1)], tau_line=1e-9)
        assert len(merged) == 1
        assert merged[0].frequency == pytest.approx(1.0 + 0.75e-12, abs=1e-15)
        assert merged[0].from_sector.p == 1

    def test_distinct_lines_kept_in_ascending_order(self):
        merged = merge_lines([line(3.0, 1.0), line(1.0, 1.0), line(2.0, 1.0)], tau_line=0.1)
        assert [l.frequency for l in merged] == [1.0, 2.0, 3.0]
        assert all(l.merged_count == 1 for l in merged)

    def test_empty(self):
        assert merge_lines([]) == []

    def test_negative_tau(self):
        with pytest.raises(ParameterError):
            merge_lines([line(1.0, 1.0)], tau_line=-1.0)
