"""
Tests for closed-form verification, fixture checks and the discrepancy ledger
"""

import math
from fractions import Fraction

import pytest

from essi.core.basis import EssiParams, PairConvention, Sector
from essi.core.fixtures import FIVE_SPIN_ROWS
from essi.core.verifier import (
    DIAGONAL_DELTA_ID,
    FixtureStatus,
    check_five_spin_fixtures,
    cluster_eigenvalues,
    diagonal_formula_discrepancy,
    verify_sector,
    verify_up_to,
)
from essi.utils.config import config
from essi.utils.errors import ParameterError


class TestClustering:

    def test_groups_by_gap(self):
        clusters = cluster_eigenvalues([-2.0, -2.0 + 1e-12, 1.0, 1.0, 6.0], tau=1e-6)
        assert [c.count for c in clusters] == [2, 2, 1]
        assert clusters[0].representative == pytest.approx(-2.0)

    def test_empty(self):
        assert cluster_eigenvalues([], tau=1e-6) == []


class TestVerifySector:

    def test_eleven_spins_four_up(self):
        report = verify_sector(EssiParams(n=11), Sector(11, 4))
        assert report.match
        assert report.dimension == 330
        assert [level.multiplicity_found for level in report.levels] == [165, 110, 44, 10, 1]

    def test_independent_of_coupling_values(self):
        params = EssiParams(n=6, omega0=5.0, coupling_A=-3.0, coupling_B=0.0)
        assert verify_sector(params, Sector(6, 3)).match

    def test_ordered_convention(self):
        params = EssiParams(n=6, pair_convention=PairConvention.ORDERED)
        report = verify_sector(params, Sector(6, 2))
        assert report.match
        assert report.levels[-1].epsilon_ansatz == 2 * 8

    def test_tolerance_scales_with_degree(self):
        report = verify_sector(EssiParams(n=7), Sector(7, 3), tol=1e-8)
        assert report.tolerance == pytest.approx(1e-8 * 12)

    def test_fully_polarized_sector(self):
        report = verify_sector(EssiParams(n=4), Sector(4, 4))
        assert report.match
        assert report.distinct_count_found == 1


class TestFixtures:

    @pytest.fixture(scope="class")
    def verdicts(self):
        return {v.row_id: v for v in check_five_spin_fixtures()}

    def test_every_row_has_a_verdict(self, verdicts):
        assert len(verdicts) == len(FIVE_SPIN_ROWS)
        assert all(v.status in (FixtureStatus.CONFIRMED, FixtureStatus.DISCREPANT)
                   for v in verdicts.values())

    def test_printed_norms(self):
        assert all(row.norm_squared_matches for row in FIVE_SPIN_ROWS)

    def test_printed_basis_order(self, verdicts):
        assert all(v.basis_order_ok for v in verdicts.values())

    @pytest.mark.parametrize("prefix", ["p0-k0", "p2-k0", "p2-k2", "p3-k2", "p5-k0"])
    def test_confirmed_rows(self, verdicts, prefix):
        rows = [v for row_id, v in verdicts.items() if row_id.startswith(prefix + "-")]
        assert rows
        for v in rows:
            assert v.status is FixtureStatus.CONFIRMED
            assert v.residual <= 1e-12

    @pytest.mark.parametrize("row_id", ["p1-k1-r1", "p4-k1-r1"])
    def test_mistyped_eigenvalue(self, verdicts, row_id):
        v = verdicts[row_id]
        assert v.status is FixtureStatus.DISCREPANT
        assert v.printed_epsilon == 1
        assert v.rayleigh_quotient == pytest.approx(4.0)
        assert v.closed_form_epsilon == 4

    @pytest.mark.parametrize("p", [1, 4])
    def test_single_up_degenerate_level_confirmed(self, verdicts, p):
        rows = [v for row_id, v in verdicts.items() if row_id.startswith(f"p{p}-k0-")]
        assert len(rows) == 4
        assert all(v.status is FixtureStatus.CONFIRMED for v in rows)


class TestDiagonalDiscrepancy:

    @pytest.mark.parametrize("n", range(1, 13))
    def test_closed_form(self, n):
        for p in range(n + 1):
            expected = (Fraction(p * p - n * p) + Fraction(n * n - n, 2)) / 4
            assert diagonal_formula_discrepancy(n, p) == expected

    def test_two_spins(self):
        assert [diagonal_formula_discrepancy(2, p) for p in range(3)] == \
            [Fraction(1, 4), Fraction(0), Fraction(1, 4)]


class TestVerifyUpTo:

    @pytest.fixture(scope="class")
    def report(self):
        return verify_up_to(8, max_workers=4)

    def test_verdict(self, report):
        assert report.verdict
        assert not report.failed_sectors

    def test_sector_order(self, report):
        keys = [(s.sector.n, s.sector.p) for s in report.sectors]
        assert keys == [(n, p) for n in range(1, 9) for p in range(n + 1)]

    def test_oracle(self, report):
        assert [c.n for c in report.oracle_checks] == list(range(1, 9))
        assert report.oracle_ok
        assert all(c.max_abs_dev <= 1e-9 for c in report.oracle_checks)

    def test_known_discrepancies(self, report):
        identifiers = {d.identifier for d in report.known_discrepancies}
        assert "five-spin-table/p1-k1-r1" in identifiers
        assert "five-spin-table/p4-k1-r1" in identifiers
        assert DIAGONAL_DELTA_ID in identifiers

    def test_discrepancies_do_not_fail_the_run(self, report):
        assert report.verdict
        assert any(v.status is FixtureStatus.DISCREPANT for v in report.fixture_verdicts)

    def test_worker_count_does_not_change_results(self, report):
        serial = verify_up_to(8, max_workers=1)
        assert [s.max_abs_dev for s in serial.sectors] == [s.max_abs_dev for s in report.sectors]

    @pytest.mark.parametrize("n_max", [0, 15])
    def test_range(self, n_max):
        with pytest.raises(ParameterError):
            verify_up_to(n_max)

    def test_sector_errors_are_recorded(self):
        config.set('engine.max_dense_dimension', 15)
        report = verify_up_to(6, max_workers=2)
        failed = {(s.sector.n, s.sector.p) for s in report.failed_sectors}
        assert failed == {(6, 3)}
        bad = report.failed_sectors[0]
        assert bad.error is not None
        assert math.isnan(bad.max_abs_dev)
        assert not report.verdict
        assert not report.oracle_ok

    @pytest.mark.slow
    def test_twelve_spins(self):
        report = verify_up_to(12)
        assert report.verdict
        assert any(s.sector == Sector(11, 4) and s.dimension == 330 for s in report.sectors)
