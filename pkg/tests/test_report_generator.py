"""
Tests for report serialization, schema validation and atomic output
"""

import csv
import io
import json
import math
from fractions import Fraction

import numpy as np
import pytest

from essi.core.basis import EssiParams, PairConvention, Sector
from essi.core.closed_form import full_closed_spectrum
from essi.core.engine import sector_spectrum
from essi.core.report_generator import CSV_TABLES, ReportGenerator, list_schemas, unit_factor
from essi.core.transitions import Population, stick_spectrum
from essi.core.verifier import check_five_spin_fixtures, verify_up_to
from essi.utils.errors import ReportError


@pytest.fixture
def generator():
    return ReportGenerator()


@pytest.fixture(scope="module")
def small_report():
    return verify_up_to(4, max_workers=2)


class TestJsonPreparation:

    def test_scalar_conversions(self, generator):
        prepared = generator._prepare_json_data({
            "fraction": Fraction(3, 2),
            "convention": PairConvention.ORDERED,
            "sector": Sector(4, 1),
            "array": np.arange(3),
            "numpy_float": np.float64(0.5),
            "nan": float("nan"),
            "tuple": (1, 2),
            "flag": np.bool_(True),
        })
        assert prepared == {
            "fraction": "3/2",
            "convention": "ordered-distinct",
            "sector": {"n": 4, "p": 1},
            "array": [0, 1, 2],
            "numpy_float": 0.5,
            "nan": None,
            "tuple": [1, 2],
            "flag": True,
        }

    def test_schemas_are_shipped(self):
        assert set(list_schemas()) == {"averages", "closed_form", "sector_eigen", "sectors",
                                       "spectrum", "five_spin", "verification_report"}

    def test_schema_violation(self, generator):
        with pytest.raises(ReportError):
            generator.to_json({"n": 3}, "sectors")


class TestPayloads:

    def test_sectors(self, generator):
        data = json.loads(generator.to_json(generator.sectors_payload(5), "sectors"))
        assert [row["dimension"] for row in data["sectors"]] == [1, 5, 10, 10, 5, 1]
        assert data["total_dimension"] == 32

    def test_closed_form_hz(self, generator):
        params = EssiParams(n=3, omega0=2 * math.pi, coupling_B=2 * math.pi)
        spectra = full_closed_spectrum(params)
        data = json.loads(generator.to_json(
            generator.closed_form_payload(params, spectra, unit="hz"), "closed_form"))
        assert data["params"]["omega0"] == pytest.approx(1.0)
        top = data["sectors"][-1]
        assert top["diagonal_energy"] == pytest.approx(1.5)
        assert data["sectors"][1]["levels"][0]["total_spin"] == "1/2"

    def test_eigen_payload(self, generator, five_spin_params):
        sector = Sector(5, 2)
        result = sector_spectrum(five_spin_params, sector, want_vectors=True)
        data = json.loads(generator.to_json(
            generator.eigen_payload(five_spin_params, sector, result, 0.0, []), "sector_eigen"))
        assert len(data["eigenvectors"]) == 10
        assert data["basis"][0] == "+,+,-,-,-"

    def test_verification_timing_is_null_by_default(self, generator, small_report):
        data = json.loads(generator.to_json(generator.verification_payload(small_report),
                                            "verification_report"))
        assert data["wall_time_ms"] is None
        assert data["verdict"] is True
        timed = generator.verification_payload(small_report, include_timing=True)
        assert timed["wall_time_ms"] == small_report.wall_time_ms

    def test_verification_json_is_deterministic(self, generator):
        first = generator.to_json(generator.verification_payload(verify_up_to(5)),
                                  "verification_report")
        second = generator.to_json(generator.verification_payload(verify_up_to(5)),
                                   "verification_report")
        assert first == second

    def test_fixture_payload(self, generator):
        data = json.loads(generator.to_json(
            generator.fixtures_payload(check_five_spin_fixtures()), "five_spin"))
        assert data["discrepant"] == ["p1-k1-r1", "p4-k1-r1"]

    def test_spectrum_payload(self, generator):
        params = EssiParams(n=2, omega0=10.0, coupling_A=0.8, coupling_B=0.3)
        lines = stick_spectrum(params)
        data = json.loads(generator.to_json(
            generator.spectrum_payload(params, Population.uniform(), "first-principles",
                                       lines, merged=False), "spectrum"))
        assert data["total_intensity"] == pytest.approx(4.0)
        assert [l["p_from"] for l in data["lines"]] == [0, 1]


class TestWriters:

    def test_csv_header_is_stable(self, generator):
        params = EssiParams(n=2, omega0=10.0, coupling_A=0.8, coupling_B=0.3)
        stream = io.StringIO()
        count = generator.write_csv(generator.spectrum_table(params, stick_spectrum(params)),
                                    stream)
        rows = list(csv.reader(io.StringIO(stream.getvalue())))
        assert rows[0] == ["frequency", "intensity", "p_from", "p_to"]
        assert count == 2
        assert float(rows[1][0]) == pytest.approx(9.9)

    def test_csv_columns_registered(self):
        assert CSV_TABLES["spectrum"] == ("frequency", "intensity", "p_from", "p_to")

    def test_matrix_csv(self, generator):
        stream = io.StringIO()
        generator.write_matrix_csv(np.array([[0.0, 1.5], [1.5, 0.0]]), stream)
        assert stream.getvalue() == "0.0,1.5\n1.5,0.0\n"

    def test_table_rendering(self, generator):
        stream = io.StringIO()
        generator.render_table(generator.sectors_table(3), stream)
        text = stream.getvalue()
        assert "Sector sizes for n=3" in text
        assert "dimension" in text

    def test_html_report(self, generator, small_report):
        html = generator.render_html(small_report, title="Check <n>")
        assert "Check &lt;n&gt;" in html
        assert "five-spin-table/p1-k1-r1" in html
        assert "PASS" in html

    def test_html_only_for_verification(self, generator):
        with pytest.raises(ReportError):
            generator.emit("html", io.StringIO(), generator.sectors_table(2))

    def test_unit_factor(self):
        assert unit_factor("rad/s") == 1.0
        assert unit_factor("hz") == pytest.approx(1 / (2 * math.pi))
        with pytest.raises(ReportError):
            unit_factor("ppm")


class TestAtomicOutput:

    def test_file_written(self, generator, tmp_path):
        target = tmp_path / "out" / "sectors.json"
        with generator.atomic_output(str(target), io.StringIO()) as stream:
            stream.write(generator.to_json(generator.sectors_payload(2), "sectors"))
        assert json.loads(target.read_text(encoding="utf-8"))["n"] == 2
        assert list(target.parent.iterdir()) == [target]

    def test_failure_leaves_no_file(self, generator, tmp_path):
        target = tmp_path / "broken.json"
        with pytest.raises(ReportError):
            with generator.atomic_output(str(target), io.StringIO()) as stream:
                stream.write("{")
                generator.to_json({"n": 1}, "sectors")
        assert not target.exists()
        assert list(tmp_path.iterdir()) == []

    def test_stdout_passthrough(self, generator):
        stdout = io.StringIO()
        with generator.atomic_output(None, stdout) as stream:
            stream.write("x")
        assert stdout.getvalue() == "x"
