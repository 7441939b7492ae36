"""
Report generation module for ESSI.
Serializes spectra, verification reports and stick spectra as JSON, CSV,
human-readable tables and HTML.
"""

import csv
import dataclasses
import io
import json
import math
import os
import tempfile
from contextlib import contextmanager
from datetime import datetime
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, TextIO, Tuple

import jsonschema
import numpy as np

try:
    from jinja2 import Environment, FileSystemLoader
    JINJA2_AVAILABLE = True
except ImportError:
    JINJA2_AVAILABLE = False

try:
    from rich.console import Console
    from rich.table import Table
    from rich.text import Text
    RICH_AVAILABLE = True
except ImportError:
    RICH_AVAILABLE = False

from .. import __version__
from ..utils.errors import ReportError
from ..utils.logger import get_logger
from .basis import EssiParams, Sector, binomial, sector_labels
from .closed_form import ClosedFormSpectrum
from .couplings import CouplingAverages
from .engine import SectorEigenResult
from .transitions import Population, SpectralLine
from .verifier import FixtureVerdict, VerificationReport

logger = get_logger(__name__)

PACKAGE_DIR = Path(__file__).resolve().parent.parent
SCHEMA_DIR = PACKAGE_DIR / "schemas"
TEMPLATE_DIR = PACKAGE_DIR / "templates"

UNITS = ("rad/s", "hz")

# Stable CSV column orders
CSV_TABLES: Dict[str, Tuple[str, ...]] = {
    "sectors": ("p", "magnetization", "dimension"),
    "closed_form": ("n", "p", "k", "epsilon", "degeneracy", "total_spin",
                    "diagonal_energy", "total_energy"),
    "eigenvalues": ("index", "eigenvalue", "flipflop_eigenvalue"),
    "verification": ("n", "p", "dimension", "distinct_found", "distinct_expected",
                     "max_abs_dev", "match"),
    "fixtures": ("row_id", "p", "level", "printed_epsilon", "printed_degeneracy",
                 "closed_form_epsilon", "status", "residual", "rayleigh_quotient",
                 "unit_norm", "basis_order_ok"),
    "spectrum": ("frequency", "intensity", "p_from", "p_to"),
    "averages": ("matrix", "mean", "spread", "uniform_input", "mean_shifted"),
}


def unit_factor(unit: str) -> float:
    """Multiplier from rad/s to the requested unit"""
    if unit not in UNITS:
        raise ReportError(f"Unknown unit {unit!r}", {"allowed": list(UNITS)})
    return 1.0 if unit == "rad/s" else 1.0 / (2.0 * math.pi)


@dataclasses.dataclass
class TabularData:
    """Rows for CSV and table output; ``rows`` may be a generator"""

    name: str
    title: str
    rows: Iterable[Sequence[Any]]

    @property
    def columns(self) -> Tuple[str, ...]:
        return CSV_TABLES[self.name]


@lru_cache(maxsize=None)
def load_schema(name: str) -> Dict[str, Any]:
    path = SCHEMA_DIR / f"{name}.schema.json"
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ReportError(f"Cannot load schema {name}: {e}", {"path": str(path)}) from e


def _params_dict(params: EssiParams, factor: float) -> Dict[str, Any]:
    return {
        "n": params.n,
        "omega0": params.omega0 * factor,
        "coupling_A": params.coupling_A * factor,
        "coupling_B": params.coupling_B * factor,
        "pair_convention": params.pair_convention.value,
    }


class ReportGenerator:
    """Serializer for every ESSI output"""

    def __init__(self, template_dir: Optional[str] = None):
        """
        Initialize ReportGenerator

        Args:
            template_dir: Directory containing report templates
        """
        self.template_dir = Path(template_dir) if template_dir else TEMPLATE_DIR

    # -- JSON preparation -------------------------------------------------

    def _prepare_json_data(self, data: Any) -> Any:
        """Prepare data for JSON serialization"""
        if isinstance(data, dict):
            return {str(k): self._prepare_json_data(v) for k, v in data.items()}
        elif isinstance(data, (list, tuple)):
            return [self._prepare_json_data(item) for item in data]
        elif isinstance(data, Sector):
            return {"n": data.n, "p": data.p}
        elif dataclasses.is_dataclass(data) and not isinstance(data, type):
            return {f.name: self._prepare_json_data(getattr(data, f.name))
                    for f in dataclasses.fields(data)}
        elif isinstance(data, Enum):
            return data.value
        elif isinstance(data, Fraction):
            return str(data)
        elif isinstance(data, np.ndarray):
            return self._prepare_json_data(data.tolist())
        elif isinstance(data, (bool, np.bool_)):
            return bool(data)
        elif isinstance(data, (int, np.integer)):
            return int(data)
        elif isinstance(data, (float, np.floating)):
            value = float(data)
            return value if math.isfinite(value) else None
        elif isinstance(data, datetime):
            return data.isoformat()
        elif isinstance(data, set):
            return sorted(data)
        else:
            return data

    def validate(self, payload: Dict[str, Any], schema_name: str) -> None:
        try:
            jsonschema.validate(instance=payload, schema=load_schema(schema_name))
        except jsonschema.ValidationError as e:
            raise ReportError(f"Payload does not match schema {schema_name}: {e.message}",
                              {"path": "/".join(str(p) for p in e.absolute_path)}) from e

    def to_json(self, payload: Dict[str, Any], schema_name: str) -> str:
        """Validated, deterministic JSON text"""
        prepared = self._prepare_json_data(payload)
        self.validate(prepared, schema_name)
        return json.dumps(prepared, indent=2, ensure_ascii=False, allow_nan=False) + "\n"

    # -- payload builders -------------------------------------------------

    def sectors_payload(self, n: int) -> Dict[str, Any]:
        rows = [{"p": p, "magnetization": p - n / 2, "dimension": binomial(n, p)}
                for p in range(n + 1)]
        return {"n": n, "sectors": rows, "total_dimension": 2 ** n}

    def sectors_table(self, n: int) -> TabularData:
        rows = ((p, p - n / 2, binomial(n, p)) for p in range(n + 1))
        return TabularData("sectors", f"Sector sizes for n={n}", rows)

    def closed_form_payload(self, params: EssiParams, spectra: Sequence[ClosedFormSpectrum],
                            unit: str = "rad/s") -> Dict[str, Any]:
        factor = unit_factor(unit)
        return {
            "n": params.n,
            "unit": unit,
            "params": _params_dict(params, factor),
            "sectors": [{
                "p": s.sector.p,
                "q": s.sector.reduced_p,
                "dimension": s.sector.dimension,
                "distinct_count": len(s.levels),
                "diagonal_energy": s.diagonal_energy * factor,
                "levels": [{
                    "k": level.k,
                    "epsilon": level.epsilon,
                    "degeneracy": level.degeneracy,
                    "total_spin": level.total_spin,
                    "total_energy": level.total_energy * factor,
                } for level in s.levels],
            } for s in spectra],
        }

    def closed_form_table(self, params: EssiParams, spectra: Sequence[ClosedFormSpectrum],
                          unit: str = "rad/s") -> TabularData:
        factor = unit_factor(unit)
        rows = ((s.sector.n, s.sector.p, level.k, level.epsilon, level.degeneracy,
                 str(level.total_spin), s.diagonal_energy * factor, level.total_energy * factor)
                for s in spectra for level in s.levels)
        return TabularData("closed_form", f"Closed-form levels for n={params.n} [{unit}]", rows)

    def eigen_payload(self, params: EssiParams, sector: Sector, result: SectorEigenResult,
                      diagonal_energy: float, clusters: Sequence[Any],
                      unit: str = "rad/s") -> Dict[str, Any]:
        factor = unit_factor(unit)
        vectors = None
        if result.eigenvectors is not None:
            vectors = [result.eigenvectors[:, i] for i in range(result.dimension)]
        return {
            "n": sector.n,
            "p": sector.p,
            "unit": unit,
            "params": _params_dict(params, factor),
            "dimension": sector.dimension,
            "basis": list(sector_labels(sector)),
            "diagonal_energy": diagonal_energy * factor,
            "eigenvalues": result.eigenvalues * factor,
            "flipflop_eigenvalues": (result.eigenvalues - diagonal_energy) * factor,
            "levels": [{"energy": c.representative * factor, "multiplicity": c.count}
                       for c in clusters],
            "residual_bound": result.residual_bound * factor,
            "eigenvectors": vectors,
        }

    def eigen_table(self, sector: Sector, result: SectorEigenResult, diagonal_energy: float,
                    unit: str = "rad/s") -> TabularData:
        factor = unit_factor(unit)
        rows = ((i, value * factor, (value - diagonal_energy) * factor)
                for i, value in enumerate(result.eigenvalues.tolist()))
        return TabularData("eigenvalues", f"Eigenvalues of sector {sector} [{unit}]", rows)

    def verification_payload(self, report: VerificationReport,
                             include_timing: bool = False) -> Dict[str, Any]:
        return {
            "n_max": report.n_max,
            "convention": report.convention,
            "verdict": report.verdict,
            "oracle_ok": report.oracle_ok,
            "sectors": [{
                "n": s.sector.n,
                "p": s.sector.p,
                "dimension": s.dimension,
                "distinct_count_found": s.distinct_count_found,
                "distinct_count_expected": s.distinct_count_expected,
                "level_table": s.levels,
                "match": s.match,
                "max_abs_dev": s.max_abs_dev,
                "tolerance": s.tolerance,
                "error": s.error,
            } for s in report.sectors],
            "oracle_checks": report.oracle_checks,
            "fixture_verdicts": report.fixture_verdicts,
            "known_discrepancies": report.known_discrepancies,
            "tolerances": report.tolerances,
            "wall_time_ms": report.wall_time_ms if include_timing else None,
        }

    def verification_table(self, report: VerificationReport) -> TabularData:
        rows = ((s.sector.n, s.sector.p, s.dimension, s.distinct_count_found,
                 s.distinct_count_expected, s.max_abs_dev, s.match) for s in report.sectors)
        verdict = "PASS" if report.verdict else "FAIL"
        return TabularData("verification",
                           f"Closed-form verification up to n={report.n_max}: {verdict}", rows)

    def fixtures_payload(self, verdicts: Sequence[FixtureVerdict]) -> Dict[str, Any]:
        return {
            "n": 5,
            "rows": verdicts,
            "discrepant": [v.row_id for v in verdicts if v.status.value == "DISCREPANT"],
        }

    def fixtures_table(self, verdicts: Sequence[FixtureVerdict]) -> TabularData:
        rows = ((v.row_id, v.p, v.level, v.printed_epsilon, v.printed_degeneracy,
                 v.closed_form_epsilon, v.status.value, v.residual, v.rayleigh_quotient,
                 v.unit_norm, v.basis_order_ok) for v in verdicts)
        return TabularData("fixtures", "Five-spin reference rows", rows)

    def spectrum_payload(self, params: EssiParams, population: Population,
                         diagonal_track: str, lines: Sequence[SpectralLine], merged: bool,
                         unit: str = "rad/s") -> Dict[str, Any]:
        factor = unit_factor(unit)
        return {
            "n": params.n,
            "unit": unit,
            "params": _params_dict(params, factor),
            "population": {"kind": population.kind, "temperature": population.temperature},
            "diagonal_track": diagonal_track,
            "merged": merged,
            "total_intensity": sum(line.intensity for line in lines),
            "lines": [{
                "frequency": line.frequency * factor,
                "intensity": line.intensity,
                "p_from": line.from_sector.p,
                "p_to": line.to_sector.p,
                "k_from": line.from_level_index,
                "k_to": line.to_level_index,
                "from_energy": line.from_energy * factor,
                "to_energy": line.to_energy * factor,
                "merged_count": line.merged_count,
            } for line in lines],
        }

    def spectrum_table(self, params: EssiParams, lines: Sequence[SpectralLine],
                       unit: str = "rad/s") -> TabularData:
        factor = unit_factor(unit)
        rows = ((line.frequency * factor, line.intensity, line.from_sector.p, line.to_sector.p)
                for line in lines)
        return TabularData("spectrum", f"Stick spectrum for n={params.n} [{unit}]", rows)

    def averages_payload(self, averages: CouplingAverages, params: EssiParams) -> Dict[str, Any]:
        return {
            "n": params.n,
            "params": _params_dict(params, 1.0),
            "convention": averages.convention,
            "normalization": averages.normalization,
            "pair_terms": averages.pair_terms,
            "A": averages.a,
            "B": averages.b,
        }

    def averages_table(self, averages: CouplingAverages) -> TabularData:
        rows = ((label, avg.mean, avg.spread, avg.uniform_input, avg.mean_shifted)
                for label, avg in (("A", averages.a), ("B", averages.b)))
        return TabularData("averages", "Coupling averages", rows)

    # -- writers ----------------------------------------------------------

    def write_csv(self, table: TabularData, stream: TextIO) -> int:
        """Write header and rows one by one; returns the row count"""
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(table.columns)
        count = 0
        for row in table.rows:
            writer.writerow([self._csv_cell(cell) for cell in row])
            count += 1
        return count

    def write_matrix_csv(self, matrix: np.ndarray, stream: TextIO) -> None:
        """Dense matrix, one row per line, no header"""
        writer = csv.writer(stream, lineterminator="\n")
        for row in np.asarray(matrix, dtype=float):
            writer.writerow([repr(float(x)) for x in row])

    @staticmethod
    def _csv_cell(value: Any) -> Any:
        if isinstance(value, (float, np.floating)):
            return repr(float(value))
        if value is None:
            return ""
        return value

    def render_table(self, table: TabularData, stream: TextIO) -> None:
        """Human-readable table; rich when available"""
        rows = [[self._text_cell(c) for c in row] for row in table.rows]
        if RICH_AVAILABLE:
            console = Console(file=stream, width=160, color_system=None, soft_wrap=False)
            rich_table = Table(title=Text(table.title))
            for column in table.columns:
                rich_table.add_column(column, justify="right" if column != "row_id" else "left")
            for row in rows:
                rich_table.add_row(*(Text(cell) for cell in row))
            console.print(rich_table)
            return

        widths = [max(len(c), *(len(r[i]) for r in rows)) if rows else len(c)
                  for i, c in enumerate(table.columns)]
        stream.write(f"{table.title}\n")
        stream.write("  ".join(c.rjust(w) for c, w in zip(table.columns, widths)) + "\n")
        stream.write("-" * (sum(widths) + 2 * (len(widths) - 1)) + "\n")
        for row in rows:
            stream.write("  ".join(c.rjust(w) for c, w in zip(row, widths)) + "\n")

    @staticmethod
    def _text_cell(value: Any) -> str:
        if isinstance(value, (float, np.floating)):
            return f"{float(value):.12g}"
        if value is None:
            return "-"
        return str(value)

    def render_html(self, report: VerificationReport, title: str = "ESSI Verification Report",
                    include_timing: bool = False) -> str:
        """HTML verification report from the jinja2 template"""
        if not JINJA2_AVAILABLE:
            raise ReportError("jinja2 is required for HTML reports")
        env = Environment(
            loader=FileSystemLoader(str(self.template_dir)),
            autoescape=True
        )
        template = env.get_template("verification_report.html")
        data = self._prepare_json_data(self.verification_payload(report, include_timing))
        return template.render(report_title=title, version=__version__, report=data)

    @contextmanager
    def atomic_output(self, path: Optional[str], stdout: TextIO) -> Iterator[TextIO]:
        """
        Yield a stream for output; files are written to a temporary sibling
        and moved into place only when the block completes.
        """
        if path is None:
            yield stdout
            return
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(dir=str(target.parent), prefix=f".{target.name}.",
                                        suffix=".tmp")
        try:
            with io.open(fd, "w", encoding="utf-8", newline="") as handle:
                yield handle
            os.replace(tmp_name, target)
            logger.info(f"Report written: {target}")
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise

    def emit(self, fmt: str, stream: TextIO, table: TabularData,
             payload: Optional[Dict[str, Any]] = None, schema_name: Optional[str] = None,
             html: Optional[str] = None) -> None:
        """Write one output in the requested format"""
        if fmt == "json":
            if payload is None or schema_name is None:
                raise ReportError("JSON output needs a payload and schema")
            stream.write(self.to_json(payload, schema_name))
        elif fmt == "csv":
            self.write_csv(table, stream)
        elif fmt == "table":
            self.render_table(table, stream)
        elif fmt == "html":
            if html is None:
                raise ReportError("HTML output is available for verification reports only")
            stream.write(html)
        else:
            raise ReportError(f"Unknown output format {fmt!r}")


def list_schemas() -> List[str]:
    return sorted(p.name[: -len(".schema.json")] for p in SCHEMA_DIR.glob("*.schema.json"))
