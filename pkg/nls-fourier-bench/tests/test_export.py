import csv
import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

import config
from core.errors import OutputError
from core.models import ConvergenceTable, Grid, Quantity, RunRecord
from core.spectral import from_function, spectral_field
from pipeline.export import emit_csv, emit_svg_plot, load_field, reference_guide, save_field

HEADER = ",".join(config.CSV_COLUMNS) + "\n"


def record(scheme: str, tau: float, error: float | None = None, drift: float = 0.0) -> RunRecord:
    return RunRecord(
        scheme=scheme,
        tau=tau,
        n=256,
        seed=1,
        t_final=1.0,
        gamma=2.0,
        error_norm_gamma=error,
        mass_drift=drift,
        wall_time=0.5,
    )


def table(scheme: str, order: float, c: float = 1.0) -> ConvergenceTable:
    taus = [2.0**-k for k in range(4, 8)]
    return ConvergenceTable(
        scheme=scheme,
        records=[record(scheme, t, error=c * t**order) for t in taus],
        fitted_order=order,
        fit_residual=0.0,
    )


class TestCsv:
    def test_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        emit_csv([], str(path))
        assert path.read_text() == HEADER

    def test_single_row(self, tmp_path):
        path = tmp_path / "one.csv"
        t = ConvergenceTable(scheme="lri", records=[record("lri", 0.015625, error=0.1, drift=1e-6)])
        emit_csv([t], str(path))
        assert path.read_text() == HEADER + "lri,256,1,2.0,0.015625,1.0,0.1,1e-06,0.5\n"

    def test_rows_sorted_by_scheme_then_descending_tau(self, tmp_path):
        path = tmp_path / "sorted.csv"
        emit_csv([table("nlri", 1.0), table("lri", 1.0)], str(path))
        rows = [line.split(",") for line in path.read_text().splitlines()[1:]]
        keys = [(r[0], float(r[4])) for r in rows]
        assert keys == sorted(keys, key=lambda k: (k[0], -k[1]))
        assert rows[0][0] == "lri"

    def test_drift_rows_leave_error_empty(self, tmp_path):
        path = tmp_path / "drift.csv"
        t = ConvergenceTable(scheme="nlri", quantity=Quantity.mass_drift, records=[record("nlri", 0.1, drift=3e-9)])
        emit_csv([t], str(path))
        assert path.read_text().splitlines()[1].split(",")[6] == ""

    def test_identical_inputs_give_identical_bytes(self, tmp_path):
        tables = [table("lri", 1.0), table("nlri", 1.0, 0.9)]
        emit_csv(tables, str(tmp_path / "a.csv"))
        emit_csv(tables, str(tmp_path / "b.csv"))
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_numeric_fields_parse_back_exactly(self, tmp_path):
        path = tmp_path / "exact.csv"
        t = ConvergenceTable(scheme="lri", records=[record("lri", 0.1, error=1 / 3, drift=2 / 7)])
        emit_csv([t], str(path))
        with open(path, newline="") as f:
            [row] = list(csv.DictReader(f))
        assert float(row["error"]) == 1 / 3
        assert float(row["mass_drift"]) == 2 / 7
        assert float(row["tau"]) == 0.1

    def test_unwritable_path(self, tmp_path):
        with pytest.raises(OutputError, match="Cannot write"):
            emit_csv([], str(tmp_path))


class TestFieldFile:
    def test_roundtrip_is_exact(self, tmp_path):
        u = from_function(Grid(n=16), lambda x: np.exp(1j * x) / 3 + np.sin(5 * x))
        path = tmp_path / "u.json"
        save_field(u, str(path))
        np.testing.assert_array_equal(load_field(str(path)).coeffs, u.coeffs)

    def test_ascending_wavenumber_layout(self, tmp_path):
        c = np.zeros(8, dtype=np.complex128)
        c[Grid(n=8).index(-4)] = 2.0
        c[Grid(n=8).index(3)] = 1j
        path = tmp_path / "u.json"
        save_field(spectral_field(Grid(n=8), c), str(path))
        data = json.loads(path.read_text())
        assert data["n"] == 8
        assert data["coeffs"][0] == [2.0, 0.0]
        assert data["coeffs"][-1] == [0.0, 1.0]

    def test_length_mismatch_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"n": 8, "coeffs": [[0.0, 0.0]] * 6}))
        with pytest.raises(ValueError, match="6 coeffs for n=8"):
            load_field(str(path))


class TestSvg:
    def test_two_series_and_guide(self, tmp_path):
        path = tmp_path / "plot.svg"
        emit_svg_plot([table("lri", 1.0), table("nlri", 1.0, 0.5)], str(path), [1.0])

        root = ET.parse(path).getroot()
        assert root.tag.endswith("svg")
        ids = [el.get("id") for el in root.iter() if el.get("id")]
        assert sorted(i for i in ids if i.startswith("series-")) == ["series-lri", "series-nlri"]
        assert "guide-0" in ids

        labels = ["".join(el.itertext()) for el in root.iter() if el.tag.endswith("}text")]
        legend = [s for s in labels if "(order " in s]
        assert sorted(legend) == ["lri (order 1.00)", "nlri (order 1.00)"]

    def test_quantity_override(self, tmp_path):
        path = tmp_path / "drift.svg"
        t = ConvergenceTable(
            scheme="nlri",
            quantity=Quantity.mass_drift,
            records=[record("nlri", tau, drift=tau**5) for tau in (0.1, 0.05, 0.025)],
        )
        emit_svg_plot([t], str(path), [5.0], quantity="mass_drift")
        assert "series-nlri" in path.read_text()

    def test_empty_table_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="empty table"):
            emit_svg_plot([ConvergenceTable(scheme="lri", records=[])], str(tmp_path / "x.svg"), [1.0])

    def test_reference_guide_slope(self):
        x, y = reference_guide(table("lri", 1.3), 2.0)
        slope = np.diff(np.log(y)) / np.diff(np.log(x))
        np.testing.assert_allclose(slope, 2.0)
        assert y[0] < table("lri", 1.3).records[0].error_norm_gamma
