"""
export.py — field JSON, study CSV and log-log SVG output.

Field JSON:  {"n": int, "coeffs": [[re, im], ...]}, ascending wavenumbers −n/2 … n/2−1.
CSV:         config.CSV_COLUMNS, one row per record, rows sorted by (scheme, descending tau).
SVG:         one polyline per table, dashed reference slopes, legend with fitted orders.
"""

import csv
import json
import math
from pathlib import Path

import matplotlib
import numpy as np
from matplotlib.figure import Figure

import config
from core.errors import OutputError
from core.models import ConvergenceTable, FieldFile, Grid, Quantity, SpectralField
from core.spectral import spectral_field

# ── fields ───────────────────────────────────────────────────


def field_to_file(field: SpectralField) -> FieldFile:
    ascending = np.fft.fftshift(field.coeffs)
    return FieldFile(
        n=field.grid.n,
        coeffs=[(float(c.real), float(c.imag)) for c in ascending],
    )


def field_from_file(data: FieldFile) -> SpectralField:
    ascending = np.array([complex(re, im) for re, im in data.coeffs], dtype=np.complex128)
    return spectral_field(Grid(n=data.n), np.fft.ifftshift(ascending))


def save_field(field: SpectralField, path: str) -> None:
    try:
        out = Path(path)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps(field_to_file(field).model_dump(), indent=2), encoding="utf-8")
    except OSError as e:
        raise OutputError(path, e) from e


def load_field(path: str) -> SpectralField:
    with open(path, encoding="utf-8") as f:
        return field_from_file(FieldFile.model_validate(json.load(f)))


# ── CSV ──────────────────────────────────────────────────────


def csv_rows(tables: list[ConvergenceTable]) -> list[list]:
    records = [r for t in tables for r in t.records]
    records.sort(key=lambda r: (r.scheme.value, -r.tau))
    return [
        [
            r.scheme.value,
            r.n,
            r.seed,
            r.gamma,
            r.tau,
            r.t_final,
            "" if r.error_norm_gamma is None else r.error_norm_gamma,
            r.mass_drift,
            r.wall_time,
        ]
        for r in records
    ]


def emit_csv(tables: list[ConvergenceTable], path: str) -> None:
    # csv writes floats with repr(), which round-trips exactly
    try:
        out = Path(path)
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(config.CSV_COLUMNS)
            writer.writerows(csv_rows(tables))
    except OSError as e:
        raise OutputError(path, e) from e


# ── SVG ──────────────────────────────────────────────────────

_AXIS_LABELS = {
    Quantity.error: "H^γ error at T",
    Quantity.mass_drift: "max |M(uⁿ) − M₀|",
    Quantity.local_error: "one-step H^γ error",
    Quantity.step_drift: "one-step |M − M₀|",
    Quantity.nlri_correction: "‖NLRI − LRI‖ (one step)",
}


def _plottable(table: ConvergenceTable) -> list[tuple[float, float]]:
    return [(t, v) for t, v in table.points() if v > 0 and math.isfinite(v)]


def reference_guide(table: ConvergenceTable, slope: float, offset: float = 0.5):
    """Guide line C·τ^slope over the table's τ range, anchored below its first point."""
    pts = _plottable(table)
    if not pts:
        raise ValueError(f"No positive values to anchor a guide for {table.scheme.value}")
    tau0, v0 = pts[0]
    x = np.array([t for t, _ in pts])
    return x, offset * v0 * (x / tau0) ** slope


def emit_svg_plot(
    tables: list[ConvergenceTable],
    path: str,
    reference_slopes: list[float],
    quantity: Quantity | None = None,
) -> None:
    if not tables:
        raise ValueError("Nothing to plot: no tables given")
    for t in tables:
        if not t.records:
            raise ValueError(f"Cannot plot an empty table ({t.scheme.value})")
    quantity = Quantity(quantity) if quantity is not None else tables[0].quantity
    tables = [t.model_copy(update={"quantity": quantity}) for t in tables]

    with matplotlib.rc_context({"svg.fonttype": "none", "svg.hashsalt": config.PLOT["hashsalt"]}):
        fig = Figure(figsize=config.PLOT["figsize"])
        ax = fig.add_subplot()
        markers = config.PLOT["markers"]

        for i, table in enumerate(tables):
            pts = _plottable(table)
            order = "n/a" if math.isnan(table.fitted_order) else f"{table.fitted_order:.2f}"
            ax.loglog(
                [t for t, _ in pts],
                [v for _, v in pts],
                marker=markers[i % len(markers)],
                label=f"{table.scheme.value} (order {order})",
                gid=f"series-{table.scheme.value}",
            )

        for j, slope in enumerate(reference_slopes):
            x, y = reference_guide(tables[0], slope)
            ax.loglog(
                x,
                y,
                linestyle=config.PLOT["guide_style"],
                color=config.PLOT["guide_color"],
                label="_nolegend_",
                gid=f"guide-{j}",
            )
            ax.annotate(f"τ^{slope:g}", (x[-1], y[-1]), fontsize=8, color=config.PLOT["guide_color"])

        ax.set_xlabel("τ")
        ax.set_ylabel(_AXIS_LABELS[quantity])
        ax.grid(True, which="both", alpha=0.3)
        ax.legend()

        try:
            out = Path(path)
            out.parent.mkdir(parents=True, exist_ok=True)
            fig.savefig(out, format="svg", metadata={"Date": None})
        except OSError as e:
            raise OutputError(path, e) from e
