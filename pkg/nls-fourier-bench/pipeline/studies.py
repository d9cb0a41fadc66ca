"""
Convergence, mass-drift and single-step studies over a (scheme, τ) grid.

Every (scheme, τ) task is independent; with workers > 1 they fan out over a
thread pool and are re-sorted before tables are built, so serial and parallel
runs return identical tables.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional

import numpy as np
from tqdm import tqdm

import config
from core.errors import InsufficientDataError
from core.models import (
    ConvergenceTable,
    Quantity,
    RunRecord,
    Scheme,
    SchemeConfig,
    SpectralField,
)
from core.spectral import mass, sobolev_norm, spectral_field
from pipeline.oracle import oracle_evolve
from pipeline.schemes import lri_step, nlri_step, step
from pipeline.trajectory import run_trajectory

# ── order fitting ────────────────────────────────────────────


def fit_order(
    records: Iterable[tuple[float, float]],
    floor: float = config.FIT["error_floor"],
    min_points: int = config.FIT["min_points"],
) -> tuple[float, float]:
    """Least-squares slope of log(error) against log(tau).

    Points below `floor` (machine floor) or non-finite are dropped first.
    Returns (order, residual) with residual the RMS deviation in natural log.
    """
    usable = [
        (t, e)
        for t, e in records
        if e is not None and t > 0 and math.isfinite(e) and e >= floor
    ]
    if len(usable) < min_points:
        raise InsufficientDataError(len(usable), min_points)

    x = np.log([t for t, _ in usable])
    y = np.log([e for _, e in usable])
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return float(slope), residual


def trim_plateau(
    points: Iterable[tuple[float, Optional[float]]],
    floor: float = 0.0,
    ratio: float = config.FIT["plateau_ratio"],
) -> list[tuple[float, float]]:
    """Cut a decaying series where it flattens onto its floor.

    Points below `floor` are dropped first; the rest run in decreasing tau.
    The tail starts at the first point whose local slope is below `ratio`
    times the slope fitted to the points before it.
    """
    pts = sorted(
        ((t, e) for t, e in points if e is not None and math.isfinite(e) and e > 0 and e >= floor),
        key=lambda p: -p[0],
    )
    for i in range(2, len(pts)):
        head = pts[:i]
        lead = np.polyfit(np.log([t for t, _ in head]), np.log([e for _, e in head]), 1)[0]
        (t0, e0), (t1, e1) = pts[i - 1], pts[i]
        local = math.log(e0 / e1) / math.log(t0 / t1)
        if lead > 0 and local < ratio * lead:
            return head
    return pts


def _fit_table(
    scheme: Scheme,
    quantity: Quantity,
    records: list[RunRecord],
    floor: float,
) -> ConvergenceTable:
    table = ConvergenceTable(scheme=scheme, quantity=quantity, records=records)
    points = table.points()
    if quantity in (Quantity.mass_drift, Quantity.step_drift):
        points = trim_plateau(points, floor)
    try:
        order, residual = fit_order(points, floor=floor)
    except InsufficientDataError:
        return table
    return table.model_copy(update={"fitted_order": order, "fit_residual": residual})


# ── task fan-out ─────────────────────────────────────────────


def _check_taus(taus: list[float]) -> None:
    if len(taus) < config.FIT["min_points"]:
        raise ValueError(f"Need at least {config.FIT['min_points']} step sizes, got {len(taus)}")
    if any(t <= 0 for t in taus):
        raise ValueError(f"Step sizes must be positive, got {taus}")
    if any(b >= a for a, b in zip(taus, taus[1:])):
        raise ValueError(f"Step sizes must be strictly decreasing, got {taus}")


def _run_tasks(
    tasks: list[tuple[Scheme, float]],
    run_one: Callable[[Scheme, float], RunRecord],
    workers: int,
    progress: bool,
    label: str,
) -> list[RunRecord]:
    bar = tqdm(total=len(tasks), desc=label, disable=not progress)

    def _tracked(task: tuple[Scheme, float]) -> RunRecord:
        rec = run_one(*task)
        bar.update(1)
        if progress:
            val = rec.error_norm_gamma if rec.error_norm_gamma is not None else rec.mass_drift
            tqdm.write(f"  ✓ {rec.scheme.value:<9} tau={rec.tau:.4e}  value={val:.4e}")
        return rec

    try:
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                records = list(pool.map(_tracked, tasks))
        else:
            records = [_tracked(t) for t in tasks]
    finally:
        bar.close()
    return records


def _group(
    schemes: list[Scheme],
    quantity: Quantity,
    records: list[RunRecord],
    floor: float,
) -> list[ConvergenceTable]:
    return [
        _fit_table(s, quantity, [r for r in records if r.scheme == s], floor)
        for s in schemes
    ]


def _difference(a: SpectralField, b: SpectralField) -> SpectralField:
    return spectral_field(a.grid, a.coeffs - b.coeffs)


# ── studies ──────────────────────────────────────────────────


def run_convergence(
    u0: SpectralField,
    schemes: list[Scheme],
    taus: list[float],
    gamma_norm: float,
    t_final: float,
    cfg_base: SchemeConfig,
    seed: int = 0,
    substep_factor: int = config.ORACLE["substep_factor"],
    workers: int = 1,
    progress: bool = False,
) -> list[ConvergenceTable]:
    """Global error ‖u(T) − u^{T/τ}‖_{H^γ} against one oracle reference."""
    _check_taus(taus)
    schemes = [Scheme.coerce(s) for s in schemes]
    substeps = max(1, math.ceil(substep_factor * t_final / min(taus)))
    reference = oracle_evolve(u0, t_final, substeps, cfg_base)

    def run_one(scheme: Scheme, tau: float) -> RunRecord:
        cfg = cfg_base.model_copy(update={"tau": tau, "scheme": scheme})
        final, rec = run_trajectory(u0, cfg, t_final, record_invariants=True, seed=seed)
        error = sobolev_norm(_difference(final, reference), gamma_norm)
        return rec.model_copy(update={"error_norm_gamma": error, "gamma": gamma_norm})

    tasks = [(s, t) for s in schemes for t in taus]
    records = _run_tasks(tasks, run_one, workers, progress, "converge")
    return _group(schemes, Quantity.error, records, config.FIT["error_floor"])


def run_mass_drift(
    u0: SpectralField,
    schemes: list[Scheme],
    taus: list[float],
    t_final: float,
    cfg_base: SchemeConfig,
    gamma: float = 0.0,
    seed: int = 0,
    workers: int = 1,
    progress: bool = False,
) -> list[ConvergenceTable]:
    """Max-over-trajectory |M(uⁿ) − M₀| per (scheme, τ), one table per scheme.

    `gamma` is the regularity of u0 and lands in each record's gamma column.
    """
    _check_taus(taus)
    schemes = [Scheme.coerce(s) for s in schemes]

    def run_one(scheme: Scheme, tau: float) -> RunRecord:
        cfg = cfg_base.model_copy(update={"tau": tau, "scheme": scheme})
        rec = run_trajectory(u0, cfg, t_final, record_invariants=True, seed=seed)[1]
        return rec.model_copy(update={"gamma": gamma})

    tasks = [(s, t) for s in schemes for t in taus]
    records = _run_tasks(tasks, run_one, workers, progress, "mass-drift")
    return _group(schemes, Quantity.mass_drift, records, config.FIT["drift_floor"])


def run_local_study(
    u0: SpectralField,
    schemes: list[Scheme],
    taus: list[float],
    cfg_base: SchemeConfig,
    quantity: Quantity = Quantity.local_error,
    gamma_norm: float = 0.0,
    seed: int = 0,
    substeps: int = config.ORACLE["local_substeps"],
    workers: int = 1,
    progress: bool = False,
) -> list[ConvergenceTable]:
    """One step from u0 for each τ.

    local_error      ‖step(u0) − oracle(u0, τ)‖_{H^γ}
    step_drift       |M(step(u0)) − M₀|
    nlri_correction  ‖nlri_step(u0) − lri_step(u0)‖_{H^γ}  (schemes ignored)
    """
    _check_taus(taus)
    quantity = Quantity(quantity)
    if quantity == Quantity.nlri_correction:
        schemes = [Scheme.nlri]
    schemes = [Scheme.coerce(s) for s in schemes]

    def run_one(scheme: Scheme, tau: float) -> RunRecord:
        t0 = time.perf_counter()
        cfg = cfg_base.model_copy(update={"tau": tau, "scheme": scheme})
        update: dict = {}
        if quantity == Quantity.local_error:
            exact = oracle_evolve(u0, tau, substeps, cfg)
            update["error_norm_gamma"] = sobolev_norm(_difference(step(u0, cfg), exact), gamma_norm)
        elif quantity == Quantity.step_drift:
            update["mass_drift"] = abs(mass(step(u0, cfg)) - cfg.m0)
        else:
            corrected = nlri_step(u0, cfg)[0]
            update["error_norm_gamma"] = sobolev_norm(_difference(corrected, lri_step(u0, cfg)), gamma_norm)
        return RunRecord(
            scheme=scheme,
            tau=tau,
            n=u0.grid.n,
            seed=seed,
            t_final=tau,
            gamma=gamma_norm,
            steps=1,
            wall_time=time.perf_counter() - t0,
            **update,
        )

    floor = config.FIT["drift_floor"] if quantity == Quantity.step_drift else config.FIT["error_floor"]
    tasks = [(s, t) for s in schemes for t in taus]
    records = _run_tasks(tasks, run_one, workers, progress, quantity.value)
    return _group(schemes, quantity, records, floor)
