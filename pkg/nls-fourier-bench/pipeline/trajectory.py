"""
Trajectory runner — iterates one stepper from u0 to t_final and returns the
final field with its RunRecord.
"""

import time

from core.errors import BlowUpError
from core.models import RunRecord, SchemeConfig, SpectralField
from core.spectral import mass, momentum
from pipeline.schemes import step


def adjusted_steps(t_final: float, tau: float) -> tuple[int, float]:
    """Round T/τ to a whole number of steps and return (steps, T/steps)."""
    if t_final == 0:
        return 0, tau
    steps = max(1, round(t_final / tau))
    return steps, t_final / steps


def run_trajectory(
    u0: SpectralField,
    cfg: SchemeConfig,
    t_final: float,
    record_invariants: bool = True,
    seed: int = 0,
) -> tuple[SpectralField, RunRecord]:
    if t_final < 0:
        raise ValueError(f"t_final must be >= 0, got {t_final}")

    t0 = time.perf_counter()
    steps, tau = adjusted_steps(t_final, cfg.tau)
    if tau != cfg.tau:
        cfg = cfg.model_copy(update={"tau": tau})

    u = u0
    mass_drift = 0.0
    momentum_drift = 0.0
    for n in range(steps):
        u = step(u, cfg)
        if not u.is_finite:
            raise BlowUpError(n + 1, scheme=cfg.scheme.value, tau=tau)
        if record_invariants:
            mass_drift = max(mass_drift, abs(mass(u) - cfg.m0))
            momentum_drift = max(momentum_drift, abs(momentum(u) - cfg.p0))

    record = RunRecord(
        scheme=cfg.scheme,
        tau=tau,
        n=u0.grid.n,
        seed=seed,
        t_final=t_final,
        steps=steps,
        mass_drift=mass_drift,
        momentum_drift=momentum_drift,
        wall_time=time.perf_counter() - t0,
    )
    return u, record
