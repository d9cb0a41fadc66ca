"""
Reference solution: classical RK4 on the twisted equation

    v' = iλ e^{−is∂x²} P_n[ |e^{is∂x²}v|² e^{is∂x²}v ],   u(t) = e^{it∂x²}v(t),

the Galerkin truncation onto the grid's modes. The linear part is exact, so
the step size only has to resolve the nonlinear phases, not k².
P_n is evaluated exactly on the padded grid, the same projection the schemes
apply to Ψ; cfg.collocation replaces it with aliased n-point collocation.
"""

import numpy as np

from core.models import SchemeConfig, SpectralField
from core.spectral import cubic_coeffs, k_squared, spectral_field


def _twisted_rhs(v, phase, grid, lam, galerkin):
    # phase = e^{isk²}; e^{is∂x²} acts as its conjugate
    w = np.conj(phase) * v
    return 1j * lam * phase * cubic_coeffs(w, grid, galerkin)


def oracle_evolve(
    u: SpectralField,
    t: float,
    substeps: int,
    cfg: SchemeConfig,
) -> SpectralField:
    if substeps <= 0:
        raise ValueError(f"Oracle needs at least one substep, got {substeps}")
    if t < 0:
        raise ValueError(f"Oracle integrates forward in time, got t={t}")
    if t == 0:
        return u

    grid = u.grid
    lam, galerkin = cfg.lam, not cfg.collocation
    k2 = k_squared(grid)
    h = t / substeps
    half_phase = np.exp(0.5j * h * k2)
    v = u.coeffs.copy()

    for i in range(substeps):
        # fresh phase each substep; the half-step factors never accumulate
        p0 = np.exp(1j * (i * h) * k2)
        p_mid = p0 * half_phase
        p1 = p_mid * half_phase

        k1 = _twisted_rhs(v, p0, grid, lam, galerkin)
        k2_ = _twisted_rhs(v + 0.5 * h * k1, p_mid, grid, lam, galerkin)
        k3 = _twisted_rhs(v + 0.5 * h * k2_, p_mid, grid, lam, galerkin)
        k4 = _twisted_rhs(v + h * k3, p1, grid, lam, galerkin)
        v = v + (h / 6.0) * (k1 + 2.0 * k2_ + 2.0 * k3 + k4)

    return spectral_field(grid, np.exp(-1j * t * k2) * v)
