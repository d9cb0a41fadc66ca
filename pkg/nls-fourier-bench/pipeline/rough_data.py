"""
Random initial data of prescribed Sobolev regularity.

    u0 = |∂x|^{−γ} U / ‖|∂x|^{−γ} U‖_{L∞},   U = rand(n) + i·rand(n)

|∂x|^{−γ} is the multiplier |l|^{−γ} on l ≠ 0 and 0 on l = 0, so u0 has zero
mean, unit sup norm and lies in H^γ. The generator is numpy's PCG64 (via
default_rng), uniform [0, 1) from 53-bit mantissas; real parts are drawn
before imaginary parts, so a seed fixes the data on every platform.
"""

import numpy as np

from core.models import Grid, RoughDataSpec, SpectralField
from core.spectral import forward, inverse, spectral_field


def smoothing_multiplier(grid: Grid, gamma: float) -> np.ndarray:
    k = np.abs(grid.wavenumbers).astype(np.float64)
    m = np.zeros(grid.n, dtype=np.float64)
    nz = k != 0
    m[nz] = k[nz] ** (-gamma)
    return m


def gen_rough_data(spec: RoughDataSpec) -> SpectralField:
    grid = Grid(n=spec.n)
    rng = np.random.default_rng(spec.seed)
    samples = rng.random(2 * spec.n)
    noise = samples[: spec.n] + 1j * samples[spec.n :]

    coeffs = smoothing_multiplier(grid, spec.gamma) * forward(noise)
    peak = np.max(np.abs(inverse(coeffs)))
    return spectral_field(grid, coeffs / peak)

