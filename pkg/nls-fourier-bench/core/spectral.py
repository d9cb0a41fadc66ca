"""
Discrete Fourier representation of 2π-periodic complex fields.

Normalization follows û_k = (1/n) Σ_j e^{−ik x_j} u(x_j), so û_0 is the mean
Π₀ and Σ|û_k|² is the mass (1/2π)∫|u|² with no stray factors.  Coefficients
live in scipy's native order; every multiplier is built from
grid.wavenumbers, never from array positions.

All functions are pure and return new read-only fields.
"""

import numpy as np
from scipy import fft as sfft

from core.errors import GridMismatchError
from core.models import Grid, PhysicalField, SpectralField

# ── construction ─────────────────────────────────────────────


def spectral_field(grid: Grid, coeffs: np.ndarray) -> SpectralField:
    """Wrap a freshly computed coefficient array without re-validating it."""
    arr = np.asarray(coeffs, dtype=np.complex128)
    if arr.shape != (grid.n,):
        raise ValueError(f"coeffs must have exactly {grid.n} entries, got {arr.shape}")
    arr.setflags(write=False)
    return SpectralField.model_construct(grid=grid, coeffs=arr)


def physical_field(grid: Grid, values: np.ndarray) -> PhysicalField:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.shape != (grid.n,):
        raise ValueError(f"values must have exactly {grid.n} entries, got {arr.shape}")
    arr.setflags(write=False)
    return PhysicalField.model_construct(grid=grid, values=arr)


def zeros(grid: Grid) -> SpectralField:
    return spectral_field(grid, np.zeros(grid.n, dtype=np.complex128))


def from_function(grid: Grid, fn) -> SpectralField:
    """Sample fn at the nodes and transform; handy for closed-form data."""
    return to_spectral(physical_field(grid, fn(grid.nodes)))


def check_same_grid(a: SpectralField, b: SpectralField) -> None:
    if a.grid.n != b.grid.n:
        raise GridMismatchError(a.grid.n, b.grid.n)


# ── transforms ───────────────────────────────────────────────


def forward(values: np.ndarray) -> np.ndarray:
    return sfft.fft(values, norm="forward")


def inverse(coeffs: np.ndarray) -> np.ndarray:
    return sfft.ifft(coeffs, norm="forward")


def to_spectral(p: PhysicalField) -> SpectralField:
    return spectral_field(p.grid, forward(p.values))


def to_physical(s: SpectralField) -> PhysicalField:
    return physical_field(s.grid, inverse(s.coeffs))


# ── Fourier multipliers ──────────────────────────────────────


def k_squared(grid: Grid) -> np.ndarray:
    return grid.wavenumbers.astype(np.float64) ** 2


def flight_multiplier(grid: Grid, t: float) -> np.ndarray:
    """e^{it∂x²} acts on mode k as e^{−itk²}."""
    return np.exp(-1j * t * k_squared(grid))


def inv_dx_multiplier(grid: Grid) -> np.ndarray:
    k = grid.wavenumbers
    m = np.zeros(grid.n, dtype=np.complex128)
    nz = k != 0
    m[nz] = 1.0 / (1j * k[nz])
    return m


def inv_dx2_multiplier(grid: Grid) -> np.ndarray:
    k = grid.wavenumbers
    m = np.zeros(grid.n, dtype=np.float64)
    nz = k != 0
    m[nz] = -1.0 / k[nz].astype(np.float64) ** 2
    return m


def free_flight(s: SpectralField, t: float) -> SpectralField:
    if t == 0:
        return s
    return spectral_field(s.grid, s.coeffs * flight_multiplier(s.grid, t))


def inv_dx(s: SpectralField) -> SpectralField:
    return spectral_field(s.grid, s.coeffs * inv_dx_multiplier(s.grid))


def inv_dx2(s: SpectralField) -> SpectralField:
    return spectral_field(s.grid, s.coeffs * inv_dx2_multiplier(s.grid))


# ── functionals ──────────────────────────────────────────────


def zero_mode(s: SpectralField) -> complex:
    return complex(s.coeffs[0])


def sobolev_norm(s: SpectralField, gamma: float) -> float:
    """‖f‖_{H^γ} = (2π Σ_k (1+k²)^γ |f̂_k|²)^{1/2}."""
    if gamma < 0:
        raise ValueError(f"Sobolev exponent must be >= 0, got {gamma}")
    weight = (1.0 + k_squared(s.grid)) ** gamma
    return float(np.sqrt(2.0 * np.pi * np.sum(weight * np.abs(s.coeffs) ** 2)))


def l2_norm(s: SpectralField) -> float:
    return sobolev_norm(s, 0.0)


def mass(s: SpectralField) -> float:
    return float(np.sum(np.abs(s.coeffs) ** 2))


def momentum(s: SpectralField) -> complex:
    """P(u) = (1/2π)∫ u ∂x ū dx = −i Σ_k k |û_k|²; purely imaginary by construction."""
    k = s.grid.wavenumbers.astype(np.float64)
    return complex(0.0, -float(np.sum(k * np.abs(s.coeffs) ** 2)))


def inner(a: SpectralField, b: SpectralField) -> complex:
    """Π₀(a·b̄) = Σ_k â_k conj(b̂_k)."""
    check_same_grid(a, b)
    return complex(np.vdot(b.coeffs, a.coeffs))


# ── products ─────────────────────────────────────────────────

# Products of n-band fields are exact on the retained modes when formed on
# this many times n points: quadratics fit without folding and cubic
# overflow folds only onto modes that truncation discards.
GALERKIN_PAD = 2


def padded_grid(grid: Grid) -> Grid:
    return Grid(n=GALERKIN_PAD * grid.n)


def pad(s: SpectralField, grid: Grid) -> SpectralField:
    """Zero-extend s onto the finer grid, mode by mode."""
    if grid.n < s.grid.n:
        raise ValueError(f"Cannot pad n={s.grid.n} onto the coarser n={grid.n}")
    if grid.n == s.grid.n:
        return s
    return spectral_field(grid, _pad(s.coeffs, s.grid, grid.n))


def truncate(s: SpectralField, grid: Grid) -> SpectralField:
    """Galerkin projection of s onto the modes of the coarser grid."""
    if grid.n > s.grid.n:
        raise ValueError(f"Cannot truncate n={s.grid.n} to the finer n={grid.n}")
    if grid.n == s.grid.n:
        return s
    return spectral_field(grid, s.coeffs[grid.wavenumbers % s.grid.n])


def _pad(coeffs: np.ndarray, grid: Grid, m: int) -> np.ndarray:
    out = np.zeros(m, dtype=np.complex128)
    out[grid.wavenumbers % m] = coeffs
    return out


def cubic_coeffs(c: np.ndarray, grid: Grid, galerkin: bool = True) -> np.ndarray:
    """|u|²u from coefficients; exact projection unless galerkin is off."""
    if not galerkin:
        w = inverse(c)
        return forward(np.abs(w) ** 2 * w)
    m = GALERKIN_PAD * grid.n
    w = inverse(_pad(c, grid, m))
    return forward(np.abs(w) ** 2 * w)[grid.wavenumbers % m]


def pointwise_product(
    a: SpectralField,
    b: SpectralField,
    conjugate_a: bool = False,
) -> SpectralField:
    """Collocation product on the grid a and b live on."""
    check_same_grid(a, b)
    va = inverse(a.coeffs)
    if conjugate_a:
        va = np.conj(va)
    return spectral_field(a.grid, forward(va * inverse(b.coeffs)))


def cubic(u: SpectralField, galerkin: bool = False) -> SpectralField:
    """|u|²u; collocated on u's own grid, or projected exactly when galerkin is set."""
    return spectral_field(u.grid, cubic_coeffs(u.coeffs, u.grid, galerkin))
