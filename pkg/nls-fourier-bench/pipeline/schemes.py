"""
Time-stepping maps for i u_t + u_xx + λ|u|²u = 0 on the torus.

  lri_step          Ψ, the first-order Fourier integrator
  twisted_phi_step  Φⁿ, the same map written for v = e^{−it∂x²}u
  nlri_step         Ψ + G₁ + G₂, mass corrected to O(τ⁶) per step
  lie / strang / exp_euler   classical baselines
  oracle            twisted RK4 reference (pipeline.oracle)

Ψ is derived for λ = −1.  For general λ every term of nonlinear origin is
scaled by s = −λ; λ = −1 gives s = 1 and the formula verbatim.

Ψ and Φⁿ are formed on a 2n-point zero-padded grid and projected back onto
the n retained modes only at the end; exp-Euler and the oracle use the same
exact projection of |u|²u.  cfg.collocation switches all of them to plain
n-point collocation, aliasing included.
"""

import numpy as np

import config
from core.errors import DegenerateMassError
from core.models import Grid, Scheme, SchemeConfig, SpectralField, StepDiagnostics
from core.spectral import (
    check_same_grid,
    cubic,
    free_flight,
    inner,
    inv_dx,
    inv_dx2,
    l2_norm,
    mass,
    momentum,
    pad,
    padded_grid,
    physical_field,
    pointwise_product,
    spectral_field,
    to_physical,
    to_spectral,
    truncate,
    zero_mode,
)
from pipeline.oracle import oracle_evolve


def scheme_config_for(
    u0: SpectralField,
    tau: float,
    scheme: Scheme | str = Scheme.lri,
    lam: int = -1,
    collocation: bool = False,
    oracle_substeps: int = config.ORACLE["substeps_per_step"],
) -> SchemeConfig:
    """M₀ and P₀ are taken from u0 once and frozen for the whole run."""
    return SchemeConfig(
        tau=tau,
        lam=lam,
        m0=mass(u0),
        p0=momentum(u0),
        scheme=scheme,
        collocation=collocation,
        oracle_substeps=oracle_substeps,
    )


def _sign(cfg: SchemeConfig) -> float:
    return float(-cfg.lam)


# ── Ψ and its pieces ─────────────────────────────────────────


def invariant_phase(grid, cfg: SchemeConfig) -> np.ndarray:
    """e^{iτ(−2sM₀ − 2sP₀∂x⁻¹)}; unit modulus because P₀ = iβ makes P₀/(ik) = β/k real."""
    s = _sign(cfg)
    k = grid.wavenumbers.astype(np.float64)
    beta = cfg.p0.imag
    exponent = np.full(grid.n, -2.0 * s * cfg.m0)
    nz = k != 0
    exponent[nz] -= 2.0 * s * beta / k[nz]
    return np.exp(1j * cfg.tau * exponent)


def combined_propagator(grid, cfg: SchemeConfig) -> np.ndarray:
    """e^{iτ(−2sM₀ − 2sP₀∂x⁻¹ + ∂x²)} as one multiplier per mode."""
    return invariant_phase(grid, cfg) * np.exp(-1j * cfg.tau * grid.wavenumbers.astype(np.float64) ** 2)


def _mode_zero(grid, value: complex) -> SpectralField:
    c = np.zeros(grid.n, dtype=np.complex128)
    c[0] = value
    return spectral_field(grid, c)


def _add(*fields: SpectralField) -> SpectralField:
    total = fields[0].coeffs.copy()
    for f in fields[1:]:
        check_same_grid(fields[0], f)
        total += f.coeffs
    return spectral_field(fields[0].grid, total)


def _scale(f: SpectralField, c: complex) -> SpectralField:
    return spectral_field(f.grid, c * f.coeffs)


def _drift_term(w: SpectralField) -> SpectralField:
    """∂x⁻¹[w · ∂x⁻¹(|w|²)]."""
    density = pointwise_product(w, w, conjugate_a=True)
    return inv_dx(pointwise_product(w, inv_dx(density)))


def _working_grid(grid: Grid, cfg: SchemeConfig) -> Grid:
    return grid if cfg.collocation else padded_grid(grid)


def _psi(u: SpectralField, cfg: SchemeConfig) -> SpectralField:
    grid, tau = u.grid, cfg.tau
    s = _sign(cfg)

    forward_u = free_flight(u, tau)  # e^{iτ∂x²}u
    u_cubed = cubic(u)

    linear = spectral_field(grid, combined_propagator(grid, cfg) * u.coeffs)
    zero_terms = _mode_zero(
        grid,
        s * (-1j * tau * zero_mode(u_cubed) + 2j * tau * cfg.m0 * zero_mode(u)),
    )

    # (e^{−iτ∂x²}ū)·e^{iτ∂x²}(u²), with e^{−iτ∂x²}ū = conj(e^{iτ∂x²}u)
    squared_flight = free_flight(pointwise_product(u, u), tau)
    resonant = pointwise_product(forward_u, squared_flight, conjugate_a=True)

    return _add(
        linear,
        zero_terms,
        _scale(inv_dx2(resonant), -0.5 * s),
        _scale(free_flight(inv_dx2(u_cubed), tau), 0.5 * s),
        _scale(_drift_term(forward_u), s),
        _scale(free_flight(_drift_term(u), tau), -s),
    )


def lri_step(u: SpectralField, cfg: SchemeConfig) -> SpectralField:
    """Ψ(u), formed on the padded grid and projected back onto u's modes."""
    return truncate(_psi(pad(u, _working_grid(u.grid, cfg)), cfg), u.grid)


def _phi(v: SpectralField, n: int, cfg: SchemeConfig) -> SpectralField:
    grid, tau = v.grid, cfg.tau
    s = _sign(cfg)
    t_n = n * tau
    t_next = (n + 1) * tau

    now = free_flight(v, t_n)  # e^{it_n∂x²}f
    later = free_flight(v, t_next)  # e^{it_{n+1}∂x²}f
    now_cubed = cubic(now)

    linear = spectral_field(grid, invariant_phase(grid, cfg) * v.coeffs)
    zero_terms = _mode_zero(
        grid,
        s * (2j * tau * cfg.m0 * zero_mode(v) - 1j * tau * zero_mode(now_cubed)),
    )

    # e^{−it_{n+1}∂x²}f̄ = conj(e^{it_{n+1}∂x²}f)
    squared_flight = free_flight(pointwise_product(now, now), tau)
    resonant = pointwise_product(later, squared_flight, conjugate_a=True)

    return _add(
        linear,
        zero_terms,
        _scale(free_flight(_drift_term(later), -t_next), s),
        _scale(free_flight(_drift_term(now), -t_n), -s),
        _scale(free_flight(inv_dx2(resonant), -t_next), -0.5 * s),
        _scale(free_flight(inv_dx2(now_cubed), -t_n), 0.5 * s),
    )


def twisted_phi_step(v: SpectralField, n: int, cfg: SchemeConfig) -> SpectralField:
    """vⁿ⁺¹ = Φⁿ(vⁿ) with t_n = nτ; uⁿ = e^{it_n∂x²}vⁿ recovers Ψ."""
    return truncate(_phi(pad(v, _working_grid(v.grid, cfg)), n, cfg), v.grid)


# ── mass correction ──────────────────────────────────────────


def f_map(u: SpectralField, cfg: SchemeConfig) -> SpectralField:
    """F(U) = Ψ(U) − e^{iτ∂x²}U."""
    return spectral_field(u.grid, lri_step(u, cfg).coeffs - free_flight(u, cfg.tau).coeffs)


def _correction_parts(u: SpectralField, cfg: SchemeConfig):
    if cfg.m0 <= 0:
        raise DegenerateMassError(cfg.m0)
    flight = free_flight(u, cfg.tau)
    f = spectral_field(u.grid, lri_step(u, cfg).coeffs - flight.coeffs)
    pairing = inner(f, flight).real  # Re Π₀(F·e^{−iτ∂x²}Ū)
    h = -(pairing + 0.5 * mass(f)) / cfg.m0
    return flight, f, pairing, h


def h_scalar(u: SpectralField, cfg: SchemeConfig) -> float:
    return _correction_parts(u, cfg)[3]


def nlri_step(u: SpectralField, cfg: SchemeConfig) -> tuple[SpectralField, StepDiagnostics]:
    flight, f, pairing, h = _correction_parts(u, cfg)
    # G₁ + G₂ = (H − ½H² − M₀⁻¹·H·Re Π₀(F·e^{−iτ∂x²}Ū))·e^{iτ∂x²}U
    c = h - 0.5 * h * h - h * pairing / cfg.m0
    nxt = spectral_field(u.grid, (1.0 + c) * flight.coeffs + f.coeffs)
    diag = StepDiagnostics(
        mass_after=mass(nxt),
        f_norm_l2=l2_norm(f),
        h_value=h,
    )
    return nxt, diag


# ── baselines ────────────────────────────────────────────────


def _phase_flow(u: SpectralField, cfg: SchemeConfig) -> SpectralField:
    """Exact flow of i w_t + λ|w|²w = 0: w ↦ w·e^{iλτ|w|²}, pointwise."""
    w = to_physical(u).values
    return to_spectral(physical_field(u.grid, w * np.exp(1j * cfg.lam * cfg.tau * np.abs(w) ** 2)))


def lie_step(u: SpectralField, cfg: SchemeConfig) -> SpectralField:
    return free_flight(_phase_flow(u, cfg), cfg.tau)


def strang_step(u: SpectralField, cfg: SchemeConfig) -> SpectralField:
    half = 0.5 * cfg.tau
    return free_flight(_phase_flow(free_flight(u, half), cfg), half)


def exp_euler_step(u: SpectralField, cfg: SchemeConfig) -> SpectralField:
    nonlinear = cubic(u, galerkin=not cfg.collocation).coeffs
    return free_flight(
        spectral_field(u.grid, u.coeffs + 1j * cfg.lam * cfg.tau * nonlinear), cfg.tau
    )


def oracle_step(u: SpectralField, cfg: SchemeConfig) -> SpectralField:
    return oracle_evolve(u, cfg.tau, cfg.oracle_substeps, cfg)


STEPPERS = {
    Scheme.lri: lri_step,
    Scheme.nlri: lambda u, cfg: nlri_step(u, cfg)[0],
    Scheme.lie: lie_step,
    Scheme.strang: strang_step,
    Scheme.exp_euler: exp_euler_step,
    Scheme.oracle: oracle_step,
}


def step(u: SpectralField, cfg: SchemeConfig) -> SpectralField:
    return STEPPERS[cfg.scheme](u, cfg)
