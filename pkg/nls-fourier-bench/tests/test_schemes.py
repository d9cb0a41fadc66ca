import numpy as np
import pytest
from pydantic import ValidationError

from core.errors import DegenerateMassError
from core.models import Grid, Quantity, RoughDataSpec, Scheme, SchemeConfig
from core.spectral import free_flight, mass, zero_mode, zeros
from pipeline.oracle import oracle_evolve
from pipeline.rough_data import gen_rough_data
from pipeline.schemes import (
    combined_propagator,
    exp_euler_step,
    f_map,
    h_scalar,
    lie_step,
    lri_step,
    nlri_step,
    scheme_config_for,
    step,
    strang_step,
    twisted_phi_step,
)
from pipeline.studies import fit_order, run_local_study

A = 0.7 + 0.2j
TAU = 0.1
THETA = TAU * abs(A) ** 2


class TestConstantData:
    """Every ∂x⁻¹ and ∂x⁻² term vanishes on constants, so each map has a closed form."""

    def test_lri(self, constant_u0):
        u = constant_u0(A)
        out = lri_step(u, scheme_config_for(u, TAU))
        assert zero_mode(out) == pytest.approx(A * (np.exp(-2j * THETA) + 1j * THETA), abs=1e-14)
        np.testing.assert_allclose(out.coeffs[1:], 0.0, atol=1e-14)

    def test_lri_is_first_order_consistent(self, constant_u0):
        u = constant_u0(A)
        out = lri_step(u, scheme_config_for(u, TAU))
        assert abs(zero_mode(out) - A * np.exp(-1j * THETA)) < 2 * THETA**2

    def test_lri_focusing_sign(self, constant_u0):
        u = constant_u0(A)
        out = lri_step(u, scheme_config_for(u, TAU, lam=1))
        assert zero_mode(out) == pytest.approx(A * (np.exp(2j * THETA) - 1j * THETA), abs=1e-14)

    def test_f_map(self, constant_u0):
        u = constant_u0(A)
        f = f_map(u, scheme_config_for(u, TAU))
        assert zero_mode(f) == pytest.approx(A * (np.exp(-2j * THETA) + 1j * THETA - 1), abs=1e-14)

    def test_h_scalar(self, constant_u0):
        u = constant_u0(A)
        F = A * (np.exp(-2j * THETA) + 1j * THETA - 1)
        expected = -((F * np.conj(A)).real + 0.5 * abs(F) ** 2) / abs(A) ** 2
        assert h_scalar(u, scheme_config_for(u, TAU)) == pytest.approx(expected, abs=1e-14)

    @pytest.mark.parametrize("stepper", [lie_step, strang_step])
    def test_splittings_are_exact(self, constant_u0, stepper):
        u = constant_u0(A)
        out = stepper(u, scheme_config_for(u, TAU))
        assert zero_mode(out) == pytest.approx(A * np.exp(-1j * THETA), abs=1e-14)

    def test_exp_euler(self, constant_u0):
        u = constant_u0(A)
        out = exp_euler_step(u, scheme_config_for(u, TAU))
        assert zero_mode(out) == pytest.approx(A * (1 - 1j * THETA), abs=1e-14)

    def test_nlri_repairs_lri_mass(self, constant_u0):
        u = constant_u0(A)
        cfg = scheme_config_for(u, TAU)
        lri_drift = abs(mass(lri_step(u, cfg)) - cfg.m0)
        nlri_drift = abs(mass(nlri_step(u, cfg)[0]) - cfg.m0)
        assert lri_drift > 1e-3
        assert nlri_drift < 1e-3 * lri_drift


class TestLri:
    def test_twisted_form_matches_lri(self, smooth_u0):
        cfg = scheme_config_for(smooth_u0, 0.05)
        u = v = smooth_u0
        for n in range(20):
            v = twisted_phi_step(v, n, cfg)
            u = lri_step(u, cfg)
        np.testing.assert_allclose(free_flight(v, 20 * cfg.tau).coeffs, u.coeffs, atol=1e-11)

    def test_combined_propagator_is_unitary(self, smooth_u0):
        cfg = scheme_config_for(smooth_u0, 0.3)
        assert cfg.p0 == pytest.approx(-1.5j)
        np.testing.assert_allclose(np.abs(combined_propagator(smooth_u0.grid, cfg)), 1.0, atol=1e-14)

    def test_local_error_is_second_order(self, smooth_u0):
        taus = [0.05, 0.025, 0.0125, 0.00625]
        cfg = scheme_config_for(smooth_u0, taus[0])
        [table] = run_local_study(
            smooth_u0, [Scheme.lri], taus, cfg, quantity=Quantity.local_error, gamma_norm=2.0
        )
        assert table.fitted_order == pytest.approx(2.0, abs=0.2)

    def test_edge_modes_are_second_order(self):
        u0 = gen_rough_data(RoughDataSpec(n=16, gamma=2.0, seed=3))
        edge = [u0.grid.index(k) for k in (-8, -7, 6, 7)]
        points = []
        for tau in [2.0**-k for k in range(8, 12)]:
            cfg = scheme_config_for(u0, tau)
            diff = lri_step(u0, cfg).coeffs - oracle_evolve(u0, tau, 1000, cfg).coeffs
            points.append((tau, float(np.max(np.abs(diff[edge])))))
        order, _ = fit_order(points, floor=1e-13)
        assert order == pytest.approx(2.0, abs=0.3)

    def test_collocation_switch_aliases_edge_modes(self):
        u0 = gen_rough_data(RoughDataSpec(n=16, gamma=2.0, seed=3))
        exact = lri_step(u0, scheme_config_for(u0, 0.1))
        aliased = lri_step(u0, scheme_config_for(u0, 0.1, collocation=True))
        assert exact.grid.n == aliased.grid.n == 16
        assert np.max(np.abs(exact.coeffs - aliased.coeffs)) > 1e-8
        np.testing.assert_allclose(exact.coeffs, aliased.coeffs, atol=1e-1)


class TestNlri:
    def test_step_drift_is_high_order(self, smooth_u0):
        cfg = scheme_config_for(smooth_u0, 0.2)
        [table] = run_local_study(
            smooth_u0, [Scheme.nlri], [0.2, 0.1, 0.05, 0.025], cfg, quantity=Quantity.step_drift
        )
        assert table.fitted_order > 4.5

    def test_diagnostics(self, smooth_u0):
        cfg = scheme_config_for(smooth_u0, 0.05)
        nxt, diag = nlri_step(smooth_u0, cfg)
        assert diag.mass_after == pytest.approx(mass(nxt))
        assert diag.f_norm_l2 > 0
        assert diag.h_value == pytest.approx(h_scalar(smooth_u0, cfg))

    def test_zero_mass_rejected(self):
        u = zeros(Grid(n=16))
        cfg = scheme_config_for(u, 0.1, Scheme.nlri)
        with pytest.raises(DegenerateMassError, match="M0 > 0"):
            h_scalar(u, cfg)
        with pytest.raises(DegenerateMassError):
            step(u, cfg)


class TestRegistry:
    @pytest.mark.parametrize(
        "scheme, stepper",
        [(Scheme.lri, lri_step), (Scheme.lie, lie_step), (Scheme.strang, strang_step)],
    )
    def test_dispatch(self, smooth_u0, scheme, stepper):
        cfg = scheme_config_for(smooth_u0, 0.05, scheme)
        np.testing.assert_array_equal(step(smooth_u0, cfg).coeffs, stepper(smooth_u0, cfg).coeffs)

    def test_nlri_dispatch_returns_field(self, smooth_u0):
        cfg = scheme_config_for(smooth_u0, 0.05, "NLRI")
        np.testing.assert_array_equal(step(smooth_u0, cfg).coeffs, nlri_step(smooth_u0, cfg)[0].coeffs)

    def test_scheme_names_are_coerced(self):
        assert Scheme.coerce("EXP-EULER") is Scheme.exp_euler
        with pytest.raises(ValueError, match="Unknown scheme"):
            Scheme.coerce("rk45")


class TestSchemeConfig:
    def test_lambda_must_be_a_sign(self):
        with pytest.raises(ValidationError, match="lambda"):
            SchemeConfig(tau=0.1, lam=0, m0=1.0)

    def test_tau_must_be_positive(self):
        with pytest.raises(ValidationError):
            SchemeConfig(tau=0.0, m0=1.0)

    def test_momentum_must_be_imaginary(self):
        with pytest.raises(ValidationError, match="purely imaginary"):
            SchemeConfig(tau=0.1, m0=1.0, p0=0.5 + 1j)

    def test_constants_come_from_initial_data(self, smooth_u0):
        cfg = scheme_config_for(smooth_u0, 0.1, Scheme.strang)
        assert cfg.m0 == pytest.approx(1.25)
        assert cfg.scheme is Scheme.strang
