import numpy as np
import pytest
from pydantic import ValidationError

from core.models import Grid, RoughDataSpec
from core.spectral import sobolev_norm, to_physical, zero_mode
from pipeline.rough_data import gen_rough_data, smoothing_multiplier


def test_same_seed_same_data():
    spec = RoughDataSpec(n=64, gamma=1.5, seed=7)
    np.testing.assert_array_equal(gen_rough_data(spec).coeffs, gen_rough_data(spec).coeffs)


def test_seeds_differ():
    a = gen_rough_data(RoughDataSpec(n=64, gamma=1.5, seed=1))
    b = gen_rough_data(RoughDataSpec(n=64, gamma=1.5, seed=2))
    assert not np.allclose(a.coeffs, b.coeffs)


def test_zero_mean_unit_sup_norm():
    u0 = gen_rough_data(RoughDataSpec(n=128, gamma=2.0, seed=3))
    assert zero_mode(u0) == 0
    assert np.max(np.abs(to_physical(u0).values)) == pytest.approx(1.0, abs=1e-12)


def test_smoothing_multiplier():
    m = smoothing_multiplier(Grid(n=8), 2.0)
    np.testing.assert_allclose(m, [0.0, 1.0, 0.25, 1 / 9, 1 / 16, 1 / 9, 0.25, 1.0])


def test_rougher_data_has_larger_high_norms():
    smooth = gen_rough_data(RoughDataSpec(n=256, gamma=3.0, seed=5))
    rough = gen_rough_data(RoughDataSpec(n=256, gamma=1.0, seed=5))
    ratio_smooth = sobolev_norm(smooth, 2.0) / sobolev_norm(smooth, 0.0)
    ratio_rough = sobolev_norm(rough, 2.0) / sobolev_norm(rough, 0.0)
    assert ratio_rough > ratio_smooth


def test_power_of_two_required():
    with pytest.raises(ValidationError, match="power-of-two"):
        RoughDataSpec(n=24, gamma=1.0)
