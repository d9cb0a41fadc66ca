import sys
from pathlib import Path

import numpy as np
import pytest

# scripts and modules are run from the project dir
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from core.models import Grid  # noqa: E402
from core.spectral import from_function, spectral_field  # noqa: E402


@pytest.fixture
def grid16() -> Grid:
    return Grid(n=16)


@pytest.fixture
def smooth_u0():
    """e^{ix} + ½e^{2ix} on 32 points: M₀ = 1.25, P₀ = −1.5i."""
    return from_function(Grid(n=32), lambda x: np.exp(1j * x) + 0.5 * np.exp(2j * x))


@pytest.fixture
def constant_u0():
    def make(a: complex, n: int = 16):
        c = np.zeros(n, dtype=np.complex128)
        c[0] = a
        return spectral_field(Grid(n=n), c)

    return make
