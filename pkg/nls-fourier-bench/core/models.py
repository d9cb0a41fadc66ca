from enum import Enum
from functools import lru_cache
from typing import Optional

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationInfo,
    field_validator,
    model_validator,
)

# ── Enums ────────────────────────────────────────────────────


class Scheme(str, Enum):
    lri = "lri"
    nlri = "nlri"
    lie = "lie"
    strang = "strang"
    exp_euler = "exp_euler"
    oracle = "oracle"

    @classmethod
    def coerce(cls, v: object) -> "Scheme":
        """Accept Scheme, 'LRI', ' nlri ', 'exp-euler', 'EXP_EULER'."""
        raw = v.value if hasattr(v, "value") else v
        s = str(raw).lower().strip().replace("-", "_")
        try:
            return cls(s)
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(f"Unknown scheme {raw!r} (expected one of: {valid})")


class Subcommand(str, Enum):
    gen_data = "gen-data"
    solve = "solve"
    converge = "converge"
    mass_drift = "mass-drift"
    local = "local"


class Quantity(str, Enum):
    error = "error"
    mass_drift = "mass_drift"
    local_error = "local_error"
    step_drift = "step_drift"
    nlri_correction = "nlri_correction"


# ── Grid ─────────────────────────────────────────────────────


@lru_cache(maxsize=None)
def _wavenumbers(n: int) -> np.ndarray:
    k = np.fft.fftfreq(n, d=1.0 / n).round().astype(np.int64)
    k.setflags(write=False)
    return k


@lru_cache(maxsize=None)
def _nodes(n: int) -> np.ndarray:
    x = 2.0 * np.pi * np.arange(n) / n
    x.setflags(write=False)
    return x


def _frozen_complex(v: object, size: int, what: str) -> np.ndarray:
    arr = np.array(v, dtype=np.complex128)
    if arr.shape != (size,):
        raise ValueError(f"{what} must have exactly {size} entries, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


class Grid(BaseModel):
    """Uniform collocation grid on (0, 2π).

    Wavenumbers are kept in the transform's native order
    (0, 1, …, n/2−1, −n/2, …, −1); address modes through index(k).
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=4)

    @field_validator("n")
    @classmethod
    def validate_even(cls, v: int) -> int:
        if v % 2 != 0:
            raise ValueError(f"Grid size must be even, got n={v}")
        return v

    @property
    def nodes(self) -> np.ndarray:
        return _nodes(self.n)

    @property
    def wavenumbers(self) -> np.ndarray:
        return _wavenumbers(self.n)

    def index(self, k: int) -> int:
        if not -self.n // 2 <= k < self.n // 2:
            raise IndexError(f"Wavenumber {k} outside [-{self.n // 2}, {self.n // 2 - 1}]")
        return k % self.n


# ── Fields ───────────────────────────────────────────────────


class SpectralField(BaseModel):
    """Fourier coefficients û_k = (1/n) Σ_j e^{−ik x_j} u(x_j), native order."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: Grid
    coeffs: np.ndarray

    @field_validator("coeffs", mode="before")
    @classmethod
    def coerce_coeffs(cls, v: object, info: ValidationInfo) -> np.ndarray:
        grid = info.data.get("grid")
        if grid is None:
            raise ValueError("coeffs need a valid grid")
        return _frozen_complex(v, grid.n, "coeffs")

    def mode(self, k: int) -> complex:
        return complex(self.coeffs[self.grid.index(k)])

    @property
    def is_finite(self) -> bool:
        return bool(np.isfinite(self.coeffs).all())


class PhysicalField(BaseModel):
    """Samples u(x_j) at the grid nodes."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: Grid
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def coerce_values(cls, v: object, info: ValidationInfo) -> np.ndarray:
        grid = info.data.get("grid")
        if grid is None:
            raise ValueError("values need a valid grid")
        return _frozen_complex(v, grid.n, "values")


class FieldFile(BaseModel):
    """On-disk field: coeffs in ascending wavenumber order −n/2 … n/2−1."""

    n: int
    coeffs: list[tuple[float, float]]

    @model_validator(mode="after")
    def check_length(self) -> "FieldFile":
        if len(self.coeffs) != self.n:
            raise ValueError(f"Field file lists {len(self.coeffs)} coeffs for n={self.n}")
        return self


# ── Scheme contracts ─────────────────────────────────────────


class SchemeConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    tau: float = Field(gt=0.0)
    lam: int = -1  # nonlinearity sign λ
    m0: float = Field(ge=0.0)  # M(u0), frozen for the run
    p0: complex = 0j  # P(u0), purely imaginary
    scheme: Scheme = Scheme.lri
    collocation: bool = False  # aliased n-point products instead of exact projection
    oracle_substeps: int = Field(default=1, ge=1)

    @field_validator("lam")
    @classmethod
    def validate_lam(cls, v: int) -> int:
        if v not in (-1, 1):
            raise ValueError(f"lambda must be -1 or +1, got {v}")
        return v

    @field_validator("p0")
    @classmethod
    def validate_p0(cls, v: complex) -> complex:
        if abs(v.real) > 1e-13 * (1.0 + abs(v.imag)):
            raise ValueError(f"P0 must be purely imaginary, got {v!r}")
        return v

    @field_validator("scheme", mode="before")
    @classmethod
    def coerce_scheme(cls, v: object) -> Scheme:
        return Scheme.coerce(v)


class StepDiagnostics(BaseModel):
    mass_after: float = Field(ge=0.0)
    f_norm_l2: float = Field(ge=0.0)
    h_value: float = 0.0


# ── Experiment contracts ─────────────────────────────────────


class RoughDataSpec(BaseModel):
    n: int = Field(ge=4)
    gamma: float = Field(ge=0.0)
    seed: int = Field(default=0, ge=0, lt=2**64)

    @field_validator("n")
    @classmethod
    def validate_power_of_two(cls, v: int) -> int:
        if v & (v - 1) != 0:
            raise ValueError(f"Rough data needs a power-of-two grid, got n={v}")
        return v


class RunRecord(BaseModel):
    scheme: Scheme
    tau: float
    n: int
    seed: int = 0
    t_final: float
    gamma: float = 0.0  # error-norm exponent; data regularity on mass-drift rows
    steps: int = 0
    error_norm_gamma: Optional[float] = None  # unset until compared
    mass_drift: float = Field(default=0.0, ge=0.0)
    momentum_drift: float = Field(default=0.0, ge=0.0)
    wall_time: float = 0.0

    @field_validator("scheme", mode="before")
    @classmethod
    def coerce_scheme(cls, v: object) -> Scheme:
        return Scheme.coerce(v)

    @field_validator("error_norm_gamma")
    @classmethod
    def validate_error(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and v < 0:
            raise ValueError(f"error norm must be non-negative, got {v}")
        return v

    def value(self, quantity: "Quantity") -> Optional[float]:
        """The measurement a table of this quantity fits against tau."""
        if quantity in (Quantity.mass_drift, Quantity.step_drift):
            return self.mass_drift
        return self.error_norm_gamma


class ConvergenceTable(BaseModel):
    scheme: Scheme
    quantity: Quantity = Quantity.error
    records: list[RunRecord]
    fitted_order: float = float("nan")
    fit_residual: float = float("nan")

    @field_validator("scheme", mode="before")
    @classmethod
    def coerce_scheme(cls, v: object) -> Scheme:
        return Scheme.coerce(v)

    @field_validator("records")
    @classmethod
    def sort_descending_tau(cls, v: list[RunRecord]) -> list[RunRecord]:
        return sorted(v, key=lambda r: -r.tau)

    def points(self) -> list[tuple[float, float]]:
        out = []
        for r in self.records:
            val = r.value(self.quantity)
            if val is not None:
                out.append((r.tau, val))
        return out


# ── CLI contract ─────────────────────────────────────────────


class CliConfig(BaseModel):
    subcommand: Subcommand
    n: int = Field(default=256, ge=4)
    tau: Optional[float] = Field(default=None, gt=0.0)
    taus: Optional[list[float]] = None
    t_final: float = Field(default=1.0, ge=0.0)
    gamma: float = Field(default=2.0, ge=0.0)
    norm_gamma: Optional[float] = Field(default=None, ge=0.0)
    lam: int = -1
    schemes: list[Scheme] = [Scheme.lri, Scheme.nlri]
    seed: int = Field(default=0, ge=0, lt=2**64)
    collocation: bool = False
    out: str
    plot: Optional[str] = None
    data: Optional[str] = None
    workers: int = Field(default=1, ge=1)
    compare: bool = False
    oracle_substeps: int = Field(default=1, ge=1)
    quantity: Quantity = Quantity.local_error

    @field_validator("n")
    @classmethod
    def validate_even(cls, v: int) -> int:
        if v % 2 != 0:
            raise ValueError(f"--n must be even, got {v}")
        return v

    @field_validator("lam")
    @classmethod
    def validate_lam(cls, v: int) -> int:
        if v not in (-1, 1):
            raise ValueError(f"--lambda must be -1 or 1, got {v}")
        return v

    @field_validator("schemes", mode="before")
    @classmethod
    def coerce_schemes(cls, v: object) -> list[Scheme]:
        if isinstance(v, str):
            v = [s for s in v.split(",") if s.strip()]
        return [Scheme.coerce(s) for s in v]

    @model_validator(mode="after")
    def check_subcommand_inputs(self) -> "CliConfig":
        if self.norm_gamma is None:
            self.norm_gamma = self.gamma
        if self.subcommand == Subcommand.solve and self.tau is None:
            raise ValueError("solve requires --tau")
        needs_taus = (Subcommand.converge, Subcommand.mass_drift, Subcommand.local)
        if self.subcommand in needs_taus:
            if not self.taus or len(self.taus) < 3:
                raise ValueError(f"{self.subcommand.value} requires --taus with >= 3 values")
            if any(b >= a for a, b in zip(self.taus, self.taus[1:])):
                raise ValueError("--taus must be strictly decreasing")
        return self
