from .errors import (
    BenchError,
    BlowUpError,
    DegenerateMassError,
    GridMismatchError,
    InsufficientDataError,
    OutputError,
)
from .models import (
    CliConfig,
    ConvergenceTable,
    FieldFile,
    Grid,
    PhysicalField,
    Quantity,
    RoughDataSpec,
    RunRecord,
    Scheme,
    SchemeConfig,
    SpectralField,
    StepDiagnostics,
    Subcommand,
)

__all__ = [
    "Scheme",
    "Subcommand",
    "Quantity",
    "Grid",
    "SpectralField",
    "PhysicalField",
    "FieldFile",
    "SchemeConfig",
    "StepDiagnostics",
    "RoughDataSpec",
    "RunRecord",
    "ConvergenceTable",
    "CliConfig",
    "BenchError",
    "GridMismatchError",
    "DegenerateMassError",
    "BlowUpError",
    "InsufficientDataError",
    "OutputError",
]
