class BenchError(Exception):
    """Root of every anticipated failure; the CLI turns these into exit codes."""


class GridMismatchError(BenchError, ValueError):
    def __init__(self, n_a: int, n_b: int):
        super().__init__(f"Incompatible discretizations: n={n_a} vs n={n_b}")
        self.n_a = n_a
        self.n_b = n_b


class DegenerateMassError(BenchError, ValueError):
    def __init__(self, m0: float):
        super().__init__(f"Mass correction needs M0 > 0, got M0={m0!r}")
        self.m0 = m0


class BlowUpError(BenchError, ArithmeticError):
    def __init__(self, step: int, scheme: str = "?", tau: float | None = None):
        where = f"scheme={scheme}" + (f" tau={tau:.6g}" if tau is not None else "")
        super().__init__(f"Non-finite field at step {step} ({where})")
        self.step = step
        self.scheme = scheme
        self.tau = tau


class InsufficientDataError(BenchError, ValueError):
    def __init__(self, usable: int, required: int):
        super().__init__(
            f"Need at least {required} points above the machine floor, got {usable}"
        )
        self.usable = usable
        self.required = required


class OutputError(BenchError, OSError):
    def __init__(self, path: str, cause: Exception):
        super().__init__(f"Cannot write {path}: {cause}")
        self.path = path
        self.cause = cause
