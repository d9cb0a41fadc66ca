"""
bench.py — command-line entry point.

Usage:
    python bench.py gen-data --n 256 --gamma 2 --seed 7 --out u0.json
    python bench.py solve --data u0.json --scheme nlri --tau 1e-3 --out u1.json
    python bench.py converge --schemes lri,nlri --taus 2^-6:2^-12:half --seed 1 --out c.csv --plot c.svg
    python bench.py mass-drift --schemes lri,nlri --taus 1e-2:1e-3:half --out m.csv
    python bench.py local --quantity step_drift --taus 2^-4:2^-8:half --out l.csv

Exit codes: 0 ok, 1 numerical blow-up, 2 usage error, 3 I/O error.
"""

import argparse
import math
import sys

from pydantic import ValidationError

import config
from core.errors import BlowUpError, InsufficientDataError
from core.models import (
    CliConfig,
    ConvergenceTable,
    RoughDataSpec,
    SpectralField,
    Subcommand,
)
from core.spectral import mass, sobolev_norm, spectral_field
from pipeline.export import emit_csv, emit_svg_plot, load_field, save_field
from pipeline.oracle import oracle_evolve
from pipeline.rough_data import gen_rough_data
from pipeline.schemes import scheme_config_for
from pipeline.studies import run_convergence, run_local_study, run_mass_drift
from pipeline.trajectory import run_trajectory

# relative slack when comparing halved step sizes against the range stop
RANGE_TOL = 1e-12

# ── argument types ───────────────────────────────────────────


def parse_number(text: str) -> float:
    """'1e-3', '0.5' or power shorthand '2^-6'."""
    s = text.strip()
    try:
        if "^" in s:
            base, exp = s.split("^", 1)
            return float(base) ** float(exp)
        return float(s)
    except (ValueError, OverflowError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def positive_number(text: str) -> float:
    v = parse_number(text)
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return v


def parse_taus(text: str) -> list[float]:
    """'start:stop:half' halves from start down to stop; 'a,b,c' is taken as given."""
    if "," in text and ":" not in text:
        return [positive_number(t) for t in text.split(",") if t.strip()]

    parts = text.split(":")
    if len(parts) != 3 or parts[2].strip().lower() != "half":
        raise argparse.ArgumentTypeError(
            f"malformed range {text!r} (expected start:stop:half, e.g. 2^-6:2^-12:half)"
        )
    start, stop = positive_number(parts[0]), positive_number(parts[1])
    if stop > start:
        raise argparse.ArgumentTypeError(f"range {text!r} must run downwards (start >= stop)")

    taus = [start]
    while taus[-1] / 2 >= stop * (1 - RANGE_TOL):
        taus.append(taus[-1] / 2)
    return taus


# ── parser ───────────────────────────────────────────────────


_FLAG_NAMES = {"lam": "lambda"}


def _scheme_help() -> str:
    return "; ".join(f"{k} = {v}" for k, v in config.SCHEME_LABELS.items())


def build_parser() -> argparse.ArgumentParser:
    d = config.DEFAULTS

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=d["n"], help="Grid size (even; power of two for rough data)")
    common.add_argument("--gamma", type=float, default=d["gamma"], help="Regularity of the rough data")
    common.add_argument("--seed", type=int, default=d["seed"], help="Rough-data seed")
    common.add_argument("--out", type=str, required=True, help="Output path")
    common.add_argument("--data", type=str, default=None, help="Initial data JSON instead of rough data")

    evolve = argparse.ArgumentParser(add_help=False)
    evolve.add_argument("--t-final", type=float, default=d["t_final"], help="Final time T")
    evolve.add_argument("--lambda", dest="lam", type=int, default=d["lam"], help="Nonlinearity sign (-1 or 1)")
    evolve.add_argument("--norm-gamma", type=float, default=None, help="Error norm exponent (defaults to --gamma)")
    evolve.add_argument(
        "--collocation",
        action="store_true",
        help="Aliased n-point products instead of the exact 2n-padded projection",
    )

    study = argparse.ArgumentParser(add_help=False)
    study.add_argument("--taus", type=parse_taus, required=True, help="start:stop:half or a,b,c")
    study.add_argument("--schemes", type=str, default=d["schemes"], help=_scheme_help())
    study.add_argument("--plot", type=str, default=None, help="Optional SVG path")
    study.add_argument("--workers", type=int, default=d["workers"], help="Parallel (scheme, tau) tasks")

    parser = argparse.ArgumentParser(
        prog="bench.py",
        description="Fourier integrators for the cubic NLS on the torus",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sub.add_parser("gen-data", parents=[common], help="Write seeded rough initial data")

    solve = sub.add_parser("solve", parents=[common, evolve], help="Evolve one trajectory")
    solve.add_argument("--tau", type=positive_number, required=True, help="Time step")
    solve.add_argument("--scheme", type=str, default=d["scheme"], help=_scheme_help())
    solve.add_argument("--compare", action="store_true", help="Report the error against the oracle")
    solve.add_argument(
        "--oracle-substeps",
        type=int,
        default=config.ORACLE["substeps_per_step"],
        help="RK4 substeps per step when --scheme oracle",
    )

    sub.add_parser("converge", parents=[common, evolve, study], help="Global error order study")
    sub.add_parser("mass-drift", parents=[common, evolve, study], help="Mass drift order study")

    local = sub.add_parser("local", parents=[common, evolve, study], help="Single-step order study")
    local.add_argument(
        "--quantity",
        type=str,
        default="local_error",
        choices=["local_error", "step_drift", "nlri_correction"],
    )
    return parser


def parse_args(argv: list[str] | None = None) -> CliConfig:
    parser = build_parser()
    args = vars(parser.parse_args(argv))

    if "scheme" in args:
        args["schemes"] = args.pop("scheme")
    fields = {k: v for k, v in args.items() if v is not None}

    try:
        return CliConfig(**fields)
    except ValidationError as e:
        err = e.errors()[0]
        name = "-".join(str(p) for p in err["loc"]).replace("_", "-")
        flag = "--" + _FLAG_NAMES.get(name, name) if name else "input"
        parser.error(f"{flag}: {err['msg']}")


# ── subcommands ──────────────────────────────────────────────


def _initial_data(cfg: CliConfig) -> SpectralField:
    if cfg.data:
        return load_field(cfg.data)
    return gen_rough_data(RoughDataSpec(n=cfg.n, gamma=cfg.gamma, seed=cfg.seed))


def _order_summary(tables: list[ConvergenceTable]) -> str:
    parts = []
    for t in tables:
        if math.isnan(t.fitted_order):
            parts.append(f"{t.scheme.value} order=n/a")
        else:
            parts.append(f"{t.scheme.value} order={t.fitted_order:.3f} (resid {t.fit_residual:.2e})")
    return "; ".join(parts)


def _write_study(cfg: CliConfig, tables: list[ConvergenceTable]) -> None:
    emit_csv(tables, cfg.out)
    if cfg.plot:
        quantity = tables[0].quantity
        emit_svg_plot(tables, cfg.plot, config.PLOT["guides"][quantity.value], quantity)


def run_gen_data(cfg: CliConfig) -> str:
    u0 = gen_rough_data(RoughDataSpec(n=cfg.n, gamma=cfg.gamma, seed=cfg.seed))
    save_field(u0, cfg.out)
    return f"gen-data n={cfg.n} gamma={cfg.gamma:g} seed={cfg.seed} mass={mass(u0):.6e} → {cfg.out}"


def run_solve(cfg: CliConfig) -> str:
    u0 = _initial_data(cfg)
    scfg = scheme_config_for(
        u0,
        cfg.tau,
        cfg.schemes[0],
        lam=cfg.lam,
        collocation=cfg.collocation,
        oracle_substeps=cfg.oracle_substeps,
    )
    u, rec = run_trajectory(u0, scfg, cfg.t_final, seed=cfg.seed)
    save_field(u, cfg.out)

    line = (
        f"solve {rec.scheme.value} steps={rec.steps} tau={rec.tau:.4e} "
        f"mass_drift={rec.mass_drift:.3e} momentum_drift={rec.momentum_drift:.3e} "
        f"time={rec.wall_time:.2f}s"
    )
    if cfg.compare:
        substeps = max(1, math.ceil(config.ORACLE["substep_factor"] * cfg.t_final / rec.tau))
        reference = oracle_evolve(u0, cfg.t_final, substeps, scfg)
        error = sobolev_norm(spectral_field(u.grid, u.coeffs - reference.coeffs), cfg.norm_gamma)
        line += f" error_H{cfg.norm_gamma:g}={error:.3e}"
    return line + f" → {cfg.out}"


def run_converge(cfg: CliConfig) -> str:
    u0 = _initial_data(cfg)
    base = scheme_config_for(u0, cfg.taus[0], cfg.schemes[0], lam=cfg.lam, collocation=cfg.collocation)
    tables = run_convergence(
        u0,
        cfg.schemes,
        cfg.taus,
        cfg.norm_gamma,
        cfg.t_final,
        base,
        seed=cfg.seed,
        workers=cfg.workers,
        progress=True,
    )
    _write_study(cfg, tables)
    return f"converge H{cfg.norm_gamma:g}: {_order_summary(tables)} → {cfg.out}"


def run_drift(cfg: CliConfig) -> str:
    u0 = _initial_data(cfg)
    base = scheme_config_for(u0, cfg.taus[0], cfg.schemes[0], lam=cfg.lam, collocation=cfg.collocation)
    tables = run_mass_drift(
        u0,
        cfg.schemes,
        cfg.taus,
        cfg.t_final,
        base,
        gamma=cfg.gamma,
        seed=cfg.seed,
        workers=cfg.workers,
        progress=True,
    )
    _write_study(cfg, tables)
    return f"mass-drift: {_order_summary(tables)} → {cfg.out}"


def run_local(cfg: CliConfig) -> str:
    u0 = _initial_data(cfg)
    base = scheme_config_for(u0, cfg.taus[0], cfg.schemes[0], lam=cfg.lam, collocation=cfg.collocation)
    tables = run_local_study(
        u0,
        cfg.schemes,
        cfg.taus,
        base,
        quantity=cfg.quantity,
        gamma_norm=cfg.norm_gamma,
        seed=cfg.seed,
        workers=cfg.workers,
        progress=True,
    )
    _write_study(cfg, tables)
    return f"local {cfg.quantity.value}: {_order_summary(tables)} → {cfg.out}"


COMMANDS = {
    Subcommand.gen_data: run_gen_data,
    Subcommand.solve: run_solve,
    Subcommand.converge: run_converge,
    Subcommand.mass_drift: run_drift,
    Subcommand.local: run_local,
}


def main(cfg: CliConfig) -> int:
    codes = config.EXIT_CODES
    try:
        summary = COMMANDS[cfg.subcommand](cfg)
    except BlowUpError as e:
        print(f"✗  {e}", file=sys.stderr)
        return codes["blow_up"]
    except OSError as e:
        # OutputError is an OSError; a missing --data file lands here too
        print(f"✗  {e}", file=sys.stderr)
        return codes["io"]
    except (ValidationError, InsufficientDataError, ValueError) as e:
        print(f"✗  {e}", file=sys.stderr)
        return codes["usage"]

    print(f"✓  {summary}")
    return codes["ok"]


def cli(argv: list[str] | None = None) -> None:
    sys.exit(main(parse_args(argv)))


if __name__ == "__main__":
    cli()
