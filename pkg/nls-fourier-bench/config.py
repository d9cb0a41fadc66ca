# ── Run defaults ─────────────────────────────────────────────
# Desk-scale values; full-size runs use --n 1024 --t-final 2.
# Every value can be overridden from the command line.

DEFAULTS = {
    "n": 256,
    "t_final": 1.0,
    "gamma": 2.0,
    "lam": -1,
    "schemes": "lri,nlri",
    "scheme": "lri",
    "seed": 0,
    "workers": 1,
}

# ── Reference solution ───────────────────────────────────────
ORACLE = {
    # reference RK4 substeps per unit time = factor / finest tau
    "substep_factor": 100,
    # substeps per step when ORACLE itself runs as a stepper
    "substeps_per_step": 1,
    # single-step studies resolve tau with this many substeps
    "local_substeps": 1000,
}

# ── Order fitting ────────────────────────────────────────────
FIT = {
    "error_floor": 1e-10,
    "drift_floor": 1e-14,
    # drift tails are cut once the local slope drops below this share of the
    # slope of the larger steps (accumulated roundoff stops the decay)
    "plateau_ratio": 0.5,
    "min_points": 3,
}

# ── Output ───────────────────────────────────────────────────
CSV_COLUMNS = [
    "scheme",
    "n",
    "seed",
    "gamma",
    "tau",
    "t_final",
    "error",
    "mass_drift",
    "wall_time",
]

PLOT = {
    "figsize": (6.4, 4.8),
    "guide_style": "--",
    "guide_color": "0.45",
    "markers": ["o", "s", "^", "v", "D", "x"],
    # reference slopes drawn per plotted quantity
    "guides": {
        "error": [1.0],
        "mass_drift": [1.0, 5.0],
        "local_error": [2.0],
        "step_drift": [2.0, 6.0],
        "nlri_correction": [2.0],
    },
    # fixed salt keeps matplotlib's generated SVG ids reproducible
    "hashsalt": "nls-fourier-bench",
}

# ── CLI exit codes ───────────────────────────────────────────
EXIT_CODES = {
    "ok": 0,
    "blow_up": 1,
    "usage": 2,
    "io": 3,
}

SCHEME_LABELS = {
    "lri": "LRI (first-order Fourier integrator)",
    "nlri": "NLRI (mass-corrected)",
    "lie": "Lie splitting",
    "strang": "Strang splitting",
    "exp_euler": "exponential Euler",
    "oracle": "twisted RK4 reference",
}
