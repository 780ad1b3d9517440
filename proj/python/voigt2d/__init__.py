"""Pseudo-spectral 2D Euler / Euler-Voigt solver and convergence harness.

Fields cross the boundary as real (M, M) arrays indexed [x2, x1] on the
uniform grid x_i = 2 pi i / M.
"""

from ._core import (
    BlowUpError,
    ConfigError,
    FormatError,
    __version__,
    choose_cutoff,
    cz_ratio,
    energy,
    enstrophy,
    fit_rate,
    gagliardo_ratio,
    generate,
    helmholtz_filter,
    l2_norm,
    lp_norm,
    read_snapshot,
    run_sweep,
    simulate,
    theoretical_slope,
    velocity_sobolev_norm,
    write_snapshot,
)

__all__ = [
    "BlowUpError",
    "ConfigError",
    "FormatError",
    "__version__",
    "choose_cutoff",
    "cz_ratio",
    "energy",
    "enstrophy",
    "fit_rate",
    "gagliardo_ratio",
    "generate",
    "helmholtz_filter",
    "l2_norm",
    "lp_norm",
    "read_snapshot",
    "run_sweep",
    "simulate",
    "theoretical_slope",
    "velocity_sobolev_norm",
    "write_snapshot",
]
