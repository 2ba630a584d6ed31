"""Python access to the glancing-region numerics and validation suites."""

import json as _json

from . import _core
from ._core import (
    AliasingError,
    ConfigError,
    OverflowError,
    ResolutionError,
    aj_integral,
    bc_coefficient,
    bessel_pair,
    bessel_scaled,
    exponent_book,
    flow_check,
    green_eval,
    green_hs_norm,
    j_alpha,
    kernel_decay_scan,
    mode_order,
    ols,
    packet_kernel,
    path_agreement,
    sweep_grid,
    theta_calculus_check,
    transform_check,
    turning_map,
    wronskian_defect,
)


def run_suite(config_text: str = "", subcommand: str | None = None, **overrides) -> dict:
    """Run one validation suite from config text and return its summary.

    Keyword overrides: threads, seed, out_path. Nothing is written to disk
    unless out_path is given.
    """
    return _json.loads(_core._run_suite(config_text, subcommand or "", overrides))


__all__ = [name for name in dir() if not name.startswith("_")]
