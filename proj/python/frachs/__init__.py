"""Python bindings for the frachs numerical library."""

import json as _json

from ._frachs import (
    Estimate,
    Params,
    QuadratureConfig,
    __version__,
    cp_min,
    d_constant_polar,
    eta,
    hardy_constant_ground_state,
    map_T,
    run_checks,
    shell_integral,
    shell_integral_radial,
    sphere_area,
    tail_t_integral,
    _cli,
)


def cli(*args):
    """Runs one frachs command; returns (exit_code, report, stderr).

    The report is parsed JSON when the command wrote it to stdout.
    """
    code, out, err = _cli([str(a) for a in args])
    try:
        report = _json.loads(out) if out else None
    except ValueError:
        report = out
    return code, report, err


__all__ = [
    "Estimate",
    "Params",
    "QuadratureConfig",
    "cli",
    "cp_min",
    "d_constant_polar",
    "eta",
    "hardy_constant_ground_state",
    "map_T",
    "run_checks",
    "shell_integral",
    "shell_integral_radial",
    "sphere_area",
    "tail_t_integral",
]
