"""Discrete-symbol pseudodifferential operators on the torus.

Thin Python layer over the C++ core. Records (norm bounds, growth fits,
Richardson ratios, ...) come back as dicts with the same fields as the JSON
reports written by the ``tpdo`` command line tool.
"""

import json

from ._tpdo import (
    NonConvergence,
    Operator,
    Symbol,
    TpdoError,
    analyticity_fit,
    apply,
    bbeta_build,
    bound_chain_check,
    catalog_names,
    conjugate_translation,
    default_config,
    extract_symbol,
    interior_symbol_diff,
    lattice_constant,
    mu_constant,
    norm_bound_check,
    orbit_eval,
    orbit_growth_table,
    recover_symbol,
    richardson_check,
    to_matrix,
)
from ._tpdo import run_command as _run_command

__all__ = [
    "NonConvergence",
    "Operator",
    "Symbol",
    "TpdoError",
    "analyticity_fit",
    "apply",
    "bbeta_build",
    "bound_chain_check",
    "catalog_names",
    "conjugate_translation",
    "default_config",
    "extract_symbol",
    "interior_symbol_diff",
    "lattice_constant",
    "mu_constant",
    "norm_bound_check",
    "orbit_eval",
    "orbit_growth_table",
    "recover_symbol",
    "richardson_check",
    "run",
    "to_matrix",
]


def run(command, config=None, strict=False):
    """Run a CLI command in process.

    ``config`` is a dict in the config file layout (missing keys take their
    defaults). Returns ``(status, report)`` with the report parsed from JSON.
    """
    status, text = _run_command(command, json.dumps(config or {}), strict)
    return status, json.loads(text)
