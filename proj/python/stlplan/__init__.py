"""STL-guided Monte Carlo tree search for terminal airspace."""

import json

from ._core import (
    TRUE_ROBUSTNESS,
    Error,
    ParseError,
    backup,
    default_library,
    formula_depth,
    integrate,
    normalize_formula,
    plan,
    robustness,
    robustness_signal,
    uct_score,
    wrap_angle,
)
from ._core import run_suite as _run_suite


def run_suite(config, base_dir=""):
    """Runs a suite from a config dict and returns the report as a dict."""
    return json.loads(_run_suite(json.dumps(config), base_dir))


__all__ = [
    "TRUE_ROBUSTNESS",
    "Error",
    "ParseError",
    "backup",
    "default_library",
    "formula_depth",
    "integrate",
    "normalize_formula",
    "plan",
    "robustness",
    "robustness_signal",
    "run_suite",
    "uct_score",
    "wrap_angle",
]
