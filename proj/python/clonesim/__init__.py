"""Python bindings for the clonesim C++ core."""

import json

from ._clonesim import (
    ConfigError,
    SimulationError,
    acceptance,
    clone_fidelity,
    default_config_text,
    evolve,
    normalize_config_text,
    sweepable_params,
    unot_fidelity,
)
from . import _clonesim

__all__ = [
    "ConfigError",
    "SimulationError",
    "acceptance",
    "analytic",
    "clone_fidelity",
    "default_config_text",
    "evolve",
    "normalize_config_text",
    "run",
    "sweep",
    "sweepable_params",
    "unot_fidelity",
]


def run(config_text):
    """Run the protocol described by a config string; returns the report as a dict."""
    return json.loads(_clonesim.run_json(config_text))


def analytic(a, b, eta=1.0, dark_rate=0.0, window=1.0, seed=None):
    kwargs = {} if seed is None else {"seed": seed}
    return json.loads(_clonesim.analytic_json(a, b, eta, dark_rate, window, **kwargs))


def sweep(param, values, config_text=None):
    """CSV text with one row per value."""
    if config_text is None:
        config_text = default_config_text()
    return _clonesim.sweep_csv(config_text, param, list(values))
