"""Continuous double auction simulator with zero-intelligence and belief-learning traders."""

import json as _json

from ._cdasim import *  # noqa: F401,F403
from ._cdasim import __version__, normalize_config, run as _run, run_csv as _run_csv, run_to as _run_to


def _text(config):
    return config if isinstance(config, str) else _json.dumps(config)


def run(config=None):
    """Run one simulation. `config` is a dict or a JSON string; None means all defaults."""
    return _run(_text(config or {}))


def run_to(config, out_dir):
    """Run one simulation and write events.csv, trades.csv, fundamental.csv, agents.csv and manifest.json."""
    return _run_to(_text(config or {}), str(out_dir))


def run_csv(config=None):
    """Run one simulation and return the CSV outputs as strings keyed by file stem."""
    return _run_csv(_text(config or {}))


def load_config(config=None):
    """Validated config with every default filled in, as a dict."""
    return _json.loads(normalize_config(_text(config or {})))
