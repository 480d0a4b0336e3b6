"""Python bindings for the pscgeom curvature library."""

import json as _json

from ._pscgeom import *  # noqa: F401,F403
from ._pscgeom import PscgeomError, __version__, run_config_json


def run_config(config, base_dir="."):
    """Run an experiment config given as a dict; returns (passed, report dict)."""
    passed, text = run_config_json(_json.dumps(config), str(base_dir))
    return passed, _json.loads(text)
