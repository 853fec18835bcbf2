"""Quadratic-index photon cluster channel (C++ core)."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import __version__, capacities as _capacities, ck_params as _ck_params, run_pipeline as _run_pipeline


def capacities(*args, **kwargs):
    return _json.loads(_capacities(*args, **kwargs))


def ck_params(*args, **kwargs):
    return _json.loads(_ck_params(*args, **kwargs))


def run_pipeline(*args, **kwargs):
    return _json.loads(_run_pipeline(*args, **kwargs))
