"""Decomposition of polynomial rings under finite linear groups in characteristic p."""

import json

from ._core import ModinvError, group_order, multiplicities
from . import _core

__all__ = ["CommandFailed", "ModinvError", "group_order", "multiplicities", "series", "verify"]


class CommandFailed(RuntimeError):
    def __init__(self, exit_code, message):
        super().__init__(message)
        self.exit_code = exit_code


def _text(config):
    return config if isinstance(config, str) else json.dumps(config)


def _finish(result, fmt):
    if result.exit_code not in (0, 1, 4) or (result.exit_code != 0 and not result.out):
        raise CommandFailed(result.exit_code, result.err.strip())
    return json.loads(result.out) if fmt == "json" else result.out


def series(config, *, format="json", **overrides):
    """Multiplicity table for a config given as a dict or JSON text."""
    return _finish(_core.series(_text(config), format=format, **overrides), format)


def verify(config, suite, *, format="json", **overrides):
    """Runs one verification suite and returns its report."""
    return _finish(_core.verify(_text(config), suite, format=format, **overrides), format)
