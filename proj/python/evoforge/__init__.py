"""Evolutionary program search over a MAP-Elites archive.

Thin Python layer over the native ``_evoforge`` module. Structured results
come back as plain dicts and lists.
"""

import json
import os
from pathlib import Path

_bundled = Path(__file__).resolve().parent / "data"
if "EVOFORGE_DATA_DIR" not in os.environ and (_bundled / "configs").is_dir():
    os.environ["EVOFORGE_DATA_DIR"] = str(_bundled)

from . import _evoforge as _native  # noqa: E402
from ._evoforge import ConfigError, EvoforgeError, ParseFailure  # noqa: E402

__all__ = [
    "ConfigError",
    "EvoforgeError",
    "ParseFailure",
    "apply_diff",
    "compose",
    "dag_issues",
    "default_data_dir",
    "export_archive",
    "first_fit",
    "inspect",
    "parse_rewrite",
    "run",
    "validate",
    "validate_config",
    "validator_kinds",
]

default_data_dir = _native.default_data_dir
validator_kinds = _native.validator_kinds
first_fit = _native.first_fit
parse_rewrite = _native.parse_rewrite
apply_diff = _native.apply_diff
inspect = _native.inspect


def _data_dir(data_dir):
    return "" if data_dir is None else os.fspath(data_dir)


def compose(profile="base", overrides=(), data_dir=None):
    """Composed configuration tree for ``profile`` with dotted overrides."""
    return json.loads(_native.compose(profile, list(overrides), _data_dir(data_dir)))


def validate_config(profile="base", overrides=(), data_dir=None):
    """Raises ConfigError if the run would be rejected; returns its namespace."""
    return _native.validate_config(profile, list(overrides), _data_dir(data_dir))


def run(profile="base", overrides=(), data_dir=None):
    """Runs to budget. Returns (report, output_dir)."""
    report, out = _native.run(profile, list(overrides), _data_dir(data_dir))
    return json.loads(report), Path(out)


def export_archive(runs_dir, namespace):
    return json.loads(_native.export_archive(os.fspath(runs_dir), namespace))


def validate(kind, raw, params=None, context=None):
    """Runs a built-in validator on a candidate's raw output.

    Integers too wide for 64 bits may be passed as ``{"$bigint": "<digits>"}``.
    """
    return json.loads(
        _native.validate(
            kind,
            json.dumps(raw),
            "" if params is None else json.dumps(params),
            "" if context is None else json.dumps(context),
        )
    )


def dag_issues(dag):
    """Structural problems of a stage DAG given as a dict; empty when valid."""
    return json.loads(_native.dag_issues(json.dumps(dag)))
