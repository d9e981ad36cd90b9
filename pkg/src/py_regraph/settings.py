"""Single source of truth for run defaults.

Values resolve with the precedence

1. explicit overrides (command-line flags),
2. a flat ``key=value`` config file,
3. ``REGRAPH_<KEY>`` environment variables (a ``.env`` file is loaded by the CLI),
4. the defaults in :mod:`py_regraph.config`.

Config-file keys are the field names of :class:`Settings`, case-insensitive,
with ``-`` accepted for ``_``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Callable, Dict, Mapping, Optional, Union

from dotenv import dotenv_values

from .config import (
    DEFAULT_A,
    DEFAULT_C,
    DEFAULT_ELL,
    DEFAULT_LOG_POWER,
    DEFAULT_OMEGA_D,
)

ENV_PREFIX = "REGRAPH_"


class SettingsError(ValueError):
    """Raised for unknown keys, unreadable files or unparsable values."""


@dataclass(frozen=True)
class Settings:
    """Defaults shared by every subcommand of one invocation."""

    n: int = 1000
    d: int = 3
    ell: int = DEFAULT_ELL
    c: float = DEFAULT_C
    a: float = DEFAULT_A
    omega_d: int = DEFAULT_OMEGA_D
    samples: int = 50
    seed: int = 0
    workers: int = 1
    format: str = "csv"
    log_power: float = DEFAULT_LOG_POWER


_TYPES: Dict[str, Callable[[str], Any]] = {"int": int, "float": float, "str": str}

_PARSERS: Dict[str, Callable[[str], Any]] = {
    f.name: _TYPES[f.type if isinstance(f.type, str) else f.type.__name__]
    for f in fields(Settings)
}


def _normalize(key: str) -> str:
    return key.strip().lower().replace("-", "_")


def _coerce(values: Mapping[str, Any], source: str) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for raw_key, raw in values.items():
        key = _normalize(raw_key)
        if key not in _PARSERS:
            raise SettingsError(f"Unknown setting {raw_key!r} in {source}.")
        if raw is None:
            continue
        try:
            out[key] = raw if not isinstance(raw, str) else _PARSERS[key](raw.strip())
        except ValueError:
            raise SettingsError(
                f"Invalid value {raw!r} for {key!r} in {source}."
            ) from None
    return out


def _from_environment(environ: Mapping[str, str]) -> Dict[str, Any]:
    found = {
        key[len(ENV_PREFIX):]: value
        for key, value in environ.items()
        if key.startswith(ENV_PREFIX) and _normalize(key[len(ENV_PREFIX):]) in _PARSERS
    }
    return _coerce(found, "environment")


def load_settings(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> Settings:
    """Resolve the run defaults.

    Args:
        path: Optional flat ``key=value`` config file.
        overrides: Values that win over everything else; ``None`` entries are
            ignored so that unset flags fall through.
        environ: Environment mapping; ``os.environ`` when omitted.

    Returns:
        Settings: The resolved values.

    Raises:
        SettingsError: If the file is missing, a key is unknown or a value does
            not parse.
    """
    env = os.environ if environ is None else environ
    settings = replace(Settings(), **_from_environment(env))
    if path is not None:
        target = Path(path)
        if not target.is_file():
            raise SettingsError(f"Config file not found: {target}")
        settings = replace(settings, **_coerce(dotenv_values(target), str(target)))
    if overrides:
        settings = replace(settings, **_coerce(overrides, "overrides"))
    return settings


__all__ = ["ENV_PREFIX", "Settings", "SettingsError", "load_settings"]
