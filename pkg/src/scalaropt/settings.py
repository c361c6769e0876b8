"""Persistent user defaults backed by a JSON file.

Settings are stored at the platform-appropriate config directory
(e.g. ~/.config/scalaropt/settings.json on Linux). Only fields of
``Config`` are persisted; command-line flags still take precedence.
"""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, fields
from pathlib import Path

from platformdirs import user_config_dir

from scalaropt.config import Config
from scalaropt.errors import InvalidInput

log = logging.getLogger(__name__)

SETTINGS_DIR = Path(user_config_dir("scalaropt", appauthor=False))
SETTINGS_FILE = SETTINGS_DIR / "settings.json"

_FIELD_TYPES: dict[str, type] = {f.name: type(getattr(Config(), f.name)) for f in fields(Config)}


def _coerce(key: str, value: object) -> object:
    """Convert a raw JSON or command-line value to the field's type."""
    expected = _FIELD_TYPES[key]
    if expected is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if expected is int and isinstance(value, int) and not isinstance(value, bool):
        return value
    if expected is str and isinstance(value, str):
        return value
    if isinstance(value, str):
        try:
            return expected(value)
        except ValueError:
            pass
    raise InvalidInput(f"setting {key!r} expects {expected.__name__}, got {value!r}")


def load_settings(config: Config) -> dict:
    """Load saved settings into config, returning the raw dict."""
    if not SETTINGS_FILE.exists():
        return {}

    try:
        data = json.loads(SETTINGS_FILE.read_text())
    except (json.JSONDecodeError, OSError):
        log.warning("Failed to read settings file, using defaults")
        return {}

    if not isinstance(data, dict):
        log.warning("Settings file is not a JSON object, using defaults")
        return {}

    for key, value in data.items():
        if key not in _FIELD_TYPES:
            log.debug("Ignoring unknown setting %r", key)
            continue
        try:
            setattr(config, key, _coerce(key, value))
        except InvalidInput as exc:
            log.warning("Ignoring setting: %s", exc)
    log.info("Loaded settings from %s", SETTINGS_FILE)
    return data


def save_settings(config: Config) -> None:
    """Save current settings to disk."""
    try:
        SETTINGS_DIR.mkdir(parents=True, exist_ok=True)
        SETTINGS_FILE.write_text(json.dumps(asdict(config), indent=2))
        log.debug("Saved settings to %s", SETTINGS_FILE)
    except OSError:
        log.warning("Failed to save settings", exc_info=True)


def set_setting(config: Config, assignment: str) -> None:
    """Apply one ``KEY=VALUE`` assignment to config."""
    key, sep, raw = assignment.partition("=")
    key = key.strip()
    if not sep or key not in _FIELD_TYPES:
        raise InvalidInput(f"expected KEY=VALUE with KEY one of {', '.join(_FIELD_TYPES)}")
    setattr(config, key, _coerce(key, raw.strip()))


def reset_settings() -> None:
    """Delete the settings file to restore defaults."""
    try:
        SETTINGS_FILE.unlink(missing_ok=True)
        log.info("Settings reset to defaults")
    except OSError:
        log.warning("Failed to reset settings", exc_info=True)
