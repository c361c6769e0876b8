"""Shared fixtures."""

from __future__ import annotations

from collections.abc import Iterator
from pathlib import Path
from unittest.mock import patch

import pytest


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path: Path) -> Iterator[Path]:
    """Point the settings file at a temp dir so tests never touch the real one."""
    settings_dir = tmp_path / "config"
    settings_file = settings_dir / "settings.json"
    with patch("scalaropt.settings.SETTINGS_FILE", settings_file), \
         patch("scalaropt.settings.SETTINGS_DIR", settings_dir):
        yield settings_file
