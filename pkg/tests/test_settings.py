"""
Tests for the settings manager
"""

import json

from core import settings_manager
from core.settings_manager import BUDGET_ENV, DEFAULT_SETTINGS, SettingsManager


def test_defaults(settings):
    assert settings.get_group_size_cap() == 20160
    assert settings.get_nonzero_budget() == 50_000_000
    assert settings.get_default_resolution() == "auto"
    assert settings.as_dict() == DEFAULT_SETTINGS


def test_persistence(tmp_path):
    path = tmp_path / "settings.json"
    first = SettingsManager(str(path))
    first.set_cocycle_group_cap(8)
    first.set_sparse_layout(0.1, 100)
    second = SettingsManager(str(path))
    assert second.get_cocycle_group_cap() == 8
    assert second.get_sparse_density_threshold() == 0.1
    assert second.get_sparse_min_dimension() == 100


def test_unknown_keys_ignored(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps({"pair_expand_limit": 3, "colour": "red"}))
    manager = SettingsManager(str(path))
    assert manager.get_pair_expand_limit() == 3
    assert "colour" not in manager.as_dict()


def test_corrupt_file_falls_back(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text("{not json")
    assert SettingsManager(str(path)).as_dict() == DEFAULT_SETTINGS


def test_budget_environment(monkeypatch, settings):
    monkeypatch.setenv(BUDGET_ENV, "1e3")
    assert settings.get_nonzero_budget() == 1000
    assert settings.as_dict()["nonzero_budget"] == 1000
    monkeypatch.setenv(BUDGET_ENV, "lots")
    assert settings.get_nonzero_budget() == 50_000_000


def test_use_settings_swaps_instance(settings):
    other = SettingsManager(None)
    previous = settings_manager.use_settings(other)
    try:
        assert previous is settings
        assert settings_manager.get_settings() is other
    finally:
        settings_manager.use_settings(previous)
