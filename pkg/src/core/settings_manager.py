"""
Settings Manager - Handles computation limits and defaults
"""

import json
import os
import logging
from typing import Optional, Dict, Any

logger = logging.getLogger(__name__)

BUDGET_ENV = "HOMOCALC_BUDGET"
SETTINGS_ENV = "HOMOCALC_SETTINGS"

DEFAULT_SETTINGS = {
    "group_size_cap": 20160,
    "nonzero_budget": 50_000_000,
    "max_resolution_rank": 10_000_000,
    "cocycle_group_cap": 24,
    "cocycle_variable_cap": 4096,
    "sparse_density_threshold": 0.05,
    "sparse_min_dimension": 500,
    "pair_expand_limit": 8,
    "default_resolution": "auto",
}


class SettingsManager:
    def __init__(self, settings_file: Optional[str] = "homocalc_settings.json"):
        self.settings_file = settings_file
        self._settings = self._load_settings()

    def _load_settings(self) -> Dict[str, Any]:
        """Load settings from file, falling back to defaults"""
        settings = dict(DEFAULT_SETTINGS)
        try:
            if self.settings_file and os.path.exists(self.settings_file):
                with open(self.settings_file, 'r') as f:
                    stored = json.load(f)
                unknown = set(stored) - set(DEFAULT_SETTINGS)
                if unknown:
                    logger.warning(f"Ignoring unknown settings: {sorted(unknown)}")
                settings.update({k: v for k, v in stored.items() if k in DEFAULT_SETTINGS})
                logger.info(f"Settings loaded from {self.settings_file}")
        except Exception as e:
            logger.error(f"Failed to load settings: {e}")
        return settings

    def _save_settings(self):
        """Save settings to file"""
        if not self.settings_file:
            return
        try:
            with open(self.settings_file, 'w') as f:
                json.dump(self._settings, f, indent=2)
                logger.info("Settings saved successfully")
        except Exception as e:
            logger.error(f"Failed to save settings: {e}")

    def _set(self, key: str, value):
        self._settings[key] = value
        self._save_settings()

    def get_group_size_cap(self) -> int:
        """Largest group enumerate() will build"""
        return int(self._settings["group_size_cap"])

    def set_group_size_cap(self, cap: int):
        self._set("group_size_cap", int(cap))

    def get_nonzero_budget(self) -> int:
        """Nonzero-entry budget for tensored matrices; HOMOCALC_BUDGET wins"""
        override = os.environ.get(BUDGET_ENV)
        if override:
            try:
                return int(float(override))
            except ValueError:
                logger.error(f"Ignoring malformed {BUDGET_ENV}={override!r}")
        return int(self._settings["nonzero_budget"])

    def set_nonzero_budget(self, budget: int):
        self._set("nonzero_budget", int(budget))

    def get_max_resolution_rank(self) -> int:
        return int(self._settings["max_resolution_rank"])

    def set_max_resolution_rank(self, rank: int):
        self._set("max_resolution_rank", int(rank))

    def get_cocycle_group_cap(self) -> int:
        return int(self._settings["cocycle_group_cap"])

    def set_cocycle_group_cap(self, cap: int):
        self._set("cocycle_group_cap", int(cap))

    def get_cocycle_variable_cap(self) -> int:
        return int(self._settings["cocycle_variable_cap"])

    def set_cocycle_variable_cap(self, cap: int):
        self._set("cocycle_variable_cap", int(cap))

    def get_sparse_density_threshold(self) -> float:
        return float(self._settings["sparse_density_threshold"])

    def get_sparse_min_dimension(self) -> int:
        return int(self._settings["sparse_min_dimension"])

    def set_sparse_layout(self, density_threshold: float, min_dimension: int):
        """Save the density/dimension pair that selects sparse elimination"""
        self._settings["sparse_density_threshold"] = float(density_threshold)
        self._settings["sparse_min_dimension"] = int(min_dimension)
        self._save_settings()

    def get_pair_expand_limit(self) -> int:
        return int(self._settings["pair_expand_limit"])

    def set_pair_expand_limit(self, limit: int):
        self._set("pair_expand_limit", int(limit))

    def get_default_resolution(self) -> str:
        return self._settings["default_resolution"]

    def set_default_resolution(self, kind: str):
        self._set("default_resolution", kind)

    def as_dict(self) -> Dict[str, Any]:
        """Effective settings, environment overrides applied"""
        effective = dict(self._settings)
        effective["nonzero_budget"] = self.get_nonzero_budget()
        return effective


_active: Optional[SettingsManager] = None


def get_settings() -> SettingsManager:
    """Shared settings instance, created on first use"""
    global _active
    if _active is None:
        _active = SettingsManager(os.environ.get(SETTINGS_ENV, "homocalc_settings.json"))
    return _active


def use_settings(manager: SettingsManager) -> SettingsManager:
    """Replace the shared settings instance and return the previous one"""
    global _active
    previous = _active
    _active = manager
    return previous
