"""
Shared fixtures: src on the import path, isolated settings and standard groups
"""

import os
import sys

import pytest

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'src'))

from core import groups
from core.settings_manager import BUDGET_ENV, SettingsManager, use_settings


@pytest.fixture(autouse=True)
def settings(monkeypatch):
    """Fresh in-memory settings for every test"""
    monkeypatch.delenv(BUDGET_ENV, raising=False)
    manager = SettingsManager(None)
    previous = use_settings(manager)
    yield manager
    use_settings(previous)


@pytest.fixture
def c2():
    return groups.cyclic(2)


@pytest.fixture
def c3():
    return groups.cyclic(3)


@pytest.fixture
def s3():
    return groups.symmetric(3)


@pytest.fixture
def s4():
    return groups.symmetric(4)


@pytest.fixture
def v4():
    return groups.klein_four()


SMALL_GROUPS = {
    "C2": lambda: groups.cyclic(2),
    "C3": lambda: groups.cyclic(3),
    "C4": lambda: groups.cyclic(4),
    "C5": lambda: groups.cyclic(5),
    "C6": lambda: groups.cyclic(6),
    "C7": lambda: groups.cyclic(7),
    "C8": lambda: groups.cyclic(8),
    "V4": lambda: groups.klein_four(),
    "S3": lambda: groups.symmetric(3),
    "C2xC4": lambda: groups.direct_product(groups.cyclic(2), groups.cyclic(4)),
    "C2xC2xC2": lambda: groups.direct_product(groups.klein_four(), groups.cyclic(2)),
    "D4": lambda: groups.dihedral(4),
    "Q8": lambda: groups.quaternion(),
}


@pytest.fixture(params=sorted(SMALL_GROUPS))
def small_group(request):
    """Every group of order at most 8, up to isomorphism"""
    return SMALL_GROUPS[request.param]()
