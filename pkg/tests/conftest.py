"""Shared pytest setup: kernel scripts import their siblings by module name."""

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / 'kernels'))

FIXTURES = ROOT / 'fixtures'


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope='session')
def g648():
    from grouprep import build_g648
    return build_g648()


@pytest.fixture(scope='session')
def g648_table(g648):
    from grouprep import character_table_dixon
    return character_table_dixon(g648)
