import os

import pytest

from config import DEFAULT_OUTPUT_DIR, Settings, find_env_file, get_settings, load_env
from errors import ConfigError

FPP_VARS = ("FPP_PRECISION", "FPP_SEED", "FPP_DIXON_PRIME", "FPP_OUTPUT_DIR")


@pytest.fixture
def clean_env(monkeypatch):
    # setenv first so teardown restores the original state even for unset names
    for name in FPP_VARS:
        monkeypatch.setenv(name, "")
        monkeypatch.delenv(name)
    return monkeypatch


def test_defaults(clean_env):
    assert get_settings() == Settings()
    assert get_settings().output_dir == DEFAULT_OUTPUT_DIR


def test_environment_overrides(clean_env):
    clean_env.setenv("FPP_PRECISION", "250")
    clean_env.setenv("FPP_SEED", " 7 ")
    clean_env.setenv("FPP_DIXON_PRIME", "73")
    clean_env.setenv("FPP_OUTPUT_DIR", "runs")
    s = get_settings()
    assert (s.precision, s.seed, s.dixon_prime, s.output_dir) == (250, 7, 73, "runs")


def test_blank_values_fall_back(clean_env):
    clean_env.setenv("FPP_SEED", "  ")
    assert get_settings().seed == 0


@pytest.mark.parametrize("name, value", [
    ("FPP_SEED", "seven"),
    ("FPP_PRECISION", "0"),
    ("FPP_DIXON_PRIME", "6.1"),
])
def test_bad_values(clean_env, name, value):
    clean_env.setenv(name, value)
    with pytest.raises(ConfigError):
        get_settings()


def test_find_env_file_walks_up(tmp_path):
    (tmp_path / '.env').write_text("FPP_SEED=5\n")
    nested = tmp_path / 'a' / 'b'
    nested.mkdir(parents=True)
    assert find_env_file(nested) == tmp_path / '.env'


def test_load_env_keeps_existing_values(clean_env, tmp_path):
    pytest.importorskip("dotenv")
    (tmp_path / '.env').write_text("FPP_SEED=5\nFPP_PRECISION=40\n")
    clean_env.setenv("FPP_PRECISION", "60")
    assert load_env(tmp_path) == tmp_path / '.env'
    assert os.environ["FPP_SEED"] == "5"
    assert get_settings().precision == 60
