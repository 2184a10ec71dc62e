#!/usr/bin/env python3
"""
Environment configuration for the kernel scripts.

Loads a .env file from the working directory or its nearest parent (when
python-dotenv is installed) and exposes the FPP_* settings with defaults.
"""

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from errors import ConfigError

# Auto-load .env file if present
try:
    from dotenv import load_dotenv
    HAS_DOTENV = True
except ImportError:
    HAS_DOTENV = False


DEFAULT_PRECISION = 100
DEFAULT_SEED = 0
DEFAULT_OUTPUT_DIR = "output"


def find_env_file(start: Optional[Path] = None) -> Optional[Path]:
    """Look for .env in the start dir, then in each parent."""
    start = start or Path.cwd()
    candidate = start / '.env'
    if candidate.exists():
        return candidate
    for parent in start.parents:
        candidate = parent / '.env'
        if candidate.exists():
            return candidate
    return None


def load_env(start: Optional[Path] = None) -> Optional[Path]:
    """Load the nearest .env into os.environ (existing values win)."""
    if not HAS_DOTENV:
        return None
    env_path = find_env_file(start)
    if env_path is not None:
        load_dotenv(env_path, override=False)
    return env_path


def _int_env(name: str, default: Optional[int]) -> Optional[int]:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw.strip())
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}")


@dataclass(frozen=True)
class Settings:
    precision: int = DEFAULT_PRECISION
    seed: int = DEFAULT_SEED
    dixon_prime: Optional[int] = None
    output_dir: str = DEFAULT_OUTPUT_DIR


def get_settings() -> Settings:
    """Read FPP_* variables (after .env loading) into a Settings record."""
    precision = _int_env("FPP_PRECISION", DEFAULT_PRECISION)
    if precision < 1:
        raise ConfigError(f"FPP_PRECISION must be positive, got {precision}")
    return Settings(
        precision=precision,
        seed=_int_env("FPP_SEED", DEFAULT_SEED),
        dixon_prime=_int_env("FPP_DIXON_PRIME", None),
        output_dir=os.environ.get("FPP_OUTPUT_DIR") or DEFAULT_OUTPUT_DIR,
    )
