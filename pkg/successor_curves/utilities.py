"""
Utilities Module
Helper functions for configuration, logging, and check timing
"""

import logging
import os
import platform
import time
import yaml
import numpy as np
import scipy
from typing import Dict, Any, Mapping, Optional
from collections import deque
from pathlib import Path

from config.default_config import (
    CONFIG_ENV_VAR, DEFAULT_CONFIG_FILE, DEFAULT_LOG_FILE, DEFAULT_LOG_LEVEL,
    DEFAULT_METHOD, DEFAULT_OUTPUT_PREFIX, DEFAULT_OUTPUTS, DEFAULT_RANGE,
    DEFAULT_RENORM_EVERY, DEFAULT_STEP,
)
from .errors import ValidationError

logger = logging.getLogger(__name__)


def setup_logging(log_level: str = DEFAULT_LOG_LEVEL, log_file: Optional[str] = DEFAULT_LOG_FILE) -> None:
    log_format = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    level = getattr(logging, str(log_level).upper(), None)
    if not isinstance(level, int):
        raise ValidationError(f"unknown log level {log_level!r}")

    handlers = [logging.StreamHandler()]

    if log_file:
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=level,
        format=log_format,
        handlers=handlers,
        force=True
    )

    logger.debug(f"Logging configured at {log_level} level")


def get_default_config() -> Dict[str, Any]:
    return {
        'step': DEFAULT_STEP,
        'renorm_every': DEFAULT_RENORM_EVERY,
        'method': DEFAULT_METHOD,
        'range': f"{DEFAULT_RANGE[0]:g}:{DEFAULT_RANGE[1]:g}",
        'outputs': list(DEFAULT_OUTPUTS),
        'output_prefix': DEFAULT_OUTPUT_PREFIX,
        'log_level': DEFAULT_LOG_LEVEL,
        'log_file': DEFAULT_LOG_FILE,
    }


def find_config_file(explicit: Optional[str] = None) -> Optional[Path]:
    """--config, then the SC_CONFIG variable, then ./config.yaml if present"""
    if explicit:
        return Path(explicit)
    from_env = os.environ.get(CONFIG_ENV_VAR)
    if from_env:
        return Path(from_env)
    local = Path(DEFAULT_CONFIG_FILE)
    return local if local.is_file() else None


def load_config(config_path: str) -> Dict[str, Any]:
    try:
        with open(config_path, 'r') as f:
            config = yaml.safe_load(f) or {}
        if not isinstance(config, dict):
            raise ValidationError(f"{config_path} must hold a flat key/value mapping")
        logger.info(f"Configuration loaded from {config_path}")
    except FileNotFoundError:
        logger.warning(f"Config file not found: {config_path}, using defaults")
        return get_default_config()
    except yaml.YAMLError as e:
        raise ValidationError(f"cannot parse {config_path}: {e}") from e

    known = get_default_config()
    for key in list(config):
        if key not in known:
            logger.warning(f"Ignoring unknown config key {key!r} in {config_path}")
            del config[key]
        elif isinstance(config[key], dict):
            raise ValidationError(f"config key {key!r} must be a scalar or list, not a section")
    return config


def resolve_settings(flags: Mapping[str, Any], file_config: Mapping[str, Any],
                     defaults: Optional[Mapping[str, Any]] = None) -> Dict[str, Any]:
    """Merge settings with precedence flags > config file > defaults; None flags are unset"""
    settings = dict(get_default_config() if defaults is None else defaults)
    settings.update({k: v for k, v in file_config.items() if v is not None})
    settings.update({k: v for k, v in flags.items() if v is not None})
    return settings


class CheckTimer:
    """Wall-clock durations of the most recent checks (milliseconds)"""

    def __init__(self, window_size: int = 64):
        self.window_size = window_size
        self.durations = deque(maxlen=window_size)
        self.start_time = None

    def start(self) -> None:
        self.start_time = time.perf_counter()

    def stop(self) -> float:
        if self.start_time is None:
            return 0.0

        elapsed = (time.perf_counter() - self.start_time) * 1000
        self.durations.append(elapsed)
        self.start_time = None

        return elapsed

    def get_avg_duration(self) -> float:
        if len(self.durations) == 0:
            return 0.0
        return sum(self.durations) / len(self.durations)

    def get_total_duration(self) -> float:
        return sum(self.durations)

    def reset(self) -> None:
        self.durations.clear()
        self.start_time = None


def log_system_info() -> None:
    logger.info("=" * 60)
    logger.info("SUCCESSOR CURVES - SYSTEM INFO")
    logger.info("=" * 60)
    logger.info(f"Python Version: {platform.python_version()}")
    logger.info(f"NumPy Version: {np.__version__}")
    logger.info(f"SciPy Version: {scipy.__version__}")
    logger.info(f"Platform: {platform.system()} {platform.release()}")
    logger.info("=" * 60)
