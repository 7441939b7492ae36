"""
Configuration management for ESSI
"""

import copy
import json
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from .logger import get_logger

logger = get_logger(__name__)

DEFAULT_CONFIG_FILE = "essi_config.yaml"
CONFIG_ENV_VAR = "ESSI_CONFIG"
THREADS_ENV_VAR = "ESSI_THREADS"

_DEFAULTS: Dict[str, Any] = {
    'basis': {
        'max_n': 24
    },
    'engine': {
        'max_dense_n': 14,
        'max_dense_dimension': 3432,
        'max_oracle_n': 12,
        'tol_eig': 1e-10,
        'tol_orth': 1e-10,
        'symmetry_tol': 1e-12
    },
    'verifier': {
        'tol': 1e-8,
        'tau_floor': 1e-6,
        'tau_relative': 1e-9,
        'fixture_tol': 1e-12,
        'oracle_max_n': 8,
        'oracle_tol': 1e-9,
        'oracle_params': {
            'omega0': 1.0,
            'coupling_A': 0.3,
            'coupling_B': 0.7
        }
    },
    'transitions': {
        'intensity_floor': 1e-12,
        'tau_line_relative': 1e-9
    },
    'concurrency': {
        'max_workers': 4
    },
    'reporting': {
        'default_format': 'table',
        'include_timing': False
    },
    'logging': {
        'level': 'INFO',
        'log_directory': None
    }
}


class ESSIConfig:
    """ESSI Configuration Manager"""

    def __init__(self, config_file: Optional[str] = None):
        """Initialize configuration manager"""
        self.config_file = config_file or os.environ.get(CONFIG_ENV_VAR, DEFAULT_CONFIG_FILE)
        self.config = self._load_default_config()
        self._load_config()

    def _load_default_config(self) -> Dict[str, Any]:
        """Load default configuration"""
        return copy.deepcopy(_DEFAULTS)

    def _load_config(self) -> None:
        """Load configuration from file"""
        config_path = Path(self.config_file)
        if not config_path.exists():
            return
        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                if config_path.suffix.lower() in ('.yaml', '.yml'):
                    file_config = yaml.safe_load(f) or {}
                else:
                    file_config = json.load(f)

            self._merge_config(self.config, file_config)
            logger.debug(f"Loaded configuration from {config_path}")

        except Exception as e:
            logger.warning(f"Error loading config file {config_path}: {e}")

    def _merge_config(self, default: Dict[str, Any], override: Dict[str, Any]) -> None:
        """Recursively merge configuration dictionaries"""
        for key, value in override.items():
            if key in default and isinstance(default[key], dict) and isinstance(value, dict):
                self._merge_config(default[key], value)
            else:
                default[key] = value

    def reload(self, config_file: Optional[str] = None) -> None:
        """Reset to defaults and re-read the given (or current) file"""
        if config_file is not None:
            self.config_file = config_file
        self.config = self._load_default_config()
        self._load_config()

    def get(self, key_path: str, default: Any = None) -> Any:
        """Get configuration value using dot notation"""
        keys = key_path.split('.')
        value = self.config

        for key in keys:
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default

        return value

    def set(self, key_path: str, value: Any) -> None:
        """Set configuration value using dot notation"""
        keys = key_path.split('.')
        config = self.config

        for key in keys[:-1]:
            if key not in config:
                config[key] = {}
            config = config[key]

        config[keys[-1]] = value

    def max_workers(self) -> int:
        """Worker count for sector-parallel work; ESSI_THREADS wins over the file"""
        override = os.environ.get(THREADS_ENV_VAR)
        if override:
            try:
                return max(1, int(override))
            except ValueError:
                logger.warning(f"Ignoring non-integer {THREADS_ENV_VAR}={override!r}")
        return max(1, int(self.get('concurrency.max_workers', 1)))

    def create_sample_config(self, filename: str = DEFAULT_CONFIG_FILE) -> None:
        """Create a sample configuration file"""
        sample_config = self._load_default_config()
        sample_config['concurrency']['max_workers'] = 8
        sample_config['logging']['log_directory'] = 'logs'

        with open(filename, 'w', encoding='utf-8') as f:
            yaml.safe_dump(sample_config, f, default_flow_style=False, indent=2)

        logger.info(f"Sample configuration created: {filename}")


# Global configuration instance
config = ESSIConfig()
