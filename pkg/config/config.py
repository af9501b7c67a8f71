# config/config.py
import copy
import json
import os
from typing import Any, Callable, Dict, Optional, Tuple

import yaml

from core.models import SearchConfig

DEFAULT_CONFIG: Dict[str, Any] = {
    "search": {
        "max_prime_order": 7,
        "max_block_shapes": 0,
        "witness_catalog_only": False,
        "generic_modulus": 10007,
        "chunk_size": 4096
    },
    "limits": {
        "max_dim": 5000,
        "oracle_max_dim": 3000
    },
    "processing": {
        "max_concurrent": 4
    },
    "catalog": {
        "catalog_dir": "data/catalog",
        "tables_dir": "data/tables",
        "cases_file": "data/cases/oracle_cases.txt"
    },
    "tables": {
        "1": {"ranks": [3, 4, 5, 6, 7, 8], "chars": [0, 2, 3, 5, 7]},
        "2": {"ranks": [2, 3, 4, 5], "chars": [0, 2, 3, 5, 7]},
        "3": {"ranks": [3, 4, 5], "chars": [0, 3, 5, 7]},
        "4": {"ranks": [4, 5, 6], "chars": [0, 2, 3, 5, 7]}
    },
    "output": {
        "results_dir": "data/results",
        "log_dir": "logs"
    }
}

# Environment variable -> (key path, parser)
ENV_OVERRIDES: Dict[str, Tuple[Tuple[str, ...], Callable[[str], Any]]] = {
    "NU_CATALOG_DIR": (("catalog", "catalog_dir"), str),
    "NU_TABLES_DIR": (("catalog", "tables_dir"), str),
    "NU_MAX_DIM": (("limits", "max_dim"), int),
    "NU_MAX_PRIME_ORDER": (("search", "max_prime_order"), int),
    "MAX_CONCURRENT": (("processing", "max_concurrent"), int),
    "RESULTS_DIR": (("output", "results_dir"), str),
    "LOG_DIR": (("output", "log_dir"), str),
}


def _read_json(f) -> Dict[str, Any]:
    return json.load(f)


def _read_yaml(f) -> Dict[str, Any]:
    return yaml.safe_load(f) or {}


def _write_json(data: Dict[str, Any], f) -> None:
    json.dump(data, f, indent=2)


def _write_yaml(data: Dict[str, Any], f) -> None:
    yaml.dump(data, f, default_flow_style=False)


READERS = {".json": _read_json, ".yaml": _read_yaml, ".yml": _read_yaml}
WRITERS = {".json": _write_json, ".yaml": _write_yaml, ".yml": _write_yaml}


def _file_format(path: str) -> str:
    ext = os.path.splitext(path)[1].lower()
    if ext not in READERS:
        raise ValueError(f"Unsupported configuration file format: {ext}")
    return ext


class Config:
    """Configuration manager for the nu engine: defaults, then a file, then the environment."""

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize configuration manager.

        Args:
            config_path: Path to configuration file (JSON or YAML)
        """
        self.config = copy.deepcopy(DEFAULT_CONFIG)

        if config_path:
            self._load_config_file(config_path)

        self._load_from_env()

    def _load_config_file(self, config_path: str) -> None:
        if not os.path.exists(config_path):
            raise FileNotFoundError(f"Configuration file not found: {config_path}")

        try:
            reader = READERS[_file_format(config_path)]
            with open(config_path, "r") as f:
                self._merge(self.config, reader(f))
        except Exception as e:
            raise ValueError(f"Error loading configuration file: {str(e)}")

    def _load_from_env(self) -> None:
        for env_var, (keys, parse) in ENV_OVERRIDES.items():
            if env_var in os.environ:
                self.set(parse(os.environ[env_var]), *keys)

    @classmethod
    def _merge(cls, target: Dict[str, Any], updates: Dict[str, Any]) -> None:
        """Merge updates into target, descending into nested sections."""
        for key, value in updates.items():
            if isinstance(value, dict) and isinstance(target.get(key), dict):
                cls._merge(target[key], value)
            else:
                target[key] = value

    def get(self, *keys: str, default: Any = None) -> Any:
        """
        Get a configuration value by key path.

        Args:
            *keys: Key path in config
            default: Default value if path doesn't exist

        Returns:
            Configuration value or default
        """
        current = self.config
        for key in keys:
            if not isinstance(current, dict) or key not in current:
                return default
            current = current[key]
        return current

    def set(self, value: Any, *keys: str) -> None:
        """
        Set a configuration value by key path, creating sections as needed.

        Args:
            value: Value to set
            *keys: Key path in config
        """
        if not keys:
            return
        section = self.config
        for key in keys[:-1]:
            section = section.setdefault(key, {})
        section[keys[-1]] = value

    def save(self, config_path: str) -> None:
        """
        Save configuration to a JSON or YAML file.

        Args:
            config_path: Path to save configuration
        """
        try:
            writer = WRITERS[_file_format(config_path)]
            with open(config_path, "w") as f:
                writer(self.config, f)
        except Exception as e:
            raise ValueError(f"Error saving configuration file: {str(e)}")

    def search_config(self) -> SearchConfig:
        """Semisimple search parameters from the 'search' section, validated."""
        return SearchConfig(**self.get("search", default={}))

    def table_grid(self, table: int) -> Dict[str, list]:
        """
        Acceptance grid of a table.

        Args:
            table: Table number (1-4)

        Returns:
            Dictionary with 'ranks' and 'chars' lists
        """
        grid = self.get("tables", str(table), default={}) or {}
        return {"ranks": list(grid.get("ranks", [])), "chars": list(grid.get("chars", []))}
