# tests/test_config.py
import json

import pytest
import yaml
from pydantic import ValidationError

from config.config import Config


def test_defaults():
    config = Config()
    assert config.get("limits", "max_dim") == 5000
    assert config.get("catalog", "catalog_dir") == "data/catalog"
    assert config.get("missing", "key", default="x") == "x"
    assert config.search_config().max_prime_order == 7


def test_json_file_overrides_nested_values(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"limits": {"max_dim": 100}}))
    config = Config(str(path))
    assert config.get("limits", "max_dim") == 100
    assert config.get("limits", "oracle_max_dim") == 3000


def test_yaml_file(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump({"search": {"witness_catalog_only": True}}))
    assert Config(str(path)).search_config().witness_catalog_only is True


def test_missing_file():
    with pytest.raises(FileNotFoundError):
        Config("/nonexistent/config.json")


def test_unsupported_format(tmp_path):
    path = tmp_path / "config.ini"
    path.write_text("[search]")
    with pytest.raises(ValueError, match="Error loading configuration file"):
        Config(str(path))


def test_environment_overrides(monkeypatch, tmp_path):
    monkeypatch.setenv("NU_MAX_DIM", "42")
    monkeypatch.setenv("NU_MAX_PRIME_ORDER", "5")
    monkeypatch.setenv("RESULTS_DIR", str(tmp_path))
    config = Config()
    assert config.get("limits", "max_dim") == 42
    assert config.search_config().max_prime_order == 5
    assert config.get("output", "results_dir") == str(tmp_path)


def test_set_and_save_round_trip(tmp_path):
    config = Config()
    config.set(3, "processing", "max_concurrent")
    config.set("value", "new", "nested")
    path = tmp_path / "saved.yaml"
    config.save(str(path))
    reloaded = Config(str(path))
    assert reloaded.get("processing", "max_concurrent") == 3
    assert reloaded.get("new", "nested") == "value"


def test_invalid_search_section():
    config = Config()
    config.set(1, "search", "max_prime_order")
    with pytest.raises(ValidationError):
        config.search_config()


def test_table_grid():
    config = Config()
    assert config.table_grid(3) == {"ranks": [3, 4, 5], "chars": [0, 3, 5, 7]}
    assert config.table_grid(9) == {"ranks": [], "chars": []}
