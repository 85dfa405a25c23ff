"""Unit tests for run configuration."""

from __future__ import annotations

import logging
from pathlib import Path

import pytest

from laman_ric.config import RicConfig
from laman_ric.errors import ConfigError


class TestRicConfigDefaults:
    """Tests for defaults and environment variables."""

    def test_defaults(self):
        config = RicConfig()
        assert config.log_level == "warn"
        assert config.logging_level == logging.WARNING
        assert config.jobs == 1
        assert config.commands == {}

    def test_env(self, monkeypatch):
        monkeypatch.setenv("RIC_LOG", "DEBUG")
        monkeypatch.setenv("RIC_JOBS", "4")
        config = RicConfig()
        assert config.logging_level == logging.DEBUG
        assert config.jobs == 4

    def test_bad_env_jobs(self, monkeypatch):
        monkeypatch.setenv("RIC_JOBS", "many")
        with pytest.raises(ConfigError):
            RicConfig()

    def test_bad_level(self):
        with pytest.raises(ConfigError):
            RicConfig(log_level="loud")


class TestRicConfigFromDict:
    """Tests for file-shaped configuration."""

    def test_sections_become_flag_defaults(self):
        config = RicConfig.from_dict({"jobs": 2, "train": {"batch-size": 64, "epochs": 3}})
        assert config.jobs == 2
        assert config.defaults_for("train") == {"batch_size": 64, "epochs": 3}
        assert config.defaults_for("sample") == {}

    def test_env_beats_file(self, monkeypatch):
        monkeypatch.setenv("RIC_LOG", "error")
        monkeypatch.setenv("RIC_JOBS", "3")
        config = RicConfig.from_dict({"log_level": "debug", "jobs": 8})
        assert (config.log_level, config.jobs) == ("error", 3)

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            RicConfig.from_dict({"threads": 2})

    def test_section_must_be_mapping(self):
        with pytest.raises(ConfigError):
            RicConfig.from_dict({"train": [1, 2]})


class TestRicConfigLoad:
    """Tests for config file discovery."""

    def test_explicit_file_wins(self, tmp_path, monkeypatch):
        user = tmp_path / "user.yaml"
        user.write_text("log_level: info\ntrain:\n  epochs: 3\n  hidden: 8\n", encoding="utf-8")
        explicit = tmp_path / "run.yaml"
        explicit.write_text("train:\n  epochs: 5\n", encoding="utf-8")
        monkeypatch.setattr("laman_ric.config.CONFIG_SEARCH_PATHS", [user])

        config = RicConfig.load(explicit)
        assert config.log_level == "info"
        assert config.defaults_for("train") == {"epochs": 5, "hidden": 8}

    def test_missing_search_paths_ignored(self, tmp_path, monkeypatch):
        monkeypatch.setattr("laman_ric.config.CONFIG_SEARCH_PATHS", [tmp_path / "absent.yaml"])
        assert RicConfig.load().commands == {}

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("train: [unclosed\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            RicConfig.from_yaml(path)

    def test_top_level_list(self, tmp_path):
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            RicConfig.from_yaml(path)

    def test_sample_file_loads(self):
        sample = Path(__file__).resolve().parent.parent / "ric.sample.yaml"
        config = RicConfig.from_yaml(sample)
        assert config.defaults_for("gen-data")["n_cap"] == 16
