"""Config layering: defaults, YAML file, environment, flag overrides."""

from __future__ import annotations

import pytest

from litera.config import AppConfig, load_config, with_variant
from litera.errors import ConfigurationError
from litera.pipeline import Variant

YAML = """
provider:
  base_url: https://api.example.test/v1
  timeout: 30
  max_retries: 2
pipeline:
  variant: no_middle_revision
  k: 3
  proposer_model: my-ft-model
service:
  port: 9999
scorer:
  command: /opt/scorer
  name: LEARNED
cache_dir: /tmp/litera-cache
"""


class TestDefaults:
    def test_no_file_needed(self):
        config = load_config(env={})
        assert config.provider.api_key_env == "LITERA_API_KEY"
        assert config.pipeline.variant is Variant.FULL
        assert config.pipeline.k == 5
        assert config.pipeline.proposer_model == "proposer-fine-tuned"
        assert config.pipeline.aggregator_model == "aggregator"
        assert config.scorer is None
        assert config.provider.cache_enabled is False

    def test_every_documented_default_is_constructible(self):
        assert isinstance(AppConfig(), AppConfig)


class TestFile:
    def test_yaml_sections(self, tmp_path):
        path = tmp_path / "litera.yaml"
        path.write_text(YAML, encoding="utf-8")
        config = load_config(path, env={})
        assert config.provider.base_url == "https://api.example.test/v1"
        assert config.provider.timeout == 30
        assert config.pipeline.variant is Variant.NO_MIDDLE_REVISION
        assert config.pipeline.k == 3
        assert config.service.port == 9999
        assert config.scorer.command == "/opt/scorer"
        assert config.scorer.name == "LEARNED"
        assert str(config.cache_dir) == "/tmp/litera-cache"

    def test_config_path_from_environment(self, tmp_path):
        path = tmp_path / "litera.yaml"
        path.write_text("pipeline:\n  k: 2\n", encoding="utf-8")
        config = load_config(env={"LITERA_CONFIG": str(path)})
        assert config.pipeline.k == 2

    def test_unknown_top_level_key(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("providr:\n  base_url: x\n", encoding="utf-8")
        with pytest.raises(ConfigurationError, match="providr"):
            load_config(path, env={})

    def test_unknown_section_key(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("pipeline:\n  kk: 3\n", encoding="utf-8")
        with pytest.raises(ConfigurationError, match="kk"):
            load_config(path, env={})

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("pipeline: [unclosed", encoding="utf-8")
        with pytest.raises(ConfigurationError, match="YAML"):
            load_config(path, env={})

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError, match="cannot read"):
            load_config(tmp_path / "none.yaml", env={})

    def test_invalid_field_value(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("pipeline:\n  k: 0\n", encoding="utf-8")
        with pytest.raises(ConfigurationError):
            load_config(path, env={})


class TestPrecedence:
    def test_env_overrides_file(self, tmp_path):
        path = tmp_path / "litera.yaml"
        path.write_text("provider:\n  base_url: from-file\n", encoding="utf-8")
        config = load_config(path, env={"LITERA_PROVIDER_URL": "from-env"})
        assert config.provider.base_url == "from-env"

    def test_flags_override_env(self, tmp_path):
        config = load_config(
            env={"LITERA_PROVIDER_URL": "from-env"},
            overrides={"provider.base_url": "from-flag"},
        )
        assert config.provider.base_url == "from-flag"

    def test_env_variant_override(self):
        config = load_config(env={"LITERA_VARIANT": "single_fine_tuned"})
        assert config.pipeline.variant is Variant.SINGLE_FINE_TUNED

    def test_none_overrides_ignored(self):
        config = load_config(env={}, overrides={"provider.base_url": None})
        assert config.provider.base_url == ""

    def test_unknown_override_rejected(self):
        with pytest.raises(ConfigurationError):
            load_config(env={}, overrides={"provider.nope": 1})


def test_with_variant_helper():
    config = with_variant(AppConfig(), "single_baseline")
    assert config.pipeline.variant is Variant.SINGLE_BASELINE
