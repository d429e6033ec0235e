"""Layered application configuration: YAML file, environment, CLI flags.

Precedence, lowest to highest: built-in defaults, config file, environment
variables, command-line flags. Every field has a default except the
provider credential, which always comes from the environment variable named
by ``provider.api_key_env``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Mapping

import yaml

from .errors import ConfigurationError
from .external import ScorerConfig
from .llm import ProviderConfig
from .pipeline import PipelineConfig

CONFIG_PATH_ENV = "LITERA_CONFIG"

# Environment overrides applied between file and flags.
_ENV_OVERRIDES = {
    "LITERA_PROVIDER_URL": ("provider", "base_url"),
    "LITERA_PROPOSER_MODEL": ("pipeline", "proposer_model"),
    "LITERA_AGGREGATOR_MODEL": ("pipeline", "aggregator_model"),
    "LITERA_VARIANT": ("pipeline", "variant"),
}


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8234
    trace_capacity: int = 256

    def __post_init__(self):
        if self.trace_capacity < 1:
            raise ConfigurationError("trace_capacity must be >= 1")


@dataclass(frozen=True)
class AppConfig:
    provider: ProviderConfig = ProviderConfig()
    pipeline: PipelineConfig = PipelineConfig()
    scorer: ScorerConfig | None = None
    service: ServiceConfig = ServiceConfig()
    prompt_override_dir: Path | None = None
    cache_dir: Path | None = None


def _build(cls, section: Mapping[str, Any], where: str):
    names = {f.name for f in fields(cls)}
    unknown = set(section) - names
    if unknown:
        raise ConfigurationError(f"unknown key(s) in {where}: {sorted(unknown)}")
    try:
        return cls(**section)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"invalid {where} configuration: {exc}") from exc


def load_config(
    path: str | Path | None = None,
    *,
    env: Mapping[str, str] | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> AppConfig:
    """Resolve the effective configuration.

    ``overrides`` maps dotted keys ("provider.base_url") to values and has
    the highest precedence; it is how CLI flags land here.
    """
    env = os.environ if env is None else env
    if path is None:
        path = env.get(CONFIG_PATH_ENV) or None

    raw: dict[str, Any] = {}
    if path is not None:
        try:
            loaded = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
        except yaml.YAMLError as exc:
            raise ConfigurationError(f"config file {path} is not valid YAML: {exc}") from exc
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            raise ConfigurationError(f"config file {path} must contain a mapping at the top level")
        raw = loaded

    known_sections = {"provider", "pipeline", "scorer", "service", "prompt_override_dir", "cache_dir"}
    unknown = set(raw) - known_sections
    if unknown:
        raise ConfigurationError(f"unknown top-level config key(s): {sorted(unknown)}")

    sections: dict[str, dict[str, Any]] = {}
    for name in ("provider", "pipeline", "scorer", "service"):
        section = raw.get(name) or {}
        if not isinstance(section, dict):
            raise ConfigurationError(f"config section {name!r} must be a mapping")
        sections[name] = dict(section)

    for var, (section, key) in _ENV_OVERRIDES.items():
        if env.get(var):
            sections[section][key] = env[var]

    scalar: dict[str, Any] = {
        "prompt_override_dir": raw.get("prompt_override_dir"),
        "cache_dir": raw.get("cache_dir"),
    }
    for dotted, value in (overrides or {}).items():
        if value is None:
            continue
        if "." in dotted:
            section, key = dotted.split(".", 1)
            if section not in sections:
                raise ConfigurationError(f"unknown config override {dotted!r}")
            sections[section][key] = value
        elif dotted in scalar:
            scalar[dotted] = value
        else:
            raise ConfigurationError(f"unknown config override {dotted!r}")

    scorer = None
    if sections["scorer"]:
        scorer = _build(ScorerConfig, sections["scorer"], "scorer")
    return AppConfig(
        provider=_build(ProviderConfig, sections["provider"], "provider"),
        pipeline=_build(PipelineConfig, sections["pipeline"], "pipeline"),
        scorer=scorer,
        service=_build(ServiceConfig, sections["service"], "service"),
        prompt_override_dir=Path(scalar["prompt_override_dir"]) if scalar["prompt_override_dir"] else None,
        cache_dir=Path(scalar["cache_dir"]) if scalar["cache_dir"] else None,
    )


def with_variant(config: AppConfig, variant: str) -> AppConfig:
    return replace(config, pipeline=replace(config.pipeline, variant=variant))
