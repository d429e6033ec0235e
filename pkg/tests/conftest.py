"""Shared fixtures: a prompt registry, mock scripts, and small corpora."""

from __future__ import annotations

import pytest

from litera.corpus import Corpus, Era, ParallelSegment
from litera.llm import LlmClient, ProviderConfig
from litera.mock import MockBackend, MockRule, MockScript
from litera.pipeline import PipelineConfig, Translator
from litera.prompts import PromptRegistry

# Openings of the registered prompts, used as mock matchers.
PROPOSE_PREFIX = "You are an advanced Latin translator"
REVISION_PREFIX = "You are a highly critical"
FILTER_PREFIX = "You are the final filter"
NON_LITERAL_PREFIX = "When provided with Latin text"
BASELINE_PREFIX = "You are a Latin translator."
CLEANER_PREFIX = "You are a post-processing agent"


@pytest.fixture(scope="session")
def registry() -> PromptRegistry:
    return PromptRegistry()


def pipeline_script(filter_content: str = "R3", **kwargs) -> MockScript:
    """Script with distinguishable per-stage answers.

    Propose calls get P1, P2, ...; revision calls get R1, R2, ... in
    arrival order; the filter answers ``filter_content``.
    """
    return MockScript(
        rules=[
            MockRule(system_prefix=PROPOSE_PREFIX, contents=[f"P{i}" for i in range(1, 31)]),
            MockRule(system_prefix=REVISION_PREFIX, contents=[f"R{i}" for i in range(1, 41)]),
            MockRule(system_prefix=FILTER_PREFIX, content=filter_content),
            MockRule(system_prefix=NON_LITERAL_PREFIX, content="Translation: a smoother reading"),
            MockRule(system_prefix=BASELINE_PREFIX, content="B1"),
            MockRule(system_prefix=CLEANER_PREFIX, content="cleaned"),
        ],
        default="D",
        **kwargs,
    )


@pytest.fixture
def make_client():
    """Factory for (client, backend) pairs over a MockScript; no real sleeping."""

    def make(script: MockScript | None = None, **config_kwargs) -> tuple[LlmClient, MockBackend]:
        backend = MockBackend(script if script is not None else MockScript())
        config_kwargs.setdefault("backoff_base", 0.0)
        client = LlmClient(backend, ProviderConfig(**config_kwargs))
        return client, backend

    return make


@pytest.fixture
def make_translator(make_client, registry):
    """Factory for (translator, backend) with a pipeline-shaped mock script."""

    def make(script: MockScript | None = None, **config_kwargs):
        client, backend = make_client(script if script is not None else pipeline_script())
        config = PipelineConfig(**config_kwargs)
        return Translator(client, registry, config), backend

    return make


def small_corpus(n: int = 3, era: Era = Era.UNSPECIFIED) -> Corpus:
    segments = [
        ParallelSegment(
            id=f"s-{i:03d}",
            latin=f"Gallia est omnis divisa in partes {i}",
            english=f"All Gaul is divided into {i} parts",
            era=era,
        )
        for i in range(1, n + 1)
    ]
    return Corpus(name="small", segments=segments)
