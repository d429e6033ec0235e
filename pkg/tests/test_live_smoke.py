"""Optional live smoke test against a real chat-completions endpoint.

Excluded from normal runs: it only executes when LITERA_LIVE_BASE_URL is
set (plus the API key named by LITERA_API_KEY or a custom api_key_env).
No score assertion; this only proves the wiring end to end.
"""

from __future__ import annotations

import os
from importlib import resources

import pytest

from litera.corpus import load_corpus
from litera.llm import HttpBackend, LlmClient, ProviderConfig
from litera.pipeline import PipelineConfig, Translator
from litera.prompts import PromptRegistry

LIVE_URL = os.environ.get("LITERA_LIVE_BASE_URL", "")

pytestmark = pytest.mark.skipif(
    not LIVE_URL, reason="live smoke test: set LITERA_LIVE_BASE_URL to enable"
)


def test_criterion_10_live_full_variant_on_demo_fixture(tmp_path):
    source = resources.files("litera") / "data" / "tacitus_demo.jsonl"
    demo = tmp_path / "tacitus_demo.jsonl"
    demo.write_text(source.read_text(encoding="utf-8"), encoding="utf-8")
    segment = load_corpus(demo).segments[0]

    config = ProviderConfig(
        base_url=LIVE_URL,
        timeout=float(os.environ.get("LITERA_LIVE_TIMEOUT", "120")),
    )
    pipeline = PipelineConfig(
        variant="full",
        proposer_model=os.environ.get("LITERA_LIVE_PROPOSER_MODEL", "proposer-fine-tuned"),
        aggregator_model=os.environ.get("LITERA_LIVE_AGGREGATOR_MODEL", "aggregator"),
    )
    client = LlmClient(HttpBackend(config), config)
    translator = Translator(client, PromptRegistry(), pipeline)

    trace = translator.translate(segment.latin)
    assert trace.final.strip()
    assert len(trace.calls) == 12
    print(f"ACCEPTANCE 10: PASS - live full-variant translation produced {len(trace.calls)} calls")
    print(trace.final)
