"""Multi-layered translation orchestration and its ablation variants.

The full pipeline fans a Latin segment out to k proposer calls, revises
each proposal, asks the filter to pick the best of the numbered candidates,
and revises the pick once more. Variants switch stages off or swap the
proposing model; single-call variants collapse to one request. All
sampling parameters ride on ChatRequest defaults (temperature 0.7, top_p 1,
zero penalties).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence

from .corpus import Corpus
from .errors import ConfigurationError, InputError, LlmError, PipelineError
from .llm import ChatRequest, ChatResponse, LlmClient
from .prompts import (
    PromptName,
    PromptRegistry,
    assemble_comparison_message,
    assemble_non_literal_message,
    assemble_revision_message,
)


class Variant(str, Enum):
    FULL = "full"
    NO_MIDDLE_REVISION = "no_middle_revision"
    NO_FINAL_REVISION = "no_final_revision"
    BASE_CANDIDATE_AGGREGATOR = "base_candidate_aggregator"
    SINGLE_AGGREGATOR_MINI = "single_aggregator_mini"
    SINGLE_FINE_TUNED = "single_fine_tuned"
    SINGLE_BASELINE = "single_baseline"


SINGLE_VARIANTS = frozenset(
    {Variant.SINGLE_AGGREGATOR_MINI, Variant.SINGLE_FINE_TUNED, Variant.SINGLE_BASELINE}
)

# The six-variant comparison set, in its canonical reporting order.
TABLE_VARIANTS = (
    Variant.FULL,
    Variant.NO_MIDDLE_REVISION,
    Variant.NO_FINAL_REVISION,
    Variant.BASE_CANDIDATE_AGGREGATOR,
    Variant.SINGLE_AGGREGATOR_MINI,
    Variant.SINGLE_FINE_TUNED,
)


class Stage(str, Enum):
    PROPOSE = "propose"
    MIDDLE_REVISE = "middle_revise"
    FILTER = "filter"
    FINAL_REVISE = "final_revise"
    NON_LITERAL = "non_literal"
    CLEAN = "clean"


@dataclass(frozen=True)
class PipelineConfig:
    """Which stages run and which model ids they call.

    Model ids are configuration, not code; the defaults are placeholders an
    operator maps onto real endpoints. ``mini_prompt`` selects the system
    prompt the ``single_aggregator_mini`` variant uses ("baseline" or
    "fine_tuned").
    """

    variant: Variant = Variant.FULL
    k: int = 5
    proposer_model: str = "proposer-fine-tuned"
    aggregator_model: str = "aggregator"
    mini_model: str = "aggregator-mini"
    mini_prompt: str = "baseline"
    max_in_flight: int = 5
    max_input_chars: int = 8000

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.k < 1:
            raise ConfigurationError("k must be >= 1")
        if self.max_in_flight < 1:
            raise ConfigurationError("max_in_flight must be >= 1")
        if self.max_input_chars < 1:
            raise ConfigurationError("max_input_chars must be >= 1")
        if self.mini_prompt not in ("baseline", "fine_tuned"):
            raise ConfigurationError(
                f"mini_prompt must be 'baseline' or 'fine_tuned', got {self.mini_prompt!r}"
            )

    @property
    def runs_middle_revision(self) -> bool:
        return self.variant in (
            Variant.FULL,
            Variant.NO_FINAL_REVISION,
            Variant.BASE_CANDIDATE_AGGREGATOR,
        )

    @property
    def runs_final_revision(self) -> bool:
        return self.variant in (
            Variant.FULL,
            Variant.NO_MIDDLE_REVISION,
            Variant.BASE_CANDIDATE_AGGREGATOR,
        )

    @property
    def propose_model(self) -> str:
        if self.variant is Variant.BASE_CANDIDATE_AGGREGATOR:
            return self.aggregator_model
        return self.proposer_model


def expected_call_count(variant: Variant | str, k: int) -> int:
    """Closed-form provider-call count for one translation."""
    variant = Variant(variant)
    if variant in SINGLE_VARIANTS:
        return 1
    if variant is Variant.NO_MIDDLE_REVISION:
        return k + 2
    if variant is Variant.NO_FINAL_REVISION:
        return 2 * k + 1
    return 2 * k + 2  # full, base_candidate_aggregator


@dataclass(frozen=True)
class StageCall:
    """One provider call: which stage issued it, with what, and the reply."""

    stage: Stage
    candidate_index: int | None
    prompt_name: PromptName
    request: ChatRequest
    response: ChatResponse

    def to_dict(self, verbose: bool = False) -> dict:
        entry = {
            "stage": self.stage.value,
            "candidate_index": self.candidate_index,
            "system_prompt": self.prompt_name.value,
            "model": self.request.model,
            "temperature": self.request.temperature,
            "top_p": self.request.top_p,
            "frequency_penalty": self.request.frequency_penalty,
            "presence_penalty": self.request.presence_penalty,
            "response_content": self.response.content,
            "response_model": self.response.model,
            "latency": self.response.latency,
            "attempt_count": self.response.attempt_count,
        }
        if verbose:
            entry["system_text"] = self.request.system
            entry["user_text"] = self.request.user
        return entry


@dataclass(frozen=True)
class TranslationTrace:
    """Complete record of one pipeline run."""

    latin: str
    variant: Variant
    candidates: tuple[str, ...]
    selected: str
    selected_candidate_index: int | None
    final: str
    non_literal: str | None
    calls: tuple[StageCall, ...]
    total_latency: float

    def to_dict(self, verbose: bool = False) -> dict:
        return {
            "latin": self.latin,
            "variant": self.variant.value,
            "candidates": list(self.candidates),
            "selected": self.selected,
            "selected_candidate_index": self.selected_candidate_index,
            "final": self.final,
            "non_literal": self.non_literal,
            "calls": [c.to_dict(verbose) for c in self.calls],
            "total_latency": self.total_latency,
        }


def _edit_distance(a: str, b: str, cap: int) -> int:
    """Levenshtein distance, giving up (returns cap + 1) once it exceeds cap."""
    if abs(len(a) - len(b)) > cap:
        return cap + 1
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        best = i
        for j, cb in enumerate(b, start=1):
            cost = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb))
            cur.append(cost)
            best = min(best, cost)
        if best > cap:
            return cap + 1
        prev = cur
    return prev[-1]


def nearest_candidate_index(
    selected: str, candidates: Sequence[str], max_relative_distance: float = 0.2
) -> int | None:
    """Audit helper: which candidate the filter most plausibly copied.

    Returns the index of the candidate closest to ``selected`` by
    normalized edit distance, or None when even the closest differs by more
    than ``max_relative_distance`` of its length (the filter paraphrased).
    """
    for i, cand in enumerate(candidates):
        if cand == selected:
            return i
    best_index = None
    best_norm = max_relative_distance
    for i, cand in enumerate(candidates):
        longest = max(len(selected), len(cand), 1)
        cap = int(best_norm * longest)
        dist = _edit_distance(selected, cand, cap)
        norm = dist / longest
        if norm <= best_norm:
            best_norm = norm
            best_index = i
    return best_index


def _strip_translation_label(content: str) -> str:
    return content.removeprefix("Translation: ")


class Translator:
    """Immutable orchestrator bound to a client, registry, and config.

    Instances are safe to share; concurrent translate calls are independent.
    The only threading happens inside the client's complete_many.
    """

    def __init__(self, client: LlmClient, prompts: PromptRegistry, config: PipelineConfig):
        self.client = client
        self.prompts = prompts
        self.config = config

    def _request(self, prompt: PromptName, model: str, user: str) -> ChatRequest:
        return ChatRequest(model=model, system=self.prompts.text(prompt), user=user)

    def _check_input(self, latin: str) -> str:
        if not latin or not latin.strip():
            raise InputError("latin text must be non-empty")
        if len(latin) > self.config.max_input_chars:
            raise InputError(
                f"input of {len(latin)} characters exceeds the "
                f"{self.config.max_input_chars}-character limit"
            )
        return latin

    def _complete(self, stage: Stage, index: int | None, prompt: PromptName,
                  request: ChatRequest, latin: str, partial: list[StageCall]) -> StageCall:
        """Run one sequential call, wrapping failures with stage context."""
        try:
            response = self.client.complete(request)
        except LlmError as exc:
            raise PipelineError(
                f"stage {stage.value} failed: {exc}",
                stage=stage,
                candidate_index=index,
                trace=self._partial_trace(latin, partial),
            ) from exc
        return StageCall(stage, index, prompt, request, response)

    def _require_content(
        self, stage: Stage, index: int | None, content: str, latin: str,
        calls: Sequence[StageCall],
    ) -> str:
        if not content.strip():
            where = f" for candidate {index}" if index is not None else ""
            raise PipelineError(
                f"stage {stage.value} returned empty content{where}",
                stage=stage,
                candidate_index=index,
                trace=self._partial_trace(latin, calls),
            )
        return content

    def _partial_trace(self, latin: str, calls: Sequence[StageCall]) -> TranslationTrace:
        return TranslationTrace(
            latin=latin,
            variant=self.config.variant,
            candidates=(),
            selected="",
            selected_candidate_index=None,
            final="",
            non_literal=None,
            calls=tuple(calls),
            total_latency=sum(c.response.latency for c in calls),
        )

    def generate_candidate(self, latin: str, index: int) -> tuple[str, list[StageCall]]:
        """One candidate: propose, then revise when the variant keeps that stage."""
        latin = self._check_input(latin)
        if not 0 <= index < self.config.k:
            raise InputError(f"candidate index {index} outside [0, {self.config.k})")
        calls: list[StageCall] = []
        prompt = self._propose_prompt()
        request = self._request(prompt, self.config.propose_model, latin)
        calls.append(self._complete(Stage.PROPOSE, index, prompt, request, latin, calls))
        text = calls[-1].response.content
        if self.config.runs_middle_revision:
            request = self._request(
                PromptName.REVISION,
                self.config.aggregator_model,
                assemble_revision_message(latin, text),
            )
            calls.append(
                self._complete(Stage.MIDDLE_REVISE, index, PromptName.REVISION, request, latin, calls)
            )
            text = calls[-1].response.content
        return text, calls

    def _propose_prompt(self) -> PromptName:
        # Fan-out variants always propose with the fine-tuned prompt, even
        # when the aggregator model does the proposing.
        return PromptName.FINE_TUNED_SYSTEM

    def _batch(
        self,
        stage: Stage,
        prompt: PromptName,
        requests: list[ChatRequest],
        latin: str,
        prior_calls: list[StageCall],
    ) -> list[StageCall]:
        """complete_many for one per-candidate stage; order is index order."""
        results = self.client.complete_many(requests, self.config.max_in_flight)
        calls = []
        failed: tuple[int, LlmError] | None = None
        for i, result in enumerate(results):
            if isinstance(result, LlmError):
                if failed is None:
                    failed = (i, result)
                continue
            calls.append(StageCall(stage, i, prompt, requests[i], result))
        if failed is not None:
            index, error = failed
            raise PipelineError(
                f"stage {stage.value} failed for candidate {index}: {error}",
                stage=stage,
                candidate_index=index,
                trace=self._partial_trace(latin, prior_calls + calls),
            ) from error
        return calls

    def translate(self, latin: str) -> TranslationTrace:
        """Run the configured variant end to end on one segment."""
        if self.config.variant in SINGLE_VARIANTS:
            return self.translate_single(latin)
        latin = self._check_input(latin)
        start = time.perf_counter()
        config = self.config
        k = config.k

        propose_prompt = self._propose_prompt()
        propose_requests = [
            self._request(propose_prompt, config.propose_model, latin) for _ in range(k)
        ]
        propose_calls = self._batch(Stage.PROPOSE, propose_prompt, propose_requests, latin, [])
        proposals = [
            self._require_content(Stage.PROPOSE, i, call.response.content, latin, propose_calls)
            for i, call in enumerate(propose_calls)
        ]

        if config.runs_middle_revision:
            revise_requests = [
                self._request(
                    PromptName.REVISION,
                    config.aggregator_model,
                    assemble_revision_message(latin, proposal),
                )
                for proposal in proposals
            ]
            revise_calls = self._batch(
                Stage.MIDDLE_REVISE, PromptName.REVISION, revise_requests, latin, propose_calls
            )
            candidates = [
                self._require_content(
                    Stage.MIDDLE_REVISE, i, call.response.content, latin,
                    propose_calls + revise_calls,
                )
                for i, call in enumerate(revise_calls)
            ]
            candidate_calls = [
                call for i in range(k) for call in (propose_calls[i], revise_calls[i])
            ]
        else:
            candidates = proposals
            candidate_calls = list(propose_calls)

        calls = list(candidate_calls)
        filter_request = self._request(
            PromptName.FINAL_FILTER,
            config.aggregator_model,
            assemble_comparison_message(latin, candidates, k),
        )
        calls.append(
            self._complete(Stage.FILTER, None, PromptName.FINAL_FILTER, filter_request, latin, calls)
        )
        selected = self._require_content(
            Stage.FILTER, None, calls[-1].response.content, latin, calls
        )

        final = selected
        if config.runs_final_revision:
            final_request = self._request(
                PromptName.REVISION,
                config.aggregator_model,
                assemble_revision_message(latin, selected),
            )
            calls.append(
                self._complete(Stage.FINAL_REVISE, None, PromptName.REVISION, final_request, latin, calls)
            )
            final = self._require_content(
                Stage.FINAL_REVISE, None, calls[-1].response.content, latin, calls
            )

        return TranslationTrace(
            latin=latin,
            variant=config.variant,
            candidates=tuple(candidates),
            selected=selected,
            selected_candidate_index=nearest_candidate_index(selected, candidates),
            final=final,
            non_literal=None,
            calls=tuple(calls),
            total_latency=time.perf_counter() - start,
        )

    def translate_single(self, latin: str) -> TranslationTrace:
        """Single-call variants: one request, no fan-out, no revision."""
        config = self.config
        if config.variant not in SINGLE_VARIANTS:
            raise ConfigurationError(
                f"translate_single requires a single_* variant, got {config.variant.value}"
            )
        latin = self._check_input(latin)
        start = time.perf_counter()
        if config.variant is Variant.SINGLE_FINE_TUNED:
            prompt, model = PromptName.FINE_TUNED_SYSTEM, config.proposer_model
        elif config.variant is Variant.SINGLE_BASELINE:
            prompt, model = PromptName.BASELINE_TRANSLATOR, config.aggregator_model
        else:  # single_aggregator_mini
            prompt = (
                PromptName.FINE_TUNED_SYSTEM
                if config.mini_prompt == "fine_tuned"
                else PromptName.BASELINE_TRANSLATOR
            )
            model = config.mini_model
        request = self._request(prompt, model, latin)
        call = self._complete(Stage.PROPOSE, 0, prompt, request, latin, [])
        final = self._require_content(Stage.PROPOSE, None, call.response.content, latin, [call])
        return TranslationTrace(
            latin=latin,
            variant=config.variant,
            candidates=(final,),
            selected=final,
            selected_candidate_index=0,
            final=final,
            non_literal=None,
            calls=(call,),
            total_latency=time.perf_counter() - start,
        )

    def translate_non_literal(self, latin: str, literal: str) -> str:
        """Readability pass over an existing literal translation.

        Client errors propagate unwrapped; any leading "Translation: "
        label on the reply is stripped.
        """
        if not latin or not literal:
            raise InputError("latin and literal must both be non-empty")
        request = self._request(
            PromptName.NON_LITERAL,
            self.config.aggregator_model,
            assemble_non_literal_message(latin, literal),
        )
        response = self.client.complete(request)
        return _strip_translation_label(response.content)

    def clean_output(self, raw: str) -> str:
        """Post-process raw open-model output down to just the translation.

        Used by evaluation flows only; never part of translate itself.
        """
        if not raw or not raw.strip():
            raise InputError("raw output must be non-empty")
        request = self._request(PromptName.OUTPUT_CLEANER, self.config.aggregator_model, raw)
        return self.client.complete(request).content


@dataclass(frozen=True)
class SegmentResult:
    """Per-segment outcome inside an ablation run (the trace summary)."""

    segment_id: str
    final: str
    call_count: int
    latency: float
    selected_candidate_index: int | None


@dataclass
class VariantRun:
    variant: Variant
    results: list[SegmentResult] = field(default_factory=list)
    failures: list[tuple[str, str]] = field(default_factory=list)

    @property
    def call_count(self) -> int:
        return sum(r.call_count for r in self.results)

    @property
    def total_latency(self) -> float:
        return sum(r.latency for r in self.results)

    def hypotheses(self) -> list[str]:
        return [r.final for r in self.results]


def run_ablation(
    client: LlmClient,
    prompts: PromptRegistry,
    base_config: PipelineConfig,
    corpus: Corpus,
    variants: Sequence[Variant | str],
) -> dict[Variant, VariantRun]:
    """Translate every segment under every variant, independently.

    Per-segment failures are recorded and the run continues. The response
    cache must be off: variants sharing cached intermediate results would
    not be an ablation.
    """
    if len(corpus) == 0:
        raise InputError("ablation requires a non-empty corpus")
    if client.cache_enabled:
        raise ConfigurationError(
            "disable the response cache for ablation runs; variants must not share results"
        )
    runs: dict[Variant, VariantRun] = {}
    for raw_variant in variants:
        variant = Variant(raw_variant)
        translator = Translator(client, prompts, replace(base_config, variant=variant))
        run = VariantRun(variant=variant)
        for segment in corpus:
            try:
                trace = translator.translate(segment.latin)
            except (PipelineError, LlmError) as exc:
                run.failures.append((segment.id, str(exc)))
                continue
            run.results.append(
                SegmentResult(
                    segment_id=segment.id,
                    final=trace.final,
                    call_count=len(trace.calls),
                    latency=trace.total_latency,
                    selected_candidate_index=trace.selected_candidate_index,
                )
            )
        runs[variant] = run
    return runs
