"""LITERA: multi-layered Latin-to-English translation pipeline and evaluation tools."""

from .corpus import (
    Corpus,
    Era,
    FineTuneJobSpec,
    FineTuneRecord,
    ParallelSegment,
    export_finetune,
    load_corpus,
    load_finetune,
    save_corpus,
)
from .errors import (
    ConfigurationError,
    CorpusError,
    InputError,
    LiteraError,
    LlmError,
    PermanentProviderError,
    PipelineError,
    RetryExhaustedError,
    ScorerConfigError,
    ScorerError,
    ScorerProtocolError,
    TransientProviderError,
)
from .external import ScorerConfig, score_external
from .llm import ChatRequest, ChatResponse, HttpBackend, LlmClient, ProviderConfig, cache_key
from .metrics import BleuScore, TokenSequence, bleu_corpus, tokenize_13a
from .mock import MockBackend, MockRule, MockScript
from .pipeline import (
    PipelineConfig,
    Stage,
    StageCall,
    TABLE_VARIANTS,
    TranslationTrace,
    Translator,
    Variant,
    expected_call_count,
    run_ablation,
)
from .prompts import (
    PromptName,
    PromptRegistry,
    PromptTemplate,
    assemble_comparison_message,
    assemble_non_literal_message,
    assemble_revision_message,
    get_prompt,
)
from .report import EvalReport, ReportRow, build_report, format_table, render_figure, write_json

__version__ = "0.1.0"
