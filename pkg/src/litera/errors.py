"""Exception hierarchy shared across the package."""

from __future__ import annotations


class LiteraError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(LiteraError):
    """Invalid or incomplete configuration, detected before any work starts."""


class InputError(LiteraError):
    """Caller-supplied input rejected before any provider call is made."""


class CorpusError(LiteraError):
    """Malformed corpus file or segment; messages carry path and line info."""


class LlmError(LiteraError):
    """Base class for provider and transport failures."""


class TransientProviderError(LlmError):
    """Rate limit, 5xx, or timeout; the request may be retried."""


class PermanentProviderError(LlmError):
    """Non-retryable provider failure (auth, other 4xx, malformed reply)."""


class RetryExhaustedError(LlmError):
    """All retry attempts for a transient failure were consumed."""

    def __init__(self, message: str, attempts: int, last_error: Exception | None = None):
        super().__init__(message)
        self.attempts = attempts
        self.last_error = last_error


class PipelineError(LiteraError):
    """A pipeline stage failed; carries whatever completed before the failure.

    ``trace`` is a partial TranslationTrace (``final`` may be empty),
    ``stage`` names the failing stage and ``candidate_index`` is set when the
    failure happened inside a per-candidate call.
    """

    def __init__(self, message: str, stage=None, candidate_index=None, trace=None):
        super().__init__(message)
        self.stage = stage
        self.candidate_index = candidate_index
        self.trace = trace


class ScorerError(LiteraError):
    """External-scorer runtime failure (process died, endpoint unreachable)."""


class ScorerConfigError(ScorerError):
    """External scorer is not configured or points at nothing usable."""


class ScorerProtocolError(ScorerError):
    """External scorer produced output that violates the line protocol."""
