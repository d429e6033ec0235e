"""Provider-agnostic chat-completion client.

One HTTP backend speaks the common chat-completions wire shape
(``POST {base_url}/chat/completions``), which covers both hosted APIs and
locally served open models. Retries use exponential backoff with full
jitter; an optional content-keyed cache can bypass the network for repeated
requests.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, Sequence

import requests

from .errors import (
    ConfigurationError,
    LlmError,
    PermanentProviderError,
    RetryExhaustedError,
    TransientProviderError,
)

DEFAULT_TEMPERATURE = 0.7
DEFAULT_TOP_P = 1.0
DEFAULT_API_KEY_ENV = "LITERA_API_KEY"


@dataclass(frozen=True)
class ChatRequest:
    """One chat-completion exchange to be sent: model, prompts, sampling."""

    model: str
    system: str
    user: str
    temperature: float = DEFAULT_TEMPERATURE
    top_p: float = DEFAULT_TOP_P
    frequency_penalty: float = 0.0
    presence_penalty: float = 0.0

    def __post_init__(self):
        if not self.model:
            raise ValueError("ChatRequest.model must be non-empty")
        if not self.system or not self.user:
            raise ValueError("ChatRequest.system and ChatRequest.user must be non-empty")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature {self.temperature} outside [0, 2]")
        if not 0.0 < self.top_p <= 1.0:
            raise ValueError(f"top_p {self.top_p} outside (0, 1]")


@dataclass(frozen=True)
class ChatResponse:
    """The assistant message plus transport bookkeeping.

    ``content`` is the raw assistant text; the only client-side change is
    trailing-newline normalization. ``attempt_count`` includes the
    successful attempt.
    """

    content: str
    model: str
    latency: float
    attempt_count: int


@dataclass(frozen=True)
class ProviderConfig:
    base_url: str = ""
    api_key_env: str = DEFAULT_API_KEY_ENV
    timeout: float = 60.0
    max_retries: int = 3
    backoff_base: float = 0.5
    cache_enabled: bool = False

    def __post_init__(self):
        if self.max_retries < 0:
            raise ConfigurationError("max_retries must be >= 0")
        if self.timeout <= 0:
            raise ConfigurationError("timeout must be > 0")
        if self.backoff_base < 0:
            raise ConfigurationError("backoff_base must be >= 0")


def cache_key(request: ChatRequest) -> str:
    """Stable content hash over every field that influences the response."""
    payload = json.dumps(
        [
            request.model,
            request.system,
            request.user,
            request.temperature,
            request.top_p,
            request.frequency_penalty,
            request.presence_penalty,
        ],
        ensure_ascii=False,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class Backend(Protocol):
    """Transport under the client: one request in, (content, model) out.

    Implementations raise TransientProviderError for retryable failures and
    PermanentProviderError otherwise.
    """

    def send(self, request: ChatRequest, timeout: float) -> tuple[str, str]: ...


class HttpBackend:
    """Chat-completions HTTP transport with bearer-token auth."""

    def __init__(self, config: ProviderConfig):
        if not config.base_url:
            raise ConfigurationError("provider base_url is not configured")
        api_key = os.environ.get(config.api_key_env, "")
        if not api_key:
            raise ConfigurationError(
                f"environment variable {config.api_key_env} is not set; "
                "an API key is required for the HTTP provider"
            )
        self._url = config.base_url.rstrip("/") + "/chat/completions"
        self._headers = {
            "Authorization": f"Bearer {api_key}",
            "Content-Type": "application/json",
        }
        self._session = requests.Session()

    def send(self, request: ChatRequest, timeout: float) -> tuple[str, str]:
        body = {
            "model": request.model,
            "messages": [
                {"role": "system", "content": request.system},
                {"role": "user", "content": request.user},
            ],
            "temperature": request.temperature,
            "top_p": request.top_p,
            "frequency_penalty": request.frequency_penalty,
            "presence_penalty": request.presence_penalty,
        }
        try:
            resp = self._session.post(self._url, json=body, headers=self._headers, timeout=timeout)
        except requests.Timeout as exc:
            raise TransientProviderError(f"request to {self._url} timed out") from exc
        except requests.ConnectionError as exc:
            raise TransientProviderError(f"cannot reach {self._url}: {exc}") from exc
        if resp.status_code == 429 or resp.status_code >= 500:
            raise TransientProviderError(f"HTTP {resp.status_code} from provider: {resp.text[:200]}")
        if resp.status_code >= 400:
            raise PermanentProviderError(f"HTTP {resp.status_code} from provider: {resp.text[:200]}")
        try:
            data = resp.json()
            content = data["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise PermanentProviderError(f"malformed provider response: {exc}") from exc
        return content, data.get("model", request.model)


def _normalize_content(content: str) -> str:
    return content.rstrip("\r\n")


class LlmClient:
    """Thread-safe client adding retries, ordering, and the optional cache.

    ``sleep`` and ``rng`` exist so tests can collapse backoff delays.
    """

    def __init__(
        self,
        backend: Backend,
        config: ProviderConfig | None = None,
        *,
        cache_dir: str | Path | None = None,
        sleep=time.sleep,
        rng: random.Random | None = None,
    ):
        self._backend = backend
        self._config = config or ProviderConfig()
        self._sleep = sleep
        self._rng = rng or random.Random()
        self._cache: dict[str, ChatResponse] | None = (
            {} if self._config.cache_enabled else None
        )
        self._cache_dir = Path(cache_dir) if cache_dir and self._config.cache_enabled else None
        self._lock = threading.Lock()

    @property
    def config(self) -> ProviderConfig:
        return self._config

    @property
    def cache_enabled(self) -> bool:
        return self._cache is not None

    def complete(self, request: ChatRequest) -> ChatResponse:
        """Send one request, retrying transient failures with jittered backoff."""
        key = cache_key(request) if self._cache is not None else None
        if key is not None:
            cached = self._cache_get(key)
            if cached is not None:
                return cached

        start = time.perf_counter()
        attempts = 0
        while True:
            attempts += 1
            try:
                content, model = self._backend.send(request, self._config.timeout)
                break
            except TransientProviderError as exc:
                if attempts > self._config.max_retries:
                    raise RetryExhaustedError(
                        f"giving up after {attempts} attempts: {exc}",
                        attempts=attempts,
                        last_error=exc,
                    ) from exc
                delay = self._rng.uniform(0, self._config.backoff_base * 2 ** (attempts - 1))
                if delay > 0:
                    self._sleep(delay)

        response = ChatResponse(
            content=_normalize_content(content),
            model=model,
            latency=time.perf_counter() - start,
            attempt_count=attempts,
        )
        if key is not None:
            self._cache_put(key, response)
        return response

    def complete_many(
        self, requests_: Sequence[ChatRequest], max_in_flight: int
    ) -> list[ChatResponse | LlmError]:
        """Run requests concurrently, at most ``max_in_flight`` at a time.

        The result list is index-aligned with the input regardless of
        completion order; a failed request leaves its error at its index
        while the others still complete.
        """
        if max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")
        results: list[ChatResponse | LlmError] = [None] * len(requests_)  # type: ignore[list-item]
        with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
            futures = [pool.submit(self.complete, req) for req in requests_]
            for i, future in enumerate(futures):
                try:
                    results[i] = future.result()
                except LlmError as exc:
                    results[i] = exc
        return results

    def _cache_get(self, key: str) -> ChatResponse | None:
        with self._lock:
            assert self._cache is not None
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        if self._cache_dir is not None:
            path = self._cache_dir / f"{key}.json"
            if path.exists():
                raw = json.loads(path.read_text(encoding="utf-8"))
                hit = ChatResponse(**raw)
                with self._lock:
                    self._cache[key] = hit
                return hit
        return None

    def _cache_put(self, key: str, response: ChatResponse) -> None:
        with self._lock:
            assert self._cache is not None
            self._cache[key] = response
        if self._cache_dir is not None:
            self._cache_dir.mkdir(parents=True, exist_ok=True)
            payload = {
                "content": response.content,
                "model": response.model,
                "latency": response.latency,
                "attempt_count": response.attempt_count,
            }
            (self._cache_dir / f"{key}.json").write_text(
                json.dumps(payload, ensure_ascii=False), encoding="utf-8"
            )
