"""Deterministic scripted backend for offline tests and the ``--mock`` flag.

A MockScript is an ordered rule list; the first rule whose matchers all
accept a request wins, otherwise the script's default answer is used.
Rules can inject transient or permanent faults and serve a sequence of
contents. Replaying the same request sequence yields the same response
sequence byte-for-byte.
"""

from __future__ import annotations

import json
import random
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigurationError, PermanentProviderError, TransientProviderError
from .llm import ChatRequest


@dataclass
class MockRule:
    """Matchers are ANDed; any left as None matches everything."""

    content: str | None = None
    contents: list[str] | None = None  # served in match order, last one repeats
    model: str | None = None
    system_prefix: str | None = None
    user_substring: str | None = None
    fail_transient_n_times: int = 0
    fail_permanently: bool = False
    _matches_seen: int = field(default=0, repr=False)
    _faults_left: int = field(default=-1, repr=False)

    def __post_init__(self):
        if self._faults_left < 0:
            self._faults_left = self.fail_transient_n_times

    def matches(self, request: ChatRequest) -> bool:
        if self.model is not None and request.model != self.model:
            return False
        if self.system_prefix is not None and not request.system.startswith(self.system_prefix):
            return False
        if self.user_substring is not None and self.user_substring not in request.user:
            return False
        return True

    def _next_content(self) -> str:
        if self.contents:
            idx = min(self._matches_seen, len(self.contents) - 1)
            return self.contents[idx]
        return self.content if self.content is not None else ""


class MockScript:
    """Immutable-by-convention script: construct, hand to a MockBackend."""

    def __init__(
        self,
        rules: list[MockRule] | None = None,
        default: str = "OK",
        latency_range: tuple[float, float] | None = None,
        seed: int = 0,
    ):
        self.rules = list(rules or [])
        self.default = default
        self.latency_range = latency_range
        self.seed = seed

    @classmethod
    def from_file(cls, path: str | Path) -> "MockScript":
        """Load a script from JSON: {default, latency_ms: [lo, hi], seed, rules: [...]}."""
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot load mock script {path}: {exc}") from exc
        known = {
            "content",
            "contents",
            "model",
            "system_prefix",
            "user_substring",
            "fail_transient_n_times",
            "fail_permanently",
        }
        rules = []
        for i, entry in enumerate(raw.get("rules", [])):
            unknown = set(entry) - known
            if unknown:
                raise ConfigurationError(
                    f"mock script {path}: rule {i} has unknown keys {sorted(unknown)}"
                )
            rules.append(MockRule(**entry))
        latency = None
        if "latency_ms" in raw:
            lo, hi = raw["latency_ms"]
            latency = (lo / 1000.0, hi / 1000.0)
        return cls(
            rules=rules,
            default=raw.get("default", "OK"),
            latency_range=latency,
            seed=raw.get("seed", 0),
        )


class MockBackend:
    """Backend that replays a MockScript and records all traffic.

    ``calls`` lists every attempt in arrival order (retries included);
    ``max_concurrency`` tracks the largest number of in-flight sends seen,
    which lets tests assert throttling.
    """

    def __init__(self, script: MockScript):
        self._script = script
        self._rng = random.Random(script.seed)
        self._lock = threading.Lock()
        self._in_flight = 0
        self.calls: list[ChatRequest] = []
        self.max_concurrency = 0

    def send(self, request: ChatRequest, timeout: float) -> tuple[str, str]:
        with self._lock:
            self.calls.append(request)
            self._in_flight += 1
            self.max_concurrency = max(self.max_concurrency, self._in_flight)
            rule = next((r for r in self._script.rules if r.matches(request)), None)
            outcome: Exception | str
            if rule is None:
                outcome = self._script.default
            elif rule.fail_permanently:
                outcome = PermanentProviderError(
                    f"mock: permanent failure for model {request.model!r}"
                )
            elif rule._faults_left > 0:
                rule._faults_left -= 1
                outcome = TransientProviderError("mock: injected transient failure")
            else:
                outcome = rule._next_content()
                rule._matches_seen += 1
            delay = 0.0
            if self._script.latency_range is not None:
                delay = self._rng.uniform(*self._script.latency_range)
        try:
            if delay > 0:
                time.sleep(delay)
            if isinstance(outcome, Exception):
                raise outcome
            return outcome, request.model
        finally:
            with self._lock:
                self._in_flight -= 1
