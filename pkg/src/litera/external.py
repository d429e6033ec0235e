"""External learned-metric scorer protocol (subprocess and HTTP modes).

Learned metrics are never reimplemented here; they run behind a tiny
line-oriented protocol. Subprocess mode launches the configured executable
with no arguments, writes ``candidate<TAB>reference`` lines to its stdin
(tabs/newlines inside text become single spaces first) and reads one
decimal per line back. HTTP mode posts all pairs to ``{url}/score``.
"""

from __future__ import annotations

import subprocess
from dataclasses import dataclass
from typing import Sequence

import requests

from .errors import InputError, ScorerConfigError, ScorerError, ScorerProtocolError


@dataclass(frozen=True)
class ScorerConfig:
    command: str | None = None  # executable path, launched with no arguments
    url: str | None = None  # HTTP base URL exposing POST /score
    name: str = "BLEURT"
    timeout: float = 300.0


def _sanitize(text: str) -> str:
    return text.replace("\t", " ").replace("\r", " ").replace("\n", " ")


def _parse_lines(output: str, expected: int) -> list[float]:
    lines = [line for line in output.split("\n") if line.strip()]
    if len(lines) != expected:
        raise ScorerProtocolError(f"scorer returned {len(lines)} scores for {expected} pairs")
    scores = []
    for i, line in enumerate(lines, start=1):
        try:
            scores.append(float(line.strip()))
        except ValueError:
            raise ScorerProtocolError(f"scorer output line {i} is not a decimal: {line!r}") from None
    return scores


def _score_subprocess(config: ScorerConfig, pairs: list[tuple[str, str]]) -> list[float]:
    payload = "".join(f"{c}\t{r}\n" for c, r in pairs)
    try:
        proc = subprocess.run(
            [config.command],
            input=payload,
            capture_output=True,
            text=True,
            timeout=config.timeout,
        )
    except FileNotFoundError as exc:
        raise ScorerConfigError(f"scorer executable not found: {config.command}") from exc
    except PermissionError as exc:
        raise ScorerConfigError(f"scorer executable not runnable: {config.command}") from exc
    except subprocess.TimeoutExpired as exc:
        raise ScorerError(f"scorer timed out after {config.timeout}s") from exc
    if proc.returncode != 0:
        raise ScorerError(
            f"scorer exited with status {proc.returncode}: {proc.stderr.strip()[:200]}"
        )
    return _parse_lines(proc.stdout, len(pairs))


def _score_http(config: ScorerConfig, pairs: list[tuple[str, str]]) -> list[float]:
    url = config.url.rstrip("/") + "/score"
    body = {"pairs": [{"candidate": c, "reference": r} for c, r in pairs]}
    try:
        resp = requests.post(url, json=body, timeout=config.timeout)
    except requests.RequestException as exc:
        raise ScorerError(f"cannot reach scorer at {url}: {exc}") from exc
    if resp.status_code != 200:
        raise ScorerError(f"scorer returned HTTP {resp.status_code}")
    try:
        scores = resp.json()["scores"]
    except (ValueError, KeyError) as exc:
        raise ScorerProtocolError(f"malformed scorer response: {exc}") from exc
    if not isinstance(scores, list) or len(scores) != len(pairs):
        got = len(scores) if isinstance(scores, list) else type(scores).__name__
        raise ScorerProtocolError(f"scorer returned {got} scores for {len(pairs)} pairs")
    try:
        return [float(s) for s in scores]
    except (TypeError, ValueError) as exc:
        raise ScorerProtocolError(f"scorer returned a non-numeric score: {exc}") from exc


def score_external(
    config: ScorerConfig | None,
    candidates: Sequence[str],
    references: Sequence[str],
) -> tuple[list[float], float]:
    """Score candidate/reference pairs; returns per-segment scores and their mean.

    Scores may be negative; the mean is the unweighted arithmetic mean over
    segments.
    """
    if config is None or (not config.command and not config.url):
        raise ScorerConfigError("no external scorer configured (set command or url)")
    if len(candidates) != len(references):
        raise InputError(
            f"candidate/reference counts differ: {len(candidates)} vs {len(references)}"
        )
    if not candidates:
        raise InputError("cannot score an empty pair list")
    pairs = [(_sanitize(c), _sanitize(r)) for c, r in zip(candidates, references)]
    if config.command:
        scores = _score_subprocess(config, pairs)
    else:
        scores = _score_http(config, pairs)
    return scores, sum(scores) / len(scores)
