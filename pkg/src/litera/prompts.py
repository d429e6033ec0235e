"""Prompt registry backed by checksummed text assets, plus message assembly.

The six prompts ship as one file each under ``prompt_assets/`` with a
sha256 manifest; the registry refuses to start on checksum drift. An
override directory substitutes custom prompt texts and disables the
checksum assertion for the overridden names only.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Sequence

from .errors import ConfigurationError


class PromptName(str, Enum):
    FINE_TUNED_SYSTEM = "fine_tuned_system"
    REVISION = "revision"
    FINAL_FILTER = "final_filter"
    NON_LITERAL = "non_literal"
    BASELINE_TRANSLATOR = "baseline_translator"
    OUTPUT_CLEANER = "output_cleaner"


@dataclass(frozen=True)
class PromptTemplate:
    name: PromptName
    text: str


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class PromptRegistry:
    """Immutable after construction; safe to share across threads."""

    def __init__(self, override_dir: str | Path | None = None):
        assets = resources.files("litera") / "prompt_assets"
        manifest = json.loads((assets / "manifest.json").read_text(encoding="utf-8"))
        override_dir = Path(override_dir) if override_dir else None
        texts: dict[PromptName, str] = {}
        overridden: set[PromptName] = set()
        for name in PromptName:
            override_path = override_dir / f"{name.value}.txt" if override_dir else None
            if override_path is not None and override_path.exists():
                texts[name] = override_path.read_text(encoding="utf-8")
                overridden.add(name)
                continue
            text = (assets / f"{name.value}.txt").read_text(encoding="utf-8")
            expected = manifest.get(name.value)
            if expected is None:
                raise ConfigurationError(f"prompt asset {name.value!r} missing from manifest")
            if _sha256(text) != expected:
                raise ConfigurationError(
                    f"prompt asset {name.value!r} does not match its manifest checksum"
                )
            texts[name] = text
        self._texts = texts
        self.overridden = frozenset(overridden)

    def get(self, name: PromptName | str) -> PromptTemplate:
        try:
            key = PromptName(name)
        except ValueError:
            raise KeyError(f"unknown prompt {name!r}") from None
        return PromptTemplate(name=key, text=self._texts[key])

    def text(self, name: PromptName | str) -> str:
        return self.get(name).text


_default_registry: PromptRegistry | None = None


def default_registry() -> PromptRegistry:
    global _default_registry
    if _default_registry is None:
        _default_registry = PromptRegistry()
    return _default_registry


def get_prompt(name: PromptName | str) -> PromptTemplate:
    return default_registry().get(name)


def _require(value: str, what: str) -> None:
    if not value:
        raise ValueError(f"{what} must be non-empty")


def assemble_revision_message(latin: str, translation: str) -> str:
    """User message for the revision stages; inputs interpolate verbatim."""
    _require(latin, "latin")
    _require(translation, "translation")
    return (
        "Return a corrected translation or the same if it is accurate:"
        f"\nLatin text: {latin}\nTranslation:\n{translation}"
    )


def assemble_comparison_message(latin: str, candidates: Sequence[str], k: int = 5) -> str:
    """User message for the selection filter, numbering candidates 1..k.

    With k=5 the header keeps the original wording ("these five") and the
    space before the first newline; other k substitute the digit string.
    """
    _require(latin, "latin")
    if len(candidates) != k:
        raise ValueError(f"expected exactly {k} candidates, got {len(candidates)}")
    for i, cand in enumerate(candidates):
        if not cand:
            raise ValueError(f"candidate {i + 1} is empty")
    count = "five" if k == 5 else str(k)
    numbered = "\n".join(f"{i}. {c}" for i, c in enumerate(candidates, start=1))
    return (
        f"Given these {count} translations, select the best one based on "
        f"this Latin provided text: \n{latin}\n{numbered}"
    )


def assemble_non_literal_message(latin: str, literal: str) -> str:
    """User message for the non-literal pass, in the prompt's input format."""
    _require(latin, "latin")
    _require(literal, "literal")
    return f"Latin Text: {latin}\nLiteral English Translation: {literal}"
