"""Parallel Latin-English corpus model, JSONL/TSV IO, and fine-tune export.

File schemas:
  JSONL — one object per line with keys ``id`` (optional), ``latin``
  (required), ``english`` (optional), ``era`` (optional, ``classical`` or
  ``early_modern``).
  TSV — ``latin<TAB>english`` or ``id<TAB>latin<TAB>english``, no header.
  TSV cannot carry era or text containing tabs/newlines; saving such a
  corpus as TSV is an error rather than a silent loss.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterator

from .errors import CorpusError

FORMATS = ("jsonl", "tsv")


class Era(str, Enum):
    CLASSICAL = "classical"
    EARLY_MODERN = "early_modern"
    UNSPECIFIED = "unspecified"


@dataclass(frozen=True)
class ParallelSegment:
    """One aligned sentence pair, the unit of evaluation and export."""

    id: str
    latin: str
    english: str = ""
    era: Era = Era.UNSPECIFIED

    def __post_init__(self):
        if not self.id:
            raise CorpusError("segment id must be non-empty")
        if not self.latin.strip():
            raise CorpusError(f"segment {self.id!r}: latin text is empty")


@dataclass
class Corpus:
    name: str
    segments: list[ParallelSegment] = field(default_factory=list)
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        seen: dict[str, int] = {}
        for i, seg in enumerate(self.segments, start=1):
            if seg.id in seen:
                raise CorpusError(
                    f"duplicate segment id {seg.id!r} (segments {seen[seg.id]} and {i})"
                )
            seen[seg.id] = i
        declared = self.metadata.get("count")
        if declared is not None:
            try:
                declared = int(declared)
            except ValueError:
                raise CorpusError(f"metadata count {declared!r} is not an integer") from None
            if declared != len(self.segments):
                raise CorpusError(
                    f"metadata declares {declared} segments but corpus has {len(self.segments)}"
                )

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self) -> Iterator[ParallelSegment]:
        return iter(self.segments)

    def references(self) -> list[str]:
        """English reference texts in segment order."""
        return [seg.english for seg in self.segments]


@dataclass(frozen=True)
class FineTuneRecord:
    """One chat-format training example: system prompt, source, reference."""

    system: str
    user: str
    assistant: str


@dataclass(frozen=True)
class FineTuneJobSpec:
    """Hyperparameter record for a fine-tune run; metadata only, never executed."""

    epochs: int = 3
    batch_size: int = 1
    lr_multiplier: float = 1.8
    base_model: str = "proposer-base"
    notes: str = ""

    def __post_init__(self):
        for name in ("epochs", "batch_size", "lr_multiplier"):
            if getattr(self, name) <= 0:
                raise CorpusError(f"FineTuneJobSpec.{name} must be positive")

    def to_dict(self) -> dict:
        return {
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "lr_multiplier": self.lr_multiplier,
            "base_model": self.base_model,
            "notes": self.notes,
        }


def _check_format(fmt: str) -> str:
    if fmt not in FORMATS:
        raise CorpusError(f"unknown corpus format {fmt!r}; expected one of {FORMATS}")
    return fmt


def infer_format(path: str | Path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix in (".jsonl", ".ndjson", ".json"):
        return "jsonl"
    if suffix in (".tsv", ".tab", ".txt"):
        return "tsv"
    raise CorpusError(f"cannot infer corpus format from {path}; pass format explicitly")


def _parse_era(value: str, where: str) -> Era:
    try:
        return Era(value)
    except ValueError:
        valid = ", ".join(e.value for e in Era)
        raise CorpusError(f"{where}: unknown era {value!r}; expected one of: {valid}") from None


def _parse_jsonl_line(line: str, where: str) -> tuple[str | None, str, str, Era]:
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"{where}: invalid JSON: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise CorpusError(f"{where}: expected a JSON object, got {type(raw).__name__}")
    if "latin" not in raw:
        raise CorpusError(f"{where}: missing required key 'latin'")
    seg_id = raw.get("id")
    if seg_id is not None and not isinstance(seg_id, str):
        raise CorpusError(f"{where}: 'id' must be a string")
    latin = raw["latin"]
    english = raw.get("english", "")
    if not isinstance(latin, str) or not isinstance(english, str):
        raise CorpusError(f"{where}: 'latin' and 'english' must be strings")
    era = _parse_era(raw["era"], where) if "era" in raw else Era.UNSPECIFIED
    return seg_id, latin, english, era


def _parse_tsv_line(line: str, where: str) -> tuple[str | None, str, str, Era]:
    cols = line.split("\t")
    if len(cols) == 2:
        return None, cols[0], cols[1], Era.UNSPECIFIED
    if len(cols) == 3:
        return cols[0], cols[1], cols[2], Era.UNSPECIFIED
    raise CorpusError(f"{where}: expected 2 or 3 tab-separated columns, got {len(cols)}")


def load_corpus(path: str | Path, format: str | None = None) -> Corpus:
    """Load a corpus, preserving input order.

    Segments without an explicit id get zero-padded 1-based ordinals
    ("000001", ...). Leading/trailing whitespace is trimmed from text
    fields; interior whitespace is preserved.
    """
    path = Path(path)
    fmt = _check_format(format) if format else infer_format(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read corpus {path}: {exc}") from exc

    parse = _parse_jsonl_line if fmt == "jsonl" else _parse_tsv_line
    segments: list[ParallelSegment] = []
    id_lines: dict[str, int] = {}
    ordinal = 0
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        ordinal += 1
        where = f"{path}:{lineno}"
        seg_id, latin, english, era = parse(line, where)
        if seg_id is None:
            seg_id = f"{ordinal:06d}"
        latin = latin.strip()
        english = english.strip()
        if not latin:
            raise CorpusError(f"{where}: segment {seg_id!r} has an empty latin field")
        if seg_id in id_lines:
            raise CorpusError(
                f"duplicate segment id {seg_id!r} in {path} (lines {id_lines[seg_id]} and {lineno})"
            )
        id_lines[seg_id] = lineno
        segments.append(ParallelSegment(id=seg_id, latin=latin, english=english, era=era))
    return Corpus(name=path.stem, segments=segments)


def save_corpus(corpus: Corpus, path: str | Path, format: str | None = None) -> None:
    """Write a corpus so that loading it back reproduces the segments exactly."""
    path = Path(path)
    fmt = _check_format(format) if format else infer_format(path)
    lines = []
    for seg in corpus.segments:
        if fmt == "jsonl":
            obj: dict[str, str] = {"id": seg.id, "latin": seg.latin}
            if seg.english:
                obj["english"] = seg.english
            if seg.era is not Era.UNSPECIFIED:
                obj["era"] = seg.era.value
            lines.append(json.dumps(obj, ensure_ascii=False))
        else:
            if seg.era is not Era.UNSPECIFIED:
                raise CorpusError(
                    f"segment {seg.id!r}: era {seg.era.value!r} cannot be represented in TSV"
                )
            for fname in ("id", "latin", "english"):
                value = getattr(seg, fname)
                if "\t" in value or "\n" in value:
                    raise CorpusError(
                        f"segment {seg.id!r}: {fname} contains a tab or newline, "
                        "which TSV cannot represent"
                    )
            lines.append(f"{seg.id}\t{seg.latin}\t{seg.english}")
    try:
        Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot write corpus {path}: {exc}") from exc


def export_finetune(corpus: Corpus, system_prompt: str, path: str | Path) -> int:
    """Write a chat-format fine-tune training file; returns line count.

    Every line is ``{"messages": [system, user, assistant]}`` with the given
    system prompt verbatim and the segment's latin/english as user/assistant.
    """
    for seg in corpus.segments:
        if not seg.english:
            raise CorpusError(
                f"segment {seg.id!r} has no english reference; cannot export for fine-tuning"
            )
    lines = []
    for seg in corpus.segments:
        record = {
            "messages": [
                {"role": "system", "content": system_prompt},
                {"role": "user", "content": seg.latin},
                {"role": "assistant", "content": seg.english},
            ]
        }
        lines.append(json.dumps(record, ensure_ascii=False))
    try:
        Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot write fine-tune file {path}: {exc}") from exc
    return len(lines)


def load_finetune(path: str | Path) -> list[FineTuneRecord]:
    """Parse a chat-format training file back into records (inverse of export)."""
    path = Path(path)
    records = []
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read fine-tune file {path}: {exc}") from exc
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        where = f"{path}:{lineno}"
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"{where}: invalid JSON: {exc.msg}") from exc
        messages = raw.get("messages") if isinstance(raw, dict) else None
        if (
            not isinstance(messages, list)
            or [m.get("role") for m in messages] != ["system", "user", "assistant"]
        ):
            raise CorpusError(f"{where}: expected messages [system, user, assistant]")
        records.append(
            FineTuneRecord(
                system=messages[0]["content"],
                user=messages[1]["content"],
                assistant=messages[2]["content"],
            )
        )
    return records
