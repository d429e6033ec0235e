"""Multi-system evaluation reports: plain-text tables, JSON, and figures."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping, Sequence

from .corpus import Corpus
from .errors import InputError
from .external import ScorerConfig, score_external
from .metrics import BleuScore, bleu_corpus


@dataclass(frozen=True)
class ReportRow:
    system: str
    bleu: BleuScore | None
    external: float | None = None
    note: str = ""


@dataclass(frozen=True)
class EvalReport:
    corpus_name: str
    segment_count: int
    rows: tuple[ReportRow, ...]
    external_metric: str | None
    created_at: str
    config_hash: str


def _config_hash(scorer: ScorerConfig | None) -> str:
    settings = {
        "bleu": {"tokenize": "13a", "smooth": "exp", "max_ngram_order": 4, "case_sensitive": True},
        "external": scorer.name if scorer else None,
    }
    return hashlib.sha256(json.dumps(settings, sort_keys=True).encode()).hexdigest()[:16]


def build_report(
    corpus: Corpus,
    systems: Mapping[str, Sequence[str]],
    scorer: ScorerConfig | None = None,
    *,
    sort_rows: bool = True,
) -> EvalReport:
    """Score each system's hypotheses against the corpus references.

    Every system must supply exactly one hypothesis per segment. Rows are
    sorted by BLEU descending unless ``sort_rows`` is off (comparison tables
    that carry their own canonical ordering).
    """
    references = corpus.references()
    rows = []
    for name, hypotheses in systems.items():
        if len(hypotheses) != len(references):
            raise InputError(
                f"system {name!r} supplies {len(hypotheses)} hypotheses "
                f"for {len(references)} segments"
            )
        bleu = bleu_corpus(hypotheses, references)
        external = None
        if scorer is not None:
            _, external = score_external(scorer, list(hypotheses), references)
        rows.append(ReportRow(system=name, bleu=bleu, external=external))
    if sort_rows:
        rows.sort(key=lambda r: r.bleu.score, reverse=True)
    return EvalReport(
        corpus_name=corpus.name,
        segment_count=len(corpus),
        rows=tuple(rows),
        external_metric=scorer.name if scorer else None,
        created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        config_hash=_config_hash(scorer),
    )


def format_table(report: EvalReport) -> str:
    """Aligned plain-text table, one row per system."""
    headers = ["Model", "BLEU"]
    if report.external_metric:
        headers.append(report.external_metric)
    cells = []
    for row in report.rows:
        bleu = f"{row.bleu.score:.2f}" if row.bleu is not None else "-"
        line = [row.system, bleu]
        if report.external_metric:
            line.append(f"{row.external:.4f}" if row.external is not None else "-")
        if row.note:
            line[0] = f"{row.system} ({row.note})"
        cells.append(line)
    widths = [max(len(h), *(len(c[i]) for c in cells)) if cells else len(h)
              for i, h in enumerate(headers)]
    def fmt(line):
        first = line[0].ljust(widths[0])
        rest = [v.rjust(w) for v, w in zip(line[1:], widths[1:])]
        return "  ".join([first, *rest]).rstrip()
    out = [fmt(headers), fmt(["-" * w for w in widths])]
    out.extend(fmt(line) for line in cells)
    return "\n".join(out)


def report_to_dict(report: EvalReport) -> dict:
    rows = []
    for row in report.rows:
        entry: dict = {"system": row.system}
        if row.bleu is not None:
            entry["bleu"] = {
                "score": row.bleu.score,
                "precisions": list(row.bleu.precisions),
                "brevity_penalty": row.bleu.brevity_penalty,
                "sys_len": row.bleu.sys_len,
                "ref_len": row.bleu.ref_len,
            }
        else:
            entry["bleu"] = None
        entry["external"] = row.external
        if row.note:
            entry["note"] = row.note
        rows.append(entry)
    return {
        "corpus": report.corpus_name,
        "segments": report.segment_count,
        "external_metric": report.external_metric,
        "created_at": report.created_at,
        "config_hash": report.config_hash,
        "rows": rows,
    }


def write_json(report: EvalReport, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(report_to_dict(report), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def render_figure(report: EvalReport, path: str | Path) -> None:
    """Render the report as a bar chart (BLEU, plus the external metric when present)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    scored = [r for r in report.rows if r.bleu is not None]
    names = [r.system for r in scored]
    bleu_values = [r.bleu.score for r in scored]
    has_external = report.external_metric and any(r.external is not None for r in scored)

    ncols = 2 if has_external else 1
    fig, axes = plt.subplots(1, ncols, figsize=(5.0 * ncols, 0.6 * max(len(names), 3) + 1.5))
    ax_bleu = axes[0] if has_external else axes
    ax_bleu.barh(names, bleu_values, color="tab:blue")
    ax_bleu.invert_yaxis()
    ax_bleu.set_xlabel("BLEU")
    ax_bleu.set_xlim(0, 100)
    if has_external:
        ext_values = [r.external if r.external is not None else 0.0 for r in scored]
        axes[1].barh(names, ext_values, color="tab:orange")
        axes[1].invert_yaxis()
        axes[1].set_xlabel(report.external_metric)
        axes[1].set_yticklabels([])
    fig.suptitle(f"{report.corpus_name} ({report.segment_count} segments)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
