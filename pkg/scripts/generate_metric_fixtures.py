#!/usr/bin/env python3
"""Regenerate the frozen metric fixtures under tests/fixtures/.

Requires the SacreBLEU library (the reference scorer) on the import path;
the shipped fixtures were produced with sacrebleu 1.4.5. Run from the
repository root:

    python scripts/generate_metric_fixtures.py

The expected values are computed once, committed, and never recomputed at
test time, so the test suite stays independent of the reference scorer.
"""

from __future__ import annotations

import json
from pathlib import Path

import sacrebleu

OUT_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

TOKENIZER_CASES = [
    # plain words and basic punctuation
    "Hello, world!",
    "Gallia est omnis divisa in partes tres.",
    "Hello, world! How are you? I'm fine; thanks.",
    "x,y,z",
    "Hello,world",
    # empty / whitespace-only / collapse
    "",
    "   ",
    "multi  spaces   collapse",
    "a\tb",
    # digit-adjacent period and comma (kept) vs word-adjacent (split)
    "3.5",
    "1,000,000",
    "pi is 3.14159, e is 2.71828.",
    "version 2.0.",
    ".5 caliber",
    "42, 43, and 44.",
    "3 . 5",
    "a..b",
    "...",
    # dash after digit (split) vs between letters (kept)
    "100-fold",
    "well-known",
    "ISBN 0-13-110362-8",
    "He lived 63-14 BC.",
    # skipped-span and line-break joining rules
    "a<skipped>b",
    "hyphen-\nbreak",
    "line\nbreak",
    "-\n",
    # entity unescaping
    "&quot;quoted&quot;",
    "Jupiter &amp; Mercury",
    "&lt;tag&gt;",
    "A&B",
    # each ASCII punctuation range the tokenizer pads
    "{braces} and |pipes| and ~tilde",
    "[brackets] a\\b ^caret _under `tick",
    "!bang \"dq #hash $dollar %pct",
    "(parens) *star +plus",
    ":colon ;semi <lt =eq >gt ?que @at",
    "slash/slash",
    # characters the tokenizer must leave alone
    "don't can't won't",
    "em—dash and … ellipsis",
    "ācer ē ō ū macrons",
    "“curly quotes”",
    "Translation: [Insert Latin text here]",
]

BLEU_PAIRS = [
    # exact matches
    ("The cat sat on the mat.", "The cat sat on the mat."),
    (
        "Although indeed the republic was managed by those men, all cares were brought to it.",
        "Although indeed the republic was managed by those men, all cares were brought to it.",
    ),
    ("Yes.", "Yes."),
    # empty / whitespace-only hypotheses
    ("", "All Gaul is divided into three parts."),
    ("   ", "All Gaul is divided into three parts."),
    # zero higher-order overlap, clipping
    ("down sat cat the", "the cat sat down"),
    ("the the the the", "the cat sat down"),
    ("ab ab ab ab", "ab ab cd"),
    # digit / punctuation interactions
    ("Pi equals 3.14.", "Pi equals 3.14!"),
    ("It costs 1,000 dollars.", "It costs 1000 dollars."),
    ("He lived 63-14 BC.", "He lived 63-14 BC."),
    ("&quot;Ave&quot;", '"Ave"'),
    # length mismatches for the brevity penalty
    ("the cat sat", "the cat sat on the mat tonight"),
    ("the cat sat on", "the cat sat on the"),
    (
        "the cat sat on the mat and then the dog sat on the mat",
        "the cat sat on the mat",
    ),
    # single-token and punctuation-only degenerate cases
    ("Yes.", "No."),
    ("...", "!!!"),
    # near-misses
    ("the quick brown fox jumps over the lazy dog", "the quick brown fox leaps over the lazy dog"),
    ("the quick brown fox jumps over the lazy dog", "a quick brown fox jumped over some lazy dog"),
    ("Man was born from divine seed.", "Man was born, either made from divine seed."),
    # case sensitivity
    ("the cat", "The cat"),
    # unicode text
    ("ācer erat mīles.", "ācer erat mīles."),
]


def pair_score(hyp: str, ref: str):
    return sacrebleu.corpus_bleu(
        [hyp], [[ref]], smooth_method="exp", tokenize="13a", use_effective_order=False
    )


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    version = getattr(sacrebleu, "VERSION", getattr(sacrebleu, "__version__", "unknown"))

    tok_cases = []
    for text in TOKENIZER_CASES:
        tokenized = sacrebleu.tokenize_13a(text)
        tok_cases.append({"text": text, "tokens": tokenized.split()})
    (OUT_DIR / "tokenizer_cases.json").write_text(
        json.dumps(
            {
                "notes": (
                    "13a token sequences computed once with the SacreBLEU reference "
                    f"tokenizer (version {version}) by scripts/generate_metric_fixtures.py "
                    "and frozen here; tests compare against these, not against the library."
                ),
                "scorer_version": str(version),
                "cases": tok_cases,
            },
            indent=2,
            ensure_ascii=False,
        )
        + "\n",
        encoding="utf-8",
    )

    pair_cases = []
    for hyp, ref in BLEU_PAIRS:
        result = pair_score(hyp, ref)
        pair_cases.append(
            {
                "hypothesis": hyp,
                "reference": ref,
                "score": round(result.score, 6),
                "brevity_penalty": round(result.bp, 6),
                "sys_len": result.sys_len,
                "ref_len": result.ref_len,
            }
        )
    hyps = [h for h, _ in BLEU_PAIRS]
    refs = [r for _, r in BLEU_PAIRS]
    corpus_result = sacrebleu.corpus_bleu(
        hyps, [refs], smooth_method="exp", tokenize="13a", use_effective_order=False
    )
    (OUT_DIR / "bleu_cases.json").write_text(
        json.dumps(
            {
                "notes": (
                    "Expected BLEU values computed once with the SacreBLEU reference scorer "
                    f"(version {version}; 13a tokenization, exponential smoothing, max order 4, "
                    "case-sensitive, single reference) by scripts/generate_metric_fixtures.py. "
                    "Pair scores treat each pair as a one-segment corpus."
                ),
                "scorer_version": str(version),
                "pairs": pair_cases,
                "corpus": {
                    "score": round(corpus_result.score, 6),
                    "precisions_percent": [round(p, 6) for p in corpus_result.precisions],
                    "brevity_penalty": round(corpus_result.bp, 6),
                    "sys_len": corpus_result.sys_len,
                    "ref_len": corpus_result.ref_len,
                },
            },
            indent=2,
            ensure_ascii=False,
        )
        + "\n",
        encoding="utf-8",
    )
    print(f"wrote {len(tok_cases)} tokenizer cases and {len(pair_cases)} BLEU pairs")


if __name__ == "__main__":
    main()
