"""Native corpus BLEU with mteval-13a tokenization.

Reproduces the SacreBLEU defaults exactly — case-sensitive 13a
tokenization, max n-gram order 4, exponential smoothing for zero-match
orders, single reference — so scores are directly comparable with that
scorer's output. Precisions are kept as fractions in [0, 1]; the score is
on the usual [0, 100] scale.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import InputError

MAX_NGRAM_ORDER = 4

# mteval-13a's language-dependent splits, applied in this exact order to a
# space-padded line: pad most ASCII punctuation, then period/comma unless
# digit-adjacent on the respective side, then dash after a digit.
_13A_STEPS = [
    (re.compile(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])"), r" \1 "),
    (re.compile(r"([^0-9])([\.,])"), r"\1 \2 "),
    (re.compile(r"([\.,])([^0-9])"), r" \1 \2"),
    (re.compile(r"([0-9])(-)"), r"\1 \2 "),
]


@dataclass(frozen=True)
class TokenSequence:
    tokens: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[str]:
        return iter(self.tokens)

    def join(self) -> str:
        return " ".join(self.tokens)


def tokenize_13a(text: str) -> TokenSequence:
    """Tokenize one segment the way the WMT mteval-v13a script does."""
    line = text.replace("<skipped>", "")
    line = line.replace("-\n", "")
    line = line.replace("\n", " ")
    if "&" in line:
        line = line.replace("&quot;", '"')
        line = line.replace("&amp;", "&")
        line = line.replace("&lt;", "<")
        line = line.replace("&gt;", ">")
    line = f" {line} "
    for pattern, repl in _13A_STEPS:
        line = pattern.sub(repl, line)
    return TokenSequence(tuple(line.split()))


@dataclass(frozen=True)
class BleuScore:
    """Corpus BLEU decomposition.

    ``precisions`` are the (smoothed) clipped n-gram precisions p1..p4 as
    fractions; ``score`` = brevity_penalty * geometric mean * 100. The
    degenerate sys_len == 0 case is defined as score 0 with
    brevity_penalty 0 rather than dividing by zero.
    """

    score: float
    precisions: tuple[float, float, float, float]
    brevity_penalty: float
    sys_len: int
    ref_len: int


def _ngram_counts(tokens: Sequence[str]) -> Counter:
    counts: Counter = Counter()
    for n in range(1, MAX_NGRAM_ORDER + 1):
        for i in range(len(tokens) - n + 1):
            counts[tuple(tokens[i : i + n])] += 1
    return counts


def bleu_corpus(hypotheses: Sequence[str], references: Sequence[str]) -> BleuScore:
    """Corpus BLEU of hypotheses against one reference per segment."""
    if len(hypotheses) != len(references):
        raise InputError(
            f"hypothesis/reference counts differ: {len(hypotheses)} vs {len(references)}"
        )
    if not hypotheses:
        raise InputError("cannot score an empty corpus")

    correct = [0] * MAX_NGRAM_ORDER
    total = [0] * MAX_NGRAM_ORDER
    sys_len = 0
    ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp_tokens = tokenize_13a(hyp.rstrip()).tokens
        ref_tokens = tokenize_13a(ref.rstrip()).tokens
        sys_len += len(hyp_tokens)
        ref_len += len(ref_tokens)
        ref_counts = _ngram_counts(ref_tokens)
        for ngram, count in _ngram_counts(hyp_tokens).items():
            n = len(ngram)
            correct[n - 1] += min(count, ref_counts.get(ngram, 0))
            total[n - 1] += count

    if sys_len == 0:
        brevity_penalty = 0.0
    elif sys_len < ref_len:
        brevity_penalty = math.exp(1 - ref_len / sys_len)
    else:
        brevity_penalty = 1.0

    precisions = [0.0] * MAX_NGRAM_ORDER
    smooth = 1.0
    for n in range(MAX_NGRAM_ORDER):
        if total[n] == 0:
            break
        if correct[n] == 0:
            smooth *= 2.0
            precisions[n] = 1.0 / (smooth * total[n])
        else:
            precisions[n] = correct[n] / total[n]

    if all(p > 0.0 for p in precisions):
        log_mean = sum(math.log(p) for p in precisions) / MAX_NGRAM_ORDER
        score = brevity_penalty * math.exp(log_mean) * 100.0
    else:
        score = 0.0
    return BleuScore(
        score=score,
        precisions=tuple(precisions),  # type: ignore[arg-type]
        brevity_penalty=brevity_penalty,
        sys_len=sys_len,
        ref_len=ref_len,
    )
