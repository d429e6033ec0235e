"""BLEU and 13a tokenizer against frozen oracle fixtures, plus properties."""

from __future__ import annotations

import json
import math
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from litera.errors import InputError
from litera.metrics import bleu_corpus, tokenize_13a

FIXTURES = Path(__file__).parent / "fixtures"

with open(FIXTURES / "tokenizer_cases.json", encoding="utf-8") as f:
    TOKENIZER_CASES = json.load(f)["cases"]
with open(FIXTURES / "bleu_cases.json", encoding="utf-8") as f:
    BLEU_FIXTURE = json.load(f)

WORDS = st.sampled_from(
    ["Gallia", "est", "omnis", "divisa", "in", "partes", "tres", "the", "cat", "sat", "down", "3.5"]
)
SENTENCES = st.lists(WORDS, min_size=4, max_size=12).map(" ".join)


class TestTokenizer13a:
    @pytest.mark.parametrize(
        "case", TOKENIZER_CASES, ids=[repr(c["text"])[:40] for c in TOKENIZER_CASES]
    )
    def test_matches_frozen_oracle(self, case):
        assert list(tokenize_13a(case["text"]).tokens) == case["tokens"]

    def test_fixture_covers_required_size(self):
        assert len(TOKENIZER_CASES) >= 30

    def test_empty_input(self):
        assert tokenize_13a("").tokens == ()

    @pytest.mark.parametrize("case", TOKENIZER_CASES, ids=lambda c: repr(c["text"])[:40])
    def test_tokens_nonempty_and_space_free(self, case):
        for token in tokenize_13a(case["text"]).tokens:
            assert token
            assert " " not in token

    @settings(max_examples=150, deadline=None)
    @given(st.text(max_size=60))
    def test_rejoin_idempotence(self, text):
        once = tokenize_13a(text)
        again = tokenize_13a(once.join())
        assert again.tokens == once.tokens

    @settings(max_examples=150, deadline=None)
    @given(st.text(max_size=60))
    def test_token_invariants_hold_on_arbitrary_text(self, text):
        for token in tokenize_13a(text).tokens:
            assert token
            assert not any(ch.isspace() for ch in token)


class TestBleuFixtures:
    @pytest.mark.parametrize(
        "case",
        BLEU_FIXTURE["pairs"],
        ids=[repr(c["hypothesis"])[:36] for c in BLEU_FIXTURE["pairs"]],
    )
    def test_pair_scores_match_oracle(self, case):
        result = bleu_corpus([case["hypothesis"]], [case["reference"]])
        assert result.score == pytest.approx(case["score"], abs=0.01)
        assert result.brevity_penalty == pytest.approx(case["brevity_penalty"], abs=1e-4)
        assert result.sys_len == case["sys_len"]
        assert result.ref_len == case["ref_len"]

    def test_corpus_score_matches_oracle(self):
        expected = BLEU_FIXTURE["corpus"]
        hyps = [p["hypothesis"] for p in BLEU_FIXTURE["pairs"]]
        refs = [p["reference"] for p in BLEU_FIXTURE["pairs"]]
        result = bleu_corpus(hyps, refs)
        assert result.score == pytest.approx(expected["score"], abs=0.01)
        assert result.brevity_penalty == pytest.approx(expected["brevity_penalty"], abs=1e-4)
        assert (result.sys_len, result.ref_len) == (expected["sys_len"], expected["ref_len"])
        for mine, theirs in zip(result.precisions, expected["precisions_percent"]):
            assert mine * 100 == pytest.approx(theirs, abs=1e-3)

    def test_fixture_covers_required_size(self):
        assert len(BLEU_FIXTURE["pairs"]) >= 20


class TestBleuBehavior:
    def test_identity_scores_100(self):
        texts = [
            "All Gaul is divided into three parts.",
            "The cat sat on the mat tonight.",
        ]
        result = bleu_corpus(texts, texts)
        assert result.score == 100.0
        assert result.precisions == (1.0, 1.0, 1.0, 1.0)
        assert result.brevity_penalty == 1.0

    def test_brevity_penalty_formula(self):
        # 4 fully matching tokens against a 5-token reference
        result = bleu_corpus(["a b c d"], ["a b c d e"])
        assert result.brevity_penalty == pytest.approx(math.exp(1 - 5 / 4), abs=1e-9)
        assert result.score == pytest.approx(100 * math.exp(1 - 5 / 4), abs=1e-6)

    def test_all_empty_hypotheses(self):
        result = bleu_corpus(["", ""], ["a b", "c d"])
        assert result.score == 0.0
        assert result.brevity_penalty == 0.0
        assert result.sys_len == 0

    def test_length_mismatch(self):
        with pytest.raises(InputError, match="2 vs 1"):
            bleu_corpus(["a", "b"], ["a"])

    def test_empty_corpus(self):
        with pytest.raises(InputError):
            bleu_corpus([], [])

    def test_smoothing_halves_each_zero_order(self):
        # 1-gram match only: p2..p4 smoothed as 1/(2^i * total)
        result = bleu_corpus(["the cat sat down"], ["down the sat cat"])
        assert result.precisions[0] == 1.0
        assert result.precisions[1] == pytest.approx(1 / (2 * 3))
        assert result.precisions[2] == pytest.approx(1 / (4 * 2))
        assert result.precisions[3] == pytest.approx(1 / (8 * 1))

    @settings(max_examples=100, deadline=None)
    @given(st.lists(SENTENCES, min_size=1, max_size=4))
    def test_score_decomposition_and_ranges(self, texts):
        result = bleu_corpus(texts, texts)
        assert 0.0 <= result.score <= 100.0
        assert all(0.0 <= p <= 1.0 for p in result.precisions)
        assert 0.0 < result.brevity_penalty <= 1.0
        if all(p > 0 for p in result.precisions):
            expected = (
                result.brevity_penalty
                * math.exp(sum(math.log(p) for p in result.precisions) / 4)
                * 100
            )
            assert result.score == pytest.approx(expected, abs=1e-9)

    @settings(max_examples=100, deadline=None)
    @given(SENTENCES, st.data())
    def test_corrupting_a_token_never_helps(self, sentence, data):
        tokens = sentence.split()
        index = data.draw(st.integers(0, len(tokens) - 1))
        corrupted = list(tokens)
        corrupted[index] = "zzqq"
        baseline = bleu_corpus([sentence], [sentence]).score
        corrupted_score = bleu_corpus([" ".join(corrupted)], [sentence]).score
        assert corrupted_score <= baseline
