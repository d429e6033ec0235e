"""CLI behavior: subcommands, exit codes, and stdout/stderr discipline."""

from __future__ import annotations

import json

import pytest

from litera.cli import EXIT_CONFIG, EXIT_INPUT, EXIT_OK, main
from litera.corpus import load_finetune, save_corpus

from conftest import small_corpus

MOCK_SCRIPT = {
    "default": "D",
    "rules": [
        {"system_prefix": "You are an advanced Latin translator", "content": "proposal"},
        {"system_prefix": "You are a highly critical", "content": "revised"},
        {"system_prefix": "You are the final filter", "content": "revised"},
        {"system_prefix": "When provided with Latin text", "content": "Translation: smooth"},
        {"system_prefix": "You are a Latin translator.", "content": "baseline answer"},
    ],
}


@pytest.fixture
def mock_path(tmp_path) -> str:
    path = tmp_path / "mock.json"
    path.write_text(json.dumps(MOCK_SCRIPT), encoding="utf-8")
    return str(path)


@pytest.fixture
def corpus_path(tmp_path) -> str:
    path = tmp_path / "corpus.jsonl"
    save_corpus(small_corpus(2), path)
    return str(path)


class TestTranslate:
    def test_single_text_prints_one_line(self, mock_path, capsys, tmp_path):
        trace_path = tmp_path / "trace.json"
        code = main([
            "--mock", mock_path, "translate",
            "--text", "Gallia est omnis divisa", "--variant", "full",
            "--trace", str(trace_path),
        ])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert out == "revised\n"
        traces = json.loads(trace_path.read_text(encoding="utf-8"))["traces"]
        assert len(traces) == 1
        assert len(traces[0]["calls"]) == 12

    def test_input_file_with_non_literal_blocks(self, mock_path, tmp_path, capsys):
        source = tmp_path / "seg.txt"
        source.write_text("Prima linea\nSecunda linea\n", encoding="utf-8")
        code = main(["--mock", mock_path, "translate", "--input", str(source), "--non-literal"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert out.count("] literal:") == 2
        assert out.count("] non-literal:") == 2
        assert out.count("smooth") == 2

    def test_missing_api_key_with_http_provider(self, tmp_path, monkeypatch, capsys):
        monkeypatch.delenv("LITERA_API_KEY", raising=False)
        config = tmp_path / "litera.yaml"
        config.write_text("provider:\n  base_url: http://127.0.0.1:9\n", encoding="utf-8")
        code = main(["--config", str(config), "translate", "--text", "salve"])
        assert code == EXIT_CONFIG
        err = capsys.readouterr().err
        assert "LITERA_API_KEY" in err

    def test_empty_input_file(self, mock_path, tmp_path, capsys):
        source = tmp_path / "empty.txt"
        source.write_text("\n\n", encoding="utf-8")
        assert main(["--mock", mock_path, "translate", "--input", str(source)]) == EXIT_INPUT

    def test_unknown_variant(self, mock_path, capsys):
        code = main(["--mock", mock_path, "translate", "--text", "x", "--variant", "bogus"])
        assert code == EXIT_INPUT
        assert "valid names" in capsys.readouterr().err

    def test_diagnostics_never_on_stdout(self, mock_path, capsys):
        main(["--mock", mock_path, "translate", "--text", "x", "--variant", "bogus"])
        captured = capsys.readouterr()
        assert captured.out == ""


class TestEval:
    def write_hyp(self, tmp_path, name, lines):
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return str(path)

    def test_identity_scores_100(self, corpus_path, tmp_path, capsys):
        refs = [seg.english for seg in small_corpus(2).segments]
        hyp = self.write_hyp(tmp_path, "hyp.txt", refs)
        code = main(["eval", "--ref", corpus_path, "--hyp", f"identity={hyp}"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "identity" in out
        assert "100.00" in out

    def test_two_systems_sorted_descending(self, corpus_path, tmp_path, capsys):
        segments = small_corpus(2).segments
        good = self.write_hyp(tmp_path, "good.txt", [s.english for s in segments])
        bad = self.write_hyp(tmp_path, "bad.txt", ["totally unrelated words here"] * 2)
        code = main(["eval", "--ref", corpus_path, "--hyp", f"bad={bad}", "--hyp", f"good={good}"])
        assert code == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[2].startswith("good")
        assert lines[3].startswith("bad")

    def test_wrong_line_count_names_system(self, corpus_path, tmp_path, capsys):
        hyp = self.write_hyp(tmp_path, "short.txt", ["only one line"])
        code = main(["eval", "--ref", corpus_path, "--hyp", f"short={hyp}"])
        assert code == EXIT_INPUT
        assert "short" in capsys.readouterr().err

    def test_json_and_plot_outputs(self, corpus_path, tmp_path, capsys):
        refs = [seg.english for seg in small_corpus(2).segments]
        hyp = self.write_hyp(tmp_path, "hyp.txt", refs)
        json_path = tmp_path / "report.json"
        plot_path = tmp_path / "report.png"
        code = main([
            "eval", "--ref", corpus_path, "--hyp", f"identity={hyp}",
            "--json", str(json_path), "--plot", str(plot_path),
        ])
        assert code == EXIT_OK
        assert json.loads(json_path.read_text(encoding="utf-8"))["rows"][0]["system"] == "identity"
        assert plot_path.exists() and plot_path.stat().st_size > 0

    def test_external_without_scorer_config(self, corpus_path, tmp_path, capsys):
        refs = [seg.english for seg in small_corpus(2).segments]
        hyp = self.write_hyp(tmp_path, "hyp.txt", refs)
        code = main(["eval", "--ref", corpus_path, "--hyp", f"x={hyp}", "--external"])
        assert code == EXIT_CONFIG

    def test_bad_hyp_spec(self, corpus_path, capsys):
        assert main(["eval", "--ref", corpus_path, "--hyp", "no-equals-sign"]) == EXIT_INPUT


class TestAblate:
    def test_two_variants_table_and_call_totals(self, mock_path, corpus_path, capsys):
        code = main([
            "--mock", mock_path, "ablate",
            "--corpus", corpus_path, "--variants", "full,single_fine_tuned",
        ])
        assert code == EXIT_OK
        captured = capsys.readouterr()
        lines = captured.out.splitlines()
        assert lines[2].split()[0] in {"full", "single_fine_tuned"}
        assert len(lines) == 4  # header, rule, two rows
        assert "variant full: 24 calls (expected 24)" in captured.err
        assert "variant single_fine_tuned: 2 calls (expected 2)" in captured.err

    def test_empty_variants(self, mock_path, corpus_path, capsys):
        code = main(["--mock", mock_path, "ablate", "--corpus", corpus_path, "--variants", ""])
        assert code == EXIT_INPUT

    def test_unknown_variant_lists_valid_names(self, mock_path, corpus_path, capsys):
        code = main(["--mock", mock_path, "ablate", "--corpus", corpus_path, "--variants", "fulll"])
        assert code == EXIT_INPUT
        err = capsys.readouterr().err
        for name in ("full", "no_middle_revision", "single_baseline"):
            assert name in err

    def test_json_output(self, mock_path, corpus_path, tmp_path, capsys):
        json_path = tmp_path / "ablation.json"
        code = main([
            "--mock", mock_path, "ablate", "--corpus", corpus_path,
            "--variants", "full,no_middle_revision", "--json", str(json_path),
        ])
        assert code == EXIT_OK
        rows = json.loads(json_path.read_text(encoding="utf-8"))["rows"]
        assert [r["system"] for r in rows] == ["full", "no_middle_revision"]

    def test_missing_reference_rejected(self, mock_path, tmp_path, capsys):
        path = tmp_path / "norefs.jsonl"
        path.write_text('{"id":"a","latin":"solum latine"}\n', encoding="utf-8")
        code = main(["--mock", mock_path, "ablate", "--corpus", str(path), "--variants", "full"])
        assert code == EXIT_INPUT


class TestExportFinetune:
    def test_count_printed_and_file_parses_back(self, corpus_path, tmp_path, capsys):
        out = tmp_path / "train.jsonl"
        code = main(["export-finetune", "--corpus", corpus_path, "--out", str(out)])
        assert code == EXIT_OK
        assert capsys.readouterr().out.strip() == "2"
        records = load_finetune(out)
        assert len(records) == 2
        assert records[0].system.startswith("You are an advanced Latin translator")

    def test_job_spec_sidecar(self, corpus_path, tmp_path, capsys):
        out = tmp_path / "train.jsonl"
        spec_path = tmp_path / "job.json"
        main([
            "export-finetune", "--corpus", corpus_path,
            "--out", str(out), "--job-spec", str(spec_path),
        ])
        spec = json.loads(spec_path.read_text(encoding="utf-8"))
        assert spec == {
            "epochs": 3, "batch_size": 1, "lr_multiplier": 1.8,
            "base_model": "proposer-base", "notes": "",
        }

    def test_segment_without_reference(self, tmp_path, capsys):
        path = tmp_path / "norefs.jsonl"
        path.write_text('{"id":"a","latin":"solum latine"}\n', encoding="utf-8")
        code = main(["export-finetune", "--corpus", str(path), "--out", str(tmp_path / "o.jsonl")])
        assert code == EXIT_INPUT
