"""Command-line front-end: translate, eval, ablate, export-finetune, serve.

Results go to standard output; diagnostics go to standard error. Exit
codes: 0 success, 1 configuration error, 2 provider error, 3 input error.
Every command runs end-to-end against the mock provider (``--mock``)
without network access.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

from .config import AppConfig, load_config
from .corpus import FineTuneJobSpec, load_corpus, export_finetune
from .errors import (
    ConfigurationError,
    CorpusError,
    InputError,
    LiteraError,
    LlmError,
    PipelineError,
    ScorerConfigError,
    ScorerError,
)
from .llm import HttpBackend, LlmClient
from .mock import MockBackend, MockScript
from .pipeline import (
    Translator,
    Variant,
    expected_call_count,
    run_ablation,
)
from .prompts import PromptName, PromptRegistry
from .report import (
    EvalReport,
    ReportRow,
    build_report,
    format_table,
    render_figure,
    write_json,
)
from .metrics import bleu_corpus
from .external import score_external
from .service import TranslationService

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PROVIDER = 2
EXIT_INPUT = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="litera",
        description="Multi-layered Latin-to-English translation pipeline and evaluation tools",
    )
    parser.add_argument("--config", help="path to the YAML config file (default: $LITERA_CONFIG)")
    parser.add_argument("--provider-url", help="chat-completions base URL (overrides config)")
    parser.add_argument("--mock", help="mock script path; use the offline scripted provider")
    parser.add_argument("--verbose", action="store_true", help="verbose traces and logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("translate", help="translate text or a file of segments")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--text", help="one Latin segment")
    group.add_argument("--input", help="file with one segment per line")
    p.add_argument("--variant", help="pipeline variant (default from config)")
    p.add_argument("--non-literal", action="store_true", help="also produce the readability pass")
    p.add_argument("--trace", help="write the JSON trace(s) to this path")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("eval", help="score hypothesis files against a reference corpus")
    p.add_argument("--ref", required=True, help="reference corpus (jsonl or tsv)")
    p.add_argument(
        "--hyp",
        action="append",
        required=True,
        metavar="NAME=FILE",
        help="system name and its hypothesis file (one line per segment); repeatable",
    )
    p.add_argument("--json", help="write the machine-readable report here")
    p.add_argument("--plot", help="render the report figure to this image file")
    p.add_argument("--external", action="store_true", help="add the external learned-metric column")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("ablate", help="run pipeline variants over a corpus and compare")
    p.add_argument("--corpus", required=True, help="reference corpus (jsonl or tsv)")
    p.add_argument("--variants", required=True, help="comma-separated variant names")
    p.add_argument("--json", help="write the machine-readable report here")
    p.add_argument("--plot", help="render the report figure to this image file")
    p.add_argument("--external", action="store_true", help="add the external learned-metric column")
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("export-finetune", help="write a chat-format fine-tune training file")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--job-spec", help="also write the default hyperparameter record here")
    p.set_defaults(func=cmd_export_finetune)

    p = sub.add_parser("serve", help="run the HTTP translation service")
    p.add_argument("--host", help="bind host (default from config)")
    p.add_argument("--port", type=int, help="bind port (default from config)")
    p.set_defaults(func=cmd_serve)
    return parser


def _load_app(args) -> tuple[AppConfig, LlmClient, PromptRegistry]:
    config = load_config(args.config, overrides={"provider.base_url": args.provider_url})
    prompts = PromptRegistry(config.prompt_override_dir)
    if args.mock:
        backend = MockBackend(MockScript.from_file(args.mock))
    else:
        backend = HttpBackend(config.provider)
    client = LlmClient(backend, config.provider, cache_dir=config.cache_dir)
    return config, client, prompts


def _parse_variant(name: str) -> Variant:
    try:
        return Variant(name)
    except ValueError:
        valid = ", ".join(v.value for v in Variant)
        raise InputError(f"unknown variant {name!r}; valid names: {valid}") from None


def cmd_translate(args) -> int:
    config, client, prompts = _load_app(args)
    pipeline_config = config.pipeline
    if args.variant:
        pipeline_config = replace(pipeline_config, variant=_parse_variant(args.variant))
    translator = Translator(client, prompts, pipeline_config)

    if args.text is not None:
        segments = [args.text]
    else:
        try:
            lines = Path(args.input).read_text(encoding="utf-8").split("\n")
        except OSError as exc:
            raise InputError(f"cannot read input file {args.input}: {exc}") from exc
        segments = [line.strip() for line in lines if line.strip()]
        if not segments:
            raise InputError(f"input file {args.input} contains no segments")

    traces = []
    for i, latin in enumerate(segments, start=1):
        trace = translator.translate(latin)
        trace_dict = trace.to_dict(verbose=args.verbose)
        if args.non_literal:
            non_literal = translator.translate_non_literal(latin, trace.final)
            trace_dict["non_literal"] = non_literal
            print(f"[segment {i}] literal:")
            print(trace.final)
            print(f"[segment {i}] non-literal:")
            print(non_literal)
        else:
            print(trace.final)
        traces.append(trace_dict)
    if args.trace:
        Path(args.trace).write_text(
            json.dumps({"traces": traces}, indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
    return EXIT_OK


def _read_hypotheses(path: str) -> list[str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read hypothesis file {path}: {exc}") from exc
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def cmd_eval(args) -> int:
    config = load_config(args.config)
    corpus = load_corpus(args.ref)
    systems: dict[str, list[str]] = {}
    for spec in args.hyp:
        if "=" not in spec:
            raise InputError(f"--hyp expects NAME=FILE, got {spec!r}")
        name, path = spec.split("=", 1)
        if name in systems:
            raise InputError(f"system {name!r} given twice")
        systems[name] = _read_hypotheses(path)
    scorer = None
    if args.external:
        if config.scorer is None:
            raise ConfigurationError("--external requires a scorer section in the config file")
        scorer = config.scorer
    report = build_report(corpus, systems, scorer)
    print(format_table(report))
    if args.json:
        write_json(report, args.json)
    if args.plot:
        render_figure(report, args.plot)
    return EXIT_OK


def cmd_ablate(args) -> int:
    config, client, prompts = _load_app(args)
    names = [n.strip() for n in args.variants.split(",") if n.strip()]
    if not names:
        raise InputError("--variants must name at least one variant")
    variants = [_parse_variant(n) for n in names]
    corpus = load_corpus(args.corpus)
    for seg in corpus:
        if not seg.english:
            raise InputError(f"segment {seg.id!r} has no reference; cannot score the ablation")

    runs = run_ablation(client, prompts, config.pipeline, corpus, variants)

    references = corpus.references()
    rows = []
    for variant, run in runs.items():
        expected = expected_call_count(variant, config.pipeline.k) * len(corpus)
        print(
            f"variant {variant.value}: {run.call_count} calls "
            f"(expected {expected}), {run.total_latency:.3f}s, "
            f"{len(run.failures)} failed segment(s)",
            file=sys.stderr,
        )
        for segment_id, error in run.failures:
            print(f"  segment {segment_id}: {error}", file=sys.stderr)
        if run.failures:
            rows.append(ReportRow(system=variant.value, bleu=None, external=None,
                                  note=f"{len(run.failures)} segment(s) failed"))
            continue
        bleu = bleu_corpus(run.hypotheses(), references)
        external = None
        if args.external:
            if config.scorer is None:
                raise ConfigurationError("--external requires a scorer section in the config file")
            _, external = score_external(config.scorer, run.hypotheses(), references)
        rows.append(ReportRow(system=variant.value, bleu=bleu, external=external))

    report = EvalReport(
        corpus_name=corpus.name,
        segment_count=len(corpus),
        rows=tuple(rows),
        external_metric=config.scorer.name if (args.external and config.scorer) else None,
        created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        config_hash="",
    )
    print(format_table(report))
    if args.json:
        write_json(report, args.json)
    if args.plot:
        render_figure(report, args.plot)
    return EXIT_OK


def cmd_export_finetune(args) -> int:
    config = load_config(args.config)
    prompts = PromptRegistry(config.prompt_override_dir)
    corpus = load_corpus(args.corpus)
    count = export_finetune(corpus, prompts.text(PromptName.FINE_TUNED_SYSTEM), args.out)
    print(count)
    if args.job_spec:
        Path(args.job_spec).write_text(
            json.dumps(FineTuneJobSpec().to_dict(), indent=2) + "\n", encoding="utf-8"
        )
    return EXIT_OK


def cmd_serve(args) -> int:
    config, client, prompts = _load_app(args)
    translator = Translator(client, prompts, config.pipeline)
    service = TranslationService(translator, trace_capacity=config.service.trace_capacity)
    host = args.host or config.service.host
    port = args.port if args.port is not None else config.service.port
    httpd = service.make_server(host, port)
    print(f"serving on http://{host}:{httpd.server_address[1]}", file=sys.stderr)
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        service.begin_drain()
        httpd.shutdown()
    finally:
        httpd.server_close()
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, ScorerConfigError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InputError, CorpusError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (LlmError, PipelineError, ScorerError) as exc:
        print(f"provider error: {exc}", file=sys.stderr)
        return EXIT_PROVIDER
    except LiteraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
