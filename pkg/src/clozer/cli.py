"""Command-line driver for generation, ranking, grading, serving, analysis.

Exit codes: 0 success, 1 runtime failure, 2 usage error. All randomness
sits behind explicit --seed flags so every command is reproducible.
"""

from __future__ import annotations

import argparse
import json
import os
import socket
import sys
from dataclasses import asdict
from pathlib import Path

from . import analysis, pipeline, question_bank, text_corpus
from .grading import grade
from .mlm_backend import BackendDescriptor
from .question_bank import load_bank, save_bank
from .text_corpus import ExtractionConfig, WordList

DATA_DIR_ENV = "CLOZER_DATA_DIR"


def _parse_backend(spec: str) -> tuple[str, str]:
    kind, _, rest = spec.partition(":")
    if kind not in ("tabular", "remote") or not rest:
        raise argparse.ArgumentTypeError(
            f"backend must look like tabular:<path> or remote:<url>, got {spec!r}"
        )
    return kind, rest


def _gap_value(raw: str) -> float:
    value = float(raw)
    if not 0.0 <= value < 1.0:
        raise argparse.ArgumentTypeError(f"min-gap must lie in [0, 1), got {raw}")
    return value


def _collect_corpus_paths(corpus: str) -> tuple[list[Path], Path | None]:
    path = Path(corpus)
    if path.is_dir():
        files = sorted(p for p in path.rglob("*") if p.is_file())
        return files, path
    return [path], None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clozer", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a question bank from a corpus")
    gen.add_argument("--corpus", required=True, help="corpus file or directory")
    gen.add_argument("--format", choices=["plaintext", "jsonl", "auto"], default="auto")
    gen.add_argument("--wordlist", required=True, help="allowed-vocabulary list file")
    gen.add_argument("--targets", required=True, help="file with one target word per line")
    gen.add_argument("--backend", required=True, type=_parse_backend,
                     help="tabular:<predictions.jsonl> or remote:<url>")
    gen.add_argument("--model-name", default=None, help="model label recorded in the bank")
    gen.add_argument("--mask-token", default="[MASK]")
    gen.add_argument("--top-m", type=int, default=50)
    gen.add_argument("--k", type=int, default=2, help="top-k for the reweighting factor")
    gen.add_argument("--min-gap", type=_gap_value, default=0.80)
    gen.add_argument("--per-target-limit", type=int, default=20)
    gen.add_argument("--min-tokens", type=int, default=8)
    gen.add_argument("--max-tokens", type=int, default=30)
    gen.add_argument("--keep-repeated-target", action="store_true",
                     help="keep sentences where the target occurs more than once")
    gen.add_argument("--no-exempt-capitalized", action="store_true",
                     help="apply the word list to capitalized mid-sentence tokens too")
    gen.add_argument("--sample", type=int, default=None,
                     help="randomly sample this many questions from the selected set")
    gen.add_argument("--seed", type=int, default=0, help="seed for --sample")
    gen.add_argument("--created-at", default=None,
                     help="timestamp recorded on questions (default: now; pin for reproducible banks)")
    gen.add_argument("--out", required=True, help="bank file to write")
    gen.add_argument("--report", default=None, help="optional JSON report path")

    rank = sub.add_parser("rank", help="list bank questions by gap score")
    rank.add_argument("--bank", required=True)
    rank.add_argument("--top", type=int, default=None)

    gr = sub.add_parser("grade", help="grade one answer against a ground truth")
    gr.add_argument("--truth", required=True)
    gr.add_argument("--answer", required=True)

    serve = sub.add_parser("serve", help="run the quiz HTTP service")
    serve.add_argument("--bank", required=True)
    serve.add_argument("--data-dir", default=os.environ.get(DATA_DIR_ENV, "data"))
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    ana = sub.add_parser("analyze", help="correlate gap scores with correct ratios")
    ana.add_argument("--bank", required=True)
    ana.add_argument("--log", required=True, help="answer log (JSON-lines)")
    ana.add_argument("--out", required=True, help="scatter CSV path")
    ana.add_argument("--metric", choices=["exact", "stem"], default="exact")

    return parser


def cmd_generate(args: argparse.Namespace) -> int:
    for name in ("wordlist", "targets"):
        if not Path(getattr(args, name)).is_file():
            print(f"error: --{name} file not found: {getattr(args, name)}", file=sys.stderr)
            return 2
    corpus_path = Path(args.corpus)
    if not corpus_path.exists():
        print(f"error: --corpus not found: {args.corpus}", file=sys.stderr)
        return 2

    targets = []
    for line in Path(args.targets).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            targets.append(line.lower())
    if not targets:
        print("error: no targets", file=sys.stderr)
        return 2

    paths, root = _collect_corpus_paths(args.corpus)
    fmt = args.format
    if fmt == "auto":
        fmt = "jsonl" if all(p.suffix == ".jsonl" for p in paths) and paths else "plaintext"
    corpus, errors = text_corpus.ingest_corpus(paths, format=fmt, root=root)
    for path, message in errors:
        print(f"warning: {path}: {message}", file=sys.stderr)
    if not corpus:
        print("error: corpus produced no sentences", file=sys.stderr)
        return 1

    kind, location = args.backend
    descriptor = BackendDescriptor(
        kind=kind,
        model_name=args.model_name or kind,
        mask_token=args.mask_token,
        endpoint=location if kind == "remote" else None,
        table_path=location if kind == "tabular" else None,
        top_m=args.top_m,
    )
    extraction = ExtractionConfig(
        min_tokens=args.min_tokens,
        max_tokens=args.max_tokens,
        word_list=WordList.load(args.wordlist),
        exempt_capitalized=not args.no_exempt_capitalized,
        drop_repeated_target=not args.keep_repeated_target,
    )
    job = pipeline.GenerationJob(
        targets=targets,
        extraction=extraction,
        backend=descriptor,
        k=args.k,
        min_gap=args.min_gap,
        per_target_limit=args.per_target_limit,
    )
    try:
        questions, report = pipeline.run_generation(job, corpus, created_at=args.created_at)
    except Exception as exc:
        print(f"error: generation failed: {exc}", file=sys.stderr)
        return 1

    if args.sample is not None:
        questions = pipeline.sample_questions(questions, args.sample, args.seed)

    save_bank(questions, args.out)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as handle:
            json.dump(asdict(report), handle, indent=2)

    for target_report in report.targets:
        skips = ", ".join(f"{k}={v}" for k, v in sorted(target_report.skipped.items())) or "-"
        print(
            f"{target_report.target}: extracted={target_report.extracted} "
            f"filtered={target_report.filtered} predicted={target_report.predicted} "
            f"scored={target_report.scored} selected={target_report.selected} skipped: {skips}"
        )
    print(f"wrote {len(questions)} question(s) to {args.out}")
    if not questions:
        print("error: no questions produced", file=sys.stderr)
        return 1
    return 0


def cmd_rank(args: argparse.Namespace) -> int:
    try:
        bank = load_bank(args.bank)
    except (OSError, question_bank.BankError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    chosen = question_bank.select(bank, limit=args.top)
    for position, q in enumerate(chosen, start=1):
        print(f"{position:3d}  phi={q.phi:.6f}  target={q.target_word:<15s} {q.masked_text}")
    return 0


def cmd_grade(args: argparse.Namespace) -> int:
    result = grade(args.answer, args.truth)
    print(f"answer:     {result.normalized_answer!r}")
    print(f"truth:      {result.normalized_truth!r}")
    print(f"exact:      {'yes' if result.exact else 'no'}")
    print(f"stem match: {'yes' if result.stem else 'no'}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    if not Path(args.bank).is_file():
        print(f"error: bank file not found: {args.bank}", file=sys.stderr)
        return 2
    try:
        with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as probe:
            probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
            probe.bind((args.host, args.port))
    except OSError as exc:
        print(f"error: cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 1

    import uvicorn

    from .service import build_app

    app = build_app(args.bank, args.data_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    try:
        bank = load_bank(args.bank)
    except (OSError, question_bank.BankError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    rows = []
    try:
        with open(args.log, encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if line:
                    rows.append(json.loads(line))
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read answer log: {exc}", file=sys.stderr)
        return 1
    if not rows:
        print("error: answer log is empty", file=sys.stderr)
        return 1
    try:
        stats = analysis.aggregate(bank, rows)
        phis, ratios = analysis.correlation_series(stats, metric=args.metric)
        r = analysis.pearson(phis, ratios)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    analysis.write_scatter_csv(stats, args.out)
    print(f"questions with answers: {len(phis)}")
    print(f"pearson r (gap score vs {args.metric} ratio): {r:.6f}")
    print(f"scatter written to {args.out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "generate": cmd_generate,
        "rank": cmd_rank,
        "grade": cmd_grade,
        "serve": cmd_serve,
        "analyze": cmd_analyze,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
