"""Command-line entrypoint: ingest, build, export, serve, eval.

Logs go to stderr; machine-readable output goes to files or stdout. Exit
codes: 0 success, 1 runtime failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

from . import evalkit, server
from .config import load_config
from .corpus import export_corpus, ingest_corpus
from .errors import ConfigError, SitrepError
from .pipeline import build_report_data, dump_clusters
from .providers import mock_backend
from .report import dumps_canonical, export, loads_report, write_export

logger = logging.getLogger("sitrep")

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def _atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def cmd_ingest(args: argparse.Namespace) -> int:
    articles = ingest_corpus(args.corpus)
    export_corpus(articles, args.out)
    logger.info("wrote %d normalized articles to %s", len(articles), args.out)
    return EXIT_OK


_OVERRIDABLE = ("weeks", "cluster_threshold", "n_sets", "dedup_threshold", "snippet_size", "top_k", "seed")


def cmd_build(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    overrides = {name: getattr(args, name) for name in _OVERRIDABLE if getattr(args, name) is not None}
    if overrides:
        cfg = replace(cfg, **overrides)
    cfg.validate()
    if args.dump_clusters:
        _atomic_write_text(Path(args.dump_clusters), json.dumps(dump_clusters(cfg), indent=2) + "\n")
        logger.info("cluster dump written to %s", args.dump_clusters)
    report = build_report_data(cfg)
    out = Path(args.out)
    _atomic_write_text(out, dumps_canonical(report))
    logger.info("report written to %s", out)
    if args.dump_stages:
        _write_stage_dumps(report, Path(args.dump_stages))
    print(out)
    return EXIT_OK


def _write_stage_dumps(report: dict, directory: Path) -> None:
    """Debug views per chapter (questions) and per section (contexts, summaries)."""
    n = 0
    for span in report["timespans"]:
        for chapter in span["chapters"]:
            questions = [s["question"] for s in chapter["sections"]]
            _atomic_write_text(
                directory / f"{chapter['id']}-questions.json", json.dumps(questions, indent=2) + "\n"
            )
            n += 1
            for section in chapter["sections"]:
                _atomic_write_text(
                    directory / f"{section['id']}-contexts.json",
                    json.dumps(section["contexts"], indent=2) + "\n",
                )
                _atomic_write_text(
                    directory / f"{section['id']}-summaries.json",
                    json.dumps(section["summaries"], indent=2, sort_keys=True) + "\n",
                )
                n += 2
    logger.info("wrote %d stage dump files to %s", n, directory)


def cmd_export(args: argparse.Namespace) -> int:
    report = loads_report(Path(args.report).read_text(encoding="utf-8"))
    out = Path(args.out) if args.out else Path(args.report).with_suffix(f".{args.format}")
    write_export(report, args.format, out)
    logger.info("exported %s to %s", args.format, out)
    print(out)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    cors = args.cors.split(",") if args.cors else None
    server.serve(args.report, bind_address=args.bind, cors_origins=cors)
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    result: dict = {}
    if args.pairs:
        pairs = evalkit.load_edit_pairs(args.pairs)
        result.update(evalkit.evaluate_pairs(pairs, max_n=args.max_n))
    if args.labels:
        labels = evalkit.load_labels_csv(args.labels)
        result["review"] = evalkit.aggregate_review(labels)
    if args.report:
        result["citations"] = _report_citation_stats(args.report, args.entail_threshold)
    if not result:
        raise ConfigError("eval needs at least one of --pairs, --labels, --report")
    print(evalkit.render_table(result))
    if args.report_out:
        _atomic_write_text(Path(args.report_out), json.dumps(result, indent=2, sort_keys=True) + "\n")
        logger.info("metrics written to %s", args.report_out)
    return EXIT_OK


def _report_citation_stats(report_path: str, entail_threshold: float) -> dict:
    """Citation quality over every summary in a built report, mock judge."""
    from .extraction import ClaimContext
    from .summarize import DetailLevel, GroundedSummary, SummarySentence

    report = loads_report(Path(report_path).read_text(encoding="utf-8"))
    judge = mock_backend(seed=report["provenance"].get("seed", 0))
    totals = {"precision": 0.0, "recall": 0.0, "coverage": 0.0, "multi_citation_rate": 0.0}
    n = 0
    for span in report["timespans"]:
        for chapter in span["chapters"]:
            for section in chapter["sections"]:
                contexts = [
                    ClaimContext(
                        question_ref=section["id"],
                        article_id=c["article_id"],
                        answer_span=tuple(c["answer_span"]),
                        window_text=c["window_text"],
                        window_range=tuple(c["window_range"]),
                        validation_score=c["validation_score"],
                        extraction_confidence=c["extraction_confidence"],
                        source_bias=c["source_bias"],
                    )
                    for c in section["contexts"]
                ]
                for level_name, s in section["summaries"].items():
                    summary = GroundedSummary(
                        question_ref=section["id"],
                        level=DetailLevel(level_name),
                        sentences=tuple(
                            SummarySentence(text=x["text"], citations=tuple(x["citations"]))
                            for x in s["sentences"]
                        ),
                        raw_text=s["raw_text"],
                        dangling_citations=s["dangling_citations"],
                    )
                    quality = evalkit.citation_quality(summary, contexts, judge, entail_threshold)
                    for key, value in quality.as_dict().items():
                        totals[key] += value
                    n += 1
    return {key: (value / n if n else 0.0) for key, value in totals.items()}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sitrep", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="validate and normalize a corpus JSONL")
    p_ingest.add_argument("--corpus", required=True)
    p_ingest.add_argument("--out", required=True)
    p_ingest.set_defaults(func=cmd_ingest)

    p_build = sub.add_parser("build", help="run the full pipeline from a config file")
    p_build.add_argument("--config", required=True)
    p_build.add_argument("--out", default="report.json")
    p_build.add_argument("--dump-clusters", metavar="PATH", default=None)
    p_build.add_argument("--dump-stages", metavar="DIR", default=None, help="write per-chapter/section debug JSON")
    p_build.add_argument("--weeks", type=int, default=None)
    p_build.add_argument("--cluster-threshold", dest="cluster_threshold", type=float, default=None)
    p_build.add_argument("--n-sets", dest="n_sets", type=int, default=None)
    p_build.add_argument("--dedup-threshold", dest="dedup_threshold", type=float, default=None)
    p_build.add_argument("--snippet-size", dest="snippet_size", type=int, default=None)
    p_build.add_argument("--top-k", dest="top_k", type=int, default=None)
    p_build.add_argument("--seed", type=int, default=None)
    p_build.set_defaults(func=cmd_build)

    p_export = sub.add_parser("export", help="render a report file as json or html")
    p_export.add_argument("--report", required=True)
    p_export.add_argument("--format", choices=("json", "html"), required=True)
    p_export.add_argument("--out", default=None)
    p_export.set_defaults(func=cmd_export)

    p_serve = sub.add_parser("serve", help="serve a report file over HTTP")
    p_serve.add_argument("--report", required=True)
    p_serve.add_argument("--bind", default="127.0.0.1:8000")
    p_serve.add_argument("--cors", default=None, help="comma-separated allowed origins")
    p_serve.set_defaults(func=cmd_serve)

    p_eval = sub.add_parser("eval", help="run the evaluation kit")
    p_eval.add_argument("--pairs", default=None, help="edit pairs JSONL")
    p_eval.add_argument("--labels", default=None, help="review labels CSV")
    p_eval.add_argument("--report", default=None, help="report JSON for citation stats")
    p_eval.add_argument("--report-out", dest="report_out", default=None)
    p_eval.add_argument("--max-n", dest="max_n", type=int, default=4)
    p_eval.add_argument("--entail-threshold", dest="entail_threshold", type=float, default=0.5)
    p_eval.set_defaults(func=cmd_eval)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        stream=sys.stderr, level=os.environ.get("SITREP_LOG", "INFO"), format="%(levelname)s %(name)s: %(message)s"
    )
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        logger.error("configuration error: %s", exc)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        logger.error("%s: %s", args.command, exc)
        return EXIT_USAGE
    except SitrepError as exc:
        logger.error("%s failed: %s", args.command, exc)
        return EXIT_RUNTIME
    except KeyboardInterrupt:
        logger.error("interrupted")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
