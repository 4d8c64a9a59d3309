"""Command-line driver for the whole pipeline.

Subcommands: fetch (populate the snapshot store), generate (produce a run
file from the store), evaluate (score a run against judgments), experiment
(run a configuration matrix and render the comparison table), serve (start
the HTTP service).

Exit codes: 0 success, 1 partial failure, 2 usage or input-format error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .adapters import AdapterSettings, NetworkError, fetch
from .config import ConfigError, config_from_dict
from .evaluation import (
    FormatError,
    evaluate_run,
    paired_ttest,
    parse_qrels,
    parse_topics,
    significance_marker,
)
from .experiment import matrix_from_file, run_experiment
from .model import ALL_SOURCE_IDS, SOURCE_TYPES, source_for_id, source_ids_of_types
from .runs import generate_runs, write_run_file, write_text_atomic
from .snapshots import SnapshotStore


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tasksugg",
        description="Task-covering query suggestions and their evaluation harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, store=True):
        p.add_argument("--config", type=Path, help="pipeline config JSON")
        if store:
            p.add_argument("--store", type=Path, required=True, help="snapshot store directory")
        p.add_argument("--jobs", type=int, default=1, help="topic-level parallelism")

    p_fetch = sub.add_parser("fetch", help="fetch live source responses into the store")
    common(p_fetch)
    p_fetch.add_argument("--topics", type=Path, required=True, help="topics JSON file")
    p_fetch.add_argument(
        "--sources",
        help="comma-separated source ids or types (default: configured sources)",
    )
    p_fetch.add_argument("--k", type=int, help="results per source (default from config)")
    p_fetch.add_argument(
        "--refetch",
        action="store_true",
        help="overwrite existing snapshots instead of skipping them",
    )

    p_gen = sub.add_parser("generate", help="produce a run file from the store")
    common(p_gen)
    p_gen.add_argument("--topics", type=Path, required=True, help="topics JSON file")
    p_gen.add_argument("--out", type=Path, required=True, help="run file to write")
    p_gen.add_argument(
        "--strict",
        action="store_true",
        help="exit nonzero when any topic lacks snapshots",
    )

    p_eval = sub.add_parser("evaluate", help="score a run file against judgments")
    p_eval.add_argument("--run", type=Path, required=True, help="run file to score")
    p_eval.add_argument("--qrels", type=Path, required=True, help="judgments file")
    p_eval.add_argument("--baseline", type=Path, help="baseline run for significance")
    p_eval.add_argument("--out", type=Path, help="write the JSON report here")
    p_eval.add_argument("--cutoff", type=int, default=20)
    p_eval.add_argument("--alpha", type=float, default=0.5)

    p_exp = sub.add_parser("experiment", help="run a configuration matrix")
    common(p_exp)
    p_exp.add_argument("--topics", type=Path, required=True, help="topics JSON file")
    p_exp.add_argument("--qrels", type=Path, required=True, help="judgments file")
    p_exp.add_argument("--matrix", type=Path, required=True, help="matrix JSON")
    p_exp.add_argument("--out-dir", type=Path, required=True)

    p_serve = sub.add_parser("serve", help="serve suggestions over HTTP")
    common(p_serve)
    p_serve.add_argument("--topics", type=Path, help="topics file for query lookup")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8080)
    p_serve.add_argument("--live", action="store_true", help="fetch unseen queries live")

    return parser


def _load_config_dict(path: Path | None) -> tuple[dict, Path | None]:
    if path is None:
        return {}, None
    try:
        return json.loads(path.read_text("utf-8")), path.parent
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def _parse_source_list(raw: str) -> tuple[str, ...]:
    entries = [e.strip() for e in raw.split(",") if e.strip()]
    types = [e for e in entries if e in SOURCE_TYPES]
    ids = [e for e in entries if e not in SOURCE_TYPES]
    for sid in ids:
        source_for_id(sid)
    seen: dict[str, None] = {}
    for sid in tuple(ids) + source_ids_of_types(types):
        seen.setdefault(sid)
    return tuple(seen)


def cmd_fetch(args) -> int:
    config_dict, base_dir = _load_config_dict(args.config)
    cfg = config_from_dict(config_dict, base_dir=base_dir)
    settings = AdapterSettings.from_config(config_dict.get("adapters"))
    sources = _parse_source_list(args.sources) if args.sources else cfg.sources
    k = args.k or cfg.k
    topics = parse_topics(args.topics)
    store = SnapshotStore(args.store)

    tasks = []
    for topic in sorted(topics, key=lambda t: t.topic_id):
        for source_id in sources:
            tasks.append((topic, source_id))

    def work(task):
        topic, source_id = task
        if not args.refetch and store.exists(topic.topic_id, source_id):
            return topic.topic_id, source_id, "kept", None
        try:
            record = fetch(source_for_id(source_id), topic, k, settings)
            store.save(record)
            return topic.topic_id, source_id, f"{len(record.documents)} docs", None
        except NetworkError as exc:
            return topic.topic_id, source_id, None, str(exc)

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(work, tasks))
    else:
        outcomes = [work(t) for t in tasks]

    failures = 0
    for topic_id, source_id, status, error in outcomes:
        if error is None:
            print(f"ok   {topic_id} {source_id}: {status}")
        else:
            failures += 1
            print(f"FAIL {topic_id} {source_id}: {error}")
    print(f"{len(outcomes) - failures}/{len(outcomes)} fetches succeeded")
    return 1 if failures else 0


def cmd_generate(args) -> int:
    config_dict, base_dir = _load_config_dict(args.config)
    cfg = config_from_dict(config_dict, base_dir=base_dir)
    topics = parse_topics(args.topics)
    store = SnapshotStore(args.store)
    results, skipped = generate_runs(topics, store, cfg, jobs=args.jobs)
    for topic_id in skipped:
        print(f"warning: skipped topic {topic_id} (missing snapshots)", file=sys.stderr)
    write_run_file(args.out, results, cfg)
    print(f"wrote {args.out} ({len(results)} topics, config {cfg.config_hash()})")
    return 1 if (skipped and args.strict) else 0


def cmd_evaluate(args) -> int:
    report = evaluate_run(args.run, args.qrels, cutoff=args.cutoff, alpha=args.alpha)
    output = report.render_text()

    if args.baseline:
        base_report = evaluate_run(
            args.baseline, args.qrels, cutoff=args.cutoff, alpha=args.alpha
        )
        common = sorted(set(report.per_topic) & set(base_report.per_topic))
        if len(common) >= 2:
            _, p_err = paired_ttest(
                [report.per_topic[t].err_ia for t in common],
                [base_report.per_topic[t].err_ia for t in common],
            )
            _, p_ndcg = paired_ttest(
                [report.per_topic[t].alpha_ndcg for t in common],
                [base_report.per_topic[t].alpha_ndcg for t in common],
            )
            output += (
                f"# vs baseline {args.baseline.name}: "
                f"ERR-IA p={p_err:.4g}{significance_marker(p_err)} "
                f"a-NDCG p={p_ndcg:.4g}{significance_marker(p_ndcg)}\n"
            )
        else:
            output += "# vs baseline: too few common topics for a paired test\n"

    print(output, end="")
    if args.out:
        write_text_atomic(
            args.out, json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
        )
    return 0


def cmd_experiment(args) -> int:
    config_dict, base_dir = _load_config_dict(args.config)
    matrix = matrix_from_file(args.matrix)
    topics = parse_topics(args.topics)
    qrels = parse_qrels(args.qrels)
    store = SnapshotStore(args.store)
    result = run_experiment(
        matrix,
        config_dict,
        store,
        topics,
        qrels,
        args.out_dir,
        base_dir=base_dir,
        jobs=args.jobs,
    )
    print(result.render_text(), end="")
    print(f"reports written to {args.out_dir}")
    return 0


def cmd_serve(args) -> int:
    from .service import ServiceSettings, serve

    config_dict, base_dir = _load_config_dict(args.config)
    cfg = config_from_dict(config_dict, base_dir=base_dir)
    adapter_settings = AdapterSettings.from_config(config_dict.get("adapters"))
    service_section = config_dict.get("service", {})
    topics_path = args.topics
    if topics_path is None and service_section.get("topics"):
        topics_path = Path(service_section["topics"])
        if base_dir is not None and not topics_path.is_absolute():
            topics_path = base_dir / topics_path
    settings = ServiceSettings(
        store_path=args.store,
        config=cfg,
        topics_path=topics_path,
        live=args.live,
        adapter_settings=adapter_settings,
        cors_origins=tuple(service_section.get("cors_origins", ("*",))),
    )
    serve(settings, host=args.host, port=args.port)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "fetch": cmd_fetch,
        "generate": cmd_generate,
        "evaluate": cmd_evaluate,
        "experiment": cmd_experiment,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
