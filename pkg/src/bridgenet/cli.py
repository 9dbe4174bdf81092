"""Command-line interface.

Subcommands mirror the pipeline stages plus a `run` orchestrator. Exit codes
for `run`: 0 success, 2 configuration error, 3 stage failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import annotate as annotate_mod
from . import bridges as bridges_mod
from . import centrality as centrality_mod
from . import community as community_mod
from . import ingest as ingest_mod
from . import report as report_mod
from . import similarity as similarity_mod
from . import text_analysis as text_mod
from . import user_graph as user_mod
from .graph_core import articulation_points, connected_components, read_graph, write_graph


def _cmd_ingest(args) -> int:
    result = ingest_mod.parse_dataset(args.input, args.format)
    stopwords = (
        ingest_mod.load_stopwords(args.stopwords)
        if args.stopwords
        else ingest_mod.default_stopwords()
    )
    records = ingest_mod.build_records(result.posts, stopwords)
    ingest_mod.write_records(records, args.out)
    for err in result.errors:
        print(f"line {err.line}: {err.reason}", file=sys.stderr)
    print(
        f"parsed {len(result.posts)} posts "
        f"({len(result.errors)} errors, {result.duplicates_collapsed} duplicates collapsed)"
    )
    return 0


def _cmd_build_content(args) -> int:
    emb = similarity_mod.load_embeddings(args.emb)
    records = ingest_mod.read_records(args.posts)
    g = similarity_mod.build_content_graph(
        emb,
        records,
        theta=args.theta,
        block_size=args.block_size,
        per_event=args.per_event,
    )
    write_graph(g, args.out)
    print(f"content graph: {g.n} nodes, {g.m} edges (theta {args.theta})")
    return 0


def _cmd_cluster(args) -> int:
    g = read_graph(args.graph)
    partition = community_mod.leiden(g, resolution=args.resolution, seed=args.seed)
    pruned = community_mod.prune(
        g, partition, community_mod.PruneConfig(args.min_size)
    )
    write_graph(pruned, args.out)
    payload = {
        "resolution": partition.resolution,
        "seed": partition.seed,
        "modularity": partition.modularity,
        "sizes": {str(k): v for k, v in sorted(partition.sizes.items())},
        "membership": dict(sorted(partition.membership.items())),
    }
    Path(args.partition).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(
        f"{len(partition.sizes)} clusters -> retained {pruned.n} nodes "
        f"(min size {args.min_size}), modularity {partition.modularity:.4f}"
    )
    return 0


def _cmd_components(args) -> int:
    g = read_graph(args.graph)
    labeling = connected_components(g)
    sizes: dict[int, int] = {}
    for cid in labeling.labels.values():
        sizes[cid] = sizes.get(cid, 0) + 1
    payload = {
        "nodes": g.n,
        "edges": g.m,
        "component_count": labeling.component_count,
        "component_sizes": {str(k): v for k, v in sorted(sizes.items())},
    }
    _emit_json(payload, args.out)
    return 0


def _cmd_artic(args) -> int:
    g = read_graph(args.graph)
    points = articulation_points(g)
    index = g.node_index()
    payload = {
        "nodes": g.n,
        "edges": g.m,
        "articulation_points": sorted(points, key=index.__getitem__),
        "count": len(points),
    }
    _emit_json(payload, args.out)
    return 0


def _cmd_bridges(args) -> int:
    g = read_graph(args.graph)
    report = bridges_mod.find_bridging_nodes(
        g,
        mode=args.mode,
        top_fraction=args.top_fraction,
        per_cluster=args.per_cluster,
    )
    bridges_mod.write_findings(report, args.out)
    print(
        f"{len(report.bridge_nodes())} bridging nodes / {g.n} "
        f"(proportion {report.bridging_proportion:.4f}, mode {report.mode})"
    )
    return 0


def _cmd_centrality(args) -> int:
    g = read_graph(args.graph)
    scores = centrality_mod.compute_all(
        g,
        exact=not args.sample_size,
        sample_size=args.sample_size,
        seed=args.seed,
    )
    with Path(args.out).open("w", encoding="utf-8") as fh:
        fh.write("node,degree,eigenvector,hub,betweenness\n")
        for node, s in scores.items():
            fh.write(f"{node},{s.degree!r},{s.eigenvector!r},{s.hub!r},{s.betweenness!r}\n")
    print(f"centrality for {len(scores)} nodes -> {args.out}")
    return 0


def _cmd_build_user(args) -> int:
    content = read_graph(args.content)
    records = ingest_mod.read_records(args.authors)
    authors = user_mod.authorship_from_records(records)
    g = user_mod.build_user_graph(content, authors, binary=args.binary)
    write_graph(g, args.out)
    stats = user_mod.user_graph_stats(g)
    print(f"user graph: {stats.n} users, {stats.m} links")
    return 0


def _cmd_cues(args) -> int:
    records = ingest_mod.read_records(args.input)
    lexicons = (
        text_mod.load_lexicons(args.lexicons)
        if args.lexicons
        else text_mod.default_lexicons()
    )
    with Path(args.out).open("w", encoding="utf-8") as fh:
        fh.write("node," + ",".join(text_mod.CUE_FIELDS) + "\n")
        for r in records:
            cue = text_mod.extract_cues(r.text, lexicons)
            values = ",".join(repr(v) for v in cue.to_row().values())
            fh.write(f"{r.doc_id},{values}\n")
    print(f"cue vectors for {len(records)} docs -> {args.out}")
    return 0


def _cmd_topics(args) -> int:
    records = ingest_mod.read_records(args.input)
    by_doc = {r.doc_id: r for r in records}
    parts = json.loads(Path(args.partition).read_text("utf-8"))
    membership: dict[str, int] = parts["membership"]
    clusters: dict[int, list[str]] = {}
    for doc_id, cid in membership.items():
        if doc_id in by_doc:
            clusters.setdefault(int(cid), []).append(doc_id)
    entries = []
    for cid in sorted(clusters):
        docs = [
            ingest_mod.CleanDoc(doc_id=d, tokens=by_doc[d].tokens)
            for d in clusters[cid]
        ]
        try:
            model = text_mod.lda_fit(
                docs, k=args.k, iters=args.iters, seed=args.seed,
                min_count=args.min_count,
            )
        except text_mod.LdaError as exc:
            entries.append({"cluster": cid, "skipped": str(exc)})
            continue
        entries.append(
            {
                "cluster": cid,
                "k": model.k,
                "documents": len(docs),
                "perplexity_trace": model.perplexity_trace,
                "topics": [
                    {"topic": t, "top_words": text_mod.top_words(model, t, 10)}
                    for t in range(model.k)
                ],
            }
        )
    Path(args.out).write_text(
        json.dumps(entries, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"topics for {len(clusters)} clusters -> {args.out}")
    return 0


def _cmd_annotate(args) -> int:
    records = ingest_mod.read_records(args.users)
    scores = annotate_mod.load_bot_scores(args.bot_scores) if args.bot_scores else None
    lexicon = (
        annotate_mod.load_identity_lexicon(args.identity_lexicon)
        if args.identity_lexicon
        else annotate_mod.default_identity_lexicon()
    )
    seen: set[str] = set()
    rows = []
    for r in records:
        key = f"{r.platform}:{r.user_id}"
        if key in seen:
            continue
        seen.add(key)
        verdict = annotate_mod.bot_score(
            r.user_id, r.username, scores=scores, strict=args.strict
        )
        identity = annotate_mod.identity_annotate(r.username, lexicon, user_id=r.user_id)
        rows.append(
            {
                "node": key,
                "user_id": r.user_id,
                "username": r.username,
                "p_bot": verdict.p_bot,
                "bot_label": verdict.label,
                "bot_source": verdict.source,
                "identity_terms": list(identity.matched_terms),
                "identity_categories": sorted(identity.categories),
                "has_identity": identity.has_identity,
            }
        )
    Path(args.out).write_text(
        json.dumps(rows, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    bots = sum(1 for row in rows if row["bot_label"] == "bot")
    print(f"annotated {len(rows)} users ({bots} bots) -> {args.out}")
    return 0


def _cmd_run(args) -> int:
    overrides = {
        "input": args.input,
        "theta": args.theta,
        "seed": args.seed,
        "resolution": args.resolution,
        "min_cluster_size": args.min_size,
        "bridge_mode": args.mode,
        "embeddings": args.emb,
    }
    try:
        cfg = report_mod.load_run_config(args.config, overrides)
    except report_mod.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        run_dir = report_mod.run_pipeline(cfg, args.out)
    except report_mod.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except report_mod.StageError as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return 3
    print(f"run complete -> {run_dir}")
    return 0


def _emit_json(payload, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bridgenet",
        description="Bridging-node analysis for multi-platform discourse networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse posts and write cleaned records")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["json-lines", "csv"], default="json-lines")
    p.add_argument("--stopwords", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_ingest)

    p = sub.add_parser("build-content", help="build the similarity content graph")
    p.add_argument("--emb", required=True)
    p.add_argument("--posts", required=True)
    p.add_argument("--theta", type=float, default=similarity_mod.DEFAULT_THETA)
    p.add_argument("--block-size", type=int, default=similarity_mod.DEFAULT_BLOCK_SIZE)
    p.add_argument("--per-event", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_build_content)

    p = sub.add_parser("cluster", help="Leiden clustering and size pruning")
    p.add_argument("--graph", required=True)
    p.add_argument("--resolution", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--min-size", type=int, default=11)
    p.add_argument("--out", required=True)
    p.add_argument("--partition", required=True)
    p.set_defaults(fn=_cmd_cluster)

    p = sub.add_parser("components", help="connected component summary")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_components)

    p = sub.add_parser("artic", help="articulation point summary")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_artic)

    p = sub.add_parser("bridges", help="find bridging nodes")
    p.add_argument("--graph", required=True)
    p.add_argument("--mode", choices=["paper-pipeline", "exact"], default="exact")
    p.add_argument("--top-fraction", type=float, default=0.1)
    p.add_argument("--per-cluster", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_bridges)

    p = sub.add_parser("centrality", help="degree/eigenvector/hub/betweenness")
    p.add_argument("--graph", required=True)
    p.add_argument("--exact", action="store_true", default=True)
    p.add_argument("--sample-size", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_centrality)

    p = sub.add_parser("build-user", help="project content graph onto users")
    p.add_argument("--content", required=True)
    p.add_argument("--authors", required=True)
    p.add_argument("--binary", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_build_user)

    p = sub.add_parser("cues", help="linguistic cue vectors")
    p.add_argument("--input", required=True)
    p.add_argument("--lexicons", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_cues)

    p = sub.add_parser("topics", help="per-cluster topic models")
    p.add_argument("--input", required=True, help="clean records (texts)")
    p.add_argument("--partition", required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--iters", type=int, default=200)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--min-count", type=int, default=2)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_topics)

    p = sub.add_parser("annotate", help="bot and identity annotation")
    p.add_argument("--users", required=True)
    p.add_argument("--bot-scores", default=None)
    p.add_argument("--identity-lexicon", default=None)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_annotate)

    p = sub.add_parser("run", help="execute the full pipeline")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--input", default=None)
    p.add_argument("--emb", default=None)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--resolution", type=float, default=None)
    p.add_argument("--min-size", type=int, default=None, dest="min_size")
    p.add_argument("--mode", choices=["paper-pipeline", "exact"], default=None)
    p.set_defaults(fn=_cmd_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
