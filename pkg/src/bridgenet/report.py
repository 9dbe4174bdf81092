"""End-to-end run orchestration and comparison reporting.

A run executes ingest, similarity, clustering, projection, bridging,
centrality, cues, topics, and annotation in order, writes every stage output
into one run directory, and records a manifest with resolved parameters and
content hashes. Identical config and seeds give a byte-identical manifest.
The report layer only aggregates stage outputs; it never recomputes metrics.
"""

from __future__ import annotations

import csv
import hashlib
import json
import shutil
import statistics
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from . import __version__
from . import annotate as annotate_mod
from . import bridges as bridges_mod
from . import centrality as centrality_mod
from . import community as community_mod
from . import ingest as ingest_mod
from . import similarity as similarity_mod
from . import text_analysis as text_mod
from . import user_graph as user_mod
from .graph_core import Graph, write_graph

PLATFORM_ORDER = ingest_mod.PLATFORMS


class ConfigError(Exception):
    pass


class StageError(Exception):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


# -- platform link matrix -------------------------------------------------------


@dataclass
class PlatformLinkMatrix:
    platforms: tuple[str, ...]
    counts: list[list[int]]  # symmetric, diagonal = intra-platform links
    total: int
    cross_platform_fraction: float

    def to_json(self) -> dict:
        return {
            "platforms": list(self.platforms),
            "counts": self.counts,
            "total": self.total,
            "cross_platform_fraction": self.cross_platform_fraction,
        }


def platform_link_matrix(g: Graph) -> PlatformLinkMatrix:
    """Edge counts by endpoint-platform pair; fraction of cross-platform mass."""
    pos = {p: i for i, p in enumerate(PLATFORM_ORDER)}
    counts = [[0] * len(PLATFORM_ORDER) for _ in PLATFORM_ORDER]
    cross = 0
    total = 0
    for u, v, _w in g.edges():
        pu = g.attrs(u).get("platform")
        pv = g.attrs(v).get("platform")
        if pu not in pos or pv not in pos:
            missing = u if pu not in pos else v
            raise ValueError(f"node {missing!r} lacks a platform attribute")
        i, j = pos[pu], pos[pv]
        counts[i][j] += 1
        if i != j:
            counts[j][i] += 1
            cross += 1
        total += 1
    return PlatformLinkMatrix(
        platforms=PLATFORM_ORDER,
        counts=counts,
        total=total,
        cross_platform_fraction=cross / total if total else 0.0,
    )


# -- node profiles and group comparison -------------------------------------------


@dataclass
class NodeProfile:
    node: str
    kind: str
    platform: str
    cluster_id: Optional[int]
    is_bridge: bool
    tested: bool
    centrality: centrality_mod.CentralityScores
    cues: text_mod.CueVector
    bot: Optional[annotate_mod.BotVerdict] = None
    identity: Optional[annotate_mod.IdentityAnnotation] = None

    def metric(self, name: str) -> float:
        if hasattr(self.centrality, name):
            return float(getattr(self.centrality, name))
        return float(getattr(self.cues, name))


METRIC_NAMES = ("degree", "eigenvector", "hub", "betweenness") + text_mod.CUE_FIELDS


@dataclass
class GroupStats:
    count: int
    empty: bool
    means: dict[str, float] = field(default_factory=dict)
    medians: dict[str, float] = field(default_factory=dict)
    bot_scored: int = 0
    bot_count: int = 0
    identity_annotated: int = 0
    identity_present: int = 0
    identity_distribution: dict[str, int] = field(default_factory=dict)

    @property
    def bot_fraction(self) -> Optional[float]:
        return self.bot_count / self.bot_scored if self.bot_scored else None

    @property
    def identity_fraction(self) -> Optional[float]:
        if not self.identity_annotated:
            return None
        return self.identity_present / self.identity_annotated

    def to_json(self) -> dict:
        return {
            "count": self.count,
            "empty": self.empty,
            "means": self.means,
            "medians": self.medians,
            "bot_scored": self.bot_scored,
            "bot_count": self.bot_count,
            "bot_fraction": self.bot_fraction,
            "identity_annotated": self.identity_annotated,
            "identity_present": self.identity_present,
            "identity_fraction": self.identity_fraction,
            "identity_distribution": dict(sorted(self.identity_distribution.items())),
        }


@dataclass
class BridgingComparison:
    bridging: GroupStats
    non_bridging: GroupStats

    def to_json(self) -> dict:
        return {
            "bridging": self.bridging.to_json(),
            "non_bridging": self.non_bridging.to_json(),
        }


def _group_stats(profiles: list[NodeProfile]) -> GroupStats:
    if not profiles:
        return GroupStats(count=0, empty=True)
    stats = GroupStats(count=len(profiles), empty=False)
    for name in METRIC_NAMES:
        values = [p.metric(name) for p in profiles]
        stats.means[name] = statistics.fmean(values)
        stats.medians[name] = float(statistics.median(values))
    for p in profiles:
        if p.bot is not None:
            stats.bot_scored += 1
            if p.bot.label == "bot":
                stats.bot_count += 1
        if p.identity is not None:
            stats.identity_annotated += 1
            if p.identity.has_identity:
                stats.identity_present += 1
            for cat in sorted(p.identity.categories):
                stats.identity_distribution[cat] = (
                    stats.identity_distribution.get(cat, 0) + 1
                )
    return stats


def bridging_comparison(profiles: list[NodeProfile]) -> BridgingComparison:
    """Metric means/medians, bot fraction, and identity mix per bridge group."""
    bridging = [p for p in profiles if p.is_bridge]
    rest = [p for p in profiles if not p.is_bridge]
    return BridgingComparison(
        bridging=_group_stats(bridging), non_bridging=_group_stats(rest)
    )


def build_profiles(
    g: Graph,
    findings: list[bridges_mod.BridgeFinding],
    centralities: dict[str, centrality_mod.CentralityScores],
    cues: dict[str, text_mod.CueVector],
    bots: dict[str, annotate_mod.BotVerdict] | None = None,
    identities: dict[str, annotate_mod.IdentityAnnotation] | None = None,
) -> list[NodeProfile]:
    by_node = {f.node: f for f in findings}
    profiles = []
    for node in g.nodes():
        finding = by_node[node]
        attrs = g.attrs(node)
        profiles.append(
            NodeProfile(
                node=node,
                kind=attrs.get("kind", "content"),
                platform=attrs.get("platform", "unknown"),
                cluster_id=attrs.get("cluster_id"),
                is_bridge=finding.is_bridge,
                tested=finding.tested,
                centrality=centralities[node],
                cues=cues[node],
                bot=(bots or {}).get(node),
                identity=(identities or {}).get(node),
            )
        )
    return profiles


# -- run configuration ------------------------------------------------------------

_CONFIG_TYPES: dict[str, type] = {
    "input": str,
    "format": str,
    "stopwords": str,
    "embeddings": str,
    "embedding_dim": int,
    "theta": float,
    "block_size": int,
    "resolution": float,
    "min_cluster_size": int,
    "seed": int,
    "bridge_mode": str,
    "top_fraction": float,
    "per_cluster": bool,
    "lda_topics": int,
    "lda_iters": int,
    "lda_min_count": int,
    "bot_scores": str,
    "bot_strict": bool,
    "identity_lexicon": str,
    "lexicons": str,
    "per_event": bool,
    "binary_user_graph": bool,
}


@dataclass
class RunConfig:
    input: str
    format: str = "json-lines"
    stopwords: Optional[str] = None
    embeddings: Optional[str] = None
    embedding_dim: int = 64
    theta: float = similarity_mod.DEFAULT_THETA
    block_size: int = similarity_mod.DEFAULT_BLOCK_SIZE
    resolution: float = 1.0
    min_cluster_size: int = 11
    seed: int = 7
    bridge_mode: str = "exact"
    top_fraction: float = 0.1
    per_cluster: bool = False
    lda_topics: int = 3
    lda_iters: int = 200
    lda_min_count: int = 2
    bot_scores: Optional[str] = None
    bot_strict: bool = False
    identity_lexicon: Optional[str] = None
    lexicons: Optional[str] = None
    per_event: bool = False
    binary_user_graph: bool = False

    def validate(self) -> None:
        if not self.input:
            raise ConfigError("config key 'input' is required")
        if self.format not in ("json-lines", "csv"):
            raise ConfigError(f"unknown input format {self.format!r}")
        if not 0.0 <= self.theta <= 1.0:
            raise ConfigError(f"theta must lie in [0, 1], got {self.theta}")
        if self.bridge_mode not in ("exact", "paper-pipeline"):
            raise ConfigError(f"unknown bridge_mode {self.bridge_mode!r}")
        if not 0.0 < self.top_fraction <= 1.0:
            raise ConfigError(f"top_fraction must lie in (0, 1], got {self.top_fraction}")
        if self.min_cluster_size < 1:
            raise ConfigError("min_cluster_size must be >= 1")
        if self.lda_topics < 1:
            raise ConfigError("lda_topics must be >= 1")
        if self.embedding_dim < 1:
            raise ConfigError("embedding_dim must be >= 1")


def _coerce(key: str, raw: str):
    typ = _CONFIG_TYPES[key]
    if typ is bool:
        lowered = raw.strip().lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"config key {key!r}: expected a boolean, got {raw!r}")
    try:
        return typ(raw.strip())
    except ValueError as exc:
        raise ConfigError(f"config key {key!r}: {exc}") from exc


def load_run_config(path: str | Path, overrides: dict | None = None) -> RunConfig:
    """Parse a plain-text `key = value` config file; overrides win over keys."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"no such config file: {path}")
    values: dict = {}
    for lineno, line in enumerate(path.read_text("utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, raw = stripped.partition("=")
        key = key.strip().lower().replace("-", "_")
        if key not in _CONFIG_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = _coerce(key, raw)
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value
    if "input" not in values:
        raise ConfigError("config key 'input' is required")
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


# -- pipeline ---------------------------------------------------------------------


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with path.open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_json(path: Path, payload) -> None:
    with path.open("w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


class _RunState:
    """Mutable carrier for stage products inside one pipeline run."""

    def __init__(self, cfg: RunConfig, root: Path):
        self.cfg = cfg
        self.root = root
        self.records: list[ingest_mod.DocRecord] = []
        self.emb: similarity_mod.EmbeddingMatrix | None = None
        self.content: Graph | None = None
        self.content_pruned: Graph | None = None
        self.user: Graph | None = None
        self.user_pruned: Graph | None = None
        self.reports: dict[str, bridges_mod.BridgeReport] = {}
        self.centralities: dict[str, dict[str, centrality_mod.CentralityScores]] = {}
        self.cues: dict[str, dict[str, text_mod.CueVector]] = {}
        self.bots: dict[str, annotate_mod.BotVerdict] = {}
        self.identities: dict[str, annotate_mod.IdentityAnnotation] = {}
        self.partitions: dict[str, community_mod.Partition] = {}


def run_pipeline(cfg: RunConfig, out_dir: str | Path) -> Path:
    """Execute every stage into `out_dir`; returns the run directory.

    The directory is assembled in a temp sibling and moved into place when
    complete, so a finished run dir is always whole. On stage failure the
    manifest still lands, recording the failed stage.
    """
    cfg.validate()
    out = Path(out_dir)
    if out.exists():
        raise ConfigError(f"output directory already exists: {out}")
    out.parent.mkdir(parents=True, exist_ok=True)
    tmp = out.parent / f".{out.name}.partial"
    if tmp.exists():
        shutil.rmtree(tmp)
    tmp.mkdir()

    manifest: dict = {
        "tool": "bridgenet",
        "version": __version__,
        "config": asdict(cfg),
        "inputs": _input_hashes(cfg),
        "stages": [],
        "status": "ok",
    }
    state = _RunState(cfg, tmp)
    stage_fns = [
        ("ingest", _stage_ingest),
        ("embeddings", _stage_embeddings),
        ("content-graph", _stage_content_graph),
        ("content-clusters", _stage_content_clusters),
        ("user-graph", _stage_user_graph),
        ("bridges", _stage_bridges),
        ("centrality", _stage_centrality),
        ("cues", _stage_cues),
        ("topics", _stage_topics),
        ("annotate", _stage_annotate),
        ("report", _stage_report),
    ]
    for name, fn in stage_fns:
        try:
            outputs, info = fn(state)
        except Exception as exc:
            manifest["status"] = {"failed_stage": name, "error": str(exc)}
            _write_json(tmp / "manifest.json", manifest)
            shutil.move(str(tmp), str(out))
            raise StageError(name, exc) from exc
        manifest["stages"].append(
            {
                "name": name,
                "outputs": {rel: _sha256(tmp / rel) for rel in sorted(outputs)},
                "info": info,
            }
        )
    _write_json(tmp / "manifest.json", manifest)
    shutil.move(str(tmp), str(out))
    return out


def _input_hashes(cfg: RunConfig) -> dict:
    hashes: dict = {}
    named = {
        "posts": cfg.input,
        "stopwords": cfg.stopwords,
        "embeddings": cfg.embeddings,
        "bot_scores": cfg.bot_scores,
        "identity_lexicon": cfg.identity_lexicon,
    }
    for role, value in named.items():
        if value is None:
            continue
        p = Path(value)
        hashes[role] = {
            "path": value,
            "sha256": _sha256(p) if p.exists() else None,
        }
    return hashes


def _stage_ingest(state: _RunState):
    cfg = state.cfg
    result = ingest_mod.parse_dataset(cfg.input, cfg.format)
    stopwords = (
        ingest_mod.load_stopwords(cfg.stopwords)
        if cfg.stopwords
        else ingest_mod.default_stopwords()
    )
    state.records = ingest_mod.build_records(result.posts, stopwords)
    ingest_mod.write_records(state.records, state.root / "clean.jsonl")
    return ["clean.jsonl"], {
        "posts": len(result.posts),
        "record_errors": len(result.errors),
        "duplicates_collapsed": result.duplicates_collapsed,
    }


def _stage_embeddings(state: _RunState):
    cfg = state.cfg
    if cfg.embeddings:
        state.emb = similarity_mod.load_embeddings(cfg.embeddings)
        return [], {
            "source": "file",
            "n": state.emb.n,
            "dim": state.emb.dim,
            "degenerate_rows": len(state.emb.degenerate_rows),
        }
    state.emb = similarity_mod.hashed_embeddings(
        [r.tokens for r in state.records],
        [r.doc_id for r in state.records],
        dim=cfg.embedding_dim,
        seed=cfg.seed,
    )
    similarity_mod.write_embeddings(
        state.root / "vectors.emb", state.emb.ids, state.emb.vectors
    )
    return ["vectors.emb"], {
        "source": "hashed",
        "n": state.emb.n,
        "dim": state.emb.dim,
        "degenerate_rows": len(state.emb.degenerate_rows),
    }


def _stage_content_graph(state: _RunState):
    cfg = state.cfg
    state.content = similarity_mod.build_content_graph(
        state.emb,
        state.records,
        theta=cfg.theta,
        block_size=cfg.block_size,
        per_event=cfg.per_event,
    )
    write_graph(state.content, state.root / "content.graph")
    return ["content.graph", "content.graph.nodes.jsonl"], {
        "n": state.content.n,
        "m": state.content.m,
        "theta": cfg.theta,
    }


def _cluster_and_prune(state: _RunState, g: Graph, tag: str):
    cfg = state.cfg
    if g.n == 0:
        partition = community_mod.Partition(
            membership={}, sizes={}, modularity=0.0, resolution=cfg.resolution, seed=cfg.seed
        )
        pruned = Graph()
    else:
        partition = community_mod.leiden(g, resolution=cfg.resolution, seed=cfg.seed)
        pruned = community_mod.prune(
            g, partition, community_mod.PruneConfig(cfg.min_cluster_size)
        )
    state.partitions[tag] = partition
    _write_json(
        state.root / f"{tag}.parts.json",
        {
            "resolution": partition.resolution,
            "seed": partition.seed,
            "modularity": partition.modularity,
            "sizes": {str(k): v for k, v in sorted(partition.sizes.items())},
            "membership": dict(sorted(partition.membership.items())),
        },
    )
    write_graph(pruned, state.root / f"{tag}.pruned.graph")
    retained = sorted(
        {partition.membership[v] for v in pruned.nodes()}
    )
    info = {
        "clusters": len(partition.sizes),
        "retained_clusters": len(retained),
        "retained_nodes": pruned.n,
        "modularity": partition.modularity,
    }
    outputs = [
        f"{tag}.parts.json",
        f"{tag}.pruned.graph",
        f"{tag}.pruned.graph.nodes.jsonl",
    ]
    return pruned, outputs, info


def _stage_content_clusters(state: _RunState):
    pruned, outputs, info = _cluster_and_prune(state, state.content, "content")
    state.content_pruned = pruned
    return outputs, info


def _stage_user_graph(state: _RunState):
    cfg = state.cfg
    authors = user_mod.authorship_from_records(state.records)
    state.user = user_mod.build_user_graph(
        state.content, authors, binary=cfg.binary_user_graph
    )
    write_graph(state.user, state.root / "user.graph")
    stats = user_mod.user_graph_stats(state.user)
    _write_json(state.root / "user_graph_stats.json", stats.to_json())
    pruned, outputs, info = _cluster_and_prune(state, state.user, "user")
    state.user_pruned = pruned
    info.update({"n": state.user.n, "m": state.user.m})
    return (
        ["user.graph", "user.graph.nodes.jsonl", "user_graph_stats.json"] + outputs,
        info,
    )


def _stage_bridges(state: _RunState):
    cfg = state.cfg
    info = {}
    outputs = []
    for tag, g in (("content", state.content_pruned), ("user", state.user_pruned)):
        report = bridges_mod.find_bridging_nodes(
            g,
            mode=cfg.bridge_mode,
            top_fraction=cfg.top_fraction,
            per_cluster=cfg.per_cluster,
        )
        state.reports[tag] = report
        rel = f"{tag}.bridges.json"
        bridges_mod.write_findings(report, state.root / rel)
        outputs.append(rel)
        info[tag] = {
            "bridging_nodes": len(report.bridge_nodes()),
            "bridging_proportion": report.bridging_proportion,
            "mode": report.mode,
        }
    return outputs, info


def _stage_centrality(state: _RunState):
    outputs = []
    info = {}
    for tag, g in (("content", state.content_pruned), ("user", state.user_pruned)):
        scores = centrality_mod.compute_all(g)
        state.centralities[tag] = scores
        rel = f"{tag}.centrality.csv"
        _write_csv(
            state.root / rel,
            ["node", "degree", "eigenvector", "hub", "betweenness"],
            [
                [v, repr(s.degree), repr(s.eigenvector), repr(s.hub), repr(s.betweenness)]
                for v, s in scores.items()
            ],
        )
        outputs.append(rel)
        info[tag] = {"nodes": len(scores)}
    # weights feed eigenvector/hub; degree and betweenness use hop semantics,
    # and the normalization conventions ride along for later comparisons
    info["weighted_metrics"] = ["eigenvector", "hub"]
    info["normalization"] = {
        "degree": "deg(v)/(n-1)",
        "eigenvector": "L2 unit vector per component, global L2 renorm",
        "hub": "L2 unit vector per component, global L2 renorm",
        "betweenness": "pair fraction, (n-1)(n-2)/2",
    }
    return outputs, info


def _stage_cues(state: _RunState):
    cfg = state.cfg
    lexicons = (
        text_mod.load_lexicons(cfg.lexicons) if cfg.lexicons else text_mod.default_lexicons()
    )
    by_doc = {r.doc_id: r for r in state.records}
    outputs = []
    for tag, g in (("content", state.content_pruned), ("user", state.user_pruned)):
        cues = {}
        for node in g.nodes():
            if tag == "content":
                text = by_doc[node].text
            else:
                text = g.attrs(node).get("username", "")
            cues[node] = text_mod.extract_cues(text, lexicons)
        state.cues[tag] = cues
        rel = f"{tag}.cues.csv"
        _write_csv(
            state.root / rel,
            ["node"] + list(text_mod.CUE_FIELDS),
            [
                [node] + [repr(v) for v in cue.to_row().values()]
                for node, cue in cues.items()
            ],
        )
        outputs.append(rel)
    return outputs, {
        "content_nodes": len(state.cues["content"]),
        "user_nodes": len(state.cues["user"]),
    }


def _stage_topics(state: _RunState):
    cfg = state.cfg
    by_doc = {r.doc_id: r for r in state.records}
    partition = state.partitions["content"]
    clusters: dict[int, list[str]] = {}
    for node in state.content_pruned.nodes():
        clusters.setdefault(partition.membership[node], []).append(node)
    entries = []
    for cid in sorted(clusters):
        docs = [
            ingest_mod.CleanDoc(doc_id=d, tokens=by_doc[d].tokens)
            for d in clusters[cid]
        ]
        try:
            model = text_mod.lda_fit(
                docs,
                k=cfg.lda_topics,
                iters=cfg.lda_iters,
                seed=cfg.seed,
                min_count=cfg.lda_min_count,
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
    _write_json(state.root / "topics.json", entries)
    return ["topics.json"], {"clusters_modeled": sum(1 for e in entries if "topics" in e)}


def _stage_annotate(state: _RunState):
    cfg = state.cfg
    scores = annotate_mod.load_bot_scores(cfg.bot_scores) if cfg.bot_scores else None
    lexicon = (
        annotate_mod.load_identity_lexicon(cfg.identity_lexicon)
        if cfg.identity_lexicon
        else annotate_mod.default_identity_lexicon()
    )
    rows = []
    for node in state.user_pruned.nodes():
        attrs = state.user_pruned.attrs(node)
        user_id = attrs.get("user_id", node)
        username = attrs.get("username", "")
        verdict = annotate_mod.bot_score(
            user_id, username, scores=scores, strict=cfg.bot_strict
        )
        identity = annotate_mod.identity_annotate(username, lexicon, user_id=user_id)
        state.bots[node] = verdict
        state.identities[node] = identity
        rows.append(
            {
                "node": node,
                "user_id": user_id,
                "username": username,
                "p_bot": verdict.p_bot,
                "bot_label": verdict.label,
                "bot_source": verdict.source,
                "identity_terms": list(identity.matched_terms),
                "identity_categories": sorted(identity.categories),
                "has_identity": identity.has_identity,
            }
        )
    _write_json(state.root / "annotations.json", rows)
    bots = sum(1 for r in rows if r["bot_label"] == "bot")
    return ["annotations.json"], {"users": len(rows), "bots": bots}


def _stage_report(state: _RunState):
    report_dir = state.root / "report"
    plot_dir = report_dir / "plot_data"
    plot_dir.mkdir(parents=True)
    outputs = []
    info = {}

    user_events: dict[str, set[str]] = {}
    for r in state.records:
        user_events.setdefault(f"{r.platform}:{r.user_id}", set()).add(r.event)

    prop_rows = []
    link_rows = []
    metric_rows = []
    bot_rows = []
    identity_rows = []
    event_rows = []
    for tag in ("content", "user"):
        full = state.content if tag == "content" else state.user
        pruned = state.content_pruned if tag == "content" else state.user_pruned
        matrix = platform_link_matrix(full)
        rel = f"report/platform_links_{tag}.json"
        _write_json(state.root / rel, matrix.to_json())
        outputs.append(rel)
        info[f"{tag}_cross_platform_fraction"] = matrix.cross_platform_fraction
        for i, pa in enumerate(matrix.platforms):
            for j, pb in enumerate(matrix.platforms):
                if j < i:
                    continue
                link_rows.append([tag, pa, pb, matrix.counts[i][j]])

        profiles = build_profiles(
            pruned,
            state.reports[tag].findings,
            state.centralities[tag],
            state.cues[tag],
            bots=state.bots if tag == "user" else None,
            identities=state.identities if tag == "user" else None,
        )
        comparison = bridging_comparison(profiles)
        rel = f"report/comparison_{tag}.json"
        _write_json(state.root / rel, comparison.to_json())
        outputs.append(rel)

        # per-event breakdown next to the joint comparison; a user posting in
        # several events lands in "mixed"
        by_event: dict[str, list[NodeProfile]] = {}
        for p in profiles:
            if tag == "content":
                event = pruned.attrs(p.node).get("event", "other")
            else:
                events = user_events.get(p.node, set())
                event = next(iter(events)) if len(events) == 1 else "mixed"
            by_event.setdefault(event, []).append(p)
        rel = f"report/comparison_by_event_{tag}.json"
        _write_json(
            state.root / rel,
            {
                event: bridging_comparison(group).to_json()
                for event, group in sorted(by_event.items())
            },
        )
        outputs.append(rel)
        for event in sorted(by_event):
            group = by_event[event]
            n_bridge = sum(1 for p in group if p.is_bridge)
            event_rows.append([tag, event, n_bridge, len(group)])

        by_platform: dict[str, list[NodeProfile]] = {}
        for p in profiles:
            by_platform.setdefault(p.platform, []).append(p)
        for platform in sorted(by_platform):
            group = by_platform[platform]
            n_bridge = sum(1 for p in group if p.is_bridge)
            prop_rows.append(
                [tag, platform, n_bridge, len(group),
                 repr(n_bridge / len(group)) if group else "0.0"]
            )
        for group_name, stats in (
            ("bridging", comparison.bridging),
            ("non_bridging", comparison.non_bridging),
        ):
            for metric in METRIC_NAMES:
                if stats.empty:
                    continue
                metric_rows.append(
                    [tag, metric, group_name,
                     repr(stats.means[metric]), repr(stats.medians[metric]), stats.count]
                )
            if tag == "user":
                bot_rows.append(
                    [tag, group_name, stats.bot_scored, stats.bot_count,
                     repr(stats.bot_fraction) if stats.bot_fraction is not None else ""]
                )
                for cat in sorted(stats.identity_distribution):
                    identity_rows.append(
                        [tag, group_name, cat, stats.identity_distribution[cat]]
                    )

    plots = {
        "bridging_proportion.csv": (
            ["graph", "platform", "bridging", "total", "proportion"], prop_rows),
        "platform_links.csv": (
            ["graph", "platform_a", "platform_b", "count"], link_rows),
        "metric_comparison.csv": (
            ["graph", "metric", "group", "mean", "median", "count"], metric_rows),
        "bot_fraction.csv": (
            ["graph", "group", "scored", "bots", "fraction"], bot_rows),
        "identity_categories.csv": (
            ["graph", "group", "category", "count"], identity_rows),
        "bridging_by_event.csv": (
            ["graph", "event", "bridging", "total"], event_rows),
    }
    for name, (header, rows) in plots.items():
        _write_csv(plot_dir / name, header, rows)
        outputs.append(f"report/plot_data/{name}")
    return outputs, info
