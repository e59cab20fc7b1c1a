"""Stage orchestration: each stage reads earlier artifacts and writes its own.

ingest -> narratives -> classify -> attribute -> impact -> report, plus the
synthetic-corpus, calibration and evaluation side stages.
"""

import logging
import os
from collections import Counter
from dataclasses import asdict
from typing import Any, Dict, List, Optional, Tuple

from app.config import PipelineConfig
from app.result_formatter import build_report
from core.artifacts import read_artifact, write_artifact
from core.attribution import attribute_accounts
from core.classify import (
    CalibrationResult, NarrativeClassifier, ORCHESTRATED, assess_narrative, calibrate, cap_evidence,
)
from core.config import ATTRIBUTION_NOTE, IMPACT_CAVEAT, REACH_NOTE
from core.entities import extract_corpus_entities
from core.errors import ConfigError, PipelineError, StageError
from core.impact import impact_metrics
from core.ingest import ingest_corpus, load_adapter, load_source_lists
from core.narrative import detect_narratives, export_graphml
from core.parallel import parallel_map, resolve_threads
from core.report_writer import ReportWriter
from core.synthgen import (
    ScenarioConfig, generate, load_ground_truth, load_scenario, narrative_label, write_corpus,
)
from core.types_narrative import (
    DuplicateCluster, EventCluster, Narrative, Post, SourceLists, TechniqueHit,
)
from features.agenda_features import TechniqueDetector, narrative_agenda
from features.coordination_features import find_duplicate_clusters, narrative_coordination
from features.credibility_features import corpus_account_flags, narrative_deception
from features.feature_extractor import extract_narrative_features

logger = logging.getLogger(__name__)

POSTS = "posts.json"
NARRATIVES = "narratives.json"
GRAPHML = "narratives.graphml"
ASSESSMENTS = "assessments.json"
ATTRIBUTION = "attribution.json"
IMPACT = "impact.json"
REPORT = "report.json"
CALIBRATION = "calibration.json"
EVALUATION = "evaluation.json"


def _path(cfg: PipelineConfig, name: str) -> str:
    return os.path.join(cfg.output_dir, name)


def load_lists(cfg: PipelineConfig) -> SourceLists:
    lists = cfg["lists"]
    return load_source_lists(
        low_credibility_path=lists["low_credibility"],
        entity_dictionary_path=lists["entity_dictionary"],
        lexicon_path=lists["propaganda_lexicon"],
        shortener_map_path=lists["shortener_map"],
        articles_path=lists["articles"],
    )


def load_posts(cfg: PipelineConfig) -> List[Post]:
    doc = read_artifact(_path(cfg, POSTS), "posts")
    return [Post.from_dict(p) for p in doc["posts"]]


def load_narratives(cfg: PipelineConfig) -> Tuple[List[EventCluster], List[Narrative]]:
    doc = read_artifact(_path(cfg, NARRATIVES), "narratives")
    clusters = [EventCluster.from_dict(c) for c in doc["clusters"]]
    narratives = [Narrative.from_dict(n) for n in doc["narratives"]]
    return clusters, narratives


# ---------------------------------------------------------------- stages

def run_ingest(cfg: PipelineConfig) -> Dict[str, Any]:
    if not cfg["inputs"]:
        raise ConfigError("no inputs configured (use --input PATH:ADAPTER or 'inputs' in --config)")
    lists = load_lists(cfg)
    inputs = [(item["path"], load_adapter(item["adapter"])) for item in cfg["inputs"]]
    posts, stats = ingest_corpus(inputs, lists, resolve_threads(cfg.threads))
    payload = {
        "config": cfg.echo(),
        "ingest_stats": stats,
        "n_posts": len(posts),
        "platforms": sorted({p.platform for p in posts}),
        "posts": [p.to_dict() for p in posts],
    }
    write_artifact(_path(cfg, POSTS), "posts", payload, cfg.fingerprint)
    logger.info("ingest: %d posts from %d files", len(posts), len(inputs))
    return payload


def run_narratives(cfg: PipelineConfig) -> Dict[str, Any]:
    posts = load_posts(cfg)
    lists = load_lists(cfg)
    n_jobs = resolve_threads(cfg.threads)
    nar = cfg["narrative"]

    entities, post_entities = extract_corpus_entities(posts, lists, n_jobs)
    result = detect_narratives(
        posts, post_entities,
        window_len=nar["window_len"], stride=nar["stride"],
        theta_edge=nar["theta_edge"], c_min=nar["c_min"], tau_link=nar["tau_link"],
        k_trailing=nar["k_trailing"], z_event=nar["z_event"],
        clusterer=nar["clusterer"], seed=cfg["seed"], n_jobs=n_jobs,
    )
    edges = [
        {"window_index": g.window_index, **asdict(e)}
        for _, g in sorted(result.graphs.items()) for e in g.edges
    ]
    payload = {
        "t0": result.t0,
        "entities": {
            key: {"canonical_name": e.canonical_name, "kind": e.kind, "n_mentions": len(e.mentions)}
            for key, e in sorted(entities.items())
        },
        "edges": edges,
        "clusters": [c.to_dict() for c in result.clusters],
        "narratives": [n.to_dict() for n in result.narratives],
    }
    write_artifact(_path(cfg, NARRATIVES), "narratives", payload, cfg.fingerprint)
    export_graphml(_path(cfg, GRAPHML), result.clusters, result.narratives)
    return payload


def load_classifier(cfg: PipelineConfig) -> Tuple[NarrativeClassifier, str]:
    cl = cfg["classify"]
    if cl["calibration_path"]:
        doc = read_artifact(cl["calibration_path"], "calibration")
        fit = CalibrationResult.from_dict(doc["calibration"])
        return NarrativeClassifier(fit.weights, fit.bias, cl["decision_threshold"]), "calibration"
    return NarrativeClassifier(cl["weights"], cl["bias"], cl["decision_threshold"]), "shipped_defaults"


def _hit_dict(hit: TechniqueHit) -> Dict[str, Any]:
    return asdict(hit)


def run_classify(cfg: PipelineConfig) -> Dict[str, Any]:
    posts = load_posts(cfg)
    clusters, narratives = load_narratives(cfg)
    lists = load_lists(cfg)
    n_jobs = resolve_threads(cfg.threads)
    co, cred, cap = cfg["coordination"], cfg["credibility"], cfg["report"]["max_evidence_items"]

    posts_by_id = {p.post_id: p for p in posts}
    clusters_by_id = {c.cluster_id: c for c in clusters}
    dup_clusters = find_duplicate_clusters(
        posts, k_words=co["k_words"], num_perm=co["num_perm"], bands=co["bands"], rows=co["rows"],
        j_dup=co["j_dup"], seed=cfg["seed"], n_jobs=n_jobs,
    )
    flags = corpus_account_flags(
        posts,
        min_age_days=cred["min_account_age_days"], skew_ratio=cred["follower_skew_ratio"],
        burst_per_hour=cred["burst_posts_per_hour"], handle_pattern=cred["handle_pattern"],
        min_flags=cred["min_flags"],
    )
    detector = TechniqueDetector(lists.propaganda_lexicon)
    classifier, weights_source = load_classifier(cfg)
    fingerprint = cfg.fingerprint

    def assess(narrative: Narrative) -> Dict[str, Any]:
        deception = narrative_deception(narrative, posts_by_id, lists.low_credibility_domains, flags,
                                        cred["weights"])
        coordination, pair_counts = narrative_coordination(
            narrative, posts_by_id, dup_clusters,
            min_accounts=co["dup_min_accounts"], sync_window=co["sync_window"],
            sync_min_posts=co["sync_min_posts"], weights=co["weights"], bias=co["bias"],
        )
        agenda, hits = narrative_agenda(narrative, posts_by_id, lists, detector, cfg["agenda"]["lambda"])
        features = extract_narrative_features(
            narrative, posts_by_id, clusters_by_id, dup_clusters, flags, deception, coordination, agenda)

        members = set(narrative.post_ids)
        accounts = sorted({posts_by_id[pid].author_id for pid in narrative.post_ids if pid in posts_by_id})
        evidence = {
            "duplicate_clusters": cap_evidence(
                [c.cluster_id for c in dup_clusters
                 if len(c.accounts) >= co["dup_min_accounts"] and members.intersection(c.post_ids)], cap),
            "technique_hits": cap_evidence(
                [_hit_dict(h) for h in sorted(hits, key=lambda h: (h.doc_id, h.start, h.technique))], cap),
            "flagged_accounts": cap_evidence(
                [{"author_id": a, "flags": flags[a].flags} for a in accounts if a in flags and flags[a].inauthentic],
                cap),
            "synchrony_pairs": cap_evidence(
                [{"a": a, "b": b, "count": n} for (a, b), n in sorted(pair_counts.items(), key=lambda kv: (-kv[1], kv[0]))],
                cap),
        }
        assessment = assess_narrative(narrative.narrative_id, features, classifier, fingerprint,
                                      deception.annotations, evidence)
        return assessment.to_dict()

    assessments = parallel_map(assess, narratives, n_jobs)
    labels = Counter(a["label"] for a in assessments)
    payload = {
        "config": cfg.echo(),
        "classifier": {
            "weights": dict(classifier.weights),
            "bias": classifier.bias,
            "decision_threshold": classifier.decision_threshold,
            "source": weights_source,
        },
        "assessments": assessments,
        "duplicate_clusters": [c.to_dict() for c in dup_clusters],
        "account_flags": [asdict(f) for f in flags.values() if f.flags],
        "label_counts": dict(sorted(labels.items())),
    }
    write_artifact(_path(cfg, ASSESSMENTS), "assessments", payload, fingerprint)
    logger.info("classify: %d narratives, %d orchestrated", len(assessments), labels.get(ORCHESTRATED, 0))
    return payload


def run_attribute(cfg: PipelineConfig) -> Dict[str, Any]:
    posts = load_posts(cfg)
    _, narratives = load_narratives(cfg)
    doc = read_artifact(_path(cfg, ASSESSMENTS), "assessments")
    lists = load_lists(cfg)

    orchestrated = {a["narrative_id"] for a in doc["assessments"] if a["label"] == ORCHESTRATED}
    posts_by_id = {p.post_id: p for p in posts}
    accounts = sorted({
        posts_by_id[pid].author_id
        for n in narratives if n.narrative_id in orchestrated
        for pid in n.post_ids if pid in posts_by_id
    })
    account_set = set(accounts)
    detector = TechniqueDetector(lists.propaganda_lexicon)
    hits: List[TechniqueHit] = []
    for post in posts:
        if post.author_id in account_set:
            hits.extend(detector.detect(post.post_id, post.text))
    dup_clusters = [DuplicateCluster.from_dict(c) for c in doc["duplicate_clusters"]]

    groups, unattributed = attribute_accounts(
        accounts, posts, hits, dup_clusters, detector.techniques,
        cfg["attribution"]["cosine_threshold"],
    )
    payload = {
        "note": ATTRIBUTION_NOTE,
        "n_accounts": len(accounts),
        "groups": [g.to_dict() for g in groups],
        "unattributed": unattributed,
    }
    write_artifact(_path(cfg, ATTRIBUTION), "attribution", payload, cfg.fingerprint)
    return payload


def run_impact(cfg: PipelineConfig) -> Dict[str, Any]:
    posts = load_posts(cfg)
    clusters, narratives = load_narratives(cfg)
    posts_by_id = {p.post_id: p for p in posts}
    clusters_by_id = {c.cluster_id: c for c in clusters}

    def measure(narrative: Narrative) -> Dict[str, Any]:
        members = [clusters_by_id[c] for c in narrative.clusters if c in clusters_by_id]
        return impact_metrics(narrative, posts_by_id, members).to_dict()

    reports = parallel_map(measure, narratives, resolve_threads(cfg.threads))
    payload = {"caveat": IMPACT_CAVEAT, "reach_note": REACH_NOTE, "reports": reports}
    write_artifact(_path(cfg, IMPACT), "impact", payload, cfg.fingerprint)
    return payload


def run_report(cfg: PipelineConfig, quiet: bool = False) -> Dict[str, Any]:
    report = build_report(
        cfg,
        posts_doc=read_artifact(_path(cfg, POSTS), "posts"),
        narratives_doc=read_artifact(_path(cfg, NARRATIVES), "narratives"),
        assessments_doc=read_artifact(_path(cfg, ASSESSMENTS), "assessments"),
        attribution_doc=read_artifact(_path(cfg, ATTRIBUTION), "attribution"),
        impact_doc=read_artifact(_path(cfg, IMPACT), "impact"),
    )
    path = write_artifact(_path(cfg, REPORT), "report", report, cfg.fingerprint)
    if not quiet:
        ReportWriter().print_summary({**report, "config_fingerprint": cfg.fingerprint}, path)
    return report


STAGES = (
    ("ingest", run_ingest),
    ("narratives", run_narratives),
    ("classify", run_classify),
    ("attribute", run_attribute),
    ("impact", run_impact),
)


def run_stage(name: str, cfg: PipelineConfig) -> Dict[str, Any]:
    """Run one stage; unexpected failures surface as StageError."""
    stage = dict(STAGES)[name]
    try:
        return stage(cfg)
    except PipelineError:
        raise
    except Exception as exc:
        logger.debug("stage %s failed", name, exc_info=True)
        raise StageError(name, f"{type(exc).__name__}: {exc}") from exc


def run_all(cfg: PipelineConfig, quiet: bool = False) -> Dict[str, Any]:
    for name, _ in STAGES:
        logger.info("stage %s", name)
        run_stage(name, cfg)
    return run_report(cfg, quiet=quiet)


# ---------------------------------------------------------------- side stages

def run_synth(cfg: PipelineConfig, scenario_path: Optional[str] = None) -> Dict[str, str]:
    """Write a synthetic corpus (and a pipeline.json pointing at it) into the output dir."""
    scenario = load_scenario(scenario_path) if scenario_path else ScenarioConfig(seed=cfg["seed"])
    lexicon = load_lists(cfg).propaganda_lexicon
    corpus = generate(scenario, lexicon)
    return write_corpus(corpus, cfg.output_dir)


def labeled_axes(cfg: PipelineConfig, ground_truth_path: str) -> Tuple[List[List[float]], List[int], List[str]]:
    """Axis triples and 0/1 campaign labels of every assessed narrative."""
    truth = load_ground_truth(ground_truth_path)
    _, narratives = load_narratives(cfg)
    doc = read_artifact(_path(cfg, ASSESSMENTS), "assessments")
    by_id = {a["narrative_id"]: a for a in doc["assessments"]}
    X, y, ids = [], [], []
    for narrative in narratives:
        assessment = by_id.get(narrative.narrative_id)
        if assessment is None:
            continue
        X.append([assessment["deception"], assessment["coordination"], assessment["agenda"]])
        y.append(0 if narrative_label(narrative.post_ids, truth) == "organic" else 1)
        ids.append(narrative.narrative_id)
    return X, y, ids


def run_calibrate(cfg: PipelineConfig, ground_truth_path: str) -> Dict[str, Any]:
    X, y, _ = labeled_axes(cfg, ground_truth_path)
    cl = cfg["classify"]
    fit = calibrate(X, y, seed=cfg["seed"], learning_rate=cl["learning_rate"], epochs=cl["epochs"], l2=cl["l2"])
    payload = {"calibration": fit.to_dict()}
    write_artifact(_path(cfg, CALIBRATION), "calibration", payload, cfg.fingerprint)
    return payload


def run_evaluate(cfg: PipelineConfig, ground_truth_path: str) -> Dict[str, Any]:
    from tools.evaluate_recovery import evaluate_recovery

    truth = load_ground_truth(ground_truth_path)
    _, narratives = load_narratives(cfg)
    doc = read_artifact(_path(cfg, ASSESSMENTS), "assessments")
    payload = evaluate_recovery(narratives, doc["assessments"], truth)
    write_artifact(_path(cfg, EVALUATION), "evaluation", payload, cfg.fingerprint)
    return payload
