"""Builds the assessment report document from the stage artifacts."""

from typing import Any, Dict, List

from core.config import (
    ATTRIBUTION_NOTE, IMPACT_CAVEAT, REACH_NOTE, REPORT_SCHEMA, THRESHOLD_NOTE,
    TRACKING_DROP_LIST_VERSION,
)

AXIS_DESCRIPTIONS = {
    "deception": "low-credibility domain shares and inauthentic-account heuristics",
    "coordination": "near-duplicate rings, account synchrony and platform span",
    "agenda": "propaganda-technique cue rate and diversity (illustrative lexicon)",
}


def _narrative_rows(narratives_doc: Dict[str, Any], impact_doc: Dict[str, Any]) -> List[Dict[str, Any]]:
    impact = {r["narrative_id"]: r for r in impact_doc.get("reports", [])}
    clusters = {c["cluster_id"]: c for c in narratives_doc.get("clusters", [])}
    rows = []
    for n in narratives_doc.get("narratives", []):
        members = [clusters[c] for c in n["clusters"] if c in clusters]
        rows.append({
            **n,
            "n_posts": len(n["post_ids"]),
            "max_burst_z": max((c["burst_z"] for c in members), default=0.0),
            "impact": impact.get(n["narrative_id"]),
        })
    return rows


def build_report(
    cfg: Any,
    posts_doc: Dict[str, Any],
    narratives_doc: Dict[str, Any],
    assessments_doc: Dict[str, Any],
    attribution_doc: Dict[str, Any],
    impact_doc: Dict[str, Any],
) -> Dict[str, Any]:
    """
    One self-contained report: config echo, corpus summary, every narrative with
    its assessment, evidence pointers, impact metrics and candidate actor groups.
    """
    assessments = sorted(assessments_doc.get("assessments", []), key=lambda a: a["narrative_id"])
    labels: Dict[str, int] = {}
    for a in assessments:
        labels[a["label"]] = labels.get(a["label"], 0) + 1

    return {
        "report_schema": REPORT_SCHEMA,
        "config": cfg.echo(),
        "corpus": {
            "n_posts": posts_doc.get("n_posts", 0),
            "platforms": posts_doc.get("platforms", []),
            "ingest_stats": posts_doc.get("ingest_stats", {}),
            "tracking_drop_list_version": TRACKING_DROP_LIST_VERSION,
            "n_entities": len(narratives_doc.get("entities", {})),
            "n_clusters": len(narratives_doc.get("clusters", [])),
            "n_event_clusters": sum(1 for c in narratives_doc.get("clusters", []) if c.get("is_event")),
            "n_duplicate_clusters": len(assessments_doc.get("duplicate_clusters", [])),
        },
        "classifier": assessments_doc.get("classifier", {}),
        "label_counts": dict(sorted(labels.items())),
        "axes": AXIS_DESCRIPTIONS,
        "narratives": _narrative_rows(narratives_doc, impact_doc),
        "assessments": assessments,
        "duplicate_clusters": assessments_doc.get("duplicate_clusters", []),
        "account_flags": assessments_doc.get("account_flags", []),
        "attribution": {
            "groups": attribution_doc.get("groups", []),
            "unattributed": attribution_doc.get("unattributed", []),
        },
        "notes": {
            "threshold": THRESHOLD_NOTE,
            "impact_caveat": IMPACT_CAVEAT,
            "reach": REACH_NOTE,
            "attribution": ATTRIBUTION_NOTE,
            "scope": "narratives are assessed as a whole; no per-post truth labels are produced",
        },
    }
