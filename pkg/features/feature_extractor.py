"""Assemble the per-narrative feature vector from every feature module.

The key set is fixed (FEATURE_KEYS) and grouped the way analysts read it:
user, metadata, content, temporal, structural, plus the three axis scores
the fused decision is computed from.
"""

from typing import Dict, List, Mapping, Sequence

from core.types_narrative import (
    AccountFlags, AgendaScore, CoordinationScore, DeceptionScore, DuplicateCluster,
    EventCluster, Narrative, Post,
)
from core.url_canon import registrable_domain

DAY = 86400

FEATURE_KEYS = (
    # user
    "user_n_accounts",
    "user_inauthentic_fraction",
    "user_young_account_fraction",
    "user_follower_skew_fraction",
    "user_handle_pattern_fraction",
    "user_burst_poster_fraction",
    "user_mean_account_age_days",
    # metadata
    "meta_n_posts",
    "meta_platform_span",
    "meta_urls_per_post",
    "meta_distinct_domains",
    "meta_lowcred_fraction",
    # content
    "content_dup_fraction",
    "content_n_tokens",
    "content_n_technique_hits",
    "content_hits_per_100_tokens",
    "content_technique_diversity",
    # temporal
    "temporal_n_windows",
    "temporal_duration_seconds",
    "temporal_max_burst_z",
    "temporal_event_cluster_fraction",
    "temporal_synchrony",
    # structural
    "structural_n_entities",
    "structural_n_dup_clusters",
    "structural_accounts_in_dup_clusters",
    "structural_reply_edges",
    # axes
    "axis_deception",
    "axis_coordination",
    "axis_agenda",
)


def _fraction(count: int, total: int) -> float:
    return count / total if total else 0.0


def _user_features(accounts: List[str], posts: Sequence[Post], flags: Mapping[str, AccountFlags]) -> Dict[str, float]:
    n = len(accounts)

    def flagged(name: str) -> float:
        return _fraction(sum(1 for a in accounts if a in flags and name in flags[a].flags), n)

    ages: Dict[str, float] = {}
    for post in sorted(posts, key=lambda p: p.created_at):
        if post.author_created_at is not None and post.author_id not in ages:
            ages[post.author_id] = (post.created_at - post.author_created_at) / DAY

    return {
        "user_n_accounts": float(n),
        "user_inauthentic_fraction": _fraction(sum(1 for a in accounts if a in flags and flags[a].inauthentic), n),
        "user_young_account_fraction": flagged("young_account"),
        "user_follower_skew_fraction": flagged("follower_skew"),
        "user_handle_pattern_fraction": flagged("handle_pattern"),
        "user_burst_poster_fraction": flagged("burst_poster"),
        "user_mean_account_age_days": sum(ages.values()) / len(ages) if ages else 0.0,
    }


def extract_narrative_features(
    narrative: Narrative,
    posts_by_id: Mapping[str, Post],
    clusters_by_id: Mapping[str, EventCluster],
    dup_clusters: Sequence[DuplicateCluster],
    flags: Mapping[str, AccountFlags],
    deception: DeceptionScore,
    coordination: CoordinationScore,
    agenda: AgendaScore,
) -> Dict[str, float]:
    """
    Feature vector of one narrative.

    Returns:
        Mapping with exactly FEATURE_KEYS, all float-valued
    """
    posts = [posts_by_id[pid] for pid in narrative.post_ids if pid in posts_by_id]
    accounts = sorted({p.author_id for p in posts})
    urls = [u for p in posts for u in p.urls]

    member_ids = set(narrative.post_ids)
    touching = [c for c in dup_clusters if member_ids.intersection(c.post_ids)]
    accounts_in_dups = {p.author_id for c in touching for pid in c.post_ids
                        if pid in member_ids and (p := posts_by_id.get(pid)) is not None}

    author_of = {p.post_id: p.author_id for p in posts}
    reply_edges = {(p.author_id, author_of[p.reply_to]) for p in posts
                   if p.reply_to in author_of and author_of[p.reply_to] != p.author_id}

    clusters = [clusters_by_id[c] for c in narrative.clusters if c in clusters_by_id]
    times = [p.created_at for p in posts]

    features: Dict[str, float] = {}
    features.update(_user_features(accounts, posts, flags))
    features.update({
        "meta_n_posts": float(len(posts)),
        "meta_platform_span": float(coordination.platform_span),
        "meta_urls_per_post": _fraction(len(urls), len(posts)),
        "meta_distinct_domains": float(len({registrable_domain(u) for u in urls})),
        "meta_lowcred_fraction": deception.lowcred_fraction,
        "content_dup_fraction": coordination.dup_fraction,
        "content_n_tokens": float(agenda.n_tokens),
        "content_n_technique_hits": float(agenda.n_hits),
        "content_hits_per_100_tokens": agenda.hits_per_100_tokens,
        "content_technique_diversity": agenda.technique_diversity,
        "temporal_n_windows": float(narrative.last_window - narrative.first_window + 1),
        "temporal_duration_seconds": float(max(times) - min(times)) if times else 0.0,
        "temporal_max_burst_z": max((c.burst_z for c in clusters), default=0.0),
        "temporal_event_cluster_fraction": _fraction(sum(1 for c in clusters if c.is_event), len(clusters)),
        "temporal_synchrony": coordination.synchrony,
        "structural_n_entities": float(len(narrative.entity_signature)),
        "structural_n_dup_clusters": float(len(touching)),
        "structural_accounts_in_dup_clusters": float(len(accounts_in_dups)),
        "structural_reply_edges": float(len(reply_edges)),
        "axis_deception": deception.score,
        "axis_coordination": coordination.score,
        "axis_agenda": agenda.score,
    })
    return {key: float(features[key]) for key in FEATURE_KEYS}
