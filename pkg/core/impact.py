"""Per-narrative reach, engagement and conversion-proxy metrics."""

from typing import Dict, List, Mapping, Optional, Sequence, Set

import pandas as pd

from core.types_narrative import EventCluster, ImpactReport, Narrative, Post


def engagement_series(clusters: Sequence[EventCluster], posts_by_id: Mapping[str, Post]) -> List[Dict[str, int]]:
    """Posts and engagement per narrative window, in window order."""
    rows = []
    for cluster in clusters:
        members = [posts_by_id[pid] for pid in cluster.post_ids if pid in posts_by_id]
        rows.append({
            "window_index": cluster.window_index,
            "window_start": cluster.window_start,
            "posts": len(members),
            "engagement": sum(p.engagement.total for p in members),
        })
    if not rows:
        return []
    frame = pd.DataFrame(rows).groupby(["window_index", "window_start"], as_index=False).sum()
    frame = frame.sort_values("window_index")
    return [{k: int(v) for k, v in row.items()} for row in frame.to_dict(orient="records")]


def conversion_proxy(posts: Sequence[Post]) -> int:
    """Distinct accounts re-sharing one of the narrative's URLs after its first share, first sharers excluded."""
    first_sharer: Dict[str, str] = {}
    converted: Set[str] = set()
    for post in sorted(posts, key=lambda p: (p.created_at, p.post_id)):
        for url in post.urls:
            if url not in first_sharer:
                first_sharer[url] = post.author_id
            elif post.author_id != first_sharer[url]:
                converted.add(post.author_id)
    return len(converted)


def impact_metrics(
    narrative: Narrative,
    posts_by_id: Mapping[str, Post],
    clusters: Optional[Sequence[EventCluster]] = None,
) -> ImpactReport:
    """
    Impact of one narrative.

    reach_upper_bound sums each posting account's follower count once (largest
    observed value, so adding a post never lowers reach); time_to_peak runs from the first post to the start of the
    highest-volume window, clamped to the narrative's duration.
    """
    posts = sorted(
        (posts_by_id[pid] for pid in narrative.post_ids if pid in posts_by_id),
        key=lambda p: (p.created_at, p.post_id),
    )
    followers: Dict[str, int] = {}
    for post in posts:
        followers[post.author_id] = max(followers.get(post.author_id, 0), post.author_followers)

    engagement_total = sum(p.engagement.total for p in posts)
    series = engagement_series(clusters or [], posts_by_id)

    time_to_peak = 0
    if posts and series:
        first, last = posts[0].created_at, posts[-1].created_at
        peak = max(series, key=lambda row: (row["posts"], -row["window_index"]))
        time_to_peak = min(max(peak["window_start"] - first, 0), last - first)

    return ImpactReport(
        narrative_id=narrative.narrative_id,
        reach_upper_bound=sum(followers.values()),
        engagement_total=engagement_total,
        amplification=engagement_total / max(len(posts), 1),
        platform_spread=len({p.platform for p in posts}),
        time_to_peak=int(time_to_peak),
        conversion_proxy=conversion_proxy(posts),
        engagement_series=series,
    )
