"""Credibility features: low-credibility domain usage and inauthentic-account heuristics."""

import re
from bisect import bisect_left
from collections import defaultdict
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from core.config import (
    BURST_POSTS_PER_HOUR, DECEPTION_WEIGHTS, FOLLOWER_SKEW_RATIO, HANDLE_PATTERN,
    MIN_ACCOUNT_AGE_DAYS, MIN_FLAGS,
)
from core.types_narrative import AccountFlags, DeceptionScore, Narrative, Post
from core.url_canon import host_registrable_domain, registrable_domain

DAY = 86400
HOUR = 3600

NO_URLS = "no_urls"


def listed_domains(domains: Iterable[str]) -> FrozenSet[str]:
    """List entries reduced to registrable domains, so subdomain entries still match."""
    return frozenset(host_registrable_domain(d) for d in domains if d)


def domain_credibility(
    narrative: Narrative,
    posts_by_id: Mapping[str, Post],
    low_credibility: FrozenSet[str],
) -> Tuple[float, List[str]]:
    """
    Share of the narrative's URL shares whose registrable domain is listed.

    Each (post, url) pair is one share; posts without URLs do not count.

    Returns:
        (lowcred_fraction, annotations); ("no_urls") and 0.0 when nothing was shared
    """
    listed = listed_domains(low_credibility)
    shares = 0
    hits = 0
    for pid in narrative.post_ids:
        post = posts_by_id.get(pid)
        if post is None:
            continue
        for url in post.urls:
            shares += 1
            if registrable_domain(url) in listed:
                hits += 1
    if shares == 0:
        return 0.0, [NO_URLS]
    return hits / shares, []


def max_posts_per_hour(times: Sequence[int]) -> int:
    """Largest number of posts inside any rolling one-hour interval."""
    times = sorted(times)
    best = 0
    for i, t in enumerate(times):
        j = bisect_left(times, t + HOUR, lo=i)
        best = max(best, j - i)
    return best


def account_flags(
    author_id: str,
    posts: Sequence[Post],
    min_age_days: float = MIN_ACCOUNT_AGE_DAYS,
    skew_ratio: float = FOLLOWER_SKEW_RATIO,
    burst_per_hour: int = BURST_POSTS_PER_HOUR,
    handle_pattern: str = HANDLE_PATTERN,
    min_flags: int = MIN_FLAGS,
) -> AccountFlags:
    """
    Rule-based flags for one account from its profile fields and posting behavior.

    young_account is skipped when no post carries the account creation time.
    Profile counts are taken from the latest post.
    """
    flags: List[str] = []
    if posts:
        ordered = sorted(posts, key=lambda p: (p.created_at, p.post_id))
        first, latest = ordered[0], ordered[-1]

        created = next((p.author_created_at for p in ordered if p.author_created_at is not None), None)
        if created is not None and (first.created_at - created) < min_age_days * DAY:
            flags.append("young_account")

        if latest.author_following / max(latest.author_followers, 1) > skew_ratio:
            flags.append("follower_skew")

    if re.match(handle_pattern, author_id):
        flags.append("handle_pattern")

    if posts and max_posts_per_hour([p.created_at for p in posts]) > burst_per_hour:
        flags.append("burst_poster")

    return AccountFlags(author_id=author_id, flags=flags, inauthentic=len(flags) >= min_flags)


def corpus_account_flags(posts: Sequence[Post], **thresholds) -> Dict[str, AccountFlags]:
    """Flags for every account in the corpus, keyed by author_id."""
    by_author: Dict[str, List[Post]] = defaultdict(list)
    for post in posts:
        by_author[post.author_id].append(post)
    return {a: account_flags(a, by_author[a], **thresholds) for a in sorted(by_author)}


def deception_score(
    narrative_id: str,
    lowcred_fraction: float,
    inauthentic_fraction: float,
    weights: Optional[Mapping[str, float]] = None,
    annotations: Optional[List[str]] = None,
) -> DeceptionScore:
    """Convex combination of the two fractions; weights are renormalized to sum 1."""
    w = dict(DECEPTION_WEIGHTS)
    w.update(weights or {})
    total = w["lowcred"] + w["inauthentic"]
    if total <= 0:
        w_low = w_inauth = 0.5
    else:
        w_low, w_inauth = w["lowcred"] / total, w["inauthentic"] / total
    score = w_low * lowcred_fraction + w_inauth * inauthentic_fraction
    return DeceptionScore(
        narrative_id=narrative_id,
        lowcred_fraction=float(lowcred_fraction),
        inauthentic_fraction=float(inauthentic_fraction),
        score=min(1.0, max(0.0, float(score))),
        annotations=list(annotations or []),
    )


def narrative_deception(
    narrative: Narrative,
    posts_by_id: Mapping[str, Post],
    low_credibility: FrozenSet[str],
    flags: Mapping[str, AccountFlags],
    weights: Optional[Mapping[str, float]] = None,
) -> DeceptionScore:
    lowcred, annotations = domain_credibility(narrative, posts_by_id, low_credibility)
    accounts = {posts_by_id[pid].author_id for pid in narrative.post_ids if pid in posts_by_id}
    flagged = sum(1 for a in accounts if a in flags and flags[a].inauthentic)
    inauthentic = flagged / len(accounts) if accounts else 0.0
    return deception_score(narrative.narrative_id, lowcred, inauthentic, weights, annotations)
