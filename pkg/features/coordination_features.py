"""Coordination features: near-duplicate rings, account synchrony, platform span.

Near-duplicates are found with seeded MinHash signatures and banded LSH
(datasketch); every candidate pair is re-checked with the exact shingle-set
Jaccard before it is merged, so a reported cluster never rests on a hash
collision alone.
"""

import hashlib
import logging
from collections import defaultdict
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from datasketch import MinHash, MinHashLSH
from networkx.utils import UnionFind
from scipy.special import expit

from core.config import (
    BANDS, COORDINATION_BIAS, COORDINATION_WEIGHTS, DUP_MIN_ACCOUNTS, J_DUP, K_WORDS,
    NUM_PERM, ROWS, SEED, SYNC_MIN_POSTS, SYNC_WINDOW,
)
from core.errors import EmptyText
from core.parallel import parallel_map
from core.text import tokenize
from core.types_narrative import CoordinationScore, DuplicateCluster, Narrative, Post

logger = logging.getLogger(__name__)


def shingle(text: str, k_words: int = K_WORDS) -> Set[str]:
    """
    Word k-shingles of a post.

    Texts shorter than k words give the single full-token shingle; texts with
    no tokens give an empty set.
    """
    tokens = tokenize(text)
    if not tokens:
        return set()
    if len(tokens) < k_words:
        return {" ".join(tokens)}
    return {" ".join(tokens[i:i + k_words]) for i in range(len(tokens) - k_words + 1)}


def exact_jaccard(a: Iterable[str], b: Iterable[str]) -> float:
    a, b = set(a), set(b)
    union = len(a | b)
    return len(a & b) / union if union else 0.0


def minhash_signature(shingles: Iterable[str], num_perm: int = NUM_PERM, seed: int = SEED) -> MinHash:
    """
    Seeded MinHash of a shingle set.

    Raises:
        EmptyText: shingle set is empty
    """
    items = sorted(set(shingles))
    if not items:
        raise EmptyText("cannot sign an empty shingle set")
    m = MinHash(num_perm=num_perm, seed=seed)
    m.update_batch([s.encode("utf-8") for s in items])
    return m


def find_duplicate_clusters(
    posts: Sequence[Post],
    k_words: int = K_WORDS,
    num_perm: int = NUM_PERM,
    bands: int = BANDS,
    rows: int = ROWS,
    j_dup: float = J_DUP,
    seed: int = SEED,
    n_jobs: int = 1,
) -> List[DuplicateCluster]:
    """
    Cluster near-duplicate posts.

    LSH banding proposes candidate pairs, exact Jaccard >= j_dup verifies them,
    and verified pairs are closed transitively. Posts with identical shingle
    sets are grouped before hashing.

    Returns:
        Clusters of at least two posts, sorted by cluster_id
    """
    if bands * rows != num_perm:
        raise ValueError(f"bands*rows ({bands}*{rows}) must equal num_perm ({num_perm})")

    shingle_sets = parallel_map(lambda p: frozenset(shingle(p.text, k_words)), posts, n_jobs)

    # Distinct shingle set -> post ids carrying it.
    members: Dict[FrozenSet[str], List[str]] = defaultdict(list)
    for post, sh in zip(posts, shingle_sets):
        if sh:
            members[sh].append(post.post_id)
    distinct = sorted(members, key=lambda sh: min(members[sh]))

    signatures = parallel_map(lambda sh: minhash_signature(sh, num_perm, seed), distinct, n_jobs)

    uf = UnionFind()
    for sh in distinct:
        ids = members[sh]
        uf.union(*ids)

    lsh = MinHashLSH(num_perm=num_perm, params=(bands, rows))
    for i, sig in enumerate(signatures):
        lsh.insert(i, sig)

    verified = 0
    for i, sig in enumerate(signatures):
        rep_i = members[distinct[i]][0]
        for j in lsh.query(sig):
            if j <= i:
                continue
            rep_j = members[distinct[j]][0]
            if uf[rep_i] == uf[rep_j]:
                continue
            if exact_jaccard(distinct[i], distinct[j]) >= j_dup:
                uf.union(rep_i, rep_j)
                verified += 1

    by_id = {p.post_id: p for p in posts}
    signature_of = {members[sh][0]: sig for sh, sig in zip(distinct, signatures)}
    for sh, sig in zip(distinct, signatures):
        for pid in members[sh]:
            signature_of.setdefault(pid, sig)

    clusters: List[DuplicateCluster] = []
    for group in uf.to_sets():
        if len(group) < 2:
            continue
        ids = sorted(group)
        group_posts = [by_id[pid] for pid in ids]
        times = [p.created_at for p in group_posts]
        clusters.append(DuplicateCluster(
            cluster_id="dup-" + hashlib.sha1("|".join(ids).encode("utf-8")).hexdigest()[:16],
            post_ids=ids,
            signature=[int(v) for v in signature_of[ids[0]].hashvalues],
            accounts=sorted({p.author_id for p in group_posts}),
            platforms=sorted({p.platform for p in group_posts}),
            span_seconds=max(times) - min(times),
        ))
    clusters.sort(key=lambda c: c.cluster_id)
    logger.info("%d distinct texts, %d verified LSH pairs, %d duplicate clusters",
                len(distinct), verified, len(clusters))
    return clusters


def dup_fraction(
    post_ids: Sequence[str],
    dup_clusters: Sequence[DuplicateCluster],
    min_accounts: int = DUP_MIN_ACCOUNTS,
) -> float:
    """Share of the narrative's posts inside duplicate clusters spanning >= min_accounts accounts."""
    if not post_ids:
        return 0.0
    ringed = {pid for c in dup_clusters if len(c.accounts) >= min_accounts for pid in c.post_ids}
    return sum(1 for pid in post_ids if pid in ringed) / len(post_ids)


def synchrony(
    posts: Sequence[Post],
    window: int = SYNC_WINDOW,
    min_posts: int = SYNC_MIN_POSTS,
) -> Tuple[Dict[Tuple[str, str], int], float]:
    """
    Co-posting between account pairs.

    For accounts a < b the count is min(#a-posts with a b-post within `window`
    seconds, #b-posts with an a-post within `window`), and the normalized value
    divides it by min(n_a, n_b). Accounts with fewer than min_posts posts are
    ignored.

    Returns:
        (pair -> co-posting count, max normalized value over pairs)
    """
    per_account: Dict[str, int] = defaultdict(int)
    for post in posts:
        per_account[post.author_id] += 1
    eligible = {a for a, n in per_account.items() if n >= min_posts}
    if len(eligible) < 2:
        return {}, 0.0

    events = sorted(
        (p.created_at, p.author_id, p.post_id) for p in posts if p.author_id in eligible
    )
    # (a, b) -> a's posts having a b-post within the window
    near: Dict[Tuple[str, str], Set[str]] = defaultdict(set)
    lo = 0
    for t, author, pid in events:
        while events[lo][0] < t - window:
            lo += 1
        j = lo
        while j < len(events) and events[j][0] <= t + window:
            other = events[j][1]
            if other != author:
                near[(author, other)].add(pid)
            j += 1

    counts: Dict[Tuple[str, str], int] = {}
    best = 0.0
    for (a, b), hits in near.items():
        if a > b:
            continue
        count = min(len(hits), len(near.get((b, a), ())))
        if count == 0:
            continue
        counts[(a, b)] = count
        best = max(best, count / min(per_account[a], per_account[b]))
    return counts, best


def coordination_score(
    narrative_id: str,
    dup_fraction_value: float,
    synchrony_value: float,
    platform_span: int,
    weights: Optional[Mapping[str, float]] = None,
    bias: float = COORDINATION_BIAS,
) -> CoordinationScore:
    """logistic(w_dup*dup + w_sync*sync + w_span*min(span-1, 3)/3 + bias)"""
    w = dict(COORDINATION_WEIGHTS)
    w.update(weights or {})
    span_term = min(max(platform_span - 1, 0), 3) / 3.0
    z = w["dup"] * dup_fraction_value + w["sync"] * synchrony_value + w["span"] * span_term + bias
    return CoordinationScore(
        narrative_id=narrative_id,
        dup_fraction=float(dup_fraction_value),
        synchrony=float(synchrony_value),
        platform_span=int(platform_span),
        score=float(expit(z)),
    )


def narrative_coordination(
    narrative: Narrative,
    posts_by_id: Mapping[str, Post],
    dup_clusters: Sequence[DuplicateCluster],
    min_accounts: int = DUP_MIN_ACCOUNTS,
    sync_window: int = SYNC_WINDOW,
    sync_min_posts: int = SYNC_MIN_POSTS,
    weights: Optional[Mapping[str, float]] = None,
    bias: float = COORDINATION_BIAS,
) -> Tuple[CoordinationScore, Dict[Tuple[str, str], int]]:
    """All coordination components of one narrative plus the per-pair synchrony counts."""
    posts = [posts_by_id[pid] for pid in narrative.post_ids if pid in posts_by_id]
    dup = dup_fraction(narrative.post_ids, dup_clusters, min_accounts)
    pair_counts, sync = synchrony(posts, sync_window, sync_min_posts)
    span = max(1, len({p.platform for p in posts}))
    return coordination_score(narrative.narrative_id, dup, sync, span, weights, bias), pair_counts
