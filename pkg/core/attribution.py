"""
Candidate actor grouping (exploratory).

Accounts taking part in orchestrated narratives are described by a behavioral
fingerprint: posting-hour histogram, shared-domain distribution and propaganda
technique distribution. Accounts whose fingerprints have cosine similarity at
or above the threshold are joined (single linkage). Groups are candidates for
analyst review, never a named attribution.
"""

import hashlib
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Sequence, Set, Tuple

import networkx as nx
import numpy as np
from sklearn.metrics.pairwise import cosine_similarity

from core.config import COSINE_THRESHOLD
from core.types_narrative import ActorFingerprint, DuplicateCluster, Post, TechniqueHit
from core.url_canon import registrable_domain

logger = logging.getLogger(__name__)

HOURS = 24


@dataclass
class AccountVector:
    account_id: str
    hour_histogram: np.ndarray
    domain_block: np.ndarray
    technique_block: np.ndarray

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.hour_histogram, self.domain_block, self.technique_block])


def _normalized(counts: np.ndarray) -> np.ndarray:
    total = counts.sum()
    return counts / total if total > 0 else counts


def utc_hour(timestamp: int) -> int:
    return int(timestamp // 3600) % HOURS


def fingerprint(
    account_id: str,
    posts: Sequence[Post],
    hits: Sequence[TechniqueHit],
    domain_vocab: Sequence[str],
    techniques: Sequence[str],
) -> AccountVector:
    """
    Behavioral vector of one account.

    Blocks are normalized independently; a block with no evidence stays all-zero.
    """
    hours = np.zeros(HOURS)
    for post in posts:
        hours[utc_hour(post.created_at)] += 1

    domain_index = {d: i for i, d in enumerate(domain_vocab)}
    domains = np.zeros(len(domain_vocab))
    for post in posts:
        for url in post.urls:
            idx = domain_index.get(registrable_domain(url))
            if idx is not None:
                domains[idx] += 1

    technique_index = {t: i for i, t in enumerate(techniques)}
    tech = np.zeros(len(techniques))
    for hit in hits:
        idx = technique_index.get(hit.technique)
        if idx is not None:
            tech[idx] += 1

    return AccountVector(account_id, _normalized(hours), _normalized(domains), _normalized(tech))


def dup_cluster_overlap(accounts: Sequence[str], dup_sets: Mapping[str, Set[str]]) -> float:
    """Mean pairwise Jaccard of the accounts' duplicate-cluster memberships; 0 for one account."""
    pairs = list(combinations(sorted(accounts), 2))
    if not pairs:
        return 0.0
    total = 0.0
    for a, b in pairs:
        sa, sb = dup_sets.get(a, set()), dup_sets.get(b, set())
        union = sa | sb
        total += len(sa & sb) / len(union) if union else 0.0
    return total / len(pairs)


def group_id_for(account_ids: Iterable[str]) -> str:
    return "actor-" + hashlib.sha1("|".join(sorted(account_ids)).encode("utf-8")).hexdigest()[:10]


def _mean_distribution(blocks: Sequence[np.ndarray], labels: Sequence[str]) -> Dict[str, float]:
    if not labels:
        return {}
    pooled = _normalized(np.sum(blocks, axis=0))
    return {label: float(v) for label, v in zip(labels, pooled) if v > 0}


def group_actors(
    vectors: Sequence[AccountVector],
    domain_vocab: Sequence[str],
    techniques: Sequence[str],
    dup_sets: Mapping[str, Set[str]],
    cosine_threshold: float = COSINE_THRESHOLD,
) -> Tuple[List[ActorFingerprint], List[str]]:
    """
    Single-linkage grouping at cosine >= threshold.

    Returns:
        (groups sorted by their smallest account id, unattributed all-zero accounts)
    """
    ordered = sorted(vectors, key=lambda v: v.account_id)
    usable = [v for v in ordered if np.any(v.vector)]
    unattributed = [v.account_id for v in ordered if not np.any(v.vector)]
    if not usable:
        return [], unattributed

    matrix = np.vstack([v.vector for v in usable])
    similarity = cosine_similarity(matrix)

    graph = nx.Graph()
    graph.add_nodes_from(range(len(usable)))
    rows, cols = np.nonzero(np.triu(similarity >= cosine_threshold - 1e-12, k=1))
    graph.add_edges_from(zip(rows.tolist(), cols.tolist()))

    groups: List[ActorFingerprint] = []
    for component in nx.connected_components(graph):
        members = [usable[i] for i in sorted(component)]
        account_ids = [m.account_id for m in members]
        hours = np.mean([m.hour_histogram for m in members], axis=0)
        groups.append(ActorFingerprint(
            group_id=group_id_for(account_ids),
            account_ids=account_ids,
            hour_histogram=[float(h) for h in _normalized(hours)],
            domain_distribution=_mean_distribution([m.domain_block for m in members], domain_vocab),
            technique_distribution=_mean_distribution([m.technique_block for m in members], techniques),
            dup_cluster_overlap=dup_cluster_overlap(account_ids, dup_sets),
        ))
    groups.sort(key=lambda g: g.account_ids[0])
    return groups, unattributed


def attribute_accounts(
    account_ids: Iterable[str],
    posts: Sequence[Post],
    hits: Sequence[TechniqueHit],
    dup_clusters: Sequence[DuplicateCluster],
    techniques: Sequence[str],
    cosine_threshold: float = COSINE_THRESHOLD,
) -> Tuple[List[ActorFingerprint], List[str]]:
    """Fingerprint and group the given accounts over their whole posting history."""
    wanted = set(account_ids)
    posts_of: Dict[str, List[Post]] = defaultdict(list)
    author_of: Dict[str, str] = {}
    for post in posts:
        if post.author_id in wanted:
            posts_of[post.author_id].append(post)
            author_of[post.post_id] = post.author_id

    hits_of: Dict[str, List[TechniqueHit]] = defaultdict(list)
    for hit in hits:
        if hit.doc_id in author_of:
            hits_of[author_of[hit.doc_id]].append(hit)

    domain_counts: Counter = Counter(
        registrable_domain(u) for a in wanted for p in posts_of[a] for u in p.urls
    )
    domain_vocab = sorted(domain_counts)
    techniques = sorted(techniques)

    dup_sets: Dict[str, Set[str]] = defaultdict(set)
    for cluster in dup_clusters:
        for pid in cluster.post_ids:
            if pid in author_of:
                dup_sets[author_of[pid]].add(cluster.cluster_id)

    vectors = [fingerprint(a, posts_of[a], hits_of[a], domain_vocab, techniques) for a in sorted(wanted)]
    groups, unattributed = group_actors(vectors, domain_vocab, techniques, dup_sets, cosine_threshold)
    logger.info("%d accounts -> %d candidate groups (%d unattributed)",
                len(vectors), len(groups), len(unattributed))
    return groups, unattributed
