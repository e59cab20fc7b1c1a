"""
Narrative detection and tracking.

Posts are cut into time windows; each window gets an entity co-occurrence
graph (Jaccard edge weights), the graph is clustered into events, every
cluster is scored for a volume burst against its entities' trailing history,
and clusters are chained across consecutive windows into narratives.
"""

import hashlib
import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from core.config import C_MIN, CLUSTERER, K_TRAILING, TAU_LINK, THETA_EDGE, Z_EVENT
from core.errors import BadWindow
from core.parallel import parallel_map
from core.types_narrative import CoocEdge, CoocGraph, EventCluster, Narrative, Post

logger = logging.getLogger(__name__)


def _digest(text: str, length: int) -> str:
    return hashlib.sha1(text.encode("utf-8")).hexdigest()[:length]


def jaccard(a, b) -> float:
    a, b = set(a), set(b)
    if not a and not b:
        return 0.0
    return len(a & b) / len(a | b)


# ---------------------------------------------------------------- windowing

def _check_window(window_len: float, stride: float) -> None:
    if window_len <= 0 or stride <= 0:
        raise BadWindow(f"window_len and stride must be positive (got {window_len}, {stride})")
    if stride > window_len:
        raise BadWindow(f"stride {stride} exceeds window_len {window_len}")


def window_range(offset: float, window_len: float, stride: float) -> Tuple[int, int]:
    """Inclusive window indices k with k*stride <= offset < k*stride + window_len."""
    k_max = int(math.floor(offset / stride))
    k_min = max(0, int(math.floor((offset - window_len) / stride)) + 1)
    return k_min, k_max


def window_posts(
    stream: Sequence[Post],
    window_len: float,
    stride: float,
) -> List[Tuple[int, List[Post]]]:
    """
    Assign posts to (possibly overlapping) windows.

    Windows start at corpus_min_time + k*stride; every index from 0 to the last
    populated window is returned, empty windows included, posts in stream order.

    Raises:
        BadWindow: window_len or stride not positive, or stride > window_len
    """
    _check_window(window_len, stride)
    if not stream:
        return []
    t0 = min(p.created_at for p in stream)
    buckets: Dict[int, List[Post]] = defaultdict(list)
    last = 0
    for post in stream:
        k_min, k_max = window_range(post.created_at - t0, window_len, stride)
        for k in range(k_min, k_max + 1):
            buckets[k].append(post)
        last = max(last, k_max)
    return [(k, buckets.get(k, [])) for k in range(last + 1)]


# ---------------------------------------------------------------- graphs

def build_cooc_graph(
    window_index: int,
    posts: Sequence[Post],
    post_entities: Mapping[str, Sequence[str]],
    theta_edge: float = THETA_EDGE,
    c_min: int = C_MIN,
) -> CoocGraph:
    """
    Entity co-occurrence graph of one window.

    weight(a, b) = |P(a) & P(b)| / |P(a) | P(b)| over the window's posts; an edge
    exists when cooc_count >= c_min and weight >= theta_edge. Entities that never
    co-occur have weight 0 and never get an edge.
    """
    mentions: Dict[str, List[str]] = defaultdict(list)
    pair_counts: Counter = Counter()
    for post in posts:
        keys = sorted(set(post_entities.get(post.post_id, ())))
        for key in keys:
            mentions[key].append(post.post_id)
        pair_counts.update(combinations(keys, 2))

    edges: List[CoocEdge] = []
    min_count = max(1, c_min)
    for (a, b), count in sorted(pair_counts.items()):
        if count < min_count:
            continue
        weight = count / (len(mentions[a]) + len(mentions[b]) - count)
        if weight >= theta_edge:
            edges.append(CoocEdge(a=a, b=b, weight=weight, cooc_count=count))

    return CoocGraph(
        window_index=window_index,
        nodes=sorted(mentions),
        edges=edges,
        mentions={k: sorted(v) for k, v in mentions.items()},
    )


def cluster_id_for(window_index: int, entities: Sequence[str]) -> str:
    return "clu-" + _digest(f"{window_index}|" + "|".join(sorted(entities)), 16)


def cluster_graph(
    g: CoocGraph,
    window_start: int = 0,
    clusterer: str = CLUSTERER,
    seed: int = 0,
) -> List[EventCluster]:
    """
    Partition a window graph into event clusters.

    Default: connected components (singletons for isolated nodes). The seeded
    label-propagation alternative also partitions the node set.
    """
    graph = nx.Graph()
    graph.add_nodes_from(g.nodes)
    graph.add_weighted_edges_from((e.a, e.b, e.weight) for e in g.edges)

    if clusterer == "label_propagation":
        groups = nx.community.asyn_lpa_communities(graph, weight="weight", seed=seed)
    else:
        groups = nx.connected_components(graph)

    clusters: List[EventCluster] = []
    for group in groups:
        entities = sorted(group)
        post_ids = sorted({pid for e in entities for pid in g.mentions.get(e, ())})
        clusters.append(EventCluster(
            cluster_id=cluster_id_for(g.window_index, entities),
            window_index=g.window_index,
            window_start=int(window_start),
            entities=entities,
            post_ids=post_ids,
        ))
    clusters.sort(key=lambda c: c.entities[0])
    return clusters


# ---------------------------------------------------------------- bursts

def burst_score(series: Sequence[float], k_trailing: int = K_TRAILING) -> List[float]:
    """
    z-score of each value against up to k_trailing preceding values.

    z_t = (v_t - mean(prior)) / max(std(prior), 1); 0 when fewer than two prior
    values exist. The std floor of one post keeps flat histories finite.
    """
    values = np.asarray(series, dtype=float)
    scores: List[float] = []
    for t in range(len(values)):
        prior = values[max(0, t - k_trailing):t]
        if k_trailing < 2 or len(prior) < 2:
            scores.append(0.0)
            continue
        scores.append(float((values[t] - prior.mean()) / max(float(prior.std()), 1.0)))
    return scores


def score_cluster_bursts(
    clusters: Sequence[EventCluster],
    graphs: Mapping[int, CoocGraph],
    k_trailing: int = K_TRAILING,
    z_event: float = Z_EVENT,
) -> None:
    """Fill burst_z/is_event: cluster volume vs posts mentioning its entities in earlier windows."""
    for cluster in clusters:
        history: List[int] = []
        for j in range(max(0, cluster.window_index - k_trailing), cluster.window_index):
            graph = graphs.get(j)
            ids = set()
            if graph is not None:
                for entity in cluster.entities:
                    ids.update(graph.mentions.get(entity, ()))
            history.append(len(ids))
        z = burst_score(history + [cluster.volume], k_trailing)[-1]
        cluster.burst_z = z
        cluster.is_event = z >= z_event


# ---------------------------------------------------------------- chaining

@dataclass
class _Chain:
    narrative: Narrative
    members: List[EventCluster] = field(default_factory=list)


def best_parent(child: EventCluster, parents: Sequence[EventCluster]) -> Optional[Tuple[EventCluster, float]]:
    """Parent maximizing entity Jaccard; ties -> larger volume, then smaller cluster_id."""
    if not parents:
        return None
    scored = [(jaccard(child.entities, p.entities), p) for p in parents]
    score, parent = min(scored, key=lambda sp: (-sp[0], -sp[1].volume, sp[1].cluster_id))
    return parent, score


def narrative_id_for(first_cluster_id: str) -> str:
    return "nar-" + _digest(first_cluster_id, 12)


def chain_clusters(
    clusters_by_window: Mapping[int, Sequence[EventCluster]],
    tau_link: float = TAU_LINK,
    platform_of: Optional[Mapping[str, str]] = None,
) -> List[Narrative]:
    """
    Link clusters of consecutive windows into narratives.

    Each child picks its best parent; the link holds when Jaccard >= tau_link.
    When several children pick one parent, the largest child continues the
    parent's narrative and the others start narratives with split_from set.
    """
    chain_of: Dict[str, _Chain] = {}
    chains: List[_Chain] = []

    for w in sorted(clusters_by_window):
        current = sorted(clusters_by_window[w], key=lambda c: c.cluster_id)
        parents = list(clusters_by_window.get(w - 1, ()))

        links: Dict[str, Tuple[EventCluster, float]] = {}
        children_of: Dict[str, List[EventCluster]] = defaultdict(list)
        for child in current:
            best = best_parent(child, parents)
            if best is not None and best[1] >= tau_link:
                links[child.cluster_id] = best
                children_of[best[0].cluster_id].append(child)

        continuing = {}
        for parent_id, kids in children_of.items():
            heir = min(kids, key=lambda c: (-c.volume, c.cluster_id))
            continuing[heir.cluster_id] = parent_id

        for child in current:
            if child.cluster_id in continuing:
                chain = chain_of[continuing[child.cluster_id]]
                chain.narrative.link_scores.append(links[child.cluster_id][1])
            else:
                split_from = None
                if child.cluster_id in links:
                    split_from = chain_of[links[child.cluster_id][0].cluster_id].narrative.narrative_id
                chain = _Chain(Narrative(
                    narrative_id=narrative_id_for(child.cluster_id),
                    clusters=[],
                    split_from=split_from,
                    first_window=child.window_index,
                ))
                chains.append(chain)
            chain.narrative.clusters.append(child.cluster_id)
            chain.members.append(child)
            chain_of[child.cluster_id] = chain

    narratives: List[Narrative] = []
    for chain in chains:
        nar = chain.narrative
        nar.last_window = chain.members[-1].window_index
        nar.entity_signature = sorted({e for c in chain.members for e in c.entities})
        nar.post_ids = sorted({pid for c in chain.members for pid in c.post_ids})
        if platform_of is not None:
            nar.platforms = sorted({platform_of[pid] for pid in nar.post_ids if pid in platform_of})
        narratives.append(nar)
    narratives.sort(key=lambda n: (n.first_window, n.narrative_id))
    return narratives


# ---------------------------------------------------------------- stage

@dataclass
class NarrativeResult:
    graphs: Dict[int, CoocGraph]
    clusters: List[EventCluster]
    narratives: List[Narrative]
    t0: int = 0


def detect_narratives(
    posts: Sequence[Post],
    post_entities: Mapping[str, Sequence[str]],
    window_len: int,
    stride: int,
    theta_edge: float = THETA_EDGE,
    c_min: int = C_MIN,
    tau_link: float = TAU_LINK,
    k_trailing: int = K_TRAILING,
    z_event: float = Z_EVENT,
    clusterer: str = CLUSTERER,
    seed: int = 0,
    n_jobs: int = 1,
) -> NarrativeResult:
    """Windows -> graphs -> clusters -> bursts -> narratives."""
    windows = window_posts(posts, window_len, stride)
    t0 = min((p.created_at for p in posts), default=0)

    def build(item: Tuple[int, List[Post]]) -> Tuple[CoocGraph, List[EventCluster]]:
        k, members = item
        graph = build_cooc_graph(k, members, post_entities, theta_edge, c_min)
        return graph, cluster_graph(graph, int(t0 + k * stride), clusterer, seed + k)

    built = parallel_map(build, windows, n_jobs)
    graphs = {g.window_index: g for g, _ in built}
    clusters = [c for _, window_clusters in built for c in window_clusters]
    score_cluster_bursts(clusters, graphs, k_trailing, z_event)

    by_window: Dict[int, List[EventCluster]] = defaultdict(list)
    for cluster in clusters:
        by_window[cluster.window_index].append(cluster)
    platform_of = {p.post_id: p.platform for p in posts}
    narratives = chain_clusters(by_window, tau_link, platform_of)

    logger.info("%d windows, %d clusters, %d narratives",
                len(windows), len(clusters), len(narratives))
    return NarrativeResult(graphs=graphs, clusters=clusters, narratives=narratives, t0=t0)


def export_graphml(path: str, clusters: Sequence[EventCluster], narratives: Sequence[Narrative]) -> None:
    """Cluster/link graph for external visualization tools."""
    graph = nx.DiGraph()
    for cluster in clusters:
        graph.add_node(
            cluster.cluster_id,
            window_index=cluster.window_index,
            volume=cluster.volume,
            burst_z=float(cluster.burst_z),
            entities=" ".join(cluster.entities),
        )
    for nar in narratives:
        for cluster_id in nar.clusters:
            graph.nodes[cluster_id]["narrative_id"] = nar.narrative_id
        for (src, dst), score in zip(zip(nar.clusters, nar.clusters[1:]), nar.link_scores):
            graph.add_edge(src, dst, link_score=float(score), narrative_id=nar.narrative_id)
    nx.write_graphml(graph, path)
