"""
Type definitions and dataclasses for narrative assessment.

This module defines the structured data types shared by every pipeline stage.
Collections that end up in artifacts are kept as sorted lists so that
serialized output is byte-stable.
"""

from dataclasses import dataclass, field, asdict
from typing import Any, Dict, FrozenSet, List, Optional, Set


@dataclass
class Engagement:
    """Engagement counts attached to a post."""
    likes: int = 0
    shares: int = 0
    replies: int = 0

    @property
    def total(self) -> int:
        return self.likes + self.shares + self.replies


@dataclass
class Post:
    """One normalized social-media item from any platform."""
    post_id: str
    platform: str
    author_id: str
    text: str
    created_at: int  # unix seconds
    author_created_at: Optional[int] = None
    author_followers: int = 0
    author_following: int = 0
    urls: List[str] = field(default_factory=list)  # canonical forms only
    engagement: Engagement = field(default_factory=Engagement)
    reply_to: Optional[str] = None
    extras: Dict[str, Any] = field(default_factory=dict)  # opaque, never read by stages

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Post":
        values = dict(data)
        values['engagement'] = Engagement(**values.get('engagement', {}))
        values['urls'] = list(values.get('urls', []))
        return cls(**values)


@dataclass
class SourceLists:
    """Reference lists loaded from plain-text / JSON files."""
    low_credibility_domains: FrozenSet[str] = frozenset()
    entity_dictionary: Dict[str, str] = field(default_factory=dict)  # alias -> canonical name
    propaganda_lexicon: Dict[str, List[str]] = field(default_factory=dict)  # technique -> cues
    shortener_map: Dict[str, str] = field(default_factory=dict)
    articles: Dict[str, str] = field(default_factory=dict)  # canonical URL -> pre-fetched text


@dataclass
class Entity:
    """A disambiguated named thing and the posts mentioning it."""
    canonical_name: str
    kind: str  # hashtag | mention | domain | term
    mentions: Set[str] = field(default_factory=set)

    @property
    def key(self) -> str:
        return entity_key(self.canonical_name, self.kind)


def entity_key(name: str, kind: str) -> str:
    """Node identifier used in graphs and artifacts (`kind:name`)."""
    return f"{kind}:{name}"


@dataclass
class CoocEdge:
    a: str
    b: str
    weight: float  # Jaccard of mention sets within the window
    cooc_count: int


@dataclass
class CoocGraph:
    """Entity co-occurrence graph of one window."""
    window_index: int
    nodes: List[str] = field(default_factory=list)
    edges: List[CoocEdge] = field(default_factory=list)
    mentions: Dict[str, List[str]] = field(default_factory=dict)  # node -> post ids in window


@dataclass
class EventCluster:
    """Connected set of entities within one window."""
    cluster_id: str
    window_index: int
    window_start: int
    entities: List[str]
    post_ids: List[str]
    burst_z: float = 0.0
    is_event: bool = False

    @property
    def volume(self) -> int:
        return len(self.post_ids)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['volume'] = self.volume
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EventCluster":
        values = {k: v for k, v in data.items() if k != 'volume'}
        return cls(**values)


@dataclass
class Narrative:
    """Time-ordered chain of linked event clusters."""
    narrative_id: str
    clusters: List[str]  # cluster ids, consecutive windows
    link_scores: List[float] = field(default_factory=list)  # Jaccard between consecutive clusters
    entity_signature: List[str] = field(default_factory=list)
    post_ids: List[str] = field(default_factory=list)
    platforms: List[str] = field(default_factory=list)
    split_from: Optional[str] = None
    first_window: int = 0
    last_window: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Narrative":
        return cls(**data)


@dataclass
class DuplicateCluster:
    """Near-duplicate posts joined by verified shingle Jaccard."""
    cluster_id: str
    post_ids: List[str]
    signature: List[int]  # MinHash of the representative post
    accounts: List[str]
    platforms: List[str]
    span_seconds: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DuplicateCluster":
        return cls(**data)


@dataclass
class CoordinationScore:
    narrative_id: str
    dup_fraction: float
    synchrony: float
    platform_span: int
    score: float


@dataclass
class TechniqueHit:
    """Propaganda cue found in a document; span in UTF-8 byte offsets."""
    doc_id: str
    technique: str
    start: int
    end: int
    matched_cue: str


@dataclass
class AgendaScore:
    narrative_id: str
    hits_per_100_tokens: float
    technique_diversity: float
    score: float
    n_hits: int = 0
    n_tokens: int = 0


@dataclass
class AccountFlags:
    author_id: str
    flags: List[str]
    inauthentic: bool


@dataclass
class DeceptionScore:
    narrative_id: str
    lowcred_fraction: float
    inauthentic_fraction: float
    score: float
    annotations: List[str] = field(default_factory=list)


@dataclass
class NarrativeAssessment:
    """Per-narrative scores on the three axes and the fused label."""
    narrative_id: str
    deception: float
    coordination: float
    agenda: float
    fused: float
    label: str  # organic | orchestrated_inauthentic
    feature_vector: Dict[str, float] = field(default_factory=dict)
    config_fingerprint: str = ""
    annotations: List[str] = field(default_factory=list)
    evidence: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "NarrativeAssessment":
        return cls(**data)


@dataclass
class ActorFingerprint:
    """Candidate actor group of accounts with similar behavior."""
    group_id: str
    account_ids: List[str]
    hour_histogram: List[float]
    domain_distribution: Dict[str, float]
    technique_distribution: Dict[str, float]
    dup_cluster_overlap: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class ImpactReport:
    narrative_id: str
    reach_upper_bound: int
    engagement_total: int
    amplification: float
    platform_spread: int
    time_to_peak: int
    conversion_proxy: int
    engagement_series: List[Dict[str, int]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
