"""
Synthetic labeled corpora: organic chatter plus injected coordinated campaigns.

Organic accounts post independent texts about shared topics at diurnally
modulated Poisson times. Campaign accounts post lightly edited copies of a few
templates in tight bursts at shift starts, carrying the campaign's hashtags
and linking its low-credibility domains across platforms. Output is the exact
ingest format (one NDJSON file per platform, each in its own record flavor)
plus a separate ground-truth file, adapters, reference lists and a pipeline
config that points at them.
"""

import json
import logging
import math
import os
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from core.errors import BadConfig, IoError

logger = logging.getLogger(__name__)

GROUND_TRUTH_SCHEMA = "synthetic-ground-truth"
ORGANIC_LABEL = "organic"
PLATFORMS = ("alpha", "beta", "gamma")

TOPICS: Dict[str, Dict[str, Any]] = {
    "transit": {
        "words": ["bus", "train", "station", "commute", "platform", "delay", "schedule", "tram",
                  "ticket", "route", "rail", "driver", "line", "transfer", "depot"],
        "terms": {"city council": "city council", "council": "city council"},
    },
    "weather": {
        "words": ["rain", "storm", "forecast", "sunny", "wind", "cloud", "humid", "frost",
                  "temperature", "drizzle", "thunder", "breeze", "snow", "heat", "umbrella"],
        "terms": {"met office": "met office"},
    },
    "football": {
        "words": ["match", "goal", "striker", "keeper", "league", "derby", "penalty", "coach",
                  "season", "transfer", "stadium", "tackle", "fixture", "kit", "referee"],
        "terms": {"premier league": "premier league"},
    },
    "cooking": {
        "words": ["recipe", "oven", "garlic", "pasta", "bake", "sauce", "spice", "dough",
                  "roast", "flavor", "kitchen", "simmer", "herbs", "dinner", "bread"],
        "terms": {"farmers market": "farmers market"},
    },
    "music": {
        "words": ["album", "concert", "guitar", "chorus", "band", "vinyl", "tour", "setlist",
                  "drummer", "melody", "festival", "single", "venue", "encore", "lyrics"],
        "terms": {"main stage": "main stage"},
    },
    "markets": {
        "words": ["stocks", "index", "earnings", "bond", "yield", "rally", "shares", "dividend",
                  "quarter", "forecast", "sector", "investor", "trading", "futures", "growth"],
        "terms": {"central bank": "central bank"},
    },
}

FILLER = [
    "today", "really", "think", "just", "saw", "great", "morning", "people", "week", "again",
    "maybe", "pretty", "still", "news", "about", "love", "honestly", "finally", "looks", "good",
    "anyone", "else", "thought", "last", "night", "heard", "nice", "here", "this", "that",
    "update", "quick", "note", "interesting", "later", "friends", "local", "spot", "time", "day",
]

CAMPAIGN_WORDS = [
    "official", "report", "truth", "leaders", "plan", "citizens", "vote", "media", "cover",
    "story", "facts", "numbers", "public", "money", "hidden", "deal", "insiders", "budget",
    "policy", "families", "workers", "promise", "lies", "record", "evidence", "sources",
]

CAMPAIGN_HANDLES = ["patriot", "freedom", "voice", "eagle", "liberty", "truthseeker", "homeland", "citizen"]


@dataclass
class ScenarioConfig:
    """Parameters of one synthetic scenario; every draw comes from `seed`."""
    seed: int
    n_organic_accounts: int = 300
    n_campaigns: int = 2
    n_campaign_accounts: int = 20  # per campaign
    n_platforms: int = 3
    duration_hours: float = 72.0
    organic_rate_per_hour: float = 0.1  # per account
    diurnal_amplitude: float = 0.5
    shift_starts: List[float] = field(default_factory=lambda: [9.5, 33.5, 57.5])
    campaign_stagger_hours: float = 2.0  # campaign c runs its shifts c*stagger later
    posts_per_shift: int = 3  # per campaign account
    templates_per_campaign: int = 3
    template_words: int = 30
    cues_per_template: int = 3
    edit_rate: float = 0.1
    sync_jitter_seconds: float = 20.0
    url_share_rate: float = 0.3  # organic posts carrying a link
    reply_rate: float = 0.1
    start_time: int = 1699920000  # 2023-11-14T00:00:00Z

    def validate(self) -> None:
        if self.seed is None or isinstance(self.seed, bool) or not isinstance(self.seed, int):
            raise BadConfig("seed must be an integer")
        if self.n_organic_accounts < 1:
            raise BadConfig("n_organic_accounts must be positive")
        if self.n_campaigns < 0 or self.n_campaign_accounts < 0:
            raise BadConfig("campaign counts must be non-negative")
        if not 1 <= self.n_platforms <= len(PLATFORMS):
            raise BadConfig(f"n_platforms must be between 1 and {len(PLATFORMS)}")
        if self.duration_hours <= 0:
            raise BadConfig("duration_hours must be positive")
        if self.organic_rate_per_hour <= 0:
            raise BadConfig("organic_rate_per_hour must be positive")
        if not 0.0 <= self.diurnal_amplitude <= 1.0:
            raise BadConfig("diurnal_amplitude must lie in [0, 1]")
        if not 0.0 <= self.edit_rate <= 1.0:
            raise BadConfig("edit_rate must lie in [0, 1]")
        if not 0.0 <= self.url_share_rate <= 1.0 or not 0.0 <= self.reply_rate <= 1.0:
            raise BadConfig("url_share_rate and reply_rate must lie in [0, 1]")
        if self.sync_jitter_seconds < 0 or self.campaign_stagger_hours < 0:
            raise BadConfig("sync_jitter_seconds and campaign_stagger_hours must be non-negative")
        if self.posts_per_shift < 1 or self.templates_per_campaign < 1:
            raise BadConfig("posts_per_shift and templates_per_campaign must be positive")
        if self.template_words < 5:
            raise BadConfig("template_words must be at least 5")
        if self.cues_per_template < 0:
            raise BadConfig("cues_per_template must be non-negative")
        if any(s < 0 or s >= self.duration_hours for s in self.shift_starts):
            raise BadConfig("shift_starts must lie within [0, duration_hours)")
        if self.start_time <= 0:
            raise BadConfig("start_time must be positive")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ScenarioConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise BadConfig(f"unknown scenario keys {sorted(unknown)}")
        if "seed" not in data:
            raise BadConfig("scenario needs an explicit seed")
        return cls(**dict(data))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def load_scenario(path: str) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return ScenarioConfig.from_dict(json.load(f))
    except (OSError, json.JSONDecodeError) as exc:
        raise IoError(path, str(exc)) from exc


# ---------------------------------------------------------------- timing

def diurnal_rate(t_hours: float, base_rate: float, amplitude: float) -> float:
    """Rate peaking at 18:00 UTC and bottoming at 06:00 UTC."""
    return base_rate * (1.0 + amplitude * math.sin(2.0 * math.pi * (t_hours - 12.0) / 24.0))


def organic_arrival_times(
    rng: np.random.Generator,
    rate_per_hour: float,
    amplitude: float,
    duration_hours: float,
    start_hour_of_day: float = 0.0,
) -> List[float]:
    """
    Arrival offsets (seconds) of one account, by thinning a homogeneous process.

    With amplitude 0 every candidate is accepted, so gaps are exactly
    exponential with mean 1/rate.
    """
    rate_max = rate_per_hour * (1.0 + amplitude)
    times: List[float] = []
    t = 0.0
    while True:
        t += rng.exponential(1.0 / rate_max)
        if t >= duration_hours:
            break
        accept = diurnal_rate(start_hour_of_day + t, rate_per_hour, amplitude) / rate_max
        if amplitude == 0 or rng.random() < accept:
            times.append(t * 3600.0)
    return times


def jittered(rng: np.random.Generator, center: float, jitter: float) -> float:
    """center + N(0, jitter), clipped to center +/- 3*jitter."""
    if jitter <= 0:
        return center
    return center + float(np.clip(rng.normal(0.0, jitter), -3.0 * jitter, 3.0 * jitter))


# ---------------------------------------------------------------- text

def substitute_wildcards(cue: str, rng: np.random.Generator) -> str:
    return " ".join(FILLER[rng.integers(len(FILLER))] if w == "*" else w for w in cue.split())


def build_template(
    rng: np.random.Generator,
    hashtags: Sequence[str],
    cues: Sequence[str],
    n_words: int,
) -> List[str]:
    """Word list of a campaign template: filler words, cue phrases, trailing hashtags."""
    phrases = [substitute_wildcards(c, rng) for c in cues]
    n_filler = max(1, n_words - sum(len(p.split()) for p in phrases) - len(hashtags))
    words = [CAMPAIGN_WORDS[i] for i in rng.integers(len(CAMPAIGN_WORDS), size=n_filler)]
    for phrase in phrases:
        words.insert(int(rng.integers(len(words) + 1)), phrase)
    return " ".join(words).split() + ["#" + h for h in hashtags]


def light_edit(words: List[str], rng: np.random.Generator) -> List[str]:
    """One word-level substitute, insert or delete on a non-hashtag word."""
    editable = [i for i, w in enumerate(words) if not w.startswith("#")]
    if not editable:
        return list(words)
    out = list(words)
    pos = editable[int(rng.integers(len(editable)))]
    op = int(rng.integers(3))
    word = CAMPAIGN_WORDS[int(rng.integers(len(CAMPAIGN_WORDS)))]
    if op == 0:
        out[pos] = word
    elif op == 1:
        out.insert(pos, word)
    elif len(editable) > 1:
        del out[pos]
    return out


def organic_text(rng: np.random.Generator, topic: str) -> str:
    profile = TOPICS[topic]
    n = int(rng.integers(10, 19))
    words = [
        profile["words"][rng.integers(len(profile["words"]))] if rng.random() < 0.6 else FILLER[rng.integers(len(FILLER))]
        for _ in range(n)
    ]
    if rng.random() < 0.3:
        alias = sorted(profile["terms"])[int(rng.integers(len(profile["terms"])))]
        words.insert(int(rng.integers(len(words) + 1)), alias)
    words.insert(int(rng.integers(len(words) + 1)), f"#{topic}")
    return " ".join(words)


# ---------------------------------------------------------------- records

def _iso(ts: int) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def to_platform_record(post: Dict[str, Any], account: Dict[str, Any]) -> Dict[str, Any]:
    """Render a generated post in its platform's native record flavor."""
    url = post["url"]
    platform = post["platform"]
    if platform == "alpha":
        return {
            "id": post["post_id"],
            "user": {
                "id": account["author_id"],
                "created_at": account["created_at"],
                "followers_count": account["followers"],
                "friends_count": account["following"],
            },
            "text": post["text"],
            "ts": post["created_at"],
            "metrics": {"like_count": post["likes"], "share_count": post["shares"], "reply_count": post["replies"]},
            "links": [url] if url else [],
            "in_reply_to": post["reply_to"],
            "lang": "en",
        }
    if platform == "beta":
        return {
            "post_id": post["post_id"],
            "author": account["author_id"],
            "author_created": _iso(account["created_at"]),
            "author_followers": account["followers"],
            "author_following": account["following"],
            "body": post["text"],
            "created": _iso(post["created_at"]),
            "likes": post["likes"],
            "reposts": post["shares"],
            "comments": post["replies"],
            "link": url,
            "parent": post["reply_to"],
        }
    return {
        "uid": post["post_id"],
        "account": {
            "handle": account["author_id"],
            "since": account["created_at"],
            "audience": account["followers"],
            "follows": account["following"],
        },
        "content": {"text": post["text"], "attachments": [{"url": url}] if url else []},
        "time": post["created_at"],
        "reactions": post["likes"],
        "shares": post["shares"],
        "replies": post["replies"],
        "thread_parent": post["reply_to"],
    }


ADAPTERS: Dict[str, Dict[str, Any]] = {
    "alpha": {
        "platform": "alpha",
        "fields": {
            "post_id": "id", "author_id": "user.id", "text": "text", "created_at": "ts",
            "author_created_at": "user.created_at", "author_followers": "user.followers_count",
            "author_following": "user.friends_count", "likes": "metrics.like_count",
            "shares": "metrics.share_count", "replies": "metrics.reply_count", "reply_to": "in_reply_to",
        },
        "url_fields": ["links"],
        "timestamp_formats": {"created_at": "unix", "author_created_at": "unix"},
    },
    "beta": {
        "platform": "beta",
        "fields": {
            "post_id": "post_id", "author_id": "author", "text": "body", "created_at": "created",
            "author_created_at": "author_created", "author_followers": "author_followers",
            "author_following": "author_following", "likes": "likes", "shares": "reposts",
            "replies": "comments", "reply_to": "parent",
        },
        "url_fields": ["link"],
        "timestamp_formats": {"created_at": "iso8601", "author_created_at": "iso8601"},
    },
    "gamma": {
        "platform": "gamma",
        "fields": {
            "post_id": "uid", "author_id": "account.handle", "text": "content.text", "created_at": "time",
            "author_created_at": "account.since", "author_followers": "account.audience",
            "author_following": "account.follows", "likes": "reactions", "shares": "shares",
            "replies": "replies", "reply_to": "thread_parent",
        },
        "url_fields": ["content.attachments[].url"],
        "timestamp_formats": {"created_at": "unix", "author_created_at": "unix"},
    },
}


# ---------------------------------------------------------------- generation

@dataclass
class SyntheticCorpus:
    posts: List[Dict[str, Any]]
    accounts: Dict[str, Dict[str, Any]]
    campaigns: Dict[str, Dict[str, Any]]
    low_credibility_domains: List[str]
    entity_dictionary: Dict[str, str]
    lexicon: Dict[str, List[str]]

    def ground_truth(self) -> Dict[str, Any]:
        return {
            "schema": GROUND_TRUTH_SCHEMA,
            "posts": {p["post_id"]: p["label"] for p in self.posts},
            "accounts": {a: acc["label"] for a, acc in self.accounts.items()},
            "campaigns": self.campaigns,
        }


def _organic_accounts(rng: np.random.Generator, cfg: ScenarioConfig, platforms: Sequence[str]) -> Dict[str, Dict[str, Any]]:
    topics = sorted(TOPICS)
    accounts = {}
    for i in range(cfg.n_organic_accounts):
        followers = int(math.exp(rng.normal(5.0, 1.0)))
        accounts[f"org_{i:04d}"] = {
            "author_id": f"org_{i:04d}",
            "label": ORGANIC_LABEL,
            "platform": platforms[i % len(platforms)],
            "topic": topics[i % len(topics)],
            "created_at": int(cfg.start_time - rng.uniform(200, 3000) * 86400),
            "followers": followers,
            "following": int(followers * rng.uniform(0.3, 2.0)) + 10,
        }
    return accounts


def _campaign_accounts(rng: np.random.Generator, cfg: ScenarioConfig, campaign_id: str,
                       platforms: Sequence[str], offset: int) -> Dict[str, Dict[str, Any]]:
    accounts = {}
    for j in range(cfg.n_campaign_accounts):
        handle = CAMPAIGN_HANDLES[int(rng.integers(len(CAMPAIGN_HANDLES)))]
        author_id = f"{handle}{int(rng.integers(1_000_000, 10_000_000))}{offset + j:02d}"
        accounts[author_id] = {
            "author_id": author_id,
            "label": campaign_id,
            "platform": platforms[j % len(platforms)],
            "created_at": int(cfg.start_time - rng.uniform(3, 20) * 86400),
            "followers": int(rng.integers(5, 31)),
            "following": int(rng.integers(800, 3001)),
        }
    return accounts


def generate(cfg: ScenarioConfig, lexicon: Optional[Mapping[str, Sequence[str]]] = None) -> SyntheticCorpus:
    """
    Draw a labeled corpus.

    Raises:
        BadConfig: the scenario violates its invariants
    """
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    lexicon = {t: list(c) for t, c in sorted((lexicon or {}).items())}
    cue_pool = [c for t in sorted(lexicon) for c in lexicon[t]]
    platforms = list(PLATFORMS[:cfg.n_platforms])

    accounts = _organic_accounts(rng, cfg, platforms)
    posts: List[Dict[str, Any]] = []
    entity_dictionary = {alias: canon for profile in TOPICS.values() for alias, canon in profile["terms"].items()}
    topic_domains = {t: [f"{t}-daily.com", f"{t}report.org"] for t in sorted(TOPICS)}

    # organic
    recent: Dict[str, List[str]] = {p: [] for p in platforms}
    organic: List[Tuple[float, str]] = []
    start_hour = (cfg.start_time % 86400) / 3600.0
    for author_id, acc in accounts.items():
        for offset in organic_arrival_times(rng, cfg.organic_rate_per_hour, cfg.diurnal_amplitude,
                                            cfg.duration_hours, start_hour):
            organic.append((offset, author_id))
    organic.sort()
    for n, (offset, author_id) in enumerate(organic):
        acc = accounts[author_id]
        platform = acc["platform"]
        reply_to = None
        if recent[platform] and rng.random() < cfg.reply_rate:
            reply_to = recent[platform][int(rng.integers(len(recent[platform])))]
        url = None
        if rng.random() < cfg.url_share_rate:
            domain = topic_domains[acc["topic"]][int(rng.integers(2))]
            url = f"https://www.{domain}/story/{int(rng.integers(1, 400))}?utm_source=feed"
        post_id = f"{platform[0]}o{n:06d}"
        posts.append({
            "post_id": post_id, "platform": platform, "author_id": author_id, "label": ORGANIC_LABEL,
            "text": organic_text(rng, acc["topic"]), "created_at": int(cfg.start_time + offset),
            "url": url, "reply_to": reply_to,
            "likes": int(rng.poisson(3)), "shares": int(rng.poisson(1)), "replies": int(rng.poisson(0.5)),
        })
        recent[platform] = (recent[platform] + [post_id])[-50:]

    # campaigns
    campaigns: Dict[str, Dict[str, Any]] = {}
    low_credibility: List[str] = []
    for c in range(cfg.n_campaigns):
        campaign_id = f"campaign_{c + 1}"
        hashtags = [f"camp{c + 1}truth", f"camp{c + 1}now"]
        domains = [f"camp{c + 1}-dispatch.net", f"camp{c + 1}insider.info"]
        low_credibility.extend(domains)
        members = _campaign_accounts(rng, cfg, campaign_id, platforms, c * max(cfg.n_campaign_accounts, 1))
        accounts.update(members)

        templates = []
        for _ in range(cfg.templates_per_campaign):
            cues = []
            if cue_pool and cfg.cues_per_template:
                picks = rng.choice(len(cue_pool), size=min(cfg.cues_per_template, len(cue_pool)), replace=False)
                cues = [cue_pool[int(i)] for i in sorted(picks)]
            templates.append(build_template(rng, hashtags, cues, cfg.template_words))

        shifts = [s + c * cfg.campaign_stagger_hours for s in cfg.shift_starts]
        shifts = [s for s in shifts if s < cfg.duration_hours]
        campaigns[campaign_id] = {
            "accounts": sorted(members),
            "domains": domains,
            "hashtags": hashtags,
            "platforms": sorted({m["platform"] for m in members.values()}),
            "shift_starts": [int(cfg.start_time + s * 3600) for s in shifts],
        }

        n = 0
        for shift in shifts:
            center = cfg.start_time + shift * 3600.0
            for author_id in sorted(members):
                acc = members[author_id]
                for _ in range(cfg.posts_per_shift):
                    words = templates[int(rng.integers(len(templates)))]
                    if rng.random() < cfg.edit_rate:
                        words = light_edit(words, rng)
                    domain = domains[int(rng.integers(len(domains)))]
                    platform = acc["platform"]
                    posts.append({
                        "post_id": f"{platform[0]}c{c + 1}{n:05d}", "platform": platform,
                        "author_id": author_id, "label": campaign_id,
                        "text": " ".join(words), "created_at": int(round(jittered(rng, center, cfg.sync_jitter_seconds))),
                        "url": f"https://{domain}/p/{int(rng.integers(1, 50))}",
                        "reply_to": None,
                        "likes": int(rng.poisson(1)), "shares": int(rng.poisson(1)), "replies": int(rng.poisson(0.2)),
                    })
                    n += 1

    posts.sort(key=lambda p: (p["created_at"], p["post_id"]))
    logger.info("generated %d posts (%d accounts, %d campaigns)", len(posts), len(accounts), len(campaigns))
    return SyntheticCorpus(
        posts=posts,
        accounts=accounts,
        campaigns=campaigns,
        low_credibility_domains=sorted(low_credibility),
        entity_dictionary=entity_dictionary,
        lexicon=lexicon,
    )


def _dump(path: str, data: Any) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n")


def write_corpus(corpus: SyntheticCorpus, out_dir: str) -> Dict[str, str]:
    """
    Write platform files, ground truth, adapters, lists and pipeline.json.

    Returns:
        name -> written path
    """
    try:
        os.makedirs(os.path.join(out_dir, "adapters"), exist_ok=True)
        os.makedirs(os.path.join(out_dir, "lists"), exist_ok=True)
        written: Dict[str, str] = {}

        platforms = sorted({p["platform"] for p in corpus.posts} | {a["platform"] for a in corpus.accounts.values()})
        inputs = []
        for platform in platforms:
            path = os.path.join(out_dir, f"posts_{platform}.jsonl")
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                for post in corpus.posts:
                    if post["platform"] == platform:
                        record = to_platform_record(post, corpus.accounts[post["author_id"]])
                        f.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")
            written[f"posts_{platform}"] = path
            adapter_path = os.path.join(out_dir, "adapters", f"{platform}.json")
            _dump(adapter_path, ADAPTERS[platform])
            inputs.append({"path": f"posts_{platform}.jsonl", "adapter": f"adapters/{platform}.json"})

        written["ground_truth"] = os.path.join(out_dir, "ground_truth.json")
        _dump(written["ground_truth"], corpus.ground_truth())

        lowcred_path = os.path.join(out_dir, "lists", "low_credibility_domains.txt")
        with open(lowcred_path, "w", encoding="utf-8", newline="\n") as f:
            f.write("# synthetic low-credibility domains\n")
            f.writelines(d + "\n" for d in corpus.low_credibility_domains)
        _dump(os.path.join(out_dir, "lists", "entity_dictionary.json"), corpus.entity_dictionary)
        _dump(os.path.join(out_dir, "lists", "propaganda_lexicon.json"), corpus.lexicon)

        written["pipeline"] = os.path.join(out_dir, "pipeline.json")
        _dump(written["pipeline"], {
            "inputs": inputs,
            "lists": {
                "low_credibility": "lists/low_credibility_domains.txt",
                "entity_dictionary": "lists/entity_dictionary.json",
                "propaganda_lexicon": "lists/propaganda_lexicon.json",
            },
        })
    except OSError as exc:
        raise IoError(out_dir, str(exc)) from exc
    return written


# ---------------------------------------------------------------- ground truth

def load_ground_truth(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            truth = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise IoError(path, str(exc)) from exc
    if not isinstance(truth, dict) or truth.get("schema") != GROUND_TRUTH_SCHEMA:
        raise IoError(path, f"not a '{GROUND_TRUTH_SCHEMA}' file")
    return truth


def narrative_label(post_ids: Sequence[str], truth: Mapping[str, Any]) -> str:
    """
    Majority ground-truth label of a narrative's posts.

    Ties prefer organic, then the smallest campaign id; unknown posts are ignored.
    """
    labels = truth.get("posts", {})
    counts: Dict[str, int] = {}
    for pid in post_ids:
        label = labels.get(pid)
        if label is not None:
            counts[label] = counts.get(label, 0) + 1
    if not counts:
        return ORGANIC_LABEL
    return min(counts, key=lambda label: (-counts[label], label != ORGANIC_LABEL, label))
