"""
Ingest: declarative platform adapters, record normalization and stream merging.

Each platform file is newline-delimited JSON, one record per line. An adapter
config maps unified Post fields to source field paths (dotted keys, `a[].b`
maps over a list), so new platforms need a JSON file, not code.
"""

import heapq
import json
import logging
import os
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from core.errors import BadTimestamp, ConfigError, IoError, MissingField, NotAUrl
from core.parallel import parallel_map
from core.text import find_urls
from core.types_narrative import Engagement, Post, SourceLists
from core.url_canon import canonicalize_url, registrable_domain, try_canonicalize

logger = logging.getLogger(__name__)

REQUIRED_FIELDS = ("post_id", "author_id", "text", "created_at")
OPTIONAL_FIELDS = (
    "author_created_at", "author_followers", "author_following",
    "likes", "shares", "replies", "reply_to",
)


@dataclass
class AdapterConfig:
    """Field mapping for one platform."""
    platform: str
    fields: Dict[str, str]
    url_fields: List[str] = field(default_factory=list)
    timestamp_formats: Dict[str, str] = field(default_factory=dict)  # field -> unix | iso8601

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AdapterConfig":
        if not data.get("platform"):
            raise ConfigError("adapter config needs a 'platform' tag")
        fields = dict(data.get("fields", {}))
        missing = [name for name in REQUIRED_FIELDS if name not in fields]
        if missing:
            raise ConfigError(f"adapter '{data['platform']}' does not map {missing}")
        unknown = set(fields) - set(REQUIRED_FIELDS) - set(OPTIONAL_FIELDS)
        if unknown:
            raise ConfigError(f"adapter '{data['platform']}' maps unknown fields {sorted(unknown)}")
        return cls(
            platform=str(data["platform"]),
            fields=fields,
            url_fields=list(data.get("url_fields", [])),
            timestamp_formats=dict(data.get("timestamp_formats", {})),
        )

    def source_roots(self) -> set:
        paths = list(self.fields.values()) + list(self.url_fields)
        return {p.split(".", 1)[0].replace("[]", "") for p in paths}


def load_adapter(path: str) -> AdapterConfig:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return AdapterConfig.from_dict(json.load(f))
    except (OSError, json.JSONDecodeError) as exc:
        raise IoError(path, str(exc)) from exc


def get_path(record: Any, path: str) -> Any:
    """Resolve a dotted path; a `[]` suffix maps the rest of the path over a list."""
    head, _, rest = path.partition(".")
    if head.endswith("[]"):
        items = record.get(head[:-2]) if isinstance(record, dict) else None
        if not isinstance(items, list):
            return None
        if not rest:
            return items
        values = [get_path(item, rest) for item in items]
        return [v for v in values if v is not None]
    value = record.get(head) if isinstance(record, dict) else None
    if not rest or value is None:
        return value
    return get_path(value, rest)


def parse_timestamp(value: Any, field_name: str, fmt: str = "unix") -> int:
    """Parse a unix or ISO-8601 timestamp into positive integer unix seconds."""
    if value is None or isinstance(value, bool):
        raise BadTimestamp(field_name, value)
    try:
        if fmt == "iso8601":
            text = str(value).strip().replace("Z", "+00:00")
            parsed = datetime.fromisoformat(text)
            if parsed.tzinfo is None:
                parsed = parsed.replace(tzinfo=timezone.utc)
            seconds = int(parsed.timestamp())
        else:
            seconds = int(float(value))
    except (TypeError, ValueError, OverflowError) as exc:
        raise BadTimestamp(field_name, value) from exc
    if seconds <= 0:
        raise BadTimestamp(field_name, value)
    return seconds


def _count(value: Any) -> int:
    try:
        return max(0, int(value or 0))
    except (TypeError, ValueError):
        return 0


def _collect_urls(text: str, link_values: Iterable[Any], shortener_map: Dict[str, str]) -> List[str]:
    raws: List[str] = list(find_urls(text))
    for value in link_values:
        if isinstance(value, list):
            raws.extend(str(v) for v in value if v)
        elif value:
            raws.append(str(value))
    urls: List[str] = []
    for raw in raws:
        url = try_canonicalize(raw, shortener_map)
        if url is None:
            logger.debug("skipping non-URL %r", raw)
        elif url not in urls:
            urls.append(url)
    return urls


def normalize(
    record: Dict[str, Any],
    adapter: AdapterConfig,
    shortener_map: Optional[Dict[str, str]] = None,
) -> Post:
    """
    Map one platform record into a unified Post.

    Args:
        record: Parsed platform record
        adapter: Field mapping of the record's platform
        shortener_map: Optional static short-URL -> target map

    Returns:
        Post with missing optional counts defaulted to 0 and canonical urls

    Raises:
        MissingField: id/author/text/timestamp absent
        BadTimestamp: non-positive or unparseable timestamp
    """
    values: Dict[str, Any] = {}
    for name in REQUIRED_FIELDS:
        value = get_path(record, adapter.fields[name])
        if value is None or (name != "text" and value == ""):
            raise MissingField(name, adapter.platform)
        values[name] = value
    if not isinstance(values["text"], str):
        raise MissingField("text", adapter.platform)

    formats = adapter.timestamp_formats
    created_at = parse_timestamp(values["created_at"], "created_at", formats.get("created_at", "unix"))

    author_created_at: Optional[int] = None
    if "author_created_at" in adapter.fields:
        raw = get_path(record, adapter.fields["author_created_at"])
        if raw is not None:
            author_created_at = parse_timestamp(
                raw, "author_created_at", formats.get("author_created_at", "unix"))
            if author_created_at > created_at:
                raise BadTimestamp("author_created_at", raw)

    def optional(name: str) -> Any:
        path = adapter.fields.get(name)
        return get_path(record, path) if path else None

    reply_to = optional("reply_to")
    roots = adapter.source_roots()
    extras = {k: v for k, v in record.items() if k not in roots}

    return Post(
        post_id=str(values["post_id"]),
        platform=adapter.platform,
        author_id=str(values["author_id"]),
        text=values["text"],
        created_at=created_at,
        author_created_at=author_created_at,
        author_followers=_count(optional("author_followers")),
        author_following=_count(optional("author_following")),
        urls=_collect_urls(
            values["text"],
            (get_path(record, p) for p in adapter.url_fields),
            shortener_map or {},
        ),
        engagement=Engagement(
            likes=_count(optional("likes")),
            shares=_count(optional("shares")),
            replies=_count(optional("replies")),
        ),
        reply_to=str(reply_to) if reply_to not in (None, "") else None,
        extras=extras,
    )


def load_platform_file(
    path: str,
    adapter: AdapterConfig,
    shortener_map: Optional[Dict[str, str]] = None,
) -> Tuple[List[Post], Counter]:
    """
    Normalize every record of a newline-delimited file.

    Bad records (including lines that are not valid UTF-8) are skipped, logged
    and counted by error type; input order is kept.
    """
    posts: List[Post] = []
    skipped: Counter = Counter()
    try:
        handle = open(path, "rb")
    except OSError as exc:
        raise IoError(path, str(exc)) from exc
    with handle:
        for line_no, raw in enumerate(handle, 1):
            try:
                line = raw.decode("utf-8")
                if not line.strip():
                    continue
                record = json.loads(line)
                if not isinstance(record, dict):
                    raise ValueError("record is not an object")
                posts.append(normalize(record, adapter, shortener_map))
            except (MissingField, BadTimestamp) as exc:
                skipped[type(exc).__name__] += 1
                logger.warning("%s:%d skipped: %s", path, line_no, exc)
            except UnicodeDecodeError as exc:
                skipped["BadEncoding"] += 1
                logger.warning("%s:%d skipped: invalid UTF-8 (%s)", path, line_no, exc.reason)
            except ValueError as exc:
                skipped["BadRecord"] += 1
                logger.warning("%s:%d skipped: %s", path, line_no, exc)
    logger.info("loaded %d posts from %s (%d skipped)", len(posts), path, sum(skipped.values()))
    return posts, skipped


def sort_key(post: Post) -> Tuple[int, str]:
    return post.created_at, post.post_id


def merge_streams(streams: Sequence[List[Post]]) -> List[Post]:
    """k-way merge of per-file streams; sorted output when every input is sorted."""
    return list(heapq.merge(*streams, key=sort_key))


def ingest_corpus(
    inputs: Sequence[Tuple[str, AdapterConfig]],
    lists: SourceLists,
    n_jobs: int = 1,
) -> Tuple[List[Post], Dict[str, Dict[str, int]]]:
    """
    Load every platform file and merge into one stream sorted by (created_at, post_id).

    A post_id seen again (in a later line or a later input file) is dropped and
    counted as DuplicateId against the file it came from.

    Returns:
        (posts, per-file skip statistics)
    """
    def load(item: Tuple[str, AdapterConfig]) -> Tuple[List[Post], Counter]:
        path, adapter = item
        return load_platform_file(path, adapter, lists.shortener_map)

    results = parallel_map(load, inputs, n_jobs)

    seen: set = set()
    streams: List[List[Post]] = []
    stats: Dict[str, Dict[str, int]] = {}
    for (path, _), (posts, skipped) in zip(inputs, results):
        kept: List[Post] = []
        for post in posts:
            if post.post_id in seen:
                skipped["DuplicateId"] += 1
                logger.warning("%s: duplicate post_id %s dropped", path, post.post_id)
                continue
            seen.add(post.post_id)
            kept.append(post)
        streams.append(sorted(kept, key=sort_key))
        stats[os.path.basename(path)] = dict(sorted(skipped.items()))
    return merge_streams(streams), stats


def _read_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise IoError(path, str(exc)) from exc


def _normalize_domain(entry: str) -> str:
    entry = entry.strip().lower()
    if "://" in entry:
        try:
            return registrable_domain(canonicalize_url(entry))
        except NotAUrl:
            return entry
    return entry.strip("/")


def load_domain_list(path: str) -> frozenset:
    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = f.read().splitlines()
    except OSError as exc:
        raise IoError(path, str(exc)) from exc
    entries = (line.split("#", 1)[0].strip() for line in lines)
    return frozenset(_normalize_domain(e) for e in entries if e)


def load_source_lists(
    low_credibility_path: Optional[str] = None,
    entity_dictionary_path: Optional[str] = None,
    lexicon_path: Optional[str] = None,
    shortener_map_path: Optional[str] = None,
    articles_path: Optional[str] = None,
) -> SourceLists:
    """Load reference lists; any path may be omitted."""
    lists = SourceLists()
    if low_credibility_path:
        lists.low_credibility_domains = load_domain_list(low_credibility_path)
    if entity_dictionary_path:
        aliases = {}
        for alias, canonical in _read_json(entity_dictionary_path).items():
            canonical = " ".join(str(canonical).split()).casefold()
            if not canonical:
                raise ConfigError(f"{entity_dictionary_path}: empty canonical name for alias '{alias}'")
            aliases[" ".join(alias.split()).casefold()] = canonical
        lists.entity_dictionary = aliases
    if lexicon_path:
        lexicon = {}
        for technique, cues in _read_json(lexicon_path).items():
            if technique.startswith("_"):
                continue  # annotations such as "_note"
            cues = [c for c in (cues or []) if str(c).strip()]
            if not cues:
                raise ConfigError(f"{lexicon_path}: technique '{technique}' has no cues")
            lexicon[technique] = [str(c) for c in cues]
        lists.propaganda_lexicon = lexicon
    if shortener_map_path:
        shortener = {}
        for short, target in _read_json(shortener_map_path).items():
            key = try_canonicalize(short)
            if key:
                shortener[key] = target
        lists.shortener_map = shortener
    if articles_path:
        articles = {}
        for url, text in _read_json(articles_path).items():
            key = try_canonicalize(url)
            if key and isinstance(text, str):
                articles[key] = text
        lists.articles = articles
    return lists
