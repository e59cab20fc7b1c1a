"""
Entity extraction and disambiguation.

Entities are surface patterns only: hashtags, mentions, registrable domains of
shared URLs, and dictionary terms (longest match, case-insensitive, on word
boundaries). They are the node set of the per-window co-occurrence graphs.
"""

import re
from typing import Dict, Iterable, List, Optional, Pattern, Sequence, Set, Tuple

from core.parallel import parallel_map
from core.text import blank_urls
from core.types_narrative import Entity, Post, SourceLists, entity_key
from core.url_canon import registrable_domain

HASHTAG_RE = re.compile(r"(?<![\w#@])#(\w+)")
MENTION_RE = re.compile(r"(?<![\w#@])@(\w+)")


def build_term_pattern(dictionary: Dict[str, str]) -> Optional[Pattern]:
    """Alternation of dictionary aliases, longest first, ties lexicographic."""
    if not dictionary:
        return None
    aliases = sorted(dictionary, key=lambda a: (-len(a), a))
    alternatives = [r"\s+".join(re.escape(word) for word in alias.split()) for alias in aliases]
    return re.compile(r"(?<!\w)(?:" + "|".join(alternatives) + r")(?!\w)", re.IGNORECASE)


class EntityExtractor:
    """Per-post entity extraction with the dictionary pattern compiled once."""

    def __init__(self, lists: SourceLists):
        self.dictionary = lists.entity_dictionary
        self.term_pattern = build_term_pattern(self.dictionary)

    def extract(self, post: Post) -> Set[Tuple[str, str]]:
        text = blank_urls(post.text)
        found: Set[Tuple[str, str]] = set()
        for m in HASHTAG_RE.finditer(text):
            found.add((m.group(1).casefold(), "hashtag"))
        for m in MENTION_RE.finditer(text):
            found.add((m.group(1).casefold(), "mention"))
        for url in post.urls:
            found.add((registrable_domain(url), "domain"))
        if self.term_pattern is not None:
            for m in self.term_pattern.finditer(text):
                alias = " ".join(m.group(0).split()).casefold()
                canonical = self.dictionary.get(alias)
                if canonical:
                    found.add((canonical, "term"))
        return found


def extract_entities(post: Post, lists: SourceLists) -> Set[Tuple[str, str]]:
    """Entities of one post as (canonical_name, kind); each at most once."""
    return EntityExtractor(lists).extract(post)


def resolve_alias(name: str, alias_map: Dict[str, str]) -> str:
    """Follow the alias map to a fixpoint; a cycle resolves to its smallest member."""
    seen: List[str] = []
    current = name
    while current in alias_map and current not in seen:
        seen.append(current)
        current = alias_map[current]
    if current in seen:
        cycle = seen[seen.index(current):]
        return min(cycle)
    return current


def disambiguate(
    raw_entities: Iterable[Tuple[str, str, str]],
    alias_map: Optional[Dict[str, str]] = None,
) -> Dict[str, Entity]:
    """
    Merge raw (name, kind, post_id) mentions into Entities keyed by `kind:name`.

    Names are case-folded and alias-resolved before merging; mention sets are unioned.
    """
    alias_map = alias_map or {}
    merged: Dict[str, Entity] = {}
    for name, kind, post_id in raw_entities:
        canonical = resolve_alias(name.casefold(), alias_map)
        if not canonical:
            continue
        key = entity_key(canonical, kind)
        entity = merged.get(key)
        if entity is None:
            entity = merged[key] = Entity(canonical_name=canonical, kind=kind)
        entity.mentions.add(post_id)
    return merged


def extract_corpus_entities(
    posts: Sequence[Post],
    lists: SourceLists,
    n_jobs: int = 1,
) -> Tuple[Dict[str, Entity], Dict[str, List[str]]]:
    """
    Extract and disambiguate entities for a whole corpus.

    Returns:
        (entities by key, sorted entity keys per post_id)
    """
    extractor = EntityExtractor(lists)
    per_post = parallel_map(extractor.extract, posts, n_jobs)

    raw = ((name, kind, post.post_id) for post, found in zip(posts, per_post) for name, kind in found)
    entities = disambiguate(raw, lists.entity_dictionary)

    post_entities: Dict[str, List[str]] = {}
    for post, found in zip(posts, per_post):
        keys = {entity_key(resolve_alias(name, lists.entity_dictionary), kind) for name, kind in found}
        post_entities[post.post_id] = sorted(keys)
    return entities, post_entities
