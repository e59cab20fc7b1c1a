import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, ROOT)

from app.config import LISTS_DIR  # noqa: E402
from core.ingest import load_source_lists  # noqa: E402
from core.types_narrative import Engagement, Post, SourceLists  # noqa: E402

T0 = 1_700_000_000


def make_post(post_id, author_id="user_a", text="hello world", created_at=T0, platform="alpha", **kwargs):
    """Hand-built Post with sensible defaults."""
    engagement = kwargs.pop("engagement", None)
    if isinstance(engagement, dict):
        engagement = Engagement(**engagement)
    return Post(
        post_id=post_id,
        platform=platform,
        author_id=author_id,
        text=text,
        created_at=created_at,
        engagement=engagement or Engagement(),
        **kwargs,
    )


@pytest.fixture
def post_factory():
    return make_post


@pytest.fixture
def lexicon():
    return {
        "loaded_language": ["disgraceful", "shocking truth"],
        "doubt": ["so-called", "what are they hiding"],
        "slogans": ["wake up"],
        "name_calling": ["* puppets"],
    }


@pytest.fixture
def source_lists(lexicon):
    return SourceLists(
        low_credibility_domains=frozenset({"fakenews.net", "hoax.info"}),
        entity_dictionary={"secretary clinton": "hillary_clinton", "clinton": "hillary_clinton"},
        propaganda_lexicon=lexicon,
    )


@pytest.fixture(scope="session")
def shipped_lists():
    return load_source_lists(
        low_credibility_path=os.path.join(LISTS_DIR, "low_credibility_domains.txt"),
        entity_dictionary_path=os.path.join(LISTS_DIR, "entity_dictionary.json"),
        lexicon_path=os.path.join(LISTS_DIR, "propaganda_lexicon.json"),
    )
