import numpy as np

from core.entities import disambiguate, extract_corpus_entities, extract_entities, resolve_alias
from core.types_narrative import SourceLists

from tests.conftest import T0, make_post


def test_hashtags_mentions_domains_terms(source_lists):
    post = make_post(
        "p1",
        text="Secretary Clinton spoke #Vote2024 with @Reporter, see https://x.org/#anchor a@b.com x#y",
        urls=["https://news.bbc.co.uk/story"],
    )
    found = extract_entities(post, source_lists)
    assert found == {
        ("hillary_clinton", "term"),
        ("vote2024", "hashtag"),
        ("reporter", "mention"),
        ("bbc.co.uk", "domain"),
    }


def test_longest_alias_wins(source_lists):
    found = extract_entities(make_post("p1", text="secretary   CLINTON and clintonite"), source_lists)
    assert found == {("hillary_clinton", "term")}


def test_each_entity_once_per_post():
    found = extract_entities(make_post("p1", text="#a #A #a"), SourceLists())
    assert found == {("a", "hashtag")}


def test_resolve_alias_fixpoint_and_cycle():
    assert resolve_alias("a", {"a": "b", "b": "c"}) == "c"
    assert resolve_alias("x", {"x": "y", "y": "x"}) == "x"
    assert resolve_alias("y", {"x": "y", "y": "x"}) == "x"
    assert resolve_alias("free", {}) == "free"


def test_disambiguate_merges_mentions():
    merged = disambiguate(
        [("Clinton", "term", "p1"), ("hillary_clinton", "term", "p2"), ("clinton", "hashtag", "p3")],
        {"clinton": "hillary_clinton"},
    )
    assert set(merged) == {"term:hillary_clinton", "hashtag:hillary_clinton"}
    assert merged["term:hillary_clinton"].mentions == {"p1", "p2"}


def test_corpus_entities(source_lists):
    posts = [
        make_post("p1", text="#storm hits #city"),
        make_post("p2", text="nothing here"),
        make_post("p3", text="#storm again"),
    ]
    entities, per_post = extract_corpus_entities(posts, source_lists, n_jobs=2)
    assert per_post == {"p1": ["hashtag:city", "hashtag:storm"], "p2": [], "p3": ["hashtag:storm"]}
    assert entities["hashtag:storm"].mentions == {"p1", "p3"}


WORDS = ["storm", "market", "today", "people", "report", "again", "city", "news"]
DOMAINS = {"https://news.bbc.co.uk/a": "bbc.co.uk", "https://www.example.org/b": "example.org",
           "https://shop.example.com.au/c": "example.com.au"}


def _generated_posts(rng, n):
    posts, expected = [], {}
    for i in range(n):
        tokens, found = [], set()
        for _ in range(int(rng.integers(3, 12))):
            roll = rng.random()
            if roll < 0.15:
                tag = f"Tag{int(rng.integers(10))}"
                tokens.append("#" + tag)
                found.add((tag.casefold(), "hashtag"))
            elif roll < 0.3:
                user = f"User{int(rng.integers(10))}"
                tokens.append("@" + user)
                found.add((user.casefold(), "mention"))
            elif roll < 0.4:
                tokens.append(["clinton", "Secretary Clinton", "CLINTON"][int(rng.integers(3))])
                found.add(("hillary_clinton", "term"))
            else:
                tokens.append(WORDS[int(rng.integers(len(WORDS)))])
        urls = [u for u in DOMAINS if rng.random() < 0.2]
        found |= {(DOMAINS[u], "domain") for u in urls}
        posts.append(make_post(f"p{i:03d}", text=" ".join(tokens), created_at=T0 + i, urls=urls))
        expected[f"p{i:03d}"] = found
    return posts, expected


def test_extraction_matches_generated_ground_truth(source_lists):
    posts, expected = _generated_posts(np.random.default_rng(5), 200)
    for post in posts:
        assert extract_entities(post, source_lists) == expected[post.post_id]


def test_corpus_entities_independent_of_post_order(source_lists):
    posts, _ = _generated_posts(np.random.default_rng(9), 200)
    shuffled = list(posts)
    np.random.default_rng(1).shuffle(shuffled)
    entities, per_post = extract_corpus_entities(posts, source_lists)
    entities_s, per_post_s = extract_corpus_entities(shuffled, source_lists, n_jobs=2)
    assert per_post == per_post_s
    assert {k: e.mentions for k, e in entities.items()} == {k: e.mentions for k, e in entities_s.items()}


def test_random_alias_chains_resolve_consistently():
    rng = np.random.default_rng(4)
    for _ in range(50):
        names = [f"n{i}" for i in range(15)]
        alias_map = {name: names[int(rng.integers(len(names)))] for name in names if rng.random() < 0.7}
        for name in names:
            resolved = resolve_alias(name, alias_map)
            assert resolve_alias(resolved, alias_map) == resolved
            if name in alias_map:
                assert resolve_alias(alias_map[name], alias_map) == resolved
        merged = disambiguate([(name, "term", name) for name in names], alias_map)
        for name in names:
            assert name in merged["term:" + resolve_alias(name, alias_map)].mentions
