import random

import pytest

from core.types_narrative import AccountFlags, Narrative
from features.credibility_features import (
    account_flags, corpus_account_flags, deception_score, domain_credibility, max_posts_per_hour,
    narrative_deception,
)

from tests.conftest import T0, make_post

DAY = 86400


def _narrative(posts):
    return Narrative("nar-1", ["c"], post_ids=[p.post_id for p in posts]), {p.post_id: p for p in posts}


def test_lowcred_fraction_counts_url_shares():
    posts = [
        make_post("p1", urls=["https://www.fakenews.net/a", "https://good.org/x"]),
        make_post("p2", urls=["https://sub.hoax.info/b"]),
        make_post("p3"),
    ]
    narrative, by_id = _narrative(posts)
    fraction, notes = domain_credibility(narrative, by_id, frozenset({"fakenews.net", "news.hoax.info"}))
    assert fraction == pytest.approx(2 / 3)
    assert notes == []


def test_no_urls_annotation():
    narrative, by_id = _narrative([make_post("p1"), make_post("p2")])
    assert domain_credibility(narrative, by_id, frozenset({"x.com"})) == (0.0, ["no_urls"])


def test_max_posts_per_hour():
    assert max_posts_per_hour([]) == 0
    assert max_posts_per_hour([T0 + 10 * i for i in range(30)]) == 30
    assert max_posts_per_hour([T0, T0 + 3599, T0 + 3600]) == 2


def test_account_flags_all_rules():
    posts = [
        make_post(f"p{i}", "patriot1234567", created_at=T0 + 60 * i,
                  author_created_at=T0 - 5 * DAY, author_followers=10, author_following=900)
        for i in range(25)
    ]
    flags = account_flags("patriot1234567", posts)
    assert flags.flags == ["young_account", "follower_skew", "handle_pattern", "burst_poster"]
    assert flags.inauthentic


def test_account_flags_organic_profile():
    posts = [make_post("p1", "jane_doe", author_created_at=T0 - 400 * DAY,
                       author_followers=300, author_following=200)]
    flags = account_flags("jane_doe", posts)
    assert flags.flags == []
    assert not flags.inauthentic


def test_young_account_skipped_without_creation_time():
    posts = [make_post("p1", "acct", author_followers=1, author_following=100)]
    flags = account_flags("acct", posts)
    assert flags.flags == ["follower_skew"]
    assert not flags.inauthentic


def test_latest_profile_counts_are_used():
    posts = [
        make_post("p1", "acct", created_at=T0, author_followers=1, author_following=500),
        make_post("p2", "acct", created_at=T0 + 10, author_followers=100, author_following=500),
    ]
    assert "follower_skew" not in account_flags("acct", posts).flags


def test_corpus_flags_keyed_by_author():
    posts = [make_post("p1", "b"), make_post("p2", "a"), make_post("p3", "b")]
    flags = corpus_account_flags(posts)
    assert list(flags) == ["a", "b"]


def test_deception_convex_and_monotone():
    score = deception_score("n", 0.4, 0.8, {"lowcred": 1.0, "inauthentic": 3.0})
    assert score.score == pytest.approx(0.25 * 0.4 + 0.75 * 0.8)
    rng = random.Random(0)
    for _ in range(200):
        low, inauth = rng.random(), rng.random()
        base = deception_score("n", low, inauth).score
        assert 0.0 <= base <= 1.0
        assert deception_score("n", min(1, low + 0.1), inauth).score >= base
        assert deception_score("n", low, min(1, inauth + 0.1)).score >= base


def test_narrative_deception():
    posts = [
        make_post("p1", "bot1", urls=["https://fakenews.net/x"]),
        make_post("p2", "human", urls=["https://good.org/"]),
    ]
    narrative, by_id = _narrative(posts)
    flags = {
        "bot1": AccountFlags("bot1", ["young_account", "handle_pattern"], True),
        "human": AccountFlags("human", [], False),
    }
    score = narrative_deception(narrative, by_id, frozenset({"fakenews.net"}), flags)
    assert score.lowcred_fraction == 0.5
    assert score.inauthentic_fraction == 0.5
    assert score.score == pytest.approx(0.5)
    assert score.annotations == []


def _random_profile(rng, i):
    author_id = rng.choice([f"patriot{rng.randint(100000, 99999999)}", f"user_{i}", f"eagle{rng.randint(10, 99999)}"])
    created = rng.choice([None, T0 - rng.randint(1, 60) * DAY])
    span = rng.choice([1800, 7200, 5 * DAY])
    posts = [
        make_post(f"{author_id}-{j}", author_id, created_at=T0 + rng.randint(0, span),
                  author_created_at=created, author_followers=rng.randint(0, 500),
                  author_following=rng.randint(0, 5000))
        for j in range(rng.randint(1, 40))
    ]
    return author_id, posts


def _expected_flags(author_id, posts):
    first = min(posts, key=lambda p: (p.created_at, p.post_id))
    latest = max(posts, key=lambda p: (p.created_at, p.post_id))
    times = [p.created_at for p in posts]
    expected = []
    if first.author_created_at is not None and first.created_at - first.author_created_at < 30 * DAY:
        expected.append("young_account")
    if latest.author_following > 20 * max(latest.author_followers, 1):
        expected.append("follower_skew")
    if author_id.rstrip("0123456789") != author_id and len(author_id) - len(author_id.rstrip("0123456789")) >= 6 \
            and author_id.rstrip("0123456789").replace("_", "").isalpha():
        expected.append("handle_pattern")
    if max(sum(t <= u < t + 3600 for u in times) for t in times) > 20:
        expected.append("burst_poster")
    return expected


def test_account_flags_match_rule_oracle():
    rng = random.Random(12)
    seen = set()
    for i in range(100):
        author_id, posts = _random_profile(rng, i)
        expected = _expected_flags(author_id, posts)
        flags = account_flags(author_id, posts)
        assert flags.flags == expected
        assert flags.inauthentic == (len(expected) >= 2)
        seen.update(expected)
    assert seen == {"young_account", "follower_skew", "handle_pattern", "burst_poster"}
