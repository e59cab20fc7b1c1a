from core.types_narrative import (
    AccountFlags, AgendaScore, CoordinationScore, DeceptionScore, DuplicateCluster, EventCluster, Narrative,
)
from features.feature_extractor import FEATURE_KEYS, extract_narrative_features

from tests.conftest import T0, make_post


def _inputs():
    posts = [
        make_post("p1", "a", created_at=T0, urls=["https://news.example.co.uk/x"], author_created_at=T0 - 10 * 86400),
        make_post("p2", "b", created_at=T0 + 30, reply_to="p1", urls=["https://fakenews.net/y"]),
        make_post("p3", "b", created_at=T0 + 4000, reply_to="p2"),
        make_post("p4", "c", created_at=T0 + 4100, reply_to="outside"),
    ]
    by_id = {p.post_id: p for p in posts}
    clusters = {
        "c0": EventCluster("c0", 0, T0, ["h:x", "h:y"], ["p1", "p2"], burst_z=4.0, is_event=True),
        "c1": EventCluster("c1", 1, T0 + 3600, ["h:x"], ["p3", "p4"], burst_z=1.0),
    }
    narrative = Narrative("nar-1", ["c0", "c1"], entity_signature=["h:x", "h:y"],
                          post_ids=["p1", "p2", "p3", "p4"], first_window=0, last_window=1)
    dups = [DuplicateCluster("dup-1", ["p1", "p2", "zz"], [], ["a", "b", "z"], ["alpha"], 30)]
    flags = {
        "a": AccountFlags("a", ["young_account", "handle_pattern"], True),
        "b": AccountFlags("b", ["follower_skew"], False),
    }
    scores = (
        DeceptionScore("nar-1", 0.5, 0.25, 0.4),
        CoordinationScore("nar-1", 0.5, 0.2, 1, 0.3),
        AgendaScore("nar-1", 2.0, 0.5, 0.6, n_hits=1, n_tokens=50),
    )
    return narrative, by_id, clusters, dups, flags, scores


def test_vector_has_fixed_keys_and_floats():
    narrative, by_id, clusters, dups, flags, scores = _inputs()
    features = extract_narrative_features(narrative, by_id, clusters, dups, flags, *scores)
    assert tuple(features) == FEATURE_KEYS
    assert all(isinstance(v, float) for v in features.values())


def test_feature_values():
    narrative, by_id, clusters, dups, flags, scores = _inputs()
    f = extract_narrative_features(narrative, by_id, clusters, dups, flags, *scores)
    assert f["user_n_accounts"] == 3.0
    assert f["user_inauthentic_fraction"] == 1 / 3
    assert f["user_follower_skew_fraction"] == 1 / 3
    assert f["user_mean_account_age_days"] == 10.0
    assert f["meta_n_posts"] == 4.0
    assert f["meta_urls_per_post"] == 0.5
    assert f["meta_distinct_domains"] == 2.0
    assert f["temporal_n_windows"] == 2.0
    assert f["temporal_duration_seconds"] == 4100.0
    assert f["temporal_max_burst_z"] == 4.0
    assert f["temporal_event_cluster_fraction"] == 0.5
    assert f["structural_n_entities"] == 2.0
    assert f["structural_n_dup_clusters"] == 1.0
    assert f["structural_accounts_in_dup_clusters"] == 2.0
    # b -> a once; b replying to itself and replies outside the narrative do not count
    assert f["structural_reply_edges"] == 1.0
    assert (f["axis_deception"], f["axis_coordination"], f["axis_agenda"]) == (0.4, 0.3, 0.6)
