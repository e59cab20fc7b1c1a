import numpy as np
import pytest

from core.attribution import (
    AccountVector, attribute_accounts, dup_cluster_overlap, fingerprint, group_actors, group_id_for, utc_hour,
)
from core.types_narrative import DuplicateCluster, TechniqueHit

from tests.conftest import make_post

MIDNIGHT = 1_699_920_000  # 2023-11-14T00:00:00Z


def _vec(name, values):
    hours = np.zeros(24)
    hours[:len(values)] = values
    return AccountVector(name, hours, np.zeros(0), np.zeros(0))


def test_utc_hour():
    assert utc_hour(MIDNIGHT) == 0
    assert utc_hour(MIDNIGHT + 10 * 3600 + 59) == 10
    assert utc_hour(MIDNIGHT - 1) == 23


def test_fingerprint_blocks_are_normalized():
    posts = [
        make_post("p1", "a", created_at=MIDNIGHT + 3600, urls=["https://www.x.org/1", "https://y.net/2"]),
        make_post("p2", "a", created_at=MIDNIGHT + 3 * 3600, urls=["https://x.org/3"]),
    ]
    hits = [TechniqueHit("p1", "doubt", 0, 3, "abc")]
    vec = fingerprint("a", posts, hits, ["x.org", "y.net"], ["doubt", "slogans"])
    assert vec.hour_histogram.sum() == pytest.approx(1.0)
    assert vec.hour_histogram[1] == 0.5 and vec.hour_histogram[3] == 0.5
    assert vec.domain_block.tolist() == pytest.approx([2 / 3, 1 / 3])
    assert vec.technique_block.tolist() == [1.0, 0.0]
    assert len(vec.vector) == 24 + 2 + 2


def test_missing_evidence_leaves_zero_block():
    vec = fingerprint("a", [make_post("p1", "a", created_at=MIDNIGHT)], [], ["x.org"], ["doubt"])
    assert vec.domain_block.tolist() == [0.0]
    assert vec.technique_block.tolist() == [0.0]


def test_single_linkage_chains_through_middle_account():
    vectors = [_vec("a", [1, 0, 0]), _vec("b", [1, 1, 0]), _vec("c", [0, 1, 0])]
    groups, unattributed = group_actors(vectors, [], [], {}, cosine_threshold=0.7)
    assert [g.account_ids for g in groups] == [["a", "b", "c"]]
    assert unattributed == []

    groups, _ = group_actors(vectors, [], [], {}, cosine_threshold=0.8)
    assert [g.account_ids for g in groups] == [["a"], ["b"], ["c"]]


def test_zero_vectors_are_unattributed():
    groups, unattributed = group_actors([_vec("z", []), _vec("a", [1])], [], [], {})
    assert [g.account_ids for g in groups] == [["a"]]
    assert unattributed == ["z"]
    assert group_actors([_vec("z", [])], [], [], {}) == ([], ["z"])


def test_dup_overlap():
    sets = {"a": {"d1"}, "b": {"d1", "d2"}, "c": set()}
    assert dup_cluster_overlap(["a", "b"], sets) == 0.5
    assert dup_cluster_overlap(["a", "b", "c"], sets) == pytest.approx(0.5 / 3)
    assert dup_cluster_overlap(["a"], sets) == 0.0


def test_group_id_ignores_order():
    assert group_id_for(["b", "a"]) == group_id_for(["a", "b"])
    assert group_id_for(["a"]).startswith("actor-")


def test_attribute_accounts_end_to_end():
    posts = [
        make_post("x1p", "x1", "same text", MIDNIGHT + 10 * 3600, urls=["https://camp.net/a"]),
        make_post("x2p", "x2", "same text", MIDNIGHT + 10 * 3600 + 20, urls=["https://camp.net/b"]),
        make_post("y1p", "y1", "other", MIDNIGHT + 22 * 3600, urls=["https://other.org/"]),
        make_post("bystander", "w", "ignored", MIDNIGHT + 10 * 3600, urls=["https://camp.net/a"]),
    ]
    hits = [TechniqueHit("x1p", "doubt", 0, 4, "same"), TechniqueHit("x2p", "doubt", 0, 4, "same")]
    dup = DuplicateCluster("dup-1", ["x1p", "x2p"], [], ["x1", "x2"], ["alpha"], 20)

    groups, unattributed = attribute_accounts(["y1", "x2", "x1", "z"], posts, hits, [dup], ["doubt", "slogans"])
    assert [g.account_ids for g in groups] == [["x1", "x2"], ["y1"]]
    assert unattributed == ["z"]

    ring = groups[0]
    assert ring.dup_cluster_overlap == 1.0
    assert ring.domain_distribution == {"camp.net": 1.0}
    assert ring.technique_distribution == {"doubt": 1.0}
    assert ring.hour_histogram[10] == pytest.approx(1.0)
    assert sum(ring.hour_histogram) == pytest.approx(1.0)
    assert groups[1].dup_cluster_overlap == 0.0
