import math

import pytest

from core.types_narrative import Narrative, SourceLists
from features.agenda_features import (
    TechniqueDetector, detect_techniques, fuse_agenda, narrative_agenda, narrative_documents,
)

from tests.conftest import make_post


def _spans(hits):
    return [(h.technique, h.start, h.end, h.matched_cue) for h in hits]


def test_detects_each_technique(lexicon):
    text = "Wake up! The so-called experts are media puppets. Disgraceful."
    hits = detect_techniques("d1", text, lexicon)
    assert _spans(hits) == [
        ("slogans", 0, 7, "wake up"),
        ("doubt", 13, 22, "so-called"),
        ("name_calling", 35, 48, "media puppets"),
        ("loaded_language", 50, 61, "disgraceful"),
    ]
    assert all(h.doc_id == "d1" for h in hits)


def test_byte_offsets_on_non_ascii(lexicon):
    text = "naïve ünïcode DISGRACEFUL"
    hits = detect_techniques("d", text, lexicon)
    assert len(hits) == 1
    hit = hits[0]
    raw = text.encode("utf-8")
    assert (hit.start, hit.end) == (17, 28)
    assert raw[hit.start:hit.end].decode("utf-8").casefold() == hit.matched_cue


def test_leftmost_longest_without_overlap():
    hits = detect_techniques("d", "the shocking truth is out", {"t": ["shocking", "shocking truth", "truth"]})
    assert _spans(hits) == [("t", 4, 18, "shocking truth")]


def test_same_span_counts_for_each_technique():
    hits = detect_techniques("d", "wake up now", {"a": ["wake up"], "b": ["Wake Up"]})
    assert [h.technique for h in hits] == ["a", "b"]


def test_word_boundaries_and_empty_lexicon(lexicon):
    assert detect_techniques("d", "wakeup and so-calledness", lexicon) == []
    assert detect_techniques("d", "Wake up!", {}) == []


def test_fuse_agenda_formula():
    hits = detect_techniques("d", "wake up, so-called", {
        "slogans": ["wake up"], "doubt": ["so-called"], "a": ["x"], "b": ["y"]})
    score = fuse_agenda("n", hits, n_tokens=100, n_techniques=4, lam=0.5)
    assert score.hits_per_100_tokens == pytest.approx(2.0)
    assert score.technique_diversity == pytest.approx(0.5)
    assert score.score == pytest.approx(0.5 * (1 - math.exp(-1.0)) + 0.25)
    assert fuse_agenda("n", [], 0, 0).score == 0.0


def test_agenda_monotone_in_hits(lexicon):
    detector = TechniqueDetector(lexicon)
    previous = -1.0
    text = ""
    for _ in range(6):
        text += " disgraceful plain words here"
        hits = detector.detect("d", text)
        score = fuse_agenda("n", hits, 200, len(detector.techniques)).score
        assert score >= previous
        previous = score


def test_narrative_documents_include_articles_once(source_lists):
    url = "https://x.org/a"
    posts = [make_post("p1", text="read this", urls=[url]), make_post("p2", text="and this", urls=[url])]
    by_id = {p.post_id: p for p in posts}
    narrative = Narrative("nar-1", ["c"], post_ids=["p1", "p2"])
    docs = narrative_documents(narrative, by_id, {url: "What are they hiding? Wake up."})
    assert [d for d, _ in docs] == ["p1", "p2", url]

    lists = SourceLists(propaganda_lexicon=source_lists.propaganda_lexicon, articles={url: "What are they hiding? Wake up."})
    score, hits = narrative_agenda(narrative, by_id, lists)
    assert {h.doc_id for h in hits} == {url}
    assert score.n_hits == 2
    assert score.n_tokens == 2 + 2 + 6
    assert score.technique_diversity == pytest.approx(2 / 4)
