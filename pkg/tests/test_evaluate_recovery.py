from core.classify import ORCHESTRATED, ORGANIC
from core.synthgen import ORGANIC_LABEL
from core.types_narrative import Narrative
from tools.evaluate_recovery import evaluate_recovery, matched_campaign, print_results

TRUTH = {
    "posts": {
        "c1a": "campaign_1", "c1b": "campaign_1", "c2a": "campaign_2", "c2b": "campaign_2",
        "o1": ORGANIC_LABEL, "o2": ORGANIC_LABEL, "o3": ORGANIC_LABEL,
    },
    "campaigns": {"campaign_1": {}, "campaign_2": {}},
}


def _case():
    narratives = [
        Narrative("n-tp", ["c"], post_ids=["c1a", "c1b", "o1"]),
        Narrative("n-fn", ["c"], post_ids=["c2a", "c2b"]),
        Narrative("n-fp", ["c"], post_ids=["o1", "o2"]),
        Narrative("n-tn", ["c"], post_ids=["o3"]),
        Narrative("n-unassessed", ["c"], post_ids=["c2a"]),
    ]
    assessments = [
        {"narrative_id": "n-tp", "label": ORCHESTRATED},
        {"narrative_id": "n-fn", "label": ORGANIC},
        {"narrative_id": "n-fp", "label": ORCHESTRATED},
        {"narrative_id": "n-tn", "label": ORGANIC},
    ]
    return narratives, assessments


def test_matched_campaign_needs_half_the_posts():
    assert matched_campaign(["c1a", "o1"], TRUTH) == "campaign_1"
    assert matched_campaign(["c1a", "o1", "o2"], TRUTH) is None
    assert matched_campaign(["c1a", "c2a"], TRUTH) == "campaign_1"
    assert matched_campaign([], TRUTH) is None


def test_confusion_counts_and_recall():
    results = evaluate_recovery(*_case(), TRUTH)
    assert (results["tp"], results["fp"], results["fn"], results["tn"]) == (1, 1, 1, 1)
    assert results["precision"] == 0.5
    assert results["narrative_recall"] == 0.5
    assert results["recall"] == 0.5
    assert results["n_narratives"] == 4
    assert [row["recovered"] for row in results["per_campaign"]] == [True, False]
    assert results["per_campaign"][0]["posts_in_orchestrated"] == 3


def test_no_narratives():
    results = evaluate_recovery([], [], TRUTH)
    assert results["precision"] == 0.0 and results["recall"] == 0.0
    assert results["campaigns_recovered"] == 0


def test_print_results(capsys):
    print_results(evaluate_recovery(*_case(), TRUTH))
    out = capsys.readouterr().out
    assert "CAMPAIGN RECOVERY" in out
    assert "TP 1  FP 1  FN 1  TN 1" in out
    assert "Recall:           0.5000 (1/2 campaigns)" in out
    assert "campaign_2" in out
