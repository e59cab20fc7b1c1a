"""End-to-end campaign recovery on the full synthetic scenario. Run with `pytest -m slow`."""

import json

import pytest

import main

pytestmark = pytest.mark.slow

SCENARIO = {
    "seed": 2024, "n_organic_accounts": 200, "n_campaigns": 10, "n_campaign_accounts": 8,
    "n_platforms": 3, "duration_hours": 72.0, "organic_rate_per_hour": 3.3,
}


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("scenario")
    scenario = out / "scenario.json"
    scenario.write_text(json.dumps(SCENARIO), encoding="utf-8")
    assert main.run(["synth", "--out", str(out), "--scenario", str(scenario)]) == 0
    return out


def _run_all(corpus_dir, out, threads):
    code = main.run(["run-all", "--config", str(corpus_dir / "pipeline.json"), "--out", str(out),
                     "--threads", str(threads), "--quiet"])
    assert code == 0
    return out


def test_planted_campaigns_are_recovered(corpus_dir, tmp_path):
    out = _run_all(corpus_dir, tmp_path, threads=1)
    report = json.loads((out / "report.json").read_text(encoding="utf-8"))
    assert 40_000 <= report["corpus"]["n_posts"] <= 60_000

    truth = str(corpus_dir / "ground_truth.json")
    assert main.run(["evaluate", "--config", str(corpus_dir / "pipeline.json"), "--out", str(out),
                     "--ground-truth", truth]) == 0
    evaluation = json.loads((out / "evaluation.json").read_text(encoding="utf-8"))
    assert evaluation["n_campaigns"] == 10
    assert evaluation["precision"] >= 0.9
    assert evaluation["recall"] >= 0.8


def test_report_bytes_equal_across_thread_counts(corpus_dir, tmp_path):
    serial = _run_all(corpus_dir, tmp_path / "t1", threads=1)
    threaded = _run_all(corpus_dir, tmp_path / "t8", threads=8)
    assert (serial / "report.json").read_bytes() == (threaded / "report.json").read_bytes()
