import io
import json

import pytest

import main
from core.config import SCHEMA_VERSION
from core.report_writer import ReportWriter

SCENARIO = {
    "seed": 11, "n_organic_accounts": 40, "n_campaigns": 2, "n_campaign_accounts": 6,
    "duration_hours": 24.0, "shift_starts": [9.5], "organic_rate_per_hour": 0.3,
}

ARTIFACTS = ("posts.json", "narratives.json", "assessments.json", "attribution.json", "impact.json", "report.json")


@pytest.fixture(scope="module")
def synth_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("synth")
    scenario = out / "scenario.json"
    scenario.write_text(json.dumps(SCENARIO), encoding="utf-8")
    assert main.run(["synth", "--out", str(out), "--scenario", str(scenario)]) == 0
    return out


@pytest.fixture(scope="module")
def run_dir(synth_dir, tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    code = main.run(["run-all", "--config", str(synth_dir / "pipeline.json"), "--out", str(out),
                     "--threads", "1", "--quiet"])
    assert code == 0
    return out


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main.run(["bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main.run(["calibrate"])
    assert exc.value.code == 2


def test_pipeline_errors_exit_1(tmp_path, capsys):
    assert main.run(["ingest", "--out", str(tmp_path)]) == 1
    assert "no inputs configured" in capsys.readouterr().err
    assert main.run(["classify", "--out", str(tmp_path)]) == 1
    assert "posts.json" in capsys.readouterr().err
    assert main.run(["narratives", "--out", str(tmp_path), "--window", "600", "--stride", "900"]) == 1


def test_synth_writes_corpus(synth_dir):
    for name in ("posts_alpha.jsonl", "posts_beta.jsonl", "posts_gamma.jsonl", "ground_truth.json", "pipeline.json"):
        assert (synth_dir / name).exists()


def test_run_all_writes_versioned_artifacts(run_dir):
    fingerprints = set()
    for name in ARTIFACTS:
        doc = json.loads((run_dir / name).read_text(encoding="utf-8"))
        assert doc["schema_version"] == SCHEMA_VERSION
        assert doc["schema"] == name[:-len(".json")]
        fingerprints.add(doc["config_fingerprint"])
    assert len(fingerprints) == 1
    assert (run_dir / "narratives.graphml").exists()

    report = json.loads((run_dir / "report.json").read_text(encoding="utf-8"))
    assert report["corpus"]["n_posts"] > 0
    assert report["corpus"]["platforms"] == ["alpha", "beta", "gamma"]
    assert len(report["narratives"]) == len(report["assessments"])
    assert "threads" not in report["config"]
    for assessment in report["assessments"]:
        assert 0.0 <= assessment["fused"] <= 1.0


def test_stages_can_run_one_at_a_time(synth_dir, run_dir, tmp_path):
    config = str(synth_dir / "pipeline.json")
    for stage in ("ingest", "narratives", "classify", "attribute", "impact"):
        assert main.run([stage, "--config", config, "--out", str(tmp_path), "--threads", "1"]) == 0
    for name in ARTIFACTS[:-1]:
        assert (tmp_path / name).read_bytes() == (run_dir / name).read_bytes()


def test_report_independent_of_threads(synth_dir, run_dir, tmp_path):
    code = main.run(["run-all", "--config", str(synth_dir / "pipeline.json"), "--out", str(tmp_path),
                     "--threads", "4", "--quiet"])
    assert code == 0
    assert (tmp_path / "report.json").read_bytes() == (run_dir / "report.json").read_bytes()


def test_evaluate_and_calibrate(synth_dir, run_dir, capsys):
    config = str(synth_dir / "pipeline.json")
    truth = str(synth_dir / "ground_truth.json")

    assert main.run(["evaluate", "--config", config, "--out", str(run_dir), "--ground-truth", truth]) == 0
    assert "precision" in capsys.readouterr().out
    evaluation = json.loads((run_dir / "evaluation.json").read_text(encoding="utf-8"))
    assert evaluation["n_campaigns"] == 2
    assert 0.0 <= evaluation["recall"] <= 1.0

    assert main.run(["calibrate", "--config", config, "--out", str(run_dir), "--ground-truth", truth]) == 0
    fit = json.loads((run_dir / "calibration.json").read_text(encoding="utf-8"))["calibration"]
    assert set(fit["weights"]) == {"deception", "coordination", "agenda"}
    assert all(w >= 0 for w in fit["weights"].values())


def test_terminal_summary(run_dir):
    report = json.loads((run_dir / "report.json").read_text(encoding="utf-8"))
    stream = io.StringIO()
    ReportWriter(stream).print_summary(report, str(run_dir / "report.json"), limit=3)
    text = stream.getvalue()
    assert "NARRATIVE ASSESSMENT RESULTS" in text
    assert report["config_fingerprint"][:16] in text
    assert "impact_caveat" in text


def test_one_line_summary_names_strong_axes():
    writer = ReportWriter(io.StringIO())
    line = writer.generate_summary(
        {"fused": 0.91, "deception": 0.2, "coordination": 0.9, "agenda": 0.6, "annotations": ["no_urls"]})
    assert line == "Orchestration score 0.91 (Very High). driven by coordination 0.90, agenda 0.60. notes: no_urls."
    assert writer.severity(0.1) == "Very Low"
