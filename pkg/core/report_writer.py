"""
Human-readable summaries of an assessment report.

The JSON report is the artifact; this module only renders it for the
terminal and for a one-line description per narrative.
"""

import os
import sys
from typing import Any, Dict, List, Optional, TextIO


class ReportWriter:
    """Renders report documents built by app.result_formatter."""

    def __init__(self, stream: Optional[TextIO] = None):
        self.stream = stream or sys.stdout

    @staticmethod
    def severity(fused: float) -> str:
        if fused >= 0.8:
            return "Very High"
        if fused >= 0.6:
            return "High"
        if fused >= 0.4:
            return "Moderate"
        if fused >= 0.2:
            return "Low"
        return "Very Low"

    def generate_summary(self, assessment: Dict[str, Any]) -> str:
        """
        One-sentence description of a narrative assessment.

        Args:
            assessment: NarrativeAssessment as stored in the report

        Returns:
            Summary naming the fused score and the strongest axes
        """
        fused = assessment["fused"]
        axes = sorted(
            (("deception", assessment["deception"]), ("coordination", assessment["coordination"]),
             ("agenda", assessment["agenda"])),
            key=lambda kv: -kv[1],
        )
        parts = [f"Orchestration score {fused:.2f} ({self.severity(fused)})"]
        strong = [f"{name} {value:.2f}" for name, value in axes if value >= 0.5]
        if strong:
            parts.append("driven by " + ", ".join(strong))
        if assessment.get("annotations"):
            parts.append("notes: " + ", ".join(assessment["annotations"]))
        return ". ".join(parts) + "."

    def print_summary(self, report: Dict[str, Any], report_path: str, limit: int = 10) -> None:
        """Terminal printout of a finished run."""
        out = self.stream
        assessments: List[Dict[str, Any]] = report.get("assessments", [])
        orchestrated = [a for a in assessments if a["label"] == "orchestrated_inauthentic"]

        print("\n" + "=" * 80, file=out)
        print("NARRATIVE ASSESSMENT RESULTS", file=out)
        print("=" * 80, file=out)
        print(f"Report: {os.path.basename(report_path)}", file=out)
        print(f"Config fingerprint: {report.get('config_fingerprint', '')[:16]}", file=out)
        corpus = report.get("corpus", {})
        print(f"Posts: {corpus.get('n_posts', 0)}  Narratives: {len(assessments)}  "
              f"Orchestrated: {len(orchestrated)}", file=out)
        print(file=out)

        print("TOP NARRATIVES:", file=out)
        print("-" * 80, file=out)
        ranked = sorted(assessments, key=lambda a: (-a["fused"], a["narrative_id"]))[:limit]
        for i, a in enumerate(ranked, 1):
            print(f"  {i:2d}. {a['narrative_id']}  fused {a['fused']:.3f}  "
                  f"d={a['deception']:.2f} c={a['coordination']:.2f} a={a['agenda']:.2f}  "
                  f"{a['label']}", file=out)
            print(f"      {self.generate_summary(a)}", file=out)
        print(file=out)

        groups = report.get("attribution", {}).get("groups", [])
        if groups:
            print("CANDIDATE ACTOR GROUPS:", file=out)
            print("-" * 80, file=out)
            for g in groups[:limit]:
                print(f"  {g['group_id']}: {len(g['account_ids'])} accounts, "
                      f"dup overlap {g['dup_cluster_overlap']:.2f}", file=out)
            print(file=out)

        notes: Dict[str, str] = report.get("notes", {})
        if notes:
            print("NOTES:", file=out)
            print("-" * 80, file=out)
            for key in sorted(notes):
                print(f"  {key}: {notes[key]}", file=out)
        print("=" * 80 + "\n", file=out)
