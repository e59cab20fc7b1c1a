"""
Campaign recovery evaluation against a synthgen ground truth.

A narrative matches a campaign when at least half of its posts carry that
campaign id. Precision is taken over narratives labeled orchestrated;
recall over planted campaigns (a campaign is recovered when at least one
orchestrated narrative matches it).

    python tools/evaluate_recovery.py --run-dir run_out --ground-truth synth_out/ground_truth.json
"""

import argparse
import json
import os
import sys
from typing import Any, Dict, List, Mapping, Optional, Sequence

import pandas as pd
from sklearn.metrics import confusion_matrix, precision_score, recall_score

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.classify import ORCHESTRATED
from core.synthgen import ORGANIC_LABEL
from core.types_narrative import Narrative

MATCH_FRACTION = 0.5


def matched_campaign(post_ids: Sequence[str], truth: Mapping[str, Any]) -> Optional[str]:
    """Campaign carried by at least half of the posts, if any."""
    labels = truth.get("posts", {})
    if not post_ids:
        return None
    counts: Dict[str, int] = {}
    for pid in post_ids:
        label = labels.get(pid)
        if label is not None and label != ORGANIC_LABEL:
            counts[label] = counts.get(label, 0) + 1
    for campaign in sorted(counts, key=lambda c: (-counts[c], c)):
        if counts[campaign] >= MATCH_FRACTION * len(post_ids):
            return campaign
    return None


def evaluate_recovery(
    narratives: Sequence[Narrative],
    assessments: Sequence[Mapping[str, Any]],
    truth: Mapping[str, Any],
) -> Dict[str, Any]:
    """
    Precision/recall of orchestrated labels against planted campaigns.

    Returns:
        Dict with precision, recall (campaign level), narrative-level
        recall, confusion counts and a per-campaign table
    """
    labels = {a["narrative_id"]: a["label"] for a in assessments}
    rows: List[Dict[str, Any]] = []
    for n in narratives:
        if n.narrative_id not in labels:
            continue
        rows.append({
            "narrative_id": n.narrative_id,
            "campaign": matched_campaign(n.post_ids, truth),
            "predicted": labels[n.narrative_id] == ORCHESTRATED,
            "n_posts": len(n.post_ids),
        })
    df = pd.DataFrame(rows, columns=["narrative_id", "campaign", "predicted", "n_posts"])
    y_true = df["campaign"].notna().astype(int).tolist()
    y_pred = df["predicted"].astype(int).tolist()

    if rows:
        tn, fp, fn, tp = confusion_matrix(y_true, y_pred, labels=[0, 1]).ravel()
    else:
        tn = fp = fn = tp = 0
    precision = float(precision_score(y_true, y_pred, zero_division=0)) if rows else 0.0
    narrative_recall = float(recall_score(y_true, y_pred, zero_division=0)) if rows else 0.0

    planted = sorted(truth.get("campaigns", {}))
    table = []
    for campaign in planted:
        mine = df[df["campaign"] == campaign]
        hits = mine[mine["predicted"].astype(bool)]
        table.append({
            "campaign": campaign,
            "narratives": int(len(mine)),
            "orchestrated": int(len(hits)),
            "posts_in_orchestrated": int(hits["n_posts"].sum()) if len(hits) else 0,
            "recovered": bool(len(hits)),
        })
    recovered = sum(1 for r in table if r["recovered"])
    recall = recovered / len(planted) if planted else 0.0

    return {
        "precision": precision,
        "recall": recall,
        "narrative_recall": narrative_recall,
        "tp": int(tp), "fp": int(fp), "fn": int(fn), "tn": int(tn),
        "n_narratives": len(rows),
        "n_campaigns": len(planted),
        "campaigns_recovered": recovered,
        "per_campaign": table,
        "match_fraction": MATCH_FRACTION,
    }


def print_results(results: Mapping[str, Any]) -> None:
    print("\n" + "=" * 60)
    print("CAMPAIGN RECOVERY")
    print("=" * 60)
    print(f"Narratives assessed: {results['n_narratives']}")
    print(f"  TP {results['tp']}  FP {results['fp']}  FN {results['fn']}  TN {results['tn']}")
    print(f"Precision:        {results['precision']:.4f}")
    print(f"Recall:           {results['recall']:.4f} "
          f"({results['campaigns_recovered']}/{results['n_campaigns']} campaigns)")
    print(f"Narrative recall: {results['narrative_recall']:.4f}")
    if results["per_campaign"]:
        print()
        print(pd.DataFrame(results["per_campaign"]).to_string(index=False))
    print("=" * 60)


def main():
    """Main entry point."""
    from app.config import load_config
    from app.service import ASSESSMENTS, load_narratives
    from core.artifacts import read_artifact
    from core.errors import PipelineError
    from core.synthgen import load_ground_truth

    parser = argparse.ArgumentParser(description="Evaluate campaign recovery against synthetic ground truth")
    parser.add_argument("--run-dir", type=str, required=True, help="Directory holding narratives.json and assessments.json")
    parser.add_argument("--ground-truth", type=str, required=True, help="ground_truth.json written by synth")
    parser.add_argument("--json", type=str, default=None, help="Optional path to save the results")
    args = parser.parse_args()

    try:
        cfg = load_config(None, {"output_dir": args.run_dir})
        truth = load_ground_truth(args.ground_truth)
        _, narratives = load_narratives(cfg)
        doc = read_artifact(os.path.join(args.run_dir, ASSESSMENTS), "assessments")
    except PipelineError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        sys.exit(1)

    results = evaluate_recovery(narratives, doc["assessments"], truth)
    print_results(results)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as f:
            json.dump(results, f, indent=2, sort_keys=True)
        print(f"\nResults saved to: {args.json}")


if __name__ == "__main__":
    main()
