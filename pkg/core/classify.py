"""
Narrative classification: logistic fusion of the three axis scores.

fused = logistic(w_d*deception + w_c*coordination + w_a*agenda + bias); a
narrative is labeled orchestrated_inauthentic when fused >= the decision
threshold. Weights can be re-fit on labeled synthetic narratives with
calibrate(); fitted weights are projected onto w >= 0 so that more evidence on
any axis never reads as more organic.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.special import expit

from core.config import (
    ANNOTATION_HIGH, ANNOTATION_LOW, CALIBRATION_EPOCHS, CALIBRATION_L2,
    CALIBRATION_LEARNING_RATE, DECISION_THRESHOLD, FUSION_BIAS, FUSION_WEIGHTS,
    MAX_EVIDENCE_ITEMS, MIN_TRAINING_NARRATIVES, SEED,
)
from core.errors import DegenerateLabels
from core.types_narrative import NarrativeAssessment

logger = logging.getLogger(__name__)

ORGANIC = "organic"
ORCHESTRATED = "orchestrated_inauthentic"
AXES = ("deception", "coordination", "agenda")

MISINFORMATION_LIKE = "misinformation_like"
AGENDA_WITHOUT_DECEPTION = "agenda_without_deception"


class NarrativeClassifier:
    """
    Scores axis triples with fixed fusion weights.

    Defaults are the shipped weights; a calibration result can replace them.
    """

    def __init__(
        self,
        weights: Optional[Mapping[str, float]] = None,
        bias: float = FUSION_BIAS,
        decision_threshold: float = DECISION_THRESHOLD,
    ):
        self.weights = dict(FUSION_WEIGHTS)
        self.weights.update(weights or {})
        self.bias = float(bias)
        self.decision_threshold = float(decision_threshold)

    def fused_score(self, deception: float, coordination: float, agenda: float) -> float:
        z = (
            self.weights["deception"] * deception
            + self.weights["coordination"] * coordination
            + self.weights["agenda"] * agenda
            + self.bias
        )
        return float(expit(z))

    def get_label(self, fused: float) -> str:
        return ORCHESTRATED if fused >= self.decision_threshold else ORGANIC


def fuse(
    deception: float,
    coordination: float,
    agenda: float,
    weights: Optional[Mapping[str, float]] = None,
    bias: float = FUSION_BIAS,
) -> Tuple[float, str]:
    """Fused score and label for one axis triple."""
    classifier = NarrativeClassifier(weights, bias)
    fused = classifier.fused_score(deception, coordination, agenda)
    return fused, classifier.get_label(fused)


# ---------------------------------------------------------------- calibration

@dataclass
class CalibrationResult:
    weights: Dict[str, float]
    bias: float
    training_accuracy: float
    n: int
    seed: int
    projected: List[str] = field(default_factory=list)  # axes clipped to 0 after the fit

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CalibrationResult":
        return cls(**data)


def logistic_loss_and_grad(
    theta: np.ndarray,
    X: np.ndarray,
    y: np.ndarray,
    l2: float = CALIBRATION_L2,
) -> Tuple[float, np.ndarray]:
    """
    Mean log-loss with an L2 penalty on the weights (not the bias).

    Args:
        theta: weights followed by the bias, shape (d + 1,)
        X: axis scores, shape (n, d)
        y: 0/1 labels, shape (n,)

    Returns:
        (loss, gradient with respect to theta)
    """
    w, b = theta[:-1], theta[-1]
    z = X @ w + b
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * l2 * np.dot(w, w))
    residual = expit(z) - y
    grad = np.empty_like(theta, dtype=float)
    grad[:-1] = X.T @ residual / len(y) + l2 * w
    grad[-1] = residual.mean()
    return loss, grad


def calibrate(
    X: Sequence[Sequence[float]],
    y: Sequence[int],
    seed: int = SEED,
    learning_rate: float = CALIBRATION_LEARNING_RATE,
    epochs: int = CALIBRATION_EPOCHS,
    l2: float = CALIBRATION_L2,
) -> CalibrationResult:
    """
    Fit fusion weights by full-batch gradient descent.

    Args:
        X: rows of (deception, coordination, agenda)
        y: 1 for orchestrated, 0 for organic

    Raises:
        DegenerateLabels: only one class present
    """
    X = np.asarray(X, dtype=float).reshape(-1, len(AXES))
    y = np.asarray(y, dtype=float)
    if len(y) == 0 or len(np.unique(y)) < 2:
        raise DegenerateLabels("calibration needs both organic and orchestrated narratives")
    if len(y) < MIN_TRAINING_NARRATIVES:
        logger.warning("calibrating on %d narratives (fewer than %d)", len(y), MIN_TRAINING_NARRATIVES)

    rng = np.random.default_rng(seed)
    theta = np.append(rng.normal(0.0, 0.01, size=len(AXES)), 0.0)
    for _ in range(epochs):
        _, grad = logistic_loss_and_grad(theta, X, y, l2)
        theta -= learning_rate * grad

    projected = [axis for axis, w in zip(AXES, theta[:-1]) if w < 0]
    if projected:
        logger.warning("negative fusion weights projected to 0: %s", ", ".join(projected))
        theta[:-1] = np.maximum(theta[:-1], 0.0)

    predictions = expit(X @ theta[:-1] + theta[-1]) >= DECISION_THRESHOLD
    accuracy = float(np.mean(predictions == (y == 1)))
    logger.info("calibrated on %d narratives, training accuracy %.3f", len(y), accuracy)

    return CalibrationResult(
        weights={axis: float(w) for axis, w in zip(AXES, theta[:-1])},
        bias=float(theta[-1]),
        training_accuracy=accuracy,
        n=int(len(y)),
        seed=int(seed),
        projected=projected,
    )


# ---------------------------------------------------------------- assessment

def annotate(deception: float, coordination: float, agenda: float) -> List[str]:
    """Descriptive annotations; never change the label."""
    notes: List[str] = []
    if deception >= ANNOTATION_HIGH and coordination <= ANNOTATION_LOW:
        notes.append(MISINFORMATION_LIKE)
    if agenda >= ANNOTATION_HIGH and deception <= ANNOTATION_LOW:
        notes.append(AGENDA_WITHOUT_DECEPTION)
    return notes


def cap_evidence(items: Sequence[Any], limit: int = MAX_EVIDENCE_ITEMS) -> Dict[str, Any]:
    return {"total": len(items), "items": list(items[:limit])}


def assess_narrative(
    narrative_id: str,
    feature_vector: Mapping[str, float],
    classifier: NarrativeClassifier,
    config_fingerprint: str,
    annotations: Sequence[str] = (),
    evidence: Optional[Dict[str, Any]] = None,
) -> NarrativeAssessment:
    """Assessment from a feature vector; the axis scores are read back from it."""
    deception = feature_vector["axis_deception"]
    coordination = feature_vector["axis_coordination"]
    agenda = feature_vector["axis_agenda"]
    fused = classifier.fused_score(deception, coordination, agenda)
    notes = sorted(set(annotations) | set(annotate(deception, coordination, agenda)))
    return NarrativeAssessment(
        narrative_id=narrative_id,
        deception=deception,
        coordination=coordination,
        agenda=agenda,
        fused=fused,
        label=classifier.get_label(fused),
        feature_vector=dict(feature_vector),
        config_fingerprint=config_fingerprint,
        annotations=notes,
        evidence=evidence or {},
    )
