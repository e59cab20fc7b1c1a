"""Agenda features: propaganda-technique cue detection and the agenda score.

Cues are literal phrases or simple patterns where `*` stands for exactly one
word. Matching is case-insensitive and word-boundary anchored; per technique
the leftmost-longest non-overlapping matches are kept. Spans are UTF-8 byte
offsets into the document.
"""

import math
import re
from typing import Dict, List, Mapping, Optional, Pattern, Sequence, Tuple

from core.config import AGENDA_LAMBDA
from core.text import tokenize
from core.types_narrative import AgendaScore, Narrative, Post, SourceLists, TechniqueHit


def compile_cue(cue: str) -> Pattern:
    words = [r"\w+" if word == "*" else re.escape(word) for word in cue.split()]
    return re.compile(r"(?<!\w)" + r"\s+".join(words) + r"(?!\w)", re.IGNORECASE)


class TechniqueDetector:
    """Lexicon compiled once, applied to many documents."""

    def __init__(self, lexicon: Mapping[str, Sequence[str]]):
        self.techniques = sorted(lexicon)
        self.patterns: Dict[str, List[Pattern]] = {
            technique: [compile_cue(c) for c in lexicon[technique] if c.strip()]
            for technique in self.techniques
        }

    def detect(self, doc_id: str, text: str) -> List[TechniqueHit]:
        hits: List[TechniqueHit] = []
        for technique in self.techniques:
            candidates: List[Tuple[int, int]] = []
            for pattern in self.patterns[technique]:
                candidates.extend(m.span() for m in pattern.finditer(text))
            # leftmost first, longest among equal starts
            candidates.sort(key=lambda span: (span[0], -span[1]))
            last_end = -1
            for start, end in candidates:
                if start < last_end or end == start:
                    continue
                last_end = end
                hits.append(TechniqueHit(
                    doc_id=doc_id,
                    technique=technique,
                    start=len(text[:start].encode("utf-8")),
                    end=len(text[:end].encode("utf-8")),
                    matched_cue=text[start:end].casefold(),
                ))
        hits.sort(key=lambda h: (h.start, h.end, h.technique))
        return hits


def detect_techniques(doc_id: str, text: str, lexicon: Mapping[str, Sequence[str]]) -> List[TechniqueHit]:
    """All technique hits in one document; an empty lexicon yields none."""
    return TechniqueDetector(lexicon).detect(doc_id, text)


def fuse_agenda(
    narrative_id: str,
    hits: Sequence[TechniqueHit],
    n_tokens: int,
    n_techniques: int,
    lam: float = AGENDA_LAMBDA,
) -> AgendaScore:
    """
    score = 0.5*(1 - exp(-lam*rate)) + 0.5*diversity

    rate is hits per 100 tokens over the narrative's documents, diversity the
    share of lexicon techniques seen at least once.
    """
    rate = 100.0 * len(hits) / n_tokens if n_tokens > 0 else 0.0
    diversity = len({h.technique for h in hits}) / n_techniques if n_techniques > 0 else 0.0
    score = 0.5 * (1.0 - math.exp(-lam * rate)) + 0.5 * diversity
    return AgendaScore(
        narrative_id=narrative_id,
        hits_per_100_tokens=rate,
        technique_diversity=diversity,
        score=min(1.0, max(0.0, score)),
        n_hits=len(hits),
        n_tokens=n_tokens,
    )


def narrative_documents(
    narrative: Narrative,
    posts_by_id: Mapping[str, Post],
    articles: Mapping[str, str],
) -> List[Tuple[str, str]]:
    """(doc_id, text) for the narrative's posts plus each shared pre-fetched article once."""
    docs: List[Tuple[str, str]] = []
    shared: set = set()
    for pid in narrative.post_ids:
        post = posts_by_id.get(pid)
        if post is None:
            continue
        docs.append((post.post_id, post.text))
        shared.update(u for u in post.urls if u in articles)
    docs.extend((url, articles[url]) for url in sorted(shared))
    return docs


def narrative_agenda(
    narrative: Narrative,
    posts_by_id: Mapping[str, Post],
    lists: SourceLists,
    detector: Optional[TechniqueDetector] = None,
    lam: float = AGENDA_LAMBDA,
) -> Tuple[AgendaScore, List[TechniqueHit]]:
    detector = detector or TechniqueDetector(lists.propaganda_lexicon)
    hits: List[TechniqueHit] = []
    n_tokens = 0
    for doc_id, text in narrative_documents(narrative, posts_by_id, lists.articles):
        hits.extend(detector.detect(doc_id, text))
        n_tokens += len(tokenize(text))
    score = fuse_agenda(narrative.narrative_id, hits, n_tokens, len(detector.techniques), lam)
    return score, hits
