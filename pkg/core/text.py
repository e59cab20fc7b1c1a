"""Shared text helpers: URL spotting and token normalization."""

import re
import unicodedata
from typing import List

# Loose URL spotting in free text; canonicalization decides validity.
URL_RE = re.compile(r"https?://[^\s<>\"'()\[\]{}]+", re.IGNORECASE)
_TRAILING_PUNCT = ".,;:!?"


def find_urls(text: str) -> List[str]:
    """Return raw URL strings found in text, trailing sentence punctuation removed."""
    return [m.group(0).rstrip(_TRAILING_PUNCT) for m in URL_RE.finditer(text)]


def blank_urls(text: str) -> str:
    """Replace URLs by spaces of equal length so other scanners ignore them."""
    return URL_RE.sub(lambda m: " " * len(m.group(0)), text)


def _strip_punct(token: str) -> str:
    return "".join(ch for ch in token if not unicodedata.category(ch).startswith("P"))


def tokenize(text: str) -> List[str]:
    """Case-fold, strip punctuation and split on whitespace.

    Used for shingling and for the token counts behind agenda rates.
    """
    tokens = (_strip_punct(tok) for tok in text.casefold().split())
    return [tok for tok in tokens if tok]
