"""Per-axis narrative feature extractors."""
