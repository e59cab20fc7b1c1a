"""Narrative assessment pipeline modules."""
