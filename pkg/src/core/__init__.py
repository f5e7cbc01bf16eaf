"""Scoring library: tests, compressors, deficiency bounds, causal models and attribution."""
